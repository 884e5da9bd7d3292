// Copyright 2026 The kinosynth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// NEON variants for aarch64. Compiles to nothing elsewhere.
#include "kinosynth/kernels.hpp"

#if defined(__aarch64__)
#include <arm_neon.h>

#include <cmath>

namespace kinosynth::kernels {
namespace {

void RotatePointsNeon(const ArcBasis& arc, const double* cos_t,
                      const double* sin_t, std::size_t n, double* out_x,
                      double* out_y, double* out_z) {
  double* outs[3] = {out_x, out_y, out_z};
  for (int d = 0; d < 3; ++d) {
    const float64x2_t base = vdupq_n_f64(arc.base[d]);
    const float64x2_t a = vdupq_n_f64(arc.a[d]);
    const float64x2_t b = vdupq_n_f64(arc.b[d]);
    double* out = outs[d];
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
      float64x2_t r = vfmaq_f64(base, vld1q_f64(cos_t + i), a);
      r = vfmaq_f64(r, vld1q_f64(sin_t + i), b);
      vst1q_f64(out + i, r);
    }
    for (; i < n; ++i) out[i] = arc.base[d] + cos_t[i] * arc.a[d] + sin_t[i] * arc.b[d];
  }
}

void HamiltonianNeon(const double moment[3], const double axis[3],
                     const double* kx, const double* ky, const double* kz,
                     const double* cx, const double* cy, const double* cz,
                     std::size_t n, double* out) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t r = vmulq_n_f64(vld1q_f64(kx + i), moment[0]);
    r = vfmaq_n_f64(r, vld1q_f64(ky + i), moment[1]);
    r = vfmaq_n_f64(r, vld1q_f64(kz + i), moment[2]);
    r = vfmaq_n_f64(r, vld1q_f64(cx + i), axis[0]);
    r = vfmaq_n_f64(r, vld1q_f64(cy + i), axis[1]);
    r = vfmaq_n_f64(r, vld1q_f64(cz + i), axis[2]);
    vst1q_f64(out + i, r);
  }
  for (; i < n; ++i) {
    out[i] = kx[i] * moment[0] + ky[i] * moment[1] + kz[i] * moment[2] +
             cx[i] * axis[0] + cy[i] * axis[1] + cz[i] * axis[2];
  }
}

void PointErrorNeon(const ConstPointsSoA& pts, const double goal[9],
                    std::size_t n, double* out) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t total = vdupq_n_f64(0.0);
    for (int p = 0; p < 3; ++p) {
      float64x2_t sq = vdupq_n_f64(0.0);
      for (int d = 0; d < 3; ++d) {
        const float64x2_t diff =
            vsubq_f64(vld1q_f64(pts.p[3 * p + d] + i), vdupq_n_f64(goal[3 * p + d]));
        sq = vfmaq_f64(sq, diff, diff);
      }
      total = vaddq_f64(total, vsqrtq_f64(sq));
    }
    vst1q_f64(out + i, total);
  }
  for (; i < n; ++i) {
    double total = 0.0;
    for (int p = 0; p < 3; ++p) {
      double sq = 0.0;
      for (int d = 0; d < 3; ++d) {
        const double diff = pts.p[3 * p + d][i] - goal[3 * p + d];
        sq += diff * diff;
      }
      total += std::sqrt(sq);
    }
    out[i] = total;
  }
}

}  // namespace

const KernelTable* NeonKernels() {
  static const KernelTable table{"neon", RotatePointsNeon, HamiltonianNeon,
                                 PointErrorNeon};
  return &table;
}

}  // namespace kinosynth::kernels

#else

namespace kinosynth::kernels {
const KernelTable* NeonKernels() { return nullptr; }
}  // namespace kinosynth::kernels

#endif
