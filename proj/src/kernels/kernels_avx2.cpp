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

// AVX2 + FMA variants. Built with -mavx2 -mfma for this file only; only
// reached after a runtime CPU check in dispatch.cpp.
#include <immintrin.h>

#include <cmath>

#include "kinosynth/kernels.hpp"

namespace kinosynth::kernels {
namespace {

void RotatePointsAvx2(const ArcBasis& arc, const double* cos_t,
                      const double* sin_t, std::size_t n, double* out_x,
                      double* out_y, double* out_z) {
  double* outs[3] = {out_x, out_y, out_z};
  for (int d = 0; d < 3; ++d) {
    const __m256d base = _mm256_set1_pd(arc.base[d]);
    const __m256d a = _mm256_set1_pd(arc.a[d]);
    const __m256d b = _mm256_set1_pd(arc.b[d]);
    double* out = outs[d];
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
      const __m256d c = _mm256_loadu_pd(cos_t + i);
      const __m256d s = _mm256_loadu_pd(sin_t + i);
      __m256d r = _mm256_fmadd_pd(c, a, base);
      r = _mm256_fmadd_pd(s, b, r);
      _mm256_storeu_pd(out + i, r);
    }
    for (; i < n; ++i) out[i] = arc.base[d] + cos_t[i] * arc.a[d] + sin_t[i] * arc.b[d];
  }
}

void HamiltonianAvx2(const double moment[3], const double axis[3],
                     const double* kx, const double* ky, const double* kz,
                     const double* cx, const double* cy, const double* cz,
                     std::size_t n, double* out) {
  const __m256d m0 = _mm256_set1_pd(moment[0]);
  const __m256d m1 = _mm256_set1_pd(moment[1]);
  const __m256d m2 = _mm256_set1_pd(moment[2]);
  const __m256d w0 = _mm256_set1_pd(axis[0]);
  const __m256d w1 = _mm256_set1_pd(axis[1]);
  const __m256d w2 = _mm256_set1_pd(axis[2]);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d r = _mm256_mul_pd(_mm256_loadu_pd(kx + i), m0);
    r = _mm256_fmadd_pd(_mm256_loadu_pd(ky + i), m1, r);
    r = _mm256_fmadd_pd(_mm256_loadu_pd(kz + i), m2, r);
    r = _mm256_fmadd_pd(_mm256_loadu_pd(cx + i), w0, r);
    r = _mm256_fmadd_pd(_mm256_loadu_pd(cy + i), w1, r);
    r = _mm256_fmadd_pd(_mm256_loadu_pd(cz + i), w2, r);
    _mm256_storeu_pd(out + i, r);
  }
  for (; i < n; ++i) {
    out[i] = kx[i] * moment[0] + ky[i] * moment[1] + kz[i] * moment[2] +
             cx[i] * axis[0] + cy[i] * axis[1] + cz[i] * axis[2];
  }
}

void PointErrorAvx2(const ConstPointsSoA& pts, const double goal[9],
                    std::size_t n, double* out) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d total = _mm256_setzero_pd();
    for (int p = 0; p < 3; ++p) {
      __m256d sq = _mm256_setzero_pd();
      for (int d = 0; d < 3; ++d) {
        const __m256d diff = _mm256_sub_pd(_mm256_loadu_pd(pts.p[3 * p + d] + i),
                                           _mm256_set1_pd(goal[3 * p + d]));
        sq = _mm256_fmadd_pd(diff, diff, sq);
      }
      total = _mm256_add_pd(total, _mm256_sqrt_pd(sq));
    }
    _mm256_storeu_pd(out + i, total);
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

const KernelTable* Avx2KernelsCompiled() {
  static const KernelTable table{"avx2", RotatePointsAvx2, HamiltonianAvx2,
                                 PointErrorAvx2};
  return &table;
}

}  // namespace kinosynth::kernels
