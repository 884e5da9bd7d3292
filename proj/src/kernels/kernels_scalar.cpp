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

#include <cmath>

#include "kinosynth/kernels.hpp"

namespace kinosynth::kernels {
namespace {

void RotatePointsScalar(const ArcBasis& arc, const double* cos_t,
                        const double* sin_t, std::size_t n, double* out_x,
                        double* out_y, double* out_z) {
  for (std::size_t i = 0; i < n; ++i) {
    const double c = cos_t[i], s = sin_t[i];
    out_x[i] = arc.base[0] + c * arc.a[0] + s * arc.b[0];
    out_y[i] = arc.base[1] + c * arc.a[1] + s * arc.b[1];
    out_z[i] = arc.base[2] + c * arc.a[2] + s * arc.b[2];
  }
}

void HamiltonianScalar(const double moment[3], const double axis[3],
                       const double* kx, const double* ky, const double* kz,
                       const double* cx, const double* cy, const double* cz,
                       std::size_t n, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = kx[i] * moment[0] + ky[i] * moment[1] + kz[i] * moment[2] +
             cx[i] * axis[0] + cy[i] * axis[1] + cz[i] * axis[2];
  }
}

void PointErrorScalar(const ConstPointsSoA& pts, const double goal[9],
                      std::size_t n, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    double total = 0.0;
    for (int p = 0; p < 3; ++p) {
      const double dx = pts.p[3 * p][i] - goal[3 * p];
      const double dy = pts.p[3 * p + 1][i] - goal[3 * p + 1];
      const double dz = pts.p[3 * p + 2][i] - goal[3 * p + 2];
      total += std::sqrt(dx * dx + dy * dy + dz * dz);
    }
    out[i] = total;
  }
}

}  // namespace

const KernelTable& ScalarKernels() {
  static const KernelTable table{"scalar", RotatePointsScalar,
                                 HamiltonianScalar, PointErrorScalar};
  return table;
}

}  // namespace kinosynth::kernels
