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

#ifndef KINOSYNTH_KERNELS_HPP_
#define KINOSYNTH_KERNELS_HPP_

#include <cstddef>
#include <vector>

// Batched inner loops. Plain double arrays in structure-of-arrays form so the
// vector variants do not depend on Eigen's layout.
namespace kinosynth::kernels {

// A point rotating about a fixed axis traces base + cos(θ)·a + sin(θ)·b.
struct ArcBasis {
  double base[3];
  double a[3];
  double b[3];
};

// Three rigid points per sample, each as x/y/z arrays.
struct PointsSoA {
  double* p[9];
};
struct ConstPointsSoA {
  const double* p[9];
};

struct KernelTable {
  const char* name;
  // out_{x,y,z}[i] = arc point at angle i (cos/sin precomputed).
  void (*rotate_points)(const ArcBasis& arc, const double* cos_t,
                        const double* sin_t, std::size_t n, double* out_x,
                        double* out_y, double* out_z);
  // out[i] = k_i·moment + c_i·axis for n certificates.
  void (*hamiltonian)(const double moment[3], const double axis[3],
                      const double* kx, const double* ky, const double* kz,
                      const double* cx, const double* cy, const double* cz,
                      std::size_t n, double* out);
  // out[i] = Σ_points |p_i − goal| over the three points.
  void (*point_error)(const ConstPointsSoA& pts, const double goal[9],
                      std::size_t n, double* out);
};

const KernelTable& ScalarKernels();
// nullptr when the variant is not compiled in or not supported by the CPU.
const KernelTable* Avx2Kernels();
const KernelTable* NeonKernels();

// Best supported table. KINOSYNTH_SIMD=scalar forces the reference path.
const KernelTable& Active();
std::vector<const KernelTable*> Available();

}  // namespace kinosynth::kernels

#endif  // KINOSYNTH_KERNELS_HPP_
