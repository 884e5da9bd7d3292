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

#include <cstdlib>
#include <cstring>

#include "kinosynth/kernels.hpp"

namespace kinosynth::kernels {

#if defined(KINOSYNTH_WITH_AVX2)
const KernelTable* Avx2KernelsCompiled();
#endif

const KernelTable* Avx2Kernels() {
#if defined(KINOSYNTH_WITH_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool ok =
      __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok ? Avx2KernelsCompiled() : nullptr;
#else
  return nullptr;
#endif
}

std::vector<const KernelTable*> Available() {
  std::vector<const KernelTable*> out{&ScalarKernels()};
  if (const KernelTable* t = Avx2Kernels()) out.push_back(t);
  if (const KernelTable* t = NeonKernels()) out.push_back(t);
  return out;
}

const KernelTable& Active() {
  static const KernelTable* table = [] {
    const char* env = std::getenv("KINOSYNTH_SIMD");
    if (env && std::strcmp(env, "scalar") == 0) return &ScalarKernels();
    if (const KernelTable* t = Avx2Kernels()) return t;
    if (const KernelTable* t = NeonKernels()) return t;
    return &ScalarKernels();
  }();
  return *table;
}

}  // namespace kinosynth::kernels
