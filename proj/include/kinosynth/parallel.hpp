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

#ifndef KINOSYNTH_PARALLEL_HPP_
#define KINOSYNTH_PARALLEL_HPP_

#include <functional>

namespace kinosynth {

// Resolves a thread count: KINOSYNTH_THREADS wins, then `requested` when
// positive, then the hardware concurrency.
int ResolveThreads(int requested);

// Runs fn(i) for i in [0, n). Callers write results by index, so the outcome
// never depends on scheduling.
void ParallelFor(int n, int threads, const std::function<void(int)>& fn);

}  // namespace kinosynth

#endif  // KINOSYNTH_PARALLEL_HPP_
