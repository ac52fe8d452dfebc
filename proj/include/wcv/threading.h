// Copyright 2026 The wcv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef WCV_THREADING_H_
#define WCV_THREADING_H_

#include <functional>

namespace wcv {

// Process-wide worker count used by the layer kernels. Results never depend
// on it: every output element is accumulated by exactly one worker in a fixed
// order.
void SetThreadCount(int threads);
int ThreadCount();

// Runs fn(i) for i in [begin, end), split into contiguous chunks.
void ParallelFor(int begin, int end, const std::function<void(int)>& fn);

}  // namespace wcv

#endif  // WCV_THREADING_H_
