// Copyright 2026 The adbench Authors.
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

#ifndef ADBENCH_PARALLEL_HPP_
#define ADBENCH_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace adbench {

/// Calls fn(i) for i in [0, n) on up to `jobs` threads (0 means the number
/// of logical CPUs). Blocks until all calls return. The first exception
/// thrown by any call is rethrown after the others have finished; indices
/// not yet started when it was thrown are skipped.
void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn);

std::size_t default_jobs();

}  // namespace adbench

#endif  // ADBENCH_PARALLEL_HPP_
