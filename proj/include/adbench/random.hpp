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

#ifndef ADBENCH_RANDOM_HPP_
#define ADBENCH_RANDOM_HPP_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string_view>

namespace adbench {

/// Seed for every randomized operation. Identical seed and inputs give
/// bit-identical outputs.
struct Seed {
  std::uint64_t value = 0;
  friend bool operator==(Seed, Seed) = default;
};

/// Seed used when the caller does not supply one (CLI, configs).
inline constexpr Seed kDefaultSeed{20240607};

/// SplitMix64 (Steele, Lea, Flood 2014). Small, fast, and fully specified,
/// so results do not depend on the standard library's distributions.
class Rng {
 public:
  explicit Rng(Seed seed) : state_(seed.value) {}

  std::uint64_t next_u64();

  /// Uniform in [0, 1) with 53 random bits.
  double uniform();

  /// Uniform integer in [0, bound). Unbiased (rejection sampling).
  std::uint64_t below(std::uint64_t bound);

  /// Standard normal via Box-Muller; the second variate is cached.
  double normal();

 private:
  std::uint64_t state_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

/// SplitMix64 finalizer; a bijective 64-bit mix.
std::uint64_t mix64(std::uint64_t x);

/// FNV-1a over raw bytes.
std::uint64_t fnv1a64(std::span<const std::byte> bytes,
                      std::uint64_t basis = 0xcbf29ce484222325ULL);
std::uint64_t fnv1a64(std::string_view text,
                      std::uint64_t basis = 0xcbf29ce484222325ULL);

/// Derives a child seed from a parent and a sequence of string keys.
/// Keys are length-prefixed so ("ab","c") and ("a","bc") differ.
Seed derive_seed(Seed parent, std::initializer_list<std::string_view> keys);

}  // namespace adbench

#endif  // ADBENCH_RANDOM_HPP_
