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

#ifndef ADBENCH_FFT_HPP_
#define ADBENCH_FFT_HPP_

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace adbench {

constexpr bool is_power_of_two(std::size_t n) {
  return n != 0 && (n & (n - 1)) == 0;
}

/// In-place iterative radix-2 FFT. Size must be a power of two. The inverse
/// transform is unnormalized.
void fft_inplace(std::span<std::complex<double>> data, bool inverse = false);

/// One-sided spectrum (n/2 + 1 bins) of a real frame of power-of-two length.
std::vector<std::complex<double>> rfft(std::span<const double> frame);

/// Inverse of rfft: n real samples from n/2 + 1 bins, normalized by 1/n.
std::vector<double> irfft(std::span<const std::complex<double>> bins,
                          std::size_t n);

}  // namespace adbench

#endif  // ADBENCH_FFT_HPP_
