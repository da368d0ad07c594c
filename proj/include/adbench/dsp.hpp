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

#ifndef ADBENCH_DSP_HPP_
#define ADBENCH_DSP_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace adbench {

/// Maps an out-of-range index into [0, n) by mirror reflection without
/// repeating the edge sample (x[-1] = x[1], x[n] = x[n-2]).
std::size_t reflect_index(std::ptrdiff_t i, std::size_t n);

/// y[n] = sum_j kernel[j] * x[n - origin + j], with reflect padding.
/// Output length equals input length.
std::vector<double> filter_same(std::span<const double> x,
                                std::span<const double> kernel,
                                std::ptrdiff_t origin);

inline constexpr std::size_t kFirTaps = 255;

/// Hamming-windowed sinc low-pass with unity DC gain. `cutoff_ratio` is the
/// cutoff as a fraction of Nyquist, in (0, 1). `taps` must be odd.
std::vector<double> design_lowpass(double cutoff_ratio, std::size_t taps = kFirTaps);

/// Spectral inversion of design_lowpass: delta - lowpass. Zero DC gain.
std::vector<double> design_highpass(double cutoff_ratio, std::size_t taps = kFirTaps);

/// Normalized Gaussian kernel of `length` samples, sigma = length / 6,
/// centered at (length - 1) / 2.
std::vector<double> gaussian_kernel(std::size_t length);

struct PhaseVocoderConfig {
  std::size_t n_fft = 1024;
  std::size_t hop = 256;
};

/// Phase-vocoder time scaling. speed > 1 shortens the signal. Output length is
/// exactly round(len / speed). Phases are propagated by accumulating the
/// instantaneous-frequency estimate of each bin between analysis frames.
std::vector<double> phase_vocoder_stretch(std::span<const double> x, double speed,
                                          const PhaseVocoderConfig& cfg = {});

}  // namespace adbench

#endif  // ADBENCH_DSP_HPP_
