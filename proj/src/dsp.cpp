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

#include "adbench/dsp.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "adbench/error.hpp"
#include "adbench/features.hpp"
#include "adbench/fft.hpp"

namespace adbench {
namespace {

double wrap_phase(double phi) {
  return phi - 2.0 * std::numbers::pi * std::round(phi / (2.0 * std::numbers::pi));
}

}  // namespace

std::size_t reflect_index(std::ptrdiff_t i, std::size_t n) {
  if (n == 1) return 0;
  const auto period = static_cast<std::ptrdiff_t>(2 * (n - 1));
  std::ptrdiff_t m = i % period;
  if (m < 0) m += period;
  if (m >= static_cast<std::ptrdiff_t>(n)) m = period - m;
  return static_cast<std::size_t>(m);
}

std::vector<double> filter_same(std::span<const double> x,
                                std::span<const double> kernel,
                                std::ptrdiff_t origin) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  const auto taps = static_cast<std::ptrdiff_t>(kernel.size());
  std::vector<double> y(x.size());
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const std::ptrdiff_t first = i - origin;
    double acc = 0.0;
    if (first >= 0 && first + taps <= n) {
      const double* xs = x.data() + first;
      for (std::ptrdiff_t j = 0; j < taps; ++j) acc += kernel[static_cast<std::size_t>(j)] * xs[j];
    } else {
      for (std::ptrdiff_t j = 0; j < taps; ++j) {
        acc += kernel[static_cast<std::size_t>(j)] * x[reflect_index(first + j, x.size())];
      }
    }
    y[static_cast<std::size_t>(i)] = acc;
  }
  return y;
}

std::vector<double> design_lowpass(double cutoff_ratio, std::size_t taps) {
  if (!(cutoff_ratio > 0.0 && cutoff_ratio < 1.0)) {
    throw ConfigError("cutoff ratio must be in (0, 1)");
  }
  if (taps % 2 == 0) throw ConfigError("FIR length must be odd");
  std::vector<double> h(taps);
  const double mid = static_cast<double>(taps - 1) / 2.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < taps; ++i) {
    const double t = static_cast<double>(i) - mid;
    const double x = cutoff_ratio * t;
    const double sinc =
        t == 0.0 ? 1.0 : std::sin(std::numbers::pi * x) / (std::numbers::pi * x);
    // Symmetric Hamming over the full filter span.
    const double window =
        0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                               static_cast<double>(taps - 1));
    h[i] = cutoff_ratio * sinc * window;
    sum += h[i];
  }
  for (double& v : h) v /= sum;
  return h;
}

std::vector<double> design_highpass(double cutoff_ratio, std::size_t taps) {
  std::vector<double> h = design_lowpass(cutoff_ratio, taps);
  for (double& v : h) v = -v;
  h[(taps - 1) / 2] += 1.0;
  return h;
}

std::vector<double> gaussian_kernel(std::size_t length) {
  if (length < 2) throw ConfigError("smoothing window must be at least 2 samples");
  const double sigma = static_cast<double>(length) / 6.0;
  const double center = static_cast<double>(length - 1) / 2.0;
  std::vector<double> k(length);
  double sum = 0.0;
  for (std::size_t i = 0; i < length; ++i) {
    const double d = (static_cast<double>(i) - center) / sigma;
    k[i] = std::exp(-0.5 * d * d);
    sum += k[i];
  }
  for (double& v : k) v /= sum;
  return k;
}

std::vector<double> phase_vocoder_stretch(std::span<const double> x, double speed,
                                          const PhaseVocoderConfig& cfg) {
  if (!(speed > 0.0) || !std::isfinite(speed)) {
    throw ConfigError("stretch speed must be positive");
  }
  if (!is_power_of_two(cfg.n_fft) || cfg.hop == 0 || cfg.hop > cfg.n_fft) {
    throw ConfigError("invalid phase vocoder configuration");
  }
  const std::size_t n_fft = cfg.n_fft;
  const std::size_t hop = cfg.hop;
  const std::size_t bins = n_fft / 2 + 1;
  const std::size_t len = x.size();
  const auto out_len = static_cast<std::size_t>(
      std::llround(static_cast<double>(len) / speed));
  if (len == 0) return {};

  // Centered analysis: reflect-pad by half a frame on both sides.
  const std::size_t pad = n_fft / 2;
  std::vector<double> padded(len + 2 * pad);
  for (std::size_t i = 0; i < padded.size(); ++i) {
    padded[i] = x[reflect_index(static_cast<std::ptrdiff_t>(i) -
                                    static_cast<std::ptrdiff_t>(pad),
                                len)];
  }
  const std::size_t frames = 1 + (padded.size() - n_fft) / hop;
  const auto window = make_window(WindowFamily::kHann, n_fft);

  std::vector<std::vector<std::complex<double>>> spec(frames + 1);
  std::vector<double> frame(n_fft);
  for (std::size_t t = 0; t < frames; ++t) {
    for (std::size_t i = 0; i < n_fft; ++i) frame[i] = padded[t * hop + i] * window[i];
    spec[t] = rfft(frame);
  }
  spec[frames].assign(bins, {0.0, 0.0});

  std::vector<double> advance(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    advance[k] = 2.0 * std::numbers::pi * static_cast<double>(k) *
                 static_cast<double>(hop) / static_cast<double>(n_fft);
  }
  std::vector<double> phase(bins);
  for (std::size_t k = 0; k < bins; ++k) phase[k] = std::arg(spec[0][k]);

  // Synthesis: overlap-add with squared-window normalization.
  std::vector<double> steps;
  for (double step = 0.0; step < static_cast<double>(frames); step += speed) {
    steps.push_back(step);
  }
  const std::size_t synth_len = n_fft + hop * (steps.size() - 1);
  std::vector<double> y(synth_len, 0.0);
  std::vector<double> norm(synth_len, 0.0);
  std::vector<std::complex<double>> column(bins);
  for (std::size_t s = 0; s < steps.size(); ++s) {
    const auto left = static_cast<std::size_t>(steps[s]);
    const double alpha = steps[s] - static_cast<double>(left);
    const auto& a = spec[left];
    const auto& b = spec[left + 1];
    for (std::size_t k = 0; k < bins; ++k) {
      const double mag = (1.0 - alpha) * std::abs(a[k]) + alpha * std::abs(b[k]);
      column[k] = std::polar(mag, phase[k]);
      const double delta = wrap_phase(std::arg(b[k]) - std::arg(a[k]) - advance[k]);
      phase[k] += advance[k] + delta;
    }
    const auto frame_out = irfft(column, n_fft);
    const std::size_t offset = s * hop;
    for (std::size_t i = 0; i < n_fft; ++i) {
      y[offset + i] += frame_out[i] * window[i];
      norm[offset + i] += window[i] * window[i];
    }
  }

  std::vector<double> out(out_len, 0.0);
  for (std::size_t i = 0; i < out_len; ++i) {
    const std::size_t src = i + pad;
    if (src >= synth_len) break;
    out[i] = norm[src] > 1e-8 ? y[src] / norm[src] : y[src];
  }
  return out;
}

}  // namespace adbench
