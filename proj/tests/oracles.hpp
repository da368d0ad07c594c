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

// Independent reference computations used by the tests. Nothing here calls
// into the code paths it checks.

#ifndef ADBENCH_TESTS_ORACLES_HPP_
#define ADBENCH_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <random>
#include <span>
#include <vector>

namespace oracle {

inline std::vector<double> sine(double freq_hz, int rate, std::size_t n,
                                double amplitude = 0.5, double phase = 0.0) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = amplitude * std::sin(2.0 * std::numbers::pi * freq_hz * static_cast<double>(i) / rate + phase);
  }
  return x;
}

inline std::vector<double> uniform_noise(std::size_t n, unsigned seed, double amp = 0.5) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> dist(-amp, amp);
  std::vector<double> x(n);
  for (double& v : x) v = dist(gen);
  return x;
}

/// Periodic Hamming, written out directly.
inline double hamming(std::size_t i, std::size_t n) {
  return 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n));
}

/// O(n^2) DFT of a (windowed, zero-padded) frame, bins 0..n_fft/2.
inline std::vector<std::complex<double>> naive_dft(std::span<const double> frame, std::size_t n_fft) {
  std::vector<std::complex<double>> out(n_fft / 2 + 1);
  for (std::size_t k = 0; k < out.size(); ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t i = 0; i < frame.size(); ++i) {
      const double a = -2.0 * std::numbers::pi * static_cast<double>(k * i % n_fft) / static_cast<double>(n_fft);
      acc += frame[i] * std::complex<double>(std::cos(a), std::sin(a));
    }
    out[k] = acc;
  }
  return out;
}

/// Magnitude of the DTFT at `freq` (Hz) over a signal segment.
inline double dtft_magnitude(std::span<const double> x, double freq, int rate) {
  double re = 0.0, im = 0.0;
  const double w = 2.0 * std::numbers::pi * freq / rate;
  for (std::size_t i = 0; i < x.size(); ++i) {
    re += x[i] * std::cos(w * static_cast<double>(i));
    im -= x[i] * std::sin(w * static_cast<double>(i));
  }
  return std::hypot(re, im);
}

/// Frequency of the strongest component in [lo, hi] Hz: coarse 1 Hz scan of
/// the Hann-windowed DTFT, then a 0.01 Hz refinement around the peak.
inline double dominant_frequency(std::span<const double> x, int rate, double lo, double hi) {
  std::vector<double> w(x.begin(), x.end());
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] *= 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(w.size()));
  }
  double best_f = lo, best = -1.0;
  for (double f = lo; f <= hi; f += 1.0) {
    const double m = dtft_magnitude(w, f, rate);
    if (m > best) { best = m; best_f = f; }
  }
  const double center = best_f;
  for (double f = center - 1.0; f <= center + 1.0; f += 0.01) {
    const double m = dtft_magnitude(w, f, rate);
    if (m > best) { best = m; best_f = f; }
  }
  return best_f;
}

/// Least-squares amplitude of a sinusoid at `freq` in x.
inline double tone_amplitude(std::span<const double> x, double freq, int rate) {
  double ss = 0, cc = 0, sc = 0, xs = 0, xc = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double a = 2.0 * std::numbers::pi * freq * static_cast<double>(i) / rate;
    const double s = std::sin(a), c = std::cos(a);
    ss += s * s; cc += c * c; sc += s * c; xs += x[i] * s; xc += x[i] * c;
  }
  const double det = ss * cc - sc * sc;
  const double a = (xs * cc - xc * sc) / det;
  const double b = (xc * ss - xs * sc) / det;
  return std::hypot(a, b);
}

/// 10 log10(sum ref^2 / sum (deg - ref)^2).
inline double snr_db(std::span<const double> ref, std::span<const double> deg) {
  double p = 0, e = 0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    p += ref[i] * ref[i];
    e += (deg[i] - ref[i]) * (deg[i] - ref[i]);
  }
  return 10.0 * std::log10(p / e);
}

inline double relative_error(double got, double want, double scale) {
  return std::abs(got - want) / std::max(scale, 1e-300);
}

// Straight-line LFCC: naive DFT, dense triangular bank built from first
// principles, dense cosine transform.
inline std::vector<std::vector<double>> lfcc(const std::vector<double>& x, int rate) {
  const std::size_t frame_len = 320, hop = 160, n_fft = 512, n_filt = 60;
  const std::size_t bins = n_fft / 2 + 1;
  const double nyq = rate / 2.0;
  std::vector<std::vector<double>> out;
  for (std::size_t start = 0; start + frame_len <= x.size(); start += hop) {
    std::vector<double> frame(frame_len);
    for (std::size_t i = 0; i < frame_len; ++i) frame[i] = x[start + i] * hamming(i, frame_len);
    const auto dft = naive_dft(frame, n_fft);
    std::vector<double> logs(n_filt);
    for (std::size_t m = 0; m < n_filt; ++m) {
      const double l = nyq * m / (n_filt + 1.0), c = nyq * (m + 1) / (n_filt + 1.0),
                   r = nyq * (m + 2) / (n_filt + 1.0);
      double e = 0.0;
      for (std::size_t k = 0; k < bins; ++k) {
        const double f = k * static_cast<double>(rate) / n_fft;
        const double w = (f > l && f <= c) ? (f - l) / (c - l) : (f > c && f < r) ? (r - f) / (r - c) : 0.0;
        e += w * std::norm(dft[k]);
      }
      logs[m] = std::log(std::max(e, 1e-10));
    }
    std::vector<double> coef(n_filt);
    for (std::size_t k = 0; k < n_filt; ++k) {
      double acc = 0.0;
      for (std::size_t m = 0; m < n_filt; ++m) {
        acc += logs[m] * std::cos(std::numbers::pi * k * (2.0 * m + 1.0) / (2.0 * n_filt));
      }
      coef[k] = acc * (k == 0 ? std::sqrt(1.0 / n_filt) : std::sqrt(2.0 / n_filt));
    }
    out.push_back(coef);
  }
  return out;
}

}  // namespace oracle

#endif  // ADBENCH_TESTS_ORACLES_HPP_
