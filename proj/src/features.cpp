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

#include "adbench/features.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <numbers>

#include "adbench/error.hpp"
#include "adbench/fft.hpp"

namespace adbench {
namespace {

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

// Triangles with the given edge frequencies (n_filters + 2 points, ascending),
// evaluated at DFT bin centers.
Matrix<double> triangular_bank(const std::vector<double>& edges, int sample_rate,
                               std::size_t n_fft) {
  const std::size_t n_filters = edges.size() - 2;
  const std::size_t bins = n_fft / 2 + 1;
  Matrix<double> bank(n_filters, bins);
  for (std::size_t m = 0; m < n_filters; ++m) {
    const double left = edges[m];
    const double center = edges[m + 1];
    const double right = edges[m + 2];
    for (std::size_t k = 0; k < bins; ++k) {
      const double f = static_cast<double>(k) * sample_rate / static_cast<double>(n_fft);
      double w = 0.0;
      if (f > left && f <= center) {
        w = (f - left) / (center - left);
      } else if (f > center && f < right) {
        w = (right - f) / (right - center);
      }
      bank(m, k) = w;
    }
    bool any = false;
    for (std::size_t k = 0; k < bins; ++k) any = any || bank(m, k) > 0.0;
    if (!any) {
      throw ConfigError("filter " + std::to_string(m) +
                        " covers no DFT bin; use fewer filters or a larger n_fft");
    }
  }
  return bank;
}

Matrix<double> apply_bank(const SpectrogramMatrix& spec, const Matrix<double>& bank) {
  const Matrix<double>& power = spec.values;
  Matrix<double> out(power.rows, bank.rows);
  for (std::size_t t = 0; t < power.rows; ++t) {
    for (std::size_t m = 0; m < bank.rows; ++m) {
      double acc = 0.0;
      for (std::size_t k = 0; k < bank.cols; ++k) acc += bank(m, k) * power(t, k);
      out(t, m) = acc;
    }
  }
  return out;
}

}  // namespace

std::vector<double> make_window(WindowFamily family, std::size_t n) {
  std::vector<double> w(n, 1.0);
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t i = 0; i < n; ++i) {
    const double c = std::cos(two_pi * static_cast<double>(i) / static_cast<double>(n));
    switch (family) {
      case WindowFamily::kHamming: w[i] = 0.54 - 0.46 * c; break;
      case WindowFamily::kHann: w[i] = 0.5 - 0.5 * c; break;
      case WindowFamily::kRectangular: break;
    }
  }
  return w;
}

void StftConfig::validate() const {
  if (!is_power_of_two(n_fft)) throw ConfigError("n_fft must be a power of two");
  if (hop == 0 || hop > n_fft) throw ConfigError("hop must be in (0, n_fft]");
  if (frame_length() > n_fft) throw ConfigError("win_length must not exceed n_fft");
}

std::size_t StftConfig::frame_count(std::size_t len) const {
  if (len < frame_length()) {
    throw SignalError("audio has " + std::to_string(len) +
                      " samples, shorter than one " +
                      std::to_string(frame_length()) + "-sample frame");
  }
  return 1 + (len - frame_length()) / hop;
}

Matrix<std::complex<double>> stft(const AudioBuffer& buffer, const StftConfig& cfg) {
  cfg.validate();
  const std::size_t frames = cfg.frame_count(buffer.samples.size());
  const std::size_t win_len = cfg.frame_length();
  const auto window = make_window(cfg.window, win_len);

  Matrix<std::complex<double>> out(frames, cfg.bins());
  std::vector<double> frame(cfg.n_fft);
  for (std::size_t t = 0; t < frames; ++t) {
    std::fill(frame.begin(), frame.end(), 0.0);
    const double* x = buffer.samples.data() + t * cfg.hop;
    for (std::size_t i = 0; i < win_len; ++i) frame[i] = x[i] * window[i];
    const auto bins = rfft(frame);
    std::copy(bins.begin(), bins.end(), out.data.begin() +
                                            static_cast<std::ptrdiff_t>(t * out.cols));
  }
  return out;
}

SpectrogramMatrix spectrogram(const AudioBuffer& buffer, const StftConfig& cfg) {
  const auto f = stft(buffer, cfg);
  SpectrogramMatrix out;
  out.values = Matrix<double>(f.rows, f.cols);
  for (std::size_t i = 0; i < f.data.size(); ++i) out.values.data[i] = std::norm(f.data[i]);
  out.frame_rate = static_cast<double>(buffer.sample_rate) / static_cast<double>(cfg.hop);
  out.freq_resolution =
      static_cast<double>(buffer.sample_rate) / static_cast<double>(cfg.n_fft);
  return out;
}

Matrix<double> mel_filterbank(int sample_rate, std::size_t n_fft, std::size_t n_mels) {
  if (n_mels == 0) throw ConfigError("n_mels must be at least 1");
  const double top = hz_to_mel(sample_rate / 2.0);
  std::vector<double> edges(n_mels + 2);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    edges[i] = mel_to_hz(top * static_cast<double>(i) / static_cast<double>(n_mels + 1));
  }
  return triangular_bank(edges, sample_rate, n_fft);
}

Matrix<double> linear_filterbank(int sample_rate, std::size_t n_fft,
                                 std::size_t n_filters) {
  if (n_filters == 0) throw ConfigError("filter count must be at least 1");
  const double nyquist = sample_rate / 2.0;
  std::vector<double> edges(n_filters + 2);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    edges[i] = nyquist * static_cast<double>(i) / static_cast<double>(n_filters + 1);
  }
  return triangular_bank(edges, sample_rate, n_fft);
}

Matrix<double> mel_spectrogram(const AudioBuffer& buffer, const StftConfig& cfg,
                               std::size_t n_mels) {
  const auto bank = mel_filterbank(buffer.sample_rate, cfg.n_fft, n_mels);
  return apply_bank(spectrogram(buffer, cfg), bank);
}

Matrix<double> dct2_matrix(std::size_t n) {
  Matrix<double> d(n, n);
  const double nn = static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double scale = k == 0 ? std::sqrt(1.0 / nn) : std::sqrt(2.0 / nn);
    for (std::size_t i = 0; i < n; ++i) {
      d(k, i) = scale * std::cos(std::numbers::pi * static_cast<double>(k) *
                                 (2.0 * static_cast<double>(i) + 1.0) / (2.0 * nn));
    }
  }
  return d;
}

StftConfig lfcc_stft_config() {
  StftConfig cfg;
  cfg.n_fft = 512;
  cfg.hop = 160;
  cfg.win_length = 320;
  cfg.window = WindowFamily::kHamming;
  return cfg;
}

std::vector<LfccFrame> lfcc(const AudioBuffer& buffer) {
  const StftConfig cfg = lfcc_stft_config();
  // Filterbank and DCT depend only on the rate; computed per call.
  const auto bank = linear_filterbank(buffer.sample_rate, cfg.n_fft, kLfccDims);
  const auto dct = dct2_matrix(kLfccDims);
  const auto energies = apply_bank(spectrogram(buffer, cfg), bank);

  std::vector<LfccFrame> out(energies.rows);
  std::array<double, kLfccDims> logs{};
  for (std::size_t t = 0; t < energies.rows; ++t) {
    for (std::size_t m = 0; m < kLfccDims; ++m) {
      logs[m] = std::log(std::max(energies(t, m), kLogFloor));
    }
    for (std::size_t k = 0; k < kLfccDims; ++k) {
      double acc = 0.0;
      for (std::size_t m = 0; m < kLfccDims; ++m) acc += dct(k, m) * logs[m];
      out[t].coefficients[k] = acc;
    }
  }
  return out;
}

Matrix<double> to_matrix(const std::vector<LfccFrame>& frames) {
  Matrix<double> m(frames.size(), kLfccDims);
  for (std::size_t t = 0; t < frames.size(); ++t) {
    std::copy(frames[t].coefficients.begin(), frames[t].coefficients.end(),
              m.data.begin() + static_cast<std::ptrdiff_t>(t * kLfccDims));
  }
  return m;
}

void write_feature_csv(const Matrix<double>& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw AudioError("cannot write " + path.string());
  out << std::setprecision(17);
  for (std::size_t r = 0; r < m.rows; ++r) {
    for (std::size_t c = 0; c < m.cols; ++c) {
      if (c) out << ',';
      out << m(r, c);
    }
    out << '\n';
  }
}

void write_feature_binary(const Matrix<double>& m, const std::filesystem::path& path) {
  static_assert(std::endian::native == std::endian::little,
                "feature dump assumes a little-endian host");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw AudioError("cannot write " + path.string());
  const auto rows = static_cast<std::uint32_t>(m.rows);
  const auto cols = static_cast<std::uint32_t>(m.cols);
  out.write("ADBF", 4);
  out.write(reinterpret_cast<const char*>(&rows), 4);
  out.write(reinterpret_cast<const char*>(&cols), 4);
  out.write(reinterpret_cast<const char*>(m.data.data()),
            static_cast<std::streamsize>(m.data.size() * sizeof(double)));
}

Matrix<double> read_feature_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw AudioError("cannot open " + path.string());
  char magic[4];
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&rows), 4);
  in.read(reinterpret_cast<char*>(&cols), 4);
  if (!in || std::memcmp(magic, "ADBF", 4) != 0) {
    throw AudioError(path.string() + ": not a feature dump");
  }
  Matrix<double> m(rows, cols);
  in.read(reinterpret_cast<char*>(m.data.data()),
          static_cast<std::streamsize>(m.data.size() * sizeof(double)));
  if (!in) throw AudioError(path.string() + ": truncated feature dump");
  return m;
}

}  // namespace adbench
