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

#ifndef ADBENCH_FEATURES_HPP_
#define ADBENCH_FEATURES_HPP_

#include <array>
#include <complex>
#include <cstddef>
#include <filesystem>
#include <vector>

#include "adbench/audio.hpp"

namespace adbench {

/// Dense row-major matrix.
template <typename T>
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<T> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}

  T& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  const T& operator()(std::size_t r, std::size_t c) const {
    return data[r * cols + c];
  }
};

enum class WindowFamily { kHamming, kHann, kRectangular };

/// Periodic window of length n (the DFT-even form used for STFT analysis).
std::vector<double> make_window(WindowFamily family, std::size_t n);

struct StftConfig {
  std::size_t n_fft = 512;
  std::size_t hop = 160;
  /// Analysis window length; 0 means n_fft. Frames shorter than n_fft are
  /// zero-padded on the right before the DFT.
  std::size_t win_length = 0;
  WindowFamily window = WindowFamily::kHamming;

  std::size_t frame_length() const { return win_length == 0 ? n_fft : win_length; }
  std::size_t bins() const { return n_fft / 2 + 1; }
  /// 1 + floor((len - frame_length) / hop). Throws SignalError for short input.
  std::size_t frame_count(std::size_t len) const;
  void validate() const;
};

struct SpectrogramMatrix {
  Matrix<double> values;  // frames x bins, power
  double frame_rate = 0.0;
  double freq_resolution = 0.0;
};

inline constexpr std::size_t kLfccDims = 60;
inline constexpr double kLogFloor = 1e-10;

struct LfccFrame {
  std::array<double, kLfccDims> coefficients{};
};

/// Frame t covers samples [t*hop, t*hop + frame_length); each frame is
/// windowed, zero-padded to n_fft and transformed. One-sided bins only.
Matrix<std::complex<double>> stft(const AudioBuffer& buffer, const StftConfig& cfg);

/// |stft|^2.
SpectrogramMatrix spectrogram(const AudioBuffer& buffer, const StftConfig& cfg);

/// Triangular filters with centers uniform on the HTK Mel scale over
/// [0, sample_rate / 2]. Rows are filters, columns are DFT bins.
Matrix<double> mel_filterbank(int sample_rate, std::size_t n_fft, std::size_t n_mels);

/// Triangular filters with centers uniform in Hz over [0, sample_rate / 2].
Matrix<double> linear_filterbank(int sample_rate, std::size_t n_fft,
                                 std::size_t n_filters);

/// Frames x n_mels band energies.
Matrix<double> mel_spectrogram(const AudioBuffer& buffer, const StftConfig& cfg,
                               std::size_t n_mels = 80);

/// Orthonormal DCT-II basis, n x n (row k = coefficient k).
Matrix<double> dct2_matrix(std::size_t n);

/// 60-dimensional LFCCs: 320-sample Hamming frames, hop 160, 512-point DFT,
/// 60 linear triangular filters, log with 1e-10 floor, orthonormal DCT-II.
std::vector<LfccFrame> lfcc(const AudioBuffer& buffer);

/// STFT settings used by lfcc().
StftConfig lfcc_stft_config();

/// Feature dump formats. CSV: one row per frame, comma-separated, no header.
/// Binary: "ADBF" magic, u32 rows, u32 cols (little-endian), then
/// rows*cols float64 little-endian values, row-major.
void write_feature_csv(const Matrix<double>& m, const std::filesystem::path& path);
void write_feature_binary(const Matrix<double>& m, const std::filesystem::path& path);
Matrix<double> read_feature_binary(const std::filesystem::path& path);

Matrix<double> to_matrix(const std::vector<LfccFrame>& frames);

}  // namespace adbench

#endif  // ADBENCH_FEATURES_HPP_
