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

#ifndef ADBENCH_AUDIO_HPP_
#define ADBENCH_AUDIO_HPP_

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "adbench/random.hpp"

namespace adbench {

/// Rate every detector consumes.
inline constexpr int kDetectorRate = 16000;
/// Fixed detector input length, about 4 s at 16 kHz.
inline constexpr std::size_t kDetectorSamples = 64000;

/// Mono PCM audio. Samples are nominally in [-1, 1].
struct AudioBuffer {
  std::vector<double> samples;
  int sample_rate = kDetectorRate;

  std::size_t size() const noexcept { return samples.size(); }
  bool empty() const noexcept { return samples.empty(); }
  double duration_seconds() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
  friend bool operator==(const AudioBuffer&, const AudioBuffer&) = default;
};

/// Throws AudioError unless the buffer is non-empty, finite and has a
/// positive rate.
void validate(const AudioBuffer& buffer);

/// Reads a RIFF/WAVE file holding PCM16 or float32 samples in one or two
/// channels. Stereo is averaged to mono; PCM16 is divided by 32768.
AudioBuffer load_audio(const std::filesystem::path& path);

/// Parses an in-memory WAV image (same rules as load_audio).
AudioBuffer decode_wav(std::span<const std::byte> bytes);

/// Writes 16-bit mono PCM. Samples are clamped to [-1, 1] and scaled by
/// 32768 (saturating at 32767), so load_audio(save_audio(b)) is within
/// 1/32768 of b.
void save_audio(const AudioBuffer& buffer, const std::filesystem::path& path);

std::vector<std::byte> encode_wav(const AudioBuffer& buffer);

/// Band-limited resampling with a Kaiser-windowed sinc (64 taps per phase,
/// beta 8.6). Output length is round(len * target / source). Identity when
/// the rates match.
AudioBuffer resample(const AudioBuffer& buffer, int target_rate);

/// Resamples by an arbitrary ratio (output rate / input rate) and labels the
/// result with `output_rate`. Used where the ratio is irrational, e.g. pitch
/// shifting by 2^(s/12).
AudioBuffer resample_by_ratio(const AudioBuffer& buffer, double ratio,
                              int output_rate);

/// Trims (at a seed-chosen offset) or tiles the buffer to exactly n samples.
AudioBuffer fix_length(const AudioBuffer& buffer, std::size_t n_samples,
                       Seed seed);

/// Clamps every sample into [-1, 1].
void clamp_samples(std::vector<double>& samples);

/// Mean of squared samples.
double mean_power(std::span<const double> samples);

}  // namespace adbench

#endif  // ADBENCH_AUDIO_HPP_
