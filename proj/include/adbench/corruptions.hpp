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

#ifndef ADBENCH_CORRUPTIONS_HPP_
#define ADBENCH_CORRUPTIONS_HPP_

#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "adbench/audio.hpp"
#include "adbench/random.hpp"

namespace adbench {

enum class Family {
  kIdentity,
  kGaussianNoise,
  kBackgroundNoise,
  kLowPass,
  kHighPass,
  kPitchShift,
  kEcho,
  kTimeStretch,
  kSmooth,
  kReplay,
  kQuantize,
  kCodec,
};

/// Grouping used for the per-category accuracy summary.
enum class Category { kClean, kNoise, kModification, kCompression };

std::string_view to_string(Family family);
std::string_view to_string(Category category);

/// Codec identifiers understood by the codec family.
inline constexpr std::string_view kCodecIds[] = {"opus",    "mp3", "encodec",
                                                 "dac",     "facodec", "audiodec"};

/// One corruption condition. For the codec family `codec_id` names the codec
/// and `severity` is the bitrate in kbps (0 for single-condition codecs).
struct CorruptionSpec {
  Family family = Family::kIdentity;
  double severity = 0.0;
  std::string codec_id;

  /// Directory and report name: the family name, or the codec id.
  std::string label() const;
  /// Shortest round-trip decimal form of the severity ("0.5", "20", "inf").
  std::string severity_text() const;
  Category category() const;

  /// Builds a spec from a label ("gaussian_noise", "opus", ...) and a
  /// severity. Throws ConfigError for unknown labels or invalid severities.
  static CorruptionSpec parse(std::string_view label, double severity);

  friend bool operator==(const CorruptionSpec&, const CorruptionSpec&) = default;
};

/// Checks family-specific severity bounds and the codec_id rule.
void validate(const CorruptionSpec& spec);

std::string format_number(double value);
/// Parses a severity; accepts "inf" for the noise bypass.
double parse_number(std::string_view text);

/// Ordered severities per label.
using SeverityGrid = std::map<std::string, std::vector<double>>;

/// The default sweep grids (noise SNR, cutoff ratios, semitones, echo delay,
/// speed, smoothing window, bits, codec bitrates).
const SeverityGrid& default_severity_grid();

/// Every (label, severity) cell of a grid, in grid order.
std::vector<CorruptionSpec> expand_grid(const SeverityGrid& grid);

/// Command-template processor used for codecs and the replay simulator.
/// Placeholders: {in} input WAV, {out} output WAV, {bitrate} kbps,
/// {workdir} scratch directory. Paths are shell-quoted on expansion.
struct ExternalProcessor {
  std::string name;
  std::string command;
};

/// Built-in Opus and MP3 round trips through ffmpeg.
std::map<std::string, ExternalProcessor> builtin_codec_adapters(const std::string& ffmpeg = "ffmpeg");

/// Noise clips for background_noise.
struct NoiseCorpus {
  std::vector<std::string> ids;
  std::vector<AudioBuffer> clips;
  bool empty() const { return clips.empty(); }
};

/// Everything a kernel may need beyond (audio, spec, seed).
struct CorruptionContext {
  const NoiseCorpus* noise = nullptr;
  std::map<std::string, ExternalProcessor> codecs;
  std::optional<ExternalProcessor> replay;
  double echo_decay = 0.5;
};

/// Passing this SNR disables the noise kernels.
inline constexpr double kNoNoise = std::numeric_limits<double>::infinity();

/// Gaussian noise scaled so that 10*log10(P_signal / P_noise) == snr_db
/// exactly for this realization. Not clamped, not added.
std::vector<double> scaled_gaussian_noise(std::span<const double> signal, double snr_db,
                                          Seed seed);

/// x + noise, clamped to [-1, 1].
AudioBuffer gaussian_noise(const AudioBuffer& buffer, double snr_db, Seed seed);

/// The seed picks a corpus clip and a start offset; the clip is resampled to
/// the buffer rate if needed, tiled from the offset to the signal length and
/// scaled to the target SNR. Not clamped, not added.
std::vector<double> scaled_background_noise(std::span<const double> signal,
                                            int sample_rate, const NoiseCorpus& corpus,
                                            double snr_db, Seed seed);

AudioBuffer background_noise(const AudioBuffer& buffer, const NoiseCorpus& corpus,
                             double snr_db, Seed seed);

enum class FilterMode { kLowPass, kHighPass };

/// 255-tap linear-phase FIR, reflect padded, same length.
AudioBuffer filter_pass(const AudioBuffer& buffer, FilterMode mode, double cutoff_ratio);

/// Phase-vocoder stretch by 2^(-s/12), then resampling by the same factor.
AudioBuffer pitch_shift(const AudioBuffer& buffer, double semitones);

/// Output length round(len / speed); pitch preserved.
AudioBuffer time_stretch(const AudioBuffer& buffer, double speed);

/// y[n] = clamp(x[n] + decay * x[n - d]), d = round(delay * rate).
AudioBuffer echo(const AudioBuffer& buffer, double delay_s, double decay = 0.5);

/// Normalized Gaussian smoothing of `window` samples, reflect padded.
AudioBuffer smooth(const AudioBuffer& buffer, std::size_t window);

/// 2^bits uniform levels spanning [-1, 1], endpoints included.
AudioBuffer quantize(const AudioBuffer& buffer, int bits);

/// Writes the buffer, runs the processor, reads the result, resamples it to
/// the input rate and pads or trims it to the input length. Throws
/// AdapterError on a nonzero exit, unreadable output, or a length more than
/// 10% away from the input.
AudioBuffer run_external(const AudioBuffer& buffer, const ExternalProcessor& processor,
                         const std::string& bitrate);

AudioBuffer codec_roundtrip(const AudioBuffer& buffer, const std::string& codec_id,
                            double bitrate_kbps,
                            const std::map<std::string, ExternalProcessor>& adapters);

AudioBuffer replay(const AudioBuffer& buffer, const std::optional<ExternalProcessor>& adapter);

/// Per-clip seed: hash of (run seed, clip id, label, severity), so adding
/// cells never changes the randomness of existing ones.
Seed clip_seed(Seed run_seed, std::string_view clip_id, const CorruptionSpec& spec);

/// Dispatches to the family kernel.
AudioBuffer apply(const AudioBuffer& buffer, const CorruptionSpec& spec, Seed seed,
                  const CorruptionContext& context = {});

}  // namespace adbench

#endif  // ADBENCH_CORRUPTIONS_HPP_
