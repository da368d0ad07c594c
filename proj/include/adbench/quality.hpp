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

#ifndef ADBENCH_QUALITY_HPP_
#define ADBENCH_QUALITY_HPP_

#include <atomic>
#include <cstddef>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "adbench/audio.hpp"
#include "adbench/corruptions.hpp"
#include "adbench/manifest.hpp"
#include "adbench/random.hpp"

namespace adbench {

/// ViSQOL scores at or above this are acceptable.
inline constexpr double kAcceptableVisqol = 3.0;

/// 10*log10(sum ref^2 / sum (deg - ref)^2); +inf when deg == ref.
/// Throws SignalError on a length or rate mismatch or a silent reference.
double snr_db(const AudioBuffer& reference, const AudioBuffer& degraded);

inline bool is_acceptable(const std::optional<double>& visqol) {
  return visqol.has_value() && *visqol >= kAcceptableVisqol;
}

struct QualityRecord {
  std::string clip_id;
  std::optional<double> snr_db;  // absent when lengths differ
  std::optional<double> visqol;  // absent when the tool is unavailable
  bool acceptable = false;
};

QualityRecord make_quality_record(std::string clip_id, std::optional<double> snr,
                                  std::optional<double> visqol);

/// Extracts the score from ViSQOL output: the number after "MOS-LQO", or the
/// whole output if it is a bare number. Throws AdapterError if neither
/// parses or the value lies outside [1, 5].
double parse_mos(std::string_view output);

/// External ViSQOL runner with a content-hash cache. The command template
/// takes {ref} and {deg} (shell-quoted WAV paths). Thread-safe; concurrent
/// writers of one key store the same value, the last rename wins.
class VisqolAdapter {
 public:
  explicit VisqolAdapter(std::string command, std::filesystem::path cache_dir = {});

  /// Speech-mode command line for a ViSQOL v3 binary.
  static std::string default_command(const std::string& tool);

  /// Both buffers are written as 16-bit WAVs at the reference rate.
  double score(const AudioBuffer& reference, const AudioBuffer& degraded);

  const std::string& command() const { return command_; }
  std::size_t tool_runs() const { return tool_runs_.load(); }

 private:
  std::string cache_key(const std::vector<std::byte>& ref, const std::vector<std::byte>& deg) const;

  std::string command_;
  std::filesystem::path cache_dir_;
  std::mutex mu_;
  std::map<std::string, double> memo_;
  std::atomic<std::size_t> tool_runs_{0};
};

struct QualityStats {
  std::optional<double> mean_visqol;
  std::optional<double> std_visqol;  // population standard deviation
  std::optional<double> mean_snr;    // absent if any sampled pair lacks SNR
  bool acceptable = false;           // mean_visqol >= 3
  std::size_t n = 0;                 // records summarized
};

QualityStats summarize(std::span<const QualityRecord> records);

struct QualityCell {
  CorruptionSpec spec;
  QualityStats stats;
  std::vector<QualityRecord> records;
  std::vector<std::pair<std::string, std::string>> failures;  // clip_id, error
};

/// `k` distinct indices from [0, n), seeded, returned in ascending order.
std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k, Seed seed);

/// Seed for a cell's quality sample.
Seed quality_sample_seed(Seed run_seed, const CorruptionSpec& spec);

struct QualitySweepOptions {
  std::size_t sample_n = 200;
  Seed seed = kDefaultSeed;
  CorruptionContext context;
  VisqolAdapter* visqol = nullptr;  // quality unknown when null
  std::size_t jobs = 0;
};

/// Scores one clean/corrupted pair.
QualityRecord measure_pair(const std::string& clip_id, const AudioBuffer& clean,
                           const AudioBuffer& corrupted, VisqolAdapter* visqol);

/// For each cell, corrupts a seeded sample of sample_n clips (resampled to
/// 16 kHz first, with the same per-clip seeds as a sweep) and scores them.
/// Per-clip failures are recorded in the cell. Throws ConfigError if
/// sample_n exceeds the corpus size.
std::vector<QualityCell> quality_sweep(const Manifest& corpus,
                                       std::span<const CorruptionSpec> cells,
                                       const QualitySweepOptions& options);

/// `family,severity,mean_visqol,std_visqol,mean_snr,acceptable,n`; absent
/// values are empty fields.
std::string quality_csv(std::span<const QualityCell> cells);

}  // namespace adbench

#endif  // ADBENCH_QUALITY_HPP_
