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

#ifndef ADBENCH_DETECTOR_HPP_
#define ADBENCH_DETECTOR_HPP_

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "adbench/audio.hpp"
#include "adbench/metrics.hpp"

namespace adbench {

/// Runs the toy detector in-process instead of spawning a command.
inline constexpr std::string_view kBuiltinToyDetector = "builtin:toy";

/// A detector reached through the score protocol: the command template gets
/// {input_dir} (a directory of 16 kHz WAVs named <clip_id>.wav) and
/// {output_csv}, and must write `clip_id,score` rows, higher = spoof.
struct DetectorSpec {
  std::string name = "detector";
  std::string command;
};

/// Spectral centroid of the fixed-length (64000-sample) clip as a fraction
/// of Nyquist. Bright clips score high; silence scores 0.
double toy_score(const AudioBuffer& buffer, std::string_view clip_id);

/// Scores every *.wav in `input_dir` (sorted by name) and writes the CSV.
void toy_detect_directory(const std::filesystem::path& input_dir,
                          const std::filesystem::path& output_csv);

/// Parses a score CSV. Throws ProtocolError for a bad header, malformed or
/// non-finite scores, or repeated ids.
std::map<std::string, double> parse_score_csv(const std::string& text);

std::string score_csv(std::span<const ScoreRecord> records);

/// Expands and runs the detector over `input_dir`, then checks that the
/// scores cover `expected` exactly once each. Throws AdapterError on a
/// nonzero exit and ProtocolError naming the clip on coverage problems.
/// `extra_vars` adds placeholders (values inserted verbatim).
std::vector<ScoreRecord> invoke_detector(
    const DetectorSpec& detector, const std::filesystem::path& input_dir,
    std::span<const std::pair<std::string, Label>> expected,
    const std::filesystem::path& output_csv,
    const std::map<std::string, std::string>& extra_vars = {});

}  // namespace adbench

#endif  // ADBENCH_DETECTOR_HPP_
