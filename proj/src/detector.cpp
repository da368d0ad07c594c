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

#include "adbench/detector.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include "adbench/csv.hpp"
#include "adbench/error.hpp"
#include "adbench/features.hpp"
#include "adbench/process.hpp"
#include "adbench/random.hpp"

namespace adbench {
namespace fs = std::filesystem;

double toy_score(const AudioBuffer& buffer, std::string_view clip_id) {
  AudioBuffer x = buffer.sample_rate == kDetectorRate ? buffer : resample(buffer, kDetectorRate);
  x = fix_length(x, kDetectorSamples, derive_seed(kDefaultSeed, {"toy", clip_id}));
  StftConfig cfg;
  const auto spec = spectrogram(x, cfg);
  std::vector<double> power(cfg.bins(), 0.0);
  for (std::size_t t = 0; t < spec.values.rows; ++t)
    for (std::size_t k = 0; k < spec.values.cols; ++k) power[k] += spec.values(t, k);
  double total = 0.0;
  double weighted = 0.0;
  for (std::size_t k = 0; k < power.size(); ++k) {
    total += power[k];
    weighted += static_cast<double>(k) * power[k];
  }
  if (total <= 0.0) return 0.0;
  return weighted / total / static_cast<double>(cfg.bins() - 1);
}

void toy_detect_directory(const fs::path& input_dir, const fs::path& output_csv) {
  if (!fs::is_directory(input_dir)) throw ConfigError("not a directory: " + input_dir.string());
  std::vector<fs::path> files;
  for (const auto& de : fs::directory_iterator(input_dir))
    if (de.is_regular_file() && de.path().extension() == ".wav") files.push_back(de.path());
  std::sort(files.begin(), files.end());
  std::vector<ScoreRecord> records;
  for (const auto& f : files) {
    const std::string id = f.stem().string();
    records.push_back({id, Label::kBonaFide, toy_score(load_audio(f), id)});
  }
  write_file_atomic(output_csv, score_csv(records));
}

std::map<std::string, double> parse_score_csv(const std::string& text) {
  std::istringstream in(text);
  std::vector<CsvRow> rows;
  try {
    rows = read_csv(in);
  } catch (const ConfigError& e) {
    throw ProtocolError(std::string("score CSV: ") + e.what());
  }
  if (rows.empty() || rows[0].size() < 2 || rows[0][0] != "clip_id" || rows[0][1] != "score")
    throw ProtocolError("score CSV must start with the header clip_id,score");
  std::map<std::string, double> scores;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() < 2) throw ProtocolError("score CSV row " + std::to_string(r + 1) + " is short");
    std::string_view s = row[1];
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
      throw ProtocolError("unparsable score '" + row[1] + "' for clip '" + row[0] + "'");
    if (!std::isfinite(v)) throw ProtocolError("non-finite score for clip '" + row[0] + "'");
    if (!scores.emplace(row[0], v).second)
      throw ProtocolError("clip '" + row[0] + "' scored more than once");
  }
  return scores;
}

std::string score_csv(std::span<const ScoreRecord> records) {
  std::string out = "clip_id,score\n";
  for (const auto& r : records) out += csv_line({r.clip_id, format_number(r.score)});
  return out;
}

std::vector<ScoreRecord> invoke_detector(const DetectorSpec& detector, const fs::path& input_dir,
                                         std::span<const std::pair<std::string, Label>> expected,
                                         const fs::path& output_csv,
                                         const std::map<std::string, std::string>& extra_vars) {
  if (detector.command.empty()) throw ConfigError("detector command not configured");
  fs::create_directories(output_csv.parent_path());
  fs::remove(output_csv);
  if (detector.command == kBuiltinToyDetector) {
    toy_detect_directory(input_dir, output_csv);
  } else {
    auto vars = extra_vars;
    vars["input_dir"] = shell_quote(input_dir.string());
    vars["output_csv"] = shell_quote(output_csv.string());
    const auto res = run_command(expand_template(detector.command, vars));
    if (res.exit_code != 0)
      throw AdapterError("detector '" + detector.name + "' exited with status " +
                             std::to_string(res.exit_code),
                         res.stderr_text);
  }
  if (!fs::exists(output_csv))
    throw ProtocolError("detector '" + detector.name + "' wrote no " + output_csv.string());
  auto scores = parse_score_csv(read_file(output_csv));

  std::vector<ScoreRecord> out;
  out.reserve(expected.size());
  std::set<std::string_view> wanted;
  for (const auto& [id, label] : expected) {
    wanted.insert(id);
    auto it = scores.find(id);
    if (it == scores.end()) throw ProtocolError("detector output is missing clip '" + id + "'");
    out.push_back({id, label, it->second});
  }
  for (const auto& [id, score] : scores)
    if (!wanted.count(id)) throw ProtocolError("detector scored unknown clip '" + id + "'");
  return out;
}

}  // namespace adbench
