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

#include "adbench/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "adbench/error.hpp"

namespace adbench {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct SplitScores {
  std::vector<double> bona;   // ascending
  std::vector<double> spoof;  // ascending
};

SplitScores split(std::span<const ScoreRecord> records) {
  SplitScores s;
  for (const auto& r : records) {
    if (!std::isfinite(r.score)) {
      throw MetricsError("non-finite score for clip '" + r.clip_id + "'");
    }
    (r.label == Label::kSpoof ? s.spoof : s.bona).push_back(r.score);
  }
  if (s.bona.empty() || s.spoof.empty()) {
    throw MetricsError("metrics need at least one bona fide and one spoof record");
  }
  std::sort(s.bona.begin(), s.bona.end());
  std::sort(s.spoof.begin(), s.spoof.end());
  return s;
}

// Number of values strictly greater than t in an ascending vector.
std::size_t count_above(const std::vector<double>& v, double t) {
  return static_cast<std::size_t>(v.end() - std::upper_bound(v.begin(), v.end(), t));
}

std::size_t count_at_least(const std::vector<double>& v, double t) {
  return static_cast<std::size_t>(v.end() - std::lower_bound(v.begin(), v.end(), t));
}

std::vector<double> distinct_scores(const SplitScores& s) {
  std::vector<double> all;
  all.reserve(s.bona.size() + s.spoof.size());
  std::merge(s.bona.begin(), s.bona.end(), s.spoof.begin(), s.spoof.end(),
             std::back_inserter(all));
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return all;
}

}  // namespace

std::string_view to_string(Label label) {
  return label == Label::kSpoof ? "spoof" : "bona_fide";
}

Label parse_label(std::string_view text) {
  if (text == "spoof") return Label::kSpoof;
  if (text == "bona_fide" || text == "bonafide" || text == "bona-fide") return Label::kBonaFide;
  throw ConfigError("unknown label '" + std::string(text) + "'");
}

std::string_view to_string(CellStatus status) {
  switch (status) {
    case CellStatus::kOk: return "ok";
    case CellStatus::kFailed: return "failed";
    case CellStatus::kSkipped: return "skipped";
  }
  return "unknown";
}

CellStatus parse_cell_status(std::string_view text) {
  if (text == "ok") return CellStatus::kOk;
  if (text == "failed") return CellStatus::kFailed;
  if (text == "skipped") return CellStatus::kSkipped;
  throw ConfigError("unknown cell status '" + std::string(text) + "'");
}

std::vector<RocPoint> roc_curve(std::span<const ScoreRecord> records) {
  const SplitScores s = split(records);
  const auto nb = static_cast<double>(s.bona.size());
  const auto ns = static_cast<double>(s.spoof.size());
  std::vector<double> thresholds = distinct_scores(s);
  std::reverse(thresholds.begin(), thresholds.end());

  std::vector<RocPoint> curve;
  curve.reserve(thresholds.size() + 1);
  curve.push_back({0.0, 0.0, kInf});
  for (double t : thresholds) {
    curve.push_back({static_cast<double>(count_at_least(s.bona, t)) / nb,
                     static_cast<double>(count_at_least(s.spoof, t)) / ns, t});
  }
  return curve;
}

EerResult eer(std::span<const ScoreRecord> records) {
  const SplitScores s = split(records);
  const auto nb = static_cast<double>(s.bona.size());
  const auto ns = static_cast<double>(s.spoof.size());
  const std::vector<double> scores = distinct_scores(s);

  std::vector<double> candidates;
  candidates.reserve(scores.size() + 1);
  candidates.push_back(-kInf);
  for (std::size_t i = 0; i + 1 < scores.size(); ++i) {
    candidates.push_back(scores[i] + (scores[i + 1] - scores[i]) / 2.0);
  }
  candidates.push_back(kInf);

  EerResult best;
  double best_gap = kInf;
  for (double t : candidates) {
    const double fpr = static_cast<double>(count_above(s.bona, t)) / nb;
    const double fnr = static_cast<double>(s.spoof.size() - count_above(s.spoof, t)) / ns;
    const double gap = std::abs(fpr - fnr);
    // Candidates ascend, so strict comparisons keep the smaller threshold.
    if (gap < best_gap || (gap == best_gap && fpr < best.fpr)) {
      best_gap = gap;
      best = {(fpr + fnr) / 2.0, t, fpr, fnr};
    }
  }
  return best;
}

double accuracy_at_threshold(std::span<const ScoreRecord> records, double threshold) {
  if (records.empty()) throw MetricsError("accuracy of an empty record set");
  std::size_t correct = 0;
  for (const auto& r : records) {
    const bool called_spoof = r.score > threshold;
    correct += called_spoof == (r.label == Label::kSpoof) ? 1 : 0;
  }
  return static_cast<double>(correct) / static_cast<double>(records.size());
}

double accuracy_at_eer(std::span<const ScoreRecord> records) {
  return accuracy_at_threshold(records, eer(records).threshold);
}

double auroc(std::span<const ScoreRecord> records) {
  const SplitScores s = split(records);
  std::vector<double> thresholds = distinct_scores(s);
  std::reverse(thresholds.begin(), thresholds.end());
  // Twice the area in units of (1/nb)(1/ns), accumulated exactly.
  long double doubled = 0.0L;
  std::size_t prev_fp = 0;
  std::size_t prev_tp = 0;
  for (double t : thresholds) {
    const std::size_t fp = count_at_least(s.bona, t);
    const std::size_t tp = count_at_least(s.spoof, t);
    doubled += static_cast<long double>(fp - prev_fp) * static_cast<long double>(tp + prev_tp);
    prev_fp = fp;
    prev_tp = tp;
  }
  return static_cast<double>(doubled / (2.0L * static_cast<long double>(s.bona.size()) *
                                        static_cast<long double>(s.spoof.size())));
}

void compute_cell_metrics(std::span<const ScoreRecord> records, CellReport& cell) {
  const EerResult e = eer(records);
  cell.eer = e.eer;
  cell.threshold = e.threshold;
  cell.accuracy = accuracy_at_threshold(records, e.threshold);
  cell.auroc = auroc(records);
  cell.n_bona = 0;
  cell.n_spoof = 0;
  for (const auto& r : records) (r.label == Label::kSpoof ? cell.n_spoof : cell.n_bona)++;
}

std::vector<CategorySummary> aggregate_categories(std::span<const CellReport> cells,
                                                  bool gate) {
  std::vector<CategorySummary> out = {{Category::kNoise, std::nullopt, 0},
                                      {Category::kModification, std::nullopt, 0},
                                      {Category::kCompression, std::nullopt, 0}};
  bool any = false;
  for (auto& summary : out) {
    double sum = 0.0;
    for (const auto& cell : cells) {
      if (cell.status != CellStatus::kOk || cell.spec.category() != summary.category) continue;
      any = true;
      if (gate && !cell.acceptable) continue;
      sum += cell.accuracy;
      ++summary.n_cells;
    }
    if (summary.n_cells > 0) summary.mean_accuracy = sum / static_cast<double>(summary.n_cells);
  }
  if (!any) throw MetricsError("no computed corruption cells to aggregate");
  return out;
}

}  // namespace adbench
