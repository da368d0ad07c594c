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

#ifndef ADBENCH_METRICS_HPP_
#define ADBENCH_METRICS_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "adbench/corruptions.hpp"

namespace adbench {

/// Spoof is the positive class.
enum class Label { kBonaFide, kSpoof };

std::string_view to_string(Label label);
/// Accepts "bona_fide", "bonafide", "bona-fide", "spoof".
Label parse_label(std::string_view text);

/// Higher score means more likely spoof.
struct ScoreRecord {
  std::string clip_id;
  Label label = Label::kBonaFide;
  double score = 0.0;
};

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  /// Clips scoring >= threshold are called spoof; +inf for the origin.
  double threshold = 0.0;
};

/// One point per distinct score, descending, plus the (0,0) origin. The last
/// point is (1,1). Throws MetricsError unless both classes are present.
std::vector<RocPoint> roc_curve(std::span<const ScoreRecord> records);

struct EerResult {
  double eer = 0.0;
  /// Clips scoring > threshold are called spoof. Finite midpoint between
  /// adjacent distinct scores, or +-inf.
  double threshold = 0.0;
  double fpr = 0.0;
  double fnr = 0.0;
};

/// Finite-sample EER: the candidate threshold minimizing |FPR - FNR|, ties
/// broken toward smaller FPR and then smaller threshold; EER = (FPR+FNR)/2.
EerResult eer(std::span<const ScoreRecord> records);

/// (TP + TN) / N with "spoof" meaning score > threshold.
double accuracy_at_threshold(std::span<const ScoreRecord> records, double threshold);

double accuracy_at_eer(std::span<const ScoreRecord> records);

/// Trapezoidal area under roc_curve; equals the Mann-Whitney statistic with
/// ties counted one half.
double auroc(std::span<const ScoreRecord> records);

enum class CellStatus { kOk, kFailed, kSkipped };
std::string_view to_string(CellStatus status);
CellStatus parse_cell_status(std::string_view text);

/// Metrics and quality summary for one corruption cell.
struct CellReport {
  CorruptionSpec spec;
  CellStatus status = CellStatus::kOk;
  std::string note;  // failure or skip reason
  double eer = 0.0;
  double threshold = 0.0;
  double accuracy = 0.0;
  double auroc = 0.0;
  std::size_t n_bona = 0;
  std::size_t n_spoof = 0;
  std::size_t n_failed_clips = 0;
  std::optional<double> mean_visqol;  // absent when quality is unknown
  std::optional<double> std_visqol;
  std::optional<double> mean_snr;     // absent for length-changing cells
  bool acceptable = false;            // mean_visqol >= 3
  std::size_t quality_n = 0;          // clips in the quality sample

  bool quality_known() const { return mean_visqol.has_value(); }
};

/// Fills eer/threshold/accuracy/auroc and class counts from scored records.
void compute_cell_metrics(std::span<const ScoreRecord> records, CellReport& cell);

struct CategorySummary {
  Category category = Category::kNoise;
  std::optional<double> mean_accuracy;  // absent when no cell qualifies
  std::size_t n_cells = 0;
};

/// Unweighted mean accuracy per category over computed cells, in the order
/// noise, modification, compression. With `gate` only acceptable cells count.
/// Throws MetricsError when `cells` holds no computed corruption cell.
std::vector<CategorySummary> aggregate_categories(std::span<const CellReport> cells,
                                                  bool gate = true);

}  // namespace adbench

#endif  // ADBENCH_METRICS_HPP_
