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

#ifndef ADBENCH_REPORT_HPP_
#define ADBENCH_REPORT_HPP_

#include <filesystem>
#include <map>
#include <span>
#include <string>

#include "json.hpp"

#include "adbench/harness.hpp"
#include "adbench/metrics.hpp"

namespace adbench {

nlohmann::json cell_to_json(const CellReport& cell);
CellReport cell_from_json(const nlohmann::json& j);

/// Deterministic: sorted keys, no timestamps or paths. Cells are nested
/// label -> severity; `cell_order` keeps the run order.
std::string report_json(const RunReport& report);
RunReport parse_report_json(const std::string& text);
/// Reads <run_dir>/report.json. Throws ConfigError if it is missing.
RunReport load_report(const std::filesystem::path& run_dir);

/// family,severity,eer,threshold,accuracy,auroc,n_bona,n_spoof,mean_visqol,
/// acceptable, then category,status,quality_known,std_visqol,mean_snr,
/// quality_n,n_failed_clips,note.
std::string cells_csv(std::span<const CellReport> cells);

/// family,severity,mean_visqol,std_visqol,mean_snr,acceptable,n.
std::string quality_csv(std::span<const CellReport> cells);

/// One row per category (noise, modification, compression):
/// category,mean_accuracy,n_cells,mean_accuracy_ungated,n_cells_ungated.
std::string radar_csv(std::span<const CellReport> cells);

/// Per label: severity,detector,status,eer,accuracy,auroc,mean_visqol,
/// mean_snr,quality_known,acceptable. One series per report.
std::map<std::string, std::string> plot_data(std::span<const RunReport> reports);

/// Line charts per label with acceptability shading (green acceptable, red
/// unacceptable, grey unknown) and a radar chart keyed "radar".
std::map<std::string, std::string> plot_svgs(std::span<const RunReport> reports);

/// Accuracy per tag value at each cell's EER threshold, from the stored
/// scores and manifest snapshot:
/// family,severity,tag,value,n_bona,n_spoof,accuracy.
std::string group_by_csv(const std::filesystem::path& run_dir, const RunReport& report,
                         const std::string& tag);

/// report.json, cells.csv, quality.csv, radar.csv, plotdata/, plots/.
void write_run_outputs(const std::filesystem::path& run_dir, const RunReport& report,
                       bool svg);

}  // namespace adbench

#endif  // ADBENCH_REPORT_HPP_
