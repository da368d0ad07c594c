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

#include "adbench/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <set>

#include "adbench/csv.hpp"
#include "adbench/detector.hpp"
#include "adbench/error.hpp"
#include "adbench/manifest.hpp"

namespace adbench {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// JSON has no infinities; they are written as the strings "inf" / "-inf".
json num(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

json opt_num(const std::optional<double>& v) { return v ? num(*v) : json(nullptr); }

double get_num(const json& j) {
  if (j.is_string()) return parse_number(j.get<std::string>());
  return j.get<double>();
}

std::optional<double> get_opt(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return get_num(j[key]);
}

std::string field(double v) { return format_number(v); }
std::string field(const std::optional<double>& v) { return v ? format_number(*v) : ""; }
std::string field(bool v) { return v ? "true" : "false"; }

bool computed(const CellReport& c) { return c.status == CellStatus::kOk; }

json category_json(const std::vector<CategorySummary>& s) {
  json out = json::object();
  for (const auto& c : s)
    out[std::string(to_string(c.category))] = {{"mean_accuracy", opt_num(c.mean_accuracy)},
                                               {"n_cells", c.n_cells}};
  return out;
}

std::vector<CategorySummary> safe_aggregate(std::span<const CellReport> cells, bool gate) {
  try {
    return aggregate_categories(cells, gate);
  } catch (const MetricsError&) {
    return {{Category::kNoise, std::nullopt, 0},
            {Category::kModification, std::nullopt, 0},
            {Category::kCompression, std::nullopt, 0}};
  }
}

}  // namespace

json cell_to_json(const CellReport& c) {
  json j;
  j["label"] = c.spec.label();
  j["family"] = std::string(to_string(c.spec.family));
  j["severity"] = num(c.spec.severity);
  j["category"] = std::string(to_string(c.spec.category()));
  j["status"] = std::string(to_string(c.status));
  j["note"] = c.note;
  const bool ok = computed(c);
  j["eer"] = ok ? num(c.eer) : json(nullptr);
  j["threshold"] = ok ? num(c.threshold) : json(nullptr);
  j["accuracy"] = ok ? num(c.accuracy) : json(nullptr);
  j["auroc"] = ok ? num(c.auroc) : json(nullptr);
  j["n_bona"] = c.n_bona;
  j["n_spoof"] = c.n_spoof;
  j["n_failed_clips"] = c.n_failed_clips;
  j["mean_visqol"] = opt_num(c.mean_visqol);
  j["std_visqol"] = opt_num(c.std_visqol);
  j["mean_snr"] = opt_num(c.mean_snr);
  j["quality_n"] = c.quality_n;
  j["quality_known"] = c.quality_known();
  j["acceptable"] = c.acceptable;
  return j;
}

CellReport cell_from_json(const json& j) {
  CellReport c;
  c.spec = CorruptionSpec::parse(j.at("label").get<std::string>(), get_num(j.at("severity")));
  c.status = parse_cell_status(j.at("status").get<std::string>());
  c.note = j.at("note").get<std::string>();
  if (computed(c)) {
    c.eer = get_num(j.at("eer"));
    c.threshold = get_num(j.at("threshold"));
    c.accuracy = get_num(j.at("accuracy"));
    c.auroc = get_num(j.at("auroc"));
  }
  c.n_bona = j.at("n_bona").get<std::size_t>();
  c.n_spoof = j.at("n_spoof").get<std::size_t>();
  c.n_failed_clips = j.at("n_failed_clips").get<std::size_t>();
  c.mean_visqol = get_opt(j, "mean_visqol");
  c.std_visqol = get_opt(j, "std_visqol");
  c.mean_snr = get_opt(j, "mean_snr");
  c.quality_n = j.at("quality_n").get<std::size_t>();
  c.acceptable = j.at("acceptable").get<bool>();
  return c;
}

std::string report_json(const RunReport& r) {
  json j;
  j["engine_version"] = ADBENCH_VERSION;
  j["run_id"] = r.run_id;
  j["detector"] = r.detector;
  j["seed"] = r.seed.value;
  j["corrupt_bona_fide"] = r.corrupt_bona_fide;
  j["quality"] = {{"gate", r.quality_gate},
                  {"tool_available", r.quality_available},
                  {"sample_n", r.quality_sample_n}};
  j["n_clips"] = r.n_clips;
  j["complete"] = r.complete;
  json cells = json::object();
  json order = json::array();
  for (const auto& c : r.cells) {
    cells[c.spec.label()][c.spec.severity_text()] = cell_to_json(c);
    order.push_back({c.spec.label(), c.spec.severity_text()});
  }
  j["cells"] = std::move(cells);
  j["cell_order"] = std::move(order);
  j["categories"] = {{"gated", category_json(safe_aggregate(r.cells, true))},
                     {"ungated", category_json(safe_aggregate(r.cells, false))}};
  return j.dump(2) + "\n";
}

RunReport parse_report_json(const std::string& text) {
  RunReport r;
  try {
    const json j = json::parse(text);
    r.run_id = j.at("run_id").get<std::string>();
    r.detector = j.at("detector").get<std::string>();
    r.seed = Seed{j.at("seed").get<std::uint64_t>()};
    r.corrupt_bona_fide = j.at("corrupt_bona_fide").get<bool>();
    r.quality_gate = j.at("quality").at("gate").get<bool>();
    r.quality_available = j.at("quality").at("tool_available").get<bool>();
    r.quality_sample_n = j.at("quality").at("sample_n").get<std::size_t>();
    r.n_clips = j.at("n_clips").get<std::size_t>();
    r.complete = j.at("complete").get<bool>();
    for (const auto& key : j.at("cell_order")) {
      const auto label = key.at(0).get<std::string>();
      const auto sev = key.at(1).get<std::string>();
      r.cells.push_back(cell_from_json(j.at("cells").at(label).at(sev)));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed report: ") + e.what());
  }
  return r;
}

RunReport load_report(const fs::path& run_dir) {
  const fs::path p = run_dir / "report.json";
  if (!fs::exists(p)) throw ConfigError("no report.json in " + run_dir.string());
  return parse_report_json(read_file(p));
}

std::string cells_csv(std::span<const CellReport> cells) {
  std::string out =
      "family,severity,eer,threshold,accuracy,auroc,n_bona,n_spoof,mean_visqol,acceptable,"
      "category,status,quality_known,std_visqol,mean_snr,quality_n,n_failed_clips,note\n";
  for (const auto& c : cells) {
    const bool ok = computed(c);
    out += csv_line({c.spec.label(), c.spec.severity_text(), ok ? field(c.eer) : "",
                     ok ? field(c.threshold) : "", ok ? field(c.accuracy) : "",
                     ok ? field(c.auroc) : "", std::to_string(c.n_bona),
                     std::to_string(c.n_spoof), field(c.mean_visqol), field(c.acceptable),
                     std::string(to_string(c.spec.category())), std::string(to_string(c.status)),
                     field(c.quality_known()), field(c.std_visqol), field(c.mean_snr),
                     std::to_string(c.quality_n), std::to_string(c.n_failed_clips), c.note});
  }
  return out;
}

std::string quality_csv(std::span<const CellReport> cells) {
  std::string out = "family,severity,mean_visqol,std_visqol,mean_snr,acceptable,n\n";
  for (const auto& c : cells) {
    out += csv_line({c.spec.label(), c.spec.severity_text(), field(c.mean_visqol),
                     field(c.std_visqol), field(c.mean_snr), field(c.acceptable),
                     std::to_string(c.quality_n)});
  }
  return out;
}

std::string radar_csv(std::span<const CellReport> cells) {
  const auto gated = safe_aggregate(cells, true);
  const auto ungated = safe_aggregate(cells, false);
  std::string out = "category,mean_accuracy,n_cells,mean_accuracy_ungated,n_cells_ungated\n";
  for (std::size_t i = 0; i < gated.size(); ++i) {
    out += csv_line({std::string(to_string(gated[i].category)), field(gated[i].mean_accuracy),
                     std::to_string(gated[i].n_cells), field(ungated[i].mean_accuracy),
                     std::to_string(ungated[i].n_cells)});
  }
  return out;
}

std::map<std::string, std::string> plot_data(std::span<const RunReport> reports) {
  std::map<std::string, std::string> out;
  for (const auto& r : reports) {
    for (const auto& c : r.cells) {
      auto& text = out[c.spec.label()];
      if (text.empty())
        text = "severity,detector,status,eer,accuracy,auroc,mean_visqol,mean_snr,quality_known,"
               "acceptable\n";
      const bool ok = computed(c);
      text += csv_line({c.spec.severity_text(), r.detector, std::string(to_string(c.status)),
                        ok ? field(c.eer) : "", ok ? field(c.accuracy) : "",
                        ok ? field(c.auroc) : "", field(c.mean_visqol), field(c.mean_snr),
                        field(c.quality_known()), field(c.acceptable)});
    }
  }
  return out;
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

const char* const kSeriesColors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#9467bd", "#8c564b"};

std::string line_chart(const std::string& label, std::span<const RunReport> reports) {
  // x positions follow the severity order of the first report holding the label
  std::vector<std::string> xs;
  std::map<std::string, const CellReport*> shade;
  for (const auto& r : reports)
    for (const auto& c : r.cells)
      if (c.spec.label() == label && !shade.count(c.spec.severity_text())) {
        xs.push_back(c.spec.severity_text());
        shade[c.spec.severity_text()] = &c;
      }
  const double w = 640, h = 360, left = 60, right = 150, top = 30, bottom = 50;
  const double pw = w - left - right, ph = h - top - bottom;
  const double step = xs.empty() ? pw : pw / static_cast<double>(xs.size());
  auto xpos = [&](std::size_t i) { return left + step * (static_cast<double>(i) + 0.5); };
  auto ypos = [&](double v) { return top + ph * (1.0 - v); };

  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(w) + "\" height=\"" +
                  fmt(h) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  s += "<text x=\"" + fmt(left) + "\" y=\"18\" font-size=\"14\">" + escape_xml(label) + "</text>\n";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const CellReport& c = *shade[xs[i]];
    const char* fill = !c.quality_known() ? "#eeeeee" : c.acceptable ? "#d9f2d9" : "#f8d7d7";
    s += "<rect x=\"" + fmt(left + step * static_cast<double>(i)) + "\" y=\"" + fmt(top) +
         "\" width=\"" + fmt(step) + "\" height=\"" + fmt(ph) + "\" fill=\"" + fill + "\"/>\n";
    s += "<text x=\"" + fmt(xpos(i)) + "\" y=\"" + fmt(top + ph + 16) +
         "\" text-anchor=\"middle\">" + escape_xml(xs[i]) + "</text>\n";
  }
  s += "<rect x=\"" + fmt(left) + "\" y=\"" + fmt(top) + "\" width=\"" + fmt(pw) +
       "\" height=\"" + fmt(ph) + "\" fill=\"none\" stroke=\"#333\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double v = t / 4.0;
    s += "<text x=\"" + fmt(left - 6) + "\" y=\"" + fmt(ypos(v) + 4) +
         "\" text-anchor=\"end\">" + format_number(v) + "</text>\n";
  }
  s += "<text x=\"" + fmt(left + pw / 2) + "\" y=\"" + fmt(h - 10) +
       "\" text-anchor=\"middle\">severity</text>\n";

  struct Metric {
    const char* name;
    const char* dash;
    double CellReport::*field;
  };
  const Metric metrics[] = {{"accuracy", "", &CellReport::accuracy},
                            {"auroc", "6,3", &CellReport::auroc},
                            {"eer", "2,3", &CellReport::eer}};
  double legend_y = top + 10;
  for (std::size_t ri = 0; ri < reports.size(); ++ri) {
    const char* color = kSeriesColors[ri % std::size(kSeriesColors)];
    for (const auto& m : metrics) {
      std::string pts;
      for (std::size_t i = 0; i < xs.size(); ++i)
        for (const auto& c : reports[ri].cells)
          if (c.spec.label() == label && c.spec.severity_text() == xs[i] && computed(c))
            pts += fmt(xpos(i)) + "," + fmt(ypos(c.*(m.field))) + " ";
      if (pts.empty()) continue;
      s += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"2\"" +
           (*m.dash ? std::string(" stroke-dasharray=\"") + m.dash + "\"" : "") + " points=\"" +
           pts + "\"/>\n";
      s += "<line x1=\"" + fmt(w - right + 10) + "\" y1=\"" + fmt(legend_y) + "\" x2=\"" +
           fmt(w - right + 30) + "\" y2=\"" + fmt(legend_y) + "\" stroke=\"" + color +
           "\" stroke-width=\"2\"" +
           (*m.dash ? std::string(" stroke-dasharray=\"") + m.dash + "\"" : "") + "/>\n";
      s += "<text x=\"" + fmt(w - right + 34) + "\" y=\"" + fmt(legend_y + 4) + "\">" +
           escape_xml(reports[ri].detector) + " " + m.name + "</text>\n";
      legend_y += 16;
    }
  }
  s += "</svg>\n";
  return s;
}

std::string radar_chart(std::span<const RunReport> reports) {
  const double cx = 200, cy = 190, radius = 140;
  const double angles[] = {-std::numbers::pi / 2, -std::numbers::pi / 2 + 2 * std::numbers::pi / 3,
                           -std::numbers::pi / 2 + 4 * std::numbers::pi / 3};
  const char* names[] = {"noise", "modification", "compression"};
  std::string s =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"400\" height=\"400\" "
      "font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int ring = 1; ring <= 4; ++ring) {
    std::string pts;
    for (double a : angles)
      pts += fmt(cx + radius * ring / 4.0 * std::cos(a)) + "," +
             fmt(cy + radius * ring / 4.0 * std::sin(a)) + " ";
    s += "<polygon fill=\"none\" stroke=\"#ccc\" points=\"" + pts + "\"/>\n";
  }
  for (int k = 0; k < 3; ++k) {
    s += "<line x1=\"" + fmt(cx) + "\" y1=\"" + fmt(cy) + "\" x2=\"" +
         fmt(cx + radius * std::cos(angles[k])) + "\" y2=\"" +
         fmt(cy + radius * std::sin(angles[k])) + "\" stroke=\"#999\"/>\n";
    s += "<text x=\"" + fmt(cx + (radius + 14) * std::cos(angles[k])) + "\" y=\"" +
         fmt(cy + (radius + 14) * std::sin(angles[k]) + 4) + "\" text-anchor=\"middle\">" +
         names[k] + "</text>\n";
  }
  for (std::size_t ri = 0; ri < reports.size(); ++ri) {
    const auto agg = safe_aggregate(reports[ri].cells, reports[ri].quality_gate);
    std::string pts;
    for (int k = 0; k < 3; ++k) {
      const double v = agg[static_cast<std::size_t>(k)].mean_accuracy.value_or(0.0);
      pts += fmt(cx + radius * v * std::cos(angles[k])) + "," +
             fmt(cy + radius * v * std::sin(angles[k])) + " ";
    }
    const char* color = kSeriesColors[ri % std::size(kSeriesColors)];
    s += "<polygon fill=\"" + std::string(color) + "\" fill-opacity=\"0.2\" stroke=\"" + color +
         "\" stroke-width=\"2\" points=\"" + pts + "\"/>\n";
    s += "<text x=\"10\" y=\"" + fmt(16.0 + 14.0 * static_cast<double>(ri)) + "\" fill=\"" +
         color + "\">" + escape_xml(reports[ri].detector) + "</text>\n";
  }
  s += "</svg>\n";
  return s;
}

}  // namespace

std::map<std::string, std::string> plot_svgs(std::span<const RunReport> reports) {
  std::map<std::string, std::string> out;
  std::set<std::string> labels;
  for (const auto& r : reports)
    for (const auto& c : r.cells) labels.insert(c.spec.label());
  for (const auto& label : labels) out[label] = line_chart(label, reports);
  out["radar"] = radar_chart(reports);
  return out;
}

std::string group_by_csv(const fs::path& run_dir, const RunReport& report, const std::string& tag) {
  const Manifest manifest = load_manifest(run_dir / "manifest.csv");
  std::string out = "family,severity,tag,value,n_bona,n_spoof,accuracy\n";
  for (const auto& c : report.cells) {
    if (!computed(c)) continue;
    const fs::path scores_path =
        run_dir / "scores" / c.spec.label() / (c.spec.severity_text() + ".csv");
    if (!fs::exists(scores_path)) throw ConfigError("missing scores " + scores_path.string());
    const auto scores = parse_score_csv(read_file(scores_path));
    std::map<std::string, std::vector<ScoreRecord>> groups;
    for (const auto& [id, score] : scores) {
      const ManifestEntry* e = manifest.find(id);
      if (!e) throw ConfigError("scored clip '" + id + "' is not in the run manifest");
      auto it = e->tags.find(tag);
      groups[it == e->tags.end() ? "" : it->second].push_back({id, e->label, score});
    }
    for (const auto& [value, records] : groups) {
      std::size_t nb = 0;
      std::size_t ns = 0;
      for (const auto& r : records) (r.label == Label::kSpoof ? ns : nb)++;
      out += csv_line({c.spec.label(), c.spec.severity_text(), tag, value, std::to_string(nb),
                       std::to_string(ns), field(accuracy_at_threshold(records, c.threshold))});
    }
  }
  return out;
}

void write_run_outputs(const fs::path& run_dir, const RunReport& report, bool svg) {
  write_file_atomic(run_dir / "report.json", report_json(report));
  write_file_atomic(run_dir / "cells.csv", cells_csv(report.cells));
  write_file_atomic(run_dir / "quality.csv", quality_csv(report.cells));
  write_file_atomic(run_dir / "radar.csv", radar_csv(report.cells));
  const std::span<const RunReport> one(&report, 1);
  fs::create_directories(run_dir / "plotdata");
  for (const auto& [label, text] : plot_data(one))
    write_file_atomic(run_dir / "plotdata" / (label + ".csv"), text);
  if (svg) {
    fs::create_directories(run_dir / "plots");
    for (const auto& [name, text] : plot_svgs(one))
      write_file_atomic(run_dir / "plots" / (name + ".svg"), text);
  }
}

}  // namespace adbench
