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

// adbench command-line entry point. Every subcommand is a thin wrapper over
// the library; exit codes are 0 success, 1 runtime failure, 2 usage or
// configuration error.

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "adbench/config.hpp"
#include "adbench/corruptions.hpp"
#include "adbench/csv.hpp"
#include "adbench/detector.hpp"
#include "adbench/error.hpp"
#include "adbench/harness.hpp"
#include "adbench/manifest.hpp"
#include "adbench/metrics.hpp"
#include "adbench/process.hpp"
#include "adbench/quality.hpp"
#include "adbench/report.hpp"
#include "adbench/synth.hpp"

namespace fs = std::filesystem;
using namespace adbench;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

fs::path self_path(const char* argv0) {
  std::error_code ec;
  auto p = fs::read_symlink("/proc/self/exe", ec);
  if (!ec) return p;
  return fs::absolute(argv0);
}

// "label=1,2,3" -> specs
std::vector<CorruptionSpec> parse_cell_arg(const std::string& arg) {
  const auto eq = arg.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == arg.size())
    throw ConfigError("expected LABEL=SEV[,SEV...], got '" + arg + "'");
  const std::string label = arg.substr(0, eq);
  std::vector<CorruptionSpec> out;
  std::stringstream list(arg.substr(eq + 1));
  std::string item;
  while (std::getline(list, item, ','))
    out.push_back(CorruptionSpec::parse(label, parse_number(item)));
  return out;
}

std::map<std::string, ExternalProcessor> parse_codec_args(const std::vector<std::string>& args) {
  auto codecs = builtin_codec_adapters(process_env("ADBENCH_FFMPEG").value_or("ffmpeg"));
  for (const auto& a : args) {
    const auto eq = a.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("expected ID=COMMAND, got '" + a + "'");
    codecs[a.substr(0, eq)] = {a.substr(0, eq), a.substr(eq + 1)};
  }
  return codecs;
}

std::vector<fs::path> wavs_in(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& de : fs::directory_iterator(dir))
    if (de.is_regular_file() && de.path().extension() == ".wav") files.push_back(de.path());
  std::sort(files.begin(), files.end());
  return files;
}

std::string opt_text(const std::optional<double>& v, int precision = 3) {
  if (!v) return "-";
  if (!std::isfinite(*v)) return format_number(*v);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", precision, *v);
  return buf;
}

void print_summary(const RunReport& report) {
  std::printf("\n%-18s %9s %-8s %7s %7s %7s %7s %7s %s\n", "cell", "severity", "status", "eer",
              "acc", "auroc", "visqol", "snr", "acceptable");
  for (const auto& c : report.cells) {
    const bool ok = c.status == CellStatus::kOk;
    std::printf("%-18s %9s %-8s %7s %7s %7s %7s %7s %s\n", c.spec.label().c_str(),
                c.spec.severity_text().c_str(), std::string(to_string(c.status)).c_str(),
                ok ? opt_text(c.eer).c_str() : "-", ok ? opt_text(c.accuracy).c_str() : "-",
                ok ? opt_text(c.auroc).c_str() : "-", opt_text(c.mean_visqol, 2).c_str(),
                opt_text(c.mean_snr, 1).c_str(),
                c.quality_known() ? (c.acceptable ? "yes" : "no") : "unknown");
  }
  const auto gated = aggregate_categories(report.cells, report.quality_gate);
  std::printf("\ncategory means (%s):", report.quality_gate ? "gated" : "ungated");
  for (const auto& s : gated)
    std::printf("  %s=%s", std::string(to_string(s.category)).c_str(),
                opt_text(s.mean_accuracy).c_str());
  std::printf("\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adbench: corruption robustness benchmark for audio deepfake detectors"};
  app.require_subcommand(0, 1);
  bool version = false;
  bool version_json = false;
  app.add_flag("--version", version, "Print the version and exit");
  app.add_flag("--json", version_json, "With --version: machine-readable output");

  // corrupt
  auto* corrupt = app.add_subcommand("corrupt", "Apply one corruption to a WAV file or a directory of WAVs");
  std::string c_family;
  std::string c_severity;
  std::uint64_t c_seed = kDefaultSeed.value;
  fs::path c_in;
  fs::path c_out;
  std::optional<fs::path> c_noise;
  std::vector<std::string> c_codecs;
  std::optional<std::string> c_replay;
  double c_decay = 0.5;
  corrupt->add_option("--family", c_family, "Family or codec id (e.g. quantize, opus)")->required();
  corrupt->add_option("--severity", c_severity, "Severity (SNR dB, ratio, semitones, seconds, speed, samples, bits, kbps; 'inf' for no noise)")->required();
  corrupt->add_option("--seed", c_seed, "Run seed")->capture_default_str();
  corrupt->add_option("--noise", c_noise, "Noise corpus (directory of WAVs or manifest)");
  corrupt->add_option("--codec", c_codecs, "Codec adapter ID=COMMAND ({in} {out} {bitrate} {workdir})");
  corrupt->add_option("--replay", c_replay, "Replay simulator command");
  corrupt->add_option("--echo-decay", c_decay, "Echo decay")->capture_default_str();
  corrupt->add_option("input", c_in, "Input WAV or directory")->required();
  corrupt->add_option("output", c_out, "Output WAV or directory")->required();

  // quality-sweep
  auto* qsweep = app.add_subcommand("quality-sweep", "Score a seeded sample per cell with SNR and ViSQOL");
  fs::path q_manifest;
  std::vector<std::string> q_cells;
  std::size_t q_sample_n = 200;
  std::uint64_t q_seed = kDefaultSeed.value;
  std::optional<std::string> q_visqol;
  std::optional<fs::path> q_noise;
  std::vector<std::string> q_codecs;
  std::optional<fs::path> q_out;
  std::size_t q_jobs = 0;
  qsweep->add_option("--manifest", q_manifest, "Corpus manifest")->required();
  qsweep->add_option("--cell", q_cells, "LABEL=SEV[,SEV...] (repeatable)")->required();
  qsweep->add_option("--sample-n", q_sample_n, "Clips per cell")->capture_default_str();
  qsweep->add_option("--seed", q_seed, "Run seed")->capture_default_str();
  qsweep->add_option("--visqol", q_visqol, "ViSQOL binary (default: $ADBENCH_VISQOL); quality unknown when absent");
  qsweep->add_option("--noise", q_noise, "Noise corpus");
  qsweep->add_option("--codec", q_codecs, "Codec adapter ID=COMMAND");
  qsweep->add_option("--out", q_out, "Write CSV here instead of stdout");
  qsweep->add_option("--jobs", q_jobs, "Worker threads (0 = CPUs)");

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Compute EER, accuracy at EER and AUROC from a score CSV");
  fs::path e_scores;
  fs::path e_manifest;
  bool e_json = false;
  evaluate->add_option("--scores", e_scores, "clip_id,score CSV")->required();
  evaluate->add_option("--manifest", e_manifest, "Manifest supplying labels")->required();
  evaluate->add_flag("--json", e_json, "Print JSON");

  // run
  auto* run = app.add_subcommand("run", "Run a full sweep from a config file");
  fs::path r_config;
  bool r_resume = false;
  std::optional<std::size_t> r_jobs;
  bool r_quiet = false;
  run->add_option("config", r_config, "Run config (JSON)")->required();
  run->add_flag("--resume", r_resume, "Reuse an existing run directory and its cache");
  run->add_option("--jobs", r_jobs, "Worker threads (0 = CPUs); overrides the config");
  run->add_flag("-q,--quiet", r_quiet, "No per-cell progress");

  // augment
  auto* augment = app.add_subcommand("augment", "Export an augmented training set");
  fs::path a_manifest;
  std::vector<std::string> a_recipes;
  double a_mix = 0.5;
  std::uint64_t a_seed = kDefaultSeed.value;
  fs::path a_out;
  std::optional<fs::path> a_noise;
  std::vector<std::string> a_codecs;
  std::size_t a_jobs = 0;
  augment->add_option("--manifest", a_manifest, "Source manifest")->required();
  augment->add_option("--recipe", a_recipes, "LABEL=SEV[,SEV...] (repeatable)")->required();
  augment->add_option("--mix-prob", a_mix, "Probability a training clip is augmented")->capture_default_str();
  augment->add_option("--seed", a_seed, "Seed")->capture_default_str();
  augment->add_option("--noise", a_noise, "Noise corpus");
  augment->add_option("--codec", a_codecs, "Codec adapter ID=COMMAND");
  augment->add_option("--jobs", a_jobs, "Worker threads (0 = CPUs)");
  augment->add_option("--out", a_out, "Output directory")->required();

  // report
  auto* report = app.add_subcommand("report", "Re-render tables and plot data from stored run results");
  std::vector<fs::path> p_runs;
  std::string p_format = "csv";
  std::optional<std::string> p_group;
  std::optional<fs::path> p_out;
  report->add_option("run_dir", p_runs, "Run directories (several merge into one plot series each)")->required();
  report->add_option("--format", p_format, "csv | json | quality | radar | plotdata | svg")
      ->check(CLI::IsMember({"csv", "json", "quality", "radar", "plotdata", "svg"}))
      ->capture_default_str();
  report->add_option("--group-by", p_group, "tag:NAME, per-tag accuracy at each cell's EER threshold");
  report->add_option("--out", p_out, "Output directory (required for plotdata and svg)");

  // toy-detect
  auto* toy = app.add_subcommand("toy-detect", "Built-in spectral-centroid detector over a WAV directory");
  fs::path t_in;
  fs::path t_out;
  toy->add_option("input_dir", t_in, "Directory of WAVs")->required();
  toy->add_option("output_csv", t_out, "Score CSV to write")->required();

  // synth-corpus
  auto* synth = app.add_subcommand("synth-corpus", "Write the synthetic bona fide / spoof corpus");
  fs::path s_out;
  SynthOptions s_opt;
  std::uint64_t s_seed = kDefaultSeed.value;
  synth->add_option("output_dir", s_out, "Destination")->required();
  synth->add_option("--clips", s_opt.n_clips, "Number of clips")->capture_default_str();
  synth->add_option("--duration", s_opt.duration_s, "Seconds per clip")->capture_default_str();
  synth->add_option("--seed", s_seed, "Seed")->capture_default_str();

  // wavefake-manifest
  auto* wavefake = app.add_subcommand("wavefake-manifest", "Build a manifest from a WaveFake-style layout");
  fs::path w_real;
  fs::path w_gen;
  fs::path w_out;
  std::uint64_t w_seed = kDefaultSeed.value;
  wavefake->add_option("--real", w_real, "Directory of bona fide WAVs (e.g. LJSpeech wavs)")->required();
  wavefake->add_option("--generated", w_gen, "Directory with one subdirectory per generator")->required();
  wavefake->add_option("--out", w_out, "Manifest CSV to write")->required();
  wavefake->add_option("--seed", w_seed, "Split seed")->capture_default_str();

  auto* schema = app.add_subcommand("config-schema", "Print the run config JSON Schema");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (version) {
      if (version_json)
        std::cout << nlohmann::json{{"name", "adbench"}, {"version", ADBENCH_VERSION}}.dump() << "\n";
      else
        std::cout << "adbench " << ADBENCH_VERSION << "\n";
      return kExitOk;
    }

    if (*corrupt) {
      const auto spec = CorruptionSpec::parse(c_family, parse_number(c_severity));
      NoiseCorpus noise;
      CorruptionContext ctx;
      ctx.codecs = parse_codec_args(c_codecs);
      if (c_replay) ctx.replay = ExternalProcessor{"replay", *c_replay};
      ctx.echo_decay = c_decay;
      if (c_noise) {
        noise = load_noise_corpus(*c_noise);
        ctx.noise = &noise;
      }
      const Seed seed{c_seed};
      if (fs::is_directory(c_in)) {
        fs::create_directories(c_out);
        for (const auto& f : wavs_in(c_in)) {
          const std::string id = f.stem().string();
          save_audio(apply(load_audio(f), spec, clip_seed(seed, id, spec), ctx), c_out / f.filename());
        }
      } else {
        const std::string id = c_in.stem().string();
        save_audio(apply(load_audio(c_in), spec, clip_seed(seed, id, spec), ctx), c_out);
      }
      return kExitOk;
    }

    if (*qsweep) {
      std::vector<CorruptionSpec> cells;
      for (const auto& a : q_cells) {
        auto more = parse_cell_arg(a);
        cells.insert(cells.end(), more.begin(), more.end());
      }
      const Manifest corpus = load_manifest(q_manifest);
      QualitySweepOptions opt;
      opt.sample_n = std::min(q_sample_n, corpus.size());
      opt.seed = Seed{q_seed};
      opt.jobs = q_jobs;
      opt.context.codecs = parse_codec_args(q_codecs);
      NoiseCorpus noise;
      if (q_noise) {
        noise = load_noise_corpus(*q_noise);
        opt.context.noise = &noise;
      }
      std::unique_ptr<VisqolAdapter> visqol;
      if (!q_visqol) q_visqol = process_env("ADBENCH_VISQOL");
      if (q_visqol) {
        auto found = find_executable(*q_visqol);
        if (!found) throw ConfigError("ViSQOL tool '" + *q_visqol + "' not found");
        visqol = std::make_unique<VisqolAdapter>(VisqolAdapter::default_command(found->string()));
        opt.visqol = visqol.get();
      } else {
        std::cerr << "warning: no ViSQOL tool; mean_visqol is empty and no cell is acceptable\n";
      }
      const auto out = quality_sweep(corpus, cells, opt);
      for (const auto& c : out)
        for (const auto& [id, err] : c.failures)
          std::cerr << "warning: " << c.spec.label() << "/" << c.spec.severity_text() << " " << id
                    << ": " << err << "\n";
      const std::string csv = quality_csv(std::span<const QualityCell>(out));
      if (q_out)
        write_file_atomic(*q_out, csv);
      else
        std::cout << csv;
      return kExitOk;
    }

    if (*evaluate) {
      const Manifest m = load_manifest(e_manifest);
      const auto scores = parse_score_csv(read_file(e_scores));
      std::vector<ScoreRecord> records;
      for (const auto& [id, score] : scores) {
        const ManifestEntry* e = m.find(id);
        if (!e) throw ProtocolError("scored clip '" + id + "' is not in the manifest");
        records.push_back({id, e->label, score});
      }
      CellReport cell;
      compute_cell_metrics(records, cell);
      if (e_json) {
        std::cout << nlohmann::json{{"eer", cell.eer},
                                    {"threshold", std::isfinite(cell.threshold)
                                                      ? nlohmann::json(cell.threshold)
                                                      : nlohmann::json(format_number(cell.threshold))},
                                    {"accuracy", cell.accuracy},
                                    {"auroc", cell.auroc},
                                    {"n_bona", cell.n_bona},
                                    {"n_spoof", cell.n_spoof}}
                         .dump(2)
                  << "\n";
      } else {
        std::cout << "eer " << format_number(cell.eer) << "\nthreshold " << format_number(cell.threshold)
                  << "\naccuracy " << format_number(cell.accuracy) << "\nauroc "
                  << format_number(cell.auroc) << "\nn_bona " << cell.n_bona << "\nn_spoof "
                  << cell.n_spoof << "\n";
      }
      return kExitOk;
    }

    if (*run) {
      RunConfig cfg = load_run_config(r_config);
      for (const auto& w : cfg.warnings) std::cerr << "warning: " << w << "\n";
      if (r_jobs) cfg.plan.jobs = *r_jobs;
      cfg.plan.detector_vars["adbench"] = shell_quote(self_path(argv[0]).string());
      RunOptions opt;
      opt.resume = r_resume;
      if (!r_quiet) {
        opt.on_cell = [](const CellReport& c, std::size_t i, std::size_t n, bool cached) {
          std::fprintf(stderr, "[%zu/%zu] %s/%s %s%s\n", i + 1, n, c.spec.label().c_str(),
                       c.spec.severity_text().c_str(), std::string(to_string(c.status)).c_str(),
                       cached ? " (cached)" : "");
        };
      }
      const auto rep = run_sweep(cfg.plan, opt);
      print_summary(rep);
      std::printf("outputs: %s\n", run_directory(cfg.plan).string().c_str());
      const bool any_failed = std::any_of(rep.cells.begin(), rep.cells.end(), [](const auto& c) {
        return c.status == CellStatus::kFailed;
      });
      if (any_failed) std::fprintf(stderr, "warning: some cells failed; see failures.jsonl\n");
      return kExitOk;
    }

    if (*augment) {
      std::vector<CorruptionSpec> recipes;
      for (const auto& a : a_recipes) {
        auto more = parse_cell_arg(a);
        recipes.insert(recipes.end(), more.begin(), more.end());
      }
      AugmentOptions opt;
      opt.mix_prob = a_mix;
      opt.seed = Seed{a_seed};
      opt.jobs = a_jobs;
      opt.context.codecs = parse_codec_args(a_codecs);
      NoiseCorpus noise;
      if (a_noise) {
        noise = load_noise_corpus(*a_noise);
        opt.context.noise = &noise;
      }
      const Manifest src = load_manifest(a_manifest);
      const Manifest out = export_augmented_set(src, recipes, a_out, opt);
      std::printf("%zu original + %zu augmented clips -> %s\n", src.size(), out.size() - src.size(),
                  (a_out / "manifest.csv").string().c_str());
      return kExitOk;
    }

    if (*report) {
      std::vector<RunReport> reports;
      for (const auto& d : p_runs) {
        if (!fs::is_directory(d)) throw ConfigError("run directory not found: " + d.string());
        reports.push_back(load_report(d));
      }
      if (p_group) {
        if (p_group->rfind("tag:", 0) != 0 || p_group->size() == 4)
          throw ConfigError("--group-by expects tag:NAME");
        if (reports.size() != 1) throw ConfigError("--group-by takes exactly one run directory");
        std::cout << group_by_csv(p_runs[0], reports[0], p_group->substr(4));
        return kExitOk;
      }
      if (p_format == "plotdata" || p_format == "svg") {
        if (!p_out) throw ConfigError("--format " + p_format + " needs --out");
        fs::create_directories(*p_out);
        const auto files = p_format == "svg" ? plot_svgs(reports) : plot_data(reports);
        for (const auto& [name, text] : files)
          write_file_atomic(*p_out / (name + (p_format == "svg" ? ".svg" : ".csv")), text);
        return kExitOk;
      }
      if (reports.size() != 1) throw ConfigError("--format " + p_format + " takes exactly one run directory");
      const auto& r = reports[0];
      std::string text;
      if (p_format == "csv") text = cells_csv(r.cells);
      if (p_format == "json") text = report_json(r);
      if (p_format == "quality") text = quality_csv(std::span<const CellReport>(r.cells));
      if (p_format == "radar") text = radar_csv(r.cells);
      if (p_out) {
        fs::create_directories(*p_out);
        const char* name = p_format == "csv" ? "cells.csv" : p_format == "json" ? "report.json"
                           : p_format == "quality" ? "quality.csv" : "radar.csv";
        write_file_atomic(*p_out / name, text);
      } else {
        std::cout << text;
      }
      return kExitOk;
    }

    if (*toy) {
      toy_detect_directory(t_in, t_out);
      return kExitOk;
    }

    if (*synth) {
      s_opt.seed = Seed{s_seed};
      const auto m = write_synthetic_corpus(s_out, s_opt);
      std::printf("%zu clips -> %s\n", m.size(), (s_out / "manifest.csv").string().c_str());
      return kExitOk;
    }

    if (*wavefake) {
      const auto m = wavefake_manifest(w_real, w_gen, Seed{w_seed});
      save_manifest(m, w_out);
      std::printf("%zu clips -> %s\n", m.size(), w_out.string().c_str());
      return kExitOk;
    }

    if (*schema) {
      std::cout << run_config_schema();
      return kExitOk;
    }

    std::cout << app.help();
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const AdapterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (!e.stderr_text().empty()) std::cerr << e.stderr_text();
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
