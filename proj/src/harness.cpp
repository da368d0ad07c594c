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

#include "adbench/harness.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <memory>
#include <set>

#include "json.hpp"

#include "adbench/csv.hpp"
#include "adbench/error.hpp"
#include "adbench/parallel.hpp"
#include "adbench/process.hpp"
#include "adbench/quality.hpp"
#include "adbench/report.hpp"

namespace adbench {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

fs::path private_dir_for(const fs::path& dir) {
  static std::atomic<unsigned> counter{0};
  return dir.parent_path() / (dir.filename().string() + ".tmp-" + std::to_string(::getpid()) +
                              "-" + std::to_string(counter++));
}

std::string source_hash(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "missing";
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return hex64(fnv1a64(bytes));
}

std::string noise_fingerprint(const NoiseCorpus& corpus) {
  std::uint64_t h = fnv1a64("noise");
  for (std::size_t i = 0; i < corpus.clips.size(); ++i) {
    h = fnv1a64(corpus.ids[i], h);
    const auto& s = corpus.clips[i].samples;
    h = fnv1a64(std::as_bytes(std::span<const double>(s)), h);
  }
  return hex64(h);
}

bool corrupts(const SweepPlan& plan, Label label) {
  return plan.corrupt_bona_fide || label == Label::kSpoof;
}

std::string failure_line(const std::string& cell, const ClipFailure& f) {
  json j;
  j["cell"] = cell;
  j["clip_id"] = f.clip_id.empty() ? json(nullptr) : json(f.clip_id);
  j["error"] = f.error;
  if (!f.stderr_text.empty()) j["stderr"] = f.stderr_text;
  return j.dump() + "\n";
}

std::vector<ClipFailure> read_failures(const fs::path& path) {
  std::vector<ClipFailure> out;
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json j = json::parse(line);
    ClipFailure f;
    if (j["clip_id"].is_string()) f.clip_id = j["clip_id"].get<std::string>();
    f.error = j.value("error", "");
    f.stderr_text = j.value("stderr", "");
    out.push_back(std::move(f));
  }
  return out;
}

std::string cell_name(const CorruptionSpec& spec) {
  return spec.label() + "/" + spec.severity_text();
}

std::string provenance_text(const SweepPlan& plan, const CorruptionSpec& spec,
                            const Manifest& clips, const CorruptionContext& context) {
  json p;
  p["engine_version"] = ADBENCH_VERSION;
  p["spec"] = {{"label", spec.label()},
               {"family", std::string(to_string(spec.family))},
               {"severity", spec.severity_text()}};
  p["run_seed"] = plan.seed.value;
  p["corrupt_bona_fide"] = plan.corrupt_bona_fide;
  if (spec.family == Family::kEcho) p["echo_decay"] = format_number(context.echo_decay);
  if (spec.family == Family::kCodec) {
    auto it = context.codecs.find(spec.codec_id);
    p["adapter"] = it == context.codecs.end() ? json(nullptr) : json(it->second.command);
  }
  if (spec.family == Family::kReplay)
    p["adapter"] = context.replay ? json(context.replay->command) : json(nullptr);
  if (spec.family == Family::kBackgroundNoise)
    p["noise"] = context.noise ? noise_fingerprint(*context.noise) : "none";
  json list = json::array();
  for (const auto& e : clips.entries) {
    list.push_back({{"clip_id", e.clip_id},
                    {"label", std::string(to_string(e.label))},
                    {"source", source_hash(e.path)},
                    {"seed", clip_seed(plan.seed, e.clip_id, spec).value}});
  }
  p["clips"] = std::move(list);
  return p.dump(1) + "\n";
}

}  // namespace

void validate(const SweepPlan& plan) {
  std::vector<std::string> problems;
  if (plan.run_id.empty() || !is_safe_clip_id(plan.run_id))
    problems.push_back("run_id '" + plan.run_id + "' must match [A-Za-z0-9._-]+");
  if (plan.detector.command.empty()) problems.push_back("detector command is not set");
  if (plan.output_root.empty()) problems.push_back("output root is not set");
  if (plan.manifest.empty())
    problems.push_back("manifest is not set");
  else if (!fs::exists(plan.manifest))
    problems.push_back("manifest not found: " + plan.manifest.string());
  std::set<std::pair<std::string, std::string>> seen;
  bool needs_noise = false;
  for (const auto& spec : plan.cells) {
    try {
      validate(spec);
    } catch (const ConfigError& e) {
      problems.push_back(std::string("cell ") + cell_name(spec) + ": " + e.what());
    }
    if (!seen.insert({spec.label(), spec.severity_text()}).second)
      problems.push_back("cell " + cell_name(spec) + " listed twice");
    if (spec.family == Family::kBackgroundNoise && std::isfinite(spec.severity)) needs_noise = true;
    if (spec.family == Family::kCodec && !plan.codecs.count(spec.codec_id))
      problems.push_back("cell " + cell_name(spec) + ": no adapter configured for codec '" +
                         spec.codec_id + "'");
    if (spec.family == Family::kReplay && !plan.replay)
      problems.push_back("cell " + cell_name(spec) + ": no replay adapter configured");
  }
  if (plan.cells.empty() && !plan.include_clean) problems.push_back("plan has no cells");
  if (needs_noise) {
    if (!plan.noise)
      problems.push_back("background_noise cells need a noise corpus");
    else if (!fs::exists(*plan.noise))
      problems.push_back("noise corpus not found: " + plan.noise->string());
  }
  if (plan.visqol_command) {
    const std::string prog = command_program(*plan.visqol_command);
    if (!find_executable(prog)) problems.push_back("ViSQOL tool not found: " + prog);
  }
  if (!(plan.max_failure_fraction >= 0.0 && plan.max_failure_fraction < 1.0))
    problems.push_back("max_failure_fraction must lie in [0, 1)");
  if (!(plan.echo_decay > 0.0 && plan.echo_decay <= 1.0))
    problems.push_back("echo_decay must lie in (0, 1]");
  if (!problems.empty()) {
    std::string msg = "invalid run plan:";
    for (const auto& p : problems) msg += "\n  - " + p;
    throw ConfigError(msg);
  }
}

std::vector<CorruptionSpec> planned_cells(const SweepPlan& plan) {
  std::vector<CorruptionSpec> cells;
  const bool has_identity = std::any_of(plan.cells.begin(), plan.cells.end(), [](const auto& s) {
    return s.family == Family::kIdentity;
  });
  if (plan.include_clean && !has_identity) cells.push_back(CorruptionSpec{});
  cells.insert(cells.end(), plan.cells.begin(), plan.cells.end());
  return cells;
}

fs::path run_directory(const SweepPlan& plan) { return plan.output_root / plan.run_id; }

fs::path cell_directory(const fs::path& run_dir, const CorruptionSpec& spec) {
  return run_dir / "cells" / spec.label() / spec.severity_text();
}

NoiseCorpus load_noise_corpus(const fs::path& path) {
  NoiseCorpus corpus;
  std::vector<std::pair<std::string, fs::path>> files;
  if (fs::is_directory(path)) {
    for (const auto& de : fs::directory_iterator(path))
      if (de.is_regular_file() && de.path().extension() == ".wav")
        files.emplace_back(de.path().stem().string(), de.path());
    std::sort(files.begin(), files.end());
  } else {
    for (const auto& e : load_manifest(path).entries) files.emplace_back(e.clip_id, e.path);
  }
  if (files.empty()) throw ConfigError("noise corpus " + path.string() + " holds no clips");
  for (const auto& [id, file] : files) {
    corpus.ids.push_back(id);
    corpus.clips.push_back(resample(load_audio(file), kDetectorRate));
  }
  return corpus;
}

MaterializeResult materialize_cell(const SweepPlan& plan, const CorruptionSpec& spec,
                                   const Manifest& clips, const CorruptionContext& context,
                                   const fs::path& dir) {
  validate(spec);
  MaterializeResult result;
  result.dir = dir;
  const std::string provenance = provenance_text(plan, spec, clips, context);
  auto finish = [&] {
    std::set<std::string> failed;
    for (const auto& f : result.failures) failed.insert(f.clip_id);
    for (const auto& e : clips.entries)
      if (!failed.count(e.clip_id)) result.ok_clips.push_back(e.clip_id);
    result.cell_failed = static_cast<double>(result.failures.size()) >
                         plan.max_failure_fraction * static_cast<double>(clips.size());
    return result;
  };

  if (fs::exists(dir / "provenance.json")) {
    try {
      if (read_file(dir / "provenance.json") == provenance) {
        result.cache_hit = true;
        result.failures = read_failures(dir / "failures.jsonl");
        return finish();
      }
    } catch (const std::exception&) {
      // unreadable cache: regenerate
    }
  }

  fs::create_directories(dir.parent_path());
  const fs::path tmp = private_dir_for(dir);
  fs::create_directories(tmp);
  std::vector<std::optional<ClipFailure>> failures(clips.size());
  const CorruptionSpec identity{};
  parallel_for(clips.size(), plan.jobs, [&](std::size_t i) {
    const auto& e = clips.entries[i];
    const CorruptionSpec& use = corrupts(plan, e.label) ? spec : identity;
    try {
      const auto clean = resample(load_audio(e.path), kDetectorRate);
      const auto out = apply(clean, use, clip_seed(plan.seed, e.clip_id, spec), context);
      save_audio(out, tmp / (e.clip_id + ".wav"));
    } catch (const AdapterError& err) {
      failures[i] = ClipFailure{e.clip_id, err.what(), err.stderr_text()};
    } catch (const std::exception& err) {
      failures[i] = ClipFailure{e.clip_id, err.what(), {}};
    }
  });
  std::string failure_text;
  for (auto& f : failures) {
    if (!f) continue;
    failure_text += failure_line(cell_name(spec), *f);
    result.failures.push_back(std::move(*f));
  }
  result.written = clips.size() - result.failures.size();
  write_file_atomic(tmp / "failures.jsonl", failure_text);
  write_file_atomic(tmp / "provenance.json", provenance);
  fs::remove_all(dir);
  fs::rename(tmp, dir);
  return finish();
}

namespace {

struct CellOutcome {
  CellReport report;
  std::vector<ClipFailure> failures;
};

json outcome_json(const std::string& key, const CellOutcome& o) {
  json fails = json::array();
  for (const auto& f : o.failures)
    fails.push_back({{"clip_id", f.clip_id}, {"error", f.error}, {"stderr", f.stderr_text}});
  return {{"key", key}, {"cell", cell_to_json(o.report)}, {"failures", fails}};
}

std::optional<CellOutcome> load_outcome(const fs::path& path, const std::string& key) {
  if (!fs::exists(path)) return std::nullopt;
  try {
    const json j = json::parse(read_file(path));
    if (j.at("key").get<std::string>() != key) return std::nullopt;
    CellOutcome o;
    o.report = cell_from_json(j.at("cell"));
    for (const auto& f : j.at("failures"))
      o.failures.push_back({f.at("clip_id").get<std::string>(), f.at("error").get<std::string>(),
                            f.at("stderr").get<std::string>()});
    return o;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

AudioBuffer pcm16_roundtrip(const AudioBuffer& x) {
  const auto bytes = encode_wav(x);
  return decode_wav(bytes);
}

}  // namespace

RunReport run_sweep(const SweepPlan& plan, const RunOptions& options) {
  validate(plan);
  const fs::path run_dir = run_directory(plan);
  if (fs::exists(run_dir / "run.json") && !options.resume)
    throw ConfigError("run directory " + run_dir.string() +
                      " already exists; resume it or choose another run_id");
  fs::create_directories(run_dir);

  const Manifest clips = select(load_manifest(plan.manifest), plan.split, plan.tag_filter);
  if (clips.entries.empty()) throw ConfigError("corpus selection is empty");
  save_manifest(clips, run_dir / "manifest.csv");
  write_file_atomic(run_dir / "run.json",
                    json{{"run_id", plan.run_id}, {"engine_version", ADBENCH_VERSION}}.dump(1) + "\n");

  const auto cells = planned_cells(plan);
  NoiseCorpus noise;
  CorruptionContext context;
  context.codecs = plan.codecs;
  context.replay = plan.replay;
  context.echo_decay = plan.echo_decay;
  if (plan.noise) {
    noise = load_noise_corpus(*plan.noise);
    context.noise = &noise;
  }
  std::unique_ptr<VisqolAdapter> visqol;
  if (plan.visqol_command) {
    const fs::path cache =
        plan.quality_cache_dir.empty() ? run_dir / "cache" / "visqol" : plan.quality_cache_dir;
    visqol = std::make_unique<VisqolAdapter>(*plan.visqol_command, cache);
  }
  std::map<std::string, Label> labels;
  for (const auto& e : clips.entries) labels[e.clip_id] = e.label;

  RunReport report;
  report.run_id = plan.run_id;
  report.detector = plan.detector.name;
  report.seed = plan.seed;
  report.corrupt_bona_fide = plan.corrupt_bona_fide;
  report.quality_gate = plan.quality_gate;
  report.quality_available = visqol != nullptr;
  report.quality_sample_n = plan.quality_sample_n;
  report.n_clips = clips.size();

  std::vector<std::vector<ClipFailure>> all_failures;
  for (std::size_t index = 0; index < cells.size(); ++index) {
    if (index >= options.stop_after) {
      report.complete = false;
      break;
    }
    const auto& spec = cells[index];
    const fs::path cell_dir = cell_directory(run_dir, spec);
    const fs::path result_path =
        run_dir / "results" / spec.label() / (spec.severity_text() + ".json");
    const std::string provenance = provenance_text(plan, spec, clips, context);
    json key_src = {{"provenance", provenance},
                    {"detector", plan.detector.name},
                    {"detector_command", plan.detector.command},
                    {"visqol", visqol ? json(visqol->command()) : json(nullptr)},
                    {"quality_sample_n", plan.quality_sample_n},
                    {"max_failure_fraction", plan.max_failure_fraction}};
    const std::string key = hex64(fnv1a64(key_src.dump()));

    if (auto cached = load_outcome(result_path, key);
        cached && fs::exists(cell_dir / "provenance.json")) {
      if (options.on_cell) options.on_cell(cached->report, index, cells.size(), true);
      report.cells.push_back(std::move(cached->report));
      all_failures.push_back(std::move(cached->failures));
      continue;
    }

    CellOutcome out;
    out.report.spec = spec;
    try {
      auto mat = materialize_cell(plan, spec, clips, context, cell_dir);
      out.failures = mat.failures;
      out.report.n_failed_clips = mat.failures.size();
      if (mat.cell_failed) {
        out.report.status = CellStatus::kFailed;
        out.report.note = std::to_string(mat.failures.size()) + " of " +
                          std::to_string(clips.size()) + " clips failed";
      } else {
        // quality sample over the clips that were actually corrupted
        std::vector<std::string> eligible;
        for (const auto& id : mat.ok_clips)
          if (corrupts(plan, labels[id])) eligible.push_back(id);
        const auto picks = sample_indices(eligible.size(),
                                          std::min(plan.quality_sample_n, eligible.size()),
                                          quality_sample_seed(plan.seed, spec));
        std::vector<std::optional<QualityRecord>> records(picks.size());
        std::vector<std::optional<ClipFailure>> qfail(picks.size());
        parallel_for(picks.size(), plan.jobs, [&](std::size_t i) {
          const std::string& id = eligible[picks[i]];
          try {
            const auto clean = pcm16_roundtrip(resample(load_audio(clips.find(id)->path), kDetectorRate));
            const auto corrupted = load_audio(cell_dir / (id + ".wav"));
            records[i] = measure_pair(id, clean, corrupted, visqol.get());
          } catch (const AdapterError& err) {
            qfail[i] = ClipFailure{id, std::string("quality: ") + err.what(), err.stderr_text()};
          } catch (const std::exception& err) {
            qfail[i] = ClipFailure{id, std::string("quality: ") + err.what(), {}};
          }
        });
        std::vector<QualityRecord> ok_records;
        for (std::size_t i = 0; i < picks.size(); ++i) {
          if (records[i]) ok_records.push_back(std::move(*records[i]));
          if (qfail[i]) out.failures.push_back(std::move(*qfail[i]));
        }
        const auto stats = summarize(ok_records);
        out.report.mean_visqol = stats.mean_visqol;
        out.report.std_visqol = stats.std_visqol;
        out.report.mean_snr = stats.mean_snr;
        out.report.acceptable = stats.acceptable;
        out.report.quality_n = stats.n;

        std::vector<std::pair<std::string, Label>> expected;
        for (const auto& id : mat.ok_clips) expected.emplace_back(id, labels[id]);
        const fs::path scores_path =
            run_dir / "scores" / spec.label() / (spec.severity_text() + ".csv");
        const auto scores =
            invoke_detector(plan.detector, cell_dir, expected, scores_path, plan.detector_vars);
        compute_cell_metrics(scores, out.report);
      }
    } catch (const AdapterError& err) {
      out.report.status = CellStatus::kFailed;
      out.report.note = err.what();
      out.failures.push_back({"", err.what(), err.stderr_text()});
    } catch (const Error& err) {
      out.report.status = CellStatus::kFailed;
      out.report.note = err.what();
      out.failures.push_back({"", err.what(), {}});
    }
    fs::create_directories(result_path.parent_path());
    write_file_atomic(result_path, outcome_json(key, out).dump(1) + "\n");
    if (options.on_cell) options.on_cell(out.report, index, cells.size(), false);
    report.cells.push_back(out.report);
    all_failures.push_back(std::move(out.failures));
  }

  std::string failure_text;
  for (std::size_t i = 0; i < report.cells.size(); ++i)
    for (const auto& f : all_failures[i]) failure_text += failure_line(cell_name(report.cells[i].spec), f);
  write_file_atomic(run_dir / "failures.jsonl", failure_text);
  write_run_outputs(run_dir, report, plan.write_svg);
  return report;
}

std::vector<AugmentChoice> plan_augmentation(const Manifest& manifest,
                                             const std::vector<CorruptionSpec>& recipes,
                                             double mix_prob, Seed seed) {
  if (recipes.empty()) throw ConfigError("augmentation needs at least one recipe");
  if (!(mix_prob >= 0.0 && mix_prob <= 1.0)) throw ConfigError("mix_prob must lie in [0, 1]");
  std::vector<std::string> order;
  std::map<std::string, std::vector<CorruptionSpec>> by_label;
  for (const auto& r : recipes) {
    validate(r);
    if (!by_label.count(r.label())) order.push_back(r.label());
    by_label[r.label()].push_back(r);
  }
  std::vector<AugmentChoice> out(manifest.size());
  for (std::size_t i = 0; i < manifest.size(); ++i) {
    const auto& e = manifest.entries[i];
    if (e.split != Split::kTrain) continue;
    Rng rng(derive_seed(seed, {"augment", e.clip_id}));
    if (!(rng.uniform() < mix_prob)) continue;
    const auto& options = by_label[order[rng.below(order.size())]];
    out[i].spec = options[rng.below(options.size())];
  }
  return out;
}

Manifest export_augmented_set(const Manifest& manifest, const std::vector<CorruptionSpec>& recipes,
                              const fs::path& out_dir, const AugmentOptions& options) {
  const auto choices = plan_augmentation(manifest, recipes, options.mix_prob, options.seed);
  fs::create_directories(out_dir / "audio");
  std::vector<std::optional<ClipFailure>> failures(manifest.size());
  const Seed corrupt_seed = derive_seed(options.seed, {"augment-corrupt"});
  for (std::size_t i = 0; i < manifest.size(); ++i)
    if (choices[i].spec && manifest.find(manifest.entries[i].clip_id + "-aug"))
      throw ConfigError("augmented id '" + manifest.entries[i].clip_id + "-aug' already exists");
  parallel_for(manifest.size(), options.jobs, [&](std::size_t i) {
    if (!choices[i].spec) return;
    const auto& e = manifest.entries[i];
    const auto& spec = *choices[i].spec;
    try {
      const auto clean = resample(load_audio(e.path), kDetectorRate);
      save_audio(apply(clean, spec, clip_seed(corrupt_seed, e.clip_id, spec), options.context),
                 out_dir / "audio" / (e.clip_id + "-aug.wav"));
    } catch (const AdapterError& err) {
      failures[i] = ClipFailure{e.clip_id, err.what(), err.stderr_text()};
    } catch (const std::exception& err) {
      failures[i] = ClipFailure{e.clip_id, err.what(), {}};
    }
  });

  Manifest out = manifest;
  std::string failure_text;
  std::size_t attempted = 0;
  std::size_t failed = 0;
  for (std::size_t i = 0; i < manifest.size(); ++i) {
    if (!choices[i].spec) continue;
    ++attempted;
    const auto& spec = *choices[i].spec;
    if (failures[i]) {
      ++failed;
      failure_text += failure_line(cell_name(spec), *failures[i]);
      continue;
    }
    ManifestEntry aug = manifest.entries[i];
    aug.clip_id += "-aug";
    aug.path = fs::absolute(out_dir / "audio" / (aug.clip_id + ".wav"));
    aug.tags["augmented_from"] = manifest.entries[i].clip_id;
    aug.tags["aug_family"] = spec.label();
    aug.tags["aug_severity"] = spec.severity_text();
    out.entries.push_back(std::move(aug));
  }
  write_file_atomic(out_dir / "failures.jsonl", failure_text);
  if (static_cast<double>(failed) > options.max_failure_fraction * static_cast<double>(attempted))
    throw Error(std::to_string(failed) + " of " + std::to_string(attempted) +
                " augmentations failed; see " + (out_dir / "failures.jsonl").string());
  save_manifest(out, out_dir / "manifest.csv");
  return out;
}

}  // namespace adbench
