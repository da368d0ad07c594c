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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

#include "adbench/csv.hpp"
#include "adbench/error.hpp"
#include "adbench/harness.hpp"
#include "adbench/process.hpp"
#include "adbench/quality.hpp"
#include "adbench/report.hpp"
#include "adbench/synth.hpp"

namespace fs = std::filesystem;
using namespace adbench;

namespace {

const std::string kTool = ADBENCH_FIXTURE_TOOL;

std::string fixture_detector(const std::string& mode) {
  return shell_quote(kTool) + " detector " + mode + " {input_dir} {output_csv}";
}

struct Corpus {
  TempDir dir;
  Manifest manifest;
  explicit Corpus(std::size_t n = 20, double seconds = 0.5) {
    SynthOptions o;
    o.n_clips = n;
    o.duration_s = seconds;
    manifest = write_synthetic_corpus(dir.path(), o);
  }
  fs::path manifest_path() const { return dir.path() / "manifest.csv"; }
};

SweepPlan base_plan(const Corpus& corpus, const fs::path& root) {
  SweepPlan plan;
  plan.run_id = "t";
  plan.detector = {"toy", std::string(kBuiltinToyDetector)};
  plan.manifest = corpus.manifest_path();
  plan.output_root = root;
  plan.noise = corpus.dir.path() / "noise";
  plan.jobs = 2;
  plan.write_svg = true;
  return plan;
}

std::vector<std::pair<std::string, Label>> expected_of(const Manifest& m) {
  std::vector<std::pair<std::string, Label>> out;
  for (const auto& e : m.entries) out.emplace_back(e.clip_id, e.label);
  return out;
}

}  // namespace

TEST(Synthetic, CorpusLayoutAndDeterminism) {
  Corpus a(12);
  Corpus b(12);
  ASSERT_EQ(a.manifest.size(), 12u);
  for (std::size_t i = 0; i < 12; ++i) {
    EXPECT_EQ(a.manifest.entries[i].label, i % 2 ? Label::kSpoof : Label::kBonaFide);
    EXPECT_TRUE(a.manifest.entries[i].tags.count("speaker"));
    EXPECT_EQ(read_file(a.manifest.entries[i].path), read_file(b.manifest.entries[i].path));
  }
  EXPECT_EQ(load_manifest(a.manifest_path()).size(), 12u);
  EXPECT_EQ(load_noise_corpus(a.dir.path() / "noise").clips.size(), 4u);
}

TEST(ToyDetector, SeparatesSyntheticClasses) {
  Corpus c(40);
  std::vector<ScoreRecord> records;
  for (const auto& e : c.manifest.entries)
    records.push_back({e.clip_id, e.label, toy_score(load_audio(e.path), e.clip_id)});
  EXPECT_GE(auroc(records), 0.95);
  EXPECT_EQ(toy_score(AudioBuffer{std::vector<double>(16000, 0.0), 16000}, "s"), 0.0);
}

TEST(Detector, ParseScoreCsv) {
  const auto s = parse_score_csv("clip_id,score\na,0.5\nb, -2 \nc,+1e-3\n");
  EXPECT_EQ(s.at("b"), -2.0);
  EXPECT_EQ(s.at("c"), 1e-3);
  EXPECT_THROW(parse_score_csv("id,score\na,1\n"), ProtocolError);
  EXPECT_THROW(parse_score_csv("clip_id,score\na,x\n"), ProtocolError);
  EXPECT_THROW(parse_score_csv("clip_id,score\na,inf\n"), ProtocolError);
  EXPECT_THROW(parse_score_csv("clip_id,score\na,1\na,2\n"), ProtocolError);
}

TEST(Detector, ProtocolChecks) {
  Corpus c(6);
  TempDir out;
  const auto expected = expected_of(c.manifest);
  const fs::path audio = c.dir.path() / "audio";
  const fs::path csv = out.path() / "s.csv";

  auto toy = invoke_detector({"toy", std::string(kBuiltinToyDetector)}, audio, expected, csv);
  EXPECT_EQ(toy.size(), 6u);
  auto energy = invoke_detector({"energy", fixture_detector("energy")}, audio, expected, csv);
  EXPECT_EQ(energy.size(), 6u);

  try {
    invoke_detector({"omit", fixture_detector("omit")}, audio, expected, csv);
    FAIL();
  } catch (const ProtocolError& e) {
    EXPECT_NE(std::string(e.what()).find(c.manifest.entries[0].clip_id), std::string::npos);
  }
  EXPECT_THROW(invoke_detector({"d", fixture_detector("duplicate")}, audio, expected, csv),
               ProtocolError);
  EXPECT_THROW(invoke_detector({"n", fixture_detector("nan")}, audio, expected, csv),
               ProtocolError);
  try {
    invoke_detector({"f", fixture_detector("fail")}, audio, expected, csv);
    FAIL();
  } catch (const AdapterError& e) {
    EXPECT_NE(e.stderr_text().find("crashed"), std::string::npos);
  }
  const std::vector<std::pair<std::string, Label>> fewer(expected.begin(), expected.end() - 1);
  EXPECT_THROW(invoke_detector({"toy", std::string(kBuiltinToyDetector)}, audio, fewer, csv),
               ProtocolError);
  EXPECT_THROW(invoke_detector({"none", "true"}, audio, expected, csv), ProtocolError);

  const auto constant = invoke_detector({"c", fixture_detector("constant")}, audio, expected, csv);
  EXPECT_EQ(auroc(constant), 0.5);
}

TEST(Materialize, NoiseCellHitsSnrAndCaches) {
  Corpus c(10);
  TempDir root;
  const auto plan = base_plan(c, root.path());
  const auto spec = CorruptionSpec::parse("gaussian_noise", 20);
  const fs::path dir = root.path() / "cell";
  auto r = materialize_cell(plan, spec, c.manifest, {}, dir);
  EXPECT_FALSE(r.cache_hit);
  EXPECT_EQ(r.written, 10u);
  EXPECT_EQ(r.ok_clips.size(), 10u);
  EXPECT_TRUE(fs::exists(dir / "provenance.json"));
  for (const auto& e : c.manifest.entries) {
    const auto clean = load_audio(e.path);
    const auto noisy = load_audio(dir / (e.clip_id + ".wav"));
    EXPECT_NEAR(snr_db(clean, noisy), 20.0, 0.1) << e.clip_id;
  }
  const auto before = fs::last_write_time(dir / (c.manifest.entries[0].clip_id + ".wav"));
  auto again = materialize_cell(plan, spec, c.manifest, {}, dir);
  EXPECT_TRUE(again.cache_hit);
  EXPECT_EQ(again.written, 0u);
  EXPECT_EQ(fs::last_write_time(dir / (c.manifest.entries[0].clip_id + ".wav")), before);

  auto reseeded = plan;
  reseeded.seed = Seed{plan.seed.value + 1};
  auto changed = materialize_cell(reseeded, spec, c.manifest, {}, dir);
  EXPECT_FALSE(changed.cache_hit);
  EXPECT_EQ(changed.written, 10u);
}

TEST(Materialize, PerClipSeedIgnoresOtherCells) {
  const auto a = CorruptionSpec::parse("gaussian_noise", 20);
  const auto b = CorruptionSpec::parse("gaussian_noise", 10);
  EXPECT_EQ(clip_seed(Seed{1}, "x", a), clip_seed(Seed{1}, "x", a));
  EXPECT_NE(clip_seed(Seed{1}, "x", a), clip_seed(Seed{1}, "x", b));
  EXPECT_NE(clip_seed(Seed{1}, "x", a), clip_seed(Seed{1}, "y", a));
  EXPECT_NE(clip_seed(Seed{1}, "x", a), clip_seed(Seed{2}, "x", a));
}

TEST(Materialize, FailuresAreIsolatedAndThresholded) {
  Corpus c(30);
  TempDir root;
  auto plan = base_plan(c, root.path());
  auto clips = c.manifest;
  clips.entries[3].path = c.dir.path() / "gone.wav";
  const auto spec = CorruptionSpec::parse("quantize", 8);
  auto r = materialize_cell(plan, spec, clips, {}, root.path() / "a");
  ASSERT_EQ(r.failures.size(), 1u);
  EXPECT_EQ(r.failures[0].clip_id, clips.entries[3].clip_id);
  EXPECT_EQ(r.ok_clips.size(), 29u);
  EXPECT_FALSE(r.cell_failed);  // 1/30 < 5%
  EXPECT_NE(read_file(root.path() / "a/failures.jsonl").find(clips.entries[3].clip_id),
            std::string::npos);

  clips.entries[4].path = c.dir.path() / "gone2.wav";
  r = materialize_cell(plan, spec, clips, {}, root.path() / "b");
  EXPECT_TRUE(r.cell_failed);  // 2/30 > 5%

  CorruptionContext ctx;
  ctx.codecs["opus"] = {"opus", shell_quote(kTool) + " fail"};
  r = materialize_cell(plan, CorruptionSpec::parse("opus", 24), c.manifest, ctx, root.path() / "c");
  EXPECT_TRUE(r.cell_failed);
  EXPECT_EQ(r.failures.size(), 30u);
  EXPECT_NE(r.failures[0].stderr_text.find("boom"), std::string::npos);
}

TEST(Materialize, CleanBonaFideWhenConfigured) {
  Corpus c(4);
  TempDir root;
  auto plan = base_plan(c, root.path());
  plan.corrupt_bona_fide = false;
  materialize_cell(plan, CorruptionSpec::parse("quantize", 3), c.manifest, {}, root.path() / "q");
  for (const auto& e : c.manifest.entries) {
    const bool same = read_file(e.path) == read_file(root.path() / "q" / (e.clip_id + ".wav"));
    EXPECT_EQ(same, e.label == Label::kBonaFide) << e.clip_id;
  }
}

TEST(Plan, ValidationListsEveryProblem) {
  SweepPlan plan;
  plan.run_id = "bad id";
  plan.cells = {CorruptionSpec{Family::kLowPass, 1.5, ""}, CorruptionSpec::parse("opus", 24),
                CorruptionSpec::parse("background_noise", 10)};
  plan.visqol_command = "/nonexistent/visqol --reference_file {ref}";
  try {
    validate(plan);
    FAIL();
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    for (const char* part : {"run_id", "detector", "output root", "manifest", "low_pass",
                             "codec 'opus'", "noise corpus", "ViSQOL"})
      EXPECT_NE(msg.find(part), std::string::npos) << part;
  }
}

TEST(Sweep, SmokeOneCell) {
  Corpus c(20);
  TempDir root;
  auto plan = base_plan(c, root.path());
  plan.include_clean = false;
  plan.cells = {CorruptionSpec::parse("gaussian_noise", 20)};
  const auto report = run_sweep(plan);
  ASSERT_EQ(report.cells.size(), 1u);
  const auto& cell = report.cells[0];
  EXPECT_EQ(cell.status, CellStatus::kOk);
  EXPECT_TRUE(std::isfinite(cell.eer) && std::isfinite(cell.auroc));
  EXPECT_EQ(cell.n_bona + cell.n_spoof, 20u);
  EXPECT_FALSE(cell.quality_known());
  EXPECT_NEAR(*cell.mean_snr, 20.0, 0.1);
  const fs::path run = root.path() / "t";
  for (const char* f : {"report.json", "cells.csv", "quality.csv", "radar.csv", "failures.jsonl",
                        "plotdata/gaussian_noise.csv", "plots/gaussian_noise.svg",
                        "plots/radar.svg", "manifest.csv"})
    EXPECT_TRUE(fs::exists(run / f)) << f;
  EXPECT_THROW(run_sweep(plan), ConfigError);  // exists, not resumed
}

TEST(Sweep, IdentityCellMatchesDirectScoring) {
  Corpus c(20);
  TempDir root;
  auto plan = base_plan(c, root.path());
  const auto report = run_sweep(plan);
  ASSERT_EQ(report.cells.size(), 1u);
  std::vector<ScoreRecord> direct;
  for (const auto& e : c.manifest.entries)
    direct.push_back({e.clip_id, e.label, toy_score(load_audio(e.path), e.clip_id)});
  CellReport expected;
  compute_cell_metrics(direct, expected);
  EXPECT_EQ(report.cells[0].eer, expected.eer);
  EXPECT_EQ(report.cells[0].auroc, expected.auroc);
  EXPECT_EQ(report.cells[0].accuracy, expected.accuracy);
  EXPECT_EQ(*report.cells[0].mean_snr, std::numeric_limits<double>::infinity());
}

TEST(Sweep, ResumeAfterInterruptMatchesFullRun) {
  Corpus c(20);
  TempDir a;
  TempDir b;
  auto plan = base_plan(c, a.path());
  plan.cells = {CorruptionSpec::parse("gaussian_noise", 10), CorruptionSpec::parse("low_pass", 0.5),
                CorruptionSpec::parse("echo", 0.1), CorruptionSpec::parse("background_noise", 10)};
  const auto full = run_sweep(plan);
  EXPECT_TRUE(full.complete);

  plan.output_root = b.path();
  RunOptions stop;
  stop.stop_after = 2;
  const auto partial = run_sweep(plan, stop);
  EXPECT_FALSE(partial.complete);
  EXPECT_EQ(partial.cells.size(), 2u);

  RunOptions resume;
  resume.resume = true;
  std::size_t cached = 0;
  resume.on_cell = [&](const CellReport&, std::size_t, std::size_t, bool hit) { cached += hit; };
  run_sweep(plan, resume);
  EXPECT_EQ(cached, 2u);
  for (const char* f : {"report.json", "cells.csv", "quality.csv", "failures.jsonl", "radar.csv"})
    EXPECT_EQ(read_file(a.path() / "t" / f), read_file(b.path() / "t" / f)) << f;

  cached = 0;
  run_sweep(plan, resume);
  EXPECT_EQ(cached, 5u);
}

TEST(Sweep, WorkerCountDoesNotChangeResults) {
  Corpus c(16);
  TempDir a;
  TempDir b;
  auto plan = base_plan(c, a.path());
  plan.cells = {CorruptionSpec::parse("gaussian_noise", 5), CorruptionSpec::parse("pitch_shift", 1.5),
                CorruptionSpec::parse("time_stretch", 0.8)};
  plan.visqol_command = shell_quote(kTool) + " quality {ref} {deg}";
  plan.jobs = 1;
  run_sweep(plan);
  plan.output_root = b.path();
  plan.jobs = 4;
  run_sweep(plan);
  for (const char* f : {"report.json", "cells.csv", "quality.csv", "cells/pitch_shift/1.5/synth0003.wav"})
    EXPECT_EQ(read_file(a.path() / "t" / f), read_file(b.path() / "t" / f)) << f;
}

TEST(Sweep, QualityToolAndGating) {
  Corpus c(10);
  TempDir root;
  auto plan = base_plan(c, root.path());
  plan.cells = {CorruptionSpec::parse("gaussian_noise", 40), CorruptionSpec::parse("gaussian_noise", 5)};
  plan.visqol_command = shell_quote(kTool) + " quality {ref} {deg}";
  plan.quality_sample_n = 4;
  const auto report = run_sweep(plan);
  ASSERT_EQ(report.cells.size(), 3u);
  EXPECT_TRUE(report.quality_available);
  EXPECT_GE(*report.cells[0].mean_visqol, 4.5);
  EXPECT_EQ(report.cells[1].quality_n, 4u);
  EXPECT_TRUE(report.cells[1].acceptable);    // 40 dB -> 4.9
  EXPECT_FALSE(report.cells[2].acceptable);   // 5 dB -> 1.5
  const auto gated = aggregate_categories(report.cells, true);
  EXPECT_EQ(gated[0].n_cells, 1u);
  EXPECT_EQ(*gated[0].mean_accuracy, report.cells[1].accuracy);
}

TEST(Sweep, DetectorFailureMarksCellAndRunCompletes) {
  Corpus c(10);
  TempDir root;
  auto plan = base_plan(c, root.path());
  plan.detector = {"broken", fixture_detector("fail")};
  plan.cells = {CorruptionSpec::parse("quantize", 8)};
  const auto report = run_sweep(plan);
  ASSERT_EQ(report.cells.size(), 2u);
  for (const auto& cell : report.cells) EXPECT_EQ(cell.status, CellStatus::kFailed);
  EXPECT_NE(read_file(root.path() / "t/failures.jsonl").find("detector crashed"), std::string::npos);
  EXPECT_TRUE(report.complete);
}

TEST(Report, JsonRoundTripAndRerender) {
  Corpus c(20);
  TempDir root;
  auto plan = base_plan(c, root.path());
  plan.cells = {CorruptionSpec::parse("gaussian_noise", 10), CorruptionSpec::parse("pitch_shift", -2),
                CorruptionSpec::parse("quantize", 4)};
  const auto report = run_sweep(plan);
  const fs::path run = root.path() / "t";
  const auto loaded = load_report(run);
  EXPECT_EQ(report_json(loaded), read_file(run / "report.json"));
  EXPECT_EQ(cells_csv(loaded.cells), read_file(run / "cells.csv"));

  const auto radar = read_csv_file(run / "radar.csv");
  ASSERT_EQ(radar.size(), 4u);
  EXPECT_EQ(radar[1][0], "noise");
  EXPECT_EQ(radar[2][0], "modification");
  EXPECT_EQ(radar[3][0], "compression");
  EXPECT_EQ(radar[1][1], "");  // quality unknown: gate excludes every cell
  EXPECT_EQ(radar[1][3], format_number(report.cells[1].accuracy));

  const auto j = nlohmann::json::parse(read_file(run / "report.json"));
  EXPECT_EQ(j["cells"]["pitch_shift"]["-2"]["status"], "ok");
  EXPECT_TRUE(j["cells"]["identity"]["0"]["mean_snr"] == "inf");

  std::istringstream text(group_by_csv(run, loaded, "speaker"));
  const auto groups = read_csv(text);
  EXPECT_EQ(groups[0], (CsvRow{"family", "severity", "tag", "value", "n_bona", "n_spoof", "accuracy"}));
  ASSERT_EQ(groups.size(), 1u + 4u * 7u);
  // per-speaker accuracies recombine into the cell accuracy
  double correct = 0.0;
  for (std::size_t r = 1; r <= 7; ++r) {
    EXPECT_EQ(groups[r][0], "identity");
    correct += std::stod(groups[r][6]) * (std::stod(groups[r][4]) + std::stod(groups[r][5]));
  }
  EXPECT_NEAR(correct / 20.0, loaded.cells[0].accuracy, 1e-12);
}

TEST(Augment, RecipeCountsAreBinomial) {
  Manifest m;
  for (int i = 0; i < 1000; ++i)
    m.entries.push_back({"c" + std::to_string(i), "x.wav", Label::kSpoof, Split::kTrain, {}});
  const std::vector<CorruptionSpec> recipes{
      CorruptionSpec::parse("pitch_shift", -2), CorruptionSpec::parse("pitch_shift", 2),
      CorruptionSpec::parse("encodec", 6),      CorruptionSpec::parse("opus", 24),
      CorruptionSpec::parse("time_stretch", 0.8), CorruptionSpec::parse("time_stretch", 1.2)};
  const auto plan = plan_augmentation(m, recipes, 0.5, Seed{42});
  std::map<std::string, int> counts;
  std::map<std::string, int> severities;
  for (const auto& c : plan)
    if (c.spec) {
      ++counts[c.spec->label()];
      ++severities[c.spec->label() + "/" + c.spec->severity_text()];
    }
  ASSERT_EQ(counts.size(), 4u);
  const double sigma = std::sqrt(1000 * 0.125 * 0.875);
  for (const auto& [label, n] : counts) EXPECT_NEAR(n, 125.0, 4 * sigma) << label;
  // within pitch_shift, both severities are drawn
  EXPECT_GT(severities["pitch_shift/-2"], 30);
  EXPECT_GT(severities["pitch_shift/2"], 30);
  EXPECT_EQ(plan_augmentation(m, recipes, 0.5, Seed{42}).size(), plan.size());
  EXPECT_THROW(plan_augmentation(m, {}, 0.5, Seed{1}), ConfigError);
  EXPECT_THROW(plan_augmentation(m, recipes, 1.5, Seed{1}), ConfigError);
}

TEST(Augment, OnlyTrainClipsAndOriginalsKept) {
  Corpus c(20);
  TempDir out;
  AugmentOptions opt;
  opt.mix_prob = 1.0;
  const std::vector<CorruptionSpec> recipes{CorruptionSpec::parse("pitch_shift", 2),
                                            CorruptionSpec::parse("time_stretch", 1.25)};
  const auto m = export_augmented_set(c.manifest, recipes, out.path(), opt);
  std::size_t train = 0;
  for (const auto& e : c.manifest.entries) train += e.split == Split::kTrain;
  EXPECT_EQ(m.size(), c.manifest.size() + train);
  for (std::size_t i = 0; i < c.manifest.size(); ++i) EXPECT_EQ(m.entries[i], c.manifest.entries[i]);
  for (std::size_t i = c.manifest.size(); i < m.size(); ++i) {
    const auto& e = m.entries[i];
    const auto* src = c.manifest.find(e.tags.at("augmented_from"));
    ASSERT_NE(src, nullptr);
    EXPECT_EQ(src->split, Split::kTrain);
    EXPECT_EQ(e.label, src->label);
    EXPECT_TRUE(fs::exists(e.path));
    if (e.tags.at("aug_family") == "time_stretch")
      EXPECT_EQ(load_audio(e.path).size(), static_cast<std::size_t>(std::llround(8000 / 1.25)));
  }
  EXPECT_EQ(load_manifest(out.path() / "manifest.csv").entries, m.entries);

  TempDir none;
  opt.mix_prob = 0.0;
  EXPECT_EQ(export_augmented_set(c.manifest, recipes, none.path(), opt).entries,
            c.manifest.entries);
}

TEST(Augment, FailingRecipeThrowsPastThreshold) {
  Corpus c(20);
  TempDir out;
  AugmentOptions opt;
  opt.mix_prob = 1.0;
  opt.context.codecs["opus"] = {"opus", shell_quote(kTool) + " fail"};
  EXPECT_THROW(export_augmented_set(c.manifest, {CorruptionSpec::parse("opus", 24)}, out.path(), opt),
               Error);
  EXPECT_NE(read_file(out.path() / "failures.jsonl").find("boom"), std::string::npos);
}
