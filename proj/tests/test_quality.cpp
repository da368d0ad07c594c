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

#include <cmath>
#include <filesystem>
#include <limits>
#include <set>

#include "adbench/error.hpp"
#include "adbench/parallel.hpp"
#include "adbench/process.hpp"
#include "adbench/quality.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace adbench;

namespace {

const std::string kTool = ADBENCH_FIXTURE_TOOL;
const std::string kQualityCommand = shell_quote(kTool) + " quality {ref} {deg}";

AudioBuffer buf(std::vector<double> x, int rate = 16000) { return AudioBuffer{std::move(x), rate}; }

// Speech-like corpus: a few tones plus noise, written as WAVs.
Manifest write_corpus(const fs::path& dir, std::size_t n) {
  Manifest m;
  for (std::size_t i = 0; i < n; ++i) {
    auto x = oracle::sine(150.0 + 20.0 * static_cast<double>(i), 16000, 8000, 0.3);
    const auto noise = oracle::uniform_noise(x.size(), static_cast<unsigned>(i), 0.05);
    for (std::size_t k = 0; k < x.size(); ++k) x[k] += noise[k];
    const std::string id = "clip" + std::to_string(i);
    save_audio(buf(x), dir / (id + ".wav"));
    m.entries.push_back({id, dir / (id + ".wav"), i % 2 ? Label::kSpoof : Label::kBonaFide,
                         Split::kTest, {}});
  }
  return m;
}

}  // namespace

TEST(Snr, Examples) {
  const auto x = buf({1, 1, 1, 1});
  EXPECT_EQ(snr_db(x, x), std::numeric_limits<double>::infinity());
  EXPECT_NEAR(snr_db(x, buf({1.1, 0.9, 1.1, 0.9})), 20.0, 1e-9);
  EXPECT_NEAR(snr_db(buf({0.5, -0.25, 0.1}), buf({-0.5, 0.25, -0.1})), 10 * std::log10(0.25),
              1e-12);
}

TEST(Snr, Errors) {
  EXPECT_THROW(snr_db(buf({1, 2}), buf({1})), SignalError);
  EXPECT_THROW(snr_db(buf({0, 0}), buf({1, 0})), SignalError);
  EXPECT_THROW(snr_db(buf({1, 2}), buf({1, 2}, 8000)), SignalError);
}

TEST(Snr, DecreasesWithNoiseAndIgnoresCommonScale) {
  const auto x = oracle::sine(300, 16000, 4000);
  const auto n = oracle::uniform_noise(x.size(), 3, 0.1);
  double prev = std::numeric_limits<double>::infinity();
  for (double g : {0.01, 0.1, 0.5, 1.0, 3.0}) {
    std::vector<double> y(x.size()), xs(x.size()), ys(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      y[i] = x[i] + g * n[i];
      xs[i] = -7.5 * x[i];
      ys[i] = -7.5 * y[i];
    }
    const double s = snr_db(buf(x), buf(y));
    EXPECT_LT(s, prev);
    prev = s;
    EXPECT_NEAR(snr_db(buf(xs), buf(ys)), s, 1e-9);
  }
}

TEST(Visqol, ParseMos) {
  EXPECT_DOUBLE_EQ(parse_mos("Reference: a.wav\nMOS-LQO:\t\t4.21\n"), 4.21);
  EXPECT_DOUBLE_EQ(parse_mos("  3.2\n"), 3.2);
  EXPECT_THROW(parse_mos("no score here"), AdapterError);
  EXPECT_THROW(parse_mos("MOS-LQO: 5.5"), AdapterError);
  EXPECT_THROW(parse_mos("MOS-LQO: 0.9"), AdapterError);
  EXPECT_THROW(parse_mos(""), AdapterError);
}

TEST(Visqol, AcceptabilityIsTheThreshold) {
  EXPECT_TRUE(is_acceptable(3.2));
  EXPECT_TRUE(is_acceptable(3.0));
  EXPECT_FALSE(is_acceptable(2.999));
  EXPECT_FALSE(is_acceptable(std::nullopt));
  EXPECT_TRUE(make_quality_record("a", 10.0, 3.2).acceptable);
  EXPECT_FALSE(make_quality_record("a", 10.0, std::nullopt).acceptable);
}

TEST(Visqol, IdenticalPairAndCache) {
  VisqolAdapter v(kQualityCommand);
  const auto x = buf(oracle::sine(440, 16000, 4000));
  EXPECT_GE(v.score(x, x), 4.5);
  EXPECT_EQ(v.tool_runs(), 1u);
  EXPECT_GE(v.score(x, x), 4.5);
  EXPECT_EQ(v.tool_runs(), 1u);

  auto y = x;
  for (double& s : y.samples) s *= 0.9;
  const double d = v.score(x, y);
  EXPECT_LT(d, 4.5);
  EXPECT_EQ(v.tool_runs(), 2u);
}

TEST(Visqol, DiskCacheSharedAcrossAdapters) {
  TempDir cache;
  const auto x = buf(oracle::sine(440, 16000, 2000));
  auto y = x;
  y.samples[10] += 0.1;
  VisqolAdapter a(kQualityCommand, cache.path());
  const double first = a.score(x, y);
  VisqolAdapter b(kQualityCommand, cache.path());
  EXPECT_EQ(b.score(x, y), first);
  EXPECT_EQ(b.tool_runs(), 0u);
  // A different command never reuses the entry.
  VisqolAdapter c(kQualityCommand + " ", cache.path());
  c.score(x, y);
  EXPECT_EQ(c.tool_runs(), 1u);
}

TEST(Visqol, ConcurrentScoringIsConsistent) {
  TempDir cache;
  VisqolAdapter v(kQualityCommand, cache.path());
  const auto x = buf(oracle::sine(440, 16000, 2000));
  std::vector<double> scores(8);
  parallel_for(scores.size(), 4, [&](std::size_t i) {
    auto y = x;
    y.samples[0] += 0.01 * static_cast<double>(i % 2);
    scores[i] = v.score(x, y);
  });
  for (std::size_t i = 2; i < scores.size(); ++i) EXPECT_EQ(scores[i], scores[i % 2]);
}

TEST(Visqol, ToolFailures) {
  const auto x = buf(oracle::sine(440, 16000, 2000));
  VisqolAdapter fails(shell_quote(kTool) + " fail");
  try {
    fails.score(x, x);
    FAIL();
  } catch (const AdapterError& e) {
    EXPECT_NE(e.stderr_text().find("boom"), std::string::npos);
  }
  VisqolAdapter silent("true");
  EXPECT_THROW(silent.score(x, x), AdapterError);
  VisqolAdapter out_of_range("echo 'MOS-LQO: 7'");
  EXPECT_THROW(out_of_range.score(x, x), AdapterError);
}

TEST(Visqol, DefaultCommandShape) {
  const auto cmd = VisqolAdapter::default_command("/opt/visqol/bin/visqol");
  EXPECT_EQ(command_program(cmd), "/opt/visqol/bin/visqol");
  EXPECT_NE(cmd.find("--use_speech_mode"), std::string::npos);
  EXPECT_FALSE(find_executable("/nonexistent/visqol").has_value());
  EXPECT_TRUE(find_executable("sh").has_value());
}

TEST(QualityStats, MeanStdAndAbsentSnr) {
  std::vector<QualityRecord> r{make_quality_record("a", 10.0, 2.0),
                               make_quality_record("b", 20.0, 4.0),
                               make_quality_record("c", 30.0, 4.5)};
  auto s = summarize(r);
  EXPECT_NEAR(*s.mean_visqol, 3.5, 1e-12);
  const double var = ((1.5 * 1.5) + 0.25 + 1.0) / 3.0;
  EXPECT_NEAR(*s.std_visqol, std::sqrt(var), 1e-12);
  EXPECT_NEAR(*s.mean_snr, 20.0, 1e-12);
  EXPECT_TRUE(s.acceptable);
  EXPECT_EQ(s.n, 3u);

  r.push_back(make_quality_record("d", std::nullopt, 1.0));
  s = summarize(r);
  EXPECT_FALSE(s.mean_snr.has_value());
  EXPECT_FALSE(s.acceptable);  // mean 2.875

  std::vector<QualityRecord> unknown{make_quality_record("a", 5.0, std::nullopt)};
  s = summarize(unknown);
  EXPECT_FALSE(s.mean_visqol.has_value());
  EXPECT_FALSE(s.acceptable);
}

TEST(QualityStats, SampleIndices) {
  const auto a = sample_indices(100, 30, Seed{9});
  EXPECT_EQ(a.size(), 30u);
  EXPECT_TRUE(std::is_sorted(a.begin(), a.end()));
  EXPECT_EQ(std::set<std::size_t>(a.begin(), a.end()).size(), 30u);
  EXPECT_EQ(a, sample_indices(100, 30, Seed{9}));
  EXPECT_NE(a, sample_indices(100, 30, Seed{10}));
  EXPECT_EQ(sample_indices(5, 5, Seed{1}).size(), 5u);
  EXPECT_THROW(sample_indices(5, 6, Seed{1}), ConfigError);
}

TEST(QualitySweep, IdentityNoiseAndStretch) {
  TempDir dir;
  const auto corpus = write_corpus(dir.path(), 12);
  VisqolAdapter v(kQualityCommand);
  QualitySweepOptions opt;
  opt.sample_n = 6;
  opt.visqol = &v;
  std::vector<CorruptionSpec> cells{CorruptionSpec::parse("identity", 0)};
  for (double snr : {40.0, 30.0, 20.0, 10.0, 5.0})
    cells.push_back(CorruptionSpec::parse("gaussian_noise", snr));
  cells.push_back(CorruptionSpec::parse("time_stretch", 1.5));

  const auto out = quality_sweep(corpus, cells, opt);
  ASSERT_EQ(out.size(), cells.size());
  EXPECT_EQ(out[0].stats.n, 6u);
  EXPECT_EQ(*out[0].stats.mean_snr, std::numeric_limits<double>::infinity());
  EXPECT_GE(*out[0].stats.mean_visqol, 4.5);
  EXPECT_TRUE(out[0].stats.acceptable);
  for (std::size_t i = 2; i <= 5; ++i)
    EXPECT_LE(*out[i].stats.mean_visqol, *out[i - 1].stats.mean_visqol);
  EXPECT_NEAR(*out[3].stats.mean_snr, 20.0, 0.5);  // post-clamp, 16-bit
  EXPECT_FALSE(out[6].stats.mean_snr.has_value());
  EXPECT_TRUE(out[6].stats.mean_visqol.has_value());

  EXPECT_EQ(quality_csv(quality_sweep(corpus, cells, opt)), quality_csv(out));
  const auto csv = quality_csv(out);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "family,severity,mean_visqol,std_visqol,mean_snr,acceptable,n");
}

TEST(QualitySweep, ToolAbsentMeansUnknown) {
  TempDir dir;
  const auto corpus = write_corpus(dir.path(), 4);
  QualitySweepOptions opt;
  opt.sample_n = 4;
  const std::vector<CorruptionSpec> cells{CorruptionSpec::parse("identity", 0)};
  const auto out = quality_sweep(corpus, cells, opt);
  EXPECT_FALSE(out[0].stats.mean_visqol.has_value());
  EXPECT_FALSE(out[0].stats.acceptable);
  opt.sample_n = 5;
  EXPECT_THROW(quality_sweep(corpus, cells, opt), ConfigError);
}

TEST(QualitySweep, ClipFailuresAreRecorded) {
  TempDir dir;
  auto corpus = write_corpus(dir.path(), 4);
  corpus.entries[1].path = dir.path() / "missing.wav";
  QualitySweepOptions opt;
  opt.sample_n = 4;
  const std::vector<CorruptionSpec> cells{CorruptionSpec::parse("gaussian_noise", 10)};
  const auto out = quality_sweep(corpus, cells, opt);
  EXPECT_EQ(out[0].stats.n, 3u);
  ASSERT_EQ(out[0].failures.size(), 1u);
  EXPECT_EQ(out[0].failures[0].first, "clip1");
}
