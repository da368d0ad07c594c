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

#include "adbench/csv.hpp"
#include "adbench/error.hpp"
#include "adbench/manifest.hpp"
#include "adbench/process.hpp"

namespace fs = std::filesystem;
using namespace adbench;

namespace {

void write(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p) << text;
}

}  // namespace

TEST(Csv, QuotedFieldsRoundTrip) {
  const CsvRow row{"plain", "with,comma", "say \"hi\"", "two\nlines", ""};
  std::istringstream in(csv_line(row) + "\r\n" + csv_line({"a", "b"}));
  const auto rows = read_csv(in);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], row);
  EXPECT_EQ(rows[1], (CsvRow{"a", "b"}));
}

TEST(Csv, CrlfAndUnterminatedQuote) {
  std::istringstream in("a,b\r\nc,d\r\n");
  const auto rows = read_csv(in);
  EXPECT_EQ(rows[1], (CsvRow{"c", "d"}));
  std::istringstream bad("a,\"open\n");
  EXPECT_THROW(read_csv(bad), ConfigError);
}

TEST(Manifest, ThreeRowCsv) {
  TempDir dir;
  write(dir.path() / "m.csv",
        "clip_id,path,label,split,speaker\n"
        "a,audio/a.wav,bona_fide,train,s1\n"
        "b,/abs/b.wav,spoof,val,\n"
        "c,c.wav,spoof,test,s2\n");
  const auto m = load_manifest(dir.path() / "m.csv");
  ASSERT_EQ(m.size(), 3u);
  EXPECT_EQ(m.entries[0].path, dir.path() / "audio/a.wav");
  EXPECT_EQ(m.entries[1].path, fs::path("/abs/b.wav"));
  EXPECT_EQ(m.entries[1].label, Label::kSpoof);
  EXPECT_EQ(m.entries[1].split, Split::kVal);
  EXPECT_EQ(m.entries[0].tags.at("speaker"), "s1");
  EXPECT_FALSE(m.entries[1].tags.count("speaker"));
}

TEST(Manifest, DuplicateIdIsNamed) {
  TempDir dir;
  write(dir.path() / "m.csv",
        "clip_id,path,label,split\nx1,a.wav,spoof,test\nclip_7,b.wav,spoof,test\n"
        "clip_7,c.wav,bona_fide,test\n");
  try {
    load_manifest(dir.path() / "m.csv");
    FAIL() << "duplicate accepted";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("clip_7"), std::string::npos);
  }
}

TEST(Manifest, RejectsBadInput) {
  TempDir dir;
  auto bad = [&](const std::string& text) {
    write(dir.path() / "bad.csv", text);
    EXPECT_THROW(load_manifest(dir.path() / "bad.csv"), ConfigError) << text;
  };
  bad("clip_id,path,label\na,a.wav,spoof\n");
  bad("clip_id,path,label,split\na,a.wav,fake,test\n");
  bad("clip_id,path,label,split\na,a.wav,spoof,holdout\n");
  bad("clip_id,path,label,split\na,a.wav,spoof\n");
  bad("clip_id,path,label,split\n../up,a.wav,spoof,test\n");
  bad("clip_id,path,label,split\n");
  EXPECT_THROW(load_manifest(dir.path() / "missing.csv"), ConfigError);
}

TEST(Manifest, Jsonl) {
  TempDir dir;
  write(dir.path() / "m.jsonl",
        "{\"clip_id\":\"a\",\"path\":\"a.wav\",\"label\":\"spoof\",\"split\":\"test\","
        "\"generator\":\"melgan\",\"tags\":{\"speaker\":\"p1\",\"take\":3}}\n\n"
        "{\"clip_id\":\"b\",\"path\":\"b.wav\",\"label\":\"bona_fide\",\"split\":\"train\"}\n");
  const auto m = load_manifest(dir.path() / "m.jsonl");
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m.entries[0].tags.at("generator"), "melgan");
  EXPECT_EQ(m.entries[0].tags.at("speaker"), "p1");
  EXPECT_EQ(m.entries[0].tags.at("take"), "3");
  write(dir.path() / "bad.jsonl", "{\"clip_id\":\"a\",\"path\":\"a.wav\"}\n");
  EXPECT_THROW(load_manifest(dir.path() / "bad.jsonl"), ConfigError);
  write(dir.path() / "bad2.jsonl", "not json\n");
  EXPECT_THROW(load_manifest(dir.path() / "bad2.jsonl"), ConfigError);
}

TEST(Manifest, SaveLoadRoundTrip) {
  TempDir dir;
  Manifest m;
  m.entries.push_back({"a", dir.path() / "x/a.wav", Label::kSpoof, Split::kTrain,
                       {{"generator", "hifigan"}, {"note", "has,comma"}}});
  m.entries.push_back({"b", dir.path() / "b.wav", Label::kBonaFide, Split::kTest, {}});
  save_manifest(m, dir.path() / "out.csv");
  EXPECT_EQ(load_manifest(dir.path() / "out.csv").entries, m.entries);
}

TEST(Manifest, SelectBySplitAndTag) {
  Manifest m;
  m.entries.push_back({"a", "a.wav", Label::kSpoof, Split::kTrain, {{"speaker", "s1"}}});
  m.entries.push_back({"b", "b.wav", Label::kSpoof, Split::kTest, {{"speaker", "s1"}}});
  m.entries.push_back({"c", "c.wav", Label::kSpoof, Split::kTest, {{"speaker", "s2"}}});
  EXPECT_EQ(select(m, Split::kTest).size(), 2u);
  EXPECT_EQ(select(m, std::nullopt, {{"speaker", "s1"}}).size(), 2u);
  EXPECT_EQ(select(m, Split::kTest, {{"speaker", "s1"}}).entries[0].clip_id, "b");
  EXPECT_EQ(select(m, std::nullopt).size(), 3u);
}

TEST(Manifest, SplitRatios) {
  std::vector<ManifestEntry> entries(1000);
  for (std::size_t i = 0; i < entries.size(); ++i) entries[i].clip_id = std::to_string(i);
  assign_splits(entries, Seed{5});
  std::size_t counts[3] = {};
  for (const auto& e : entries) ++counts[static_cast<int>(e.split)];
  EXPECT_EQ(counts[0], 700u);
  EXPECT_EQ(counts[1], 100u);
  EXPECT_EQ(counts[2], 200u);
  auto again = entries;
  assign_splits(again, Seed{5});
  EXPECT_EQ(again, entries);
}

TEST(Manifest, WaveFakeLayout) {
  TempDir dir;
  const char* generators[] = {"ljspeech_melgan",       "ljspeech_melgan_large",
                              "ljspeech_multi_band_melgan", "ljspeech_full_band_melgan",
                              "ljspeech_waveglow",     "ljspeech_parallel_wavegan"};
  for (int i = 0; i < 10; ++i)
    write(dir.path() / "LJSpeech-1.1/wavs" / ("LJ001-000" + std::to_string(i) + ".wav"), "");
  for (const char* g : generators)
    for (int i = 0; i < 10; ++i)
      write(dir.path() / "generated_audio" / g / ("LJ001-000" + std::to_string(i) + "_gen.wav"), "");
  write(dir.path() / "generated_audio/ljspeech_melgan/readme.txt", "");

  const auto m = wavefake_manifest(dir.path() / "LJSpeech-1.1/wavs",
                                   dir.path() / "generated_audio", Seed{1});
  ASSERT_EQ(m.size(), 70u);
  std::map<std::string, int> per_gen;
  std::size_t bona = 0;
  for (const auto& e : m.entries) {
    if (e.label == Label::kBonaFide) {
      ++bona;
      EXPECT_FALSE(e.tags.count("generator"));
    } else {
      ++per_gen[e.tags.at("generator")];
    }
  }
  EXPECT_EQ(bona, 10u);
  EXPECT_EQ(per_gen.size(), 6u);
  for (const auto& [g, n] : per_gen) EXPECT_EQ(n, 10) << g;
  EXPECT_EQ(select(m, Split::kTrain).size(), 49u);
  EXPECT_EQ(select(m, Split::kTest).size(), 14u);
  EXPECT_EQ(wavefake_manifest(dir.path() / "LJSpeech-1.1/wavs", dir.path() / "generated_audio",
                              Seed{1}).entries,
            m.entries);
}
