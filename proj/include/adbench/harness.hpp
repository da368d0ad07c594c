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

#ifndef ADBENCH_HARNESS_HPP_
#define ADBENCH_HARNESS_HPP_

#include <cstddef>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "adbench/corruptions.hpp"
#include "adbench/detector.hpp"
#include "adbench/manifest.hpp"
#include "adbench/metrics.hpp"
#include "adbench/random.hpp"

namespace adbench {

struct SweepPlan {
  std::string run_id = "run";
  DetectorSpec detector;
  std::vector<CorruptionSpec> cells;
  /// Prepends the identity cell (the clean baseline) unless already listed.
  bool include_clean = true;

  std::filesystem::path manifest;
  std::optional<Split> split;
  std::map<std::string, std::string> tag_filter;

  Seed seed = kDefaultSeed;
  std::filesystem::path output_root;

  /// Directory of noise WAVs or a manifest; needed by background_noise.
  std::optional<std::filesystem::path> noise;
  std::map<std::string, ExternalProcessor> codecs;
  std::optional<ExternalProcessor> replay;
  double echo_decay = 0.5;
  /// When false, bona fide clips are scored clean in every cell.
  bool corrupt_bona_fide = true;

  /// ViSQOL command template ({ref}, {deg}); absent means quality unknown.
  std::optional<std::string> visqol_command;
  bool quality_gate = true;
  std::size_t quality_sample_n = 200;
  /// Defaults to <run>/cache/visqol.
  std::filesystem::path quality_cache_dir;

  double max_failure_fraction = 0.05;
  std::size_t jobs = 0;
  /// Extra detector placeholders, inserted verbatim.
  std::map<std::string, std::string> detector_vars;
  bool write_svg = true;
};

/// Collects every problem with the plan and throws one ConfigError listing
/// them all. Does not touch the filesystem beyond existence checks.
void validate(const SweepPlan& plan);

/// The cells a run evaluates, clean baseline first.
std::vector<CorruptionSpec> planned_cells(const SweepPlan& plan);

std::filesystem::path run_directory(const SweepPlan& plan);
std::filesystem::path cell_directory(const std::filesystem::path& run_dir,
                                     const CorruptionSpec& spec);

/// Loads noise clips from a directory of WAVs (sorted by name) or a
/// manifest, resampled to 16 kHz.
NoiseCorpus load_noise_corpus(const std::filesystem::path& path);

struct ClipFailure {
  std::string clip_id;
  std::string error;
  std::string stderr_text;
};

struct MaterializeResult {
  std::filesystem::path dir;
  bool cache_hit = false;
  std::size_t written = 0;
  std::vector<std::string> ok_clips;  // manifest order
  std::vector<ClipFailure> failures;
  bool cell_failed = false;  // more than max_failure_fraction failed
};

/// Corrupts each clip (resampled to 16 kHz) into `<dir>/<clip_id>.wav` with
/// a provenance file and per-clip failures.jsonl. Work happens in a private
/// directory renamed into place; an existing directory with identical
/// provenance is reused untouched.
MaterializeResult materialize_cell(const SweepPlan& plan, const CorruptionSpec& spec,
                                   const Manifest& clips, const CorruptionContext& context,
                                   const std::filesystem::path& dir);

struct RunReport {
  std::string run_id;
  std::string detector;
  Seed seed;
  bool corrupt_bona_fide = true;
  bool quality_gate = true;
  bool quality_available = false;
  std::size_t quality_sample_n = 0;
  std::size_t n_clips = 0;
  bool complete = true;
  std::vector<CellReport> cells;
};

struct RunOptions {
  /// Reuse an existing run directory and its cached cells.
  bool resume = false;
  /// Stops after this many cells have been evaluated (simulates an
  /// interrupted run); the returned report is marked incomplete.
  std::size_t stop_after = std::numeric_limits<std::size_t>::max();
  std::function<void(const CellReport&, std::size_t index, std::size_t total, bool cached)>
      on_cell;
};

/// For each cell: materialize, sample quality, run the detector, compute
/// metrics. Cell failures are recorded and the run continues. Writes
/// report.json, cells.csv, quality.csv, radar.csv, plotdata/, plots/ and
/// failures.jsonl into the run directory.
RunReport run_sweep(const SweepPlan& plan, const RunOptions& options = {});

/// Applied augmentation for one clip, or nothing.
struct AugmentChoice {
  std::optional<CorruptionSpec> spec;
};

/// Recipes are grouped by label in order of first appearance; each clip
/// draws with probability mix_prob, then a uniform recipe, then a uniform
/// severity among that recipe's specs. Only train clips are drawn.
std::vector<AugmentChoice> plan_augmentation(const Manifest& manifest,
                                             const std::vector<CorruptionSpec>& recipes,
                                             double mix_prob, Seed seed);

struct AugmentOptions {
  double mix_prob = 0.5;
  Seed seed = kDefaultSeed;
  CorruptionContext context;
  std::size_t jobs = 0;
  double max_failure_fraction = 0.05;
};

/// Writes augmented copies to `<out_dir>/audio/<clip_id>-aug.wav` and a
/// manifest holding every original entry plus the augmented ones (tags
/// augmented_from, aug_family, aug_severity). Failures go to
/// failures.jsonl; more than max_failure_fraction of attempts failing
/// throws Error.
Manifest export_augmented_set(const Manifest& manifest, const std::vector<CorruptionSpec>& recipes,
                              const std::filesystem::path& out_dir, const AugmentOptions& options);

}  // namespace adbench

#endif  // ADBENCH_HARNESS_HPP_
