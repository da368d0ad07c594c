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

#ifndef ADBENCH_MANIFEST_HPP_
#define ADBENCH_MANIFEST_HPP_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "adbench/metrics.hpp"
#include "adbench/random.hpp"

namespace adbench {

enum class Split { kTrain, kVal, kTest };

std::string_view to_string(Split split);
Split parse_split(std::string_view text);

struct ManifestEntry {
  std::string clip_id;
  std::filesystem::path path;  // absolute after loading
  Label label = Label::kBonaFide;
  Split split = Split::kTest;
  std::map<std::string, std::string> tags;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct Manifest {
  std::vector<ManifestEntry> entries;

  const ManifestEntry* find(std::string_view clip_id) const;
  std::size_t size() const { return entries.size(); }
};

/// Ids become file names, so they are restricted to [A-Za-z0-9._-] and may
/// not start with a dot.
bool is_safe_clip_id(std::string_view clip_id);

/// Reads a CSV (header `clip_id,path,label,split` plus tag columns) or JSONL
/// manifest, chosen by extension. Relative paths resolve against the
/// manifest's directory. Throws ConfigError naming the offending row or id.
Manifest load_manifest(const std::filesystem::path& path);
Manifest parse_manifest_csv(const std::string& text, const std::filesystem::path& base_dir);
Manifest parse_manifest_jsonl(const std::string& text, const std::filesystem::path& base_dir);

/// Checks id safety and uniqueness.
void validate(const Manifest& manifest);

/// CSV with tag columns sorted by name. Paths are written relative to
/// `relative_to` when given.
std::string manifest_to_csv(const Manifest& manifest,
                            const std::optional<std::filesystem::path>& relative_to = {});
void save_manifest(const Manifest& manifest, const std::filesystem::path& path);

/// Selection by split and exact tag matches; empty filters select all.
Manifest select(const Manifest& manifest, const std::optional<Split>& split,
                const std::map<std::string, std::string>& tag_filter = {});

/// WaveFake layout: `real_dir` holds bona fide WAVs; each subdirectory of
/// `generated_root` is one generator whose WAVs are spoofs tagged
/// `generator=<dir name>`. Clips are split 70/10/20 by a seeded shuffle.
Manifest wavefake_manifest(const std::filesystem::path& real_dir,
                           const std::filesystem::path& generated_root, Seed seed);

/// Assigns train/val/test 70/10/20 in place by a seeded shuffle.
void assign_splits(std::vector<ManifestEntry>& entries, Seed seed);

}  // namespace adbench

#endif  // ADBENCH_MANIFEST_HPP_
