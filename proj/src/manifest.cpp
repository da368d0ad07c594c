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

#include "adbench/manifest.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "json.hpp"

#include "adbench/csv.hpp"
#include "adbench/error.hpp"

namespace adbench {
namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kVal: return "val";
    case Split::kTest: return "test";
  }
  return "test";
}

Split parse_split(std::string_view text) {
  if (text == "train") return Split::kTrain;
  if (text == "val") return Split::kVal;
  if (text == "test") return Split::kTest;
  throw ConfigError("unknown split '" + std::string(text) + "' (expected train, val or test)");
}

const ManifestEntry* Manifest::find(std::string_view clip_id) const {
  for (const auto& e : entries)
    if (e.clip_id == clip_id) return &e;
  return nullptr;
}

bool is_safe_clip_id(std::string_view clip_id) {
  if (clip_id.empty() || clip_id.front() == '.') return false;
  return std::all_of(clip_id.begin(), clip_id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '.' || c == '_' || c == '-';
  });
}

void validate(const Manifest& manifest) {
  std::set<std::string_view> seen;
  for (const auto& e : manifest.entries) {
    if (!is_safe_clip_id(e.clip_id))
      throw ConfigError("clip_id '" + e.clip_id + "' must match [A-Za-z0-9._-]+");
    if (!seen.insert(e.clip_id).second)
      throw ConfigError("duplicate clip_id '" + e.clip_id + "'");
  }
}

namespace {

fs::path resolve(const std::string& path, const fs::path& base_dir) {
  fs::path p(path);
  if (p.is_relative()) p = base_dir / p;
  return p.lexically_normal();
}

ManifestEntry make_entry(std::string clip_id, const std::string& path, const std::string& label,
                         const std::string& split, const fs::path& base_dir) {
  ManifestEntry e;
  e.clip_id = std::move(clip_id);
  if (path.empty()) throw ConfigError("empty path");
  e.path = resolve(path, base_dir);
  e.label = parse_label(label);
  e.split = parse_split(split);
  return e;
}

const char* const kRequired[] = {"clip_id", "path", "label", "split"};

}  // namespace

Manifest parse_manifest_csv(const std::string& text, const fs::path& base_dir) {
  std::istringstream in(text);
  auto rows = read_csv(in);
  if (rows.empty()) throw ConfigError("manifest is empty");
  const CsvRow& header = rows[0];
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (!col.emplace(header[i], i).second)
      throw ConfigError("duplicate manifest column '" + header[i] + "'");
  }
  for (const char* name : kRequired)
    if (!col.count(name)) throw ConfigError(std::string("manifest missing column '") + name + "'");

  Manifest m;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const CsvRow& row = rows[r];
    if (row.size() != header.size())
      throw ConfigError("manifest row " + std::to_string(r + 1) + " has " +
                        std::to_string(row.size()) + " fields, expected " +
                        std::to_string(header.size()));
    try {
      auto e = make_entry(row[col["clip_id"]], row[col["path"]], row[col["label"]],
                          row[col["split"]], base_dir);
      for (std::size_t i = 0; i < header.size(); ++i) {
        if (std::find(std::begin(kRequired), std::end(kRequired), header[i]) !=
            std::end(kRequired))
          continue;
        if (!row[i].empty()) e.tags[header[i]] = row[i];
      }
      m.entries.push_back(std::move(e));
    } catch (const ConfigError& err) {
      throw ConfigError("manifest row " + std::to_string(r + 1) + ": " + err.what());
    }
  }
  if (m.entries.empty()) throw ConfigError("manifest has no entries");
  validate(m);
  return m;
}

Manifest parse_manifest_jsonl(const std::string& text, const fs::path& base_dir) {
  Manifest m;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  auto str = [](const json& v) {
    return v.is_string() ? v.get<std::string>() : v.dump();
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      json obj = json::parse(line);
      if (!obj.is_object()) throw ConfigError("expected a JSON object");
      for (const char* name : kRequired)
        if (!obj.contains(name) || !obj[name].is_string())
          throw ConfigError(std::string("missing string field '") + name + "'");
      auto e = make_entry(obj["clip_id"].get<std::string>(), obj["path"].get<std::string>(),
                          obj["label"].get<std::string>(), obj["split"].get<std::string>(),
                          base_dir);
      for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (std::find(std::begin(kRequired), std::end(kRequired), it.key()) !=
            std::end(kRequired))
          continue;
        if (it.key() == "tags" && it->is_object()) {
          for (auto t = it->begin(); t != it->end(); ++t) e.tags[t.key()] = str(*t);
        } else if (!it->is_null()) {
          e.tags[it.key()] = str(*it);
        }
      }
      m.entries.push_back(std::move(e));
    } catch (const json::exception& err) {
      throw ConfigError("manifest line " + std::to_string(lineno) + ": " + err.what());
    } catch (const ConfigError& err) {
      throw ConfigError("manifest line " + std::to_string(lineno) + ": " + err.what());
    }
  }
  if (m.entries.empty()) throw ConfigError("manifest is empty");
  validate(m);
  return m;
}

Manifest load_manifest(const fs::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const Error&) {
    throw ConfigError("cannot read manifest " + path.string());
  }
  const fs::path base = fs::absolute(path).parent_path();
  const auto ext = path.extension().string();
  try {
    if (ext == ".jsonl" || ext == ".ndjson") return parse_manifest_jsonl(text, base);
    return parse_manifest_csv(text, base);
  } catch (const ConfigError& err) {
    throw ConfigError(path.string() + ": " + err.what());
  }
}

std::string manifest_to_csv(const Manifest& manifest, const std::optional<fs::path>& relative_to) {
  std::set<std::string> tag_names;
  for (const auto& e : manifest.entries)
    for (const auto& [k, v] : e.tags) tag_names.insert(k);
  CsvRow header{"clip_id", "path", "label", "split"};
  header.insert(header.end(), tag_names.begin(), tag_names.end());
  std::string out = csv_line(header);
  for (const auto& e : manifest.entries) {
    fs::path p = e.path;
    if (relative_to) p = p.lexically_relative(*relative_to);
    CsvRow row{e.clip_id, p.generic_string(), std::string(to_string(e.label)),
               std::string(to_string(e.split))};
    for (const auto& name : tag_names) {
      auto it = e.tags.find(name);
      row.push_back(it == e.tags.end() ? "" : it->second);
    }
    out += csv_line(row);
  }
  return out;
}

void save_manifest(const Manifest& manifest, const fs::path& path) {
  write_file_atomic(path, manifest_to_csv(manifest, fs::absolute(path).parent_path()));
}

Manifest select(const Manifest& manifest, const std::optional<Split>& split,
                const std::map<std::string, std::string>& tag_filter) {
  Manifest out;
  for (const auto& e : manifest.entries) {
    if (split && e.split != *split) continue;
    bool ok = true;
    for (const auto& [k, v] : tag_filter) {
      auto it = e.tags.find(k);
      if (it == e.tags.end() || it->second != v) ok = false;
    }
    if (ok) out.entries.push_back(e);
  }
  return out;
}

void assign_splits(std::vector<ManifestEntry>& entries, Seed seed) {
  std::vector<std::size_t> order(entries.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(seed);
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  const std::size_t n = entries.size();
  const std::size_t n_train = (n * 70 + 50) / 100;
  const std::size_t n_val = (n * 10 + 50) / 100;
  for (std::size_t rank = 0; rank < n; ++rank) {
    auto& e = entries[order[rank]];
    e.split = rank < n_train ? Split::kTrain : rank < n_train + n_val ? Split::kVal : Split::kTest;
  }
}

namespace {

std::vector<fs::path> wav_files(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& de : fs::directory_iterator(dir)) {
    if (!de.is_regular_file()) continue;
    auto ext = de.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
    if (ext == ".wav") files.push_back(fs::absolute(de.path()));
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::string sanitize(std::string text) {
  for (char& c : text)
    if (!((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
          c == '.' || c == '_' || c == '-'))
      c = '_';
  return text;
}

}  // namespace

Manifest wavefake_manifest(const fs::path& real_dir, const fs::path& generated_root, Seed seed) {
  if (!fs::is_directory(real_dir)) throw ConfigError("not a directory: " + real_dir.string());
  if (!fs::is_directory(generated_root))
    throw ConfigError("not a directory: " + generated_root.string());
  Manifest m;
  for (const auto& f : wav_files(real_dir)) {
    ManifestEntry e;
    e.clip_id = "real-" + sanitize(f.stem().string());
    e.path = f;
    e.label = Label::kBonaFide;
    e.tags["source"] = real_dir.filename().string();
    m.entries.push_back(std::move(e));
  }
  std::vector<fs::path> generators;
  for (const auto& de : fs::directory_iterator(generated_root))
    if (de.is_directory()) generators.push_back(de.path());
  std::sort(generators.begin(), generators.end());
  for (const auto& g : generators) {
    const std::string name = g.filename().string();
    for (const auto& f : wav_files(g)) {
      ManifestEntry e;
      e.clip_id = sanitize(name) + "-" + sanitize(f.stem().string());
      e.path = f;
      e.label = Label::kSpoof;
      e.tags["generator"] = name;
      e.tags["source"] = generated_root.filename().string();
      m.entries.push_back(std::move(e));
    }
  }
  if (m.entries.empty()) throw ConfigError("no WAV files found");
  assign_splits(m.entries, derive_seed(seed, {"wavefake-split"}));
  validate(m);
  return m;
}

}  // namespace adbench
