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

#include "adbench/config.hpp"

#include <cctype>
#include <cstdlib>
#include <set>

#include "json.hpp"

#include "adbench/csv.hpp"
#include "adbench/error.hpp"
#include "adbench/process.hpp"
#include "adbench/quality.hpp"

namespace adbench {
namespace fs = std::filesystem;
using nlohmann::json;

std::optional<std::string> process_env(const std::string& name) {
  const char* v = std::getenv(name.c_str());
  if (!v || !*v) return std::nullopt;
  return std::string(v);
}

namespace {

class Problems {
 public:
  void add(std::string msg) { list_.push_back(std::move(msg)); }
  bool empty() const { return list_.empty(); }
  [[noreturn]] void raise() const {
    std::string msg = "invalid run config:";
    for (const auto& p : list_) msg += "\n  - " + p;
    throw ConfigError(msg);
  }

 private:
  std::vector<std::string> list_;
};

const std::set<std::string> kTopKeys = {
    "$schema",      "run_id",       "output_root",      "manifest",   "selection",
    "seed",         "jobs",         "detector",         "grid",       "include_clean",
    "corrupt_bona_fide", "noise",   "codecs",           "builtin_codecs", "replay",
    "echo_decay",   "quality",      "max_failure_fraction", "plots"};
const std::set<std::string> kQualityKeys = {"visqol", "command", "optional", "gate", "sample_n",
                                            "cache_dir"};

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return (path.is_relative() ? base / path : path).lexically_normal();
}

template <typename T>
std::optional<T> get(const json& obj, const char* key, const char* type, Problems& problems,
                     const std::string& where = "") {
  if (!obj.contains(key)) return std::nullopt;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    problems.add(where + key + " must be " + type);
    return std::nullopt;
  }
}

std::string env_codec_name(const std::string& id) {
  std::string out = "ADBENCH_CODEC_";
  for (char c : id) out += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

void check_program(const std::string& what, const std::string& command, Problems& problems) {
  const std::string prog = command_program(command);
  if (!find_executable(prog)) problems.add(what + ": program '" + prog + "' not found");
}

}  // namespace

RunConfig parse_run_config(const std::string& text, const fs::path& base_dir, const EnvLookup& env) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config must be a JSON object");

  Problems problems;
  RunConfig cfg;
  SweepPlan& plan = cfg.plan;
  for (auto it = root.begin(); it != root.end(); ++it)
    if (!kTopKeys.count(it.key())) problems.add("unknown key '" + it.key() + "'");

  if (auto v = get<std::string>(root, "run_id", "a string", problems)) plan.run_id = *v;
  if (auto v = get<std::string>(root, "output_root", "a string", problems))
    plan.output_root = resolve(base_dir, *v);
  else
    plan.output_root = resolve(base_dir, "runs");
  if (auto v = get<std::string>(root, "manifest", "a string", problems))
    plan.manifest = resolve(base_dir, *v);
  if (auto v = get<std::uint64_t>(root, "seed", "a non-negative integer", problems))
    plan.seed = Seed{*v};
  if (auto v = get<std::size_t>(root, "jobs", "a non-negative integer", problems)) plan.jobs = *v;
  if (auto v = get<bool>(root, "include_clean", "a boolean", problems)) plan.include_clean = *v;
  if (auto v = get<bool>(root, "corrupt_bona_fide", "a boolean", problems))
    plan.corrupt_bona_fide = *v;
  if (auto v = get<double>(root, "echo_decay", "a number", problems)) plan.echo_decay = *v;
  if (auto v = get<double>(root, "max_failure_fraction", "a number", problems))
    plan.max_failure_fraction = *v;
  if (auto v = get<bool>(root, "plots", "a boolean", problems)) plan.write_svg = *v;
  if (auto v = get<std::string>(root, "noise", "a string", problems))
    plan.noise = resolve(base_dir, *v);

  if (root.contains("selection")) {
    const json& sel = root["selection"];
    if (!sel.is_object()) {
      problems.add("selection must be an object");
    } else {
      if (auto v = get<std::string>(sel, "split", "a string", problems, "selection.")) {
        try {
          plan.split = parse_split(*v);
        } catch (const ConfigError& e) {
          problems.add(std::string("selection.split: ") + e.what());
        }
      }
      if (auto v = get<std::map<std::string, std::string>>(sel, "tags", "an object of strings",
                                                           problems, "selection."))
        plan.tag_filter = *v;
    }
  }

  if (!root.contains("detector")) {
    problems.add("detector is required");
  } else if (!root["detector"].is_object()) {
    problems.add("detector must be an object with name and command");
  } else {
    const json& d = root["detector"];
    if (auto v = get<std::string>(d, "name", "a string", problems, "detector.")) plan.detector.name = *v;
    if (auto v = get<std::string>(d, "command", "a string", problems, "detector."))
      plan.detector.command = *v;
    else
      problems.add("detector.command is required");
  }

  // grid
  SeverityGrid grid;
  if (!root.contains("grid") || (root["grid"].is_string() && root["grid"] == "default")) {
    grid = default_severity_grid();
  } else if (root["grid"].is_object()) {
    for (auto it = root["grid"].begin(); it != root["grid"].end(); ++it) {
      std::vector<double> sev;
      if (!it->is_array()) {
        problems.add("grid." + it.key() + " must be a list of severities");
        continue;
      }
      for (const auto& s : *it) {
        if (s.is_number())
          sev.push_back(s.get<double>());
        else if (s.is_string() && (s == "inf" || s == "+inf"))
          sev.push_back(kNoNoise);
        else
          problems.add("grid." + it.key() + " holds a non-numeric severity");
      }
      grid[it.key()] = sev;
    }
  } else {
    problems.add("grid must be \"default\" or an object of label -> severities");
  }
  for (const auto& [label, severities] : grid) {
    for (double s : severities) {
      try {
        plan.cells.push_back(CorruptionSpec::parse(label, s));
      } catch (const ConfigError& e) {
        problems.add("grid." + label + ": " + e.what());
      }
    }
  }

  // codecs
  std::set<std::string> used_codecs;
  bool uses_replay = false;
  for (const auto& c : plan.cells) {
    if (c.family == Family::kCodec) used_codecs.insert(c.codec_id);
    if (c.family == Family::kReplay) uses_replay = true;
  }
  bool builtin = true;
  if (auto v = get<bool>(root, "builtin_codecs", "a boolean", problems)) builtin = *v;
  if (builtin) plan.codecs = builtin_codec_adapters(env("ADBENCH_FFMPEG").value_or("ffmpeg"));
  if (root.contains("codecs")) {
    if (auto v = get<std::map<std::string, std::string>>(root, "codecs", "an object of commands",
                                                         problems))
      for (const auto& [id, cmd] : *v) plan.codecs[id] = {id, cmd};
  }
  for (const auto& id : kCodecIds)
    if (auto v = env(env_codec_name(std::string(id)))) plan.codecs[std::string(id)] = {std::string(id), *v};
  for (const auto& id : used_codecs)
    if (auto it = plan.codecs.find(id); it != plan.codecs.end())
      check_program("codec " + id, it->second.command, problems);

  if (auto v = get<std::string>(root, "replay", "a string", problems)) plan.replay = ExternalProcessor{"replay", *v};
  if (auto v = env("ADBENCH_REPLAY")) plan.replay = ExternalProcessor{"replay", *v};
  if (uses_replay && plan.replay) check_program("replay", plan.replay->command, problems);

  // quality
  std::optional<std::string> visqol_tool;
  std::optional<std::string> visqol_command;
  bool optional_tool = false;
  if (root.contains("quality")) {
    const json& q = root["quality"];
    if (!q.is_object()) {
      problems.add("quality must be an object");
    } else {
      for (auto it = q.begin(); it != q.end(); ++it)
        if (!kQualityKeys.count(it.key())) problems.add("unknown key 'quality." + it.key() + "'");
      visqol_tool = get<std::string>(q, "visqol", "a string", problems, "quality.");
      visqol_command = get<std::string>(q, "command", "a string", problems, "quality.");
      if (auto v = get<bool>(q, "optional", "a boolean", problems, "quality.")) optional_tool = *v;
      if (auto v = get<bool>(q, "gate", "a boolean", problems, "quality.")) plan.quality_gate = *v;
      if (auto v = get<std::size_t>(q, "sample_n", "a non-negative integer", problems, "quality."))
        plan.quality_sample_n = *v;
      if (auto v = get<std::string>(q, "cache_dir", "a string", problems, "quality."))
        plan.quality_cache_dir = resolve(base_dir, *v);
    }
  }
  if (auto v = env("ADBENCH_VISQOL")) visqol_tool = *v;
  if (visqol_tool) {
    const std::string tool =
        visqol_tool->find('/') == std::string::npos ? *visqol_tool : resolve(base_dir, *visqol_tool).string();
    if (auto found = find_executable(tool)) {
      std::string cmd = visqol_command ? *visqol_command : VisqolAdapter::default_command(found->string());
      cmd = expand_template(cmd, {{"tool", shell_quote(found->string())}});
      plan.visqol_command = cmd;
    } else if (plan.quality_gate && !optional_tool) {
      problems.add("ViSQOL tool '" + tool +
                   "' not found; install it, set ADBENCH_VISQOL, or mark quality.optional");
    } else {
      cfg.warnings.push_back("ViSQOL tool '" + tool + "' not found; quality is unknown for every cell");
    }
  } else if (visqol_command) {
    const std::string prog = command_program(*visqol_command);
    if (find_executable(prog))
      plan.visqol_command = *visqol_command;
    else if (plan.quality_gate && !optional_tool)
      problems.add("ViSQOL command program '" + prog + "' not found");
    else
      cfg.warnings.push_back("ViSQOL command program '" + prog + "' not found; quality is unknown");
  } else {
    cfg.warnings.push_back("no ViSQOL tool configured; quality is unknown for every cell");
  }

  try {
    validate(plan);
  } catch (const ConfigError& e) {
    std::string msg = e.what();
    std::size_t pos = 0;
    while ((pos = msg.find("\n  - ", pos)) != std::string::npos) {
      pos += 5;
      const auto end = msg.find('\n', pos);
      const std::string item = msg.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
      // the config layer reports ViSQOL availability itself
      if (item.rfind("ViSQOL tool not found", 0) != 0) problems.add(item);
    }
  }
  if (!problems.empty()) problems.raise();
  return cfg;
}

RunConfig load_run_config(const fs::path& path, const EnvLookup& env) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const Error&) {
    throw ConfigError("cannot read config " + path.string());
  }
  return parse_run_config(text, fs::absolute(path).parent_path(), env);
}

const std::string& run_config_schema() {
  static const std::string schema = R"({
  "$schema": "https://json-schema.org/draft/2020-12/schema",
  "title": "adbench run config",
  "type": "object",
  "additionalProperties": false,
  "required": ["manifest", "detector"],
  "properties": {
    "$schema": {"type": "string"},
    "run_id": {"type": "string", "pattern": "^[A-Za-z0-9_-][A-Za-z0-9._-]*$", "default": "run"},
    "output_root": {"type": "string", "default": "runs", "description": "Relative to the config file."},
    "manifest": {"type": "string", "description": "CSV or JSONL manifest: clip_id,path,label,split plus tag columns."},
    "selection": {
      "type": "object",
      "additionalProperties": false,
      "properties": {
        "split": {"enum": ["train", "val", "test"]},
        "tags": {"type": "object", "additionalProperties": {"type": "string"}}
      }
    },
    "seed": {"type": "integer", "minimum": 0, "default": 20240607},
    "jobs": {"type": "integer", "minimum": 0, "default": 0, "description": "Worker threads; 0 = logical CPUs."},
    "detector": {
      "type": "object",
      "additionalProperties": false,
      "required": ["command"],
      "properties": {
        "name": {"type": "string", "default": "detector"},
        "command": {"type": "string", "description": "Template with {input_dir} and {output_csv}; \"builtin:toy\" runs the toy detector in-process; {adbench} expands to the running binary."}
      }
    },
    "grid": {
      "oneOf": [
        {"const": "default"},
        {"type": "object", "additionalProperties": {"type": "array", "items": {"oneOf": [{"type": "number"}, {"const": "inf"}]}}}
      ],
      "default": "default",
      "description": "Label (family or codec id) -> severities."
    },
    "include_clean": {"type": "boolean", "default": true},
    "corrupt_bona_fide": {"type": "boolean", "default": true},
    "noise": {"type": "string", "description": "Directory of noise WAVs or a manifest; needed by background_noise."},
    "builtin_codecs": {"type": "boolean", "default": true, "description": "ffmpeg Opus and MP3 adapters."},
    "codecs": {"type": "object", "additionalProperties": {"type": "string"}, "description": "Codec id -> command template with {in}, {out}, {bitrate}, {workdir}."},
    "replay": {"type": "string", "description": "Replay simulator command template."},
    "echo_decay": {"type": "number", "exclusiveMinimum": 0, "maximum": 1, "default": 0.5},
    "max_failure_fraction": {"type": "number", "minimum": 0, "exclusiveMaximum": 1, "default": 0.05},
    "plots": {"type": "boolean", "default": true},
    "quality": {
      "type": "object",
      "additionalProperties": false,
      "properties": {
        "visqol": {"type": "string", "description": "ViSQOL binary (name on PATH or path)."},
        "command": {"type": "string", "description": "Command template with {ref}, {deg} and optionally {tool}."},
        "optional": {"type": "boolean", "default": false, "description": "A missing tool leaves quality unknown instead of failing validation."},
        "gate": {"type": "boolean", "default": true, "description": "Category means use only cells with mean ViSQOL >= 3."},
        "sample_n": {"type": "integer", "minimum": 0, "default": 200},
        "cache_dir": {"type": "string"}
      }
    }
  }
}
)";
  return schema;
}

}  // namespace adbench
