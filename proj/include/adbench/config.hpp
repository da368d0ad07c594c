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

#ifndef ADBENCH_CONFIG_HPP_
#define ADBENCH_CONFIG_HPP_

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "adbench/harness.hpp"

namespace adbench {

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

/// Reads the process environment.
std::optional<std::string> process_env(const std::string& name);

struct RunConfig {
  SweepPlan plan;
  std::vector<std::string> warnings;
};

/// Parses a JSON run config. Relative paths resolve against `base_dir`.
/// Environment overrides: ADBENCH_VISQOL (ViSQOL binary), ADBENCH_FFMPEG
/// (ffmpeg for the built-in codecs), ADBENCH_CODEC_<ID> (codec command),
/// ADBENCH_REPLAY (replay command). Every problem found, including the
/// plan checks, is reported in a single ConfigError.
RunConfig parse_run_config(const std::string& text, const std::filesystem::path& base_dir,
                           const EnvLookup& env = process_env);

RunConfig load_run_config(const std::filesystem::path& path, const EnvLookup& env = process_env);

/// JSON Schema describing the config file.
const std::string& run_config_schema();

}  // namespace adbench

#endif  // ADBENCH_CONFIG_HPP_
