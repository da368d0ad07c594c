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

#ifndef ADBENCH_PROCESS_HPP_
#define ADBENCH_PROCESS_HPP_

#include <condition_variable>
#include <cstddef>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>

namespace adbench {

/// Bounds the number of concurrently running external processes.
class ProcessLimiter {
 public:
  explicit ProcessLimiter(std::size_t limit);

  /// Process-wide limiter used by adapters. Defaults to the number of
  /// logical CPUs.
  static ProcessLimiter& global();

  void set_limit(std::size_t limit);
  std::size_t limit() const;

  void acquire();
  void release();

 private:
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::size_t limit_;
  std::size_t running_ = 0;
};

/// Owns a freshly created directory and removes it recursively on
/// destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& prefix = "adbench");
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

struct CommandResult {
  int exit_code = 0;
  std::string stdout_text;
  std::string stderr_text;
};

/// Runs `command` through /bin/sh -c, capturing both output streams. Waits
/// on the global ProcessLimiter first. Never throws for a nonzero exit;
/// throws AdapterError only if the process cannot be started.
CommandResult run_command(const std::string& command);

/// Single-quotes a string for POSIX sh.
std::string shell_quote(const std::string& text);

/// Replaces `{name}` for every key in `vars`. Values are inserted verbatim;
/// callers quote paths with shell_quote. Unknown braces are left alone.
std::string expand_template(const std::string& templ,
                            const std::map<std::string, std::string>& vars);

/// Resolves a tool name or path. Names without a slash are searched on
/// PATH. Returns nothing unless the result is an executable regular file.
std::optional<std::filesystem::path> find_executable(const std::string& name_or_path);

/// First whitespace-separated word of a command template.
std::string command_program(const std::string& command);

}  // namespace adbench

#endif  // ADBENCH_PROCESS_HPP_
