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

#include "adbench/process.hpp"

#include <fcntl.h>
#include <poll.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <sstream>
#include <thread>
#include <vector>

#include "adbench/error.hpp"

extern char** environ;

namespace adbench {
namespace {

class Pipe {
 public:
  Pipe() {
    if (::pipe(fds_) != 0) throw AdapterError("pipe() failed: " + std::string(std::strerror(errno)));
  }
  ~Pipe() {
    close_read();
    close_write();
  }
  int read_end() const { return fds_[0]; }
  int write_end() const { return fds_[1]; }
  void close_read() {
    if (fds_[0] >= 0) ::close(fds_[0]);
    fds_[0] = -1;
  }
  void close_write() {
    if (fds_[1] >= 0) ::close(fds_[1]);
    fds_[1] = -1;
  }

 private:
  int fds_[2] = {-1, -1};
};

class LimiterSlot {
 public:
  explicit LimiterSlot(ProcessLimiter& limiter) : limiter_(limiter) { limiter_.acquire(); }
  ~LimiterSlot() { limiter_.release(); }
  LimiterSlot(const LimiterSlot&) = delete;
  LimiterSlot& operator=(const LimiterSlot&) = delete;

 private:
  ProcessLimiter& limiter_;
};

}  // namespace

ProcessLimiter::ProcessLimiter(std::size_t limit) : limit_(std::max<std::size_t>(limit, 1)) {}

ProcessLimiter& ProcessLimiter::global() {
  static ProcessLimiter limiter(std::max(1U, std::thread::hardware_concurrency()));
  return limiter;
}

void ProcessLimiter::set_limit(std::size_t limit) {
  {
    std::lock_guard lock(mu_);
    limit_ = std::max<std::size_t>(limit, 1);
  }
  cv_.notify_all();
}

std::size_t ProcessLimiter::limit() const {
  std::lock_guard lock(mu_);
  return limit_;
}

void ProcessLimiter::acquire() {
  std::unique_lock lock(mu_);
  cv_.wait(lock, [this] { return running_ < limit_; });
  ++running_;
}

void ProcessLimiter::release() {
  {
    std::lock_guard lock(mu_);
    --running_;
  }
  cv_.notify_one();
}

TempDir::TempDir(const std::string& prefix) {
  std::string templ =
      (std::filesystem::temp_directory_path() / (prefix + "-XXXXXX")).string();
  std::vector<char> buf(templ.begin(), templ.end());
  buf.push_back('\0');
  if (::mkdtemp(buf.data()) == nullptr) {
    throw AdapterError("mkdtemp failed: " + std::string(std::strerror(errno)));
  }
  path_ = buf.data();
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

CommandResult run_command(const std::string& command) {
  LimiterSlot slot(ProcessLimiter::global());

  Pipe out_pipe;
  Pipe err_pipe;
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_addopen(&actions, STDIN_FILENO, "/dev/null", O_RDONLY, 0);
  posix_spawn_file_actions_adddup2(&actions, out_pipe.write_end(), STDOUT_FILENO);
  posix_spawn_file_actions_adddup2(&actions, err_pipe.write_end(), STDERR_FILENO);
  posix_spawn_file_actions_addclose(&actions, out_pipe.read_end());
  posix_spawn_file_actions_addclose(&actions, err_pipe.read_end());

  std::string sh = "/bin/sh";
  std::string dash_c = "-c";
  std::string cmd = command;
  std::array<char*, 4> argv = {sh.data(), dash_c.data(), cmd.data(), nullptr};
  pid_t pid = 0;
  const int rc = ::posix_spawn(&pid, "/bin/sh", &actions, nullptr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  if (rc != 0) throw AdapterError("cannot spawn /bin/sh: " + std::string(std::strerror(rc)));
  out_pipe.close_write();
  err_pipe.close_write();

  CommandResult result;
  std::array<pollfd, 2> fds = {pollfd{out_pipe.read_end(), POLLIN, 0},
                               pollfd{err_pipe.read_end(), POLLIN, 0}};
  std::array<std::string*, 2> sinks = {&result.stdout_text, &result.stderr_text};
  std::array<char, 4096> buf{};
  int open_streams = 2;
  while (open_streams > 0) {
    if (::poll(fds.data(), fds.size(), -1) < 0) {
      if (errno == EINTR) continue;
      break;
    }
    for (std::size_t i = 0; i < fds.size(); ++i) {
      if (fds[i].fd < 0 || fds[i].revents == 0) continue;
      const ssize_t n = ::read(fds[i].fd, buf.data(), buf.size());
      if (n > 0) {
        sinks[i]->append(buf.data(), static_cast<std::size_t>(n));
      } else if (n == 0 || errno != EINTR) {
        fds[i].fd = -1;
        --open_streams;
      }
    }
  }

  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  if (WIFEXITED(status)) {
    result.exit_code = WEXITSTATUS(status);
  } else if (WIFSIGNALED(status)) {
    result.exit_code = 128 + WTERMSIG(status);
  } else {
    result.exit_code = -1;
  }
  return result;
}

std::string shell_quote(const std::string& text) {
  std::string out = "'";
  for (char c : text) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  out += "'";
  return out;
}

std::string expand_template(const std::string& templ,
                            const std::map<std::string, std::string>& vars) {
  std::string out;
  out.reserve(templ.size());
  std::size_t i = 0;
  while (i < templ.size()) {
    if (templ[i] == '{') {
      const std::size_t close = templ.find('}', i + 1);
      if (close != std::string::npos) {
        const auto it = vars.find(templ.substr(i + 1, close - i - 1));
        if (it != vars.end()) {
          out += it->second;
          i = close + 1;
          continue;
        }
      }
    }
    out += templ[i++];
  }
  return out;
}

std::optional<std::filesystem::path> find_executable(const std::string& name_or_path) {
  namespace fs = std::filesystem;
  auto ok = [](const fs::path& p) {
    std::error_code ec;
    return fs::is_regular_file(p, ec) && ::access(p.c_str(), X_OK) == 0;
  };
  if (name_or_path.empty()) return std::nullopt;
  if (name_or_path.find('/') != std::string::npos) {
    if (ok(name_or_path)) return fs::absolute(name_or_path);
    return std::nullopt;
  }
  const char* path_env = std::getenv("PATH");
  std::stringstream dirs(path_env ? path_env : "/usr/local/bin:/usr/bin:/bin");
  std::string dir;
  while (std::getline(dirs, dir, ':')) {
    if (dir.empty()) dir = ".";
    const fs::path candidate = fs::path(dir) / name_or_path;
    if (ok(candidate)) return candidate;
  }
  return std::nullopt;
}

std::string command_program(const std::string& command) {
  std::istringstream in(command);
  std::string word;
  in >> word;
  if (word.size() >= 2 && (word.front() == '\'' || word.front() == '"') &&
      word.back() == word.front())
    word = word.substr(1, word.size() - 2);
  return word;
}

}  // namespace adbench
