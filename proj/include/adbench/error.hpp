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

#ifndef ADBENCH_ERROR_HPP_
#define ADBENCH_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace adbench {

/// Base of every error the engine raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad user input: invalid corruption spec, config key, severity, flag.
/// The CLI maps these to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Unreadable, malformed or unwritable audio.
class AudioError : public Error {
 public:
  using Error::Error;
};

/// A signal that a kernel cannot process (silent input for an SNR target,
/// clip shorter than a frame, delay longer than the clip).
class SignalError : public Error {
 public:
  using Error::Error;
};

/// External process failure. `stderr_text` holds whatever the tool printed.
class AdapterError : public Error {
 public:
  AdapterError(const std::string& what, std::string stderr_text = {})
      : Error(what), stderr_text_(std::move(stderr_text)) {}
  const std::string& stderr_text() const noexcept { return stderr_text_; }

 private:
  std::string stderr_text_;
};

/// Detector output that violates the score protocol.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

/// Metric preconditions (single-class input, empty selection).
class MetricsError : public Error {
 public:
  using Error::Error;
};

}  // namespace adbench

#endif  // ADBENCH_ERROR_HPP_
