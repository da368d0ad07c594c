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

#include "adbench/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "adbench/error.hpp"

namespace adbench {
namespace {

// The FFTW planner is not thread-safe; executing a plan is.
std::mutex& planner_mutex() {
  static std::mutex mu;
  return mu;
}

enum class Kind { kForward, kInverse, kR2C, kC2R };

// One plan with its own fftw_malloc'd buffers, so every execution sees the
// same alignment and therefore the same codelets (bit-identical results).
struct Plan {
  std::size_t n = 0;
  double* real = nullptr;
  fftw_complex* cplx = nullptr;
  fftw_plan plan = nullptr;

  Plan(Kind kind, std::size_t size) : n(size) {
    std::lock_guard lock(planner_mutex());
    const int len = static_cast<int>(n);
    if (kind == Kind::kR2C || kind == Kind::kC2R) {
      real = fftw_alloc_real(n);
      cplx = fftw_alloc_complex(n / 2 + 1);
      plan = kind == Kind::kR2C ? fftw_plan_dft_r2c_1d(len, real, cplx, FFTW_ESTIMATE)
                                : fftw_plan_dft_c2r_1d(len, cplx, real, FFTW_ESTIMATE);
    } else {
      cplx = fftw_alloc_complex(n);
      plan = fftw_plan_dft_1d(len, cplx, cplx, kind == Kind::kForward ? FFTW_FORWARD : FFTW_BACKWARD,
                              FFTW_ESTIMATE);
    }
    if (!plan) throw SignalError("FFTW could not plan a transform of size " + std::to_string(n));
  }
  ~Plan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
    fftw_free(real);
    fftw_free(cplx);
  }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
};

Plan& plan_for(Kind kind, std::size_t n) {
  thread_local std::map<std::pair<Kind, std::size_t>, std::unique_ptr<Plan>> cache;
  auto& slot = cache[{kind, n}];
  if (!slot) slot = std::make_unique<Plan>(kind, n);
  return *slot;
}

void require_power_of_two(std::size_t n) {
  if (!is_power_of_two(n)) throw ConfigError("FFT size must be a power of two");
}

}  // namespace

void fft_inplace(std::span<std::complex<double>> data, bool inverse) {
  const std::size_t n = data.size();
  require_power_of_two(n);
  Plan& p = plan_for(inverse ? Kind::kInverse : Kind::kForward, n);
  std::memcpy(p.cplx, data.data(), n * sizeof(fftw_complex));
  fftw_execute(p.plan);
  std::memcpy(static_cast<void*>(data.data()), p.cplx, n * sizeof(fftw_complex));
}

std::vector<std::complex<double>> rfft(std::span<const double> frame) {
  const std::size_t n = frame.size();
  require_power_of_two(n);
  Plan& p = plan_for(Kind::kR2C, n);
  std::memcpy(p.real, frame.data(), n * sizeof(double));
  fftw_execute(p.plan);
  std::vector<std::complex<double>> out(n / 2 + 1);
  std::memcpy(static_cast<void*>(out.data()), p.cplx, out.size() * sizeof(fftw_complex));
  return out;
}

std::vector<double> irfft(std::span<const std::complex<double>> bins,
                          std::size_t n) {
  require_power_of_two(n);
  if (bins.size() != n / 2 + 1) throw ConfigError("irfft: bin count mismatch");
  Plan& p = plan_for(Kind::kC2R, n);
  std::memcpy(p.cplx, bins.data(), bins.size() * sizeof(fftw_complex));
  // c2r assumes a Hermitian spectrum; the DC and Nyquist imaginary parts are ignored.
  fftw_execute(p.plan);
  std::vector<double> out(p.real, p.real + n);
  const double scale = 1.0 / static_cast<double>(n);
  for (double& v : out) v *= scale;
  return out;
}

}  // namespace adbench
