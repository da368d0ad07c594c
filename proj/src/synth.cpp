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

#include "adbench/synth.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "adbench/error.hpp"

namespace adbench {
namespace fs = std::filesystem;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

std::string numbered(const char* prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%04zu", prefix, i);
  return buf;
}

void normalize_peak(std::vector<double>& x, double peak) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  if (m > 0.0)
    for (double& v : x) v *= peak / m;
}

}  // namespace

AudioBuffer synth_voice(std::size_t n, Seed seed) {
  Rng rng(seed);
  const double rate = kDetectorRate;
  const double f0 = uniform(rng, 90.0, 220.0);
  const double vib_rate = uniform(rng, 3.0, 6.0);
  const double vib_phase = uniform(rng, 0.0, kTwoPi);
  const double tilt = uniform(rng, 0.9, 1.6);
  const double syl_rate = uniform(rng, 2.0, 5.0);
  const double syl_phase = uniform(rng, 0.0, kTwoPi);

  std::vector<double> harmonic_phase;
  std::vector<double> harmonic_gain;
  for (std::size_t h = 1; h * f0 < 4000.0; ++h) {
    harmonic_phase.push_back(uniform(rng, 0.0, kTwoPi));
    harmonic_gain.push_back(std::pow(static_cast<double>(h), -tilt));
  }

  std::vector<double> x(n, 0.0);
  double phase = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / rate;
    phase += kTwoPi * f0 * (1.0 + 0.03 * std::sin(kTwoPi * vib_rate * t + vib_phase)) / rate;
    double v = 0.0;
    for (std::size_t h = 0; h < harmonic_phase.size(); ++h)
      v += harmonic_gain[h] * std::sin(static_cast<double>(h + 1) * phase + harmonic_phase[h]);
    x[i] = v * (0.55 + 0.45 * std::sin(kTwoPi * syl_rate * t + syl_phase));
  }
  const double rms = std::sqrt(mean_power(x));
  const double breath = uniform(rng, 0.005, 0.02) * rms;
  for (double& v : x) v += breath * rng.normal();
  normalize_peak(x, uniform(rng, 0.3, 0.6));
  return AudioBuffer{std::move(x), kDetectorRate};
}

AudioBuffer add_spoof_artifact(const AudioBuffer& voice, Seed seed) {
  Rng rng(seed);
  const std::size_t n = voice.size();
  std::vector<double> w(n + 2);
  for (double& v : w) v = rng.normal();
  std::vector<double> a(n);
  for (std::size_t i = 0; i < n; ++i) a[i] = w[i + 2] - 2.0 * w[i + 1] + w[i];
  const double rel_db = uniform(rng, -12.0, -8.0);
  const double pa = mean_power(a);
  const double scale = pa > 0.0 ? std::sqrt(mean_power(voice.samples) * std::pow(10.0, rel_db / 10.0) / pa) : 0.0;
  AudioBuffer out = voice;
  for (std::size_t i = 0; i < n; ++i) out.samples[i] += scale * a[i];
  clamp_samples(out.samples);
  return out;
}

Manifest write_synthetic_corpus(const fs::path& dir, const SynthOptions& options) {
  if (options.n_clips < 2) throw ConfigError("synthetic corpus needs at least 2 clips");
  if (!(options.duration_s > 0.0)) throw ConfigError("synthetic clip duration must be positive");
  if (options.n_speakers == 0) throw ConfigError("synthetic corpus needs at least one speaker");
  const auto n = static_cast<std::size_t>(std::llround(options.duration_s * kDetectorRate));
  fs::create_directories(dir / "audio");
  Manifest m;
  for (std::size_t i = 0; i < options.n_clips; ++i) {
    const std::string id = numbered("synth", i);
    const bool spoof = i % 2 == 1;
    AudioBuffer x = synth_voice(n, derive_seed(options.seed, {"voice", id}));
    if (spoof) x = add_spoof_artifact(x, derive_seed(options.seed, {"artifact", id}));
    const fs::path path = fs::absolute(dir / "audio" / (id + ".wav"));
    save_audio(x, path);
    ManifestEntry e{id, path, spoof ? Label::kSpoof : Label::kBonaFide, Split::kTest, {}};
    e.tags["speaker"] = "spk" + std::to_string((i / 2) % options.n_speakers);
    e.tags["generator"] = spoof ? (i % 4 == 1 ? "toyvoc_a" : "toyvoc_b") : "none";
    m.entries.push_back(std::move(e));
  }
  assign_splits(m.entries, derive_seed(options.seed, {"split"}));
  save_manifest(m, dir / "manifest.csv");

  fs::create_directories(dir / "noise");
  for (std::size_t k = 0; k < options.n_noise; ++k) {
    Rng rng(derive_seed(options.seed, {"noise", std::to_string(k)}));
    std::vector<double> x(2 * kDetectorRate);
    if (k % 2 == 0) {
      // brown-ish rumble
      double acc = 0.0;
      for (double& v : x) {
        acc = 0.98 * acc + rng.normal();
        v = acc;
      }
    } else {
      // mains hum with hiss
      const double f = k % 4 == 1 ? 50.0 : 60.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double t = static_cast<double>(i) / kDetectorRate;
        x[i] = std::sin(kTwoPi * f * t) + 0.5 * std::sin(kTwoPi * 3 * f * t) + 0.3 * rng.normal();
      }
    }
    normalize_peak(x, 0.5);
    save_audio(AudioBuffer{std::move(x), kDetectorRate}, dir / "noise" / (numbered("noise", k) + ".wav"));
  }
  return m;
}

}  // namespace adbench
