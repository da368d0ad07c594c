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

#ifndef ADBENCH_SYNTH_HPP_
#define ADBENCH_SYNTH_HPP_

#include <cstddef>
#include <filesystem>

#include "adbench/audio.hpp"
#include "adbench/manifest.hpp"
#include "adbench/random.hpp"

namespace adbench {

struct SynthOptions {
  std::size_t n_clips = 200;  // alternating bona fide / spoof
  double duration_s = 1.0;
  std::size_t n_speakers = 7;
  std::size_t n_noise = 4;
  Seed seed = kDefaultSeed;
};

/// A voiced, speech-like clip: harmonics of a vibrato f0 below 4 kHz with a
/// random spectral tilt, a syllabic envelope and a little breath noise.
AudioBuffer synth_voice(std::size_t n_samples, Seed seed);

/// Adds the spoof artifact: twice-differenced white noise (power rising
/// toward Nyquist) 8 to 12 dB below the clip's power.
AudioBuffer add_spoof_artifact(const AudioBuffer& voice, Seed seed);

/// Writes `<dir>/audio/*.wav`, `<dir>/manifest.csv` (speaker and generator
/// tags, 70/10/20 splits) and background noise clips under `<dir>/noise/`.
/// Returns the manifest.
Manifest write_synthetic_corpus(const std::filesystem::path& dir, const SynthOptions& options);

}  // namespace adbench

#endif  // ADBENCH_SYNTH_HPP_
