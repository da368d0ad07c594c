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

// Stand-in for external tools in tests: codec/replay processors, a fake
// quality tool and misbehaving detectors.
//
//   fixture_tool copy IN OUT
//   fixture_tool scale FACTOR IN OUT      length x FACTOR (sample repeat/drop)
//   fixture_tool rate HZ IN OUT           resample to HZ
//   fixture_tool fail                     prints to stderr, exits 3
//   fixture_tool garbage IN OUT           writes a non-WAV file
//   fixture_tool quality REF DEG          prints "MOS-LQO: x"
//   fixture_tool detector MODE IN_DIR OUT_CSV
//       MODE: energy | constant | omit | duplicate | nan | fail

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "adbench/audio.hpp"

namespace fs = std::filesystem;

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  if (args.empty()) return 2;
  const std::string& mode = args[0];
  try {
    if (mode == "copy" && args.size() == 3) {
      adbench::save_audio(adbench::load_audio(args[1]), args[2]);
    } else if (mode == "scale" && args.size() == 4) {
      const double factor = std::stod(args[1]);
      const auto in = adbench::load_audio(args[2]);
      adbench::AudioBuffer out{{}, in.sample_rate};
      const auto n = static_cast<std::size_t>(std::llround(in.size() * factor));
      for (std::size_t i = 0; i < n; ++i) {
        out.samples.push_back(in.samples[std::min(in.size() - 1, static_cast<std::size_t>(i / factor))]);
      }
      adbench::save_audio(out, args[3]);
    } else if (mode == "rate" && args.size() == 4) {
      adbench::save_audio(adbench::resample(adbench::load_audio(args[2]), std::stoi(args[1])), args[3]);
    } else if (mode == "fail") {
      std::cerr << "fixture failure: boom\n";
      return 3;
    } else if (mode == "garbage" && args.size() == 3) {
      std::ofstream(args[2]) << "not audio";
    } else if (mode == "quality" && args.size() == 3) {
      const auto ref = adbench::load_audio(args[1]);
      const auto deg = adbench::load_audio(args[2]);
      double p = 0, e = 0;
      const std::size_t n = std::min(ref.size(), deg.size());
      for (std::size_t i = 0; i < n; ++i) {
        p += ref.samples[i] * ref.samples[i];
        e += (deg.samples[i] - ref.samples[i]) * (deg.samples[i] - ref.samples[i]);
      }
      const double snr = e == 0 ? 100.0 : 10 * std::log10(p / e);
      const double mos = std::clamp(1.0 + snr / 10.0, 1.0, 4.9);
      std::printf("Reference Filepath:\t%s\nMOS-LQO:\t\t%.6f\n", args[1].c_str(), e == 0 ? 4.9 : mos);
    } else if (mode == "detector" && args.size() == 4) {
      const std::string& how = args[1];
      if (how == "fail") {
        std::cerr << "detector crashed\n";
        return 5;
      }
      std::vector<fs::path> wavs;
      for (const auto& e : fs::directory_iterator(args[2])) {
        if (e.path().extension() == ".wav") wavs.push_back(e.path());
      }
      std::sort(wavs.begin(), wavs.end());
      std::ofstream out(args[3]);
      out << "clip_id,score\n";
      for (std::size_t i = 0; i < wavs.size(); ++i) {
        const std::string id = wavs[i].stem().string();
        if (how == "omit" && i == 0) continue;
        double score = 0.5;
        if (how == "energy") {
          const auto b = adbench::load_audio(wavs[i]);
          score = adbench::mean_power(b.samples);
        }
        if (how == "nan" && i == 0) {
          out << id << ",nan\n";
          continue;
        }
        out << id << ',' << score << '\n';
        if (how == "duplicate" && i == 0) out << id << ',' << score << '\n';
      }
    } else {
      std::cerr << "usage error\n";
      return 2;
    }
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return 1;
  }
  return 0;
}
