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

#include "adbench/audio.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numbers>
#include <numeric>
#include <string>

#include "adbench/error.hpp"

namespace adbench {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t read_u16(const std::byte* p) {
  return static_cast<std::uint16_t>(std::to_integer<unsigned>(p[0]) |
                                    (std::to_integer<unsigned>(p[1]) << 8));
}

std::uint32_t read_u32(const std::byte* p) {
  return static_cast<std::uint32_t>(read_u16(p)) |
         (static_cast<std::uint32_t>(read_u16(p + 2)) << 16);
}

bool tag_is(const std::byte* p, const char (&tag)[5]) {
  return std::memcmp(p, tag, 4) == 0;
}

void put_u16(std::vector<std::byte>& out, std::uint16_t v) {
  out.push_back(static_cast<std::byte>(v & 0xff));
  out.push_back(static_cast<std::byte>(v >> 8));
}

void put_u32(std::vector<std::byte>& out, std::uint32_t v) {
  put_u16(out, static_cast<std::uint16_t>(v & 0xffff));
  put_u16(out, static_cast<std::uint16_t>(v >> 16));
}

void put_tag(std::vector<std::byte>& out, const char (&tag)[5]) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::byte>(tag[i]));
}

// Zeroth-order modified Bessel function of the first kind (power series).
double bessel_i0(double x) {
  double sum = 1.0;
  double term = 1.0;
  const double half_sq = 0.25 * x * x;
  for (int k = 1; k < 200; ++k) {
    term *= half_sq / (static_cast<double>(k) * k);
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return sum;
}

constexpr double kKaiserBeta = 8.6;
constexpr int kTapsPerPhase = 64;
constexpr double kRolloff = 0.95;
constexpr std::int64_t kMaxTablePhases = 1024;
constexpr int kKernelOversample = 1024;

// Windowed-sinc low-pass kernel in input-sample time units.
class SincKernel {
 public:
  explicit SincKernel(double scale)
      : cutoff_(0.5 * kRolloff * std::min(1.0, scale)),
        half_width_(0.5 * kTapsPerPhase / std::min(1.0, scale)),
        i0_beta_(bessel_i0(kKaiserBeta)) {
    const auto n = static_cast<std::size_t>(
        std::ceil(half_width_ * kKernelOversample)) + 2;
    table_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      table_[i] = exact(static_cast<double>(i) / kKernelOversample);
    }
  }

  double half_width() const { return half_width_; }

  double exact(double t) const {
    const double u = std::abs(t) / half_width_;
    if (u >= 1.0) return 0.0;
    const double x = 2.0 * cutoff_ * t;
    const double sinc =
        x == 0.0 ? 1.0 : std::sin(std::numbers::pi * x) / (std::numbers::pi * x);
    const double window = bessel_i0(kKaiserBeta * std::sqrt(1.0 - u * u)) /
                          i0_beta_;
    return 2.0 * cutoff_ * sinc * window;
  }

  double interpolated(double t) const {
    const double pos = std::abs(t) * kKernelOversample;
    const auto idx = static_cast<std::size_t>(pos);
    if (idx + 1 >= table_.size()) return 0.0;
    const double frac = pos - static_cast<double>(idx);
    return table_[idx] + frac * (table_[idx + 1] - table_[idx]);
  }

 private:
  double cutoff_;
  double half_width_;
  double i0_beta_;
  std::vector<double> table_;
};

double sample_at(std::span<const double> x, std::int64_t i) {
  if (i < 0 || i >= static_cast<std::int64_t>(x.size())) return 0.0;
  return x[static_cast<std::size_t>(i)];
}

}  // namespace

void validate(const AudioBuffer& buffer) {
  if (buffer.sample_rate <= 0) {
    throw AudioError("sample rate must be positive, got " +
                     std::to_string(buffer.sample_rate));
  }
  if (buffer.samples.empty()) throw AudioError("audio buffer is empty");
  for (double s : buffer.samples) {
    if (!std::isfinite(s)) throw AudioError("audio contains non-finite samples");
  }
}

void clamp_samples(std::vector<double>& samples) {
  for (double& s : samples) s = std::clamp(s, -1.0, 1.0);
}

double mean_power(std::span<const double> samples) {
  if (samples.empty()) return 0.0;
  double acc = 0.0;
  for (double s : samples) acc += s * s;
  return acc / static_cast<double>(samples.size());
}

AudioBuffer decode_wav(std::span<const std::byte> bytes) {
  if (bytes.size() < 12 || !tag_is(bytes.data(), "RIFF") ||
      !tag_is(bytes.data() + 8, "WAVE")) {
    throw AudioError("not a RIFF/WAVE file");
  }
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t rate = 0;
  std::uint16_t bits = 0;
  bool have_fmt = false;
  std::span<const std::byte> data;
  bool have_data = false;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::byte* chunk = bytes.data() + pos;
    const std::uint32_t declared = read_u32(chunk + 4);
    const std::size_t body = pos + 8;
    const std::size_t available = bytes.size() - body;
    const std::size_t size = std::min<std::size_t>(declared, available);
    if (tag_is(chunk, "fmt ")) {
      if (size < 16) throw AudioError("fmt chunk too short");
      format = read_u16(chunk + 8);
      channels = read_u16(chunk + 10);
      rate = read_u32(chunk + 12);
      bits = read_u16(chunk + 22);
      if (format == kFormatExtensible) {
        if (size < 40) throw AudioError("extensible fmt chunk too short");
        format = read_u16(chunk + 8 + 24);
      }
      have_fmt = true;
    } else if (tag_is(chunk, "data")) {
      data = bytes.subspan(body, size);
      have_data = true;
    }
    pos = body + size + (size & 1U);
  }

  if (!have_fmt) throw AudioError("missing fmt chunk");
  if (!have_data) throw AudioError("missing data chunk");
  if (channels != 1 && channels != 2) {
    throw AudioError("unsupported channel count " + std::to_string(channels));
  }
  if (rate == 0) throw AudioError("sample rate is zero");
  const bool pcm16 = format == kFormatPcm && bits == 16;
  const bool float32 = format == kFormatFloat && bits == 32;
  if (!pcm16 && !float32) {
    throw AudioError("unsupported sample format " + std::to_string(format) +
                     "/" + std::to_string(bits) + " bits");
  }

  const std::size_t width = bits / 8;
  const std::size_t frame_bytes = width * channels;
  const std::size_t frames = data.size() / frame_bytes;
  if (frames == 0) throw AudioError("WAV contains no samples");

  AudioBuffer out;
  out.sample_rate = static_cast<int>(rate);
  out.samples.resize(frames);
  for (std::size_t f = 0; f < frames; ++f) {
    double acc = 0.0;
    for (std::size_t c = 0; c < channels; ++c) {
      const std::byte* p = data.data() + f * frame_bytes + c * width;
      if (pcm16) {
        acc += static_cast<std::int16_t>(read_u16(p)) / 32768.0;
      } else {
        const float v = std::bit_cast<float>(read_u32(p));
        if (!std::isfinite(v)) throw AudioError("non-finite float sample");
        acc += std::clamp(static_cast<double>(v), -1.0, 1.0);
      }
    }
    out.samples[f] = acc / channels;
  }
  return out;
}

AudioBuffer load_audio(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw AudioError("cannot open " + path.string());
  std::vector<char> raw((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
  try {
    return decode_wav(std::as_bytes(std::span(raw)));
  } catch (const AudioError& e) {
    throw AudioError(path.string() + ": " + e.what());
  }
}

std::vector<std::byte> encode_wav(const AudioBuffer& buffer) {
  const auto n = static_cast<std::uint32_t>(buffer.samples.size());
  const std::uint32_t data_bytes = n * 2;
  std::vector<std::byte> out;
  out.reserve(44 + data_bytes);
  put_tag(out, "RIFF");
  put_u32(out, 36 + data_bytes);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, kFormatPcm);
  put_u16(out, 1);
  put_u32(out, static_cast<std::uint32_t>(buffer.sample_rate));
  put_u32(out, static_cast<std::uint32_t>(buffer.sample_rate) * 2);
  put_u16(out, 2);
  put_u16(out, 16);
  put_tag(out, "data");
  put_u32(out, data_bytes);
  for (double s : buffer.samples) {
    const double scaled = std::round(std::clamp(s, -1.0, 1.0) * 32768.0);
    const auto v = static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0));
    put_u16(out, static_cast<std::uint16_t>(v));
  }
  return out;
}

void save_audio(const AudioBuffer& buffer, const std::filesystem::path& path) {
  validate(buffer);
  const auto bytes = encode_wav(buffer);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw AudioError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw AudioError("write failed for " + path.string());
}

AudioBuffer resample(const AudioBuffer& buffer, int target_rate) {
  if (target_rate <= 0) throw ConfigError("target rate must be positive");
  if (buffer.sample_rate <= 0) throw AudioError("source rate must be positive");
  if (target_rate == buffer.sample_rate) return buffer;

  const std::int64_t g = std::gcd(target_rate, buffer.sample_rate);
  const std::int64_t up = target_rate / g;
  const std::int64_t down = buffer.sample_rate / g;
  if (up > kMaxTablePhases) {
    return resample_by_ratio(buffer, static_cast<double>(target_rate) /
                                         buffer.sample_rate,
                             target_rate);
  }

  const auto len = static_cast<std::int64_t>(buffer.samples.size());
  const std::int64_t out_len = (2 * len * up + down) / (2 * down);
  const SincKernel kernel(static_cast<double>(up) / static_cast<double>(down));
  const auto reach = static_cast<std::int64_t>(std::ceil(kernel.half_width()));
  const std::int64_t taps = 2 * reach;

  // Phase p holds the taps for output times with fractional offset p/up.
  std::vector<double> table(static_cast<std::size_t>(up * taps));
  for (std::int64_t p = 0; p < up; ++p) {
    const double frac = static_cast<double>(p) / static_cast<double>(up);
    for (std::int64_t j = 0; j < taps; ++j) {
      table[static_cast<std::size_t>(p * taps + j)] =
          kernel.exact(frac + static_cast<double>(reach - 1 - j));
    }
  }

  AudioBuffer out;
  out.sample_rate = target_rate;
  out.samples.resize(static_cast<std::size_t>(out_len));
  const std::span<const double> x(buffer.samples);
  for (std::int64_t n = 0; n < out_len; ++n) {
    const std::int64_t base = (n * down) / up;
    const std::int64_t phase = (n * down) % up;
    const double* h = table.data() + phase * taps;
    const std::int64_t first = base - reach + 1;
    double acc = 0.0;
    if (first >= 0 && first + taps <= len) {
      const double* xs = x.data() + first;
      for (std::int64_t j = 0; j < taps; ++j) acc += h[j] * xs[j];
    } else {
      for (std::int64_t j = 0; j < taps; ++j) acc += h[j] * sample_at(x, first + j);
    }
    out.samples[static_cast<std::size_t>(n)] = acc;
  }
  return out;
}

AudioBuffer resample_by_ratio(const AudioBuffer& buffer, double ratio,
                              int output_rate) {
  if (!(ratio > 0.0) || !std::isfinite(ratio)) {
    throw ConfigError("resampling ratio must be positive and finite");
  }
  if (ratio == 1.0) {
    AudioBuffer same = buffer;
    same.sample_rate = output_rate;
    return same;
  }
  const auto len = static_cast<std::int64_t>(buffer.samples.size());
  const auto out_len = static_cast<std::int64_t>(
      std::llround(static_cast<double>(len) * ratio));
  const SincKernel kernel(ratio);
  const auto reach = static_cast<std::int64_t>(std::ceil(kernel.half_width()));
  const std::span<const double> x(buffer.samples);

  AudioBuffer out;
  out.sample_rate = output_rate;
  out.samples.resize(static_cast<std::size_t>(std::max<std::int64_t>(out_len, 0)));
  for (std::int64_t n = 0; n < out_len; ++n) {
    const double t = static_cast<double>(n) / ratio;
    const auto base = static_cast<std::int64_t>(std::floor(t));
    double acc = 0.0;
    for (std::int64_t i = base - reach + 1; i <= base + reach; ++i) {
      acc += sample_at(x, i) * kernel.interpolated(t - static_cast<double>(i));
    }
    out.samples[static_cast<std::size_t>(n)] = acc;
  }
  return out;
}

AudioBuffer fix_length(const AudioBuffer& buffer, std::size_t n_samples,
                       Seed seed) {
  if (n_samples == 0) throw ConfigError("fix_length target must be positive");
  validate(buffer);
  const std::size_t len = buffer.samples.size();
  if (len == n_samples) return buffer;

  AudioBuffer out;
  out.sample_rate = buffer.sample_rate;
  if (len > n_samples) {
    Rng rng(seed);
    const auto offset = static_cast<std::ptrdiff_t>(rng.below(len - n_samples + 1));
    out.samples.assign(buffer.samples.begin() + offset,
                       buffer.samples.begin() + offset +
                           static_cast<std::ptrdiff_t>(n_samples));
    return out;
  }
  out.samples.reserve(n_samples);
  while (out.samples.size() < n_samples) {
    const std::size_t take = std::min(len, n_samples - out.samples.size());
    out.samples.insert(out.samples.end(), buffer.samples.begin(),
                       buffer.samples.begin() + static_cast<std::ptrdiff_t>(take));
  }
  return out;
}

}  // namespace adbench
