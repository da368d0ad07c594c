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

#include "adbench/corruptions.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <utility>

#include "adbench/dsp.hpp"
#include "adbench/error.hpp"
#include "adbench/process.hpp"

namespace adbench {
namespace {

struct FamilyName {
  Family family;
  std::string_view name;
};

constexpr FamilyName kFamilyNames[] = {
    {Family::kIdentity, "identity"},
    {Family::kGaussianNoise, "gaussian_noise"},
    {Family::kBackgroundNoise, "background_noise"},
    {Family::kLowPass, "low_pass"},
    {Family::kHighPass, "high_pass"},
    {Family::kPitchShift, "pitch_shift"},
    {Family::kEcho, "echo"},
    {Family::kTimeStretch, "time_stretch"},
    {Family::kSmooth, "smooth"},
    {Family::kReplay, "replay"},
    {Family::kQuantize, "quantize"},
    {Family::kCodec, "codec"},
};

bool is_codec_id(std::string_view id) {
  return std::find(std::begin(kCodecIds), std::end(kCodecIds), id) != std::end(kCodecIds);
}

bool is_integer(double v) { return std::isfinite(v) && v == std::floor(v); }

void require(bool ok, const CorruptionSpec& spec, std::string_view rule) {
  if (!ok) {
    throw ConfigError("invalid severity " + spec.severity_text() + " for " +
                      spec.label() + ": " + std::string(rule));
  }
}

std::vector<double> add_and_clamp(std::span<const double> x, std::span<const double> n) {
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = std::clamp(x[i] + n[i], -1.0, 1.0);
  return y;
}

// Length-aligns processor output to the reference: pad with zeros or trim.
AudioBuffer align_to(const AudioBuffer& reference, AudioBuffer produced,
                     const std::string& who) {
  if (produced.sample_rate != reference.sample_rate) {
    produced = resample(produced, reference.sample_rate);
  }
  const double expected = static_cast<double>(reference.size());
  const double got = static_cast<double>(produced.size());
  if (std::abs(got - expected) > 0.1 * expected) {
    throw AdapterError(who + " returned " + std::to_string(produced.size()) +
                       " samples for a " + std::to_string(reference.size()) +
                       "-sample input (more than 10% off)");
  }
  produced.samples.resize(reference.size(), 0.0);
  for (double& s : produced.samples) {
    if (!std::isfinite(s)) throw AdapterError(who + " produced non-finite samples");
  }
  clamp_samples(produced.samples);
  return produced;
}

}  // namespace

std::string_view to_string(Family family) {
  for (const auto& f : kFamilyNames) {
    if (f.family == family) return f.name;
  }
  return "unknown";
}

std::string_view to_string(Category category) {
  switch (category) {
    case Category::kClean: return "clean";
    case Category::kNoise: return "noise";
    case Category::kModification: return "modification";
    case Category::kCompression: return "compression";
  }
  return "unknown";
}

std::string format_number(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  if (value == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

double parse_number(std::string_view text) {
  if (text == "inf" || text == "+inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) {
    throw ConfigError("not a number: '" + std::string(text) + "'");
  }
  return v;
}

std::string CorruptionSpec::label() const {
  if (family == Family::kCodec) return codec_id;
  return std::string(to_string(family));
}

std::string CorruptionSpec::severity_text() const { return format_number(severity); }

Category CorruptionSpec::category() const {
  switch (family) {
    case Family::kIdentity: return Category::kClean;
    case Family::kGaussianNoise:
    case Family::kBackgroundNoise: return Category::kNoise;
    case Family::kQuantize:
    case Family::kCodec: return Category::kCompression;
    default: return Category::kModification;
  }
}

CorruptionSpec CorruptionSpec::parse(std::string_view label, double severity) {
  CorruptionSpec spec;
  spec.severity = severity;
  if (is_codec_id(label)) {
    spec.family = Family::kCodec;
    spec.codec_id = std::string(label);
  } else {
    const auto it = std::find_if(std::begin(kFamilyNames), std::end(kFamilyNames),
                                 [&](const FamilyName& f) { return f.name == label; });
    if (it == std::end(kFamilyNames) || it->family == Family::kCodec) {
      throw ConfigError("unknown corruption family '" + std::string(label) + "'");
    }
    spec.family = it->family;
  }
  validate(spec);
  return spec;
}

void validate(const CorruptionSpec& spec) {
  const double s = spec.severity;
  if (std::isnan(s)) throw ConfigError("severity is NaN for " + spec.label());
  if ((spec.family == Family::kCodec) != !spec.codec_id.empty()) {
    throw ConfigError("codec_id must be set exactly when the family is codec");
  }
  switch (spec.family) {
    case Family::kIdentity:
    case Family::kReplay:
      require(s == 0.0, spec, "single-condition family takes severity 0");
      break;
    case Family::kGaussianNoise:
    case Family::kBackgroundNoise:
      require(s > -std::numeric_limits<double>::infinity(), spec,
              "SNR must be finite or +inf");
      break;
    case Family::kLowPass:
    case Family::kHighPass:
      require(s > 0.0 && s < 1.0, spec, "cutoff ratio must be in (0, 1)");
      break;
    case Family::kPitchShift:
      require(std::isfinite(s) && std::abs(s) <= 12.0, spec,
              "semitones must be within [-12, 12]");
      break;
    case Family::kEcho:
      require(std::isfinite(s) && s > 0.0 && s <= 10.0, spec,
              "delay must be in (0, 10] seconds");
      break;
    case Family::kTimeStretch:
      require(std::isfinite(s) && s > 0.0 && s <= 8.0, spec, "speed must be in (0, 8]");
      break;
    case Family::kSmooth:
      require(is_integer(s) && s >= 2.0 && s <= 1024.0, spec,
              "window must be an integer in [2, 1024]");
      break;
    case Family::kQuantize:
      require(is_integer(s) && s >= 1.0 && s <= 16.0, spec,
              "bits must be an integer in [1, 16]");
      break;
    case Family::kCodec:
      if (!is_codec_id(spec.codec_id)) {
        throw ConfigError("unknown codec '" + spec.codec_id + "'");
      }
      require(std::isfinite(s) && s >= 0.0, spec, "bitrate must be non-negative kbps");
      break;
  }
}

const SeverityGrid& default_severity_grid() {
  static const SeverityGrid grid = [] {
    SeverityGrid g;
    g["identity"] = {0};
    g["gaussian_noise"] = {5, 10, 15, 20, 25, 30, 35, 40};
    g["background_noise"] = g["gaussian_noise"];
    g["low_pass"] = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    g["high_pass"] = g["low_pass"];
    g["pitch_shift"] = {-2, -1.5, -1, -0.5, 0.5, 1, 1.5, 2};
    g["echo"] = {0.1, 0.3, 0.5, 0.7, 0.9};
    g["time_stretch"] = {0.7, 0.8, 0.9, 1.1, 1.25, 1.5};
    g["smooth"] = {6, 10, 14, 18, 22, 26};
    g["replay"] = {0};
    g["quantize"] = {2, 3, 4, 5, 6, 7, 8, 9, 10};
    g["opus"] = {16, 32, 64, 128, 256, 496};
    g["mp3"] = {8, 16, 24, 32, 40};
    g["encodec"] = {1.5, 3, 6, 12, 24};
    g["dac"] = {0};
    g["facodec"] = {0};
    g["audiodec"] = {0};
    return g;
  }();
  return grid;
}

std::vector<CorruptionSpec> expand_grid(const SeverityGrid& grid) {
  std::vector<CorruptionSpec> cells;
  for (const auto& [label, severities] : grid) {
    for (double s : severities) cells.push_back(CorruptionSpec::parse(label, s));
  }
  return cells;
}

std::map<std::string, ExternalProcessor> builtin_codec_adapters(const std::string& ffmpeg) {
  const std::string ff = (ffmpeg == "ffmpeg" ? ffmpeg : shell_quote(ffmpeg)) + " -nostdin -hide_banner -loglevel error -y";
  std::map<std::string, ExternalProcessor> m;
  m["opus"] = {"opus", ff + " -i {in} -c:a libopus -b:a {bitrate}k {workdir}/enc.opus && " +
                           ff + " -i {workdir}/enc.opus -ac 1 -ar 16000 -c:a pcm_s16le {out}"};
  m["mp3"] = {"mp3", ff + " -i {in} -c:a libmp3lame -b:a {bitrate}k {workdir}/enc.mp3 && " +
                         ff + " -i {workdir}/enc.mp3 -ac 1 -ar 16000 -c:a pcm_s16le {out}"};
  return m;
}

std::vector<double> scaled_gaussian_noise(std::span<const double> signal, double snr_db,
                                          Seed seed) {
  const double p_signal = mean_power(signal);
  if (!(p_signal > 0.0)) throw SignalError("signal is silent; SNR is undefined");
  Rng rng(seed);
  std::vector<double> noise(signal.size());
  for (double& v : noise) v = rng.normal();
  const double p_noise = mean_power(noise);
  const double gain = std::sqrt(p_signal / (p_noise * std::pow(10.0, snr_db / 10.0)));
  for (double& v : noise) v *= gain;
  return noise;
}

AudioBuffer gaussian_noise(const AudioBuffer& buffer, double snr_db, Seed seed) {
  validate(buffer);
  if (snr_db == kNoNoise) return buffer;
  const auto noise = scaled_gaussian_noise(buffer.samples, snr_db, seed);
  return {add_and_clamp(buffer.samples, noise), buffer.sample_rate};
}

std::vector<double> scaled_background_noise(std::span<const double> signal,
                                            int sample_rate, const NoiseCorpus& corpus,
                                            double snr_db, Seed seed) {
  if (corpus.empty()) throw ConfigError("background noise corpus is empty");
  const double p_signal = mean_power(signal);
  if (!(p_signal > 0.0)) throw SignalError("signal is silent; SNR is undefined");
  Rng rng(seed);
  const std::size_t pick = rng.below(corpus.clips.size());
  AudioBuffer clip = corpus.clips[pick];
  if (clip.sample_rate != sample_rate) clip = resample(clip, sample_rate);
  const double p_clip = mean_power(clip.samples);
  const std::string id = pick < corpus.ids.size() ? corpus.ids[pick] : std::to_string(pick);
  if (!(p_clip > 0.0)) throw SignalError("noise clip '" + id + "' is silent");
  if (clip.samples.empty()) throw SignalError("noise clip '" + id + "' is empty");

  const std::size_t offset = rng.below(clip.size());
  std::vector<double> noise(signal.size());
  for (std::size_t i = 0; i < noise.size(); ++i) {
    noise[i] = clip.samples[(offset + i) % clip.size()];
  }
  const double p_noise = mean_power(noise);
  if (!(p_noise > 0.0)) throw SignalError("noise segment from '" + id + "' is silent");
  const double gain = std::sqrt(p_signal / (p_noise * std::pow(10.0, snr_db / 10.0)));
  for (double& v : noise) v *= gain;
  return noise;
}

AudioBuffer background_noise(const AudioBuffer& buffer, const NoiseCorpus& corpus,
                             double snr_db, Seed seed) {
  validate(buffer);
  if (snr_db == kNoNoise) return buffer;
  const auto noise =
      scaled_background_noise(buffer.samples, buffer.sample_rate, corpus, snr_db, seed);
  return {add_and_clamp(buffer.samples, noise), buffer.sample_rate};
}

AudioBuffer filter_pass(const AudioBuffer& buffer, FilterMode mode, double cutoff_ratio) {
  validate(buffer);
  if (!(cutoff_ratio > 0.0 && cutoff_ratio < 1.0)) {
    throw ConfigError("cutoff ratio must be in (0, 1), got " + format_number(cutoff_ratio));
  }
  const auto taps = mode == FilterMode::kLowPass ? design_lowpass(cutoff_ratio)
                                                 : design_highpass(cutoff_ratio);
  auto y = filter_same(buffer.samples, taps, static_cast<std::ptrdiff_t>(kFirTaps / 2));
  clamp_samples(y);
  return {std::move(y), buffer.sample_rate};
}

AudioBuffer pitch_shift(const AudioBuffer& buffer, double semitones) {
  validate(buffer);
  if (semitones == 0.0) return buffer;
  const double rate = std::pow(2.0, -semitones / 12.0);
  AudioBuffer stretched{phase_vocoder_stretch(buffer.samples, rate), buffer.sample_rate};
  AudioBuffer out = resample_by_ratio(stretched, rate, buffer.sample_rate);
  out.samples.resize(buffer.size(), 0.0);
  clamp_samples(out.samples);
  return out;
}

AudioBuffer time_stretch(const AudioBuffer& buffer, double speed) {
  validate(buffer);
  if (!(speed > 0.0)) throw ConfigError("stretch speed must be positive");
  if (speed == 1.0) return buffer;
  AudioBuffer out{phase_vocoder_stretch(buffer.samples, speed), buffer.sample_rate};
  if (out.samples.empty()) throw SignalError("stretched signal is empty");
  clamp_samples(out.samples);
  return out;
}

AudioBuffer echo(const AudioBuffer& buffer, double delay_s, double decay) {
  validate(buffer);
  if (!(decay >= 0.0 && decay <= 1.0)) throw ConfigError("echo decay must be in [0, 1]");
  if (!(delay_s > 0.0)) throw ConfigError("echo delay must be positive");
  const auto d = static_cast<std::size_t>(std::llround(delay_s * buffer.sample_rate));
  if (d >= buffer.size()) {
    throw SignalError("echo delay of " + std::to_string(d) + " samples exceeds the " +
                      std::to_string(buffer.size()) + "-sample clip");
  }
  AudioBuffer out = buffer;
  for (std::size_t n = d; n < out.size(); ++n) {
    out.samples[n] = buffer.samples[n] + decay * buffer.samples[n - d];
  }
  clamp_samples(out.samples);
  return out;
}

AudioBuffer smooth(const AudioBuffer& buffer, std::size_t window) {
  validate(buffer);
  const auto kernel = gaussian_kernel(window);
  auto y = filter_same(buffer.samples, kernel, static_cast<std::ptrdiff_t>((window - 1) / 2));
  return {std::move(y), buffer.sample_rate};
}

AudioBuffer quantize(const AudioBuffer& buffer, int bits) {
  validate(buffer);
  if (bits < 1 || bits > 16) throw ConfigError("bits must be in [1, 16]");
  const double top = std::ldexp(1.0, bits) - 1.0;  // L - 1
  AudioBuffer out = buffer;
  for (double& x : out.samples) {
    const double index = std::clamp(std::round((x + 1.0) / 2.0 * top), 0.0, top);
    x = 2.0 * index / top - 1.0;
  }
  return out;
}

AudioBuffer run_external(const AudioBuffer& buffer, const ExternalProcessor& processor,
                         const std::string& bitrate) {
  validate(buffer);
  TempDir work("adbench-" + processor.name);
  const auto in_path = work.path() / "in.wav";
  const auto out_path = work.path() / "out.wav";
  save_audio(buffer, in_path);
  const std::string command =
      expand_template(processor.command, {{"in", shell_quote(in_path.string())},
                                          {"out", shell_quote(out_path.string())},
                                          {"bitrate", bitrate},
                                          {"workdir", shell_quote(work.path().string())}});
  const CommandResult result = run_command(command);
  if (result.exit_code != 0) {
    throw AdapterError(processor.name + " exited with status " +
                           std::to_string(result.exit_code),
                       result.stderr_text);
  }
  AudioBuffer produced;
  try {
    produced = load_audio(out_path);
  } catch (const AudioError& e) {
    throw AdapterError(processor.name + " output unreadable: " + e.what(),
                       result.stderr_text);
  }
  return align_to(buffer, std::move(produced), processor.name);
}

AudioBuffer codec_roundtrip(const AudioBuffer& buffer, const std::string& codec_id,
                            double bitrate_kbps,
                            const std::map<std::string, ExternalProcessor>& adapters) {
  const auto it = adapters.find(codec_id);
  if (it == adapters.end()) {
    throw ConfigError("no adapter registered for codec '" + codec_id + "'");
  }
  return run_external(buffer, it->second, format_number(bitrate_kbps));
}

AudioBuffer replay(const AudioBuffer& buffer, const std::optional<ExternalProcessor>& adapter) {
  if (!adapter) throw ConfigError("replay adapter is not configured");
  return run_external(buffer, *adapter, "0");
}

AudioBuffer apply(const AudioBuffer& buffer, const CorruptionSpec& spec, Seed seed,
                  const CorruptionContext& context) {
  validate(spec);
  const double s = spec.severity;
  switch (spec.family) {
    case Family::kIdentity: validate(buffer); return buffer;
    case Family::kGaussianNoise: return gaussian_noise(buffer, s, seed);
    case Family::kBackgroundNoise:
      if (context.noise == nullptr) throw ConfigError("background noise corpus is not configured");
      return background_noise(buffer, *context.noise, s, seed);
    case Family::kLowPass: return filter_pass(buffer, FilterMode::kLowPass, s);
    case Family::kHighPass: return filter_pass(buffer, FilterMode::kHighPass, s);
    case Family::kPitchShift: return pitch_shift(buffer, s);
    case Family::kEcho: return echo(buffer, s, context.echo_decay);
    case Family::kTimeStretch: return time_stretch(buffer, s);
    case Family::kSmooth: return smooth(buffer, static_cast<std::size_t>(s));
    case Family::kReplay: return replay(buffer, context.replay);
    case Family::kQuantize: return quantize(buffer, static_cast<int>(s));
    case Family::kCodec: return codec_roundtrip(buffer, spec.codec_id, s, context.codecs);
  }
  throw ConfigError("unhandled corruption family");
}

Seed clip_seed(Seed run_seed, std::string_view clip_id, const CorruptionSpec& spec) {
  return derive_seed(run_seed, {clip_id, spec.label(), spec.severity_text()});
}

}  // namespace adbench
