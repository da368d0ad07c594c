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

#include "adbench/quality.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "adbench/csv.hpp"
#include "adbench/error.hpp"
#include "adbench/parallel.hpp"
#include "adbench/process.hpp"

namespace adbench {
namespace fs = std::filesystem;

double snr_db(const AudioBuffer& reference, const AudioBuffer& degraded) {
  if (reference.sample_rate != degraded.sample_rate)
    throw SignalError("snr_db: sample rates differ");
  if (reference.size() != degraded.size())
    throw SignalError("snr_db: lengths differ (" + std::to_string(reference.size()) + " vs " +
                      std::to_string(degraded.size()) + ")");
  double signal = 0.0;
  double noise = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const double r = reference.samples[i];
    const double d = degraded.samples[i] - r;
    signal += r * r;
    noise += d * d;
  }
  if (signal == 0.0) throw SignalError("snr_db: silent reference");
  if (noise == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(signal / noise);
}

QualityRecord make_quality_record(std::string clip_id, std::optional<double> snr,
                                  std::optional<double> visqol) {
  QualityRecord r;
  r.clip_id = std::move(clip_id);
  r.snr_db = snr;
  r.visqol = visqol;
  r.acceptable = is_acceptable(visqol);
  return r;
}

namespace {

std::optional<double> leading_number(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == ':' ||
                             text[i] == '=' || text[i] == '\n' || text[i] == '\r'))
    ++i;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data() + i, text.data() + text.size(), value);
  if (ec != std::errc()) return std::nullopt;
  return value;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

double parse_mos(std::string_view output) {
  std::optional<double> value;
  const auto pos = output.rfind("MOS-LQO");
  if (pos != std::string_view::npos) {
    value = leading_number(output.substr(pos + 7));
  } else {
    const auto first = output.find_first_not_of(" \t\r\n");
    const auto last = output.find_last_not_of(" \t\r\n");
    if (first != std::string_view::npos) {
      const auto body = output.substr(first, last - first + 1);
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), v);
      if (ec == std::errc() && ptr == body.data() + body.size()) value = v;
    }
  }
  if (!value) throw AdapterError("cannot parse a MOS-LQO score from ViSQOL output");
  if (!(*value >= 1.0 && *value <= 5.0))
    throw AdapterError("ViSQOL score " + format_number(*value) + " outside [1, 5]");
  return *value;
}

VisqolAdapter::VisqolAdapter(std::string command, fs::path cache_dir)
    : command_(std::move(command)), cache_dir_(std::move(cache_dir)) {
  if (command_.empty()) throw ConfigError("empty ViSQOL command");
  if (!cache_dir_.empty()) fs::create_directories(cache_dir_);
}

std::string VisqolAdapter::default_command(const std::string& tool) {
  return shell_quote(tool) + " --reference_file {ref} --degraded_file {deg} --use_speech_mode";
}

std::string VisqolAdapter::cache_key(const std::vector<std::byte>& ref,
                                     const std::vector<std::byte>& deg) const {
  return hex64(fnv1a64(command_)) + "-" + hex64(fnv1a64(ref)) + "-" + hex64(fnv1a64(deg));
}

double VisqolAdapter::score(const AudioBuffer& reference, const AudioBuffer& degraded) {
  AudioBuffer deg = degraded;
  if (deg.sample_rate != reference.sample_rate) deg = resample(deg, reference.sample_rate);
  const auto ref_bytes = encode_wav(reference);
  const auto deg_bytes = encode_wav(deg);
  const std::string key = cache_key(ref_bytes, deg_bytes);
  {
    std::lock_guard lock(mu_);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  }
  const fs::path disk = cache_dir_.empty() ? fs::path() : cache_dir_ / (key + ".mos");
  if (!disk.empty() && fs::exists(disk)) {
    try {
      const double v = parse_mos(read_file(disk));
      std::lock_guard lock(mu_);
      memo_[key] = v;
      return v;
    } catch (const Error&) {
      // unreadable entry: recompute and overwrite
    }
  }

  TempDir tmp("adbench-visqol");
  const fs::path ref_path = tmp.path() / "ref.wav";
  const fs::path deg_path = tmp.path() / "deg.wav";
  {
    std::ofstream r(ref_path, std::ios::binary);
    r.write(reinterpret_cast<const char*>(ref_bytes.data()),
            static_cast<std::streamsize>(ref_bytes.size()));
    std::ofstream d(deg_path, std::ios::binary);
    d.write(reinterpret_cast<const char*>(deg_bytes.data()),
            static_cast<std::streamsize>(deg_bytes.size()));
    if (!r || !d) throw Error("cannot write ViSQOL inputs in " + tmp.path().string());
  }
  const std::string cmd = expand_template(
      command_, {{"ref", shell_quote(ref_path.string())}, {"deg", shell_quote(deg_path.string())}});
  ++tool_runs_;
  const CommandResult res = run_command(cmd);
  if (res.exit_code != 0) {
    throw AdapterError("ViSQOL exited with status " + std::to_string(res.exit_code),
                       res.stderr_text);
  }
  const double v = parse_mos(res.stdout_text);
  if (!disk.empty()) write_file_atomic(disk, format_number(v) + "\n");
  std::lock_guard lock(mu_);
  memo_[key] = v;
  return v;
}

QualityStats summarize(std::span<const QualityRecord> records) {
  QualityStats s;
  s.n = records.size();
  double sum_v = 0.0;
  std::size_t n_v = 0;
  for (const auto& r : records)
    if (r.visqol) {
      sum_v += *r.visqol;
      ++n_v;
    }
  if (n_v > 0) {
    const double mean = sum_v / static_cast<double>(n_v);
    double ss = 0.0;
    for (const auto& r : records)
      if (r.visqol) ss += (*r.visqol - mean) * (*r.visqol - mean);
    s.mean_visqol = mean;
    s.std_visqol = std::sqrt(ss / static_cast<double>(n_v));
  }
  if (!records.empty()) {
    double sum_snr = 0.0;
    bool all = true;
    for (const auto& r : records) {
      if (!r.snr_db) {
        all = false;
        break;
      }
      sum_snr += *r.snr_db;
    }
    if (all) s.mean_snr = sum_snr / static_cast<double>(records.size());
  }
  s.acceptable = is_acceptable(s.mean_visqol);
  return s;
}

std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k, Seed seed) {
  if (k > n) throw ConfigError("sample size " + std::to_string(k) + " exceeds " + std::to_string(n));
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  Rng rng(seed);
  for (std::size_t i = 0; i < k; ++i) std::swap(idx[i], idx[i + rng.below(n - i)]);
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

Seed quality_sample_seed(Seed run_seed, const CorruptionSpec& spec) {
  return derive_seed(run_seed, {"quality-sample", spec.label(), spec.severity_text()});
}

QualityRecord measure_pair(const std::string& clip_id, const AudioBuffer& clean,
                           const AudioBuffer& corrupted, VisqolAdapter* visqol) {
  std::optional<double> snr;
  if (clean.size() == corrupted.size() && clean.sample_rate == corrupted.sample_rate)
    snr = snr_db(clean, corrupted);
  std::optional<double> mos;
  if (visqol) mos = visqol->score(clean, corrupted);
  return make_quality_record(clip_id, snr, mos);
}

std::vector<QualityCell> quality_sweep(const Manifest& corpus,
                                       std::span<const CorruptionSpec> cells,
                                       const QualitySweepOptions& options) {
  if (options.sample_n > corpus.size())
    throw ConfigError("quality sample_n " + std::to_string(options.sample_n) +
                      " exceeds corpus size " + std::to_string(corpus.size()));
  for (const auto& spec : cells) validate(spec);
  std::vector<QualityCell> out;
  for (const auto& spec : cells) {
    QualityCell cell;
    cell.spec = spec;
    const auto picks =
        sample_indices(corpus.size(), options.sample_n, quality_sample_seed(options.seed, spec));
    std::vector<std::optional<QualityRecord>> records(picks.size());
    std::vector<std::string> errors(picks.size());
    parallel_for(picks.size(), options.jobs, [&](std::size_t i) {
      const auto& entry = corpus.entries[picks[i]];
      try {
        const auto clean = resample(load_audio(entry.path), kDetectorRate);
        const auto corrupted =
            apply(clean, spec, clip_seed(options.seed, entry.clip_id, spec), options.context);
        records[i] = measure_pair(entry.clip_id, clean, corrupted, options.visqol);
      } catch (const Error& e) {
        errors[i] = e.what();
      }
    });
    for (std::size_t i = 0; i < picks.size(); ++i) {
      if (records[i])
        cell.records.push_back(std::move(*records[i]));
      else
        cell.failures.emplace_back(corpus.entries[picks[i]].clip_id, errors[i]);
    }
    cell.stats = summarize(cell.records);
    out.push_back(std::move(cell));
  }
  return out;
}

namespace {

std::string opt_field(const std::optional<double>& v) { return v ? format_number(*v) : ""; }

}  // namespace

std::string quality_csv(std::span<const QualityCell> cells) {
  std::string out = "family,severity,mean_visqol,std_visqol,mean_snr,acceptable,n\n";
  for (const auto& c : cells) {
    out += csv_line({c.spec.label(), c.spec.severity_text(), opt_field(c.stats.mean_visqol),
                     opt_field(c.stats.std_visqol), opt_field(c.stats.mean_snr),
                     c.stats.acceptable ? "true" : "false", std::to_string(c.stats.n)});
  }
  return out;
}

}  // namespace adbench
