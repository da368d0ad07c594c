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

// O(n^2) reference implementations of the detection metrics.

#ifndef ADBENCH_TESTS_METRIC_ORACLES_HPP_
#define ADBENCH_TESTS_METRIC_ORACLES_HPP_

#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <vector>

#include "adbench/metrics.hpp"

namespace oracle {

struct BruteEer {
  double eer, threshold, fpr, fnr;
};

inline BruteEer brute_eer(const std::vector<adbench::ScoreRecord>& recs) {
  std::set<double> distinct;
  for (const auto& r : recs) distinct.insert(r.score);
  std::vector<double> cands = {-std::numeric_limits<double>::infinity()};
  for (auto it = distinct.begin(); std::next(it) != distinct.end(); ++it) {
    const double a = *it, b = *std::next(it);
    cands.push_back(a + (b - a) / 2.0);
  }
  cands.push_back(std::numeric_limits<double>::infinity());
  BruteEer best{0, 0, 0, 0};
  bool have = false;
  double best_gap = 0;
  for (double t : cands) {
    double fp = 0, fn = 0, nb = 0, ns = 0;
    for (const auto& r : recs) {
      if (r.label == adbench::Label::kSpoof) {
        ++ns;
        if (!(r.score > t)) ++fn;
      } else {
        ++nb;
        if (r.score > t) ++fp;
      }
    }
    const double fpr = fp / nb, fnr = fn / ns, gap = std::abs(fpr - fnr);
    const bool better = !have || gap < best_gap || (gap == best_gap && fpr < best.fpr) ||
                        (gap == best_gap && fpr == best.fpr && t < best.threshold);
    if (better) {
      have = true;
      best_gap = gap;
      best = {(fpr + fnr) / 2.0, t, fpr, fnr};
    }
  }
  return best;
}

inline double brute_accuracy(const std::vector<adbench::ScoreRecord>& recs, double t) {
  double ok = 0;
  for (const auto& r : recs) ok += ((r.score > t) == (r.label == adbench::Label::kSpoof)) ? 1 : 0;
  return ok / static_cast<double>(recs.size());
}

inline double pairwise_auroc(const std::vector<adbench::ScoreRecord>& recs) {
  double wins = 0, pairs = 0;
  for (const auto& s : recs) {
    if (s.label != adbench::Label::kSpoof) continue;
    for (const auto& b : recs) {
      if (b.label != adbench::Label::kBonaFide) continue;
      pairs += 1;
      if (s.score > b.score) wins += 1;
      else if (s.score == b.score) wins += 0.5;
    }
  }
  return wins / pairs;
}

/// (fpr, tpr) for each distinct score descending, predicting spoof at >=.
inline std::vector<std::pair<double, double>> brute_roc(const std::vector<adbench::ScoreRecord>& recs) {
  std::set<double, std::greater<>> distinct;
  for (const auto& r : recs) distinct.insert(r.score);
  std::vector<std::pair<double, double>> pts = {{0.0, 0.0}};
  for (double t : distinct) {
    double fp = 0, tp = 0, nb = 0, ns = 0;
    for (const auto& r : recs) {
      if (r.label == adbench::Label::kSpoof) { ++ns; if (r.score >= t) ++tp; }
      else { ++nb; if (r.score >= t) ++fp; }
    }
    pts.emplace_back(fp / nb, tp / ns);
  }
  return pts;
}

/// Random two-class score set of size n in [2, 200] with deliberate ties:
/// scores are drawn from a small integer lattice scaled by 0.1.
inline std::vector<adbench::ScoreRecord> random_scores(std::mt19937_64& gen) {
  std::uniform_int_distribution<int> size_dist(2, 200);
  const int n = size_dist(gen);
  std::uniform_int_distribution<int> lattice(0, std::max(2, n / 3));
  std::bernoulli_distribution spoof(0.5);
  std::vector<adbench::ScoreRecord> recs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    recs[i].clip_id = "c" + std::to_string(i);
    recs[i].label = spoof(gen) ? adbench::Label::kSpoof : adbench::Label::kBonaFide;
    // Spoof skews higher so sets range from separable to overlapping.
    recs[i].score = 0.1 * (lattice(gen) + (recs[i].label == adbench::Label::kSpoof ? lattice(gen) / 2 : 0));
  }
  recs[0].label = adbench::Label::kSpoof;
  recs[1].label = adbench::Label::kBonaFide;
  return recs;
}

}  // namespace oracle

#endif  // ADBENCH_TESTS_METRIC_ORACLES_HPP_
