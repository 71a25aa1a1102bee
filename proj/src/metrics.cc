// Copyright 2026 The soundedit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "soundedit/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "soundedit/error.h"

namespace soundedit {

namespace {

void check_equal(std::size_t a, std::size_t b) {
  if (a != b) {
    throw Error(ErrorCode::kLengthMismatch,
                "signal lengths differ: " + std::to_string(a) + " vs " +
                    std::to_string(b));
  }
}

// 10 log10(num / den) with the clamp rules applied.
MetricValue ratio_db(double num, double den) {
  if (den < kClampEpsilon * num) return {kClampDb, false};
  if (num < kClampEpsilon * den) return {-kClampDb, false};
  return {10.0 * std::log10(num / den), true};
}

std::vector<double> zero_mean(std::span<const double> x) {
  const double m =
      x.empty() ? 0.0
                : std::accumulate(x.begin(), x.end(), 0.0) /
                      static_cast<double>(x.size());
  std::vector<double> out(x.begin(), x.end());
  for (double& v : out) v -= m;
  return out;
}

}  // namespace

MetricValue snr(std::span<const double> est, std::span<const double> ref) {
  check_equal(est.size(), ref.size());
  double num = 0.0, den = 0.0;
  for (std::size_t n = 0; n < ref.size(); ++n) {
    num += ref[n] * ref[n];
    const double e = ref[n] - est[n];
    den += e * e;
  }
  if (!(num > 0.0)) {
    throw Error(ErrorCode::kZeroReference, "reference signal is all zero");
  }
  return ratio_db(num, den);
}

MetricValue snr(const Clip& est, const Clip& ref) {
  return snr(std::span<const double>(est.samples),
             std::span<const double>(ref.samples));
}

MetricValue snri(const Clip& input, const Clip& est, const Clip& ref) {
  return snr(est, ref) - snr(input, ref);
}

MetricValue si_sdr(std::span<const double> est, std::span<const double> ref) {
  check_equal(est.size(), ref.size());
  const std::vector<double> e = zero_mean(est);
  const std::vector<double> r = zero_mean(ref);
  const double rr = std::inner_product(r.begin(), r.end(), r.begin(), 0.0);
  const double ee = std::inner_product(e.begin(), e.end(), e.begin(), 0.0);
  if (!(rr > 0.0)) {
    throw Error(ErrorCode::kZeroReference, "reference is zero after mean removal");
  }
  if (!(ee > 0.0)) {
    throw Error(ErrorCode::kZeroEstimate, "estimate is zero after mean removal");
  }
  const double scale =
      std::inner_product(e.begin(), e.end(), r.begin(), 0.0) / rr;
  double target = 0.0, noise = 0.0;
  for (std::size_t n = 0; n < r.size(); ++n) {
    const double t = scale * r[n];
    target += t * t;
    const double d = e[n] - t;
    noise += d * d;
  }
  return ratio_db(target, noise);
}

MetricValue si_sdr(const Clip& est, const Clip& ref) {
  return si_sdr(std::span<const double>(est.samples),
                std::span<const double>(ref.samples));
}

PitResult pit_snr(std::span<const Clip> est_sources,
                  std::span<const Clip> ref_sources) {
  const std::size_t n = est_sources.size();
  if (n != ref_sources.size() || n == 0 || n > kMaxPitSources) {
    throw Error(ErrorCode::kCountMismatch,
                "pit_snr needs 1.." + std::to_string(kMaxPitSources) +
                    " estimates and as many references, got " +
                    std::to_string(n) + " and " +
                    std::to_string(ref_sources.size()));
  }
  // Pairwise table, then search over assignments.
  std::vector<MetricValue> table(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      table[i * n + j] = snr(est_sources[i], ref_sources[j]);
    }
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  PitResult best;
  double best_sum = -std::numeric_limits<double>::infinity();
  do {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += table[i * n + perm[i]].db;
    if (sum > best_sum) {
      best_sum = sum;
      best.permutation = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  best.mean_db = best_sum / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    best.per_source.push_back(table[i * n + best.permutation[i]]);
  }
  return best;
}

double pit_combined_loss(std::span<const Clip> est_sources,
                         std::span<const Clip> ref_sources,
                         const Clip& est_mix, const Clip& ref_mix) {
  return -pit_snr(est_sources, ref_sources).mean_db - snr(est_mix, ref_mix).db;
}

}  // namespace soundedit
