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

// SNR-family evaluation metrics. Degenerate ratios are clamped to +/-300 dB
// and flagged instead of returning infinities.

#ifndef SOUNDEDIT_METRICS_H_
#define SOUNDEDIT_METRICS_H_

#include <cstddef>
#include <span>
#include <vector>

#include "soundedit/dsp.h"

namespace soundedit {

inline constexpr double kClampDb = 300.0;
// Energy ratio below which a term counts as exactly zero.
inline constexpr double kClampEpsilon = 1e-30;

struct MetricValue {
  double db = 0.0;
  bool finite = true;  // false when db is a clamp value

  // Sum / difference; the result is finite only if both operands are.
  friend MetricValue operator-(MetricValue a, MetricValue b) {
    return {a.db - b.db, a.finite && b.finite};
  }
};

// 10 log10(|ref|^2 / |ref - est|^2). Throws kZeroReference, kLengthMismatch.
MetricValue snr(std::span<const double> est, std::span<const double> ref);
MetricValue snr(const Clip& est, const Clip& ref);

// snr(est, ref) - snr(input, ref).
MetricValue snri(const Clip& input, const Clip& est, const Clip& ref);

// Scale-invariant SDR on zero-mean copies of both signals. Throws
// kZeroReference / kZeroEstimate for signals that vanish after mean removal.
MetricValue si_sdr(std::span<const double> est, std::span<const double> ref);
MetricValue si_sdr(const Clip& est, const Clip& ref);

struct PitResult {
  // permutation[i] is the reference index matched to estimate i.
  std::vector<std::size_t> permutation;
  double mean_db = 0.0;
  std::vector<MetricValue> per_source;  // in estimate order
};

inline constexpr std::size_t kMaxPitSources = 8;

// Exhaustive search over all N! assignments for the maximum summed SNR.
// Throws kCountMismatch on unequal or out-of-range counts.
PitResult pit_snr(std::span<const Clip> est_sources,
                  std::span<const Clip> ref_sources);

// Combined multi-mask objective: -(mean PIT-SNR over sources) - SNR(mix).
double pit_combined_loss(std::span<const Clip> est_sources,
                         std::span<const Clip> ref_sources,
                         const Clip& est_mix, const Clip& ref_mix);

}  // namespace soundedit

#endif  // SOUNDEDIT_METRICS_H_
