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

#include "soundedit/mixer.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "soundedit/error.h"
#include "soundedit/rng.h"

namespace soundedit {

namespace {

void check_lengths(std::span<const Clip> clips) {
  if (clips.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no sources to mix");
  }
  for (const Clip& c : clips) {
    if (c.size() != clips.front().size() || c.rate != clips.front().rate) {
      throw Error(ErrorCode::kLengthMismatch,
                  "sources differ in length or rate (" +
                      std::to_string(c.size()) + " vs " +
                      std::to_string(clips.front().size()) + ")");
    }
  }
}

}  // namespace

SnrRange snr_range(const Signature& signature) {
  if (!signature.is_speech()) return {-3.0, 3.0};
  switch (signature.style().volume) {
    case Level::kLow: return {-3.0, -2.0};
    case Level::kNormal: return {-1.0, 1.0};
    case Level::kHigh: return {2.0, 3.0};
  }
  return {-1.0, 1.0};
}

std::size_t reference_index(std::span<const Signature> signatures) {
  for (std::size_t i = 0; i < signatures.size(); ++i) {
    if (signatures[i].is_speech()) return i;
  }
  return 0;
}

std::vector<double> draw_snrs(std::span<const Signature> signatures,
                              std::uint64_t seed) {
  const std::size_t ref = reference_index(signatures);
  std::vector<double> out(signatures.size(), 0.0);
  for (std::size_t i = 0; i < signatures.size(); ++i) {
    if (i == ref) continue;
    Rng rng(derive_seed(seed, hash_string(signatures[i].to_string())));
    const SnrRange r = snr_range(signatures[i]);
    out[i] = rng.uniform(r.lo_db, r.hi_db);
  }
  return out;
}

GainAssignment gains_for_snrs(std::span<const Clip> clips,
                              std::span<const Signature> signatures,
                              std::span<const double> snr_db) {
  check_lengths(clips);
  if (signatures.size() != clips.size() || snr_db.size() != clips.size()) {
    throw Error(ErrorCode::kCountMismatch,
                "clips, signatures and levels must have equal counts");
  }
  GainAssignment g;
  g.reference = reference_index(signatures);
  g.snr_db.assign(snr_db.begin(), snr_db.end());
  g.snr_db[g.reference] = 0.0;
  std::vector<double> e(clips.size());
  for (std::size_t i = 0; i < clips.size(); ++i) {
    e[i] = mean_square(clips[i].samples);
    if (!(e[i] > 0.0)) {
      throw Error(ErrorCode::kSilentSource,
                  "source " + std::to_string(i) + " (" +
                      signatures[i].to_string() + ") has zero energy");
    }
  }
  const double e_ref = e[g.reference];
  g.gains.resize(clips.size());
  for (std::size_t i = 0; i < clips.size(); ++i) {
    g.gains[i] = i == g.reference
                     ? 1.0
                     : std::sqrt(std::pow(10.0, g.snr_db[i] / 10.0) * e_ref / e[i]);
  }
  return g;
}

GainAssignment assign_gains(std::span<const Clip> clips,
                            std::span<const Signature> signatures,
                            std::uint64_t seed) {
  const std::vector<double> snrs = draw_snrs(signatures, seed);
  return gains_for_snrs(clips, signatures, snrs);
}

double level_db(const Clip& a, const Clip& b) {
  return 10.0 * std::log10(mean_square(a.samples) / mean_square(b.samples));
}

std::vector<Clip> apply_gains(std::span<const Clip> clips,
                              std::span<const double> gains) {
  if (clips.size() != gains.size()) {
    throw Error(ErrorCode::kCountMismatch, "one gain per clip is required");
  }
  std::vector<Clip> out;
  out.reserve(clips.size());
  for (std::size_t i = 0; i < clips.size(); ++i) {
    Clip c = clips[i];
    for (double& s : c.samples) s *= gains[i];
    out.push_back(std::move(c));
  }
  return out;
}

Clip mix(std::span<const Clip> sources) {
  check_lengths(sources);
  Clip out = Clip::zeros(sources.front().size(), sources.front().rate);
  for (const Clip& s : sources) {
    for (std::size_t n = 0; n < s.size(); ++n) out.samples[n] += s.samples[n];
  }
  return out;
}

Clip weighted_mix(std::span<const Clip> sources,
                  std::span<const double> factors) {
  check_lengths(sources);
  if (factors.size() != sources.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "expected " + std::to_string(sources.size()) +
                    " scaling factors, got " + std::to_string(factors.size()));
  }
  Clip out = Clip::zeros(sources.front().size(), sources.front().rate);
  for (std::size_t i = 0; i < sources.size(); ++i) {
    const double a = factors[i];
    const auto& s = sources[i].samples;
    for (std::size_t n = 0; n < s.size(); ++n) out.samples[n] += a * s[n];
  }
  return out;
}

Clip target_mixture(std::span<const Clip> sources,
                    std::span<const Action> actions) {
  std::vector<double> factors;
  factors.reserve(actions.size());
  for (Action a : actions) factors.push_back(alpha(a));
  return weighted_mix(sources, factors);
}

MixturePair make_mixture_pair(std::vector<Clip> scaled_sources,
                              std::vector<Action> actions) {
  MixturePair pair;
  pair.input = mix(scaled_sources);
  pair.target = target_mixture(scaled_sources, actions);
  pair.sources = std::move(scaled_sources);
  pair.actions = std::move(actions);

  double top = std::max(peak(pair.input.samples), peak(pair.target.samples));
  for (const Clip& s : pair.sources) top = std::max(top, peak(s.samples));
  if (top > kPeakLimit) {
    pair.rescale = kPeakTarget / top;
    for (Clip& s : pair.sources) {
      for (double& v : s.samples) v *= pair.rescale;
    }
    // Rebuild from the rescaled sources so input and target stay exact sums.
    pair.input = mix(pair.sources);
    pair.target = target_mixture(pair.sources, pair.actions);
  }
  return pair;
}

}  // namespace soundedit
