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

// Level assignment and mixing.
//
// The reference source (first speech source, else the first source) is
// mixed at gain 1. Every other source i gets a level SNR_i relative to it,
// drawn uniformly from a range fixed by its signature:
//   speech, volume low / normal / high   [-3, -2] / [-1, 1] / [2, 3] dB
//   audio                                [-3, 3] dB
// and the gain that realizes it exactly in mean-square energy.

#ifndef SOUNDEDIT_MIXER_H_
#define SOUNDEDIT_MIXER_H_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "soundedit/core.h"
#include "soundedit/dsp.h"

namespace soundedit {

struct SnrRange {
  double lo_db;
  double hi_db;
};

SnrRange snr_range(const Signature& signature);

struct GainAssignment {
  std::vector<double> gains;
  std::vector<double> snr_db;  // 0 for the reference
  std::size_t reference = 0;
};

std::size_t reference_index(std::span<const Signature> signatures);

// Per-source level draws. Each draw is seeded from (seed, signature), so the
// value a source receives does not depend on where it sits in the list.
std::vector<double> draw_snrs(std::span<const Signature> signatures,
                              std::uint64_t seed);

// Gains realizing `snr_db` against the reference. Throws kSilentSource for a
// zero-energy source and kLengthMismatch for unequal clip lengths.
GainAssignment gains_for_snrs(std::span<const Clip> clips,
                              std::span<const Signature> signatures,
                              std::span<const double> snr_db);

GainAssignment assign_gains(std::span<const Clip> clips,
                            std::span<const Signature> signatures,
                            std::uint64_t seed);

// 10 log10(E(a) / E(b)) with E the mean-square energy.
double level_db(const Clip& a, const Clip& b);

std::vector<Clip> apply_gains(std::span<const Clip> clips,
                              std::span<const double> gains);

// x = sum_i s_i. Throws kLengthMismatch (or kInvalidArgument when empty).
Clip mix(std::span<const Clip> sources);
// sum_i alpha_i s_i with arbitrary scalar factors.
Clip weighted_mix(std::span<const Clip> sources,
                  std::span<const double> factors);
// y = sum_i alpha(a_i) s_i.
Clip target_mixture(std::span<const Clip> sources,
                    std::span<const Action> actions);

struct MixturePair {
  Clip input;
  Clip target;
  std::vector<Clip> sources;  // scaled sources, after any peak rescale
  std::vector<Action> actions;
  double rescale = 1.0;  // common factor applied to everything above
};

inline constexpr double kPeakLimit = 1.0;
inline constexpr double kPeakTarget = 0.99;

// Builds input and target mixtures. If any of input, target or sources
// peaks above 1.0, all of them are multiplied by one common factor that
// brings the largest peak to 0.99.
MixturePair make_mixture_pair(std::vector<Clip> scaled_sources,
                              std::vector<Action> actions);

}  // namespace soundedit

#endif  // SOUNDEDIT_MIXER_H_
