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

// Reference editors: the waveform oracle and ideal time-frequency masks.
// The learned editor lives in film_net.h.

#ifndef SOUNDEDIT_EDITOR_H_
#define SOUNDEDIT_EDITOR_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "soundedit/core.h"
#include "soundedit/dsp.h"

namespace soundedit {

inline constexpr double kMaskMax = 4.0;
inline constexpr double kMaskEpsilon = 1e-8;

enum class MaskKind { kIrm, kPsm };
std::string_view mask_kind_name(MaskKind kind);

// Gains per (bin, frame) of stft(mixture, window, hop); rows are bins.
struct EditingMask {
  Grid gains;
  std::size_t window = 512;
  std::size_t hop = 128;
};

// Applies the edit to the true sources; same result as target_mixture().
Clip oracle_edit(std::span<const Clip> sources, std::span<const Action> actions);

// IRM: |Y| / max(|X|, eps). PSM: Re(Y conj X) / max(|X|^2, eps). Both are
// clamped to [0, m_max].
EditingMask ideal_mask(const Clip& mixture, const Clip& target, MaskKind kind,
                       double m_max = kMaskMax, std::size_t window = 512,
                       std::size_t hop = 128);

// istft(mask * stft(mixture)); output has the mixture's length. Throws
// kDimMismatch when the mask does not match the mixture's spectrogram.
Clip mask_edit(const Clip& mixture, const EditingMask& mask);

inline constexpr std::size_t kEmbedDim = 32;
inline constexpr std::uint64_t kEmbedSeed = 0x5eed5eedULL;

// Feature-hashed semantic filter: each (action, descriptor) edit maps to a
// seeded Gaussian vector; the sum is scaled to unit length. Edit order does
// not matter.
std::vector<double> embed_instruction(const SimplifiedInstruction& simplified,
                                      std::size_t dim = kEmbedDim,
                                      std::uint64_t seed = kEmbedSeed);

// Mel view of a mask: each Mel row is the filter-weighted mean of its bins.
Grid mel_mask(const EditingMask& mask, int rate, std::size_t n_mels = 80);

// Grid exports. CSV has one row per grid row. PGM is 8-bit, row 0 at the
// bottom so low frequencies sit low; values are scaled by 255 / max_value.
void write_grid_csv(const std::filesystem::path& path, const Grid& grid);
void write_grid_pgm(const std::filesystem::path& path, const Grid& grid,
                    double max_value = kMaskMax);

}  // namespace soundedit

#endif  // SOUNDEDIT_EDITOR_H_
