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

// A small generated source catalog for demos and tests. Speech entries are
// voiced harmonic signals whose pitch, syllable rate, level and vibrato
// follow their style; audio entries are tones, sweeps, bursts and clicks.

#ifndef SOUNDEDIT_SYNTHETIC_H_
#define SOUNDEDIT_SYNTHETIC_H_

#include <cstdint>
#include <filesystem>

#include "soundedit/dsp.h"
#include "soundedit/core.h"

namespace soundedit {

struct SyntheticCatalogOptions {
  std::size_t speakers = 20;
  std::size_t utterances = 3;       // per speaker
  std::size_t clips_per_label = 4;  // 8 labels
  std::uint64_t seed = 0;
};

// Speech-like clip for `style`, `seconds` long at `rate`.
Clip synth_speech(const StyleVector& style, double seconds, int rate,
                  std::uint64_t seed);

// Labels produced by synth_audio.
const std::vector<std::string>& synthetic_labels();
// Throws kInvalidArgument for a label not in synthetic_labels().
Clip synth_audio(const std::string& label, double seconds, int rate,
                 std::uint64_t seed);

// Writes WAV files and metadata.json under `dir` and returns the metadata
// path. Entries carry split hints so that every split holds all labels.
std::filesystem::path write_synthetic_catalog(
    const std::filesystem::path& dir,
    const SyntheticCatalogOptions& options = SyntheticCatalogOptions());

}  // namespace soundedit

#endif  // SOUNDEDIT_SYNTHETIC_H_
