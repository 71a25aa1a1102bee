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

// RIFF WAV input/output. Reading accepts PCM 8/16/24/32-bit and IEEE float
// 32/64-bit; multi-channel files are averaged down to mono.

#ifndef SOUNDEDIT_WAV_H_
#define SOUNDEDIT_WAV_H_

#include <filesystem>

#include "soundedit/dsp.h"

namespace soundedit {

enum class WavFormat { kFloat32, kPcm16 };

Clip read_wav(const std::filesystem::path& path);
void write_wav(const std::filesystem::path& path, const Clip& clip,
               WavFormat format = WavFormat::kFloat32);

// Value a sample takes after a write/read cycle in `format`.
double quantize_sample(double v, WavFormat format);

}  // namespace soundedit

#endif  // SOUNDEDIT_WAV_H_
