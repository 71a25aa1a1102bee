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

#ifndef SOUNDEDIT_DSP_H_
#define SOUNDEDIT_DSP_H_

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace soundedit {

inline constexpr int kSampleRate = 16000;
inline constexpr double kClipSeconds = 5.0;
inline constexpr std::size_t kClipSamples = 80000;

// Mono waveform. Samples are nominally within [-1, 1].
struct Clip {
  std::vector<double> samples;
  int rate = kSampleRate;

  Clip() = default;
  Clip(std::vector<double> s, int r) : samples(std::move(s)), rate(r) {}
  static Clip zeros(std::size_t n, int rate = kSampleRate) {
    return Clip(std::vector<double>(n, 0.0), rate);
  }

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  double duration() const { return static_cast<double>(size()) / rate; }
  // Throws kInvalidArgument if the rate is not positive or a sample is not
  // finite.
  void validate() const;
};

double energy(std::span<const double> x);       // sum of squares
double mean_square(std::span<const double> x);  // energy / length
double peak(std::span<const double> x);         // max |x|

// Band-limited resampling with a Kaiser-windowed sinc evaluated through a
// polyphase table. Output length is round(len * target / source).
Clip resample(const Clip& clip, int target_rate);

// Crops (random start drawn from `seed`) or zero-pads at the end to exactly
// `seconds` of audio. Throws kEmptyClip on empty input.
Clip condition(const Clip& clip, std::uint64_t seed,
               double seconds = kClipSeconds);

// Complex STFT frames with bins = window / 2 + 1. The signal is padded by
// (window - hop) zeros in front and enough behind for every sample to be
// covered by window / hop frames, so istft reconstructs the whole clip.
struct Spectrogram {
  std::size_t window = 512;
  std::size_t hop = 128;
  std::size_t frames = 0;
  std::size_t length = 0;  // samples in the analysed clip
  int rate = kSampleRate;
  std::vector<std::complex<double>> data;  // frame-major: [frame][bin]

  std::size_t bins() const { return window / 2 + 1; }
  std::complex<double>& at(std::size_t frame, std::size_t bin) {
    return data[frame * bins() + bin];
  }
  const std::complex<double>& at(std::size_t frame, std::size_t bin) const {
    return data[frame * bins() + bin];
  }
};

// Hann analysis and synthesis windows with weighted overlap-add. Throws
// kBadWindowConfig unless hop divides the window and the squared-window
// overlap sum is constant.
Spectrogram stft(const Clip& clip, std::size_t window = 512,
                 std::size_t hop = 128);
Clip istft(const Spectrogram& spec);

// Sum over frames and bins of |X|^2 scaled back to waveform energy.
double spectral_energy(const Spectrogram& spec);

// Dense row-major real matrix.
struct Grid {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  Grid() = default;
  Grid(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), values(r * c, fill) {}
  double& operator()(std::size_t r, std::size_t c) {
    return values[r * cols + c];
  }
  double operator()(std::size_t r, std::size_t c) const {
    return values[r * cols + c];
  }
};

double hz_to_mel(double hz);
double mel_to_hz(double mel);

// Triangular Mel filterbank, n_mels x n_bins, spanning 0 Hz to rate / 2.
Grid mel_filterbank(std::size_t n_bins, int rate, std::size_t n_mels = 80);

// Projects a bins x frames magnitude grid onto Mel bands. With
// `normalize`, each band is the weighted mean of its bins rather than the
// weighted sum, so a constant grid stays constant.
Grid mel_project(const Grid& magnitudes, int rate, std::size_t n_mels = 80,
                 bool normalize = false);

// |X| as a bins x frames grid.
Grid magnitude(const Spectrogram& spec);

}  // namespace soundedit

#endif  // SOUNDEDIT_DSP_H_
