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

#include "soundedit/dsp.h"

#include <algorithm>
#include <cmath>
#include <complex>

#include <gtest/gtest.h>

#include "test_util.h"

namespace soundedit {
namespace {

using testing::error_of;

// Plain O(n^2) DFT power at frequency bins above `hz`, relative to the
// total; independent of the FFT used by the library.
double fraction_above(const std::vector<double>& x, int rate, double hz) {
  const std::size_t n = x.size();
  double above = 0.0, total = 0.0;
  for (std::size_t k = 0; k <= n / 2; ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double ph = -2.0 * std::numbers::pi * static_cast<double>(k * i % n) /
                        static_cast<double>(n);
      acc += x[i] * std::complex<double>(std::cos(ph), std::sin(ph));
    }
    const double p = std::norm(acc);
    total += p;
    if (static_cast<double>(k) * rate / static_cast<double>(n) > hz) above += p;
  }
  return above / total;
}

TEST(Resample, SameRateIsIdentity) {
  const Clip c = testing::noise(1000, 1);
  const Clip r = resample(c, c.rate);
  EXPECT_EQ(r.samples, c.samples);
}

TEST(Resample, SineFrom48k) {
  const std::size_t n_in = 48000;
  const Clip in = testing::sine(1000.0, n_in, 0.8, 48000);
  const Clip out = resample(in, 16000);
  ASSERT_EQ(out.size(), 16000u);
  EXPECT_EQ(out.rate, 16000);
  const Clip want = testing::sine(1000.0, 16000, 0.8, 16000);
  // One filter length of edge: 64 zero crossings a side at the cutoff.
  const std::size_t trim = 140;
  double worst = 0.0;
  for (std::size_t i = trim; i + trim < out.size(); ++i) {
    worst = std::max(worst, std::abs(out.samples[i] - want.samples[i]));
  }
  EXPECT_LT(worst, 1e-3);
}

TEST(Resample, RejectsNyquistTone) {
  const Clip in = testing::sine(8000.0, 24000, 1.0, 48000);
  const Clip out = resample(in, 16000);
  ASSERT_EQ(out.size(), 8000u);
  std::vector<double> mid(out.samples.begin() + 1000, out.samples.begin() + 5096);
  // Output energy relative to the input tone's mean square.
  const double in_ms = 0.5;
  const double out_ms = mean_square(mid);
  EXPECT_LT(10.0 * std::log10(out_ms / in_ms + 1e-300), -60.0);
}

TEST(Resample, PassbandToneKeepsSpectrumLow) {
  const Clip in = testing::sine(3000.0, 44100, 0.5, 44100);
  const Clip out = resample(in, 16000);
  EXPECT_EQ(out.size(), 16000u);
  std::vector<double> mid(out.samples.begin() + 2000, out.samples.begin() + 4048);
  EXPECT_LT(fraction_above(mid, 16000, 7600.0), 1e-6);
}

TEST(Resample, OutputLength) {
  const Clip in = testing::noise(12345, 2, 0.1, 22050);
  EXPECT_EQ(resample(in, 16000).size(),
            static_cast<std::size_t>(std::llround(12345.0 * 16000 / 22050)));
}

TEST(Condition, PadsShortClips) {
  const Clip c = testing::noise(48000, 3);
  const Clip out = condition(c, 1);
  ASSERT_EQ(out.size(), kClipSamples);
  for (std::size_t i = 0; i < 48000; ++i) ASSERT_EQ(out.samples[i], c.samples[i]);
  for (std::size_t i = 48000; i < kClipSamples; ++i) ASSERT_EQ(out.samples[i], 0.0);
}

TEST(Condition, CropsDeterministically) {
  const Clip c = testing::noise(160000, 4);
  const Clip a = condition(c, 77);
  const Clip b = condition(c, 77);
  ASSERT_EQ(a.size(), kClipSamples);
  EXPECT_EQ(a.samples, b.samples);
  // The window is a contiguous slice of the input.
  auto it = std::search(c.samples.begin(), c.samples.end(), a.samples.begin(),
                        a.samples.end());
  EXPECT_NE(it, c.samples.end());
}

TEST(Condition, IdentityAndIdempotent) {
  const Clip c = testing::noise(kClipSamples, 5);
  EXPECT_EQ(condition(c, 9).samples, c.samples);
  const Clip once = condition(testing::noise(123456, 6), 3);
  EXPECT_EQ(condition(once, 8).samples, once.samples);
  EXPECT_EQ(error_of([] { condition(Clip(), 1); }), ErrorCode::kEmptyClip);
}

TEST(Stft, RoundTripWhiteNoise) {
  const Clip c = testing::noise(16000 + 77, 7, 0.3);
  const Clip back = istft(stft(c));
  ASSERT_EQ(back.size(), c.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    worst = std::max(worst, std::abs(back.samples[i] - c.samples[i]));
  }
  EXPECT_LT(worst, 1e-6);
}

TEST(Stft, OtherValidConfigs) {
  const Clip c = testing::noise(5000, 8);
  for (auto [w, h] : {std::pair<std::size_t, std::size_t>{256, 64},
                      {1024, 256}, {400, 100}, {512, 128}}) {
    const Clip back = istft(stft(c, w, h));
    for (std::size_t i = 0; i < c.size(); ++i) {
      ASSERT_NEAR(back.samples[i], c.samples[i], 1e-9) << w << "/" << h;
    }
  }
}

TEST(Stft, BadWindowConfig) {
  const Clip c = testing::noise(5000, 8);
  EXPECT_EQ(error_of([&] { stft(c, 512, 256); }), ErrorCode::kBadWindowConfig);
  EXPECT_EQ(error_of([&] { stft(c, 512, 100); }), ErrorCode::kBadWindowConfig);
  EXPECT_EQ(error_of([&] { stft(c, 512, 0); }), ErrorCode::kBadWindowConfig);
}

TEST(Stft, ZeroInZeroOut) {
  const Spectrogram s = stft(Clip::zeros(3000));
  for (const auto& v : s.data) ASSERT_EQ(v, std::complex<double>(0.0, 0.0));
}

TEST(Stft, ToneLandsInExpectedBin) {
  const Spectrogram s = stft(testing::sine(1000.0, 16000, 0.5));
  const std::size_t t = s.frames / 2;
  std::size_t best = 0;
  for (std::size_t k = 1; k < s.bins(); ++k) {
    if (std::abs(s.at(t, k)) > std::abs(s.at(t, best))) best = k;
  }
  EXPECT_NEAR(static_cast<double>(best), 32.0, 1.0);
  EXPECT_EQ(s.bins(), 257u);
}

TEST(Stft, ParsevalWithWindowCompensation) {
  for (std::uint64_t seed = 10; seed < 15; ++seed) {
    const Clip c = testing::noise(20000 + seed, seed, 0.2);
    const double e = energy(c.samples);
    EXPECT_NEAR(spectral_energy(stft(c)) / e, 1.0, 1e-3);
  }
}

TEST(Mel, FilterbankShape) {
  const Grid fb = mel_filterbank(257, 16000, 80);
  ASSERT_EQ(fb.rows, 80u);
  ASSERT_EQ(fb.cols, 257u);
  double prev_center = -1.0;
  for (std::size_t m = 0; m < fb.rows; ++m) {
    double sum = 0.0, peak_v = -1.0;
    std::size_t peak_k = 0;
    for (std::size_t k = 0; k < fb.cols; ++k) {
      sum += fb(m, k);
      if (fb(m, k) > peak_v) peak_v = fb(m, k), peak_k = k;
    }
    EXPECT_GT(sum, 0.0) << m;
    EXPECT_GE(static_cast<double>(peak_k), prev_center);
    prev_center = static_cast<double>(peak_k);
  }
  for (int i = 1; i < 80; ++i) {
    EXPECT_GT(mel_to_hz(i * 30.0), mel_to_hz((i - 1) * 30.0));
  }
  EXPECT_NEAR(mel_to_hz(hz_to_mel(1234.5)), 1234.5, 1e-9);
  EXPECT_NEAR(hz_to_mel(1000.0), 1000.0, 0.1);
}

TEST(Mel, ZeroInZeroOut) {
  const Grid z(257, 10);
  const Grid m = mel_project(z, 16000, 80);
  EXPECT_EQ(m.rows, 80u);
  for (double v : m.values) EXPECT_EQ(v, 0.0);
}

TEST(Mel, RejectsNegativeMagnitudes) {
  Grid g(257, 2, 1.0);
  g(5, 1) = -1.0;
  EXPECT_EQ(error_of([&] { mel_project(g, 16000); }), ErrorCode::kInvalidArgument);
}

}  // namespace
}  // namespace soundedit
