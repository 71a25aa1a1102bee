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

#include <gtest/gtest.h>

#include "soundedit/metrics.h"
#include "soundedit/rng.h"
#include "test_util.h"

namespace soundedit {
namespace {

using testing::error_of;

StyleVector with_volume(Level v, Gender g = Gender::kFemale) {
  StyleVector s;
  s.gender = g;
  s.volume = v;
  return s;
}

TEST(SnrRange, PublishedRanges) {
  EXPECT_EQ(snr_range(with_volume(Level::kLow)).lo_db, -3.0);
  EXPECT_EQ(snr_range(with_volume(Level::kLow)).hi_db, -2.0);
  EXPECT_EQ(snr_range(with_volume(Level::kNormal)).lo_db, -1.0);
  EXPECT_EQ(snr_range(with_volume(Level::kNormal)).hi_db, 1.0);
  EXPECT_EQ(snr_range(with_volume(Level::kHigh)).lo_db, 2.0);
  EXPECT_EQ(snr_range(with_volume(Level::kHigh)).hi_db, 3.0);
  EXPECT_EQ(snr_range(ClassLabel("dog")).lo_db, -3.0);
  EXPECT_EQ(snr_range(ClassLabel("dog")).hi_db, 3.0);
}

TEST(Reference, FirstSpeechElseFirst) {
  const std::vector<Signature> a = {ClassLabel("dog"), testing::speaker(1),
                                    testing::speaker(2)};
  EXPECT_EQ(reference_index(a), 1u);
  const std::vector<Signature> b = {ClassLabel("dog"), ClassLabel("rain")};
  EXPECT_EQ(reference_index(b), 0u);
}

TEST(Gains, Examples) {
  const Clip a = testing::noise(4000, 1);
  const std::vector<Signature> sigs = {testing::speaker(0), ClassLabel("dog")};
  const std::vector<double> zero = {0.0, 0.0};
  // Equal energy, 0 dB: same gain.
  const std::vector<Clip> same = {a, a};
  auto g = gains_for_snrs(same, sigs, zero);
  EXPECT_DOUBLE_EQ(g.gains[0], g.gains[1]);
  // Four times the reference energy needs half the amplitude.
  Clip loud = a;
  for (double& v : loud.samples) v *= 2.0;
  const std::vector<Clip> pair = {a, loud};
  g = gains_for_snrs(pair, sigs, zero);
  EXPECT_DOUBLE_EQ(g.gains[0], 1.0);
  EXPECT_NEAR(g.gains[1], 0.5, 1e-15);
}

TEST(Gains, Errors) {
  const std::vector<Signature> sigs = {testing::speaker(0), ClassLabel("dog")};
  const std::vector<Clip> silent = {testing::noise(100, 1), Clip::zeros(100)};
  EXPECT_EQ(error_of([&] { assign_gains(silent, sigs, 1); }),
            ErrorCode::kSilentSource);
  const std::vector<Clip> ragged = {testing::noise(100, 1), testing::noise(99, 2)};
  EXPECT_EQ(error_of([&] { assign_gains(ragged, sigs, 1); }),
            ErrorCode::kLengthMismatch);
}

// Recomputes achieved levels from the scaled clips with a separate formula.
TEST(Gains, AchievedMatchesRequested) {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Signature> sigs = testing::signatures_for(2, 2);
    std::vector<Clip> clips;
    for (int i = 0; i < 4; ++i) {
      clips.push_back(testing::noise(2000, rng.next(), rng.uniform(0.01, 1.0)));
    }
    const auto g = assign_gains(clips, sigs, rng.next());
    const auto scaled = apply_gains(clips, g.gains);
    double ref_e = 0.0;
    for (double v : scaled[g.reference].samples) ref_e += v * v;
    for (std::size_t i = 0; i < 4; ++i) {
      double e = 0.0;
      for (double v : scaled[i].samples) e += v * v;
      EXPECT_NEAR(10.0 * std::log10(e / ref_e), g.snr_db[i], 1e-9);
      const SnrRange r = snr_range(sigs[i]);
      if (i != g.reference) {
        EXPECT_GE(g.snr_db[i], r.lo_db);
        EXPECT_LE(g.snr_db[i], r.hi_db);
      }
    }
  }
}

TEST(Gains, IndependentOfSourceOrder) {
  const auto sigs = testing::signatures_for(2, 2);
  const std::vector<double> fwd = draw_snrs(sigs, 99);
  std::vector<Signature> rev = {sigs[0], sigs[3], sigs[2], sigs[1]};
  const std::vector<double> back = draw_snrs(rev, 99);
  EXPECT_EQ(fwd[1], back[3]);
  EXPECT_EQ(fwd[2], back[2]);
  EXPECT_EQ(fwd[3], back[1]);
  EXPECT_EQ(draw_snrs(sigs, 99), fwd);
}

TEST(Mix, Examples) {
  const Clip s = testing::noise(500, 3);
  Clip neg = s;
  for (double& v : neg.samples) v = -v;
  const std::vector<Clip> cancel = {s, neg};
  for (double v : mix(cancel).samples) EXPECT_EQ(v, 0.0);
  const std::vector<Clip> one = {s};
  EXPECT_EQ(mix(one).samples, s.samples);
  const std::vector<Clip> ragged = {s, testing::noise(499, 4)};
  EXPECT_EQ(error_of([&] { mix(ragged); }), ErrorCode::kLengthMismatch);
}

TEST(Mix, UncorrelatedEnergiesAdd) {
  const std::vector<Clip> pair = {testing::noise(80000, 5, 0.3),
                                  testing::noise(80000, 6, 0.2)};
  const double sum = energy(pair[0].samples) + energy(pair[1].samples);
  EXPECT_NEAR(energy(mix(pair).samples) / sum, 1.0, 0.02);
}

TEST(Target, Examples) {
  const std::vector<Clip> src = {testing::noise(300, 7), testing::noise(300, 8)};
  const std::vector<Action> keep = {Action::kKeep, Action::kKeep};
  EXPECT_EQ(target_mixture(src, keep).samples, mix(src).samples);
  const std::vector<Action> down = {Action::kVolDown, Action::kVolDown};
  const Clip d = target_mixture(src, down);
  const Clip m = mix(src);
  for (std::size_t i = 0; i < d.size(); ++i) EXPECT_EQ(d.samples[i], 0.5 * m.samples[i]);
  const std::vector<Action> extract = {Action::kKeep, Action::kRemove};
  EXPECT_EQ(target_mixture(src, extract).samples, src[0].samples);
}

TEST(Target, LinearInAlpha) {
  const std::vector<Clip> src = {testing::noise(300, 9), testing::noise(300, 10),
                                 testing::noise(300, 11)};
  Rng rng(12);
  for (int t = 0; t < 50; ++t) {
    std::vector<Action> a, b;
    std::vector<double> sum;
    for (int i = 0; i < 3; ++i) {
      a.push_back(kAllActions[rng.uniform_index(4)]);
      b.push_back(kAllActions[rng.uniform_index(4)]);
      sum.push_back(alpha(a.back()) + alpha(b.back()));
    }
    const Clip ya = target_mixture(src, a);
    const Clip yb = target_mixture(src, b);
    const Clip yab = weighted_mix(src, sum);
    for (std::size_t n = 0; n < 300; ++n) {
      EXPECT_NEAR(ya.samples[n] + yb.samples[n], yab.samples[n], 1e-12);
    }
  }
}

TEST(Target, OverallVolumeBaselines) {
  const std::vector<Clip> src = {testing::noise(1000, 13), testing::noise(1000, 14)};
  const Clip x = mix(src);
  const std::vector<Action> up = {Action::kVolUp, Action::kVolUp};
  const std::vector<Action> down = {Action::kVolDown, Action::kVolDown};
  EXPECT_NEAR(snr(x, target_mixture(src, up)).db, 10.0 * std::log10(4.0), 1e-9);
  EXPECT_NEAR(snr(x, target_mixture(src, down)).db, 0.0, 1e-9);
}

TEST(MixturePair, PeakRescaleIsCommon) {
  std::vector<Clip> src = {testing::sine(100.0, 1000, 0.9),
                           testing::sine(100.0, 1000, 0.9)};
  const std::vector<Action> acts = {Action::kVolUp, Action::kKeep};
  const MixturePair p = make_mixture_pair(src, acts);
  const double pk = std::max({peak(p.input.samples), peak(p.target.samples),
                              peak(p.sources[0].samples), peak(p.sources[1].samples)});
  EXPECT_NEAR(pk, kPeakTarget, 1e-12);
  EXPECT_LT(p.rescale, 1.0);
  EXPECT_EQ(p.input.samples, mix(p.sources).samples);
  EXPECT_EQ(p.target.samples, target_mixture(p.sources, acts).samples);
  // Quiet material is left alone.
  std::vector<Clip> quiet = {testing::sine(100.0, 1000, 0.1),
                             testing::sine(300.0, 1000, 0.1)};
  const MixturePair q = make_mixture_pair(quiet, acts);
  EXPECT_EQ(q.rescale, 1.0);
  EXPECT_EQ(q.sources[0].samples, quiet[0].samples);
}

}  // namespace
}  // namespace soundedit
