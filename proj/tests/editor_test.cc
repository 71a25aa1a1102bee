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

#include "soundedit/editor.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "soundedit/metrics.h"
#include "soundedit/mixer.h"
#include "soundedit/prompt.h"
#include "test_util.h"

namespace soundedit {
namespace {

using testing::error_of;

Clip add(const Clip& a, const Clip& b) {
  Clip out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.samples[i] += b.samples[i];
  return out;
}

Clip scaled(const Clip& a, double g) {
  Clip out = a;
  for (double& v : out.samples) v *= g;
  return out;
}

TEST(Oracle, MatchesTargetMixture) {
  const std::vector<Clip> src = {testing::noise(4000, 1), testing::noise(4000, 2),
                                 testing::noise(4000, 3)};
  const std::vector<Action> acts = {Action::kVolUp, Action::kRemove, Action::kVolDown};
  const Clip a = oracle_edit(src, acts);
  const Clip b = target_mixture(src, acts);
  EXPECT_EQ(a.samples, b.samples);
  EXPECT_FALSE(snr(a, b).finite);

  const std::vector<Action> keep(3, Action::kKeep);
  EXPECT_EQ(oracle_edit(src, keep).samples, mix(src).samples);

  const std::vector<Action> tse = {Action::kRemove, Action::kKeep, Action::kRemove};
  const Clip kept = oracle_edit(src, tse);
  for (std::size_t i = 0; i < kept.size(); ++i) {
    EXPECT_DOUBLE_EQ(kept.samples[i], src[1].samples[i]);
  }
}

TEST(IdealMask, TrivialTargets) {
  const Clip x = add(testing::sine(440.0, 8000, 0.5), testing::noise(8000, 9, 0.05));
  for (MaskKind kind : {MaskKind::kIrm, MaskKind::kPsm}) {
    const EditingMask same = ideal_mask(x, x, kind);
    const EditingMask zero = ideal_mask(x, Clip::zeros(x.size()), kind);
    const EditingMask twice = ideal_mask(x, scaled(x, 2.0), kind);
    const Spectrogram X = stft(x, 512, 128);
    for (std::size_t t = 0; t < X.frames; ++t) {
      for (std::size_t k = 0; k < X.bins(); ++k) {
        EXPECT_EQ(zero.gains(k, t), 0.0);
        if (std::abs(X.at(t, k)) > kMaskEpsilon) {
          EXPECT_NEAR(same.gains(k, t), 1.0, 1e-12);
          EXPECT_NEAR(twice.gains(k, t), 2.0, 1e-12);
        }
      }
    }
  }
}

TEST(IdealMask, EntriesStayInClampRange) {
  const Clip x = testing::noise(6000, 4, 0.2);
  const Clip y = add(scaled(x, 3.0), testing::noise(6000, 5, 0.5));
  for (MaskKind kind : {MaskKind::kIrm, MaskKind::kPsm}) {
    const EditingMask m = ideal_mask(x, y, kind);
    bool hit_top = false;
    for (double v : m.gains.values) {
      ASSERT_TRUE(std::isfinite(v));
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, kMaskMax);
      hit_top |= v == kMaskMax;
    }
    EXPECT_TRUE(hit_top);
  }
  EXPECT_EQ(error_of([&] { ideal_mask(x, Clip::zeros(10), MaskKind::kPsm); }),
            ErrorCode::kLengthMismatch);
}

TEST(MaskEdit, ConstantMasks) {
  const Clip x = testing::noise(16000, 11, 0.3);
  EditingMask m = ideal_mask(x, x, MaskKind::kPsm);
  for (double value : {1.0, 0.5}) {
    std::fill(m.gains.values.begin(), m.gains.values.end(), value);
    const Clip y = mask_edit(x, m);
    ASSERT_EQ(y.size(), x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      EXPECT_NEAR(y.samples[i], value * x.samples[i], 1e-6);
    }
  }
  EditingMask bad = m;
  bad.gains = Grid(m.gains.rows - 1, m.gains.cols, 1.0);
  EXPECT_EQ(error_of([&] { mask_edit(x, bad); }), ErrorCode::kDimMismatch);
}

TEST(MaskEdit, PsmSeparatesDisjointTones) {
  const Clip a = testing::sine(440.0, 32000, 0.5);
  const Clip b = testing::sine(2093.0, 32000, 0.4);
  const Clip x = add(a, b);
  const Clip y = mask_edit(x, ideal_mask(x, a, MaskKind::kPsm));
  EXPECT_GE(snr(y, a).db, 40.0);
}

// For sources with disjoint spectral support the mask of a joint edit is
// 1 + sum of (single-action mask - 1), up to the clamp.
TEST(MaskEdit, JointMaskIsSumOfSingleActionMasks) {
  const Clip a = testing::sine(500.0, 16000, 0.4);
  const Clip b = testing::sine(3000.0, 16000, 0.3);
  const Clip x = add(a, b);
  const std::vector<Clip> src = {a, b};
  const std::vector<Action> joint = {Action::kVolUp, Action::kVolDown};
  const std::vector<Action> first = {Action::kVolUp, Action::kKeep};
  const std::vector<Action> second = {Action::kKeep, Action::kVolDown};
  const EditingMask mj = ideal_mask(x, target_mixture(src, joint), MaskKind::kPsm);
  const EditingMask m1 = ideal_mask(x, target_mixture(src, first), MaskKind::kPsm);
  const EditingMask m2 = ideal_mask(x, target_mixture(src, second), MaskKind::kPsm);
  const Grid mag = magnitude(stft(x, 512, 128));
  double top = 0.0;
  for (double v : mag.values) top = std::max(top, v);
  std::size_t checked = 0;
  for (std::size_t i = 0; i < mag.values.size(); ++i) {
    if (mag.values[i] < 1e-3 * top) continue;
    ++checked;
    const double combined =
        std::clamp(m1.gains.values[i] + m2.gains.values[i] - 1.0, 0.0, kMaskMax);
    EXPECT_NEAR(mj.gains.values[i], combined, 1e-3);
  }
  EXPECT_GT(checked, 100u);
}

std::vector<SimplifiedInstruction> all_edits_2_2() {
  const std::vector<Signature> sigs = testing::signatures_for(2, 2);
  std::vector<SimplifiedInstruction> out;
  for (int code = 0; code < 256; ++code) {
    std::vector<Edit> edits;
    for (int i = 0; i < 4; ++i) {
      edits.push_back({kAllActions[(code >> (2 * i)) & 3], sigs[i]});
    }
    if (error_of([&] { validate_instruction(edits); })) continue;
    out.push_back(simplify(validate_instruction(edits), 17));
  }
  return out;
}

TEST(Embedding, DeterministicUnitNormAndOrderFree) {
  const auto edits = all_edits_2_2();
  ASSERT_EQ(edits.size(), 254u);
  for (const auto& e : edits) {
    const std::vector<double> z = embed_instruction(e);
    ASSERT_EQ(z.size(), kEmbedDim);
    EXPECT_EQ(z, embed_instruction(e));
    double n = 0.0;
    for (double v : z) n += v * v;
    EXPECT_NEAR(std::sqrt(n), 1.0, 1e-12);
    SimplifiedInstruction rev = e;
    std::reverse(rev.edits.begin(), rev.edits.end());
    const std::vector<double> zr = embed_instruction(rev);
    for (std::size_t i = 0; i < z.size(); ++i) EXPECT_NEAR(z[i], zr[i], 1e-12);
  }
}

TEST(Embedding, AllEditsAtTwoTwoAreSeparated) {
  const auto edits = all_edits_2_2();
  std::vector<std::vector<double>> zs;
  for (const auto& e : edits) zs.push_back(embed_instruction(e));
  double closest = 1e9;
  for (std::size_t i = 0; i < zs.size(); ++i) {
    for (std::size_t j = i + 1; j < zs.size(); ++j) {
      double d = 0.0;
      for (std::size_t k = 0; k < zs[i].size(); ++k) {
        d += (zs[i][k] - zs[j][k]) * (zs[i][k] - zs[j][k]);
      }
      closest = std::min(closest, std::sqrt(d));
    }
  }
  EXPECT_GT(closest, 1e-3);
}

TEST(Export, CsvAndPgm) {
  const auto dir = testing::temp_dir("editor_export");
  Grid g(2, 3);
  g(0, 0) = 0.0;
  g(0, 1) = 1.0;
  g(0, 2) = 4.0;
  g(1, 0) = 2.0;
  g(1, 1) = 8.0;
  g(1, 2) = -1.0;
  write_grid_csv(dir / "m.csv", g);
  std::ifstream csv(dir / "m.csv");
  std::stringstream ss;
  ss << csv.rdbuf();
  EXPECT_EQ(ss.str(), "0,1,4\n2,8,-1\n");

  write_grid_pgm(dir / "m.pgm", g, 4.0);
  std::ifstream pgm(dir / "m.pgm", std::ios::binary);
  std::string magic;
  std::size_t w, h, maxv;
  pgm >> magic >> w >> h >> maxv;
  pgm.get();
  EXPECT_EQ(magic, "P5");
  EXPECT_EQ(w, 3u);
  EXPECT_EQ(h, 2u);
  EXPECT_EQ(maxv, 255u);
  unsigned char px[6];
  pgm.read(reinterpret_cast<char*>(px), 6);
  // Top image row is grid row 1.
  const unsigned char want[6] = {128, 255, 0, 0, 64, 255};
  for (int i = 0; i < 6; ++i) EXPECT_EQ(px[i], want[i]) << i;
  std::filesystem::remove_all(dir);
}

TEST(Export, MelMaskShape) {
  const Clip x = testing::noise(8000, 3);
  const EditingMask m = ideal_mask(x, scaled(x, 2.0), MaskKind::kPsm);
  const Grid mel = mel_mask(m, 16000, 80);
  EXPECT_EQ(mel.rows, 80u);
  EXPECT_EQ(mel.cols, m.gains.cols);
  for (double v : mel.values) {
    if (v != 0.0) {
      EXPECT_NEAR(v, 2.0, 1e-9);
    }
  }
}

}  // namespace
}  // namespace soundedit
