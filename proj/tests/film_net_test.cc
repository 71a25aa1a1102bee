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

#include "soundedit/film_net.h"

#include <cmath>
#include <fstream>
#include <numeric>

#include <gtest/gtest.h>

#include "film_fixtures.h"
#include "soundedit/metrics.h"
#include "test_util.h"

namespace soundedit {
namespace {

using testing::error_of;

double rel_error(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

TEST(FilmNet, LatentFrameArithmetic) {
  FilmMaskNet net;
  EXPECT_EQ(net.latent_frames(80000), 9999u);
  FilmConfig wide;
  wide.kernel = 64;
  wide.stride = 32;
  wide.channels = 8;
  wide.blocks = 1;
  EXPECT_EQ(FilmMaskNet(wide).latent_frames(80000), 2499u);
  EXPECT_EQ(error_of([&] { net.latent_frames(15); }), ErrorCode::kShapeMismatch);
}

TEST(FilmNet, ShapesAndErrors) {
  FilmMaskNet net(testing::gradcheck_config());
  const auto p = testing::gradcheck_problem(1601);
  const FilmOutput out = net.forward(p.x, p.z);
  EXPECT_EQ(out.output.size(), p.x.size());
  ASSERT_EQ(out.masks.size(), 1u);
  EXPECT_EQ(out.masks[0].gains.rows, 8u);
  EXPECT_EQ(out.masks[0].gains.cols, net.latent_frames(1601));
  for (double v : out.masks[0].gains.values) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, kMaskMax);
  }
  const std::vector<double> short_z(3, 0.1);
  EXPECT_EQ(error_of([&] { net.forward(p.x, short_z); }), ErrorCode::kShapeMismatch);
  EXPECT_EQ(error_of([&] { net.snr_loss_and_grad(p.x, p.z, Clip::zeros(10)); }),
            ErrorCode::kShapeMismatch);
  FilmConfig bad;
  bad.channels = 0;
  EXPECT_EQ(error_of([&] { FilmMaskNet n(bad); }), ErrorCode::kInvalidArgument);
}

TEST(FilmNet, InitializationIsSeeded) {
  FilmConfig cfg = testing::gradcheck_config();
  FilmMaskNet a(cfg), b(cfg);
  EXPECT_TRUE(std::equal(a.params().begin(), a.params().end(), b.params().begin()));
  cfg.seed = 4;
  FilmMaskNet c(cfg);
  EXPECT_FALSE(std::equal(a.params().begin(), a.params().end(), c.params().begin()));
}

TEST(FilmNet, ForcedIdentityFilmEqualsUnconditioned) {
  FilmMaskNet net(testing::gradcheck_config());
  const auto p = testing::gradcheck_problem();
  for (std::size_t r = 0; r < 2; ++r) {
    const std::string b = "block" + std::to_string(r) + ".";
    for (const char* name : {"gamma.w2", "beta.w2", "beta.b2"}) {
      const TensorInfo& t = net.tensor(b + name);
      std::fill_n(net.params().begin() + t.offset, t.size, 0.0);
    }
    const TensorInfo& g = net.tensor(b + "gamma.b2");
    std::fill_n(net.params().begin() + g.offset, g.size, 1.0);
  }
  const FilmOutput conditioned = net.forward(p.x, p.z);
  const FilmOutput plain = net.forward(p.x, p.z, /*film_identity=*/true);
  EXPECT_EQ(conditioned.output.samples, plain.output.samples);

  std::vector<double> other(p.z.size(), 0.0);
  other[1] = 1.0;
  EXPECT_EQ(net.forward(p.x, other, true).output.samples, plain.output.samples);
}

TEST(FilmNet, ModulationIsConstantOverTime) {
  FilmMaskNet net(testing::gradcheck_config());
  const auto p = testing::gradcheck_problem();
  FilmTrace trace;
  net.forward(p.x, p.z, false, &trace);
  ASSERT_EQ(trace.gamma.size(), 2u);
  for (std::size_t r = 0; r < 2; ++r) {
    const Grid& h = trace.block_input[r];
    const Grid& mod = trace.modulated[r];
    for (std::size_t c = 0; c < h.rows; ++c) {
      for (std::size_t l = 0; l < h.cols; ++l) {
        ASSERT_EQ(mod(c, l), trace.gamma[r][c] * h(c, l) + trace.beta[r][c]);
      }
    }
  }
  // The conditioning actually depends on z.
  FilmTrace other;
  std::vector<double> z2 = p.z;
  z2[0] += 0.5;
  net.forward(p.x, z2, false, &other);
  EXPECT_NE(trace.gamma[0], other.gamma[0]);
}

TEST(FilmNet, GradientsMatchCentralDifferences) {
  FilmMaskNet net(testing::gradcheck_config());
  const auto p = testing::gradcheck_problem();
  const FilmLoss analytic = net.snr_loss_and_grad(p.x, p.z, p.y);
  const double h = 1e-4;
  std::span<double> w = net.params();
  double worst = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double keep = w[i];
    w[i] = keep + h;
    const double up = net.snr_loss_and_grad(p.x, p.z, p.y).loss;
    w[i] = keep - h;
    const double down = net.snr_loss_and_grad(p.x, p.z, p.y).loss;
    w[i] = keep;
    const double numeric = (up - down) / (2.0 * h);
    worst = std::max(worst, rel_error(analytic.grad[i], numeric));
    EXPECT_LT(rel_error(analytic.grad[i], numeric), 1e-3) << "param " << i;
  }
  std::vector<double> z = p.z;
  for (std::size_t d = 0; d < z.size(); ++d) {
    const double keep = z[d];
    z[d] = keep + h;
    const double up = net.snr_loss_and_grad(p.x, z, p.y).loss;
    z[d] = keep - h;
    const double down = net.snr_loss_and_grad(p.x, z, p.y).loss;
    z[d] = keep;
    EXPECT_LT(rel_error(analytic.grad_z[d], (up - down) / (2.0 * h)), 1e-3)
        << "z " << d;
  }
  RecordProperty("worst_relative_error", std::to_string(worst));
}

TEST(FilmNet, ExactFitSitsOnTheClamp) {
  FilmMaskNet net(testing::gradcheck_config());
  const auto p = testing::gradcheck_problem();
  const Clip y = net.forward(p.x, p.z).output;
  const FilmLoss l = net.snr_loss_and_grad(p.x, p.z, y);
  EXPECT_EQ(l.loss, -kClampDb);
  for (double g : l.grad) ASSERT_EQ(g, 0.0);
  for (double g : l.grad_z) ASSERT_EQ(g, 0.0);
}

TEST(FilmNet, TiedMasksSumToSingleOutput) {
  FilmConfig one = testing::gradcheck_config();
  FilmConfig two = one;
  two.masks = 2;
  FilmMaskNet single(one), pair(two);
  for (const TensorInfo& t : single.tensors()) {
    if (t.name.rfind("head.", 0) == 0) continue;
    std::copy_n(single.params().begin() + t.offset, t.size,
                pair.params().begin() + pair.tensor(t.name).offset);
  }
  // Each of the two masks gets half of the single head.
  for (const char* name : {"head.w", "head.b"}) {
    const TensorInfo& s = single.tensor(name);
    const TensorInfo& d = pair.tensor(name);
    for (std::size_t half = 0; half < 2; ++half) {
      for (std::size_t i = 0; i < s.size; ++i) {
        pair.params()[d.offset + half * s.size + i] = 0.5 * single.params()[s.offset + i];
      }
    }
  }
  const auto p = testing::gradcheck_problem();
  const FilmOutput a = single.forward(p.x, p.z);
  const FilmOutput b = pair.forward(p.x, p.z);
  ASSERT_EQ(b.sources.size(), 2u);
  for (std::size_t n = 0; n < a.output.size(); ++n) {
    EXPECT_NEAR(b.sources[0].samples[n] + b.sources[1].samples[n],
                a.output.samples[n], 1e-12);
    EXPECT_EQ(b.output.samples[n], b.sources[0].samples[n] + b.sources[1].samples[n]);
  }
}

TEST(FilmNet, PitLossIgnoresReferenceOrder) {
  FilmConfig cfg = testing::gradcheck_config();
  cfg.masks = 2;
  FilmMaskNet net(cfg);
  const auto data = testing::toy_dataset(1600, 8, 3);
  const TrainExample& ex = data[1];
  const std::vector<Clip> swapped = {ex.sources[1], ex.sources[0]};
  const FilmLoss a = net.pit_loss_and_grad(ex.input, ex.z, ex.target, ex.sources);
  const FilmLoss b = net.pit_loss_and_grad(ex.input, ex.z, ex.target, swapped);
  EXPECT_EQ(a.loss, b.loss);
  EXPECT_EQ(a.grad, b.grad);

  const auto est = net.forward(ex.input, ex.z);
  EXPECT_NEAR(a.loss,
              pit_combined_loss(est.sources, ex.sources, est.output, ex.target), 1e-9);
  EXPECT_EQ(error_of([&] {
              net.pit_loss_and_grad(ex.input, ex.z, ex.target,
                                    std::span<const Clip>(ex.sources).first(1));
            }),
            ErrorCode::kCountMismatch);
}

TEST(FilmNet, PitGradientsMatchCentralDifferences) {
  FilmConfig cfg = testing::gradcheck_config();
  cfg.masks = 2;
  FilmMaskNet net(cfg);
  const auto data = testing::toy_dataset(1600, 8, 3);
  const TrainExample& ex = data[2];
  const FilmLoss analytic = net.pit_loss_and_grad(ex.input, ex.z, ex.target, ex.sources);
  std::span<double> w = net.params();
  const double h = 1e-4;
  // Every 7th parameter keeps the run short while touching every tensor.
  for (std::size_t i = 0; i < w.size(); i += 7) {
    const double keep = w[i];
    w[i] = keep + h;
    const double up = net.pit_loss_and_grad(ex.input, ex.z, ex.target, ex.sources).loss;
    w[i] = keep - h;
    const double down = net.pit_loss_and_grad(ex.input, ex.z, ex.target, ex.sources).loss;
    w[i] = keep;
    EXPECT_LT(rel_error(analytic.grad[i], (up - down) / (2.0 * h)), 1e-3) << i;
  }
}

// Regression fixture: 200 plain steps at lr 1e-3 on eight examples.
TEST(FilmNet, ToyTrainingReducesLoss) {
  FilmConfig cfg;
  cfg.channels = 16;
  cfg.blocks = 2;
  FilmMaskNet net(cfg);
  const auto data = testing::toy_dataset(2000, cfg.embed_dim, 11);
  TrainConfig tc;
  tc.epochs = 200;
  tc.lr = 1e-3;
  const TrainResult r = train_toy(net, data, tc);
  ASSERT_EQ(r.loss_curve.size(), 201u);
  const auto& c = r.loss_curve;
  EXPECT_LT(c.back(), c.front() - 3.0);
  const double first = std::accumulate(c.begin(), c.begin() + 50, 0.0) / 50;
  const double last = std::accumulate(c.end() - 50, c.end(), 0.0) / 50;
  EXPECT_LT(last, first);
  EXPECT_NEAR(dataset_loss(net, data), c.back(), 1e-12);
}

TEST(FilmNet, OverfitsOneMixture) {
  FilmConfig cfg;
  cfg.channels = 32;
  cfg.blocks = 2;
  FilmMaskNet net(cfg);
  const TrainExample ex = testing::overfit_example(4000, cfg.embed_dim);
  TrainConfig tc;
  tc.epochs = 600;
  tc.lr = 1e-3;
  tc.clip_norm = 1.0;
  train_toy(net, std::span<const TrainExample>(&ex, 1), tc);
  EXPECT_GT(snr(net.forward(ex.input, ex.z).output, ex.target).db, 20.0);
}

TEST(FilmNet, DivergenceIsReported) {
  FilmMaskNet net(testing::gradcheck_config());
  const auto data = testing::toy_dataset(1600, 8, 3);
  TrainConfig tc;
  tc.epochs = 5;
  tc.lr = 1e300;
  EXPECT_EQ(error_of([&] { train_toy(net, data, tc); }), ErrorCode::kDiverged);
  EXPECT_EQ(error_of([&] { train_toy(net, {}, tc); }), ErrorCode::kInvalidArgument);
}

TEST(FilmNet, CheckpointRoundTrip) {
  const auto dir = testing::temp_dir("film_ckpt");
  FilmConfig cfg = testing::gradcheck_config();
  cfg.masks = 2;
  FilmMaskNet net(cfg);
  net.save(dir / "net.bin");
  const FilmMaskNet back = FilmMaskNet::load(dir / "net.bin");
  EXPECT_EQ(back.config().channels, 8u);
  EXPECT_EQ(back.config().masks, 2u);
  ASSERT_EQ(back.params().size(), net.params().size());
  for (std::size_t i = 0; i < net.params().size(); ++i) {
    ASSERT_EQ(back.params()[i], static_cast<double>(static_cast<float>(net.params()[i])));
  }
  const auto size = std::filesystem::file_size(dir / "net.bin");
  EXPECT_GT(size, 4 * net.params().size());

  // Corruptions.
  {
    std::fstream f(dir / "net.bin", std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(0);
    f.put('X');
  }
  EXPECT_EQ(error_of([&] { FilmMaskNet::load(dir / "net.bin"); }),
            ErrorCode::kBadCheckpoint);
  net.save(dir / "net.bin");
  std::filesystem::resize_file(dir / "net.bin", size - 3);
  EXPECT_EQ(error_of([&] { FilmMaskNet::load(dir / "net.bin"); }),
            ErrorCode::kBadCheckpoint);
  EXPECT_EQ(error_of([&] { FilmMaskNet::load(dir / "absent.bin"); }),
            ErrorCode::kMissingFile);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace soundedit
