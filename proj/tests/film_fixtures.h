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

// Shared small problems for the mask network tests.

#ifndef SOUNDEDIT_TESTS_FILM_FIXTURES_H_
#define SOUNDEDIT_TESTS_FILM_FIXTURES_H_

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "soundedit/film_net.h"
#include "soundedit/mixer.h"
#include "soundedit/rng.h"

namespace soundedit::testing {

// Sine with 200-sample linear fades at both ends.
inline Clip faded_tone(double hz, std::size_t n, double amp) {
  Clip c = Clip::zeros(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double fade = std::min({1.0, i / 200.0, (n - 1 - i) / 200.0});
    c.samples[i] =
        amp * fade * std::sin(2.0 * std::numbers::pi * hz * i / kSampleRate);
  }
  return c;
}

// Small net used by the finite-difference checks.
inline FilmConfig gradcheck_config() {
  FilmConfig cfg;
  cfg.channels = 8;
  cfg.blocks = 2;
  cfg.embed_dim = 8;
  cfg.seed = 3;
  return cfg;
}

struct GradCheckProblem {
  Clip x, y;
  std::vector<double> z;
};

// Two tones plus a little noise; the target keeps the first tone at double
// gain and halves the second.
inline GradCheckProblem gradcheck_problem(std::size_t samples = 1600,
                                          std::size_t embed_dim = 8) {
  Rng rng(5);
  const Clip a = faded_tone(700.0, samples, 0.4);
  const Clip b = faded_tone(2600.0, samples, 0.3);
  GradCheckProblem p;
  p.x = Clip::zeros(samples);
  p.y = Clip::zeros(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    const double n = 0.02 * rng.normal();
    p.x.samples[i] = a.samples[i] + b.samples[i] + n;
    p.y.samples[i] = 2.0 * a.samples[i] + 0.5 * b.samples[i];
  }
  p.z.resize(embed_dim);
  double norm = 0.0;
  for (double& v : p.z) {
    v = rng.normal();
    norm += v * v;
  }
  for (double& v : p.z) v /= std::sqrt(norm);
  return p;
}

// Eight two-tone mixtures with different edits; z is a random unit vector
// per action pair.
inline std::vector<TrainExample> toy_dataset(std::size_t samples,
                                             std::size_t embed_dim,
                                             std::uint64_t seed) {
  Rng rng(seed);
  std::vector<TrainExample> out;
  for (int i = 0; i < 8; ++i) {
    const std::vector<Clip> src = {
        faded_tone(rng.uniform(300.0, 900.0), samples, rng.uniform(0.2, 0.4)),
        faded_tone(rng.uniform(2000.0, 5000.0), samples, rng.uniform(0.2, 0.4))};
    const std::vector<Action> acts = {kAllActions[i % 4], kAllActions[(i / 4 + 1 + i) % 4]};
    TrainExample ex;
    ex.input = mix(src);
    ex.target = target_mixture(src, acts);
    Rng zr(derive_seed(seed, 100 + 4 * static_cast<int>(acts[0]) +
                                 static_cast<int>(acts[1])));
    ex.z.resize(embed_dim);
    double norm = 0.0;
    for (double& v : ex.z) {
      v = zr.normal();
      norm += v * v;
    }
    for (double& v : ex.z) v /= std::sqrt(norm);
    for (std::size_t j = 0; j < 2; ++j) {
      Clip s = src[j];
      for (double& v : s.samples) v *= alpha(acts[j]);
      ex.sources.push_back(s);
    }
    out.push_back(std::move(ex));
  }
  return out;
}

// One tone pair; the target keeps only the lower tone.
inline TrainExample overfit_example(std::size_t samples, std::size_t embed_dim) {
  const Clip a = faded_tone(440.0, samples, 0.4);
  const Clip b = faded_tone(3000.0, samples, 0.3);
  TrainExample ex;
  ex.input = mix(std::vector<Clip>{a, b});
  ex.target = a;
  ex.z.assign(embed_dim, 0.0);
  ex.z[0] = 1.0;
  ex.sources = {a, Clip::zeros(samples)};
  return ex;
}

}  // namespace soundedit::testing

#endif  // SOUNDEDIT_TESTS_FILM_FIXTURES_H_
