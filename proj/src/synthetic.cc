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

#include "soundedit/synthetic.h"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>

#include "json.hpp"
#include "soundedit/error.h"
#include "soundedit/rng.h"
#include "soundedit/wav.h"

namespace soundedit {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double level_scale(Level l, double low, double normal, double high) {
  switch (l) {
    case Level::kLow: return low;
    case Level::kNormal: return normal;
    case Level::kHigh: return high;
  }
  return normal;
}

void fade(Clip& c, std::size_t n) {
  n = std::min(n, c.size() / 2);
  for (std::size_t i = 0; i < n; ++i) {
    const double g = static_cast<double>(i) / static_cast<double>(n);
    c.samples[i] *= g;
    c.samples[c.size() - 1 - i] *= g;
  }
}

}  // namespace

Clip synth_speech(const StyleVector& style, double seconds, int rate,
                  std::uint64_t seed) {
  Rng rng(seed);
  const auto n = static_cast<std::size_t>(seconds * rate);
  Clip c{std::vector<double>(n, 0.0), rate};
  const double f0 = (style.gender == Gender::kFemale ? 210.0 : 115.0) *
                    level_scale(style.pitch, 0.8, 1.0, 1.25) * rng.uniform(0.95, 1.05);
  const double syllables = level_scale(style.tempo, 2.8, 4.2, 6.0);
  const double amp = level_scale(style.volume, 0.08, 0.2, 0.45);
  const int e = static_cast<int>(style.emotion);
  const double vibrato_depth = 0.01 + 0.012 * e;
  const double vibrato_rate = 3.0 + 0.7 * e;
  const double drift = rng.uniform(0.0, kTwoPi);
  const double nyquist = 0.5 * rate;
  double phase = 0.0;
  double syl_phase = rng.uniform(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / rate;
    const double f = f0 * (1.0 + vibrato_depth * std::sin(kTwoPi * vibrato_rate * t) +
                           0.05 * std::sin(0.7 * t + drift));
    phase += kTwoPi * f / rate;
    syl_phase += syllables / rate;
    // Syllable envelope with a short pause every fourth syllable.
    const double s = std::sin(std::numbers::pi * std::fmod(syl_phase, 1.0));
    const double gate = (static_cast<long>(syl_phase) % 4 == 3) ? 0.15 : 1.0;
    double v = 0.0;
    for (int h = 1; h <= 16 && h * f < nyquist; ++h) {
      // Two broad formant bumps.
      const double hf = h * f;
      const double formant = std::exp(-std::pow((hf - 600.0) / 400.0, 2)) +
                             0.6 * std::exp(-std::pow((hf - 1800.0) / 600.0, 2)) + 0.1;
      v += formant / h * std::sin(h * phase);
    }
    c.samples[i] = amp * s * s * gate * v + 0.002 * amp * rng.normal();
  }
  fade(c, static_cast<std::size_t>(0.01 * rate));
  return c;
}

const std::vector<std::string>& synthetic_labels() {
  static const std::vector<std::string> kLabels = {
      "bell", "siren", "engine", "rain", "whistle", "clock tick", "dog bark", "car horn"};
  return kLabels;
}

Clip synth_audio(const std::string& label, double seconds, int rate,
                 std::uint64_t seed) {
  Rng rng(seed);
  const auto n = static_cast<std::size_t>(seconds * rate);
  Clip c{std::vector<double>(n, 0.0), rate};
  const double j = rng.uniform(0.9, 1.1);
  double phase = 0.0;
  double lp = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / rate;
    double v = 0.0;
    if (label == "bell") {
      const double tt = std::fmod(t, 1.5);
      for (double p : {1.0, 2.76, 5.4}) {
        v += std::exp(-3.0 * tt * p) * std::sin(kTwoPi * 520.0 * j * p * tt) / p;
      }
      v *= 0.3;
    } else if (label == "siren") {
      const double f = 700.0 * j + 350.0 * std::sin(kTwoPi * 0.4 * t);
      phase += kTwoPi * f / rate;
      v = 0.2 * std::sin(phase);
    } else if (label == "engine") {
      const double f = 45.0 * j * (1.0 + 0.05 * std::sin(kTwoPi * 0.3 * t));
      phase += kTwoPi * f / rate;
      for (int h = 1; h <= 12; ++h) v += std::sin(h * phase) / h;
      v = 0.15 * v + 0.01 * rng.normal();
    } else if (label == "rain") {
      lp = 0.7 * lp + 0.3 * rng.normal();
      v = 0.08 * lp * (1.0 + 0.3 * std::sin(kTwoPi * 0.2 * t));
      if (rng.bernoulli(20.0 / rate)) v += rng.uniform(-0.3, 0.3);
    } else if (label == "whistle") {
      const double on = std::fmod(t, 1.2) < 0.8 ? 1.0 : 0.0;
      phase += kTwoPi * 2200.0 * j * (1.0 + 0.01 * std::sin(kTwoPi * 6.0 * t)) / rate;
      v = 0.2 * on * std::sin(phase);
    } else if (label == "clock tick") {
      const double tt = std::fmod(t, 0.5 * j);
      v = 0.5 * std::exp(-tt * 400.0) * std::sin(kTwoPi * 3000.0 * tt);
    } else if (label == "dog bark") {
      const double tt = std::fmod(t, 0.9 * j);
      const double env = tt < 0.25 ? std::sin(std::numbers::pi * tt / 0.25) : 0.0;
      lp = 0.5 * lp + 0.5 * rng.normal();
      phase += kTwoPi * (380.0 - 400.0 * tt) / rate;
      v = env * (0.25 * std::sin(phase) + 0.1 * std::sin(3 * phase) + 0.05 * lp);
    } else if (label == "car horn") {
      const double on = std::fmod(t, 2.0) < 1.1 ? 1.0 : 0.0;
      phase += kTwoPi * 410.0 * j / rate;
      v = 0.12 * on * (std::sin(phase) + 0.8 * std::sin(1.25 * phase) + 0.3 * std::sin(2 * phase));
    } else {
      throw Error(ErrorCode::kInvalidArgument, "no generator for label " + label);
    }
    c.samples[i] = v;
  }
  fade(c, static_cast<std::size_t>(0.005 * rate));
  return c;
}

std::filesystem::path write_synthetic_catalog(const std::filesystem::path& dir,
                                              const SyntheticCatalogOptions& options) {
  if (options.speakers < 3 || options.utterances == 0 || options.clips_per_label == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "synthetic catalog needs >= 3 speakers and non-empty clip counts");
  }
  std::filesystem::create_directories(dir / "speech");
  std::filesystem::create_directories(dir / "audio");
  nlohmann::json meta = nlohmann::json::array();
  Rng rng(options.seed);

  const std::size_t held = std::max<std::size_t>(1, options.speakers * 15 / 100);
  for (std::size_t s = 0; s < options.speakers; ++s) {
    const std::string speaker = "spk" + std::to_string(100 + s);
    const std::string split = s < options.speakers - 2 * held ? "train"
                              : s < options.speakers - held   ? "valid"
                                                              : "test";
    StyleVector style;
    style.gender = s % 2 ? Gender::kMale : Gender::kFemale;
    std::set<StyleVector> used;
    for (std::size_t u = 0; u < options.utterances; ++u) {
      do {
        style.pitch = static_cast<Level>(rng.uniform_index(3));
        style.tempo = static_cast<Level>(rng.uniform_index(3));
        style.volume = static_cast<Level>(rng.uniform_index(3));
        style.emotion = static_cast<Emotion>(rng.uniform_index(8));
      } while (!used.insert(style).second);
      const int rate = (s + u) % 5 == 0 ? 22050 : kSampleRate;
      const double seconds = rng.uniform(3.5, 7.0);
      const std::string id = speaker + "_" + std::to_string(u);
      const std::string rel = "speech/" + id + ".wav";
      write_wav(dir / rel, synth_speech(style, seconds, rate, rng.next()));
      nlohmann::json row = {{"id", id}, {"type", "speech"}, {"path", rel},
                            {"speaker", speaker}, {"split", split}};
      for (StyleAttribute a : kAllStyleAttributes) {
        row[std::string(attribute_name(a))] = attribute_value_name(a, style.get(a));
      }
      meta.push_back(row);
    }
  }

  const auto& labels = synthetic_labels();
  for (std::size_t l = 0; l < labels.size(); ++l) {
    for (std::size_t k = 0; k < options.clips_per_label; ++k) {
      const std::string split = options.clips_per_label < 3 ? "train"
                                : k % 4 == 2                ? "valid"
                                : k % 4 == 3                ? "test"
                                                            : "train";
      std::string slug = labels[l];
      std::replace(slug.begin(), slug.end(), ' ', '_');
      const std::string id = slug + "_" + std::to_string(k);
      const std::string rel = "audio/" + id + ".wav";
      const int rate = (k == 1 && l % 2 == 0) ? 8000 : kSampleRate;
      const double seconds = rng.uniform(2.0, 6.0);
      write_wav(dir / rel, synth_audio(labels[l], seconds, rate, rng.next()));
      meta.push_back({{"id", id}, {"type", "audio"}, {"path", rel},
                      {"label", labels[l]}, {"split", split}});
    }
  }
  const std::filesystem::path path = dir / "metadata.json";
  std::ofstream out(path);
  out << meta.dump(2) << "\n";
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  return path;
}

}  // namespace soundedit
