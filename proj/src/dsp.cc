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

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <string>

#include "soundedit/error.h"
#include "soundedit/rng.h"

namespace soundedit {

namespace {

// Resampler design: the sinc crosses zero this many times on each side of
// its centre, cutoff sits at this fraction of the lower rate, and the Kaiser
// window uses the given beta (roughly 90 dB sidelobe suppression).
constexpr double kResampleZeros = 64.0;
constexpr double kResampleCutoff = 0.475;
constexpr double kKaiserBeta = 9.0;
constexpr std::int64_t kMaxPhaseTable = 4096;

// Zeroth-order modified Bessel function of the first kind.
double bessel_i0(double x) {
  double sum = 1.0, term = 1.0;
  const double q = x * x / 4.0;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return sum;
}

double sinc(double x) {
  if (std::abs(x) < 1e-12) return 1.0;
  return std::sin(M_PI * x) / (M_PI * x);
}

class ResampleKernel {
 public:
  ResampleKernel(int source_rate, int target_rate) {
    cutoff_ = kResampleCutoff * std::min(source_rate, target_rate) /
              static_cast<double>(source_rate);
    half_length_ = kResampleZeros / (2.0 * cutoff_);
    reach_ = static_cast<std::int64_t>(std::ceil(half_length_));
    norm_ = bessel_i0(kKaiserBeta);
  }

  // Filter response at `tau` input samples from the output instant.
  double operator()(double tau) const {
    if (std::abs(tau) >= half_length_) return 0.0;
    const double r = tau / half_length_;
    const double w = bessel_i0(kKaiserBeta * std::sqrt(1.0 - r * r)) / norm_;
    return 2.0 * cutoff_ * sinc(2.0 * cutoff_ * tau) * w;
  }

  std::int64_t reach() const { return reach_; }

 private:
  double cutoff_;  // cycles per input sample
  double half_length_;
  std::int64_t reach_;
  double norm_;
};

struct FftPlans {
  fftw_plan forward;
  fftw_plan inverse;
};

// FFTW planning is not thread-safe; execution with the new-array interface
// is. Plans are created once per size and kept for the process lifetime.
const FftPlans& plans_for(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, FftPlans> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<double> real(n);
  std::vector<std::complex<double>> cplx(n / 2 + 1);
  auto* c = reinterpret_cast<fftw_complex*>(cplx.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  FftPlans p;
  p.forward = fftw_plan_dft_r2c_1d(static_cast<int>(n), real.data(), c, flags);
  p.inverse = fftw_plan_dft_c2r_1d(static_cast<int>(n), c, real.data(), flags);
  return cache.emplace(n, p).first->second;
}

std::vector<double> hann(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * M_PI * static_cast<double>(i) /
                                static_cast<double>(n));
  }
  return w;
}

// Constant value of sum_t w^2(n - t * hop), or kBadWindowConfig.
double overlap_constant(const std::vector<double>& w, std::size_t hop) {
  const std::size_t n = w.size();
  if (n < 4 || n % 2 != 0 || hop == 0 || hop > n || n % hop != 0) {
    throw Error(ErrorCode::kBadWindowConfig,
                "window " + std::to_string(n) + " / hop " +
                    std::to_string(hop) +
                    ": window must be even and divisible by hop");
  }
  std::vector<double> env(hop, 0.0);
  for (std::size_t i = 0; i < n; ++i) env[i % hop] += w[i] * w[i];
  const auto [lo, hi] = std::minmax_element(env.begin(), env.end());
  if (*hi - *lo > 1e-9 * *hi) {
    throw Error(ErrorCode::kBadWindowConfig,
                "squared Hann window does not overlap-add to a constant at "
                "window " +
                    std::to_string(n) + " / hop " + std::to_string(hop));
  }
  return std::accumulate(env.begin(), env.end(), 0.0) /
         static_cast<double>(hop);
}

}  // namespace

void Clip::validate() const {
  if (rate <= 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "sample rate must be positive, got " + std::to_string(rate));
  }
  for (double s : samples) {
    if (!std::isfinite(s)) {
      throw Error(ErrorCode::kInvalidArgument, "clip has a non-finite sample");
    }
  }
}

double energy(std::span<const double> x) {
  double e = 0.0;
  for (double v : x) e += v * v;
  return e;
}

double mean_square(std::span<const double> x) {
  return x.empty() ? 0.0 : energy(x) / static_cast<double>(x.size());
}

double peak(std::span<const double> x) {
  double p = 0.0;
  for (double v : x) p = std::max(p, std::abs(v));
  return p;
}

Clip resample(const Clip& clip, int target_rate) {
  if (clip.rate <= 0 || target_rate <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "sample rates must be positive");
  }
  if (clip.rate == target_rate) return clip;

  const std::int64_t g = std::gcd(clip.rate, target_rate);
  const std::int64_t up = target_rate / g;
  const std::int64_t down = clip.rate / g;
  const auto in_len = static_cast<std::int64_t>(clip.size());
  const auto out_len = static_cast<std::int64_t>(std::llround(
      static_cast<double>(in_len) * target_rate / clip.rate));

  const ResampleKernel kernel(clip.rate, target_rate);
  const std::int64_t reach = kernel.reach();
  const std::int64_t taps = 2 * reach;

  // Phase p holds taps for output instants p / up samples past an input
  // sample; tap j weights input sample base + j - reach + 1.
  std::vector<double> table;
  const bool tabulated = up <= kMaxPhaseTable;
  if (tabulated) {
    table.resize(static_cast<std::size_t>(up * taps));
    for (std::int64_t p = 0; p < up; ++p) {
      const double frac = static_cast<double>(p) / static_cast<double>(up);
      for (std::int64_t j = 0; j < taps; ++j) {
        table[p * taps + j] = kernel(frac - static_cast<double>(j - reach + 1));
      }
    }
  }

  std::vector<double> out(static_cast<std::size_t>(out_len), 0.0);
  std::vector<double> scratch(static_cast<std::size_t>(taps));
  for (std::int64_t n = 0; n < out_len; ++n) {
    const std::int64_t pos = n * down;
    const std::int64_t base = pos / up;
    const std::int64_t phase = pos % up;
    const double* h;
    if (tabulated) {
      h = &table[phase * taps];
    } else {
      const double frac = static_cast<double>(phase) / static_cast<double>(up);
      for (std::int64_t j = 0; j < taps; ++j) {
        scratch[j] = kernel(frac - static_cast<double>(j - reach + 1));
      }
      h = scratch.data();
    }
    const std::int64_t first = base - reach + 1;
    const std::int64_t j0 = std::max<std::int64_t>(0, -first);
    const std::int64_t j1 = std::min<std::int64_t>(taps, in_len - first);
    double acc = 0.0;
    for (std::int64_t j = j0; j < j1; ++j) acc += h[j] * clip.samples[first + j];
    out[n] = acc;
  }
  return Clip(std::move(out), target_rate);
}

Clip condition(const Clip& clip, std::uint64_t seed, double seconds) {
  if (clip.empty()) throw Error(ErrorCode::kEmptyClip, "cannot condition");
  const auto target =
      static_cast<std::size_t>(std::llround(seconds * clip.rate));
  if (clip.size() == target) return clip;
  if (clip.size() < target) {
    Clip out = clip;
    out.samples.resize(target, 0.0);
    return out;
  }
  Rng rng(seed);
  const auto start =
      static_cast<std::size_t>(rng.uniform_index(clip.size() - target + 1));
  return Clip(std::vector<double>(clip.samples.begin() + start,
                                  clip.samples.begin() + start + target),
              clip.rate);
}

Spectrogram stft(const Clip& clip, std::size_t window, std::size_t hop) {
  const std::vector<double> w = hann(window);
  overlap_constant(w, hop);

  Spectrogram spec;
  spec.window = window;
  spec.hop = hop;
  spec.length = clip.size();
  spec.rate = clip.rate;
  const std::size_t front = window - hop;
  const std::size_t last_index = front + std::max<std::size_t>(clip.size(), 1) - 1;
  spec.frames = last_index / hop + 1;
  spec.data.assign(spec.frames * spec.bins(), {0.0, 0.0});

  const FftPlans& plans = plans_for(window);
  std::vector<double> frame(window);
  for (std::size_t t = 0; t < spec.frames; ++t) {
    const std::size_t start = t * hop;
    for (std::size_t i = 0; i < window; ++i) {
      const std::size_t m = start + i;
      double v = 0.0;
      if (m >= front && m - front < clip.size()) v = clip.samples[m - front];
      frame[i] = v * w[i];
    }
    fftw_execute_dft_r2c(
        plans.forward, frame.data(),
        reinterpret_cast<fftw_complex*>(&spec.data[t * spec.bins()]));
  }
  return spec;
}

Clip istft(const Spectrogram& spec) {
  const std::vector<double> w = hann(spec.window);
  const double norm = overlap_constant(w, spec.hop);
  if (spec.data.size() != spec.frames * spec.bins()) {
    throw Error(ErrorCode::kDimMismatch, "spectrogram data size mismatch");
  }
  const std::size_t front = spec.window - spec.hop;
  std::vector<double> out(spec.length, 0.0);
  const FftPlans& plans = plans_for(spec.window);
  std::vector<std::complex<double>> bins(spec.bins());
  std::vector<double> frame(spec.window);
  const double scale = 1.0 / (static_cast<double>(spec.window) * norm);
  for (std::size_t t = 0; t < spec.frames; ++t) {
    std::copy_n(&spec.data[t * spec.bins()], spec.bins(), bins.begin());
    fftw_execute_dft_c2r(plans.inverse,
                         reinterpret_cast<fftw_complex*>(bins.data()),
                         frame.data());
    const std::size_t start = t * spec.hop;
    for (std::size_t i = 0; i < spec.window; ++i) {
      const std::size_t m = start + i;
      if (m < front || m - front >= spec.length) continue;
      out[m - front] += frame[i] * w[i] * scale;
    }
  }
  return Clip(std::move(out), spec.rate);
}

double spectral_energy(const Spectrogram& spec) {
  const double norm = overlap_constant(hann(spec.window), spec.hop);
  const std::size_t nb = spec.bins();
  double total = 0.0;
  for (std::size_t t = 0; t < spec.frames; ++t) {
    for (std::size_t k = 0; k < nb; ++k) {
      const double weight = (k == 0 || k == nb - 1) ? 1.0 : 2.0;
      total += weight * std::norm(spec.at(t, k));
    }
  }
  return total / (static_cast<double>(spec.window) * norm);
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

Grid mel_filterbank(std::size_t n_bins, int rate, std::size_t n_mels) {
  if (n_bins < 2 || n_mels == 0) {
    throw Error(ErrorCode::kInvalidArgument, "bad filterbank dimensions");
  }
  const double nyquist = rate / 2.0;
  const double mel_max = hz_to_mel(nyquist);
  std::vector<double> edges(n_mels + 2);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    edges[i] = mel_to_hz(mel_max * static_cast<double>(i) /
                         static_cast<double>(n_mels + 1));
  }
  Grid fb(n_mels, n_bins);
  for (std::size_t m = 0; m < n_mels; ++m) {
    const double lo = edges[m], mid = edges[m + 1], hi = edges[m + 2];
    for (std::size_t k = 0; k < n_bins; ++k) {
      const double f =
          nyquist * static_cast<double>(k) / static_cast<double>(n_bins - 1);
      double v = 0.0;
      if (f > lo && f <= mid) v = (f - lo) / (mid - lo);
      else if (f > mid && f < hi) v = (hi - f) / (hi - mid);
      fb(m, k) = v;
    }
  }
  return fb;
}

Grid mel_project(const Grid& magnitudes, int rate, std::size_t n_mels,
                 bool normalize) {
  const Grid fb = mel_filterbank(magnitudes.rows, rate, n_mels);
  Grid out(n_mels, magnitudes.cols);
  for (std::size_t m = 0; m < n_mels; ++m) {
    double row_sum = 0.0;
    for (std::size_t k = 0; k < magnitudes.rows; ++k) row_sum += fb(m, k);
    for (std::size_t k = 0; k < magnitudes.rows; ++k) {
      const double weight = fb(m, k);
      if (weight == 0.0) continue;
      for (std::size_t t = 0; t < magnitudes.cols; ++t) {
        if (magnitudes(k, t) < 0.0) {
          throw Error(ErrorCode::kInvalidArgument,
                      "mel projection expects non-negative magnitudes");
        }
        out(m, t) += weight * magnitudes(k, t);
      }
    }
    if (normalize && row_sum > 0.0) {
      for (std::size_t t = 0; t < magnitudes.cols; ++t) out(m, t) /= row_sum;
    }
  }
  return out;
}

Grid magnitude(const Spectrogram& spec) {
  Grid g(spec.bins(), spec.frames);
  for (std::size_t t = 0; t < spec.frames; ++t) {
    for (std::size_t k = 0; k < spec.bins(); ++k) g(k, t) = std::abs(spec.at(t, k));
  }
  return g;
}

}  // namespace soundedit
