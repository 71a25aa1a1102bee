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

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <optional>

#include "soundedit/error.h"
#include "soundedit/metrics.h"
#include "soundedit/rng.h"

namespace soundedit {

namespace {

constexpr char kMagic[8] = {'S', 'E', 'F', 'I', 'L', 'M', 'N', 'T'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint32_t kMaxDim = 1u << 20;

// Gradient of -SNR(est, ref) with respect to est; zero at the clamp.
double neg_snr_grad(std::span<const double> est, std::span<const double> ref,
                    std::vector<double>& grad, double weight) {
  const MetricValue v = snr(est, ref);
  double den = 0.0;
  for (std::size_t n = 0; n < ref.size(); ++n) {
    const double e = est[n] - ref[n];
    den += e * e;
  }
  if (v.finite) {
    const double scale = weight * 20.0 / std::numbers::ln10 / den;
    for (std::size_t n = 0; n < ref.size(); ++n) {
      grad[n] += scale * (est[n] - ref[n]);
    }
  }
  return -v.db;
}

void put_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) {
    throw Error(ErrorCode::kBadCheckpoint, "truncated checkpoint");
  }
  return std::uint32_t{b[0]} | std::uint32_t{b[1]} << 8 |
         std::uint32_t{b[2]} << 16 | std::uint32_t{b[3]} << 24;
}

void put_f32(std::ostream& out, double v) {
  put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
}

double get_f32(std::istream& in) {
  return std::bit_cast<float>(get_u32(in));
}

}  // namespace

void FilmConfig::validate() const {
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::kInvalidArgument, "film config: " + what);
  };
  if (channels == 0 || kernel == 0 || blocks == 0 || embed_dim == 0 || masks == 0) {
    fail("sizes must be positive");
  }
  if (effective_stride() == 0 || effective_stride() > kernel) {
    fail("stride must be in 1..kernel");
  }
  if (masks > kMaxPitSources) fail("at most 8 masks");
  if (blocks > 16) fail("at most 16 blocks");
  if (!(mask_max > 0.0)) fail("mask_max must be positive");
}

struct FilmMaskNet::Cache {
  std::size_t frames = 0;
  std::vector<double> hx;  // C x L
  struct Block {
    std::vector<double> h_in, a_f, a_g, gamma, beta, mod, u;
  };
  std::vector<Block> blocks;
  std::vector<double> h_out;  // C x L, input to the head
  std::vector<double> m_raw;  // N*C x L
  std::vector<double> mask;   // N*C x L
};

FilmMaskNet::FilmMaskNet(const FilmConfig& config) : config_(config) {
  config_.validate();
  const std::size_t C = config_.channels, K = config_.kernel;
  const std::size_t H = config_.effective_hidden(), D = config_.embed_dim;
  const std::size_t N = config_.masks;
  enc_ = add_tensor("encoder", {C, K});
  dec_ = add_tensor("decoder", {C, K});
  for (std::size_t r = 0; r < config_.blocks; ++r) {
    const std::string p = "block" + std::to_string(r) + ".";
    BlockOffsets b;
    b.f1w = add_tensor(p + "gamma.w1", {H, D});
    b.f1b = add_tensor(p + "gamma.b1", {H});
    b.f2w = add_tensor(p + "gamma.w2", {C, H});
    b.f2b = add_tensor(p + "gamma.b2", {C});
    b.g1w = add_tensor(p + "beta.w1", {H, D});
    b.g1b = add_tensor(p + "beta.b1", {H});
    b.g2w = add_tensor(p + "beta.w2", {C, H});
    b.g2b = add_tensor(p + "beta.b2", {C});
    b.cw = add_tensor(p + "conv.w", {C, C, 3});
    b.cb = add_tensor(p + "conv.b", {C});
    block_.push_back(b);
  }
  head_w_ = add_tensor("head.w", {N * C, C});
  head_b_ = add_tensor("head.b", {N * C});
  params_.assign(tensors_.back().offset + tensors_.back().size, 0.0);
  initialize();
}

std::size_t FilmMaskNet::add_tensor(const std::string& name,
                                    std::vector<std::size_t> shape) {
  TensorInfo t;
  t.name = name;
  t.size = 1;
  for (std::size_t d : shape) t.size *= d;
  t.shape = std::move(shape);
  t.offset = tensors_.empty() ? 0 : tensors_.back().offset + tensors_.back().size;
  tensors_.push_back(t);
  return t.offset;
}

const TensorInfo& FilmMaskNet::tensor(const std::string& name) const {
  for (const TensorInfo& t : tensors_) {
    if (t.name == name) return t;
  }
  throw Error(ErrorCode::kInvalidArgument, "no tensor named " + name);
}

void FilmMaskNet::initialize() {
  const std::size_t C = config_.channels, K = config_.kernel;
  const std::size_t H = config_.effective_hidden(), D = config_.embed_dim;
  const std::size_t N = config_.masks;
  Rng rng(config_.seed);
  double* p = params_.data();

  // Encoder and decoder start as a sqrt-Hann windowed DCT pair, which with
  // stride K/2 reconstructs the interior exactly when C >= K. Extra channels
  // and a small perturbation come from the seed.
  const double pi = std::numbers::pi;
  for (std::size_t c = 0; c < C; ++c) {
    for (std::size_t k = 0; k < K; ++k) {
      double basis = 0.0;
      if (c < K) {
        const double w = std::sqrt(0.5 - 0.5 * std::cos(2.0 * pi * k / K));
        const double norm = std::sqrt((c == 0 ? 1.0 : 2.0) / K);
        basis = w * norm * std::cos(pi * (k + 0.5) * c / K);
      }
      const double jitter = 0.01 / std::sqrt(static_cast<double>(K));
      p[enc_ + c * K + k] = basis + jitter * rng.normal();
      p[dec_ + c * K + k] = basis + jitter * rng.normal();
    }
  }
  auto fill = [&](std::size_t off, std::size_t n, double scale, double bias) {
    for (std::size_t i = 0; i < n; ++i) p[off + i] = bias + scale * rng.normal();
  };
  const double mlp1 = std::sqrt(2.0 / D);
  const double mlp2 = 0.1 / std::sqrt(static_cast<double>(H));
  for (const BlockOffsets& b : block_) {
    fill(b.f1w, H * D, mlp1, 0.0);
    fill(b.f1b, H, 0.0, 0.1);
    fill(b.f2w, C * H, mlp2, 0.0);
    fill(b.f2b, C, 0.0, 1.0);
    fill(b.g1w, H * D, mlp1, 0.0);
    fill(b.g1b, H, 0.0, 0.1);
    fill(b.g2w, C * H, mlp2, 0.0);
    fill(b.g2b, C, 0.0, 0.0);
    fill(b.cw, C * C * 3, 1.0 / std::sqrt(3.0 * C), 0.0);
    // A positive conv bias keeps most ReLU inputs away from the kink.
    fill(b.cb, C, 0.0, 0.5);
  }
  // Masks start near 1/N so the untrained output is close to the input.
  fill(head_w_, N * C * C, 0.01 / std::sqrt(static_cast<double>(C)), 0.0);
  fill(head_b_, N * C, 0.0, 1.0 / N);
}

std::size_t FilmMaskNet::latent_frames(std::size_t samples) const {
  if (samples < config_.kernel) {
    throw Error(ErrorCode::kShapeMismatch,
                "input of " + std::to_string(samples) +
                    " samples is shorter than the kernel");
  }
  return (samples - config_.kernel) / config_.effective_stride() + 1;
}

void FilmMaskNet::check_inputs(const Clip& x, std::span<const double> z) const {
  if (z.size() != config_.embed_dim) {
    throw Error(ErrorCode::kShapeMismatch,
                "semantic filter has " + std::to_string(z.size()) +
                    " entries, network expects " +
                    std::to_string(config_.embed_dim));
  }
  latent_frames(x.size());
}

std::vector<Clip> FilmMaskNet::run(const Clip& x, std::span<const double> z,
                                   bool film_identity, Cache& cache) const {
  check_inputs(x, z);
  const std::size_t C = config_.channels, K = config_.kernel;
  const std::size_t S = config_.effective_stride();
  const std::size_t H = config_.effective_hidden(), D = config_.embed_dim;
  const std::size_t N = config_.masks;
  const std::size_t L = latent_frames(x.size());
  const double* p = params_.data();
  const double* xs = x.samples.data();
  cache.frames = L;

  cache.hx.assign(C * L, 0.0);
  for (std::size_t c = 0; c < C; ++c) {
    const double* e = p + enc_ + c * K;
    double* h = cache.hx.data() + c * L;
    for (std::size_t l = 0; l < L; ++l) {
      const double* seg = xs + l * S;
      double acc = 0.0;
      for (std::size_t k = 0; k < K; ++k) acc += e[k] * seg[k];
      h[l] = acc;
    }
  }

  // Two-layer perceptron: out = w2 relu(w1 z + b1) + b2.
  auto mlp = [&](std::size_t w1, std::size_t b1, std::size_t w2, std::size_t b2,
                 std::vector<double>& hidden, std::vector<double>& out) {
    hidden.assign(H, 0.0);
    for (std::size_t i = 0; i < H; ++i) {
      double acc = p[b1 + i];
      for (std::size_t d = 0; d < D; ++d) acc += p[w1 + i * D + d] * z[d];
      hidden[i] = acc;
    }
    out.assign(C, 0.0);
    for (std::size_t c = 0; c < C; ++c) {
      double acc = p[b2 + c];
      for (std::size_t i = 0; i < H; ++i) {
        if (hidden[i] > 0.0) acc += p[w2 + c * H + i] * hidden[i];
      }
      out[c] = acc;
    }
  };

  cache.blocks.assign(config_.blocks, {});
  std::vector<double> h = cache.hx;
  for (std::size_t r = 0; r < config_.blocks; ++r) {
    const BlockOffsets& b = block_[r];
    Cache::Block& blk = cache.blocks[r];
    if (film_identity) {
      blk.gamma.assign(C, 1.0);
      blk.beta.assign(C, 0.0);
    } else {
      mlp(b.f1w, b.f1b, b.f2w, b.f2b, blk.a_f, blk.gamma);
      mlp(b.g1w, b.g1b, b.g2w, b.g2b, blk.a_g, blk.beta);
    }
    blk.mod.resize(C * L);
    for (std::size_t c = 0; c < C; ++c) {
      for (std::size_t l = 0; l < L; ++l) {
        blk.mod[c * L + l] = blk.gamma[c] * h[c * L + l] + blk.beta[c];
      }
    }
    const std::ptrdiff_t dil = std::ptrdiff_t{1} << r;
    const std::ptrdiff_t Ls = static_cast<std::ptrdiff_t>(L);
    blk.u.assign(C * L, 0.0);
    for (std::size_t co = 0; co < C; ++co) {
      double* u = blk.u.data() + co * L;
      for (std::size_t l = 0; l < L; ++l) u[l] = p[b.cb + co];
      for (std::size_t ci = 0; ci < C; ++ci) {
        const double* src = blk.mod.data() + ci * L;
        for (std::ptrdiff_t j = 0; j < 3; ++j) {
          const double w = p[b.cw + (co * C + ci) * 3 + j];
          const std::ptrdiff_t off = (j - 1) * dil;
          const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, -off);
          const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(Ls, Ls - off);
          for (std::ptrdiff_t l = lo; l < hi; ++l) u[l] += w * src[l + off];
        }
      }
    }
    blk.h_in = std::move(h);
    h.resize(C * L);
    for (std::size_t i = 0; i < C * L; ++i) {
      h[i] = blk.mod[i] + std::max(blk.u[i], 0.0);
    }
  }
  cache.h_out = h;

  const double m_max = config_.mask_max;
  cache.m_raw.assign(N * C * L, 0.0);
  cache.mask.assign(N * C * L, 0.0);
  for (std::size_t row = 0; row < N * C; ++row) {
    double* m = cache.m_raw.data() + row * L;
    for (std::size_t l = 0; l < L; ++l) m[l] = p[head_b_ + row];
    for (std::size_t ci = 0; ci < C; ++ci) {
      const double w = p[head_w_ + row * C + ci];
      const double* src = h.data() + ci * L;
      for (std::size_t l = 0; l < L; ++l) m[l] += w * src[l];
    }
    double* out = cache.mask.data() + row * L;
    for (std::size_t l = 0; l < L; ++l) out[l] = std::clamp(m[l], 0.0, m_max);
  }

  std::vector<Clip> sources;
  for (std::size_t j = 0; j < N; ++j) {
    Clip s = Clip::zeros(x.size(), x.rate);
    for (std::size_t c = 0; c < C; ++c) {
      const double* dk = p + dec_ + c * K;
      const double* m = cache.mask.data() + (j * C + c) * L;
      const double* hx = cache.hx.data() + c * L;
      for (std::size_t l = 0; l < L; ++l) {
        const double v = m[l] * hx[l];
        double* out = s.samples.data() + l * S;
        for (std::size_t k = 0; k < K; ++k) out[k] += dk[k] * v;
      }
    }
    sources.push_back(std::move(s));
  }
  return sources;
}

FilmOutput FilmMaskNet::forward(const Clip& x, std::span<const double> z,
                                bool film_identity, FilmTrace* trace) const {
  Cache cache;
  FilmOutput out;
  out.sources = run(x, z, film_identity, cache);
  out.output = Clip::zeros(x.size(), x.rate);
  for (const Clip& s : out.sources) {
    for (std::size_t n = 0; n < s.size(); ++n) out.output.samples[n] += s.samples[n];
  }
  const std::size_t C = config_.channels, L = cache.frames;
  for (std::size_t j = 0; j < config_.masks; ++j) {
    EditingMask m{Grid(C, L), config_.kernel, config_.effective_stride()};
    std::copy_n(cache.mask.begin() + j * C * L, C * L, m.gains.values.begin());
    out.masks.push_back(std::move(m));
  }
  if (trace) {
    *trace = FilmTrace();
    for (const Cache::Block& b : cache.blocks) {
      trace->gamma.push_back(b.gamma);
      trace->beta.push_back(b.beta);
      Grid in(C, L), mod(C, L);
      in.values = b.h_in;
      mod.values = b.mod;
      trace->block_input.push_back(std::move(in));
      trace->modulated.push_back(std::move(mod));
    }
  }
  return out;
}

void FilmMaskNet::backward(const Clip& x, std::span<const double> z,
                           const Cache& cache,
                           const std::vector<std::vector<double>>& d_sources,
                           FilmLoss& out) const {
  const std::size_t C = config_.channels, K = config_.kernel;
  const std::size_t S = config_.effective_stride();
  const std::size_t H = config_.effective_hidden(), D = config_.embed_dim;
  const std::size_t N = config_.masks;
  const std::size_t L = cache.frames;
  const double* p = params_.data();
  out.grad.assign(params_.size(), 0.0);
  out.grad_z.assign(D, 0.0);
  double* g = out.grad.data();

  std::vector<double> d_hx(C * L, 0.0), d_h(C * L, 0.0);
  const double m_max = config_.mask_max;
  std::vector<double> d_m(L);
  for (std::size_t j = 0; j < N; ++j) {
    const double* ds = d_sources[j].data();
    for (std::size_t c = 0; c < C; ++c) {
      const std::size_t row = j * C + c;
      const double* dk = p + dec_ + c * K;
      const double* m = cache.mask.data() + row * L;
      const double* raw = cache.m_raw.data() + row * L;
      const double* hx = cache.hx.data() + c * L;
      for (std::size_t l = 0; l < L; ++l) {
        const double* seg = ds + l * S;
        double d_hy = 0.0;
        const double hy = m[l] * hx[l];
        for (std::size_t k = 0; k < K; ++k) {
          d_hy += dk[k] * seg[k];
          g[dec_ + c * K + k] += hy * seg[k];
        }
        d_hx[c * L + l] += d_hy * m[l];
        d_m[l] = (raw[l] > 0.0 && raw[l] < m_max) ? d_hy * hx[l] : 0.0;
      }
      double bias = 0.0;
      for (std::size_t l = 0; l < L; ++l) bias += d_m[l];
      g[head_b_ + row] += bias;
      for (std::size_t ci = 0; ci < C; ++ci) {
        const double w = p[head_w_ + row * C + ci];
        const double* src = cache.h_out.data() + ci * L;
        double* dst = d_h.data() + ci * L;
        double acc = 0.0;
        for (std::size_t l = 0; l < L; ++l) {
          acc += d_m[l] * src[l];
          dst[l] += w * d_m[l];
        }
        g[head_w_ + row * C + ci] += acc;
      }
    }
  }

  auto mlp_back = [&](std::size_t w1, std::size_t b1, std::size_t w2,
                      std::size_t b2, const std::vector<double>& hidden,
                      const std::vector<double>& d_out) {
    std::vector<double> d_hidden(H, 0.0);
    for (std::size_t c = 0; c < C; ++c) {
      g[b2 + c] += d_out[c];
      for (std::size_t i = 0; i < H; ++i) {
        if (hidden[i] > 0.0) {
          g[w2 + c * H + i] += d_out[c] * hidden[i];
          d_hidden[i] += d_out[c] * p[w2 + c * H + i];
        }
      }
    }
    for (std::size_t i = 0; i < H; ++i) {
      if (!(hidden[i] > 0.0)) continue;
      g[b1 + i] += d_hidden[i];
      for (std::size_t d = 0; d < D; ++d) {
        g[w1 + i * D + d] += d_hidden[i] * z[d];
        out.grad_z[d] += d_hidden[i] * p[w1 + i * D + d];
      }
    }
  };

  const bool conditioned = !cache.blocks.empty() && !cache.blocks[0].a_f.empty();
  std::vector<double> d_u(C * L), d_mod(C * L);
  for (std::size_t r = config_.blocks; r-- > 0;) {
    const BlockOffsets& b = block_[r];
    const Cache::Block& blk = cache.blocks[r];
    for (std::size_t i = 0; i < C * L; ++i) {
      d_u[i] = blk.u[i] > 0.0 ? d_h[i] : 0.0;
      d_mod[i] = d_h[i];
    }
    const std::ptrdiff_t dil = std::ptrdiff_t{1} << r;
    const std::ptrdiff_t Ls = static_cast<std::ptrdiff_t>(L);
    for (std::size_t co = 0; co < C; ++co) {
      const double* du = d_u.data() + co * L;
      double bias = 0.0;
      for (std::size_t l = 0; l < L; ++l) bias += du[l];
      g[b.cb + co] += bias;
      for (std::size_t ci = 0; ci < C; ++ci) {
        const double* src = blk.mod.data() + ci * L;
        double* dst = d_mod.data() + ci * L;
        for (std::ptrdiff_t j = 0; j < 3; ++j) {
          const std::size_t wi = b.cw + (co * C + ci) * 3 + j;
          const double w = p[wi];
          const std::ptrdiff_t off = (j - 1) * dil;
          const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, -off);
          const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(Ls, Ls - off);
          double acc = 0.0;
          for (std::ptrdiff_t l = lo; l < hi; ++l) {
            acc += du[l] * src[l + off];
            dst[l + off] += w * du[l];
          }
          g[wi] += acc;
        }
      }
    }
    std::vector<double> d_gamma(C, 0.0), d_beta(C, 0.0);
    for (std::size_t c = 0; c < C; ++c) {
      for (std::size_t l = 0; l < L; ++l) {
        const std::size_t i = c * L + l;
        d_gamma[c] += d_mod[i] * blk.h_in[i];
        d_beta[c] += d_mod[i];
        d_h[i] = d_mod[i] * blk.gamma[c];
      }
    }
    if (conditioned) {
      mlp_back(b.f1w, b.f1b, b.f2w, b.f2b, blk.a_f, d_gamma);
      mlp_back(b.g1w, b.g1b, b.g2w, b.g2b, blk.a_g, d_beta);
    }
  }
  for (std::size_t i = 0; i < C * L; ++i) d_hx[i] += d_h[i];

  const double* xs = x.samples.data();
  for (std::size_t c = 0; c < C; ++c) {
    const double* dh = d_hx.data() + c * L;
    for (std::size_t k = 0; k < K; ++k) {
      double acc = 0.0;
      for (std::size_t l = 0; l < L; ++l) acc += dh[l] * xs[l * S + k];
      g[enc_ + c * K + k] += acc;
    }
  }
}

FilmLoss FilmMaskNet::snr_loss_and_grad(const Clip& x, std::span<const double> z,
                                        const Clip& y) const {
  if (y.size() != x.size()) {
    throw Error(ErrorCode::kShapeMismatch, "target length differs from input");
  }
  Cache cache;
  const std::vector<Clip> sources = run(x, z, false, cache);
  std::vector<double> y_hat(x.size(), 0.0);
  for (const Clip& s : sources) {
    for (std::size_t n = 0; n < s.size(); ++n) y_hat[n] += s.samples[n];
  }
  std::vector<double> d_y(x.size(), 0.0);
  FilmLoss out;
  out.loss = neg_snr_grad(y_hat, y.samples, d_y, 1.0);
  backward(x, z, cache, std::vector<std::vector<double>>(config_.masks, d_y), out);
  return out;
}

FilmLoss FilmMaskNet::pit_loss_and_grad(const Clip& x, std::span<const double> z,
                                        const Clip& y,
                                        std::span<const Clip> refs) const {
  if (refs.size() != config_.masks) {
    throw Error(ErrorCode::kCountMismatch,
                std::to_string(refs.size()) + " references for " +
                    std::to_string(config_.masks) + " masks");
  }
  if (y.size() != x.size()) {
    throw Error(ErrorCode::kShapeMismatch, "target length differs from input");
  }
  for (const Clip& r : refs) {
    if (r.size() != x.size()) {
      throw Error(ErrorCode::kShapeMismatch, "reference length differs from input");
    }
  }
  Cache cache;
  const std::vector<Clip> sources = run(x, z, false, cache);
  std::vector<double> y_hat(x.size(), 0.0);
  for (const Clip& s : sources) {
    for (std::size_t n = 0; n < s.size(); ++n) y_hat[n] += s.samples[n];
  }
  const PitResult pit = pit_snr(sources, refs);
  const std::size_t N = config_.masks;
  FilmLoss out;
  std::vector<double> d_y(x.size(), 0.0);
  out.loss = neg_snr_grad(y_hat, y.samples, d_y, 1.0);
  std::vector<std::vector<double>> d_sources(N, d_y);
  for (std::size_t j = 0; j < N; ++j) {
    out.loss += neg_snr_grad(sources[j].samples, refs[pit.permutation[j]].samples,
                             d_sources[j], 1.0 / N) / N;
  }
  backward(x, z, cache, d_sources, out);
  return out;
}

void FilmMaskNet::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out.write(kMagic, sizeof(kMagic));
  put_u32(out, kVersion);
  for (std::size_t v : {config_.channels, config_.kernel, config_.effective_stride(),
                        config_.blocks, config_.embed_dim,
                        config_.effective_hidden(), config_.masks}) {
    put_u32(out, static_cast<std::uint32_t>(v));
  }
  put_f32(out, config_.mask_max);
  put_u32(out, static_cast<std::uint32_t>(tensors_.size()));
  for (const TensorInfo& t : tensors_) {
    put_u32(out, static_cast<std::uint32_t>(t.name.size()));
    out.write(t.name.data(), static_cast<std::streamsize>(t.name.size()));
    put_u32(out, static_cast<std::uint32_t>(t.shape.size()));
    for (std::size_t d : t.shape) put_u32(out, static_cast<std::uint32_t>(d));
  }
  for (double v : params_) put_f32(out, v);
  if (!out) throw Error(ErrorCode::kIoError, "short write to " + path.string());
}

FilmMaskNet FilmMaskNet::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kMissingFile, path.string());
  char magic[8];
  if (!in.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0) {
    throw Error(ErrorCode::kBadCheckpoint, path.string() + ": bad magic");
  }
  const std::uint32_t version = get_u32(in);
  if (version != kVersion) {
    throw Error(ErrorCode::kBadCheckpoint,
                path.string() + ": unsupported version " + std::to_string(version));
  }
  FilmConfig cfg;
  std::uint32_t fields[7];
  for (std::uint32_t& f : fields) {
    f = get_u32(in);
    if (f > kMaxDim) throw Error(ErrorCode::kBadCheckpoint, "implausible size");
  }
  cfg.channels = fields[0];
  cfg.kernel = fields[1];
  cfg.stride = fields[2];
  cfg.blocks = fields[3];
  cfg.embed_dim = fields[4];
  cfg.hidden = fields[5];
  cfg.masks = fields[6];
  cfg.mask_max = get_f32(in);
  std::optional<FilmMaskNet> net;
  try {
    net.emplace(cfg);
  } catch (const Error& e) {
    throw Error(ErrorCode::kBadCheckpoint, path.string() + ": " + e.what());
  }
  const std::uint32_t count = get_u32(in);
  if (count != net->tensors_.size()) {
    throw Error(ErrorCode::kBadCheckpoint, path.string() + ": tensor count");
  }
  for (const TensorInfo& t : net->tensors_) {
    const std::uint32_t len = get_u32(in);
    if (len > 256) throw Error(ErrorCode::kBadCheckpoint, "tensor name too long");
    std::string name(len, '\0');
    in.read(name.data(), len);
    const std::uint32_t ndim = get_u32(in);
    if (name != t.name || ndim != t.shape.size()) {
      throw Error(ErrorCode::kBadCheckpoint,
                  path.string() + ": unexpected tensor " + name);
    }
    for (std::size_t d : t.shape) {
      if (get_u32(in) != d) {
        throw Error(ErrorCode::kBadCheckpoint,
                    path.string() + ": shape of " + name + " disagrees");
      }
    }
  }
  for (double& v : net->params_) {
    v = get_f32(in);
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kBadCheckpoint, path.string() + ": non-finite value");
    }
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw Error(ErrorCode::kBadCheckpoint, path.string() + ": trailing bytes");
  }
  return std::move(*net);
}

double dataset_loss(const FilmMaskNet& net, std::span<const TrainExample> data,
                    bool pit) {
  if (data.empty()) throw Error(ErrorCode::kInvalidArgument, "empty dataset");
  double total = 0.0;
  for (const TrainExample& ex : data) {
    total += pit ? net.pit_loss_and_grad(ex.input, ex.z, ex.target, ex.sources).loss
                 : net.snr_loss_and_grad(ex.input, ex.z, ex.target).loss;
  }
  return total / static_cast<double>(data.size());
}

TrainResult train_toy(FilmMaskNet& net, std::span<const TrainExample> data,
                      const TrainConfig& config) {
  if (data.empty()) throw Error(ErrorCode::kInvalidArgument, "empty dataset");
  if (!(config.lr > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "learning rate must be positive");
  }
  TrainResult result;
  const double inv = 1.0 / static_cast<double>(data.size());
  std::vector<double> grad(net.params().size());
  for (std::size_t step = 0; step <= config.epochs; ++step) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double loss = 0.0;
    for (const TrainExample& ex : data) {
      const FilmLoss l =
          config.pit ? net.pit_loss_and_grad(ex.input, ex.z, ex.target, ex.sources)
                     : net.snr_loss_and_grad(ex.input, ex.z, ex.target);
      loss += l.loss * inv;
      for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += l.grad[i] * inv;
    }
    if (!std::isfinite(loss)) {
      throw Error(ErrorCode::kDiverged,
                  "loss is not finite at step " + std::to_string(step));
    }
    result.loss_curve.push_back(loss);
    if (step == config.epochs) break;
    double scale = config.lr;
    if (config.clip_norm > 0.0) {
      double norm = 0.0;
      for (double g : grad) norm += g * g;
      norm = std::sqrt(norm);
      if (norm > config.clip_norm) scale *= config.clip_norm / norm;
    }
    std::span<double> p = net.params();
    for (std::size_t i = 0; i < p.size(); ++i) {
      p[i] -= scale * grad[i];
      if (!std::isfinite(p[i])) {
        throw Error(ErrorCode::kDiverged,
                    "parameter became non-finite at step " + std::to_string(step));
      }
    }
  }
  return result;
}

}  // namespace soundedit
