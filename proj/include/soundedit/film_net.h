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

// Small FiLM-conditioned mask network with hand-written reverse mode.
//
//   h_x = E x                      (C filters of K taps, stride S)
//   per block r:  gamma = F_r(z), beta = G_r(z)      (two-layer MLPs)
//                 h~ = gamma * h + beta              (same for every frame)
//                 h' = h~ + relu(conv3_dil(2^r)(h~))
//   m_j = clamp(W_j h_R + b_j, 0, m_max)             (one per output)
//   s_j = D(m_j * h_x),  y = sum_j s_j               (overlap-add decoder)
//
// All parameters live in one flat vector; tensors() describes the layout.
// ReLU kinks and the mask clamp use subgradient 0, as does the SNR clamp.

#ifndef SOUNDEDIT_FILM_NET_H_
#define SOUNDEDIT_FILM_NET_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "soundedit/dsp.h"
#include "soundedit/editor.h"

namespace soundedit {

struct FilmConfig {
  std::size_t channels = 64;   // C
  std::size_t kernel = 16;     // K
  std::size_t stride = 0;      // 0 means K / 2
  std::size_t blocks = 4;      // R
  std::size_t embed_dim = 32;  // D
  std::size_t hidden = 0;      // MLP width, 0 means C
  std::size_t masks = 1;       // N
  double mask_max = kMaskMax;
  std::uint64_t seed = 1;

  std::size_t effective_stride() const { return stride ? stride : kernel / 2; }
  std::size_t effective_hidden() const { return hidden ? hidden : channels; }
  // Throws kInvalidArgument.
  void validate() const;
};

struct TensorInfo {
  std::string name;
  std::vector<std::size_t> shape;
  std::size_t offset = 0;
  std::size_t size = 0;
};

// Intermediate values exposed for inspection; one entry per block.
struct FilmTrace {
  std::vector<std::vector<double>> gamma, beta;
  std::vector<Grid> block_input;  // h, C x L
  std::vector<Grid> modulated;    // h~, C x L
};

struct FilmOutput {
  Clip output;                     // sum of sources
  std::vector<Clip> sources;       // one per mask
  std::vector<EditingMask> masks;  // C x L each; window = K, hop = S
};

struct FilmLoss {
  double loss = 0.0;
  std::vector<double> grad;    // same layout as params()
  std::vector<double> grad_z;
};

class FilmMaskNet {
 public:
  explicit FilmMaskNet(const FilmConfig& config = FilmConfig());

  const FilmConfig& config() const { return config_; }
  const std::vector<TensorInfo>& tensors() const { return tensors_; }
  const TensorInfo& tensor(const std::string& name) const;
  std::span<double> params() { return params_; }
  std::span<const double> params() const { return params_; }

  // floor((T - K) / S) + 1. Throws kShapeMismatch when T < K.
  std::size_t latent_frames(std::size_t samples) const;

  // With film_identity set, every gamma is 1 and every beta 0 regardless of z.
  FilmOutput forward(const Clip& x, std::span<const double> z,
                     bool film_identity = false, FilmTrace* trace = nullptr) const;

  // loss = -SNR(y_hat, y), with gradients for every parameter and for z.
  FilmLoss snr_loss_and_grad(const Clip& x, std::span<const double> z,
                             const Clip& y) const;

  // loss = -(mean PIT-SNR over the N source outputs) - SNR(y_hat, y). The
  // gradient follows the best permutation. Needs N == refs.size().
  FilmLoss pit_loss_and_grad(const Clip& x, std::span<const double> z,
                             const Clip& y, std::span<const Clip> refs) const;

  // Binary container: "SEFILMNT", u32 version, config, shape table, then
  // every parameter as little-endian float32. Loading rounds to float.
  void save(const std::filesystem::path& path) const;
  static FilmMaskNet load(const std::filesystem::path& path);

 private:
  struct Cache;
  struct BlockOffsets {
    std::size_t f1w, f1b, f2w, f2b, g1w, g1b, g2w, g2b, cw, cb;
  };

  std::size_t add_tensor(const std::string& name, std::vector<std::size_t> shape);
  void initialize();
  void check_inputs(const Clip& x, std::span<const double> z) const;
  std::vector<Clip> run(const Clip& x, std::span<const double> z,
                        bool film_identity, Cache& cache) const;
  void backward(const Clip& x, std::span<const double> z, const Cache& cache,
                const std::vector<std::vector<double>>& d_sources,
                FilmLoss& out) const;

  FilmConfig config_;
  std::vector<TensorInfo> tensors_;
  std::vector<double> params_;
  std::size_t enc_ = 0, dec_ = 0, head_w_ = 0, head_b_ = 0;
  std::vector<BlockOffsets> block_;
};

struct TrainExample {
  Clip input;
  std::vector<double> z;
  Clip target;
  std::vector<Clip> sources;  // scaled target sources, PIT objective only
};

struct TrainConfig {
  std::size_t epochs = 200;  // full-batch steps
  double lr = 1e-3;
  // Rescales the full gradient to at most this L2 norm; 0 disables. The
  // dB loss has gradients that grow as the error shrinks, so plain steps
  // start to oscillate close to a fit.
  double clip_norm = 0.0;
  bool pit = false;
};

struct TrainResult {
  std::vector<double> loss_curve;  // mean loss before each step, then final
};

// Plain full-batch gradient descent. Throws kDiverged on a non-finite loss
// and kInvalidArgument on an empty dataset.
TrainResult train_toy(FilmMaskNet& net, std::span<const TrainExample> data,
                      const TrainConfig& config);

// Mean loss over the dataset without updating anything.
double dataset_loss(const FilmMaskNet& net, std::span<const TrainExample> data,
                    bool pit = false);

}  // namespace soundedit

#endif  // SOUNDEDIT_FILM_NET_H_
