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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>

#include "soundedit/error.h"
#include "soundedit/lexicon.h"
#include "soundedit/mixer.h"
#include "soundedit/rng.h"

namespace soundedit {

std::string_view mask_kind_name(MaskKind kind) {
  return kind == MaskKind::kIrm ? "irm" : "psm";
}

Clip oracle_edit(std::span<const Clip> sources, std::span<const Action> actions) {
  return target_mixture(sources, actions);
}

EditingMask ideal_mask(const Clip& mixture, const Clip& target, MaskKind kind,
                       double m_max, std::size_t window, std::size_t hop) {
  if (mixture.size() != target.size()) {
    throw Error(ErrorCode::kLengthMismatch, "mixture and target lengths differ");
  }
  const Spectrogram X = stft(mixture, window, hop);
  const Spectrogram Y = stft(target, window, hop);
  EditingMask mask{Grid(X.bins(), X.frames), window, hop};
  for (std::size_t t = 0; t < X.frames; ++t) {
    for (std::size_t k = 0; k < X.bins(); ++k) {
      const std::complex<double> x = X.at(t, k);
      const std::complex<double> y = Y.at(t, k);
      double g;
      if (kind == MaskKind::kIrm) {
        g = std::abs(y) / std::max(std::abs(x), kMaskEpsilon);
      } else {
        g = (y * std::conj(x)).real() / std::max(std::norm(x), kMaskEpsilon);
      }
      mask.gains(k, t) = std::clamp(g, 0.0, m_max);
    }
  }
  return mask;
}

Clip mask_edit(const Clip& mixture, const EditingMask& mask) {
  Spectrogram X = stft(mixture, mask.window, mask.hop);
  if (mask.gains.rows != X.bins() || mask.gains.cols != X.frames) {
    throw Error(ErrorCode::kDimMismatch,
                "mask is " + std::to_string(mask.gains.rows) + "x" +
                    std::to_string(mask.gains.cols) + ", spectrogram is " +
                    std::to_string(X.bins()) + "x" + std::to_string(X.frames));
  }
  for (std::size_t t = 0; t < X.frames; ++t) {
    for (std::size_t k = 0; k < X.bins(); ++k) X.at(t, k) *= mask.gains(k, t);
  }
  return istft(X);
}

std::vector<double> embed_instruction(const SimplifiedInstruction& simplified,
                                      std::size_t dim, std::uint64_t seed) {
  if (dim == 0) throw Error(ErrorCode::kInvalidArgument, "embedding dim is 0");
  std::vector<double> z(dim, 0.0);
  for (const SimplifiedEdit& e : simplified.edits) {
    const std::string token =
        std::string(action_key(e.action)) + "|" + to_string(e.target);
    Rng rng(derive_seed(seed, hash_string(token)));
    for (double& v : z) v += rng.normal();
  }
  double norm = 0.0;
  for (double v : z) norm += v * v;
  norm = std::sqrt(norm);
  if (norm > 0.0) {
    for (double& v : z) v /= norm;
  }
  return z;
}

Grid mel_mask(const EditingMask& mask, int rate, std::size_t n_mels) {
  return mel_project(mask.gains, rate, n_mels, /*normalize=*/true);
}

void write_grid_csv(const std::filesystem::path& path, const Grid& grid) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << std::setprecision(9);
  for (std::size_t r = 0; r < grid.rows; ++r) {
    for (std::size_t c = 0; c < grid.cols; ++c) {
      if (c) out << ',';
      out << grid(r, c);
    }
    out << '\n';
  }
  if (!out) throw Error(ErrorCode::kIoError, "short write to " + path.string());
}

void write_grid_pgm(const std::filesystem::path& path, const Grid& grid,
                    double max_value) {
  if (!(max_value > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "pgm scale must be positive");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << "P5\n" << grid.cols << ' ' << grid.rows << "\n255\n";
  std::vector<unsigned char> row(grid.cols);
  for (std::size_t r = grid.rows; r-- > 0;) {
    for (std::size_t c = 0; c < grid.cols; ++c) {
      const double v = std::clamp(grid(r, c) / max_value, 0.0, 1.0);
      row[c] = static_cast<unsigned char>(std::lround(v * 255.0));
    }
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size()));
  }
  if (!out) throw Error(ErrorCode::kIoError, "short write to " + path.string());
}

}  // namespace soundedit
