// Copyright 2026 The cdsdmm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cdsdmm/image.hpp"

namespace cdsdmm {

enum class WaveletFamily {
  kIdentity,     // Psi = I
  kHaar,
  kDaubechies4,  // 4-tap Daubechies filter (two vanishing moments)
};

std::string to_string(WaveletFamily f);
WaveletFamily parse_wavelet_family(std::string_view name);

/// Separable periodic orthonormal 2D wavelet transform. analyze() is
/// Psi^-1, synthesize() is Psi; since the basis is orthonormal they are
/// each other's transpose.
///
/// Coefficients use the Mallat layout on the rows x cols grid: after each
/// level the approximation band occupies the top-left quadrant of the
/// previous one.
class SparsifyingTransform {
 public:
  SparsifyingTransform(WaveletFamily family, int levels, std::size_t rows, std::size_t cols);

  WaveletFamily family() const { return family_; }
  int levels() const { return levels_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Vector analyze(std::span<const double> x) const;
  Vector synthesize(std::span<const double> c) const;
  Vector analyze(const Image& x) const;
  Image synthesize_image(std::span<const double> c) const;

 private:
  void check(std::size_t n) const;

  WaveletFamily family_;
  int levels_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> lowpass_;
  std::vector<double> highpass_;
};

/// Default sparsifying basis: 4-tap Daubechies, 3 levels.
SparsifyingTransform default_transform(std::size_t rows, std::size_t cols);

}  // namespace cdsdmm
