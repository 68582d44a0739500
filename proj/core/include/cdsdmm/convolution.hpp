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

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "cdsdmm/image.hpp"

namespace cdsdmm {

namespace detail {
struct ConvolutionPlans;
}

using Spectrum = std::vector<std::complex<double>>;

/// 2D circular convolution H (a BCCB matrix), stored through its Fourier
/// eigenvalues. Only the non-redundant half spectrum, rows x (cols/2 + 1),
/// is kept since the kernel is real.
///
/// Immutable after construction; copies share the FFTW plans.
class ConvolutionOperator {
 public:
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t spectrum_cols() const { return cols_ / 2 + 1; }

  /// Eigenvalue of H at frequency bin (r, c), c may span the full width.
  std::complex<double> eigenvalue(std::size_t r, std::size_t c) const;
  std::span<const std::complex<double>> eigenvalues() const { return eig_; }

  Image apply(const Image& x) const;
  Image apply_adjoint(const Image& x) const;
  Vector apply(std::span<const double> x) const;
  Vector apply_adjoint(std::span<const double> x) const;

  /// Unnormalized forward real-to-complex DFT on this grid.
  Spectrum forward(std::span<const double> x) const;
  /// Inverse of forward(), including the 1/N normalization.
  Vector inverse(const Spectrum& s) const;

  friend ConvolutionOperator build_convolution(const Image& psf, std::size_t rows,
                                               std::size_t cols);

 private:
  ConvolutionOperator() = default;
  Vector filter(std::span<const double> x, bool conjugate) const;

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Spectrum eig_;
  std::shared_ptr<const detail::ConvolutionPlans> plans_;
};

/// Builds H for a kernel whose center pixel (rows/2, cols/2) lands on the
/// grid origin, so symmetric kernels give a symmetric H.
ConvolutionOperator build_convolution(const Image& psf, std::size_t rows, std::size_t cols);

/// Kernel zero-padded to the grid with its center circularly shifted to (0,0).
Image wrap_kernel(const Image& psf, std::size_t rows, std::size_t cols);

}  // namespace cdsdmm
