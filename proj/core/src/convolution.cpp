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

#include "cdsdmm/convolution.hpp"

#include <algorithm>
#include <string>

#include "cdsdmm/error.hpp"
#include "fftw_plans.hpp"

namespace cdsdmm {

namespace detail {

struct ConvolutionPlans {
  FftwPlan r2c;
  FftwPlan c2r;
};

namespace {

std::shared_ptr<const ConvolutionPlans> make_plans(std::size_t rows, std::size_t cols) {
  const int r = static_cast<int>(rows);
  const int c = static_cast<int>(cols);
  std::vector<double> real(rows * cols);
  Spectrum spec(rows * (cols / 2 + 1));
  auto* cplx = reinterpret_cast<fftw_complex*>(spec.data());
  std::lock_guard lock(fftw_planner_mutex());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  fftw_plan fwd = fftw_plan_dft_r2c_2d(r, c, real.data(), cplx, flags);
  fftw_plan bwd = fftw_plan_dft_c2r_2d(r, c, cplx, real.data(), flags);
  // Constructed in place; FftwPlan is not movable.
  return std::shared_ptr<const ConvolutionPlans>(new ConvolutionPlans{FftwPlan(fwd), FftwPlan(bwd)});
}

}  // namespace
}  // namespace detail

Image wrap_kernel(const Image& psf, std::size_t rows, std::size_t cols) {
  if (psf.empty()) throw DimensionError("psf is empty");
  if (psf.rows() > rows || psf.cols() > cols) {
    throw DimensionError("psf " + std::to_string(psf.rows()) + "x" + std::to_string(psf.cols()) +
                         " does not fit grid " + std::to_string(rows) + "x" +
                         std::to_string(cols));
  }
  const std::size_t cr = psf.rows() / 2;
  const std::size_t cc = psf.cols() / 2;
  Image wrapped(rows, cols);
  for (std::size_t i = 0; i < psf.rows(); ++i) {
    for (std::size_t j = 0; j < psf.cols(); ++j) {
      const std::size_t r = (i + rows - cr) % rows;
      const std::size_t c = (j + cols - cc) % cols;
      wrapped(r, c) += psf(i, j);
    }
  }
  return wrapped;
}

ConvolutionOperator build_convolution(const Image& psf, std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) throw DimensionError("convolution grid must be nonempty");
  Image wrapped = wrap_kernel(psf, rows, cols);
  if (!all_finite(psf.span())) throw ParameterError("psf has non-finite entries");
  if (max_abs(psf.span()) == 0.0) throw ParameterError("psf is identically zero");

  ConvolutionOperator op;
  op.rows_ = rows;
  op.cols_ = cols;
  op.plans_ = detail::make_plans(rows, cols);
  op.eig_ = op.forward(wrapped.span());
  return op;
}

std::complex<double> ConvolutionOperator::eigenvalue(std::size_t r, std::size_t c) const {
  const std::size_t half = spectrum_cols();
  if (c < half) return eig_[r * half + c];
  // Hermitian symmetry of a real kernel.
  return std::conj(eig_[((rows_ - r) % rows_) * half + (cols_ - c)]);
}

Spectrum ConvolutionOperator::forward(std::span<const double> x) const {
  if (x.size() != rows_ * cols_) throw DimensionError("forward: size mismatch");
  Spectrum out(rows_ * spectrum_cols());
  // FFTW never writes to the input of an out-of-place r2c transform.
  fftw_execute_dft_r2c(plans_->r2c.get(), const_cast<double*>(x.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

Vector ConvolutionOperator::inverse(const Spectrum& s) const {
  if (s.size() != rows_ * spectrum_cols()) throw DimensionError("inverse: size mismatch");
  Spectrum scratch = s;  // c2r overwrites its input
  Vector out(rows_ * cols_);
  fftw_execute_dft_c2r(plans_->c2r.get(), reinterpret_cast<fftw_complex*>(scratch.data()),
                       out.data());
  const double scale = 1.0 / static_cast<double>(rows_ * cols_);
  for (double& v : out) v *= scale;
  return out;
}

Vector ConvolutionOperator::filter(std::span<const double> x, bool conjugate) const {
  Spectrum s = forward(x);
  for (std::size_t k = 0; k < s.size(); ++k) s[k] *= conjugate ? std::conj(eig_[k]) : eig_[k];
  return inverse(s);
}

Vector ConvolutionOperator::apply(std::span<const double> x) const { return filter(x, false); }

Vector ConvolutionOperator::apply_adjoint(std::span<const double> x) const {
  return filter(x, true);
}

Image ConvolutionOperator::apply(const Image& x) const {
  if (x.rows() != rows_ || x.cols() != cols_) throw DimensionError("conv: image size mismatch");
  return Image(rows_, cols_, apply(x.span()));
}

Image ConvolutionOperator::apply_adjoint(const Image& x) const {
  if (x.rows() != rows_ || x.cols() != cols_) throw DimensionError("conv: image size mismatch");
  return Image(rows_, cols_, apply_adjoint(x.span()));
}

}  // namespace cdsdmm
