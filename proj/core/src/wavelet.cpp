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

#include "cdsdmm/wavelet.hpp"

#include <cmath>

#include "cdsdmm/error.hpp"

namespace cdsdmm {
namespace {

std::vector<double> lowpass_taps(WaveletFamily f) {
  switch (f) {
    case WaveletFamily::kHaar:
      return {M_SQRT1_2, M_SQRT1_2};
    case WaveletFamily::kDaubechies4: {
      const double s3 = std::sqrt(3.0);
      const double d = 4.0 * std::sqrt(2.0);
      return {(1.0 + s3) / d, (3.0 + s3) / d, (3.0 - s3) / d, (1.0 - s3) / d};
    }
    case WaveletFamily::kIdentity:
      break;
  }
  return {};
}

// Quadrature mirror: g[k] = (-1)^k h[L-1-k].
std::vector<double> mirror(const std::vector<double>& h) {
  std::vector<double> g(h.size());
  for (std::size_t k = 0; k < h.size(); ++k) {
    g[k] = (k % 2 == 0 ? 1.0 : -1.0) * h[h.size() - 1 - k];
  }
  return g;
}

// One periodic analysis step on a strided line of length n (n even).
void analyze_line(double* line, std::size_t n, std::size_t stride, const std::vector<double>& h,
                  const std::vector<double>& g, std::vector<double>& tmp) {
  const std::size_t half = n / 2;
  tmp.assign(n, 0.0);
  for (std::size_t k = 0; k < half; ++k) {
    double a = 0.0;
    double d = 0.0;
    for (std::size_t j = 0; j < h.size(); ++j) {
      const double v = line[((2 * k + j) % n) * stride];
      a += h[j] * v;
      d += g[j] * v;
    }
    tmp[k] = a;
    tmp[half + k] = d;
  }
  for (std::size_t i = 0; i < n; ++i) line[i * stride] = tmp[i];
}

// Exact transpose of analyze_line.
void synthesize_line(double* line, std::size_t n, std::size_t stride, const std::vector<double>& h,
                     const std::vector<double>& g, std::vector<double>& tmp) {
  const std::size_t half = n / 2;
  tmp.assign(n, 0.0);
  for (std::size_t k = 0; k < half; ++k) {
    const double a = line[k * stride];
    const double d = line[(half + k) * stride];
    for (std::size_t j = 0; j < h.size(); ++j) {
      tmp[(2 * k + j) % n] += h[j] * a + g[j] * d;
    }
  }
  for (std::size_t i = 0; i < n; ++i) line[i * stride] = tmp[i];
}

}  // namespace

std::string to_string(WaveletFamily f) {
  switch (f) {
    case WaveletFamily::kIdentity:
      return "identity";
    case WaveletFamily::kHaar:
      return "haar";
    case WaveletFamily::kDaubechies4:
      return "daubechies4";
  }
  return "unknown";
}

WaveletFamily parse_wavelet_family(std::string_view name) {
  if (name == "identity") return WaveletFamily::kIdentity;
  if (name == "haar") return WaveletFamily::kHaar;
  if (name == "daubechies4" || name == "db2" || name == "d4") return WaveletFamily::kDaubechies4;
  throw ParameterError("unknown wavelet family '" + std::string(name) + "'");
}

SparsifyingTransform::SparsifyingTransform(WaveletFamily family, int levels, std::size_t rows,
                                           std::size_t cols)
    : family_(family), levels_(levels), rows_(rows), cols_(cols) {
  if (rows == 0 || cols == 0) throw DimensionError("wavelet grid must be nonempty");
  if (family == WaveletFamily::kIdentity) {
    levels_ = 0;
    return;
  }
  if (levels < 1) throw ParameterError("wavelet levels must be >= 1");
  const std::size_t block = std::size_t{1} << levels;
  if (rows % block != 0 || cols % block != 0) {
    throw DimensionError("grid " + std::to_string(rows) + "x" + std::to_string(cols) +
                         " is not divisible by 2^" + std::to_string(levels));
  }
  lowpass_ = lowpass_taps(family);
  highpass_ = mirror(lowpass_);
}

void SparsifyingTransform::check(std::size_t n) const {
  if (n != rows_ * cols_) throw DimensionError("wavelet: vector length does not match grid");
}

Vector SparsifyingTransform::analyze(std::span<const double> x) const {
  check(x.size());
  Vector c(x.begin(), x.end());
  if (family_ == WaveletFamily::kIdentity) return c;
  std::vector<double> tmp;
  std::size_t nr = rows_;
  std::size_t nc = cols_;
  for (int level = 0; level < levels_; ++level) {
    for (std::size_t r = 0; r < nr; ++r) analyze_line(&c[r * cols_], nc, 1, lowpass_, highpass_, tmp);
    for (std::size_t col = 0; col < nc; ++col) analyze_line(&c[col], nr, cols_, lowpass_, highpass_, tmp);
    nr /= 2;
    nc /= 2;
  }
  return c;
}

Vector SparsifyingTransform::synthesize(std::span<const double> coeffs) const {
  check(coeffs.size());
  Vector x(coeffs.begin(), coeffs.end());
  if (family_ == WaveletFamily::kIdentity) return x;
  std::vector<double> tmp;
  for (int level = levels_ - 1; level >= 0; --level) {
    const std::size_t nr = rows_ >> level;
    const std::size_t nc = cols_ >> level;
    for (std::size_t col = 0; col < nc; ++col) synthesize_line(&x[col], nr, cols_, lowpass_, highpass_, tmp);
    for (std::size_t r = 0; r < nr; ++r) synthesize_line(&x[r * cols_], nc, 1, lowpass_, highpass_, tmp);
  }
  return x;
}

Vector SparsifyingTransform::analyze(const Image& x) const {
  if (x.rows() != rows_ || x.cols() != cols_) throw DimensionError("wavelet: image size mismatch");
  return analyze(x.span());
}

Image SparsifyingTransform::synthesize_image(std::span<const double> c) const {
  return Image(rows_, cols_, synthesize(c));
}

SparsifyingTransform default_transform(std::size_t rows, std::size_t cols) {
  return SparsifyingTransform(WaveletFamily::kDaubechies4, 3, rows, cols);
}

}  // namespace cdsdmm
