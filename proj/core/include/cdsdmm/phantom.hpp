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
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cdsdmm/image.hpp"

namespace cdsdmm {

/// One echogenicity region of the cartoon mask.
struct Region {
  enum class Shape { kRect, kDisc };
  Shape shape = Shape::kRect;
  // kRect: top, left, height, width. kDisc: center row, center col, radius.
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
  double weight = 1.0;
};

struct PhantomSpec {
  std::size_t rows = 128;
  std::size_t cols = 128;
  /// Later regions overwrite earlier ones; uncovered pixels are 0.
  std::vector<Region> regions;
  /// GGD shape of the scatterer amplitudes (1 = Laplacian, 2 = Gaussian).
  double amplitude_shape = 1.0;
  double amplitude_scale = 1.0;
  std::uint64_t seed = 0;
};

/// Background, two discs and a rectangle, scaled to the grid.
std::vector<Region> default_regions(std::size_t rows, std::size_t cols);

/// Parses "rect top left height width weight; disc row col radius weight; ...".
std::vector<Region> parse_regions(const std::string& text);
std::string format_regions(const std::vector<Region>& regions);

void validate(const PhantomSpec& spec);

/// Piecewise-constant echogenicity image. A pixel (r, c) belongs to a disc
/// when (r - row)^2 + (c - col)^2 <= radius^2, and to a rectangle when
/// top <= r < top + height and left <= c < left + width.
Image generate_mask(const PhantomSpec& spec);

/// n i.i.d. generalized Gaussian samples: sign * scale * W^(1/shape) with
/// W ~ Gamma(1/shape, 1) and a fair random sign.
Vector sample_ggd(std::size_t n, double shape, double scale, std::uint64_t seed);

/// Tissue reflectivity: mask weighted elementwise by the amplitudes.
Image synthesize_trf(const Image& mask, std::span<const double> amplitudes);

struct PsfSpec {
  double center_frequency = 3.5e6;         // Hz
  double sampling_frequency_axial = 20e6;  // Hz
  double fractional_bandwidth = 0.6;       // -6 dB width over center frequency
  double lateral_sigma = 1.5;              // samples
  std::size_t kernel_rows = 25;            // axial, odd
  std::size_t kernel_cols = 9;             // lateral, odd
};

void validate(const PsfSpec& spec);

/// Axial standard deviation, in samples, of the Gaussian pulse envelope.
double axial_sigma_samples(const PsfSpec& spec);

/// exp(-i^2 / 2 s_ax^2) cos(2 pi f0 i / fs) exp(-j^2 / 2 s_lat^2) on a
/// centered odd-sized grid, scaled to unit l2 norm. Rows are axial.
Image synthesize_psf(const PsfSpec& spec);

/// 1x1 unit kernel (H = I).
Image identity_psf();

/// Circular convolution of the reflectivity with the PSF.
Image simulate_rf(const Image& trf, const Image& psf);

/// y + n with n ~ N(0, ||y||^2 / (m 10^(snr_db/10))). Infinite SNR returns y.
Vector add_noise_snr(std::span<const double> y, double snr_db, std::uint64_t seed);

struct PhantomData {
  Image mask;
  Image trf;
  Image psf;
  Image rf;
};

/// Mask, amplitudes (stream kAmplitudes of spec.seed), TRF, PSF and RF image.
PhantomData generate_phantom(const PhantomSpec& spec, const Image& psf);

}  // namespace cdsdmm
