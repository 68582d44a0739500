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
#include <filesystem>
#include <optional>
#include <span>
#include <string>

#include "cdsdmm/image.hpp"

namespace cdsdmm {

/// Axis-aligned pixel rectangle used for contrast measurements.
struct RegionBox {
  std::size_t top = 0;
  std::size_t left = 0;
  std::size_t height = 0;
  std::size_t width = 0;
};

/// 10 log10(N L^2 / ||x - xhat||^2) with L = max(x). Identical inputs give +inf.
double psnr(std::span<const double> x, std::span<const double> xhat);
double psnr(const Image& x, const Image& xhat);

/// Single-window SSIM over whole-image statistics with c1 = 0.01^2 and
/// c2 = 0.03^2 (dynamic range 1). Inputs are expected in [0, 1].
double ssim(std::span<const double> x, std::span<const double> xhat);
double ssim(const Image& x, const Image& xhat);

/// (1/N) ||x/max|x| - xhat/max|xhat| ||^2.
double nmse(std::span<const double> x, std::span<const double> xhat);
double nmse(const Image& x, const Image& xhat);

/// |mean1 - mean2| / sqrt(var1 + var2) over two disjoint boxes
/// (population variances). Apply to a pre-log envelope image.
double cnr(const Image& img, const RegionBox& region1, const RegionBox& region2);

/// Affine map of the image onto [0, 1] (min -> 0, max -> 1). A constant
/// image maps to all zeros.
Image rescale_unit(const Image& img);

/// Envelope of every axial line (column): local maxima of |signal| joined by
/// a monotone piecewise-cubic interpolant, held flat beyond the outermost
/// maxima, and never below |signal|.
Image envelope(const Image& img);

/// 20 log10(env / max env) clipped to [-dynamic_range_db, 0], mapped to [0, 1].
Image log_compress(const Image& env, double dynamic_range_db);

/// envelope() followed by log_compress().
Image envelope_bmode(const Image& img, double dynamic_range_db = 40.0);

/// Binary 8-bit PGM (P5); input values in [0, 1] are scaled to 0..255.
void write_pgm(const std::filesystem::path& path, const Image& unit_img);

struct MetricReport {
  double psnr_db = 0.0;
  double ssim = 0.0;
  double nmse = 0.0;
  std::optional<double> cnr;
  double cs_ratio = 0.0;
  double p = 1.0;
  double alpha = 0.0;
  double mu = 0.0;
  double beta = 0.0;
  int iterations = 0;
  double seconds = 0.0;
};

/// "psnr_db,ssim,nmse,cnr,cs_ratio,p,alpha,mu,beta,iterations,seconds"
std::string metric_csv_header();
std::string metric_csv_row(const MetricReport& r);

/// Shortest round-trip decimal form; "inf" / "-inf" / "nan" for non-finite.
std::string format_double(double v);

}  // namespace cdsdmm
