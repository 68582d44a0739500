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

#include "cdsdmm/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <vector>

#include "cdsdmm/error.hpp"

namespace cdsdmm {
namespace {

void require_same(std::span<const double> a, std::span<const double> b, const char* what) {
  if (a.size() != b.size() || a.empty()) {
    throw DimensionError(std::string(what) + ": images must be nonempty and of equal size");
  }
}

void require_same(const Image& a, const Image& b, const char* what) {
  if (!a.same_shape(b)) throw DimensionError(std::string(what) + ": image shapes differ");
}

struct BoxStats {
  double mean = 0.0;
  double var = 0.0;
};

BoxStats box_stats(const Image& img, const RegionBox& b) {
  double sum = 0.0;
  for (std::size_t r = b.top; r < b.top + b.height; ++r) {
    for (std::size_t c = b.left; c < b.left + b.width; ++c) sum += img(r, c);
  }
  const double n = static_cast<double>(b.height * b.width);
  BoxStats s;
  s.mean = sum / n;
  double sq = 0.0;
  for (std::size_t r = b.top; r < b.top + b.height; ++r) {
    for (std::size_t c = b.left; c < b.left + b.width; ++c) {
      const double d = img(r, c) - s.mean;
      sq += d * d;
    }
  }
  s.var = sq / n;
  return s;
}

void check_box(const Image& img, const RegionBox& b) {
  if (b.height * b.width < 4) throw ParameterError("CNR region must cover at least 4 pixels");
  if (b.top + b.height > img.rows() || b.left + b.width > img.cols()) {
    throw DimensionError("CNR region exceeds image bounds");
  }
}

bool overlap(const RegionBox& a, const RegionBox& b) {
  return a.top < b.top + b.height && b.top < a.top + a.height && a.left < b.left + b.width &&
         b.left < a.left + a.width;
}

// Fritsch-Carlson monotone cubic through (t_k, y_k), evaluated at every
// integer position of [0, n). Constant extension outside the knots.
std::vector<double> pchip(const std::vector<double>& t, const std::vector<double>& y,
                          std::size_t n) {
  const std::size_t k = t.size();
  std::vector<double> out(n);
  if (k == 1) {
    std::fill(out.begin(), out.end(), y[0]);
    return out;
  }
  std::vector<double> h(k - 1);
  std::vector<double> delta(k - 1);
  for (std::size_t i = 0; i + 1 < k; ++i) {
    h[i] = t[i + 1] - t[i];
    delta[i] = (y[i + 1] - y[i]) / h[i];
  }
  std::vector<double> d(k, 0.0);
  d[0] = delta[0];
  d[k - 1] = delta[k - 2];
  for (std::size_t i = 1; i + 1 < k; ++i) {
    if (delta[i - 1] * delta[i] <= 0.0) continue;
    const double w1 = 2.0 * h[i] + h[i - 1];
    const double w2 = h[i] + 2.0 * h[i - 1];
    d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
  }
  // Keep the end slopes from overshooting.
  if (k > 2) {
    if (d[0] * delta[0] <= 0.0 || std::abs(d[0]) > 3.0 * std::abs(delta[0])) d[0] = 0.0;
    if (d[k - 1] * delta[k - 2] <= 0.0 || std::abs(d[k - 1]) > 3.0 * std::abs(delta[k - 2])) {
      d[k - 1] = 0.0;
    }
  }

  std::size_t seg = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(i);
    if (x <= t.front()) {
      out[i] = y.front();
      continue;
    }
    if (x >= t.back()) {
      out[i] = y.back();
      continue;
    }
    while (t[seg + 1] < x) ++seg;
    const double s = (x - t[seg]) / h[seg];
    const double s2 = s * s;
    const double s3 = s2 * s;
    out[i] = (2 * s3 - 3 * s2 + 1) * y[seg] + (s3 - 2 * s2 + s) * h[seg] * d[seg] +
             (-2 * s3 + 3 * s2) * y[seg + 1] + (s3 - s2) * h[seg] * d[seg + 1];
  }
  return out;
}

}  // namespace

double psnr(std::span<const double> x, std::span<const double> xhat) {
  require_same(x, xhat, "psnr");
  double err = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - xhat[i];
    err += d * d;
  }
  if (err == 0.0) return std::numeric_limits<double>::infinity();
  const double peak = *std::max_element(x.begin(), x.end());
  return 10.0 * std::log10(static_cast<double>(x.size()) * peak * peak / err);
}

double psnr(const Image& x, const Image& xhat) {
  require_same(x, xhat, "psnr");
  return psnr(x.span(), xhat.span());
}

double ssim(std::span<const double> x, std::span<const double> xhat) {
  require_same(x, xhat, "ssim");
  constexpr double c1 = 0.01 * 0.01;
  constexpr double c2 = 0.03 * 0.03;
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += xhat[i];
  }
  mx /= n;
  my /= n;
  double vx = 0.0;
  double vy = 0.0;
  double cov = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = xhat[i] - my;
    vx += dx * dx;
    vy += dy * dy;
    cov += dx * dy;
  }
  vx /= n;
  vy /= n;
  cov /= n;
  return ((2 * mx * my + c1) * (2 * cov + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2));
}

double ssim(const Image& x, const Image& xhat) {
  require_same(x, xhat, "ssim");
  return ssim(x.span(), xhat.span());
}

double nmse(std::span<const double> x, std::span<const double> xhat) {
  require_same(x, xhat, "nmse");
  const double sx = max_abs(x);
  const double sy = max_abs(xhat);
  if (sx == 0.0 || sy == 0.0) throw ParameterError("nmse: cannot normalize an all-zero image");
  double err = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] / sx - xhat[i] / sy;
    err += d * d;
  }
  return err / static_cast<double>(x.size());
}

double nmse(const Image& x, const Image& xhat) {
  require_same(x, xhat, "nmse");
  return nmse(x.span(), xhat.span());
}

double cnr(const Image& img, const RegionBox& region1, const RegionBox& region2) {
  check_box(img, region1);
  check_box(img, region2);
  if (overlap(region1, region2)) throw ParameterError("CNR regions must be disjoint");
  const BoxStats a = box_stats(img, region1);
  const BoxStats b = box_stats(img, region2);
  const double pooled = a.var + b.var;
  if (pooled == 0.0) throw NumericalError("CNR: both regions have zero variance");
  return std::abs(a.mean - b.mean) / std::sqrt(pooled);
}

Image rescale_unit(const Image& img) {
  Image out(img.rows(), img.cols());
  if (img.empty()) return out;
  const auto [lo, hi] = std::minmax_element(img.data().begin(), img.data().end());
  const double range = *hi - *lo;
  if (range == 0.0) return out;
  for (std::size_t i = 0; i < img.size(); ++i) out[i] = (img[i] - *lo) / range;
  return out;
}

Image envelope(const Image& img) {
  const std::size_t rows = img.rows();
  Image env(rows, img.cols());
  std::vector<double> mag(rows);
  std::vector<double> t;
  std::vector<double> y;
  for (std::size_t c = 0; c < img.cols(); ++c) {
    for (std::size_t r = 0; r < rows; ++r) mag[r] = std::abs(img(r, c));
    t.clear();
    y.clear();
    for (std::size_t r = 1; r + 1 < rows; ++r) {
      if (mag[r] > mag[r - 1] && mag[r] >= mag[r + 1]) {
        t.push_back(static_cast<double>(r));
        y.push_back(mag[r]);
      }
    }
    if (t.empty()) {
      for (std::size_t r = 0; r < rows; ++r) env(r, c) = mag[r];
      continue;
    }
    const std::vector<double> line = pchip(t, y, rows);
    for (std::size_t r = 0; r < rows; ++r) env(r, c) = std::max(line[r], mag[r]);
  }
  return env;
}

Image log_compress(const Image& env, double dynamic_range_db) {
  if (!(dynamic_range_db > 0.0)) throw ParameterError("dynamic range must be positive");
  Image out(env.rows(), env.cols());
  const double peak = max_abs(env.span());
  if (peak == 0.0) return out;
  for (std::size_t i = 0; i < env.size(); ++i) {
    double db = env[i] > 0.0 ? 20.0 * std::log10(env[i] / peak) : -dynamic_range_db;
    db = std::clamp(db, -dynamic_range_db, 0.0);
    out[i] = (db + dynamic_range_db) / dynamic_range_db;
  }
  return out;
}

Image envelope_bmode(const Image& img, double dynamic_range_db) {
  return log_compress(envelope(img), dynamic_range_db);
}

void write_pgm(const std::filesystem::path& path, const Image& unit_img) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << "P5\n" << unit_img.cols() << ' ' << unit_img.rows() << "\n255\n";
  for (double v : unit_img.data()) {
    const double s = std::clamp(v, 0.0, 1.0) * 255.0;
    out.put(static_cast<char>(static_cast<unsigned char>(std::lround(s))));
  }
  if (!out) throw IoError("failed writing " + path.string());
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string metric_csv_header() {
  return "psnr_db,ssim,nmse,cnr,cs_ratio,p,alpha,mu,beta,iterations,seconds";
}

std::string metric_csv_row(const MetricReport& r) {
  std::string row = format_double(r.psnr_db) + ',' + format_double(r.ssim) + ',' +
                    format_double(r.nmse) + ',' + (r.cnr ? format_double(*r.cnr) : "") + ',' +
                    format_double(r.cs_ratio) + ',' + format_double(r.p) + ',' +
                    format_double(r.alpha) + ',' + format_double(r.mu) + ',' +
                    format_double(r.beta) + ',' + std::to_string(r.iterations) + ',' +
                    format_double(r.seconds);
  return row;
}

}  // namespace cdsdmm
