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

#include "cdsdmm/phantom.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "cdsdmm/convolution.hpp"
#include "cdsdmm/error.hpp"
#include "cdsdmm/metrics.hpp"
#include "cdsdmm/rng.hpp"

namespace cdsdmm {

std::vector<Region> default_regions(std::size_t rows, std::size_t cols) {
  const double r = static_cast<double>(rows);
  const double c = static_cast<double>(cols);
  const double side = std::min(r, c);
  using S = Region::Shape;
  return {
      {S::kRect, 0.0, 0.0, r, c, 0.5},
      {S::kDisc, std::round(0.30 * r), std::round(0.30 * c), std::round(0.16 * side), 0.0, 1.0},
      {S::kDisc, std::round(0.68 * r), std::round(0.68 * c), std::round(0.14 * side), 0.0, 0.1},
      {S::kRect, std::round(0.58 * r), std::round(0.08 * c), std::round(0.28 * r),
       std::round(0.34 * c), 0.8},
  };
}

std::vector<Region> parse_regions(const std::string& text) {
  std::vector<Region> out;
  std::stringstream all(text);
  std::string item;
  while (std::getline(all, item, ';')) {
    std::istringstream in(item);
    std::string kind;
    if (!(in >> kind)) continue;
    Region reg;
    if (kind == "rect") {
      reg.shape = Region::Shape::kRect;
      in >> reg.a >> reg.b >> reg.c >> reg.d >> reg.weight;
    } else if (kind == "disc") {
      reg.shape = Region::Shape::kDisc;
      in >> reg.a >> reg.b >> reg.c >> reg.weight;
    } else {
      throw ParameterError("unknown region shape '" + kind + "'");
    }
    std::string extra;
    if (in.fail() || (in >> extra)) throw ParameterError("malformed region '" + item + "'");
    out.push_back(reg);
  }
  return out;
}

std::string format_regions(const std::vector<Region>& regions) {
  std::string s;
  for (const Region& r : regions) {
    if (!s.empty()) s += "; ";
    if (r.shape == Region::Shape::kRect) {
      s += "rect " + format_double(r.a) + ' ' + format_double(r.b) + ' ' + format_double(r.c) +
           ' ' + format_double(r.d) + ' ' + format_double(r.weight);
    } else {
      s += "disc " + format_double(r.a) + ' ' + format_double(r.b) + ' ' + format_double(r.c) +
           ' ' + format_double(r.weight);
    }
  }
  return s;
}

void validate(const PhantomSpec& spec) {
  if (spec.rows == 0 || spec.cols == 0) throw ParameterError("phantom grid must be nonempty");
  if (!(spec.amplitude_shape >= 1.0 && spec.amplitude_shape <= 2.0)) {
    throw ParameterError("amplitude_shape must lie in [1, 2]");
  }
  if (!(spec.amplitude_scale > 0.0)) throw ParameterError("amplitude_scale must be > 0");
  const double rows = static_cast<double>(spec.rows);
  const double cols = static_cast<double>(spec.cols);
  for (const Region& r : spec.regions) {
    if (!(r.weight >= 0.0 && r.weight <= 1.0)) throw ParameterError("region weight must lie in [0, 1]");
    if (r.shape == Region::Shape::kRect) {
      if (r.a < 0 || r.b < 0 || r.c <= 0 || r.d <= 0 || r.a + r.c > rows || r.b + r.d > cols) {
        throw ParameterError("rectangle region leaves the grid");
      }
    } else {
      if (r.c <= 0 || r.a - r.c < 0 || r.b - r.c < 0 || r.a + r.c > rows - 1 ||
          r.b + r.c > cols - 1) {
        throw ParameterError("disc region leaves the grid");
      }
    }
  }
}

Image generate_mask(const PhantomSpec& spec) {
  validate(spec);
  Image mask(spec.rows, spec.cols, 0.0);
  for (const Region& reg : spec.regions) {
    for (std::size_t r = 0; r < spec.rows; ++r) {
      for (std::size_t c = 0; c < spec.cols; ++c) {
        const double y = static_cast<double>(r);
        const double x = static_cast<double>(c);
        bool inside = false;
        if (reg.shape == Region::Shape::kRect) {
          inside = y >= reg.a && y < reg.a + reg.c && x >= reg.b && x < reg.b + reg.d;
        } else {
          inside = (y - reg.a) * (y - reg.a) + (x - reg.b) * (x - reg.b) <= reg.c * reg.c;
        }
        if (inside) mask(r, c) = reg.weight;
      }
    }
  }
  return mask;
}

Vector sample_ggd(std::size_t n, double shape, double scale, std::uint64_t seed) {
  if (!(shape >= 1.0 && shape <= 2.0)) throw ParameterError("GGD shape must lie in [1, 2]");
  if (!(scale > 0.0)) throw ParameterError("GGD scale must be > 0");
  std::mt19937_64 rng(seed);
  std::gamma_distribution<double> gamma(1.0 / shape, 1.0);
  Vector out(n);
  for (double& v : out) {
    const double w = gamma(rng);
    const double sign = (rng() >> 63) ? -1.0 : 1.0;
    v = sign * scale * std::pow(w, 1.0 / shape);
  }
  return out;
}

Image synthesize_trf(const Image& mask, std::span<const double> amplitudes) {
  if (amplitudes.size() != mask.size()) throw DimensionError("amplitude count differs from mask size");
  Image trf(mask.rows(), mask.cols());
  for (std::size_t i = 0; i < mask.size(); ++i) trf[i] = mask[i] * amplitudes[i];
  return trf;
}

void validate(const PsfSpec& spec) {
  if (!(spec.center_frequency > 0.0 && spec.center_frequency < spec.sampling_frequency_axial / 2.0)) {
    throw ParameterError("center frequency must lie in (0, fs/2)");
  }
  if (!(spec.fractional_bandwidth > 0.0)) throw ParameterError("fractional bandwidth must be > 0");
  if (!(spec.lateral_sigma > 0.0)) throw ParameterError("lateral sigma must be > 0");
  if (spec.kernel_rows % 2 == 0 || spec.kernel_cols % 2 == 0) {
    throw ParameterError("PSF kernel dimensions must be odd");
  }
}

double axial_sigma_samples(const PsfSpec& spec) {
  // Gaussian spectrum exp(-f^2 / 2 s_f^2) has a -6 dB full width of
  // 2 s_f sqrt(2 ln 2); the time-domain sigma is 1 / (2 pi s_f).
  const double bandwidth = spec.fractional_bandwidth * spec.center_frequency;
  const double sigma_f = bandwidth / (2.0 * std::sqrt(2.0 * std::log(2.0)));
  return spec.sampling_frequency_axial / (2.0 * M_PI * sigma_f);
}

Image synthesize_psf(const PsfSpec& spec) {
  validate(spec);
  const double sax = axial_sigma_samples(spec);
  const double slat = spec.lateral_sigma;
  const double w = 2.0 * M_PI * spec.center_frequency / spec.sampling_frequency_axial;
  const auto cr = static_cast<double>(spec.kernel_rows / 2);
  const auto cc = static_cast<double>(spec.kernel_cols / 2);
  Image psf(spec.kernel_rows, spec.kernel_cols);
  for (std::size_t r = 0; r < spec.kernel_rows; ++r) {
    const double i = static_cast<double>(r) - cr;
    const double axial = std::exp(-i * i / (2.0 * sax * sax)) * std::cos(w * i);
    for (std::size_t c = 0; c < spec.kernel_cols; ++c) {
      const double j = static_cast<double>(c) - cc;
      psf(r, c) = axial * std::exp(-j * j / (2.0 * slat * slat));
    }
  }
  const double norm = norm2(psf.span());
  for (double& v : psf.data()) v /= norm;
  return psf;
}

Image identity_psf() { return Image(1, 1, 1.0); }

Image simulate_rf(const Image& trf, const Image& psf) {
  return build_convolution(psf, trf.rows(), trf.cols()).apply(trf);
}

Vector add_noise_snr(std::span<const double> y, double snr_db, std::uint64_t seed) {
  Vector out(y.begin(), y.end());
  if (std::isinf(snr_db) && snr_db > 0) return out;
  if (std::isnan(snr_db)) throw ParameterError("SNR must be a number");
  const double energy = dot(y, y);
  if (energy == 0.0) throw ParameterError("cannot set a finite SNR on a zero signal");
  const double var = energy / (static_cast<double>(y.size()) * std::pow(10.0, snr_db / 10.0));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(var));
  for (double& v : out) v += normal(rng);
  return out;
}

PhantomData generate_phantom(const PhantomSpec& spec, const Image& psf) {
  PhantomData d;
  d.mask = generate_mask(spec);
  const Vector amp = sample_ggd(spec.rows * spec.cols, spec.amplitude_shape, spec.amplitude_scale,
                                derive_seed(spec.seed, SeedStream::kAmplitudes));
  d.trf = synthesize_trf(d.mask, amp);
  d.psf = psf;
  d.rf = simulate_rf(d.trf, psf);
  return d;
}

}  // namespace cdsdmm
