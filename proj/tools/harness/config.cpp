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

#include "config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace cdsdmm::harness {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& v) {
  if (v == "inf" || v == "+inf") return std::numeric_limits<double>::infinity();
  double out = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw ConfigError("expected a number, got '" + v + "'");
  }
  return out;
}

std::uint64_t to_u64(const std::string& v) {
  std::uint64_t out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw ConfigError("expected a nonnegative integer, got '" + v + "'");
  }
  return out;
}

int to_int(const std::string& v) {
  const std::uint64_t u = to_u64(v);
  if (u > static_cast<std::uint64_t>(std::numeric_limits<int>::max())) {
    throw ConfigError("integer out of range: '" + v + "'");
  }
  return static_cast<int>(u);
}

bool to_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("expected a boolean, got '" + v + "'");
}

RegionBox to_box(const std::string& v) {
  std::istringstream in(v);
  std::uint64_t t = 0, l = 0, h = 0, w = 0;
  std::string extra;
  if (!(in >> t >> l >> h >> w) || (in >> extra)) {
    throw ConfigError("expected 'top left height width', got '" + v + "'");
  }
  return RegionBox{t, l, h, w};
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"rows", [](RunConfig& c, const std::string& v) { c.phantom.rows = to_u64(v); }},
      {"cols", [](RunConfig& c, const std::string& v) { c.phantom.cols = to_u64(v); }},
      {"regions", [](RunConfig& c, const std::string& v) { c.phantom.regions = parse_regions(v); }},
      {"amplitude_shape", [](RunConfig& c, const std::string& v) { c.phantom.amplitude_shape = to_double(v); }},
      {"amplitude_scale", [](RunConfig& c, const std::string& v) { c.phantom.amplitude_scale = to_double(v); }},
      {"psf",
       [](RunConfig& c, const std::string& v) {
         if (v == "gaussian_cosine") {
           c.psf_kind = PsfKind::kGaussianCosine;
         } else if (v == "identity") {
           c.psf_kind = PsfKind::kIdentity;
         } else {
           throw ConfigError("psf must be gaussian_cosine or identity, got '" + v + "'");
         }
       }},
      {"center_frequency", [](RunConfig& c, const std::string& v) { c.psf.center_frequency = to_double(v); }},
      {"sampling_frequency", [](RunConfig& c, const std::string& v) { c.psf.sampling_frequency_axial = to_double(v); }},
      {"fractional_bandwidth", [](RunConfig& c, const std::string& v) { c.psf.fractional_bandwidth = to_double(v); }},
      {"lateral_sigma", [](RunConfig& c, const std::string& v) { c.psf.lateral_sigma = to_double(v); }},
      {"psf_rows", [](RunConfig& c, const std::string& v) { c.psf.kernel_rows = to_u64(v); }},
      {"psf_cols", [](RunConfig& c, const std::string& v) { c.psf.kernel_cols = to_u64(v); }},
      {"wavelet", [](RunConfig& c, const std::string& v) { c.wavelet = parse_wavelet_family(v); }},
      {"wavelet_levels", [](RunConfig& c, const std::string& v) { c.wavelet_levels = to_int(v); }},
      {"matrix",
       [](RunConfig& c, const std::string& v) {
         if (v == "srm") {
           c.matrix = MeasurementKind::kSrm;
         } else if (v == "gaussian") {
           c.matrix = MeasurementKind::kGaussian;
         } else {
           throw ConfigError("matrix must be srm or gaussian, got '" + v + "'");
         }
       }},
      {"srm_base", [](RunConfig& c, const std::string& v) { c.srm.base = parse_srm_base(v); }},
      {"srm_sign_flip", [](RunConfig& c, const std::string& v) { c.srm.randomize_signs = to_bool(v); }},
      {"cs_ratio", [](RunConfig& c, const std::string& v) { c.cs_ratio = to_double(v); }},
      {"snr_db", [](RunConfig& c, const std::string& v) { c.snr_db = to_double(v); }},
      {"alpha", [](RunConfig& c, const std::string& v) { c.alpha = to_double(v); }},
      {"mu", [](RunConfig& c, const std::string& v) { c.mu = to_double(v); }},
      {"p", [](RunConfig& c, const std::string& v) { c.p = to_double(v); }},
      {"beta", [](RunConfig& c, const std::string& v) { c.solver.beta = to_double(v); }},
      {"tol", [](RunConfig& c, const std::string& v) { c.solver.tol = to_double(v); }},
      {"max_iters", [](RunConfig& c, const std::string& v) { c.solver.max_iters = to_int(v); }},
      {"v3_strategy", [](RunConfig& c, const std::string& v) { c.solver.v3_strategy = parse_v3_strategy(v); }},
      {"newton_inner_tol", [](RunConfig& c, const std::string& v) { c.solver.newton_inner_tol = to_double(v); }},
      {"newton_max_inner", [](RunConfig& c, const std::string& v) { c.solver.newton_max_inner = to_int(v); }},
      {"record_objective", [](RunConfig& c, const std::string& v) { c.solver.record_objective = to_bool(v); }},
      {"seed", [](RunConfig& c, const std::string& v) { c.seed = to_u64(v); }},
      {"output", [](RunConfig& c, const std::string& v) { c.output = v; }},
      {"sweep_ratios", [](RunConfig& c, const std::string& v) { c.sweep_ratios = parse_double_list(v); }},
      {"sweep_p", [](RunConfig& c, const std::string& v) { c.sweep_p = parse_double_list(v); }},
      {"cnr_region1", [](RunConfig& c, const std::string& v) { c.cnr_region1 = to_box(v); }},
      {"cnr_region2", [](RunConfig& c, const std::string& v) { c.cnr_region2 = to_box(v); }},
      {"dynamic_range_db", [](RunConfig& c, const std::string& v) { c.dynamic_range_db = to_double(v); }},
      {"prox_k", [](RunConfig& c, const std::string& v) { c.prox_k = to_double(v); }},
      {"prox_p", [](RunConfig& c, const std::string& v) { c.prox_p = parse_double_list(v); }},
      {"prox_xmax", [](RunConfig& c, const std::string& v) { c.prox_xmax = to_double(v); }},
      {"prox_points", [](RunConfig& c, const std::string& v) { c.prox_points = to_int(v); }},
  };
  return table;
}

}  // namespace

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError("empty entry in list '" + text + "'");
    out.push_back(to_double(item));
  }
  if (out.empty()) throw ConfigError("list must not be empty");
  return out;
}

RunConfig parse_config(const std::string& text) {
  RunConfig config;
  bool regions_given = false;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) {
      throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    if (!seen.insert(key).second) {
      throw ConfigError("line " + std::to_string(lineno) + ": key '" + key + "' given twice");
    }
    if (value.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty value for '" + key + "'");
    try {
      it->second(config, value);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineno) + " (" + key + "): " + e.what());
    } catch (const ParameterError& e) {
      throw ConfigError("line " + std::to_string(lineno) + " (" + key + "): " + e.what());
    }
    regions_given = regions_given || key == "regions";
  }
  if (!regions_given) config.phantom.regions = default_regions(config.phantom.rows, config.phantom.cols);
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::size_t measurement_count(double cs_ratio, std::size_t n) {
  const auto m = static_cast<std::size_t>(std::llround(cs_ratio * static_cast<double>(n)));
  return std::max<std::size_t>(m, 1);
}

void validate(const RunConfig& c) {
  auto check = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
  };
  try {
    validate(c.phantom);
    if (c.psf_kind == PsfKind::kGaussianCosine) validate(c.psf);
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  }
  const std::size_t n = c.phantom.rows * c.phantom.cols;
  if (c.psf_kind == PsfKind::kGaussianCosine) {
    check(c.psf.kernel_rows <= c.phantom.rows && c.psf.kernel_cols <= c.phantom.cols,
          "PSF kernel is larger than the image grid");
  }
  check(c.wavelet_levels >= 1, "wavelet_levels must be >= 1");
  if (c.wavelet != WaveletFamily::kIdentity) {
    const std::size_t block = std::size_t{1} << c.wavelet_levels;
    check(c.phantom.rows % block == 0 && c.phantom.cols % block == 0,
          "rows and cols must be divisible by 2^wavelet_levels");
  }
  auto check_ratio = [&](double r) {
    check(r > 0.0 && r <= 1.0, "CS ratio must lie in (0, 1]");
  };
  check_ratio(c.cs_ratio);
  for (double r : c.sweep_ratios) check_ratio(r);
  if (c.matrix == MeasurementKind::kSrm && c.srm.base == SrmBase::kWalshHadamard) {
    check(is_power_of_two(n), "Walsh-Hadamard SRM needs rows*cols to be a power of two");
  }
  check(!std::isnan(c.snr_db), "snr_db must be a number");
  if (c.alpha) check(*c.alpha >= 0.0 && std::isfinite(*c.alpha), "alpha must be finite and >= 0");
  if (c.mu) check(*c.mu > 0.0 && std::isfinite(*c.mu), "mu must be finite and > 0");
  auto check_p = [&](double p) { check(p >= 1.0 && p <= 2.0, "p must lie in [1, 2]"); };
  check_p(c.p);
  for (double p : c.sweep_p) check_p(p);
  try {
    validate(c.solver);
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  }
  for (const auto& box : {c.cnr_region1, c.cnr_region2}) {
    if (!box) continue;
    check(box->height * box->width >= 4, "CNR regions must cover at least 4 pixels");
    check(box->top + box->height <= c.phantom.rows && box->left + box->width <= c.phantom.cols,
          "CNR region leaves the grid");
  }
  check(c.cnr_region1.has_value() == c.cnr_region2.has_value(),
        "cnr_region1 and cnr_region2 must be given together");
  check(c.dynamic_range_db > 0.0, "dynamic_range_db must be > 0");
  check(c.prox_k >= 0.0 && std::isfinite(c.prox_k), "prox_k must be finite and >= 0");
  for (double p : c.prox_p) check_p(p);
  check(c.prox_xmax > 0.0 && std::isfinite(c.prox_xmax), "prox_xmax must be > 0");
  check(c.prox_points >= 2, "prox_points must be >= 2");
}

}  // namespace cdsdmm::harness
