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

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cdsdmm/error.hpp"
#include "cdsdmm/measurement.hpp"
#include "cdsdmm/metrics.hpp"
#include "cdsdmm/phantom.hpp"
#include "cdsdmm/solver.hpp"
#include "cdsdmm/wavelet.hpp"

namespace cdsdmm::harness {

/// Bad or missing configuration. Maps to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class PsfKind { kGaussianCosine, kIdentity };

struct RunConfig {
  PhantomSpec phantom;
  PsfKind psf_kind = PsfKind::kGaussianCosine;
  PsfSpec psf;

  WaveletFamily wavelet = WaveletFamily::kDaubechies4;
  int wavelet_levels = 3;

  MeasurementKind matrix = MeasurementKind::kSrm;
  SrmOptions srm;
  double cs_ratio = 0.4;
  double snr_db = 40.0;

  // No defaults for alpha and mu; commands that solve require them.
  std::optional<double> alpha;
  std::optional<double> mu;
  double p = 1.0;
  SolverConfig solver;

  std::uint64_t seed = 0;
  std::filesystem::path output = ".";

  std::vector<double> sweep_ratios{0.2, 0.4, 0.6, 0.8};
  std::vector<double> sweep_p{1.0};

  std::optional<RegionBox> cnr_region1;
  std::optional<RegionBox> cnr_region2;
  double dynamic_range_db = 40.0;

  double prox_k = 1.0;
  std::vector<double> prox_p{1.0, 1.2, 1.5, 1.8, 2.0};
  double prox_xmax = 5.0;
  int prox_points = 201;
};

/// Parses "key = value" lines. '#' starts a comment. Unknown keys, repeated
/// keys and malformed values throw ConfigError naming the line.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Cross-field checks that need the whole config (region bounds, grid sizes
/// compatible with the wavelet depth, and so on).
void validate(const RunConfig& config);

/// Number of measurements for a CS ratio: round(ratio * n), at least 1.
std::size_t measurement_count(double cs_ratio, std::size_t n);

std::vector<double> parse_double_list(const std::string& text);

}  // namespace cdsdmm::harness
