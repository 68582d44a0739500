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
#include <optional>
#include <string>

#include "cdsdmm/convolution.hpp"
#include "cdsdmm/measurement.hpp"
#include "cdsdmm/metrics.hpp"
#include "cdsdmm/phantom.hpp"
#include "cdsdmm/solver.hpp"
#include "config.hpp"

namespace cdsdmm::harness {

/// Everything needed to rebuild the measurement operator bit for bit.
struct OperatorRecord {
  MeasurementKind kind = MeasurementKind::kSrm;
  std::uint64_t seed = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t m = 0;
  SrmOptions srm;
};

void write_operator_record(const std::filesystem::path& path, const OperatorRecord& rec);
OperatorRecord read_operator_record(const std::filesystem::path& path);
MeasurementOperator rebuild_operator(const OperatorRecord& rec);

Image make_psf(const RunConfig& config);
PhantomData make_phantom(const RunConfig& config);

struct Compressed {
  OperatorRecord record;
  MeasurementOperator phi;
  Vector y;
};

/// Draws Phi from the matrix stream and the noise from the noise stream of
/// config.seed, so cells of a sweep share both.
Compressed compress(const RunConfig& config, const Image& rf, double cs_ratio);

/// Throws ConfigError when alpha or mu is missing.
Problem make_problem(const RunConfig& config, const Image& psf, const MeasurementOperator& phi,
                     Vector y, double p);

MetricReport evaluate(const RunConfig& config, const Image& trf, const Image& xhat);

void write_trace_csv(const std::filesystem::path& path, const std::vector<TraceEntry>& trace);

struct SweepCell {
  double cs_ratio = 0.0;
  double p = 1.0;
  std::optional<MetricReport> report;
  bool converged = false;
  std::string status = "ok";
};

std::string sweep_csv_header();
std::string sweep_csv_row(const SweepCell& cell);

// Subcommands. Each reads its inputs from explicit paths and writes into
// config.output.

struct Paths {
  std::optional<std::filesystem::path> rf;
  std::optional<std::filesystem::path> y;
  std::optional<std::filesystem::path> psf;
  std::optional<std::filesystem::path> trf;
  std::optional<std::filesystem::path> xhat;
  std::optional<std::filesystem::path> truth;
};

void cmd_phantom(const RunConfig& config);
void cmd_compress(const RunConfig& config, const Paths& paths);
SolveResult cmd_reconstruct(const RunConfig& config, const Paths& paths);
MetricReport cmd_evaluate(const RunConfig& config, const Paths& paths);
std::vector<SweepCell> cmd_sweep(const RunConfig& config);
void cmd_prox_curve(const RunConfig& config);

}  // namespace cdsdmm::harness
