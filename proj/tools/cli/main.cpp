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

// cdsdmm: phantom generation, compression, reconstruction and evaluation.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "config.hpp"
#include "pipeline.hpp"

namespace {

using cdsdmm::harness::RunConfig;

constexpr int kExitIo = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Flags {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  cdsdmm::harness::Paths paths;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "key = value configuration file")->required();
  cmd->add_option("--out", f.out, "output directory (overrides 'output')");
  cmd->add_option("--seed", f.seed, "master seed (overrides 'seed')");
}

RunConfig resolve(const Flags& f) {
  RunConfig config = cdsdmm::harness::load_config(f.config);
  if (!f.out.empty()) config.output = f.out;
  if (f.seed) config.seed = *f.seed;
  cdsdmm::harness::validate(config);
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compressive deconvolution of ultrasound RF images"};
  app.require_subcommand(1);
  Flags f;

  auto* phantom = app.add_subcommand("phantom", "write mask, TRF, PSF and RF images");
  auto* compress = app.add_subcommand("compress", "measure an RF image and record the operator");
  auto* reconstruct = app.add_subcommand("reconstruct", "run the solver on y.cdm");
  auto* evaluate = app.add_subcommand("evaluate", "append quality metrics to metrics.csv");
  auto* sweep = app.add_subcommand("sweep", "grid over CS ratios and p");
  auto* prox_curve = app.add_subcommand("prox-curve", "tabulate the lp proximal map");
  for (auto* cmd : {phantom, compress, reconstruct, evaluate, sweep, prox_curve}) add_common(cmd, f);
  compress->add_option("--rf", f.paths.rf, "RF image (default <out>/rf.cdm)");
  reconstruct->add_option("--y", f.paths.y, "measurements (default <out>/y.cdm)");
  reconstruct->add_option("--psf", f.paths.psf, "PSF (default <out>/psf.cdm)");
  reconstruct->add_option("--truth", f.paths.truth, "reference TRF for the trace NMSE column");
  evaluate->add_option("--trf", f.paths.trf, "reference TRF (default <out>/trf.cdm)");
  evaluate->add_option("--xhat", f.paths.xhat, "reconstruction (default <out>/xhat.cdm)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    const RunConfig config = resolve(f);
    if (phantom->parsed()) {
      cdsdmm::harness::cmd_phantom(config);
    } else if (compress->parsed()) {
      cdsdmm::harness::cmd_compress(config, f.paths);
    } else if (reconstruct->parsed()) {
      const auto res = cdsdmm::harness::cmd_reconstruct(config, f.paths);
      std::cout << "iterations " << res.iterations << (res.converged ? " converged" : " max_iters reached")
                << "\n";
    } else if (evaluate->parsed()) {
      const auto r = cdsdmm::harness::cmd_evaluate(config, f.paths);
      std::cout << cdsdmm::metric_csv_header() << "\n" << cdsdmm::metric_csv_row(r) << "\n";
    } else if (sweep->parsed()) {
      std::cout << cdsdmm::harness::sweep_csv_header() << "\n";
      for (const auto& cell : cdsdmm::harness::cmd_sweep(config)) {
        std::cout << cdsdmm::harness::sweep_csv_row(cell) << "\n";
      }
    } else if (prox_curve->parsed()) {
      cdsdmm::harness::cmd_prox_curve(config);
    }
  } catch (const cdsdmm::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const cdsdmm::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const cdsdmm::Error& e) {
    // Configuration, parameter, dimension and strategy errors.
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  return 0;
}
