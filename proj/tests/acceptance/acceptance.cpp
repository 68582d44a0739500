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

// Acceptance checks. Usage: cdsdmm_acceptance [N ...]; with no arguments
// every criterion runs. Prints one PASS/FAIL line per criterion and exits
// nonzero if any failed.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cdsdmm/cdm_io.hpp"
#include "cdsdmm/metrics.hpp"
#include "cdsdmm/prox.hpp"
#include "cdsdmm/solver.hpp"
#include "config.hpp"
#include "oracles.hpp"
#include "pipeline.hpp"
#include "solver_fixtures.hpp"

namespace fs = std::filesystem;
using namespace cdsdmm;
using namespace cdsdmm::harness;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Configuration shared by the 128x128 trend and gap checks. The
// hyperparameters were picked once by a coarse grid search on seed 7.
const char* kPhantomRun =
    "alpha = 0.1\n"
    "mu = 0.01\n"
    "beta = 0.3\n"
    "p = 1\n"
    "snr_db = 40\n"
    "seed = 7\n"
    "record_objective = false\n";

Outcome prox_oracle() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> ux(-10.0, 10.0);
  std::uniform_real_distribution<double> uk(0.0, 5.0);
  const double ps[] = {1.0, 1.1, 1.5, 1.9, 2.0};
  double worst = 0.0;
  int violations = 0;
  for (int t = 0; t < 1000; ++t) {
    const double x = ux(rng);
    const double k = uk(rng);
    const double p = ps[t % 5];
    const double u = prox_lp_scalar(x, {k, p});
    worst = std::max(worst, std::abs(u - oracle::grid_prox(x, k, p, 1e-3)));
    if (std::abs(u) > std::abs(x) || u * x < 0.0) ++violations;
    const double x2 = ux(rng);
    if (std::abs(u - prox_lp_scalar(x2, {k, p})) > std::abs(x - x2) * (1.0 + 1e-12)) ++violations;
  }
  const double secs = since(t0);
  return {worst < 1e-3 && violations == 0 && secs < 5.0,
          "max |prox - grid| = " + fmt("%.3g", worst) + ", property violations " +
              std::to_string(violations) + ", " + fmt("%.2f", secs) + " s"};
}

Outcome x_update_oracle() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(77);
  double worst = 0.0;
  for (int t = 0; t < 10; ++t) {
    const Image psf = oracle::random_image(3, 3, rng);
    Problem problem = testing::degenerate_problem(8, 8, Vector(64, 0.0), 1.0);
    problem.h = build_convolution(psf, 8, 8);
    problem.psi = SparsifyingTransform(t % 2 ? WaveletFamily::kHaar : WaveletFamily::kDaubechies4, 2, 8, 8);
    const SolverState s = testing::random_state(problem, 100 + t);

    // Dense normal equations C^T C x = C^T (v - b) with C = [I; W H; H].
    const oracle::Dense h = oracle::dense_convolution(psf, 8, 8);
    const oracle::Dense w = testing::dense_analysis(problem.psi);
    const oracle::Dense wh = w * h;
    const oracle::Dense ctc = oracle::Dense::Identity(64, 64) + wh.transpose() * wh + h.transpose() * h;
    Eigen::VectorXd rhs = oracle::to_eigen(s.v1) - oracle::to_eigen(s.b1) +
                          wh.transpose() * (oracle::to_eigen(s.v2) - oracle::to_eigen(s.b2)) +
                          h.transpose() * (oracle::to_eigen(s.v3) - oracle::to_eigen(s.b3));
    const Vector expect = oracle::from_eigen(ctc.ldlt().solve(rhs));
    worst = std::max(worst, oracle::rel_diff(update_x(s, problem), expect));
  }
  const double secs = since(t0);
  return {worst < 1e-8 && secs < 5.0, "max relative error " + fmt("%.3g", worst) + ", " + fmt("%.2f", secs) + " s"};
}

Outcome v3_equivalence() {
  const auto t0 = Clock::now();
  double worst_srm = 0.0;
  for (int t = 0; t < 10; ++t) {
    const Problem problem = testing::random_problem(8, 16, MeasurementKind::kSrm, 300 + t, 0.1, 0.5);
    const SolverState s = testing::random_state(problem, 400 + t);
    SolverConfig config;
    config.beta = 1.0 + 0.2 * t;
    worst_srm = std::max(worst_srm, oracle::rel_diff(update_v3_newton(s, problem, config),
                                                     update_v3_orthogonal(s, problem, config)));
  }
  double worst_gauss = 0.0;
  for (int t = 0; t < 5; ++t) {
    const Problem problem = testing::random_problem(8, 32, MeasurementKind::kGaussian, 500 + t, 0.1, 0.5);
    const SolverState s = testing::random_state(problem, 600 + t);
    SolverConfig config;
    // Steepest descent on the Gaussian system needs more than the default
    // budget to reach 1e-6.
    config.newton_max_inner = 2000;
    const oracle::Dense phi = oracle::from_row_major(problem.phi.materialize(), 32, 64);
    const Vector hx = problem.h.apply(s.x);
    Eigen::VectorXd r(64);
    for (std::size_t i = 0; i < 64; ++i) r(static_cast<long>(i)) = s.b3[i] + hx[i];
    const oracle::Dense a = phi.transpose() * phi + 0.5 * oracle::Dense::Identity(64, 64);
    const Eigen::VectorXd rhs = phi.transpose() * oracle::to_eigen(problem.y) + 0.5 * r;
    worst_gauss = std::max(worst_gauss, oracle::rel_diff(update_v3_newton(s, problem, config),
                                                         oracle::from_eigen(a.ldlt().solve(rhs))));
  }
  const double secs = since(t0);
  return {worst_srm < 1e-6 && worst_gauss < 1e-6 && secs < 10.0,
          "SRM SMW vs Newton " + fmt("%.3g", worst_srm) + ", Gaussian Newton vs dense " +
              fmt("%.3g", worst_gauss) + ", " + fmt("%.2f", secs) + " s"};
}

Outcome degenerate_end_to_end() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(4096);
  const Vector y = oracle::random_vector(4096, rng);
  const Problem problem = testing::degenerate_problem(64, 64, y, 0.3);
  SolverConfig config;
  config.tol = 5e-4;
  const SolveResult res = solve(problem, config);
  const Vector expect = prox_l1(y, 0.3);
  double err = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) err = std::max(err, std::abs(res.x[i] - expect[i]));
  const double secs = since(t0);
  return {res.converged && err < 1e-4 && secs < 10.0,
          "max |x - soft(y, 0.3)| = " + fmt("%.3g", err) + " after " + std::to_string(res.iterations) +
              " iterations, " + fmt("%.2f", secs) + " s"};
}

Outcome deep_convergence() {
  const auto t0 = Clock::now();
  RunConfig c = parse_config(
      "rows = 32\ncols = 32\npsf_rows = 9\npsf_cols = 5\nwavelet_levels = 2\n"
      "alpha = 0.1\nmu = 0.01\nbeta = 0.3\nseed = 11\n");
  const PhantomData d = make_phantom(c);
  Compressed cc = compress(c, d.rf, 0.5);
  const Problem problem = make_problem(c, d.psf, cc.phi, cc.y, 1.0);
  SolverConfig config = c.solver;
  config.record_objective = false;
  const SolveResult res = solve(problem, config);
  SolverConfig deep = config;
  deep.tol = std::numeric_limits<double>::min();
  deep.max_iters = 100000;
  const SolveResult ref = solve(problem, deep);
  const double f = objective(problem, res.x.span());
  const double f_ref = objective(problem, ref.x.span());
  const double rel = std::abs(f - f_ref) / std::abs(f_ref);
  const double secs = since(t0);
  return {rel <= 1e-3 && secs < 120.0,
          "objective " + fmt("%.8g", f) + " vs reference " + fmt("%.8g", f_ref) + " (rel " + fmt("%.3g", rel) +
              ", " + std::to_string(res.iterations) + " vs " + std::to_string(ref.iterations) + " iterations), " +
              fmt("%.1f", secs) + " s"};
}

struct CellResult {
  double psnr_db;
  double ssim;
  int iterations;
  double seconds;
};

CellResult run_cell(const RunConfig& c, const PhantomData& d, double ratio) {
  const auto t0 = Clock::now();
  Compressed cc = compress(c, d.rf, ratio);
  const Problem problem = make_problem(c, d.psf, cc.phi, std::move(cc.y), c.p);
  const SolveResult res = solve(problem, c.solver);
  const MetricReport r = evaluate(c, d.trf, res.x);
  return {r.psnr_db, r.ssim, res.iterations, since(t0)};
}

Outcome trend() {
  const auto t0 = Clock::now();
  const RunConfig c = parse_config(kPhantomRun);
  validate(c);
  const PhantomData d = make_phantom(c);
  std::vector<CellResult> cells;
  for (double ratio : {0.2, 0.4, 0.6, 0.8}) cells.push_back(run_cell(c, d, ratio));
  bool increasing = true;
  std::string detail = "PSNR/SSIM";
  for (std::size_t i = 0; i < cells.size(); ++i) {
    detail += " " + fmt("%.2f", cells[i].psnr_db) + "/" + fmt("%.3f", cells[i].ssim);
    if (i > 0) {
      increasing = increasing && cells[i].psnr_db > cells[i - 1].psnr_db && cells[i].ssim > cells[i - 1].ssim;
    }
  }
  const double secs = since(t0);
  return {increasing && secs < 600.0, detail + " at CS 0.2/0.4/0.6/0.8, " + fmt("%.1f", secs) + " s"};
}

Outcome gaussian_gap() {
  RunConfig c = parse_config(std::string(kPhantomRun) + "newton_max_inner = 1\n");
  validate(c);
  const PhantomData d = make_phantom(c);
  const CellResult srm = run_cell(c, d, 0.8);
  c.matrix = MeasurementKind::kGaussian;
  const CellResult gauss = run_cell(c, d, 0.8);
  const double gap = std::abs(srm.psnr_db - gauss.psnr_db);
  return {gap <= 1.5 && gauss.seconds < 300.0,
          "SRM " + fmt("%.2f", srm.psnr_db) + " dB, Gaussian " + fmt("%.2f", gauss.psnr_db) + " dB (gap " +
              fmt("%.2f", gap) + " dB), Gaussian run " + fmt("%.1f", gauss.seconds) + " s, " +
              std::to_string(gauss.iterations) + " iterations"};
}

Outcome operator_algebra() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(8);
  double worst_orth = 0.0;
  double worst_adj = 0.0;
  double worst_round = 0.0;
  auto adj = [&](const std::function<Vector(const Vector&)>& a, const std::function<Vector(const Vector&)>& at,
                 std::size_t n, std::size_t m) {
    const Vector x = oracle::random_vector(n, rng);
    const Vector y = oracle::random_vector(m, rng);
    const double lhs = dot(a(x), y);
    const double rhs = dot(x, at(y));
    worst_adj = std::max(worst_adj, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
  };
  for (SrmBase base : {SrmBase::kWalshHadamard, SrmBase::kDct, SrmBase::kIdentity}) {
    const MeasurementOperator phi = build_srm(9, 1024, 300, SrmOptions{base, true});
    for (int t = 0; t < 5; ++t) {
      const Vector y = oracle::random_vector(300, rng);
      worst_orth = std::max(worst_orth, oracle::rel_diff(phi.measure(phi.measure_adjoint(y)), y));
    }
    adj([&](const Vector& v) { return phi.measure(v); }, [&](const Vector& v) { return phi.measure_adjoint(v); },
        1024, 300);
  }
  const MeasurementOperator g = build_gaussian(10, 1024, 300);
  adj([&](const Vector& v) { return g.measure(v); }, [&](const Vector& v) { return g.measure_adjoint(v); }, 1024,
      300);
  const ConvolutionOperator h = build_convolution(synthesize_psf(PsfSpec{}), 64, 32);
  adj([&](const Vector& v) { return h.apply(v); }, [&](const Vector& v) { return h.apply_adjoint(v); }, 2048, 2048);
  for (WaveletFamily f : {WaveletFamily::kHaar, WaveletFamily::kDaubechies4, WaveletFamily::kIdentity}) {
    const SparsifyingTransform psi(f, 3, 64, 32);
    adj([&](const Vector& v) { return psi.analyze(v); }, [&](const Vector& v) { return psi.synthesize(v); }, 2048,
        2048);
    const Vector x = oracle::random_vector(2048, rng);
    worst_round = std::max(worst_round, oracle::rel_diff(psi.synthesize(psi.analyze(x)), x));
    worst_round = std::max(worst_round, oracle::rel_diff(psi.analyze(psi.synthesize(x)), x));
  }
  const double secs = since(t0);
  return {worst_orth < 1e-10 && worst_adj < 1e-10 && worst_round < 1e-10 && secs < 5.0,
          "SRM Phi Phi^T = I to " + fmt("%.2g", worst_orth) + ", adjoint identities to " + fmt("%.2g", worst_adj) +
              ", wavelet round trips to " + fmt("%.2g", worst_round) + ", " + fmt("%.2f", secs) + " s"};
}

Outcome metric_checks() {
  const auto t0 = Clock::now();
  const double p20 = psnr(Vector{1.0, 0.0, 0.0, 0.0}, Vector{1.0, 0.0, 0.0, 0.2});
  const double s_const = ssim(Vector(16, 1.0), Vector(16, 0.0));
  std::mt19937_64 rng(9);
  const Vector x = oracle::random_vector(64, rng);
  const double n0 = nmse(x, x);
  const bool inf_ok = std::isinf(psnr(x, x)) && ssim(x, x) == 1.0;
  const double secs = since(t0);
  const bool ok = std::abs(p20 - 20.0) < 1e-12 && std::abs(s_const - 1e-4 / 1.0001) < 1e-16 && n0 == 0.0 &&
                  inf_ok && secs < 1.0;
  return {ok, "psnr " + fmt("%.15g", p20) + " dB, constant-pair ssim " + fmt("%.6e", s_const) + ", nmse(x,x) " +
                  fmt("%g", n0) + ", identical-image psnr/ssim " + (inf_ok ? "inf/1" : "wrong")};
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(CDSDMM_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / ("cdsdmm_accept_" + std::to_string(std::random_device{}()));
  fs::create_directories(root);
  {
    std::ofstream cfg(root / "sweep.cfg");
    cfg << "rows = 64\ncols = 64\nalpha = 0.1\nmu = 0.01\nbeta = 0.3\n"
           "sweep_ratios = 0.3, 0.6\nsweep_p = 1, 1.5\nmax_iters = 150\n";
  }
  const std::string base = "sweep --config " + (root / "sweep.cfg").string() + " --seed 2718 --out ";
  const int rc1 = run_cli(base + (root / "a").string());
  const int rc2 = run_cli(base + (root / "b").string());
  int compared = 0;
  int differing = 0;
  if (rc1 == 0 && rc2 == 0) {
    for (const auto& entry : fs::directory_iterator(root / "a")) {
      const std::string name = entry.path().filename().string();
      if (name == "sweep_timing.csv") continue;  // wall-clock seconds
      ++compared;
      if (!fs::exists(root / "b" / name) || slurp(entry.path()) != slurp(root / "b" / name)) ++differing;
    }
  }
  std::error_code ec;
  fs::remove_all(root, ec);
  return {rc1 == 0 && rc2 == 0 && compared >= 9 && differing == 0,
          "exit codes " + std::to_string(rc1) + "/" + std::to_string(rc2) + ", " + std::to_string(compared) +
              " files compared, " + std::to_string(differing) + " differ"};
}

struct Criterion {
  const char* name;
  std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {"prox oracle", prox_oracle},
      {"x-update oracle", x_update_oracle},
      {"v3 equivalence", v3_equivalence},
      {"degenerate end-to-end", degenerate_end_to_end},
      {"deep-convergence self-consistency", deep_convergence},
      {"CS-ratio trend", trend},
      {"orthogonal vs non-orthogonal gap", gaussian_gap},
      {"operator algebra", operator_algebra},
      {"metric unit checks", metric_checks},
      {"sweep determinism", determinism},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
  if (which.empty()) {
    for (int i = 1; i <= static_cast<int>(criteria().size()); ++i) which.push_back(i);
  }
  int failed = 0;
  for (int id : which) {
    if (id < 1 || id > static_cast<int>(criteria().size())) {
      std::fprintf(stderr, "no criterion %d\n", id);
      return 2;
    }
    const Criterion& c = criteria()[static_cast<std::size_t>(id - 1)];
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %2d %-36s %s  %s\n", id, c.name, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
