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

#include "pipeline.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include "cdsdmm/cdm_io.hpp"
#include "cdsdmm/prox.hpp"
#include "cdsdmm/rng.hpp"

namespace cdsdmm::harness {
namespace fs = std::filesystem;

namespace {

fs::path in_or(const std::optional<fs::path>& given, const RunConfig& config, const char* name) {
  return given ? *given : config.output / name;
}

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::trunc) {
  std::ofstream out(path, std::ios::out | mode);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

void ensure_output(const RunConfig& config) {
  std::error_code ec;
  fs::create_directories(config.output, ec);
  if (ec) throw IoError("cannot create output directory " + config.output.string() + ": " + ec.message());
}

std::string cell_tag(double cs_ratio, double p) {
  return "r" + format_double(cs_ratio) + "_p" + format_double(p);
}

std::string csv_safe(std::string s) {
  for (char& ch : s) {
    if (ch == ',' || ch == '\n' || ch == '\r') ch = ';';
  }
  return s;
}

}  // namespace

void write_operator_record(const fs::path& path, const OperatorRecord& rec) {
  std::ofstream out = open_out(path);
  out << "kind " << to_string(rec.kind) << "\n"
      << "seed " << rec.seed << "\n"
      << "rows " << rec.rows << "\n"
      << "cols " << rec.cols << "\n"
      << "m " << rec.m << "\n"
      << "srm_base " << to_string(rec.srm.base) << "\n"
      << "srm_sign_flip " << (rec.srm.randomize_signs ? 1 : 0) << "\n";
  if (!out) throw IoError("failed writing " + path.string());
}

OperatorRecord read_operator_record(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read operator record " + path.string());
  OperatorRecord rec;
  std::string key;
  std::string value;
  int found = 0;
  while (in >> key >> value) {
    ++found;
    if (key == "kind") {
      rec.kind = parse_measurement_kind(value);
    } else if (key == "seed") {
      rec.seed = std::stoull(value);
    } else if (key == "rows") {
      rec.rows = std::stoull(value);
    } else if (key == "cols") {
      rec.cols = std::stoull(value);
    } else if (key == "m") {
      rec.m = std::stoull(value);
    } else if (key == "srm_base") {
      rec.srm.base = parse_srm_base(value);
    } else if (key == "srm_sign_flip") {
      rec.srm.randomize_signs = value == "1";
    } else {
      throw IoError("unknown field '" + key + "' in operator record " + path.string());
    }
  }
  if (found != 7) throw IoError("incomplete operator record " + path.string());
  return rec;
}

MeasurementOperator rebuild_operator(const OperatorRecord& rec) {
  const std::size_t n = rec.rows * rec.cols;
  switch (rec.kind) {
    case MeasurementKind::kSrm:
      return build_srm(rec.seed, n, rec.m, rec.srm);
    case MeasurementKind::kGaussian:
      return build_gaussian(rec.seed, n, rec.m);
    case MeasurementKind::kDense:
      break;
  }
  throw IoError("operator record names a kind that cannot be replayed");
}

Image make_psf(const RunConfig& config) {
  return config.psf_kind == PsfKind::kIdentity ? identity_psf() : synthesize_psf(config.psf);
}

PhantomData make_phantom(const RunConfig& config) {
  PhantomSpec spec = config.phantom;
  spec.seed = config.seed;
  return generate_phantom(spec, make_psf(config));
}

Compressed compress(const RunConfig& config, const Image& rf, double cs_ratio) {
  OperatorRecord rec;
  rec.kind = config.matrix;
  rec.seed = derive_seed(config.seed, SeedStream::kMatrix);
  rec.rows = rf.rows();
  rec.cols = rf.cols();
  rec.m = measurement_count(cs_ratio, rf.size());
  rec.srm = config.srm;
  MeasurementOperator phi = rebuild_operator(rec);
  Vector y = add_noise_snr(phi.measure(rf.span()), config.snr_db,
                           derive_seed(config.seed, SeedStream::kNoise));
  return Compressed{rec, std::move(phi), std::move(y)};
}

Problem make_problem(const RunConfig& config, const Image& psf, const MeasurementOperator& phi,
                     Vector y, double p) {
  if (!config.alpha) throw ConfigError("alpha must be set in the config to reconstruct");
  if (!config.mu) throw ConfigError("mu must be set in the config to reconstruct");
  const std::size_t rows = config.phantom.rows;
  const std::size_t cols = config.phantom.cols;
  if (phi.n() != rows * cols) {
    throw DimensionError("measurement operator does not match the configured grid");
  }
  const int levels = config.wavelet == WaveletFamily::kIdentity ? 1 : config.wavelet_levels;
  return Problem{build_convolution(psf, rows, cols),
                 SparsifyingTransform(config.wavelet, levels, rows, cols),
                 phi,
                 std::move(y),
                 *config.alpha,
                 *config.mu,
                 p};
}

MetricReport evaluate(const RunConfig& config, const Image& trf, const Image& xhat) {
  if (!trf.same_shape(xhat)) throw DimensionError("TRF and reconstruction differ in size");
  MetricReport r;
  r.psnr_db = psnr(trf, xhat);
  r.ssim = ssim(rescale_unit(trf), rescale_unit(xhat));
  r.nmse = nmse(trf, xhat);
  if (config.cnr_region1 && config.cnr_region2) {
    r.cnr = cnr(envelope(xhat), *config.cnr_region1, *config.cnr_region2);
  }
  r.cs_ratio = config.cs_ratio;
  r.p = config.p;
  r.alpha = config.alpha.value_or(0.0);
  r.mu = config.mu.value_or(0.0);
  r.beta = config.solver.beta;
  return r;
}

void write_trace_csv(const fs::path& path, const std::vector<TraceEntry>& trace) {
  std::ofstream out = open_out(path);
  out << "iter,objective,rel_change,nmse,seconds\n";
  for (const TraceEntry& t : trace) {
    out << t.iter << ',' << format_double(t.objective) << ',' << format_double(t.rel_change) << ','
        << (t.nmse ? format_double(*t.nmse) : "") << ',' << format_double(t.seconds) << '\n';
  }
  if (!out) throw IoError("failed writing " + path.string());
}

// Wall-clock time is kept out of the sweep table so reruns compare equal;
// it goes to sweep_timing.csv instead.
std::string sweep_csv_header() {
  return "cs_ratio,p,psnr_db,ssim,nmse,cnr,alpha,mu,beta,iterations,converged,status";
}

std::string sweep_csv_row(const SweepCell& c) {
  std::ostringstream row;
  row << format_double(c.cs_ratio) << ',' << format_double(c.p) << ',';
  if (c.report) {
    const MetricReport& r = *c.report;
    row << format_double(r.psnr_db) << ',' << format_double(r.ssim) << ',' << format_double(r.nmse)
        << ',' << (r.cnr ? format_double(*r.cnr) : "") << ',' << format_double(r.alpha) << ','
        << format_double(r.mu) << ',' << format_double(r.beta) << ',' << r.iterations << ',';
  } else {
    row << ",,,,,,,,";
  }
  row << (c.converged ? 1 : 0) << ',' << csv_safe(c.status);
  return row.str();
}

void cmd_phantom(const RunConfig& config) {
  ensure_output(config);
  const PhantomData d = make_phantom(config);
  write_cdm(config.output / "mask.cdm", d.mask);
  write_cdm(config.output / "trf.cdm", d.trf);
  write_cdm(config.output / "psf.cdm", d.psf);
  write_cdm(config.output / "rf.cdm", d.rf);
}

void cmd_compress(const RunConfig& config, const Paths& paths) {
  ensure_output(config);
  const Image rf = read_cdm(in_or(paths.rf, config, "rf.cdm"));
  if (rf.rows() != config.phantom.rows || rf.cols() != config.phantom.cols) {
    throw DimensionError("RF image size differs from the configured grid");
  }
  const Compressed c = compress(config, rf, config.cs_ratio);
  write_cdm(config.output / "y.cdm", as_column(c.y));
  write_operator_record(config.output / "operator.txt", c.record);
}

SolveResult cmd_reconstruct(const RunConfig& config, const Paths& paths) {
  ensure_output(config);
  const OperatorRecord rec = read_operator_record(config.output / "operator.txt");
  if (rec.rows != config.phantom.rows || rec.cols != config.phantom.cols) {
    throw DimensionError("operator record grid differs from the configured grid");
  }
  const Image y = read_cdm(in_or(paths.y, config, "y.cdm"));
  if (y.cols() != 1 || y.rows() != rec.m) throw DimensionError("measurement file does not match the operator record");
  const Image psf = read_cdm(in_or(paths.psf, config, "psf.cdm"));
  std::optional<Image> truth;
  if (paths.truth) truth = read_cdm(*paths.truth);

  const Problem problem = make_problem(config, psf, rebuild_operator(rec), y.data(), config.p);
  SolveResult res = solve(problem, config.solver, std::nullopt, truth);
  write_cdm(config.output / "xhat.cdm", res.x);
  write_trace_csv(config.output / "trace.csv", res.trace);
  write_pgm(config.output / "bmode.pgm", envelope_bmode(res.x, config.dynamic_range_db));
  return res;
}

MetricReport cmd_evaluate(const RunConfig& config, const Paths& paths) {
  ensure_output(config);
  const Image trf = read_cdm(in_or(paths.trf, config, "trf.cdm"));
  const Image xhat = read_cdm(in_or(paths.xhat, config, "xhat.cdm"));
  MetricReport r = evaluate(config, trf, xhat);

  // Run statistics come from the trace written by reconstruct, when present.
  if (std::ifstream trace(config.output / "trace.csv"); trace) {
    std::string line;
    std::string last;
    int rows = -1;
    while (std::getline(trace, line)) {
      if (line.empty()) continue;
      ++rows;
      last = line;
    }
    if (rows > 0) {
      r.iterations = rows;
      r.seconds = std::stod(last.substr(last.rfind(',') + 1));
    }
  }

  const fs::path csv = config.output / "metrics.csv";
  const bool fresh = !fs::exists(csv);
  std::ofstream out = open_out(csv, std::ios::app);
  if (fresh) out << metric_csv_header() << '\n';
  out << metric_csv_row(r) << '\n';
  if (!out) throw IoError("failed writing " + csv.string());
  return r;
}

std::vector<SweepCell> cmd_sweep(const RunConfig& config) {
  if (!config.alpha || !config.mu) throw ConfigError("alpha and mu must be set in the config to sweep");
  ensure_output(config);
  const PhantomData d = make_phantom(config);
  write_cdm(config.output / "mask.cdm", d.mask);
  write_cdm(config.output / "trf.cdm", d.trf);
  write_cdm(config.output / "psf.cdm", d.psf);
  write_cdm(config.output / "rf.cdm", d.rf);

  std::ofstream table = open_out(config.output / "sweep.csv");
  std::ofstream timing = open_out(config.output / "sweep_timing.csv");
  table << sweep_csv_header() << '\n';
  timing << "cs_ratio,p,seconds\n";

  std::vector<SweepCell> cells;
  for (double ratio : config.sweep_ratios) {
    for (double p : config.sweep_p) {
      SweepCell cell;
      cell.cs_ratio = ratio;
      cell.p = p;
      double seconds = 0.0;
      try {
        const auto start = std::chrono::steady_clock::now();
        Compressed c = compress(config, d.rf, ratio);
        RunConfig cell_config = config;
        cell_config.cs_ratio = ratio;
        cell_config.p = p;
        cell_config.solver.record_objective = false;
        const Problem problem = make_problem(cell_config, d.psf, c.phi, std::move(c.y), p);
        const SolveResult res = solve(problem, cell_config.solver);
        seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        write_cdm(config.output / ("xhat_" + cell_tag(ratio, p) + ".cdm"), res.x);
        MetricReport r = evaluate(cell_config, d.trf, res.x);
        r.iterations = res.iterations;
        r.seconds = seconds;
        cell.report = r;
        cell.converged = res.converged;
      } catch (const ConfigError&) {
        throw;
      } catch (const Error& e) {
        cell.status = std::string("error: ") + e.what();
      }
      table << sweep_csv_row(cell) << '\n';
      timing << format_double(ratio) << ',' << format_double(p) << ',' << format_double(seconds) << '\n';
      cells.push_back(std::move(cell));
    }
  }
  if (!table || !timing) throw IoError("failed writing sweep tables in " + config.output.string());
  return cells;
}

void cmd_prox_curve(const RunConfig& config) {
  ensure_output(config);
  std::ofstream out = open_out(config.output / "prox_curve.csv");
  out << "x,p,k,prox\n";
  for (double p : config.prox_p) {
    for (int i = 0; i < config.prox_points; ++i) {
      const double x = -config.prox_xmax + 2.0 * config.prox_xmax * i / (config.prox_points - 1);
      out << format_double(x) << ',' << format_double(p) << ',' << format_double(config.prox_k) << ','
          << format_double(prox_lp_scalar(x, ProxParams{config.prox_k, p})) << '\n';
    }
  }
  if (!out) throw IoError("failed writing prox_curve.csv");
}

}  // namespace cdsdmm::harness
