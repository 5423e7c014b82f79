// matrixhear: recover symmetric matrices from the spectra of their minors.

#include "matrixhear/banded.hpp"
#include "matrixhear/cauchy.hpp"
#include "matrixhear/errors.hpp"
#include "matrixhear/io.hpp"
#include "matrixhear/oracle.hpp"
#include "matrixhear/sliding.hpp"
#include "matrixhear/spectral.hpp"
#include "matrixhear/telescopic.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

namespace {

using namespace mhear;
using json = nlohmann::json;

constexpr int kReportVersion = 1;

enum Exit : int {
  kOk = 0,
  kGeneric = 1,
  kUsage = 2,
  kParse = 3,
  kNotRegular = 4,
  kNoSolution = 5,
  kAmbiguous = 6,
  kInconsistent = 7,
  kGauge = 8,
  kMismatch = 9,
  kNumerical = 10,
};

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::ParseError: return kParse;
    case ErrorKind::NotRegular: return kNotRegular;
    case ErrorKind::NoSolution:
    case ErrorKind::NoIntersection: return kNoSolution;
    case ErrorKind::Ambiguous: return kAmbiguous;
    case ErrorKind::Inconsistent:
    case ErrorKind::NotInterlacing:
    case ErrorKind::MultiBlock:
    case ErrorKind::CaseMismatch:
    case ErrorKind::InconsistentSharedValue: return kInconsistent;
    case ErrorKind::GaugeAmbiguous: return kGauge;
    case ErrorKind::InvalidArgument:
    case ErrorKind::BadWindow:
    case ErrorKind::NotPentaStep:
    case ErrorKind::TooLarge: return kUsage;
    case ErrorKind::NonConvergence:
    case ErrorKind::ZeroSpectrum:
    case ErrorKind::IllConditioned:
    case ErrorKind::DegenerateM2:
    case ErrorKind::CannotSatisfyMargin: return kNumerical;
  }
  return kGeneric;
}

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("matrixhear");
  logger->set_pattern("%^[%l]%$ %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* lv = std::getenv("MATRIXHEAR_LOG")) spdlog::set_level(spdlog::level::from_str(lv));
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    io::write_text(path, text);
  }
}

std::string matrix_text(const SymmetricMatrix& a) {
  std::ostringstream out;
  io::write_matrix(out, a);
  return out.str();
}

json matrix_json(const SymmetricMatrix& a) {
  json rows = json::array();
  const Matrix d = a.dense();
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < d.cols(); ++j) row.push_back(d(i, j));
    rows.push_back(row);
  }
  return rows;
}

std::size_t band_of(const SymmetricMatrix& a) { return a.bandwidth().value_or(a.actual_bandwidth()); }

// ---- extract ----------------------------------------------------------

struct ExtractArgs {
  std::string input, output = "-", signs;
  std::optional<std::size_t> window, d;
  std::string gauge = "last-entry-positive";
  int precision = 17;
};

int cmd_extract(const ExtractArgs& args) {
  const SymmetricMatrix a = io::read_matrix_file(args.input);
  const Gauge gauge = gauge_from_string(args.gauge);
  const std::size_t d = args.d.value_or(band_of(a));
  spdlog::info("extract: n={} d={}", a.size(), d);
  io::SignsFile signs;
  signs.gauge = gauge;
  if (args.window) {
    const SlidingSpectralData sd = extract_sliding(a, d, *args.window);
    emit(args.output, io::spectra_to_json(sd, args.precision));
    if (!args.signs.empty()) {
      signs.d = d;
      if (sd.scheme == SlidingScheme::Minimal) {
        signs.sliding = extract_sliding_signs(a, d);
      } else {
        signs.columns = extract_column_signs(a, d);
      }
      io::write_text(args.signs, io::signs_to_json(signs));
    }
    return kOk;
  }
  emit(args.output, io::spectra_to_json(extract_spectral_data(a), args.precision));
  if (!args.signs.empty()) {
    signs.nested = extract_sign_indicators(a, gauge);
    if (d + 1 < a.size()) {
      signs.d = d;
      signs.columns = extract_column_signs(a, d);
    }
    io::write_text(args.signs, io::signs_to_json(signs));
  }
  return kOk;
}

// ---- reconstruct ------------------------------------------------------

struct ReconstructArgs {
  std::string input, output = "-", signs, column_signs, report;
  std::string method = "telescopic";
  std::optional<std::size_t> d;
  std::optional<double> eps;
  double tol = 1e-8;
};

class Report {
 public:
  explicit Report(const std::string& path) {
    if (!path.empty()) out_.open(path);
  }
  void line(const json& j) {
    if (out_.is_open()) out_ << j.dump() << '\n';
  }

 private:
  std::ofstream out_;
};

void report_steps(Report& rep, const std::vector<StepReport>& steps) {
  for (const StepReport& s : steps)
    rep.line({{"type", "step"},
              {"n", s.n},
              {"method", s.method},
              {"candidates", s.candidates},
              {"degeneracy", to_string(s.degeneracy)},
              {"near_regular", s.near_regular},
              {"alpha_condition", s.alpha_condition},
              {"penta_degenerate", s.penta_degenerate},
              {"spectrum_residual", s.spectrum_residual}});
}

SignVector column_signs_for(const ReconstructArgs& args, const std::optional<io::SignsFile>& sf) {
  if (!args.column_signs.empty()) return io::parse_sign_list(args.column_signs);
  if (sf && sf->columns) return *sf->columns;
  fail(ErrorKind::InvalidArgument, "method '" + args.method + "' needs --column-signs or a signs file with columns");
}

std::size_t band_for(const ReconstructArgs& args, const std::optional<io::SignsFile>& sf) {
  if (args.d) return *args.d;
  if (sf && sf->d) return *sf->d;
  fail(ErrorKind::InvalidArgument, "method '" + args.method + "' needs --d");
}

Reconstruction run_reconstruct(const ReconstructArgs& args, const io::AnySpectra& spectra,
                               const std::optional<io::SignsFile>& sf) {
  const std::string& m = args.method;
  if (m == "sliding-minimal" || m == "sliding-optimal") {
    const auto* sd = std::get_if<SlidingSpectralData>(&spectra);
    if (!sd) fail(ErrorKind::InvalidArgument, "method '" + m + "' needs sliding spectra");
    if (m == "sliding-minimal") {
      if (!sf || !sf->sliding) fail(ErrorKind::InvalidArgument, "sliding-minimal needs a signs file with window signs");
      return reconstruct_sliding_minimal(*sd, *sf->sliding);
    }
    const SignVector cols = column_signs_for(args, sf);
    if (cols.size() + 1 != sd->n) fail(ErrorKind::InvalidArgument, "need N-1 column signs");
    OptimalSigns os;
    os.head_columns.assign(cols.begin(), cols.begin() + static_cast<std::ptrdiff_t>(sd->d));
    os.windows.assign(cols.begin() + static_cast<std::ptrdiff_t>(sd->d), cols.end());
    BandedOptions bo;
    bo.eps = args.eps;
    return reconstruct_sliding_optimal(*sd, os, bo);
  }
  const auto* sd = std::get_if<SpectralData>(&spectra);
  if (!sd) fail(ErrorKind::InvalidArgument, "method '" + m + "' needs nested spectra");
  if (m == "telescopic") {
    if (!sf || !sf->nested) fail(ErrorKind::InvalidArgument, "telescopic needs a signs file with nested indicators");
    ReconstructOptions ro;
    ro.degeneracy_tol = args.tol;
    return reconstruct_full(*sd, *sf->nested, ro);
  }
  BandedOptions bo;
  bo.eps = args.eps;
  if (m == "penta-lines") {
    bo.method = BandedMethod::PentaLines;
  } else if (m == "penta-conics") {
    bo.method = BandedMethod::PentaConics;
  } else if (m != "banded") {
    fail(ErrorKind::InvalidArgument, "unknown method '" + m + "'");
  }
  const std::size_t d = bo.method == BandedMethod::Search ? band_for(args, sf) : 2;
  return reconstruct_banded(*sd, d, column_signs_for(args, sf), bo);
}

int cmd_reconstruct(const ReconstructArgs& args) {
  Report rep(args.report);
  rep.line({{"type", "header"}, {"schema", "matrixhear-report"}, {"version", kReportVersion}, {"method", args.method}});
  try {
    const io::AnySpectra spectra = io::read_spectra_file(args.input);
    std::optional<io::SignsFile> sf;
    if (!args.signs.empty()) sf = io::read_signs_file(args.signs);
    const Reconstruction r = run_reconstruct(args, spectra, sf);
    report_steps(rep, r.steps);
    double worst = 0;
    for (const auto& s : r.steps) worst = std::max(worst, s.spectrum_residual);
    spdlog::info("reconstruct: {} steps, worst spectrum residual {:.3g}", r.steps.size(), worst);
    emit(args.output, matrix_text(r.matrix));
    rep.line({{"type", "summary"}, {"status", "ok"}, {"n", r.matrix.size()}, {"max_spectrum_residual", worst}});
    return kOk;
  } catch (const AmbiguousError& e) {
    for (std::size_t i = 0; i < e.branches().size(); ++i)
      rep.line({{"type", "branch"}, {"index", i}, {"matrix", matrix_json(e.branches()[i])}});
    rep.line({{"type", "summary"}, {"status", "error"}, {"error", to_string(e.kind())}, {"message", e.what()},
              {"branches", e.branches().size()}});
    throw;
  } catch (const Error& e) {
    rep.line({{"type", "summary"}, {"status", "error"}, {"error", to_string(e.kind())}, {"message", e.what()}});
    throw;
  }
}

// ---- verify -----------------------------------------------------------

struct VerifyArgs {
  std::vector<std::string> files;
  double tol = 1e-8;
  unsigned jobs = 1;
};

double max_spectrum_diff(const std::vector<Spectrum>& a, const std::vector<Spectrum>& b) {
  if (a.size() != b.size()) return HUGE_VAL;
  double worst = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k].size() != b[k].size()) return HUGE_VAL;
    for (std::size_t i = 0; i < a[k].size(); ++i) worst = std::max(worst, std::abs(a[k][i] - b[k][i]));
  }
  return worst;
}

// Max deviation between the spectra of a matrix and a spectral file.
double verify_pair(const std::string& matrix, const std::string& spectra) {
  const SymmetricMatrix a = io::read_matrix_file(matrix);
  const io::AnySpectra want = io::read_spectra_file(spectra);
  if (const auto* sd = std::get_if<SpectralData>(&want))
    return max_spectrum_diff(extract_spectral_data(a).spectra(), sd->spectra());
  const auto& sl = std::get<SlidingSpectralData>(want);
  if (sl.n != a.size()) return HUGE_VAL;
  const SlidingSpectralData got = extract_sliding(a, sl.d, sl.window_size());
  return std::max(max_spectrum_diff(got.head, sl.head), max_spectrum_diff(got.windows, sl.windows));
}

int cmd_verify(const VerifyArgs& args) {
  if (args.files.size() % 2 != 0) fail(ErrorKind::InvalidArgument, "verify takes MATRIX SPECTRA pairs");
  const std::size_t pairs = args.files.size() / 2;
  std::vector<double> result(pairs, 0.0);
  std::vector<std::string> errors(pairs);
  std::vector<int> codes(pairs, kOk);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < pairs; i = next++) {
      try {
        result[i] = verify_pair(args.files[2 * i], args.files[2 * i + 1]);
      } catch (const Error& e) {
        errors[i] = e.what();
        codes[i] = exit_code(e.kind());
      }
    }
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(args.jobs, static_cast<unsigned>(pairs)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  int code = kOk;
  for (std::size_t i = 0; i < pairs; ++i) {
    const std::string& m = args.files[2 * i];
    const std::string& s = args.files[2 * i + 1];
    if (!errors[i].empty()) {
      std::cout << "ERROR " << m << ' ' << s << ": " << errors[i] << '\n';
      if (code == kOk) code = codes[i];
    } else if (result[i] <= args.tol) {
      std::printf("OK %s %s %.3e\n", m.c_str(), s.c_str(), result[i]);
    } else {
      std::printf("MISMATCH %s %s %.3e\n", m.c_str(), s.c_str(), result[i]);
      if (code == kOk) code = kMismatch;
    }
  }
  return code;
}

// ---- trace-curves -----------------------------------------------------

struct TraceArgs {
  std::string input, output = "-";
  std::size_t step = 0;
  int samples = 361;
};

int cmd_trace_curves(const TraceArgs& args) {
  const SymmetricMatrix a = io::read_matrix_file(args.input);
  const std::size_t n = args.step;
  if (a.actual_bandwidth() > 2) fail(ErrorKind::NotPentaStep, "matrix is not pentadiagonal");
  if (n < 2 || n >= a.size()) fail(ErrorKind::NotPentaStep, "step must satisfy 2 <= n < N");
  const SpectralData sd = extract_spectral_data(a);
  const EigDecomp eig = eig_sym(a.leading_minor(n));
  const StepScalars sc = step_scalars(sd.minor(n), sd.minor(n + 1));
  const ConicStep cs = conic_forms(a.leading_minor(n), sc);
  std::vector<double> xi = xi_squared(sd.minor(n), sd.minor(n + 1));
  for (double& v : xi) v = std::sqrt(v);
  const double R = std::sqrt(sc.R2);
  const int S = std::max(args.samples, 8);

  std::ostringstream out;
  char buf[160];
  auto row = [&](const std::string& id, double t, double x, double y) {
    std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g\n", id.c_str(), t, x, y);
    out << buf;
  };
  out << "curve_id,t,x,y\n";
  for (int k = 0; k < S; ++k) {
    const double t = 2 * std::numbers::pi * k / S;
    row("circle", t, R * std::cos(t), R * std::sin(t));
  }
  for (std::size_t r = 0; r < n; ++r) {
    const double p = eig.vectors(static_cast<Eigen::Index>(n - 2), static_cast<Eigen::Index>(r));
    const double q = eig.vectors(static_cast<Eigen::Index>(n - 1), static_cast<Eigen::Index>(r));
    const double w2 = p * p + q * q;
    for (int side : {1, -1}) {
      const std::string id = "line_r" + std::to_string(r + 1) + (side > 0 ? "_plus" : "_minus");
      if (w2 < 1e-24) continue;
      const double c = side * xi[r];
      const double fx = c * p / w2, fy = c * q / w2;
      const double dx = -q / std::sqrt(w2), dy = p / std::sqrt(w2);
      for (int k = 0; k < S; ++k) {
        const double t = -1.5 * R + 3.0 * R * k / (S - 1);
        row(id, t, fx + t * dx, fy + t * dy);
      }
    }
  }
  for (const auto& [id, c] : {std::pair<std::string, Conic>{"conic1", cs.conic1}, {"conic2", cs.conic2}}) {
    for (int k = 0; k < S; ++k) {
      const double t = 2 * std::numbers::pi * k / S;
      const double q = c.eval(std::cos(t), std::sin(t));
      if (q == 0 || c.rho / q <= 0) continue;
      const double rr = std::sqrt(c.rho / q);
      row(id, t, rr * std::cos(t), rr * std::sin(t));
    }
  }
  const CandidateSet cand = penta_lines_step(eig, sd.minor(n + 1));
  for (std::size_t k = 0; k < cand.size(); ++k) {
    const Vector& col = cand.candidates[k].column;
    row("candidate", static_cast<double>(k), col(static_cast<Eigen::Index>(n - 2)),
        col(static_cast<Eigen::Index>(n - 1)));
  }
  emit(args.output, out.str());
  return kOk;
}

// ---- bench-alpha ------------------------------------------------------

struct BenchArgs {
  std::size_t count = 1000, n = 8;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
};

int cmd_bench_alpha(const BenchArgs& args) {
  if (args.n < 4) fail(ErrorKind::InvalidArgument, "--n must be at least 4");
  std::atomic<std::size_t> next{0}, hits{0}, steps{0}, extra{0};
  std::mutex err_mu;
  std::string first_error;
  auto worker = [&] {
    for (std::size_t i = next++; i < args.count; i = next++) {
      try {
        const SymmetricMatrix a = gen_random_banded({args.n, 2, args.seed + i});
        const SpectralData sd = extract_spectral_data(a);
        for (std::size_t k = 3; k < args.n; ++k) {
          const EigDecomp e = eig_sym(a.leading_minor(k));
          ++steps;
          if (alpha_condition(e)) ++hits;
          if (banded_step(e, sd.minor(k + 1), 2).size() != 2) ++extra;
        }
      } catch (const Error& e) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (first_error.empty()) first_error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < std::max(1u, args.jobs); ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (!first_error.empty()) spdlog::warn("bench-alpha: {}", first_error);
  const json j{{"count", args.count}, {"n", args.n},           {"seed", args.seed},
               {"steps", steps.load()}, {"alpha_hits", hits.load()}, {"non_generic_steps", extra.load()}};
  std::cout << j.dump() << '\n';
  return first_error.empty() ? kOk : kNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Reconstruct symmetric matrices from the spectra of their minors"};
  app.require_subcommand(1);

  ExtractArgs ex;
  auto* extract = app.add_subcommand("extract", "Write the spectral data (and signs) of a matrix file");
  extract->add_option("input", ex.input, "matrix file")->required()->check(CLI::ExistingFile);
  extract->add_option("-o,--output", ex.output, "spectral file (default stdout)");
  extract->add_option("--signs", ex.signs, "also write a signs file");
  extract->add_option("--window", ex.window, "sliding window size, d+1 or d+2");
  extract->add_option("--d", ex.d, "bandwidth (default: from the matrix file)");
  extract->add_option("--gauge", ex.gauge, "eigenvector gauge")
      ->check(CLI::IsMember({"last-entry-positive", "first-nonzero-positive"}));
  extract->add_option("--precision", ex.precision, "significant digits")->check(CLI::Range(1, 17));

  ReconstructArgs re;
  auto* reconstruct = app.add_subcommand("reconstruct", "Rebuild a matrix from spectral data");
  reconstruct->add_option("input", re.input, "spectral file")->required()->check(CLI::ExistingFile);
  reconstruct->add_option("-o,--output", re.output, "matrix file (default stdout)");
  reconstruct->add_option("--method", re.method, "reconstruction method")
      ->check(CLI::IsMember(
          {"telescopic", "banded", "penta-lines", "penta-conics", "sliding-minimal", "sliding-optimal"}));
  reconstruct->add_option("--signs", re.signs, "signs file");
  reconstruct->add_option("--column-signs", re.column_signs, "N-1 column signs, e.g. +,-,+");
  reconstruct->add_option("--d", re.d, "bandwidth");
  reconstruct->add_option("--eps", re.eps, "band residual threshold");
  reconstruct->add_option("--tol", re.tol, "degeneracy tolerance (relative)");
  reconstruct->add_option("--report", re.report, "JSON-lines report file");

  VerifyArgs ve;
  auto* verify = app.add_subcommand("verify", "Check MATRIX SPECTRA pairs");
  verify->add_option("files", ve.files, "MATRIX SPECTRA [MATRIX SPECTRA ...]")->required();
  verify->add_option("--tol", ve.tol, "absolute tolerance");
  verify->add_option("--jobs", ve.jobs, "worker threads")->check(CLI::PositiveNumber);

  TraceArgs tr;
  auto* trace = app.add_subcommand("trace-curves", "Sample the circle, lines and conics of a pentadiagonal step");
  trace->add_option("input", tr.input, "pentadiagonal matrix file")->required()->check(CLI::ExistingFile);
  trace->add_option("--step", tr.step, "step n (builds A^(n+1) from A^(n))")->required();
  trace->add_option("-o,--output", tr.output, "CSV file (default stdout)");
  trace->add_option("--samples", tr.samples, "samples per curve");

  BenchArgs be;
  auto* bench = app.add_subcommand("bench-alpha", "Count alpha-condition hits on random pentadiagonal matrices");
  bench->add_option("--count", be.count, "number of matrices");
  bench->add_option("--n", be.n, "matrix size");
  bench->add_option("--seed", be.seed, "first seed");
  bench->add_option("--jobs", be.jobs, "worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*extract) return cmd_extract(ex);
    if (*reconstruct) return cmd_reconstruct(re);
    if (*verify) return cmd_verify(ve);
    if (*trace) return cmd_trace_curves(tr);
    if (*bench) return cmd_bench_alpha(be);
  } catch (const ParseError& e) {
    spdlog::error("{}", e.what());
    return kParse;
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kGeneric;
  }
  return kUsage;
}
