#include "matrixhear/banded.hpp"

#include "matrixhear/cauchy.hpp"
#include "matrixhear/errors.hpp"
#include "matrixhear/spectral.hpp"
#include "matrixhear/telescopic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace mhear {

namespace {

using Index = Eigen::Index;
Index ix(std::size_t i) { return static_cast<Index>(i); }

std::vector<double> xi_of(const Spectrum& sn, const Spectrum& snp1) {
  std::vector<double> xi = xi_squared(sn, snp1);
  for (double& v : xi) v = std::sqrt(v);
  return xi;
}

double sum_sq(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return s;
}

void finish(CandidateSet& set) {
  dedup(set);
  set.too_many = set.size() > 2;
}

CandidateSet all_sign_vectors(const Matrix& V, const std::vector<double>& xi, std::size_t d) {
  const std::size_t n = xi.size();
  if (n > 20) fail(ErrorKind::TooLarge, "2^n enumeration too large");
  CandidateSet set;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    SignVector s(n);
    for (std::size_t r = 0; r < n; ++r) s[r] = (mask >> (n - 1 - r)) & 1 ? -1 : 1;
    Vector a = assemble_column(V, xi, s);
    const double res = band_residual(a, d);
    set.candidates.push_back({std::move(a), std::move(s), res});
  }
  return set;
}

struct Search {
  const Matrix& V;
  const std::vector<double>& xi;
  std::size_t d;
  double eps;
  std::size_t L;
  std::vector<std::size_t> order;
  Matrix y;                           // L x n, columns in search order
  std::vector<double> rem_norm;       // rem_norm[j] = sum_{t>=j} |y_t|
  Matrix rem_abs;                     // L x (n+1), per-coordinate tails
  double bound;
  SignVector s;
  CandidateSet out;

  void run(std::size_t j, const Vector& partial) {
    const std::size_t n = xi.size();
    if (j == n) {
      Vector a = assemble_column(V, xi, s);
      const double res = band_residual(a, d);
      if (res <= eps) out.candidates.push_back({std::move(a), s, res});
      return;
    }
    if (partial.norm() - rem_norm[j] > bound) return;
    for (Index i = 0; i < partial.size(); ++i)
      if (std::abs(partial(i)) - rem_abs(i, ix(j)) > bound) return;
    for (int sg : {1, -1}) {
      s[order[j]] = sg;
      run(j + 1, partial + sg * y.col(ix(j)));
    }
  }
};

struct CirclePoint {
  double x, y, cond;
};

// Points of the conic on the circle of radius sqrt(R2). nullopt: every point.
std::optional<std::vector<CirclePoint>> conic_on_circle(const Conic& c, double R2) {
  const double P = 0.5 * (c.alpha - c.gamma), Q = c.beta;
  const double T = c.rho / R2 - 0.5 * (c.alpha + c.gamma);
  const double amp = std::hypot(P, Q);
  const double size = std::abs(c.alpha) + std::abs(c.beta) + std::abs(c.gamma) + std::abs(c.rho / R2);
  std::vector<CirclePoint> pts;
  if (amp <= 1e-13 * size) {
    if (std::abs(T) <= 1e-10 * std::max(1.0, size)) return std::nullopt;
    return pts;
  }
  const double cosd = T / amp;
  if (std::abs(cosd) > 1.0 + 1e-9) return pts;
  const double delta = std::acos(std::clamp(cosd, -1.0, 1.0));
  const double phi0 = std::atan2(Q, P);
  const double r = std::sqrt(R2);
  const double cond = std::sin(delta);
  for (double phi : {phi0 + delta, phi0 - delta})
    for (double shift : {0.0, std::numbers::pi}) {
      const double t = 0.5 * phi + shift;
      pts.push_back({r * std::cos(t), r * std::sin(t), std::abs(cond)});
    }
  return pts;
}

Candidate penta_candidate(std::size_t n, double x, double y) {
  Candidate c;
  c.column = Vector::Zero(ix(n));
  c.column(ix(n - 2)) = x;
  c.column(ix(n - 1)) = y;
  return c;
}

}  // namespace

Vector assemble_column(const Matrix& vectors, std::span<const double> xi, std::span<const int> signs) {
  const Index n = vectors.rows();
  Vector a = Vector::Zero(n);
  for (std::size_t r = 0; r < xi.size(); ++r) {
    const double c = signs[r] * xi[r];
    for (Index i = 0; i < n; ++i) a(i) += c * vectors(i, ix(r));
  }
  return a;
}

double band_residual(const Vector& a, std::size_t d) {
  const auto n = static_cast<std::size_t>(a.size());
  double s = 0;
  for (std::size_t i = 0; i + d < n; ++i) s += a(ix(i)) * a(ix(i));
  return s;
}

double default_band_eps(std::size_t n, double R2) { return 1e-20 * std::max(1.0, static_cast<double>(n) * R2); }

void dedup(CandidateSet& set, double tol) {
  auto& c = set.candidates;
  std::stable_sort(c.begin(), c.end(), [](const Candidate& a, const Candidate& b) { return a.signs < b.signs; });
  std::vector<Candidate> kept;
  for (auto& cand : c) {
    bool dup = false;
    for (const auto& k : kept) {
      const double scale = std::max(1.0, k.column.cwiseAbs().maxCoeff());
      if ((cand.column - k.column).cwiseAbs().maxCoeff() <= tol * scale) {
        dup = true;
        break;
      }
    }
    if (!dup) kept.push_back(std::move(cand));
  }
  c = std::move(kept);
}

CandidateSet banded_candidates(const EigDecomp& eig_n, const Spectrum& snp1, std::size_t d, std::optional<double> eps) {
  const std::size_t n = eig_n.spectrum.size();
  if (n > 30) fail(ErrorKind::TooLarge, "banded step limited to n <= 30");
  const std::vector<double> xi = xi_of(eig_n.spectrum, snp1);
  if (n <= d) {
    CandidateSet set = all_sign_vectors(eig_n.vectors, xi, d);
    finish(set);
    return set;
  }
  const double e = eps.value_or(default_band_eps(n, sum_sq(xi)));
  const std::size_t L = n - d;
  Search S{eig_n.vectors, xi, d, e, L, {}, {}, {}, {}, 0, SignVector(n, 1), {}};
  S.order.resize(n);
  std::iota(S.order.begin(), S.order.end(), std::size_t{0});
  Matrix yfull(ix(L), ix(n));
  for (std::size_t r = 0; r < n; ++r) yfull.col(ix(r)) = xi[r] * eig_n.vectors.col(ix(r)).head(ix(L));
  std::stable_sort(S.order.begin(), S.order.end(),
                   [&](std::size_t a, std::size_t b) { return yfull.col(ix(a)).norm() > yfull.col(ix(b)).norm(); });
  S.y.resize(ix(L), ix(n));
  for (std::size_t j = 0; j < n; ++j) S.y.col(ix(j)) = yfull.col(ix(S.order[j]));
  S.rem_norm.assign(n + 1, 0.0);
  S.rem_abs = Matrix::Zero(ix(L), ix(n + 1));
  for (std::size_t j = n; j-- > 0;) {
    S.rem_norm[j] = S.rem_norm[j + 1] + S.y.col(ix(j)).norm();
    S.rem_abs.col(ix(j)) = S.rem_abs.col(ix(j + 1)) + S.y.col(ix(j)).cwiseAbs();
  }
  // Slack absorbs the difference between incremental and final summation.
  S.bound = std::sqrt(e) * (1.0 + 1e-9) + 1e-12 * S.rem_norm[0];
  S.run(0, Vector::Zero(ix(L)));
  CandidateSet set = std::move(S.out);
  finish(set);
  return set;
}

CandidateSet banded_step(const EigDecomp& eig_n, const Spectrum& snp1, std::size_t d, std::optional<double> eps) {
  CandidateSet set = banded_candidates(eig_n, snp1, d, eps);
  if (set.candidates.empty()) fail(ErrorKind::NoSolution, "no sign vector yields a banded column");
  return set;
}

CandidateSet penta_lines_step(const EigDecomp& eig_n, const Spectrum& snp1, double tol) {
  const std::size_t n = eig_n.spectrum.size();
  if (n < 2) fail(ErrorKind::NotPentaStep, "pentadiagonal step needs n >= 2");
  if (n == 2) return banded_candidates(eig_n, snp1, 2);
  const std::vector<double> xi = xi_of(eig_n.spectrum, snp1);
  // |a|^2 = sum xi^2 is the circle radius squared
  const double R2 = sum_sq(xi);
  const double R = std::sqrt(R2);
  const Matrix& V = eig_n.vectors;
  std::vector<Eigen::Vector2d> w(n);
  for (std::size_t r = 0; r < n; ++r) w[r] = {V(ix(n - 2), ix(r)), V(ix(n - 1), ix(r))};

  // Reference line: the one crossing the circle most transversally.
  std::size_t ref = n;
  double best = -1;
  for (std::size_t r = 0; r < n; ++r) {
    const double wn = w[r].norm();
    if (wn < 1e-12) continue;
    const double slack = R2 - (xi[r] / wn) * (xi[r] / wn);
    if (slack > best) {
      best = slack;
      ref = r;
    }
  }
  if (ref == n) fail(ErrorKind::NoIntersection, "no usable line");
  const Eigen::Vector2d wr = w[ref];
  const double wn2 = wr.squaredNorm();
  const Eigen::Vector2d perp = Eigen::Vector2d(-wr.y(), wr.x()) / std::sqrt(wn2);

  CandidateSet set;
  for (int side : {1, -1}) {
    const double c = side * xi[ref];
    const Eigen::Vector2d foot = c * wr / wn2;
    const double disc = R2 - c * c / wn2;
    if (disc < -tol * R2) continue;
    const double hgt = std::sqrt(std::max(disc, 0.0));
    for (int pm : {1, -1}) {
      const Eigen::Vector2d x = foot + pm * hgt * perp;
      double worst = 0;
      for (std::size_t r = 0; r < n; ++r) {
        const double p = w[r].dot(x);
        worst = std::max(worst, std::min(std::abs(p - xi[r]), std::abs(p + xi[r])));
      }
      if (worst > tol * std::max(1.0, R)) continue;
      Candidate cand = penta_candidate(n, x.x(), x.y());
      cand.residual = worst;
      cand.signs.resize(n);
      for (std::size_t r = 0; r < n; ++r) cand.signs[r] = sign_of(w[r].dot(x));
      set.candidates.push_back(std::move(cand));
    }
  }
  if (set.candidates.empty()) fail(ErrorKind::NoIntersection, "lines share no point on the circle");
  finish(set);
  return set;
}

std::optional<AlphaWitness> alpha_condition(const EigDecomp& eig_n, double tol) {
  const Matrix& V = eig_n.vectors;
  const std::size_t n = static_cast<std::size_t>(V.cols());
  if (n < 2) return std::nullopt;
  std::vector<double> theta(n);
  std::vector<bool> usable(n);
  std::size_t anchor = n;
  for (std::size_t r = 0; r < n; ++r) {
    const double p = V(ix(n - 2), ix(r)), q = V(ix(n - 1), ix(r));
    usable[r] = std::hypot(p, q) > 1e-12;
    theta[r] = std::atan2(p, q);
    if (usable[r] && anchor == n) anchor = r;
  }
  if (anchor == n) return std::nullopt;
  auto wrap = [](double a) { return std::remainder(a, 2 * std::numbers::pi); };
  AlphaWitness w;
  double s_i = 0;
  for (std::size_t r = 0; r < n; ++r) {
    if (!usable[r]) continue;
    if (std::abs(wrap(4 * (theta[r] - theta[anchor]))) > 4 * tol) return std::nullopt;
    if (std::abs(wrap(2 * (theta[r] - theta[anchor]))) <= 2 * tol) {
      w.I.push_back(r);
      s_i += V(ix(n - 1), ix(r)) * V(ix(n - 1), ix(r));
    } else {
      w.J.push_back(r);
    }
  }
  if (w.J.empty()) return std::nullopt;
  w.alpha = std::tan(theta[anchor]);
  // Orthonormality forces alpha^2 = 1/S_I - 1.
  if (s_i > 0 && std::abs(w.alpha * w.alpha - (1.0 / s_i - 1.0)) > 1e-6 * std::max(1.0, w.alpha * w.alpha))
    return std::nullopt;
  return w;
}

ConicStep conic_forms(const SymmetricMatrix& minor, const StepScalars& sc) {
  const std::size_t n = minor.size();
  if (n < 2) fail(ErrorKind::NotPentaStep, "conic method needs n >= 2");
  if (!sc.inv_rho) fail(ErrorKind::InvalidArgument, "step scalars lack the inverse form");
  const Matrix a = minor.dense();
  const Index p = ix(n - 2), q = ix(n - 1);
  ConicStep cs;
  cs.circle = {1.0, 0.0, 1.0, sc.R2};
  cs.conic1 = {a(p, p) + sc.h, a(p, q), a(q, q) + sc.h, sc.cubic_rho};
  const Matrix shifted = a + sc.inv_shift * Matrix::Identity(ix(n), ix(n));
  const Matrix inv = shifted.partialPivLu().inverse();
  cs.conic2 = {inv(p, p), inv(p, q), inv(q, q), *sc.inv_rho};
  const Conic &c1 = cs.conic1, &c2 = cs.conic2;
  const double raw = c1.alpha * c2.beta - c2.alpha * c1.beta + c2.gamma * c1.beta - c1.gamma * c2.beta;
  const double mag = (std::abs(c1.alpha - c1.gamma) + std::abs(c1.beta)) *
                     (std::abs(c2.alpha - c2.gamma) + std::abs(c2.beta));
  cs.degeneracy_residual = mag > 0 ? raw / mag : 0.0;
  cs.degenerate = std::abs(cs.degeneracy_residual) <= 1e-9;
  return cs;
}

ConicStep penta_conics_step(const SymmetricMatrix& minor, const StepScalars& sc, double tol) {
  ConicStep cs = conic_forms(minor, sc);
  const std::size_t n = minor.size();
  if (sc.R2 <= 0) fail(ErrorKind::NoIntersection, "circle has no positive radius");
  const auto p1 = conic_on_circle(cs.conic1, sc.R2);
  const auto p2 = conic_on_circle(cs.conic2, sc.R2);
  if (!p1 && !p2) fail(ErrorKind::NoIntersection, "both conics coincide with the circle");
  const double r = std::sqrt(sc.R2);
  std::vector<CirclePoint> found;
  if (!p1 || !p2) {
    found = p1 ? *p1 : *p2;
  } else {
    for (const auto& a : *p1)
      for (const auto& b : *p2)
        if (std::hypot(a.x - b.x, a.y - b.y) <= tol * std::max(1.0, r)) {
          found.push_back(a.cond >= b.cond ? a : b);
          break;
        }
  }
  if (found.empty()) fail(ErrorKind::NoIntersection, "conics share no point on the circle");
  for (const auto& pt : found) cs.set.candidates.push_back(penta_candidate(n, pt.x, pt.y));
  dedup(cs.set, tol);
  cs.set.too_many = cs.set.size() > 2;
  return cs;
}

FeasibilityReport feasibility_certificate(const EigDecomp& eig_n, std::span<const double> xi, double R2,
                                          std::size_t d, double tol) {
  const Matrix& V = eig_n.vectors;
  const Index n = V.rows();
  const Index k = std::min<Index>(n, ix(d));
  FeasibilityReport rep;
  const double R = std::sqrt(std::max(R2, 0.0));
  for (std::size_t r = 0; r < xi.size(); ++r) {
    const double wn = V.col(ix(r)).tail(k).norm();
    const double dist = wn > 0 ? xi[r] / wn : (xi[r] > 0 ? HUGE_VAL : 0.0);
    rep.distances.push_back(dist);
    if (dist > R * (1.0 + tol) + tol) {
      rep.feasible = false;
      rep.violating.push_back(r);
    }
  }
  return rep;
}

SignVector extract_column_signs(const SymmetricMatrix& a, std::size_t d) {
  SignVector s;
  for (std::size_t c = 1; c < a.size(); ++c) s.push_back(sign_of(a(c > d ? c - d : 0, c)));
  return s;
}

Reconstruction reconstruct_banded(const SpectralData& sd, std::size_t d, std::span<const int> column_signs,
                                  const BandedOptions& opts) {
  const std::size_t N = sd.size();
  if (N == 0) fail(ErrorKind::InvalidArgument, "no spectra");
  if (d == 0) fail(ErrorKind::InvalidArgument, "bandwidth must be at least 1");
  if (column_signs.size() + 1 != N) fail(ErrorKind::InvalidArgument, "need N-1 column signs");
  if (opts.method != BandedMethod::Search && d != 2) fail(ErrorKind::NotPentaStep, "penta methods need d = 2");
  struct Branch {
    Matrix a;
    EigDecomp eig;
    std::vector<StepReport> steps;
  };
  std::vector<Branch> branches;
  {
    Matrix a(1, 1);
    a(0, 0) = sd.minor(1)[0];
    branches.push_back({a, EigDecomp{sd.minor(1), Matrix::Identity(1, 1)}, {}});
  }
  for (std::size_t n = 1; n < N; ++n) {
    const Spectrum& next = sd.minor(n + 1);
    const std::size_t outer = n > d ? n - d : 0;
    std::vector<Branch> grown;
    for (const Branch& b : branches) {
      StepReport rep;
      rep.n = n;
      rep.method = "banded";
      CandidateSet set;
      // a branch without intersection is pruned like one without candidates
      try {
        if (opts.method == BandedMethod::Search || n < 3) {
          set = banded_candidates(b.eig, next, d, opts.eps);
        } else if (opts.method == BandedMethod::PentaLines) {
          rep.method = "penta-lines";
          set = penta_lines_step(b.eig, next);
        } else {
          rep.method = "penta-conics";
          const SymmetricMatrix minor = SymmetricMatrix::from_dense(b.a);
          ConicStep cs = penta_conics_step(minor, step_scalars(b.eig.spectrum, next));
          rep.penta_degenerate = cs.degenerate;
          set = std::move(cs.set);
          for (Candidate& c : set.candidates) {
            c.signs.resize(n);
            for (std::size_t r = 0; r < n; ++r) c.signs[r] = sign_of(c.column.dot(b.eig.vectors.col(ix(r))));
          }
        }
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NoIntersection) throw;
      }
      rep.candidates = set.size();
      if (d == 2 && n >= 3) rep.alpha_condition = alpha_condition(b.eig).has_value();
      for (const Candidate& c : set.candidates) {
        if (sign_of(c.column(ix(outer))) != column_signs[n - 1]) continue;
        StepResult step = telescopic_step(b.eig, next, c.signs);
        Branch nb;
        nb.a = Matrix::Zero(ix(n + 1), ix(n + 1));
        nb.a.topLeftCorner(ix(n), ix(n)) = b.a;
        Vector col = step.column;
        for (std::size_t i = 0; i < outer; ++i) col(ix(i)) = 0.0;
        nb.a.col(ix(n)).head(ix(n)) = col;
        nb.a.row(ix(n)).head(ix(n)) = col.transpose();
        nb.a(ix(n), ix(n)) = step.h;
        nb.eig = std::move(step.eig_next);
        nb.steps = b.steps;
        StepReport r = rep;
        r.near_regular = step.near_regular;
        if (opts.residuals) r.spectrum_residual = spectrum_residual(nb.a, next);
        nb.steps.push_back(r);
        grown.push_back(std::move(nb));
      }
    }
    if (grown.empty()) fail(ErrorKind::NoSolution, "no banded matrix fits the data at step n=" + std::to_string(n));
    if (grown.size() > opts.max_branches) fail(ErrorKind::Ambiguous, "too many surviving branches");
    branches = std::move(grown);
  }
  const std::optional<std::size_t> bw = d + 1 < N ? std::optional<std::size_t>(d) : std::nullopt;
  if (branches.size() > 1) {
    std::vector<SymmetricMatrix> all;
    for (const Branch& b : branches) all.push_back(SymmetricMatrix::from_dense(b.a, bw));
    throw AmbiguousError(std::to_string(branches.size()) + " banded matrices fit the data", std::move(all));
  }
  return Reconstruction{SymmetricMatrix::from_dense(branches[0].a, bw), branches[0].steps};
}

}  // namespace mhear
