#include "matrixhear/spectral.hpp"

#include "matrixhear/errors.hpp"
#include "logprod.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace mhear {

namespace {

using Index = Eigen::Index;

// Rotation in the (p, q) plane zeroing a(p, q); a is kept fully symmetric.
void jacobi_rotate(Matrix& a, Matrix& v, Index p, Index q) {
  const double apq = a(p, q);
  const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
  double t;
  if (std::abs(theta) > 1e150) {
    t = 0.5 / theta;
  } else {
    t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  }
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const Index n = a.rows();
  for (Index k = 0; k < n; ++k) {
    const double akp = a(k, p), akq = a(k, q);
    a(k, p) = c * akp - s * akq;
    a(k, q) = s * akp + c * akq;
  }
  for (Index k = 0; k < n; ++k) {
    const double apk = a(p, k), aqk = a(q, k);
    a(p, k) = c * apk - s * aqk;
    a(q, k) = s * apk + c * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  for (Index k = 0; k < n; ++k) {
    const double vkp = v(k, p), vkq = v(k, q);
    v(k, p) = c * vkp - s * vkq;
    v(k, q) = s * vkp + c * vkq;
  }
}

double product_ratio(const Spectrum& num, const Spectrum& den, double shift) {
  // prod(num + shift) / prod(den + shift), interleaved to stay in range
  detail::LogProduct p;
  for (std::size_t i = 0; i < num.size(); ++i) {
    p.mul(num[i] + shift);
    if (i < den.size()) p.div(den[i] + shift);
  }
  return p.value();
}

}  // namespace

void apply_gauge(Matrix& vectors, Gauge gauge, double fallback_tol) {
  const Index n = vectors.rows();
  for (Index k = 0; k < vectors.cols(); ++k) {
    double pivot = 0;
    if (gauge == Gauge::LastEntryPositive) {
      for (Index i = n - 1; i >= 0; --i)
        if (std::abs(vectors(i, k)) > fallback_tol) {
          pivot = vectors(i, k);
          break;
        }
    } else {
      for (Index i = 0; i < n; ++i)
        if (std::abs(vectors(i, k)) > fallback_tol) {
          pivot = vectors(i, k);
          break;
        }
    }
    if (pivot < 0) vectors.col(k) = -vectors.col(k);
  }
}

EigDecomp eig_sym(const Matrix& input, Gauge gauge, int max_sweeps) {
  if (input.rows() != input.cols()) fail(ErrorKind::InvalidArgument, "matrix is not square");
  const Index n = input.rows();
  Matrix a = 0.5 * (input + input.transpose());
  Matrix v = Matrix::Identity(n, n);
  bool converged = n <= 1;
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    double off = 0;
    for (Index p = 0; p < n; ++p)
      for (Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off == 0.0) {
      converged = true;
      break;
    }
    for (Index p = 0; p < n; ++p)
      for (Index q = p + 1; q < n; ++q) {
        const double g = 100.0 * std::abs(a(p, q));
        if (g == 0.0) continue;
        if (sweep > 3 && std::abs(a(p, p)) + g == std::abs(a(p, p)) &&
            std::abs(a(q, q)) + g == std::abs(a(q, q))) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        jacobi_rotate(a, v, p, q);
      }
  }
  if (!converged) {
    double off = 0;
    for (Index p = 0; p < n; ++p)
      for (Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off != 0.0) fail(ErrorKind::NonConvergence, "Jacobi iteration did not converge");
  }

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index i, Index j) { return a(i, i) < a(j, j); });
  std::vector<double> vals;
  Matrix vecs(n, n);
  for (Index k = 0; k < n; ++k) {
    vals.push_back(a(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(k)]));
    vecs.col(k) = v.col(order[static_cast<std::size_t>(k)]);
    vecs.col(k).normalize();
  }
  apply_gauge(vecs, gauge);
  return EigDecomp{Spectrum(std::move(vals)), std::move(vecs), gauge};
}

EigDecomp eig_sym(const SymmetricMatrix& a, Gauge gauge) { return eig_sym(a.dense(), gauge); }

SpectralData extract_spectral_data(const SymmetricMatrix& a) {
  std::vector<Spectrum> out;
  const Matrix full = a.dense();
  for (std::size_t k = 1; k <= a.size(); ++k) {
    const auto kk = static_cast<Index>(k);
    out.push_back(eig_sym(Matrix(full.topLeftCorner(kk, kk))).spectrum);
  }
  return SpectralData(std::move(out));
}

SignIndicators extract_sign_indicators(const SymmetricMatrix& a, Gauge gauge, double degenerate_tol) {
  SignIndicators out;
  out.gauge = gauge;
  const Matrix full = a.dense();
  for (std::size_t n = 1; n < a.size(); ++n) {
    const auto nn = static_cast<Index>(n);
    const EigDecomp e = eig_sym(Matrix(full.topLeftCorner(nn, nn)), gauge);
    const double scale = std::max(1.0, e.spectrum.diameter());
    if (e.spectrum.min_gap() < degenerate_tol * scale)
      fail(ErrorKind::GaugeAmbiguous, "A^(" + std::to_string(n) + ") has a repeated eigenvalue");
    const Vector col = full.col(nn).head(nn);
    SignVector s(n);
    for (std::size_t r = 0; r < n; ++r) s[r] = sign_of(col.dot(e.vectors.col(static_cast<Index>(r))));
    out.steps.push_back(std::move(s));
  }
  return out;
}

StepScalars step_scalars(const Spectrum& sn, const Spectrum& snp1, const ScalarOptions& opts) {
  if (snp1.size() != sn.size() + 1) fail(ErrorKind::InvalidArgument, "spectrum sizes differ by more than one");
  StepScalars s;
  s.h = snp1.sum() - sn.sum();
  s.R2 = 0.5 * (snp1.power_sum(2) - sn.power_sum(2) - s.h * s.h);
  s.cubic_rho = (snp1.power_sum(3) - sn.power_sum(3) - s.h * s.h * s.h) / 3.0;
  if (!opts.with_inverse) return s;

  const double scale = std::max(1.0, std::max(sn.max_abs(), snp1.max_abs()));
  bool near_zero = false;
  for (double x : sn) near_zero = near_zero || std::abs(x) < opts.zero_tol * scale;
  for (double x : snp1) near_zero = near_zero || std::abs(x) < opts.zero_tol * scale;
  if (near_zero) {
    if (!opts.auto_shift) fail(ErrorKind::ZeroSpectrum, "zero eigenvalue, inverse form undefined");
    s.inv_shift = 1.0 + snp1.max_abs();
  }
  // <a|(A+c)^{-1}|a> = (h + c) - det(A'+c) / det(A+c)
  s.inv_rho = (s.h + s.inv_shift) - product_ratio(snp1, sn, s.inv_shift);
  return s;
}

StepGaps step_gaps(const Spectrum& sn, const Spectrum& snp1, double abs_tol) {
  StepGaps g;
  g.n = sn.size();
  g.within = std::min(sn.min_gap(), snp1.min_gap());
  g.between = std::numeric_limits<double>::infinity();
  for (double x : sn)
    for (double y : snp1) g.between = std::min(g.between, std::abs(x - y));
  for (std::size_t k = 0; k < sn.size(); ++k)
    if (sn[k] < snp1[k] - abs_tol || sn[k] > snp1[k + 1] + abs_tol) g.interlacing = false;
  g.regular = g.interlacing && g.within > abs_tol && g.between > abs_tol;
  return g;
}

RegularityReport check_regular(const SpectralData& sd, double tol) {
  RegularityReport r;
  r.scale = sd.scale();
  for (std::size_t n = 1; n < sd.size(); ++n) {
    r.steps.push_back(step_gaps(sd.minor(n), sd.minor(n + 1), tol * r.scale));
    r.regular = r.regular && r.steps.back().regular;
  }
  return r;
}

}  // namespace mhear
