#include "matrixhear/cauchy.hpp"

#include "logprod.hpp"
#include "matrixhear/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mhear {

namespace {

using Index = Eigen::Index;
using detail::LogProduct;

Index ix(std::size_t i) { return static_cast<Index>(i); }

Matrix gow_inverse(const CauchyPair& p) {
  const std::size_t n = p.size();
  std::vector<double> A(n), B(n);
  for (std::size_t i = 0; i < n; ++i) {
    LogProduct a, b;
    for (std::size_t k = 0; k < n; ++k) {
      a.mul(p.y[i] - p.x[k]);
      b.mul(p.x[i] - p.y[k]);
      if (k != i) {
        a.div(p.y[i] - p.y[k]);
        b.div(p.x[i] - p.x[k]);
      }
    }
    A[i] = a.value();
    B[i] = b.value();
  }
  Matrix inv(ix(n), ix(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(ix(i), ix(j)) = A[i] * B[j] / (p.y[i] - p.x[j]);
  return inv;
}

// |lhs - rhs| relative to the size of the terms that produced lhs.
double rel(double lhs, double rhs, double magnitude) {
  return std::abs(lhs - rhs) / std::max({1.0, magnitude, std::abs(rhs)});
}

double prod(const std::vector<double>& t) {
  LogProduct p;
  for (double v : t) p.mul(v);
  return p.value();
}

bool has_zero(const std::vector<double>& t) {
  return std::any_of(t.begin(), t.end(), [](double v) { return v == 0.0; });
}

// sum_k t_k^m / prod_{i != k} (t_k - t_i) for m = 0..n, checked against
// 0, ..., 0, 1, sum t.
double summation_powers(const std::vector<double>& t) {
  const std::size_t n = t.size();
  std::vector<double> denom(n);
  for (std::size_t k = 0; k < n; ++k) {
    LogProduct p;
    for (std::size_t i = 0; i < n; ++i)
      if (i != k) p.mul(t[k] - t[i]);
    denom[k] = p.value();
  }
  double tsum = 0;
  for (double v : t) tsum += v;
  double worst = 0;
  for (std::size_t m = 0; m <= n; ++m) {
    double s = 0, mag = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const double term = std::pow(t[k], static_cast<double>(m)) / denom[k];
      s += term;
      mag += std::abs(term);
    }
    const double expect = m + 1 < n ? 0.0 : (m + 1 == n ? 1.0 : tsum);
    worst = std::max(worst, rel(s, expect, mag));
  }
  return worst;
}

double summation_reciprocal(const std::vector<double>& t) {
  const std::size_t n = t.size();
  double s = 0, mag = 0;
  for (std::size_t k = 0; k < n; ++k) {
    LogProduct p;
    p.mul(t[k]);
    for (std::size_t i = 0; i < n; ++i)
      if (i != k) p.mul(t[k] - t[i]);
    const double term = 1.0 / p.value();
    s += term;
    mag += std::abs(term);
  }
  const double expect = -((n % 2 == 0) ? 1.0 : -1.0) / prod(t);
  return rel(s, expect, mag);
}

}  // namespace

double CauchyPair::min_separation() const {
  double g = std::numeric_limits<double>::infinity();
  std::vector<double> all = x;
  all.insert(all.end(), y.begin(), y.end());
  std::sort(all.begin(), all.end());
  for (std::size_t i = 1; i < all.size(); ++i) g = std::min(g, all[i] - all[i - 1]);
  return g;
}

Matrix cauchy_matrix(const CauchyPair& p) {
  const std::size_t n = p.size();
  Matrix c(ix(n), ix(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) c(ix(i), ix(j)) = 1.0 / (p.x[i] - p.y[j]);
  return c;
}

Matrix cauchy_inverse(const CauchyPair& p, double gap_tol) {
  if (p.x.size() != p.y.size()) fail(ErrorKind::InvalidArgument, "x and y differ in length");
  if (p.size() > 1 || !p.x.empty()) {
    if (p.min_separation() <= gap_tol) fail(ErrorKind::IllConditioned, "Cauchy points not separated");
  }
  return gow_inverse(p);
}

std::vector<double> elementary_symmetric(const std::vector<double>& t) {
  // coefficients of prod (1 + t_i z)
  std::vector<double> e(t.size() + 1, 0.0);
  e[0] = 1.0;
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t m = i + 1; m >= 1; --m) e[m] += t[i] * e[m - 1];
  return e;
}

Matrix vandermonde(const std::vector<double>& t) {
  const std::size_t n = t.size();
  Matrix v(ix(n), ix(n));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) v(ix(k), ix(i)) = std::pow(t[i], static_cast<double>(k));
  return v;
}

Matrix vandermonde_inverse(const std::vector<double>& t) {
  const std::size_t n = t.size();
  Matrix inv(ix(n), ix(n));
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> rest;
    LogProduct d;
    for (std::size_t k = 0; k < n; ++k)
      if (k != i) {
        rest.push_back(t[k]);
        d.mul(t[i] - t[k]);
      }
    const std::vector<double> e = elementary_symmetric(rest);
    const double den = d.value();
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t m = n - 1 - j;
      const double sgn = (m % 2 == 0) ? 1.0 : -1.0;
      inv(ix(i), ix(j)) = sgn * e[m] / den;
    }
  }
  return inv;
}

std::vector<double> xi_squared(const Spectrum& sn, const Spectrum& snp1) {
  const std::size_t n = sn.size();
  if (snp1.size() != n + 1) fail(ErrorKind::InvalidArgument, "spectrum sizes differ by more than one");
  const double scale = std::max(1.0, snp1.diameter());
  std::vector<double> out(n);
  for (std::size_t r = 0; r < n; ++r) {
    LogProduct p;
    for (std::size_t k = 0; k <= n; ++k) p.mul(sn[r] - snp1[k]);
    for (std::size_t k = 0; k < n; ++k)
      if (k != r) p.div(sn[r] - sn[k]);
    if (p.infinite && !p.zero) fail(ErrorKind::NotRegular, "repeated eigenvalue in sigma^(n)");
    const double v = p.infinite ? 0.0 : -p.value();
    if (v < -1e-12 * scale * scale) fail(ErrorKind::NotInterlacing, "negative xi^2 at r=" + std::to_string(r + 1));
    out[r] = std::max(v, 0.0);
  }
  return out;
}

std::vector<double> eigvec_last_entry_sq(const Spectrum& sn, const Spectrum& snp1) {
  const std::size_t n = sn.size();
  if (snp1.size() != n + 1) fail(ErrorKind::InvalidArgument, "spectrum sizes differ by more than one");
  std::vector<double> out(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    LogProduct p;
    for (std::size_t r = 0; r < n; ++r) p.mul(snp1[k] - sn[r]);
    for (std::size_t r = 0; r <= n; ++r)
      if (r != k) p.div(snp1[k] - snp1[r]);
    if (p.infinite && !p.zero) fail(ErrorKind::NotRegular, "repeated eigenvalue in sigma^(n+1)");
    const double v = p.infinite ? 0.0 : p.value();
    if (v < -1e-12) fail(ErrorKind::NotInterlacing, "negative |b|^2 at k=" + std::to_string(k + 1));
    out[k] = std::max(v, 0.0);
  }
  return out;
}

double consistency_residual(const Spectrum& sn, const Spectrum& snp1, double h) {
  const std::size_t n = sn.size();
  if (snp1.size() != n + 1) fail(ErrorKind::InvalidArgument, "spectrum sizes differ by more than one");
  CauchyPair p;
  p.x.assign(snp1.begin(), snp1.begin() + static_cast<std::ptrdiff_t>(n));
  p.y = sn.values();
  const Matrix inv = gow_inverse(p);
  Vector rhs_vec(ix(n));
  for (std::size_t k = 0; k < n; ++k) rhs_vec(ix(k)) = p.x[k] - h;
  const Vector w = inv * rhs_vec;
  const double z = snp1[n];
  double s = 0;
  for (std::size_t r = 0; r < n; ++r) s += w(ix(r)) / (z - sn[r]);
  return std::abs(z - h - s);
}

double IdentityReport::max_residual() const {
  double m = 0;
  for (const auto& c : checks)
    if (!c.skipped) m = std::max(m, c.residual);
  return m;
}

IdentityReport cauchy_identity_suite(const CauchyPair& p) {
  IdentityReport rep;
  const std::size_t n = p.size();
  const Matrix c = cauchy_matrix(p);
  const Matrix inv = cauchy_inverse(p);
  const auto& x = p.x;
  const auto& y = p.y;
  double diff_sum = 0;
  for (std::size_t k = 0; k < n; ++k) diff_sum += x[k] - y[k];
  const bool zero_point = has_zero(x) || has_zero(y);
  const double px = zero_point ? 0.0 : prod(x), py = zero_point ? 0.0 : prod(y);

  {
    double worst = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double s = 0, mag = 0;
        for (std::size_t k = 0; k < n; ++k) {
          const double t = c(ix(i), ix(k)) * inv(ix(k), ix(j));
          s += t;
          mag += std::abs(t);
        }
        worst = std::max(worst, rel(s, i == j ? 1.0 : 0.0, mag));
      }
    rep.checks.push_back({"inverse_product", worst, false});
  }
  {
    double s = 0, mag = 0;
    for (Index i = 0; i < inv.rows(); ++i)
      for (Index j = 0; j < inv.cols(); ++j) {
        s += inv(i, j);
        mag += std::abs(inv(i, j));
      }
    rep.checks.push_back({"inverse_entry_sum", rel(s, diff_sum, mag), false});
  }
  if (zero_point) {
    rep.checks.push_back({"cauchy_identities1", 0, true});
    rep.checks.push_back({"cauchy_identities2", 0, true});
    rep.checks.push_back({"combined_trace_identity", 0, true});
  } else {
    double s1 = 0, m1 = 0, s2 = 0, m2 = 0, s3 = 0, m3 = 0, s4 = 0, m4 = 0, s5 = 0, m5 = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const double v = inv(ix(i), ix(j));
        const double t1 = v / x[j], t2 = v / y[i], t3 = y[i] * v / x[j], t4 = v * x[j] / y[i];
        const double t5 = v * (x[j] - diff_sum) / y[i];
        s1 += t1, m1 += std::abs(t1);
        s2 += t2, m2 += std::abs(t2);
        s3 += t3, m3 += std::abs(t3);
        s4 += t4, m4 += std::abs(t4);
        s5 += t5, m5 += std::abs(t5);
      }
    const double r1 = std::max(rel(s1, 1.0 - py / px, m1), rel(s2, px / py - 1.0, m2));
    const double r2 = std::max(rel(s3, py / px * diff_sum, m3), rel(s4, px / py * diff_sum, m4));
    rep.checks.push_back({"cauchy_identities1", r1, false});
    rep.checks.push_back({"cauchy_identities2", r2, false});
    rep.checks.push_back({"combined_trace_identity", rel(s5, diff_sum, m5), false});
  }
  {
    // C = -P Vx^{-1} Vy Q^{-1}, P = diag(prod_{i!=k}(x_k - x_i)), Q = diag(prod_i (y_j - x_i))
    const Matrix vy = vandermonde(y);
    const Matrix vxi = vandermonde_inverse(x);
    Matrix rhs = -(vxi * vy);
    for (std::size_t k = 0; k < n; ++k) {
      LogProduct pk, qk;
      for (std::size_t i = 0; i < n; ++i) {
        if (i != k) pk.mul(x[k] - x[i]);
        qk.mul(y[k] - x[i]);
      }
      rhs.row(ix(k)) *= pk.value();
      rhs.col(ix(k)) /= qk.value();
    }
    double worst = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        worst = std::max(worst, rel(rhs(ix(i), ix(j)), c(ix(i), ix(j)), std::abs(c(ix(i), ix(j)))));
    rep.checks.push_back({"vandermonde_decomposition", worst, false});
  }
  {
    double worst = 0;
    for (const auto* t : {&x, &y}) {
      const Matrix v = vandermonde(*t);
      const Matrix vi = vandermonde_inverse(*t);
      const Matrix prod_m = vi * v;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          double mag = 0;
          for (std::size_t k = 0; k < n; ++k) mag += std::abs(vi(ix(i), ix(k)) * v(ix(k), ix(j)));
          worst = std::max(worst, rel(prod_m(ix(i), ix(j)), i == j ? 1.0 : 0.0, mag));
        }
    }
    rep.checks.push_back({"vandermonde_inverse", worst, false});
  }
  rep.checks.push_back({"summation_powers", std::max(summation_powers(x), summation_powers(y)), false});
  if (zero_point) {
    rep.checks.push_back({"summation_reciprocal", 0, true});
  } else {
    rep.checks.push_back({"summation_reciprocal", std::max(summation_reciprocal(x), summation_reciprocal(y)), false});
  }
  {
    // Extend x by one point; h is then fixed by the trace.
    double top = -std::numeric_limits<double>::infinity();
    for (double v : x) top = std::max(top, v);
    for (double v : y) top = std::max(top, v);
    const double x_extra = top + 1.0;
    double h = x_extra;
    for (std::size_t k = 0; k < n; ++k) h += x[k] - y[k];
    double worst = 0;
    for (std::size_t r = 0; r < n; ++r) {
      double s = 0, mag = 0;
      for (std::size_t k = 0; k < n; ++k) {
        const double t = inv(ix(r), ix(k)) * (x[k] - h);
        s += t;
        mag += std::abs(t);
      }
      LogProduct q;
      for (std::size_t k = 0; k < n; ++k) q.mul(y[r] - x[k]);
      q.mul(y[r] - x_extra);
      for (std::size_t k = 0; k < n; ++k)
        if (k != r) q.div(y[r] - y[k]);
      worst = std::max(worst, rel(s, -q.value(), mag));
    }
    rep.checks.push_back({"xi_identity", worst, false});
  }
  return rep;
}

}  // namespace mhear
