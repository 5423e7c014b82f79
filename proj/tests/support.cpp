#include "support.hpp"

#include "matrixhear/banded.hpp"
#include "matrixhear/errors.hpp"
#include "matrixhear/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace mhear::test {

namespace {
using Index = Eigen::Index;
Index ix(std::size_t i) { return static_cast<Index>(i); }

double signed_uniform(Rng& rng, double lo, double hi) { return rng.sign() * rng.uniform(lo, hi); }

Matrix rotation(Index n, Index p, Index q, double theta) {
  Matrix g = Matrix::Identity(n, n);
  g(p, p) = std::cos(theta);
  g(p, q) = -std::sin(theta);
  g(q, p) = std::sin(theta);
  g(q, q) = std::cos(theta);
  return g;
}

bool is_regular(const SymmetricMatrix& a, double margin = 1e-6) {
  return check_regular(extract_spectral_data(a), margin).regular;
}

Matrix random_penta(Index n, Rng& rng) {
  Matrix a = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i; j < n && j <= i + 2; ++j) a(i, j) = a(j, i) = rng.uniform(-1.0, 1.0);
  return a;
}

double conic_residual(const Matrix& a5) {
  StepScalars sc;
  sc.inv_rho = 0.0;
  return conic_forms(SymmetricMatrix::from_dense(a5, 2), sc).degeneracy_residual;
}
}  // namespace

OracleEig oracle_eig(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  OracleEig out{es.eigenvalues(), es.eigenvectors()};
  const Index n = a.rows();
  for (Index k = 0; k < n; ++k) {
    for (Index i = n - 1; i >= 0; --i) {
      if (std::abs(out.vectors(i, k)) > 1e-10) {
        if (out.vectors(i, k) < 0) out.vectors.col(k) *= -1.0;
        break;
      }
    }
  }
  return out;
}

Matrix random_symmetric(std::size_t n, Rng& rng) {
  Matrix a(ix(n), ix(n));
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = i; j < a.cols(); ++j) a(i, j) = a(j, i) = rng.uniform(-1.0, 1.0);
  return a;
}

double max_abs(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

SymmetricMatrix bordered(const Matrix& a_n, const Vector& col, double h, std::optional<std::size_t> bw) {
  const Index n = a_n.rows();
  Matrix a(n + 1, n + 1);
  a.topLeftCorner(n, n) = a_n;
  a.col(n).head(n) = col;
  a.row(n).head(n) = col.transpose();
  a(n, n) = h;
  return SymmetricMatrix::from_dense(a, bw);
}

DegenerateInstance make_degenerate(DegeneracyCase kind, std::size_t n, std::size_t l, std::size_t m,
                                   std::uint64_t seed) {
  if (m + 2 > n) fail(ErrorKind::InvalidArgument, "need at least one value outside the block");
  const std::size_t p = n - m - 1;
  if (l > p) fail(ErrorKind::InvalidArgument, "block position out of range");
  if (kind == DegeneracyCase::IV && m == 0) fail(ErrorKind::InvalidArgument, "case IV needs m >= 1");
  Rng rng(seed);
  std::vector<double> dp;
  double t = rng.uniform(-1.0, 1.0) - 0.5 * static_cast<double>(p);
  for (std::size_t k = 0; k < p; ++k) {
    dp.push_back(t);
    t += rng.uniform(0.6, 1.4);
  }
  Vector cp(ix(p));
  for (Index k = 0; k < cp.size(); ++k) cp(k) = signed_uniform(rng, 0.3, 1.0);
  const double h = rng.uniform(-1.0, 1.0);

  // reduced arrowhead [[diag(dp), cp], [cp^T, h]]
  Matrix ar = Matrix::Zero(ix(p + 1), ix(p + 1));
  for (std::size_t k = 0; k < p; ++k) ar(ix(k), ix(k)) = dp[k];
  ar.col(ix(p)).head(ix(p)) = cp;
  ar.row(ix(p)).head(ix(p)) = cp.transpose();
  ar(ix(p), ix(p)) = h;
  const Vector mu = oracle_eig(ar).values;
  const double lo = l > 0 ? dp[l - 1] : mu(ix(l)) - 1.0;
  const double hi = l < p ? dp[l] : mu(ix(l)) + 1.0;

  double lambda = 0;
  switch (kind) {
    case DegeneracyCase::I: lambda = mu(ix(l)); break;
    case DegeneracyCase::II: lambda = 0.5 * (lo + mu(ix(l))); break;
    case DegeneracyCase::III: lambda = 0.5 * (mu(ix(l)) + hi); break;
    case DegeneracyCase::IV: lambda = 0.5 * (lo + hi); break;
    case DegeneracyCase::None: fail(ErrorKind::InvalidArgument, "case None");
  }

  Vector diag(ix(n)), c(ix(n));
  std::size_t q = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (k >= l && k <= l + m) {
      diag(ix(k)) = lambda;
      c(ix(k)) = kind == DegeneracyCase::IV ? signed_uniform(rng, 0.3, 1.0) : 0.0;
    } else {
      diag(ix(k)) = dp[q];
      c(ix(k)) = cp(ix(q));
      ++q;
    }
  }
  const Matrix Q = random_orthogonal(n, rng);
  Matrix an = Q * diag.asDiagonal() * Q.transpose();
  an = 0.5 * (an + an.transpose());
  return {bordered(an, Q * c, h), kind, l, m};
}

SymmetricMatrix make_alpha_instance(std::uint64_t seed) {
  Rng rng(seed);
  for (int attempt = 0; attempt < 200; ++attempt) {
    Matrix m4 = Matrix::Zero(4, 4);
    for (Index i = 0; i < 3; ++i) m4(i, i) = rng.uniform(-1.0, 1.0);
    for (Index i = 0; i < 2; ++i) m4(i, i + 1) = m4(i + 1, i) = signed_uniform(rng, 0.3, 1.0);
    m4(3, 3) = rng.uniform(-1.0, 1.0);
    const Matrix g = rotation(4, 2, 3, rng.uniform(0.3, 1.2));
    Matrix a4 = g * m4 * g.transpose();
    a4(0, 2) = a4(2, 0) = a4(0, 3) = a4(3, 0) = 0.0;
    a4 = 0.5 * (a4 + a4.transpose());
    Vector col = Vector::Zero(4);
    col(2) = signed_uniform(rng, 0.3, 1.0);
    col(3) = signed_uniform(rng, 0.3, 1.0);
    const SymmetricMatrix a = bordered(a4, col, rng.uniform(-1.0, 1.0), 2);
    if (is_regular(a)) return a;
  }
  fail(ErrorKind::CannotSatisfyMargin, "no regular alpha instance");
}

SymmetricMatrix make_penta_degenerate(std::uint64_t seed) {
  Rng rng(seed);
  for (int attempt = 0; attempt < 500; ++attempt) {
    Matrix a5 = random_penta(5, rng);
    auto f = [&](double t) {
      a5(4, 4) = t;
      return conic_residual(a5);
    };
    // look for a sign change away from poles of the inverse
    const int steps = 80;
    double t0 = -3.0, f0 = f(t0);
    std::optional<std::pair<double, double>> bracket;
    for (int k = 1; k <= steps && !bracket; ++k) {
      const double t1 = -3.0 + 6.0 * k / steps;
      const double f1 = f(t1);
      if (std::isfinite(f0) && std::isfinite(f1) && (f0 < 0) != (f1 < 0)) bracket = {t0, t1};
      t0 = t1;
      f0 = f1;
    }
    if (!bracket) continue;
    double lo = bracket->first, hi = bracket->second;
    const bool lo_neg = f(lo) < 0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      ((f(mid) < 0) == lo_neg ? lo : hi) = mid;
    }
    const double root = 0.5 * (lo + hi);
    if (std::abs(f(root)) > 1e-12) continue;
    const OracleEig oe = oracle_eig(a5);
    if (oe.values.cwiseAbs().minCoeff() < 0.05) continue;
    const EigDecomp eig = eig_sym(a5);
    if (alpha_condition(eig, 1e-6)) continue;
    Vector col = Vector::Zero(5);
    col(3) = signed_uniform(rng, 0.3, 1.0);
    col(4) = signed_uniform(rng, 0.3, 1.0);
    const SymmetricMatrix a = bordered(a5, col, rng.uniform(-1.0, 1.0), 2);
    if (is_regular(a)) return a;
  }
  fail(ErrorKind::CannotSatisfyMargin, "no penta-degenerate instance found");
}

SymmetricMatrix make_sliding_alpha(std::uint64_t seed) {
  Rng rng(seed);
  for (int attempt = 0; attempt < 200; ++attempt) {
    Matrix a = random_penta(6, rng);
    Matrix m3 = Matrix::Zero(3, 3);
    m3(0, 0) = rng.uniform(-1.0, 1.0);
    m3(1, 1) = rng.uniform(-1.0, 1.0);
    m3(0, 1) = m3(1, 0) = signed_uniform(rng, 0.3, 1.0);
    m3(2, 2) = rng.uniform(-1.0, 1.0);
    const Matrix g = rotation(3, 1, 2, rng.uniform(0.3, 1.2));
    Matrix block = g * m3 * g.transpose();
    a.block(2, 2, 3, 3) = 0.5 * (block + block.transpose());
    const SymmetricMatrix s = SymmetricMatrix::from_dense(a, 2);
    if (is_regular(s)) return s;
  }
  fail(ErrorKind::CannotSatisfyMargin, "no regular sliding alpha instance");
}

}  // namespace mhear::test
