#include "matrixhear/oracle.hpp"

#include "matrixhear/degenerate.hpp"
#include "matrixhear/errors.hpp"
#include "matrixhear/spectral.hpp"
#include "matrixhear/telescopic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mhear {

namespace {
using Index = Eigen::Index;
Index ix(std::size_t i) { return static_cast<Index>(i); }
}  // namespace

double Rng::normal() {
  const double u1 = 1.0 - uniform01();
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

SymmetricMatrix gen_random_banded(const InstanceSpec& spec) {
  if (spec.n == 0) fail(ErrorKind::InvalidArgument, "n must be positive");
  Rng rng(spec.seed);
  const std::optional<std::size_t> bw =
      spec.d + 1 < spec.n ? std::optional<std::size_t>(spec.d) : std::nullopt;
  for (int attempt = 0; attempt < spec.max_attempts; ++attempt) {
    SymmetricMatrix a(spec.n, bw);
    for (std::size_t i = 0; i < spec.n; ++i)
      for (std::size_t j = i; j < spec.n && j <= i + spec.d; ++j) a.set(i, j, rng.uniform(spec.lo, spec.hi));
    if (check_regular(extract_spectral_data(a), spec.regularity_margin).regular) return a;
  }
  fail(ErrorKind::CannotSatisfyMargin, "no regular instance after " + std::to_string(spec.max_attempts) + " attempts");
}

Matrix random_orthogonal(std::size_t n, Rng& rng) {
  Matrix g(ix(n), ix(n));
  for (Index i = 0; i < g.rows(); ++i)
    for (Index j = 0; j < g.cols(); ++j) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < q.cols(); ++j)
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  return q;
}

std::pair<Spectrum, Spectrum> gen_interlacing_pair(std::size_t n, Rng& rng, double min_gap, double max_gap) {
  std::vector<double> pts;
  double t = rng.uniform(-1.0, 1.0) - 0.5 * static_cast<double>(n) * (min_gap + max_gap);
  for (std::size_t k = 0; k < 2 * n + 1; ++k) {
    pts.push_back(t);
    t += rng.uniform(min_gap, max_gap);
  }
  std::vector<double> small, big;
  for (std::size_t k = 0; k < pts.size(); ++k) (k % 2 == 0 ? big : small).push_back(pts[k]);
  return {Spectrum(small), Spectrum(big)};
}

CauchyPair gen_cauchy_pair(std::size_t n, Rng& rng) {
  std::vector<double> pts;
  double t = rng.uniform(-1.0, 1.0) - 0.4 * static_cast<double>(n);
  for (std::size_t k = 0; k < 2 * n; ++k) {
    pts.push_back(t);
    t += rng.uniform(0.3, 1.3);
  }
  for (std::size_t k = pts.size(); k > 1; --k) std::swap(pts[k - 1], pts[rng.index(k)]);
  CauchyPair p;
  p.x.assign(pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(n));
  p.y.assign(pts.begin() + static_cast<std::ptrdiff_t>(n), pts.end());
  return p;
}

ColumnPredicate band_predicate(std::size_t d, double eps) {
  return [d, eps](const Vector& a) { return band_residual(a, d) <= eps; };
}

CandidateSet brute_force_step(const EigDecomp& eig_n, const Spectrum& snp1, const ColumnPredicate& accept) {
  const std::size_t n = eig_n.spectrum.size();
  if (n > 20) fail(ErrorKind::TooLarge, "brute force limited to n <= 20");
  std::vector<double> xi = xi_squared(eig_n.spectrum, snp1);
  for (double& v : xi) v = std::sqrt(v);
  CandidateSet set;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    SignVector s(n);
    for (std::size_t r = 0; r < n; ++r) s[r] = (mask >> r) & 1 ? -1 : 1;
    Vector a = assemble_column(eig_n.vectors, xi, s);
    if (accept(a)) set.candidates.push_back({std::move(a), std::move(s), 0.0});
  }
  dedup(set);
  set.too_many = set.size() > 2;
  return set;
}

Reconstruction guided_reconstruct(const SymmetricMatrix& source, double degeneracy_tol) {
  const Matrix a = source.dense();
  ReconstructOptions opts;
  opts.degeneracy_tol = degeneracy_tol;
  auto directive = [&](std::size_t n, const EigDecomp& eig, const DegeneracyBlock& block) {
    const Vector col = a.col(ix(n)).head(ix(n));
    StepDirective dir;
    for (Index r = 0; r < eig.vectors.cols(); ++r) dir.signs.push_back(sign_of(col.dot(eig.vectors.col(r))));
    if (block.kind == DegeneracyCase::IV) {
      const Vector u = eig.vectors.middleCols(ix(block.first), ix(block.m + 1)).transpose() * col;
      if (u.norm() > 1e-14 * std::max(1.0, col.norm())) {
        dir.basis_choice = u.normalized();
        dir.signs[block.first] = 1;
      }
    }
    return dir;
  };
  return reconstruct_with(extract_spectral_data(source), directive, opts);
}

}  // namespace mhear
