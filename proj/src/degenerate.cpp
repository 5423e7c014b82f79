#include "matrixhear/degenerate.hpp"

#include "logprod.hpp"
#include "matrixhear/errors.hpp"
#include "matrixhear/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace mhear {

namespace {

using Index = Eigen::Index;
Index ix(std::size_t i) { return static_cast<Index>(i); }

double block_scale(const Spectrum& sn, const Spectrum& snp1) {
  return std::max({1.0, sn.diameter(), snp1.diameter()});
}

bool contains(const std::vector<std::size_t>& v, std::size_t x) { return std::find(v.begin(), v.end(), x) != v.end(); }

std::vector<std::size_t> range(std::size_t from, std::size_t to) {
  std::vector<std::size_t> r;
  for (std::size_t i = from; i <= to; ++i) r.push_back(i);
  return r;
}

// Orthonormal complement of the unit vector u, m+1 -> (m+1) x m, from the
// reflection mapping e_last to u.
Matrix complement_of(const Vector& u) {
  const Index k = u.size();
  Vector w = -u;
  w(k - 1) += 1.0;
  Matrix h = Matrix::Identity(k, k);
  const double ww = w.squaredNorm();
  if (ww > 1e-28) h -= 2.0 * w * w.transpose() / ww;
  return h.leftCols(k - 1);
}

struct Tagged {
  double value;
  Vector vec;  // basis vector (small side) or empty
  int sign = 1;
  long tag = -1;  // original index, -1 for the inserted lambda
};

}  // namespace

std::vector<std::size_t> DegeneracyBlock::next_indices() const {
  switch (kind) {
    case DegeneracyCase::I: return range(first, first + m + 1);
    case DegeneracyCase::II: return range(first, first + m);
    case DegeneracyCase::III: return range(first + 1, first + m + 1);
    case DegeneracyCase::IV: return m == 0 ? std::vector<std::size_t>{} : range(first + 1, first + m);
    case DegeneracyCase::None: break;
  }
  return {};
}

DegeneracyBlock classify_degeneracy(const Spectrum& sn, const Spectrum& snp1, double tol) {
  const double abs_tol = tol * block_scale(sn, snp1);
  struct Item {
    double v;
    int side;
    std::size_t idx;
  };
  std::vector<Item> all;
  for (std::size_t i = 0; i < sn.size(); ++i) all.push_back({sn[i], 0, i});
  for (std::size_t i = 0; i < snp1.size(); ++i) all.push_back({snp1[i], 1, i});
  std::stable_sort(all.begin(), all.end(), [](const Item& a, const Item& b) { return a.v < b.v; });

  std::vector<std::vector<Item>> special;
  std::size_t start = 0;
  for (std::size_t i = 1; i <= all.size(); ++i) {
    if (i < all.size() && all[i].v - all[i - 1].v <= abs_tol) continue;
    std::size_t c0 = 0, c1 = 0;
    for (std::size_t k = start; k < i; ++k) (all[k].side == 0 ? c0 : c1)++;
    if (c0 >= 2 || c1 >= 2 || (c0 >= 1 && c1 >= 1)) special.emplace_back(all.begin() + static_cast<std::ptrdiff_t>(start), all.begin() + static_cast<std::ptrdiff_t>(i));
    start = i;
  }
  DegeneracyBlock b;
  if (special.empty()) return b;
  if (special.size() > 1) fail(ErrorKind::MultiBlock, "more than one degenerate eigenvalue in one step");

  std::vector<std::size_t> d, dn;
  double sum = 0;
  for (const Item& it : special[0]) {
    (it.side == 0 ? d : dn).push_back(it.idx);
    sum += it.v;
  }
  std::sort(d.begin(), d.end());
  std::sort(dn.begin(), dn.end());
  if (d.empty()) fail(ErrorKind::NotInterlacing, "repeated eigenvalue of A^(n+1) absent from A^(n)");
  b.lambda = sum / static_cast<double>(special[0].size());
  b.first = d.front();
  b.m = d.size() - 1;
  const std::size_t l = b.first, m = b.m;
  if (dn == range(l, l + m + 1)) {
    b.kind = DegeneracyCase::I;
  } else if (!dn.empty() && dn == range(l, l + m)) {
    b.kind = DegeneracyCase::II;
  } else if (!dn.empty() && dn == range(l + 1, l + m + 1)) {
    b.kind = DegeneracyCase::III;
  } else if (m >= 1 && dn == range(l + 1, l + m)) {
    b.kind = DegeneracyCase::IV;
  } else {
    fail(ErrorKind::NotInterlacing, "degenerate cluster matches no interlacing pattern");
  }
  return b;
}

double projection_norm_sq(const Spectrum& sn, const Spectrum& snp1, const DegeneracyBlock& block) {
  if (block.kind != DegeneracyCase::IV) return 0.0;
  const auto dn = block.next_indices();
  detail::LogProduct p;
  for (std::size_t k = 0; k < snp1.size(); ++k)
    if (!contains(dn, k)) p.mul(block.lambda - snp1[k]);
  for (std::size_t k = 0; k < sn.size(); ++k)
    if (k < block.first || k > block.first + block.m) p.div(block.lambda - sn[k]);
  return std::max(0.0, -p.value());
}

StepResult degenerate_step(const EigDecomp& eig_n, const Spectrum& snp1, const DegeneracyBlock& block,
                           std::span<const int> signs, std::optional<Vector> basis_choice, double tol) {
  const Spectrum& sn = eig_n.spectrum;
  const std::size_t n = sn.size();
  if (snp1.size() != n + 1) fail(ErrorKind::InvalidArgument, "sigma^(n+1) must have n+1 values");
  if (signs.size() != n) fail(ErrorKind::InvalidArgument, "expected one sign per eigenvector of A^(n)");
  const DegeneracyBlock found = classify_degeneracy(sn, snp1, tol);
  if (found.kind != block.kind || found.first != block.first || found.m != block.m)
    fail(ErrorKind::CaseMismatch, "block does not match the spectra (found case " + to_string(found.kind) + ")");
  if (block.kind == DegeneracyCase::None) fail(ErrorKind::CaseMismatch, "step is regular");

  const std::size_t l = block.first, m = block.m;
  const double lambda = block.lambda;
  const auto dn = block.next_indices();
  const Matrix& V = eig_n.vectors;
  const Matrix u_block = V.middleCols(ix(l), ix(m + 1));

  std::vector<Tagged> small;
  for (std::size_t r = 0; r < n; ++r)
    if (r < l || r > l + m) small.push_back({sn[r], V.col(ix(r)), signs[r], static_cast<long>(r)});

  Matrix degenerate_vecs;  // n x k, padded into the eigenvectors for dn
  if (block.kind == DegeneracyCase::IV) {
    Vector u = basis_choice.value_or(Vector::Unit(ix(m + 1), ix(m)));
    if (u.size() != ix(m + 1)) fail(ErrorKind::InvalidArgument, "basis_choice has the wrong length");
    if (u.norm() < 1e-12) fail(ErrorKind::InvalidArgument, "basis_choice is zero");
    u.normalize();
    small.push_back({lambda, u_block * u, signs[l], -1});
    degenerate_vecs = u_block * complement_of(u);
  } else {
    degenerate_vecs = u_block;
  }
  std::stable_sort(small.begin(), small.end(), [](const Tagged& a, const Tagged& b) { return a.value < b.value; });

  std::vector<double> big;
  std::vector<long> big_tag;
  for (std::size_t k = 0; k < snp1.size(); ++k)
    if (!contains(dn, k)) {
      big.push_back(snp1[k]);
      big_tag.push_back(static_cast<long>(k));
    }
  if (block.kind == DegeneracyCase::I) {
    auto pos = std::lower_bound(big.begin(), big.end(), lambda);
    big_tag.insert(big_tag.begin() + (pos - big.begin()), -1);
    big.insert(pos, lambda);
  }

  Matrix basis(ix(n), ix(small.size()));
  std::vector<double> small_vals;
  SignVector small_signs;
  for (std::size_t r = 0; r < small.size(); ++r) {
    basis.col(ix(r)) = small[r].vec;
    small_vals.push_back(small[r].value);
    small_signs.push_back(small[r].sign);
  }
  const Spectrum rs(small_vals), rb(big);
  const double scale = block_scale(sn, snp1);
  const StepGaps g = step_gaps(rs, rb, tol * scale);
  if (!g.regular)
    fail(ErrorKind::InconsistentSharedValue, "reduced problem is not regular; the shared value is inconsistent");

  const SubspaceStep sub = subspace_step(basis, rs, rb, small_signs);

  Matrix vecs = Matrix::Zero(ix(n + 1), ix(n + 1));
  Vector extra;  // case I: eigenvector for the kept copy of lambda
  for (std::size_t k = 0; k < big.size(); ++k) {
    if (big_tag[k] < 0) {
      extra = sub.vectors.col(ix(k));
    } else {
      vecs.col(big_tag[k]) = sub.vectors.col(ix(k));
    }
  }
  for (std::size_t j = 0; j < dn.size(); ++j) {
    if (j < static_cast<std::size_t>(degenerate_vecs.cols())) {
      vecs.col(ix(dn[j])).head(ix(n)) = degenerate_vecs.col(ix(j));
    } else {
      vecs.col(ix(dn[j])) = extra;
    }
  }
  apply_gauge(vecs, Gauge::LastEntryPositive);

  StepResult res;
  res.column = sub.column;
  res.h = snp1.sum() - sn.sum();
  Matrix tilde = Matrix::Zero(ix(n + 1), ix(n + 1));
  tilde.topLeftCorner(ix(n), ix(n)) = V;
  tilde(ix(n), ix(n)) = 1.0;
  res.b_coeffs = vecs.transpose() * tilde;
  res.eig_next = EigDecomp{snp1, std::move(vecs), Gauge::LastEntryPositive};
  return res;
}

}  // namespace mhear
