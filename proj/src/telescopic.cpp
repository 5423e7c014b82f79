#include "matrixhear/telescopic.hpp"

#include "matrixhear/cauchy.hpp"
#include "matrixhear/degenerate.hpp"
#include "matrixhear/errors.hpp"
#include "matrixhear/spectral.hpp"

#include <cmath>

namespace mhear {

namespace {

using Index = Eigen::Index;
Index ix(std::size_t i) { return static_cast<Index>(i); }

void check_signs(std::span<const int> signs, std::size_t n) {
  if (signs.size() != n)
    fail(ErrorKind::InvalidArgument, "expected " + std::to_string(n) + " signs, got " + std::to_string(signs.size()));
  for (int s : signs)
    if (s != 1 && s != -1) fail(ErrorKind::InvalidArgument, "sign indicators must be +1 or -1");
}

}  // namespace

SubspaceStep subspace_step(const Matrix& basis, const Spectrum& small, const Spectrum& big,
                           std::span<const int> signs) {
  const std::size_t p = small.size();
  const Index n = basis.rows();
  const std::vector<double> xi2 = xi_squared(small, big);
  const std::vector<double> b2 = eigvec_last_entry_sq(small, big);

  Vector proj(ix(p));
  for (std::size_t r = 0; r < p; ++r) proj(ix(r)) = signs[r] * std::sqrt(xi2[r]);

  SubspaceStep out;
  out.column = p == 0 ? Vector::Zero(n) : Vector(basis * proj);
  out.vectors = Matrix::Zero(n + 1, ix(p + 1));
  for (std::size_t k = 0; k <= p; ++k) {
    const double last = std::sqrt(b2[k]);
    Vector coeff(ix(p));
    for (std::size_t r = 0; r < p; ++r) coeff(ix(r)) = proj(ix(r)) * last / (big[k] - small[r]);
    Vector v(n + 1);
    v.head(n) = p == 0 ? Vector::Zero(n) : Vector(basis * coeff);
    v(n) = last;
    const double norm = v.norm();
    if (norm > 0) v /= norm;
    out.vectors.col(ix(k)) = v;
  }
  return out;
}

StepResult telescopic_step(const EigDecomp& eig_n, const Spectrum& snp1, std::span<const int> signs,
                           const StepOptions& opts) {
  const Spectrum& sn = eig_n.spectrum;
  const std::size_t n = sn.size();
  if (snp1.size() != n + 1) fail(ErrorKind::InvalidArgument, "sigma^(n+1) must have n+1 values");
  check_signs(signs, n);

  const double scale = std::max(1.0, snp1.diameter());
  const StepGaps g = step_gaps(sn, snp1, opts.interlace_tol * scale);
  if (!g.interlacing) fail(ErrorKind::NotInterlacing, "spectra do not interlace at n=" + std::to_string(n));
  const double gap = std::min(g.within, g.between);
  if (gap < opts.hard_gap * scale)
    fail(ErrorKind::NotRegular, "step n=" + std::to_string(n) + " has a shared or repeated eigenvalue");

  const SubspaceStep sub = subspace_step(eig_n.vectors, sn, snp1, signs);
  StepResult res;
  res.column = sub.column;
  res.h = snp1.sum() - sn.sum();
  res.near_regular = gap < opts.warn_gap * scale;
  Matrix vecs = sub.vectors;
  apply_gauge(vecs, opts.gauge);

  Matrix tilde = Matrix::Zero(ix(n + 1), ix(n + 1));
  tilde.topLeftCorner(ix(n), ix(n)) = eig_n.vectors;
  tilde(ix(n), ix(n)) = 1.0;
  res.b_coeffs = vecs.transpose() * tilde;
  res.eig_next = EigDecomp{snp1, std::move(vecs), opts.gauge};
  return res;
}

double spectrum_residual(const Matrix& a, const Spectrum& s) {
  const Spectrum got = eig_sym(a).spectrum;
  double m = 0;
  for (std::size_t k = 0; k < s.size(); ++k) m = std::max(m, std::abs(got[k] - s[k]));
  return m / std::max(1.0, s.max_abs());
}

Reconstruction reconstruct_with(const SpectralData& sd, const DirectiveFn& directive, const ReconstructOptions& opts) {
  const std::size_t N = sd.size();
  if (N == 0) fail(ErrorKind::InvalidArgument, "no spectra");
  Matrix a(1, 1);
  a(0, 0) = sd.minor(1)[0];
  EigDecomp eig{sd.minor(1), Matrix::Identity(1, 1), opts.step.gauge};
  Reconstruction out;
  for (std::size_t n = 1; n < N; ++n) {
    const Spectrum& next = sd.minor(n + 1);
    const DegeneracyBlock block = classify_degeneracy(eig.spectrum, next, opts.degeneracy_tol);
    const StepDirective dir = directive(n, eig, block);
    StepResult step;
    StepReport rep;
    rep.n = n;
    rep.degeneracy = block.kind;
    if (block.kind == DegeneracyCase::None) {
      step = telescopic_step(eig, next, dir.signs, opts.step);
      rep.method = "telescopic";
    } else {
      step = degenerate_step(eig, next, block, dir.signs, dir.basis_choice, opts.degeneracy_tol);
      rep.method = "degenerate";
    }
    rep.near_regular = step.near_regular;
    Matrix grown(ix(n + 1), ix(n + 1));
    grown.topLeftCorner(ix(n), ix(n)) = a;
    grown.col(ix(n)).head(ix(n)) = step.column;
    grown.row(ix(n)).head(ix(n)) = step.column.transpose();
    grown(ix(n), ix(n)) = step.h;
    a = std::move(grown);
    if (opts.residuals) rep.spectrum_residual = spectrum_residual(a, next);
    out.steps.push_back(rep);
    eig = std::move(step.eig_next);
  }
  out.matrix = SymmetricMatrix::from_dense(a);
  return out;
}

Reconstruction reconstruct_full(const SpectralData& sd, const SignIndicators& signs, const ReconstructOptions& opts) {
  if (signs.steps.size() + 1 != sd.size())
    fail(ErrorKind::InvalidArgument, "need one sign vector per step");
  ReconstructOptions o = opts;
  o.step.gauge = signs.gauge;
  return reconstruct_with(
      sd, [&](std::size_t n, const EigDecomp&, const DegeneracyBlock&) { return StepDirective{signs.steps[n - 1], {}}; },
      o);
}

std::pair<int, int> signs_2to3(const SymmetricMatrix& m2, double a13, double a23) {
  if (m2.size() != 2) fail(ErrorKind::InvalidArgument, "signs_2to3 needs a 2x2 minor");
  const double a11 = m2(0, 0), a12 = m2(0, 1), a22 = m2(1, 1);
  const double scale = std::max({1.0, std::abs(a11), std::abs(a22)});
  if (std::abs(a12) <= 1e-14 * scale) fail(ErrorKind::DegenerateM2, "A12 = 0, eigenvectors are coordinate axes");
  // lambda_2 - A11 = delta + r and A11 - lambda_1 = r - delta, evaluated
  // without cancellation.
  const double delta = 0.5 * (a22 - a11);
  const double r = std::hypot(delta, a12);
  double up, down;
  if (delta >= 0) {
    up = delta + r;
    down = a12 * a12 / up;
  } else {
    down = r - delta;
    up = a12 * a12 / down;
  }
  const double abs_alpha = std::sqrt(up / down);
  const int s = sign_of(a12);
  // Up to normalisation v(1) = (-s|alpha|, 1) and v(2) = (s, |alpha|).
  const int s1 = sign_of(-s * abs_alpha * a13 + a23);
  const int s2 = sign_of(abs_alpha * a23 + s * a13);
  return {s1, s2};
}

}  // namespace mhear
