#include "matrixhear/sliding.hpp"

#include "matrixhear/errors.hpp"
#include "matrixhear/spectral.hpp"
#include "matrixhear/telescopic.hpp"

#include <cmath>

namespace mhear {

namespace {

using Index = Eigen::Index;
Index ix(std::size_t i) { return static_cast<Index>(i); }

Spectrum block_spectrum(const Matrix& a, std::size_t start, std::size_t len) {
  return eig_sym(Matrix(a.block(ix(start), ix(start), ix(len), ix(len)))).spectrum;
}

SignVector column_signs_against(const Matrix& minor, const Vector& col) {
  const EigDecomp e = eig_sym(minor);
  SignVector s;
  for (Index r = 0; r < e.vectors.cols(); ++r) s.push_back(sign_of(col.dot(e.vectors.col(r))));
  return s;
}

}  // namespace

std::size_t banded_entry_count(std::size_t n, std::size_t d) {
  if (d + 1 >= n) return n * (n + 1) / 2;
  return n * (d + 1) - d * (d + 1) / 2;
}

std::size_t SlidingSpectralData::value_count() const {
  std::size_t c = 0;
  for (const auto& s : head) c += s.size();
  for (const auto& s : windows) c += s.size();
  return c;
}

std::size_t SlidingSpectralData::expected_count() const {
  const std::size_t nd = banded_entry_count(n, d);
  return scheme == SlidingScheme::Minimal ? nd : nd + n - d - 1;
}

void SlidingSpectralData::validate() const {
  if (d == 0) fail(ErrorKind::BadWindow, "bandwidth must be at least 1");
  const std::size_t head_len = scheme == SlidingScheme::Minimal ? d : d + 1;
  if (head.size() != head_len) fail(ErrorKind::BadWindow, "head must hold " + std::to_string(head_len) + " spectra");
  if (n != head_len + windows.size())
    fail(ErrorKind::BadWindow, "matrix size does not match the number of windows");
  for (std::size_t k = 0; k < head.size(); ++k)
    if (head[k].size() != k + 1) fail(ErrorKind::BadWindow, "head spectrum " + std::to_string(k + 1) + " has wrong size");
  for (const auto& w : windows)
    if (w.size() != window_size()) fail(ErrorKind::BadWindow, "window spectrum has wrong size");
  if (value_count() != expected_count())
    fail(ErrorKind::BadWindow, "value count " + std::to_string(value_count()) + " differs from " +
                                   std::to_string(expected_count()));
}

SlidingSpectralData extract_sliding(const SymmetricMatrix& a, std::size_t d, std::size_t window_size) {
  const std::size_t N = a.size();
  SlidingSpectralData sd;
  sd.n = N;
  sd.d = d;
  if (d == 0) fail(ErrorKind::BadWindow, "bandwidth must be at least 1");
  if (window_size == d + 1) {
    sd.scheme = SlidingScheme::Minimal;
  } else if (window_size == d + 2) {
    sd.scheme = SlidingScheme::Optimal;
  } else {
    fail(ErrorKind::BadWindow, "window size must be d+1 or d+2");
  }
  if (N < window_size) fail(ErrorKind::BadWindow, "matrix smaller than the window");
  if (a.actual_bandwidth() > d) fail(ErrorKind::BadWindow, "matrix is wider than the band");
  const Matrix full = a.dense();
  const std::size_t head_len = window_size - 1;
  for (std::size_t k = 1; k <= head_len; ++k) sd.head.push_back(block_spectrum(full, 0, k));
  for (std::size_t k = 0; k + window_size <= N; ++k) sd.windows.push_back(block_spectrum(full, k, window_size));
  return sd;
}

std::size_t SlidingSigns::count() const {
  std::size_t c = 0;
  for (const auto& s : head) c += s.size();
  for (const auto& s : windows) c += s.size();
  return c;
}

SlidingSigns extract_sliding_signs(const SymmetricMatrix& a, std::size_t d) {
  const std::size_t N = a.size();
  if (d == 0 || N < d + 1) fail(ErrorKind::BadWindow, "matrix too small for the window");
  const Matrix full = a.dense();
  SlidingSigns s;
  for (std::size_t n = 1; n < d; ++n)
    s.head.push_back(column_signs_against(full.topLeftCorner(ix(n), ix(n)), full.col(ix(n)).head(ix(n))));
  for (std::size_t k = 0; k + d < N; ++k)
    s.windows.push_back(column_signs_against(full.block(ix(k), ix(k), ix(d), ix(d)),
                                             full.col(ix(k + d)).segment(ix(k), ix(d))));
  return s;
}

Reconstruction reconstruct_sliding_minimal(const SlidingSpectralData& sd, const SlidingSigns& signs) {
  sd.validate();
  if (sd.scheme != SlidingScheme::Minimal) fail(ErrorKind::BadWindow, "expected windows of size d+1");
  const std::size_t N = sd.n, d = sd.d;
  if (signs.head.size() + 1 != d || signs.windows.size() != sd.windows.size())
    fail(ErrorKind::InvalidArgument, "sign data does not match the windows");
  Matrix a = Matrix::Zero(ix(N), ix(N));
  a(0, 0) = sd.head[0][0];
  EigDecomp eig{sd.head[0], Matrix::Identity(1, 1)};
  Reconstruction out;
  for (std::size_t n = 1; n < d; ++n) {
    StepResult step = telescopic_step(eig, sd.head[n], signs.head[n - 1]);
    a.col(ix(n)).head(ix(n)) = step.column;
    a.row(ix(n)).head(ix(n)) = step.column.transpose();
    a(ix(n), ix(n)) = step.h;
    StepReport rep;
    rep.n = n;
    rep.method = "sliding-minimal";
    rep.near_regular = step.near_regular;
    rep.spectrum_residual = spectrum_residual(a.topLeftCorner(ix(n + 1), ix(n + 1)), sd.head[n]);
    out.steps.push_back(rep);
    eig = std::move(step.eig_next);
  }
  for (std::size_t k = 0; k < sd.windows.size(); ++k) {
    const EigDecomp em = eig_sym(Matrix(a.block(ix(k), ix(k), ix(d), ix(d))));
    StepResult step = telescopic_step(em, sd.windows[k], signs.windows[k]);
    const std::size_t c = k + d;
    a.col(ix(c)).segment(ix(k), ix(d)) = step.column;
    a.row(ix(c)).segment(ix(k), ix(d)) = step.column.transpose();
    a(ix(c), ix(c)) = step.h;
    StepReport rep;
    rep.n = c;
    rep.method = "sliding-minimal";
    rep.near_regular = step.near_regular;
    rep.spectrum_residual = spectrum_residual(a.block(ix(k), ix(k), ix(d + 1), ix(d + 1)), sd.windows[k]);
    out.steps.push_back(rep);
  }
  out.matrix = SymmetricMatrix::from_dense(a, d);
  return out;
}

std::size_t OptimalSigns::count() const {
  std::size_t c = windows.size();
  if (head_indicators) {
    for (const auto& s : *head_indicators) c += s.size();
  } else {
    c += head_columns.size();
  }
  return c;
}

OptimalSigns extract_optimal_signs(const SymmetricMatrix& a, std::size_t d, bool head_indicators) {
  const std::size_t N = a.size();
  if (N < d + 2) fail(ErrorKind::BadWindow, "matrix smaller than the window");
  OptimalSigns s;
  const SignVector cols = extract_column_signs(a, d);
  s.head_columns.assign(cols.begin(), cols.begin() + static_cast<std::ptrdiff_t>(d));
  s.windows.assign(cols.begin() + static_cast<std::ptrdiff_t>(d), cols.end());
  if (head_indicators) s.head_indicators = extract_sign_indicators(a.leading_minor(d + 1)).steps;
  return s;
}

Reconstruction reconstruct_sliding_optimal(const SlidingSpectralData& sd, const OptimalSigns& signs,
                                           const BandedOptions& opts) {
  sd.validate();
  if (sd.scheme != SlidingScheme::Optimal) fail(ErrorKind::BadWindow, "expected windows of size d+2");
  const std::size_t N = sd.n, d = sd.d;
  if (signs.windows.size() != sd.windows.size()) fail(ErrorKind::InvalidArgument, "need one sign per window");
  if (signs.head_indicators ? signs.head_indicators->size() != d : signs.head_columns.size() != d)
    fail(ErrorKind::InvalidArgument, "need d head signs");

  struct Branch {
    Matrix a;
    EigDecomp eig;
    std::vector<StepReport> steps;
  };
  std::vector<Branch> branches;
  {
    Matrix a = Matrix::Zero(ix(N), ix(N));
    a(0, 0) = sd.head[0][0];
    branches.push_back({a, EigDecomp{sd.head[0], Matrix::Identity(1, 1)}, {}});
  }
  auto settle = [&](std::vector<Branch>& grown, std::size_t n) {
    if (grown.empty()) fail(ErrorKind::NoSolution, "no banded matrix fits the windows at column " + std::to_string(n));
    if (grown.size() > opts.max_branches) fail(ErrorKind::Ambiguous, "too many surviving branches");
    branches = std::move(grown);
  };

  for (std::size_t n = 1; n <= d; ++n) {
    std::vector<Branch> grown;
    for (const Branch& b : branches) {
      std::vector<SignVector> choices;
      if (signs.head_indicators) {
        choices.push_back((*signs.head_indicators)[n - 1]);
      } else {
        for (const Candidate& c : banded_candidates(b.eig, sd.head[n], d).candidates)
          if (sign_of(c.column(0)) == signs.head_columns[n - 1]) choices.push_back(c.signs);
      }
      for (const SignVector& s : choices) {
        StepResult step = telescopic_step(b.eig, sd.head[n], s);
        Branch nb{b.a, std::move(step.eig_next), b.steps};
        nb.a.col(ix(n)).head(ix(n)) = step.column;
        nb.a.row(ix(n)).head(ix(n)) = step.column.transpose();
        nb.a(ix(n), ix(n)) = step.h;
        StepReport rep;
        rep.n = n;
        rep.method = "sliding-optimal";
        rep.near_regular = step.near_regular;
        rep.candidates = choices.size();
        if (opts.residuals) rep.spectrum_residual = spectrum_residual(nb.a.topLeftCorner(ix(n + 1), ix(n + 1)), sd.head[n]);
        nb.steps.push_back(rep);
        grown.push_back(std::move(nb));
      }
    }
    settle(grown, n);
  }

  for (std::size_t k = 0; k < sd.windows.size(); ++k) {
    const std::size_t c = k + d + 1;
    std::vector<Branch> grown;
    for (const Branch& b : branches) {
      const EigDecomp em = eig_sym(Matrix(b.a.block(ix(k), ix(k), ix(d + 1), ix(d + 1))));
      const CandidateSet set = banded_candidates(em, sd.windows[k], d, opts.eps);
      StepReport rep;
      rep.n = c;
      rep.method = "sliding-optimal";
      rep.candidates = set.size();
      if (d == 2) rep.alpha_condition = alpha_condition(em).has_value();
      for (const Candidate& cand : set.candidates) {
        if (sign_of(cand.column(1)) != signs.windows[k]) continue;
        StepResult step = telescopic_step(em, sd.windows[k], cand.signs);
        Branch nb{b.a, EigDecomp{}, b.steps};
        const Vector col = step.column.tail(ix(d));
        nb.a.col(ix(c)).segment(ix(k + 1), ix(d)) = col;
        nb.a.row(ix(c)).segment(ix(k + 1), ix(d)) = col.transpose();
        nb.a(ix(c), ix(c)) = step.h;
        StepReport r = rep;
        r.near_regular = step.near_regular;
        if (opts.residuals)
          r.spectrum_residual = spectrum_residual(nb.a.block(ix(k), ix(k), ix(d + 2), ix(d + 2)), sd.windows[k]);
        nb.steps.push_back(r);
        grown.push_back(std::move(nb));
      }
    }
    settle(grown, c);
  }

  if (branches.size() > 1) {
    std::vector<SymmetricMatrix> all;
    for (const Branch& b : branches) all.push_back(SymmetricMatrix::from_dense(b.a, d));
    throw AmbiguousError(std::to_string(branches.size()) + " banded matrices fit the windows", std::move(all));
  }
  return Reconstruction{SymmetricMatrix::from_dense(branches[0].a, d), branches[0].steps};
}

}  // namespace mhear
