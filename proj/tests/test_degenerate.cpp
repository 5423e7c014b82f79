#include <doctest.h>

#include "matrixhear/degenerate.hpp"
#include "matrixhear/errors.hpp"
#include "matrixhear/spectral.hpp"
#include "support.hpp"

#include <algorithm>
#include <cmath>

using namespace mhear;

namespace {
using Index = Eigen::Index;
Index ix(std::size_t i) { return static_cast<Index>(i); }

struct LastStep {
  EigDecomp eig;
  Spectrum next;
  DegeneracyBlock block;
  StepResult result;
  Vector truth;
};

LastStep run_last_step(const SymmetricMatrix& a) {
  const std::size_t n = a.size() - 1;
  const Matrix dense = a.dense();
  LastStep s;
  s.eig = eig_sym(a.leading_minor(n));
  s.next = eig_sym(a).spectrum;
  s.block = classify_degeneracy(s.eig.spectrum, s.next);
  s.truth = dense.col(ix(n)).head(ix(n));
  SignVector signs;
  for (Index r = 0; r < ix(n); ++r) signs.push_back(sign_of(s.truth.dot(s.eig.vectors.col(r))));
  std::optional<Vector> u;
  if (s.block.kind == DegeneracyCase::IV) {
    u = (s.eig.vectors.middleCols(ix(s.block.first), ix(s.block.m + 1)).transpose() * s.truth).normalized();
    signs[s.block.first] = 1;
  }
  s.result = degenerate_step(s.eig, s.next, s.block, signs, u);
  return s;
}
}  // namespace

TEST_CASE("classify_degeneracy examples") {
  const DegeneracyBlock a = classify_degeneracy(Spectrum({1, 1}), Spectrum({1, 1, 1}));
  CHECK(a.kind == DegeneracyCase::I);
  CHECK(a.first == 0);
  CHECK(a.m == 1);
  CHECK(a.lambda == doctest::Approx(1.0));

  const DegeneracyBlock b = classify_degeneracy(Spectrum({1, 1}), Spectrum({0, 1, 1}));
  CHECK(b.kind == DegeneracyCase::III);
  CHECK(b.next_indices() == std::vector<std::size_t>{1, 2});

  const DegeneracyBlock c = classify_degeneracy(Spectrum({1, 1}), Spectrum({1, 1, 4}));
  CHECK(c.kind == DegeneracyCase::II);

  const DegeneracyBlock d = classify_degeneracy(Spectrum({0, 1, 1}), Spectrum({-1, 0.5, 1, 2}));
  CHECK(d.kind == DegeneracyCase::IV);
  CHECK(d.first == 1);
  CHECK(d.next_indices() == std::vector<std::size_t>{2});

  CHECK(classify_degeneracy(Spectrum({1, 2}), Spectrum({0, 1.5, 3})).kind == DegeneracyCase::None);

  // shared single value, upper slot
  const DegeneracyBlock e = classify_degeneracy(Spectrum({1, 2}), Spectrum({0, 1, 3}));
  CHECK(e.kind == DegeneracyCase::III);
  CHECK(e.m == 0);
  CHECK(e.next_indices() == std::vector<std::size_t>{1});
  // lower slot
  const DegeneracyBlock f = classify_degeneracy(Spectrum({1, 2}), Spectrum({1, 1.5, 3}));
  CHECK(f.kind == DegeneracyCase::II);
  CHECK(f.m == 0);

  try {
    classify_degeneracy(Spectrum({1, 2}), Spectrum({1, 2, 3}));
    FAIL("expected MultiBlock");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::MultiBlock);
  }
}

TEST_CASE("identity chain") {
  const EigDecomp e2 = eig_sym(Matrix(Matrix::Identity(2, 2)));
  const DegeneracyBlock b = classify_degeneracy(e2.spectrum, Spectrum({1, 1, 1}));
  const int signs[] = {1, 1};
  const StepResult r = degenerate_step(e2, Spectrum({1, 1, 1}), b, signs);
  CHECK(r.column.norm() <= 1e-12);
  CHECK(r.h == doctest::Approx(1.0));
}

TEST_CASE("diag(1,1,5) bordered by a decoupled row") {
  Matrix a = Matrix::Zero(4, 4);
  a.diagonal() << 1, 1, 5, 4;
  a(2, 3) = a(3, 2) = 1.0;
  const LastStep s = run_last_step(SymmetricMatrix::from_dense(a));
  CHECK(s.block.kind == DegeneracyCase::II);
  CHECK(s.block.first == 0);
  CHECK(s.block.m == 1);
  CHECK((s.result.column - s.truth).norm() <= 1e-12);
  CHECK(s.result.h == doctest::Approx(4.0));
}

TEST_CASE("case mismatch is reported") {
  const EigDecomp e2 = eig_sym(Matrix(Matrix::Identity(2, 2)));
  DegeneracyBlock wrong;
  wrong.kind = DegeneracyCase::II;
  wrong.lambda = 1;
  wrong.m = 1;
  const int signs[] = {1, 1};
  try {
    degenerate_step(e2, Spectrum({1, 1, 1}), wrong, signs);
    FAIL("expected CaseMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::CaseMismatch);
  }
}

TEST_CASE("constructed cases I-IV") {
  struct Setup {
    DegeneracyCase kind;
    std::size_t n, l, m;
  };
  const Setup setups[] = {
      {DegeneracyCase::I, 4, 1, 1},   {DegeneracyCase::I, 5, 0, 2},  {DegeneracyCase::I, 3, 1, 0},
      {DegeneracyCase::II, 4, 1, 1},  {DegeneracyCase::II, 6, 2, 2}, {DegeneracyCase::II, 4, 2, 0},
      {DegeneracyCase::III, 4, 0, 1}, {DegeneracyCase::III, 6, 3, 2}, {DegeneracyCase::III, 5, 1, 0},
      {DegeneracyCase::IV, 4, 1, 1},  {DegeneracyCase::IV, 6, 1, 2}, {DegeneracyCase::IV, 5, 3, 1},
  };
  std::uint64_t seed = 40;
  for (const Setup& st : setups) {
    for (int rep = 0; rep < 5; ++rep) {
      CAPTURE(to_string(st.kind));
      CAPTURE(st.n);
      CAPTURE(st.m);
      const test::DegenerateInstance inst = test::make_degenerate(st.kind, st.n, st.l, st.m, seed++);
      const LastStep s = run_last_step(inst.matrix);
      REQUIRE(s.block.kind == st.kind);
      CHECK(s.block.first == st.l);
      CHECK(s.block.m == st.m);
      CHECK((s.result.column - s.truth).norm() <= 1e-8);

      // assembled spectrum
      Matrix big(ix(st.n + 1), ix(st.n + 1));
      big.topLeftCorner(ix(st.n), ix(st.n)) = inst.matrix.leading_minor(st.n).dense();
      big.col(ix(st.n)).head(ix(st.n)) = s.result.column;
      big.row(ix(st.n)).head(ix(st.n)) = s.result.column.transpose();
      big(ix(st.n), ix(st.n)) = s.result.h;
      CHECK(spectrum_residual(big, s.next) <= 1e-8);

      // returned eigenvectors are eigenvectors of the assembled matrix
      const Matrix& W = s.result.eig_next.vectors;
      CHECK((W.transpose() * W - Matrix::Identity(W.cols(), W.cols())).norm() <= 1e-9);
      const Vector lam = Eigen::Map<const Vector>(s.next.values().data(), ix(st.n + 1));
      CHECK(test::max_abs(big * W - W * lam.asDiagonal()) <= 1e-8);

      const Matrix ub = s.eig.vectors.middleCols(ix(st.l), ix(st.m + 1));
      if (st.kind == DegeneracyCase::II || st.kind == DegeneracyCase::III) {
        Matrix dv(ix(st.n + 1), 0);
        for (std::size_t k : s.block.next_indices()) {
          dv.conservativeResize(Eigen::NoChange, dv.cols() + 1);
          dv.col(dv.cols() - 1) = W.col(ix(k));
        }
        const Matrix restricted = dv.transpose() * big * dv;
        CHECK(test::max_abs(restricted - s.block.lambda * Matrix::Identity(dv.cols(), dv.cols())) <= 1e-9);
      }
      if (st.kind == DegeneracyCase::I) {
        const auto dn = s.block.next_indices();
        for (Index k = 0; k < W.cols(); ++k) {
          if (std::find(dn.begin(), dn.end(), static_cast<std::size_t>(k)) != dn.end()) continue;
          CHECK(test::max_abs(ub.transpose() * W.col(k).head(ix(st.n))) <= 1e-9);
        }
      }
      if (st.kind == DegeneracyCase::IV) {
        const double direct = (ub.transpose() * s.truth).squaredNorm();
        CHECK(std::abs(projection_norm_sq(s.eig.spectrum, s.next, s.block) - direct) <= 1e-8);
      }
      if (st.m == 0 && st.kind != DegeneracyCase::I)
        CHECK(std::abs(s.result.column.dot(s.eig.vectors.col(ix(st.l)))) <= 1e-9);

      // whole chain through the guided reconstruction
      const Reconstruction rec = guided_reconstruct(inst.matrix);
      for (const auto& step : rec.steps) CHECK(step.spectrum_residual <= 1e-8);
      CHECK(rec.steps.back().degeneracy == st.kind);
      CHECK(max_abs_diff(rec.matrix, inst.matrix) <= 1e-8);
    }
  }
}

TEST_CASE("shared value in the first step forces a zero column") {
  const EigDecomp e1 = eig_sym(Matrix(Matrix::Constant(1, 1, 1.0)));
  const DegeneracyBlock b = classify_degeneracy(e1.spectrum, Spectrum({1, 3}));
  const int signs[] = {1};
  const StepResult r = degenerate_step(e1, Spectrum({1, 3}), b, signs);
  CHECK(std::abs(r.column(0)) <= 1e-12);
  CHECK(r.h == doctest::Approx(3.0));
}
