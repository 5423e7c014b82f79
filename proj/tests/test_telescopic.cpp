#include <doctest.h>

#include "matrixhear/errors.hpp"
#include "matrixhear/spectral.hpp"
#include "matrixhear/telescopic.hpp"
#include "support.hpp"

#include <cmath>

using namespace mhear;

namespace {
using Index = Eigen::Index;

Matrix random_regular(std::size_t n, std::uint64_t seed) {
  return gen_random_banded({n, n - 1, seed}).dense();
}
}  // namespace

TEST_CASE("1 -> 2 step") {
  const EigDecomp e1 = eig_sym(Matrix(Matrix::Constant(1, 1, 1.0)));
  const int plus[] = {1};
  const StepResult r = telescopic_step(e1, Spectrum({0, 3}), plus);
  CHECK(r.column(0) == doctest::Approx(std::sqrt(2.0)));
  CHECK(r.h == doctest::Approx(2.0));
  const int minus[] = {-1};
  const StepResult m = telescopic_step(e1, Spectrum({0, 3}), minus);
  CHECK(m.column(0) == doctest::Approx(-std::sqrt(2.0)));
}

TEST_CASE("step with true signs reproduces a seeded 5x5") {
  const Matrix a = random_regular(5, 21);
  const SignIndicators s = extract_sign_indicators(SymmetricMatrix::from_dense(a));
  const SpectralData sd = extract_spectral_data(SymmetricMatrix::from_dense(a));
  const EigDecomp e4 = eig_sym(Matrix(a.topLeftCorner(4, 4)));
  const StepResult r = telescopic_step(e4, sd.minor(5), s.steps[3]);
  CHECK(test::max_abs(r.column - a.col(4).head(4)) <= 1e-9);
  CHECK(std::abs(r.h - a(4, 4)) <= 1e-9);

  // eigenvectors of A^(5): compare with Eigen and with the b coefficients
  const test::OracleEig oe = test::oracle_eig(a);
  CHECK(test::max_abs(r.eig_next.vectors - oe.vectors) <= 1e-8);
  for (Index k = 0; k < 5; ++k) {
    Vector v(5);
    v.head(4) = e4.vectors * r.b_coeffs.row(k).head(4).transpose();
    v(4) = r.b_coeffs(k, 4);
    CHECK((v - r.eig_next.vectors.col(k)).norm() <= 1e-9);
  }
}

TEST_CASE("rank-2 structure of the bordering") {
  const Matrix a = random_regular(6, 22);
  const EigDecomp e5 = eig_sym(Matrix(a.topLeftCorner(5, 5)));
  const SpectralData sd = extract_spectral_data(SymmetricMatrix::from_dense(a));
  const SignIndicators s = extract_sign_indicators(SymmetricMatrix::from_dense(a));
  const StepResult r = telescopic_step(e5, sd.minor(6), s.steps[4]);
  Matrix rebuilt = Matrix::Zero(6, 6);
  rebuilt.topLeftCorner(5, 5) = a.topLeftCorner(5, 5);
  rebuilt.col(5).head(5) = r.column;
  rebuilt.row(5).head(5) = r.column.transpose();
  rebuilt(5, 5) = r.h;
  Matrix tilde = Matrix::Zero(6, 6);
  tilde.topLeftCorner(5, 5) = a.topLeftCorner(5, 5);
  const Eigen::JacobiSVD<Matrix> svd(rebuilt - tilde);
  CHECK(svd.singularValues()(2) <= 1e-10);
  CHECK(spectrum_residual(rebuilt, sd.minor(6)) <= 1e-8);
}

TEST_CASE("gauge independence of the column") {
  const Matrix a = random_regular(6, 23);
  const SymmetricMatrix sa = SymmetricMatrix::from_dense(a);
  const SpectralData sd = extract_spectral_data(sa);
  const SignIndicators s = extract_sign_indicators(sa);
  const EigDecomp e5 = eig_sym(Matrix(a.topLeftCorner(5, 5)));
  const StepResult base = telescopic_step(e5, sd.minor(6), s.steps[4]);
  Rng rng(1);
  for (int t = 0; t < 20; ++t) {
    EigDecomp flipped = e5;
    SignVector signs = s.steps[4];
    for (std::size_t r = 0; r < 5; ++r)
      if (rng.sign() < 0) {
        flipped.vectors.col(static_cast<Index>(r)) *= -1.0;
        signs[r] = -signs[r];
      }
    const StepResult alt = telescopic_step(flipped, sd.minor(6), signs);
    CHECK(test::max_abs(alt.column - base.column) <= 1e-12);
  }
}

TEST_CASE("round trip over seeded matrices") {
  double worst = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng pick(seed);
    const std::size_t n = 3 + pick.index(6);
    const SymmetricMatrix a = gen_random_banded({n, n - 1, seed});
    const Reconstruction rec = reconstruct_full(extract_spectral_data(a), extract_sign_indicators(a));
    worst = std::max(worst, max_abs_diff(rec.matrix, a));
    for (const auto& st : rec.steps) CHECK(st.spectrum_residual <= 1e-8);
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("8x8 round trip and uniqueness probe") {
  const SymmetricMatrix a = gen_random_banded({8, 7, 99});
  const SpectralData sd = extract_spectral_data(a);
  SignIndicators s = extract_sign_indicators(a);
  CHECK(max_abs_diff(reconstruct_full(sd, s).matrix, a) <= 1e-8);
  s.steps[5][2] = -s.steps[5][2];
  const Reconstruction other = reconstruct_full(sd, s);
  CHECK(max_abs_diff(other.matrix, a) > 1e-3);
  // spectra still honoured
  const SpectralData again = extract_spectral_data(other.matrix);
  for (std::size_t k = 1; k <= 8; ++k)
    for (std::size_t r = 0; r < k; ++r) CHECK(std::abs(again.minor(k)[r] - sd.minor(k)[r]) <= 1e-8);
}

TEST_CASE("diagonal data shares two values in one step") {
  Matrix d = Matrix::Zero(3, 3);
  d.diagonal() << 1, 2, 3;
  SignIndicators s;
  s.steps = {{1}, {1, 1}};
  try {
    reconstruct_full(extract_spectral_data(SymmetricMatrix::from_dense(d)), s);
    FAIL("expected MultiBlock");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MultiBlock);
  }
}

TEST_CASE("signs_2to3 against extraction and brute force") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const SymmetricMatrix a = gen_random_banded({3, 2, seed + 300});
    const auto [s1, s2] = signs_2to3(a.leading_minor(2), a(0, 2), a(1, 2));
    const SignIndicators si = extract_sign_indicators(a);
    CHECK(si.steps[1] == SignVector{s1, s2});

    const SpectralData sd = extract_spectral_data(a);
    const EigDecomp e2 = eig_sym(a.leading_minor(2));
    const Vector col = a.dense().col(2).head(2);
    int hits = 0;
    for (int p : {1, -1})
      for (int q : {1, -1}) {
        const int sg[] = {p, q};
        if ((telescopic_step(e2, sd.minor(3), sg).column - col).norm() <= 1e-9) ++hits;
      }
    CHECK(hits == 1);

    // negated column: reconstruction gives the negated column
    const auto [t1, t2] = signs_2to3(a.leading_minor(2), -a(0, 2), -a(1, 2));
    const int sg[] = {t1, t2};
    CHECK((telescopic_step(e2, sd.minor(3), sg).column + col).norm() <= 1e-9);
  }
}

TEST_CASE("signs_2to3 rejects a diagonal 2x2 minor") {
  SymmetricMatrix m(2);
  m.set(0, 0, 1);
  m.set(1, 1, 2);
  try {
    signs_2to3(m, 0.5, 0.5);
    FAIL("expected DegenerateM2");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateM2);
  }
}

TEST_CASE("telescopic_step errors") {
  const EigDecomp e1 = eig_sym(Matrix(Matrix::Constant(1, 1, 1.0)));
  const int plus[] = {1};
  try {
    telescopic_step(e1, Spectrum({1, 3}), plus);
    FAIL("expected NotRegular");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotRegular);
  }
  try {
    telescopic_step(e1, Spectrum({2, 3}), plus);
    FAIL("expected NotInterlacing");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotInterlacing);
  }
}
