#include <doctest.h>

#include "matrixhear/errors.hpp"
#include "matrixhear/spectral.hpp"
#include "support.hpp"

#include <cmath>

using namespace mhear;

namespace {
Matrix two_by_two(double off) {
  Matrix a(2, 2);
  a << 1, off, off, 2;
  return a;
}
}  // namespace

TEST_CASE("eig_sym: identity and diagonal") {
  const EigDecomp e = eig_sym(Matrix(Matrix::Identity(3, 3)));
  for (double v : e.spectrum) CHECK(v == doctest::Approx(1.0));
  CHECK((e.vectors.transpose() * e.vectors - Matrix::Identity(3, 3)).norm() < 1e-14);

  Matrix d = Matrix::Zero(2, 2);
  d(1, 1) = 3;
  const EigDecomp ed = eig_sym(d);
  CHECK(ed.spectrum[0] == 0.0);
  CHECK(ed.spectrum[1] == 3.0);
  CHECK(ed.vectors(0, 0) == doctest::Approx(1.0));
  CHECK(ed.vectors(1, 1) == doctest::Approx(1.0));
}

TEST_CASE("eig_sym: 2x2 closed form") {
  const EigDecomp e = eig_sym(two_by_two(std::sqrt(2.0)));
  CHECK(e.spectrum[0] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(std::abs(e.spectrum[0]) < 1e-14);
  CHECK(e.spectrum[1] == doctest::Approx(3.0).epsilon(1e-14));
  // last entries positive, squared (1/3, 2/3)
  CHECK(e.vectors(1, 0) > 0);
  CHECK(e.vectors(1, 1) > 0);
  CHECK(e.vectors(1, 0) * e.vectors(1, 0) == doctest::Approx(1.0 / 3));
  CHECK(e.vectors(1, 1) * e.vectors(1, 1) == doctest::Approx(2.0 / 3));
}

TEST_CASE("eig_sym: reconstruction and agreement with Eigen up to N = 32") {
  Rng rng(11);
  for (std::size_t n = 1; n <= 32; ++n) {
    const Matrix a = test::random_symmetric(n, rng);
    const EigDecomp e = eig_sym(a);
    const Vector lam = Eigen::Map<const Vector>(e.spectrum.values().data(), static_cast<Eigen::Index>(n));
    const Matrix rec = e.vectors * lam.asDiagonal() * e.vectors.transpose();
    CHECK(test::max_abs(rec - a) <= 1e-9);
    const double scale = std::max(1.0, a.norm());
    CHECK(test::max_abs(a * e.vectors - e.vectors * lam.asDiagonal()) <= 1e-10 * scale);
    const test::OracleEig oe = test::oracle_eig(a);
    CHECK(test::max_abs(oe.values - lam) <= 1e-11 * scale);
    CHECK(test::max_abs(oe.vectors - e.vectors) <= 1e-8);
  }
}

TEST_CASE("eig_sym: non-convergence past the sweep cap") {
  Rng rng(3);
  const Matrix a = test::random_symmetric(8, rng);
  try {
    eig_sym(a, Gauge::LastEntryPositive, 1);
    FAIL("expected NonConvergence");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonConvergence);
  }
}

TEST_CASE("gauge fallback for a zero last entry") {
  Matrix v(3, 2);
  v << 0.6, -0.8, -0.8, -0.6, 0.0, 0.0;
  apply_gauge(v, Gauge::LastEntryPositive);
  CHECK(v(1, 0) > 0);
  CHECK(v(1, 1) > 0);
  Matrix w(2, 1);
  w << -1, 0;
  apply_gauge(w, Gauge::FirstNonzeroPositive);
  CHECK(w(0, 0) == 1.0);
}

TEST_CASE("extract_spectral_data examples") {
  const SpectralData sd = extract_spectral_data(SymmetricMatrix::from_dense(two_by_two(std::sqrt(2.0))));
  REQUIRE(sd.size() == 2);
  CHECK(sd.minor(1)[0] == doctest::Approx(1.0));
  CHECK(std::abs(sd.minor(2)[0]) < 1e-14);
  CHECK(sd.minor(2)[1] == doctest::Approx(3.0));

  Matrix d = Matrix::Zero(3, 3);
  d.diagonal() << 5, -1, 2;
  const SpectralData sdd = extract_spectral_data(SymmetricMatrix::from_dense(d));
  CHECK(sdd.minor(2).values() == std::vector<double>{-1, 5});
  CHECK(sdd.minor(3).values() == std::vector<double>{-1, 2, 5});

  const SpectralData id = extract_spectral_data(SymmetricMatrix::from_dense(Matrix::Identity(4, 4)));
  for (const auto& s : id.spectra())
    for (double v : s) CHECK(v == 1.0);
}

TEST_CASE("interlacing of nested spectra over 1000 seeds") {
  double worst = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    Rng rng(seed);
    const std::size_t n = 2 + rng.index(11);
    const SpectralData sd = extract_spectral_data(SymmetricMatrix::from_dense(test::random_symmetric(n, rng)));
    for (std::size_t k = 1; k < n; ++k) {
      const Spectrum &a = sd.minor(k), &b = sd.minor(k + 1);
      for (std::size_t r = 0; r < k; ++r) {
        worst = std::max(worst, b[r] - a[r]);
        worst = std::max(worst, a[r] - b[r + 1]);
      }
    }
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("extract_sign_indicators") {
  const SignIndicators s = extract_sign_indicators(SymmetricMatrix::from_dense(two_by_two(std::sqrt(2.0))));
  REQUIRE(s.steps.size() == 1);
  CHECK(s.steps[0] == SignVector{1});
  const SignIndicators t = extract_sign_indicators(SymmetricMatrix::from_dense(two_by_two(-std::sqrt(2.0))));
  CHECK(t.steps[0] == SignVector{-1});

  // seeded 4x4 against direct projections on Eigen's eigenvectors
  Rng rng(4);
  const Matrix a = test::random_symmetric(4, rng);
  const SignIndicators si = extract_sign_indicators(SymmetricMatrix::from_dense(a));
  for (Eigen::Index n = 1; n < 4; ++n) {
    const test::OracleEig oe = test::oracle_eig(a.topLeftCorner(n, n));
    const Vector col = a.col(n).head(n);
    for (Eigen::Index r = 0; r < n; ++r)
      CHECK(si.steps[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(r)] ==
            sign_of(col.dot(oe.vectors.col(r))));
  }

  try {
    extract_sign_indicators(SymmetricMatrix::from_dense(Matrix::Identity(3, 3)));
    FAIL("expected GaugeAmbiguous");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::GaugeAmbiguous);
  }
}

TEST_CASE("step_scalars examples") {
  const StepScalars a = step_scalars(Spectrum({1}), Spectrum({0, 3}));
  CHECK(a.h == doctest::Approx(2.0));
  CHECK(a.R2 == doctest::Approx(2.0));

  const StepScalars b = step_scalars(Spectrum({0, 3}), Spectrum({-1, 1, 5}));
  // h = 5 - 3, R2 = (1 + 1 + 25 - 0 - 9 - h^2) / 2
  CHECK(b.h == doctest::Approx(2.0));
  CHECK(b.R2 == doctest::Approx(7.0));
  // zero in sigma^(n): auto-shift kicks in
  CHECK(b.inv_shift > 0);

  const StepScalars c = step_scalars(Spectrum({1, 2}), Spectrum({1, 2, 7}));
  CHECK(c.h == doctest::Approx(7.0));
  CHECK(std::abs(c.R2) < 1e-12);

  ScalarOptions no_shift;
  no_shift.auto_shift = false;
  try {
    step_scalars(Spectrum({0, 3}), Spectrum({-1, 1, 5}), no_shift);
    FAIL("expected ZeroSpectrum");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ZeroSpectrum);
  }
}

TEST_CASE("trace identities and quadratic forms on random matrices") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed + 500);
    const std::size_t N = 2 + rng.index(8);
    const Matrix a = test::random_symmetric(N, rng);
    const SpectralData sd = extract_spectral_data(SymmetricMatrix::from_dense(a));
    for (std::size_t n = 1; n < N; ++n) {
      const auto k = static_cast<Eigen::Index>(n);
      const StepScalars sc = step_scalars(sd.minor(n), sd.minor(n + 1));
      const Vector col = a.col(k).head(k);
      const Matrix an = a.topLeftCorner(k, k);
      CHECK(std::abs(sc.h - a(k, k)) <= 1e-9);
      CHECK(std::abs(sc.R2 - col.squaredNorm()) <= 1e-8);
      CHECK(std::abs(sc.quad_form() - col.dot(an * col)) <= 1e-8);
      REQUIRE(sc.inv_rho.has_value());
      const Matrix shifted = an + sc.inv_shift * Matrix::Identity(k, k);
      const double direct = col.dot(shifted.ldlt().solve(col));
      const double scale = std::max(1.0, std::abs(direct));
      CHECK(std::abs(*sc.inv_rho - direct) <= 1e-8 * scale);
    }
  }
}

TEST_CASE("check_regular examples") {
  CHECK(check_regular(SpectralData({Spectrum({1}), Spectrum({0, 3})})).regular);
  CHECK_FALSE(check_regular(SpectralData({Spectrum({1}), Spectrum({1, 3})})).regular);
  // degenerate sigma^(2)
  const RegularityReport r =
      check_regular(SpectralData({Spectrum({1}), Spectrum({1, 1}), Spectrum({0, 1, 3})}));
  CHECK_FALSE(r.regular);
  CHECK_FALSE(r.steps.at(1).regular);
}

TEST_CASE("Spectrum validation") {
  CHECK_THROWS_AS(Spectrum({2, 1}), Error);
  CHECK_THROWS_AS(Spectrum({NAN}), Error);
  CHECK(Spectrum::from_unsorted({3, 1, 2}).values() == std::vector<double>{1, 2, 3});
  CHECK_THROWS_AS(SpectralData({Spectrum({1}), Spectrum({1})}), Error);
}
