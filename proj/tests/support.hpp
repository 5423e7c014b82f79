#pragma once

#include "matrixhear/oracle.hpp"
#include "matrixhear/types.hpp"

#include <cstdint>

namespace mhear::test {

// Eigen's SelfAdjointEigenSolver with the last-entry-positive gauge applied
// independently of the library code.
struct OracleEig {
  Vector values;
  Matrix vectors;
};
OracleEig oracle_eig(const Matrix& a);

Matrix random_symmetric(std::size_t n, Rng& rng);

double max_abs(const Matrix& a);

// [[a_n, col], [col^T, h]]
SymmetricMatrix bordered(const Matrix& a_n, const Vector& col, double h, std::optional<std::size_t> bw = {});

// N = n+1 matrix whose last step hits the requested degeneracy case with a
// block of m+1 copies at sigma^(n) index l.
struct DegenerateInstance {
  SymmetricMatrix matrix;
  DegeneracyCase kind = DegeneracyCase::None;
  std::size_t l = 0, m = 0;
};
DegenerateInstance make_degenerate(DegeneracyCase kind, std::size_t n, std::size_t l, std::size_t m,
                                   std::uint64_t seed);

// 5x5 pentadiagonal matrix whose 4 -> 5 step meets the alpha-condition.
SymmetricMatrix make_alpha_instance(std::uint64_t seed);

// 6x6 pentadiagonal matrix whose 5 -> 6 step has degenerate conic forms
// while the alpha-condition fails.
SymmetricMatrix make_penta_degenerate(std::uint64_t seed);

// 6x6 pentadiagonal matrix whose block A[2..4] carries the alpha structure,
// so the last optimal-scheme window has four candidates.
SymmetricMatrix make_sliding_alpha(std::uint64_t seed);

}  // namespace mhear::test
