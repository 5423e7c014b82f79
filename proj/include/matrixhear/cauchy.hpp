#pragma once

#include "matrixhear/types.hpp"

#include <string>
#include <vector>

namespace mhear {

// C_ij = 1 / (x_i - y_j). All x_i and y_j pairwise distinct.
struct CauchyPair {
  std::vector<double> x;
  std::vector<double> y;
  std::size_t size() const { return x.size(); }
  double min_separation() const;
};

Matrix cauchy_matrix(const CauchyPair& p);

// Closed form inverse. Throws IllConditioned if some pair of points is
// closer than gap_tol (absolute).
Matrix cauchy_inverse(const CauchyPair& p, double gap_tol = 1e-12);

// Inverse of the Vandermonde matrix whose row k holds t_i^k.
Matrix vandermonde(const std::vector<double>& t);
Matrix vandermonde_inverse(const std::vector<double>& t);

// Elementary symmetric polynomials e_0..e_m of t.
std::vector<double> elementary_symmetric(const std::vector<double>& t);

// xi_r^2 = |<a|v(r)>|^2 for the step sigma^(n) -> sigma^(n+1).
// Throws NotInterlacing when a value is negative beyond roundoff.
std::vector<double> xi_squared(const Spectrum& sn, const Spectrum& snp1);

// |b_{k,n+1}|^2, the squared last entry of each eigenvector of A^(n+1).
std::vector<double> eigvec_last_entry_sq(const Spectrum& sn, const Spectrum& snp1);

// Residual of the scalar consistency relation that ties h to the spectra.
double consistency_residual(const Spectrum& sn, const Spectrum& snp1, double h);

struct IdentityCheck {
  std::string name;
  double residual = 0;
  bool skipped = false;
};

struct IdentityReport {
  std::vector<IdentityCheck> checks;
  double max_residual() const;
};

// Residuals are relative to the magnitude of the summed terms.
IdentityReport cauchy_identity_suite(const CauchyPair& p);

}  // namespace mhear
