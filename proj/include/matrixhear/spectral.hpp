#pragma once

#include "matrixhear/types.hpp"

namespace mhear {

// Cyclic Jacobi eigensolver. Eigenpairs sorted ascending, eigenvectors
// normalised and fixed by the gauge. Throws NonConvergence past max_sweeps.
EigDecomp eig_sym(const Matrix& a, Gauge gauge = Gauge::LastEntryPositive, int max_sweeps = 100);
EigDecomp eig_sym(const SymmetricMatrix& a, Gauge gauge = Gauge::LastEntryPositive);

// Flips eigenvector columns in place to satisfy the gauge. Under
// LastEntryPositive the last entry above fallback_tol in magnitude is made
// positive; FirstNonzeroPositive does the same for the first such entry.
void apply_gauge(Matrix& vectors, Gauge gauge, double fallback_tol = 1e-10);

SpectralData extract_spectral_data(const SymmetricMatrix& a);

// Throws GaugeAmbiguous when a minor has eigenvalues closer than
// degenerate_tol (relative), since its eigenvectors are then not unique.
SignIndicators extract_sign_indicators(const SymmetricMatrix& a, Gauge gauge = Gauge::LastEntryPositive,
                                       double degenerate_tol = 1e-8);

struct ScalarOptions {
  bool with_inverse = true;
  bool auto_shift = true;
  double zero_tol = 1e-8;
};

StepScalars step_scalars(const Spectrum& sn, const Spectrum& snp1, const ScalarOptions& opts = {});

struct StepGaps {
  std::size_t n = 0;
  double within = 0;   // smallest gap inside sigma^(n)
  double between = 0;  // smallest |lambda^(n)_r - lambda^(n+1)_k|
  bool interlacing = true;
  bool regular = true;
};

struct RegularityReport {
  bool regular = true;
  double scale = 1;
  std::vector<StepGaps> steps;
};

// Gaps are compared against tol * max(1, diameter) of the whole data.
RegularityReport check_regular(const SpectralData& sd, double tol = 1e-7);
StepGaps step_gaps(const Spectrum& sn, const Spectrum& snp1, double abs_tol);

}  // namespace mhear
