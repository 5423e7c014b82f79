#pragma once

#include "matrixhear/types.hpp"

#include <functional>
#include <span>
#include <utility>

namespace mhear {

struct StepResult {
  Vector column;       // a^(n), length n
  double h = 0;        // A_{n+1,n+1}
  EigDecomp eig_next;  // eigenpairs of A^(n+1)
  Matrix b_coeffs;     // row k: coefficients of v^(n+1)(k) in the basis {(v^(n)(r),0)} u {e_{n+1}}
  bool near_regular = false;
};

struct StepOptions {
  double hard_gap = 1e-10;  // relative gap below which the step is refused
  double warn_gap = 1e-7;   // relative gap below which near_regular is set
  double interlace_tol = 1e-9;
  Gauge gauge = Gauge::LastEntryPositive;
};

StepResult telescopic_step(const EigDecomp& eig_n, const Spectrum& snp1, std::span<const int> signs,
                           const StepOptions& opts = {});

// Regular step restricted to the span of the columns of basis (orthonormal,
// n x p). small has p values, big has p + 1. Returned vectors live in R^{n+1}.
struct SubspaceStep {
  Vector column;
  Matrix vectors;  // (n+1) x (p+1), column k belongs to big[k]
};
SubspaceStep subspace_step(const Matrix& basis, const Spectrum& small, const Spectrum& big,
                           std::span<const int> signs);

struct ReconstructOptions {
  double degeneracy_tol = 1e-8;
  bool residuals = true;
  StepOptions step;
};

// Per-step input when signs are decided on the fly.
struct StepDirective {
  SignVector signs;
  std::optional<Vector> basis_choice;
};
struct DegeneracyBlock;
using DirectiveFn = std::function<StepDirective(std::size_t n, const EigDecomp& eig_n,
                                                const DegeneracyBlock& block)>;

Reconstruction reconstruct_full(const SpectralData& sd, const SignIndicators& signs,
                                const ReconstructOptions& opts = {});
Reconstruction reconstruct_with(const SpectralData& sd, const DirectiveFn& directive,
                                const ReconstructOptions& opts = {});

// Sign indicators (s1, s2) for the 2 -> 3 step in the last-entry-positive
// gauge, from the entries of A^(3). Throws DegenerateM2 when A12 = 0.
std::pair<int, int> signs_2to3(const SymmetricMatrix& m2, double a13, double a23);

// Max |eig(a) - s| relative to max(1, max|s|).
double spectrum_residual(const Matrix& a, const Spectrum& s);

}  // namespace mhear
