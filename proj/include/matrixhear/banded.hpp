#pragma once

#include "matrixhear/types.hpp"

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace mhear {

struct Candidate {
  Vector column;
  SignVector signs;
  double residual = 0;  // squared norm of the entries that must vanish
};

struct CandidateSet {
  std::vector<Candidate> candidates;
  bool too_many = false;  // more than one antipodal pair survived
  std::size_t size() const { return candidates.size(); }
};

// a(s) = sum_r s_r xi_r v(r).
Vector assemble_column(const Matrix& vectors, std::span<const double> xi, std::span<const int> signs);

// Squared norm of a[0 .. n-d-1], the entries outside the band.
double band_residual(const Vector& a, std::size_t d);

double default_band_eps(std::size_t n, double R2);

// Drops candidates whose columns lie within tol of an earlier one. Keeps the
// lexicographically smallest sign vector of each group.
void dedup(CandidateSet& set, double tol = 1e-9);

// All sign vectors whose column vanishes outside the band, by exact pruned
// search. Throws NoSolution when none survive, TooLarge for n > 30.
CandidateSet banded_step(const EigDecomp& eig_n, const Spectrum& snp1, std::size_t d,
                         std::optional<double> eps = {});
// Same search, empty set instead of NoSolution.
CandidateSet banded_candidates(const EigDecomp& eig_n, const Spectrum& snp1, std::size_t d,
                               std::optional<double> eps = {});

// Pentadiagonal step by intersecting the lines <w_r|x> = +-xi_r with the
// circle |x|^2 = R2, where w_r are the last two entries of v(r).
CandidateSet penta_lines_step(const EigDecomp& eig_n, const Spectrum& snp1, double tol = 1e-7);

struct AlphaWitness {
  std::vector<std::size_t> I;
  std::vector<std::size_t> J;
  double alpha = 0;
};

// Detects whether all w_r lie on two lines related by a reflection, which
// lets four points satisfy every line pair.
std::optional<AlphaWitness> alpha_condition(const EigDecomp& eig_n, double tol = 1e-8);

// alpha x^2 + 2 beta x y + gamma y^2 = rho.
struct Conic {
  double alpha = 0, beta = 0, gamma = 0, rho = 0;
  double eval(double x, double y) const { return alpha * x * x + 2 * beta * x * y + gamma * y * y; }
};

struct ConicStep {
  CandidateSet set;
  Conic circle, conic1, conic2;
  double degeneracy_residual = 0;
  bool degenerate = false;
};

// Conic forms of a pentadiagonal step, built from the trailing 2x2 blocks of
// A^(n) and its (shifted) inverse.
ConicStep conic_forms(const SymmetricMatrix& minor, const StepScalars& scalars);

// Throws NoIntersection if the conics share no point of the circle.
ConicStep penta_conics_step(const SymmetricMatrix& minor, const StepScalars& scalars,
                            double tol = 1e-6);

struct FeasibilityReport {
  bool feasible = true;
  std::vector<std::size_t> violating;
  std::vector<double> distances;
};

// Every line pair r must reach the sphere of radius sqrt(R2) within the
// last-d subspace: xi_r <= |w_r| sqrt(R2).
FeasibilityReport feasibility_certificate(const EigDecomp& eig_n, std::span<const double> xi, double R2,
                                          std::size_t d, double tol = 1e-9);

// Per-step candidate search used by reconstruct_banded. The penta methods
// need d = 2 and apply from n = 3 on.
enum class BandedMethod { Search, PentaLines, PentaConics };

struct BandedOptions {
  BandedMethod method = BandedMethod::Search;
  std::optional<double> eps;
  std::size_t max_branches = 64;
  bool residuals = true;
};

// column_signs[c-1] = Sign(A_{max(0,c-d), c}) for columns c = 1..N-1 (0-based).
Reconstruction reconstruct_banded(const SpectralData& sd, std::size_t d, std::span<const int> column_signs,
                                  const BandedOptions& opts = {});

SignVector extract_column_signs(const SymmetricMatrix& a, std::size_t d);

}  // namespace mhear
