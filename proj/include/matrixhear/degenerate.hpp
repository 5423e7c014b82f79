#pragma once

#include "matrixhear/telescopic.hpp"
#include "matrixhear/types.hpp"

#include <optional>
#include <span>

namespace mhear {

// A shared or repeated eigenvalue lambda occupying sigma^(n) indices
// first..first+m (0-based).
struct DegeneracyBlock {
  DegeneracyCase kind = DegeneracyCase::None;
  double lambda = 0;
  std::size_t first = 0;
  std::size_t m = 0;
  // Indices of sigma^(n+1) equal to lambda.
  std::vector<std::size_t> next_indices() const;
};

// tol is relative to max(1, diameter). Throws MultiBlock for more than one
// degenerate cluster and NotInterlacing for a cluster matching no case.
DegeneracyBlock classify_degeneracy(const Spectrum& sn, const Spectrum& snp1, double tol = 1e-8);

// basis_choice (case IV only) is a unit vector in the coordinates of the
// degenerate eigenvectors of A^(n); it fixes u in the reduced problem.
// Its default is the last degenerate eigenvector.
StepResult degenerate_step(const EigDecomp& eig_n, const Spectrum& snp1, const DegeneracyBlock& block,
                           std::span<const int> signs, std::optional<Vector> basis_choice = {},
                           double tol = 1e-8);

// Squared norm of the projection of a^(n) onto the degenerate eigenspace in
// case IV.
double projection_norm_sq(const Spectrum& sn, const Spectrum& snp1, const DegeneracyBlock& block);

}  // namespace mhear
