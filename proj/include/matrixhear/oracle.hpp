#pragma once

#include "matrixhear/banded.hpp"
#include "matrixhear/cauchy.hpp"
#include "matrixhear/types.hpp"

#include <cstdint>
#include <functional>
#include <random>

namespace mhear {

// Seeded generator with a platform-independent double stream: mt19937_64
// is fully specified, and doubles are built from the top 53 bits.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  double normal();
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(eng_() % n); }
  int sign() { return (eng_() >> 63) ? 1 : -1; }
  std::uint64_t next() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

struct InstanceSpec {
  std::size_t n = 4;
  std::size_t d = 3;  // d >= n-1 means full
  std::uint64_t seed = 0;
  double lo = -1, hi = 1;
  double regularity_margin = 1e-6;
  int max_attempts = 100;
};

// Random symmetric matrix of bandwidth d with entries in [lo, hi],
// regenerated until every nested step is regular with the given margin.
// Throws CannotSatisfyMargin after max_attempts.
SymmetricMatrix gen_random_banded(const InstanceSpec& spec);

// Random orthogonal matrix (QR of a Gaussian matrix).
Matrix random_orthogonal(std::size_t n, Rng& rng);

// Strictly interlacing pair sigma^(n) (n values) and sigma^(n+1).
std::pair<Spectrum, Spectrum> gen_interlacing_pair(std::size_t n, Rng& rng, double min_gap = 0.2,
                                                   double max_gap = 1.2);

// 2n distinct points, randomly split between x and y.
CauchyPair gen_cauchy_pair(std::size_t n, Rng& rng);

using ColumnPredicate = std::function<bool(const Vector&)>;

// Enumerates all 2^n sign vectors and keeps those whose column passes
// accept. Throws TooLarge for n > 20.
CandidateSet brute_force_step(const EigDecomp& eig_n, const Spectrum& snp1, const ColumnPredicate& accept);

// Predicate used by banded_step, for comparing both routes.
ColumnPredicate band_predicate(std::size_t d, double eps);

// Reconstructs a known matrix from its spectra, drawing signs (and the
// case IV basis choice) from the source at every step.
Reconstruction guided_reconstruct(const SymmetricMatrix& source, double degeneracy_tol = 1e-8);

}  // namespace mhear
