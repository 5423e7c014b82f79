#pragma once

#include "matrixhear/banded.hpp"
#include "matrixhear/types.hpp"

#include <optional>
#include <span>
#include <vector>

namespace mhear {

enum class SlidingScheme { Minimal, Optimal };

// Spectra of a banded matrix restricted to a window of fixed size sliding
// down the diagonal.
//   Minimal (window d+1): head = A^(1)..A^(d), window k = A[k..k+d].
//   Optimal (window d+2): head = A^(1)..A^(d+1), window k = A[k..k+d+1].
struct SlidingSpectralData {
  std::size_t n = 0;
  std::size_t d = 0;
  SlidingScheme scheme = SlidingScheme::Minimal;
  std::vector<Spectrum> head;
  std::vector<Spectrum> windows;

  std::size_t window_size() const { return scheme == SlidingScheme::Minimal ? d + 1 : d + 2; }
  std::size_t value_count() const;
  std::size_t expected_count() const;
  // Throws BadWindow when sizes or counts are inconsistent.
  void validate() const;
};

// Number of independent entries of an N x N symmetric matrix of bandwidth d.
std::size_t banded_entry_count(std::size_t n, std::size_t d);

SlidingSpectralData extract_sliding(const SymmetricMatrix& a, std::size_t d, std::size_t window_size);

// Minimal scheme signs: head[n-1] for the head steps n = 1..d-1 and one
// d-vector per window, each in the window's own last-entry-positive gauge.
struct SlidingSigns {
  std::vector<SignVector> head;
  std::vector<SignVector> windows;
  std::size_t count() const;
};

SlidingSigns extract_sliding_signs(const SymmetricMatrix& a, std::size_t d);

Reconstruction reconstruct_sliding_minimal(const SlidingSpectralData& sd, const SlidingSigns& signs);

// Optimal scheme signs: either full head indicators (d steps) or the d head
// column signs, plus one column sign per window (Sign of A_{k+1,k+d+1}).
struct OptimalSigns {
  std::optional<std::vector<SignVector>> head_indicators;
  SignVector head_columns;
  SignVector windows;
  std::size_t count() const;
};

OptimalSigns extract_optimal_signs(const SymmetricMatrix& a, std::size_t d, bool head_indicators = false);

Reconstruction reconstruct_sliding_optimal(const SlidingSpectralData& sd, const OptimalSigns& signs,
                                           const BandedOptions& opts = {});

}  // namespace mhear
