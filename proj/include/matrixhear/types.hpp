#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mhear {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using SignVector = std::vector<int>;

// Sign(x) = +1 for x >= 0, -1 otherwise.
inline int sign_of(double x) { return x >= 0.0 ? 1 : -1; }

// Real symmetric matrix stored as its packed upper triangle. An optional
// bandwidth d means entries with |i - j| > d are structurally zero.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(std::size_t n, std::optional<std::size_t> bandwidth = {});

  // Reads the upper triangle of a; the lower triangle is ignored.
  static SymmetricMatrix from_dense(const Matrix& a, std::optional<std::size_t> bandwidth = {});

  std::size_t size() const { return n_; }
  std::optional<std::size_t> bandwidth() const { return bandwidth_; }
  // Smallest d such that all entries with |i - j| > d are exactly zero.
  std::size_t actual_bandwidth() const;

  double operator()(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, double v);

  Matrix dense() const;
  SymmetricMatrix leading_minor(std::size_t k) const;
  SymmetricMatrix principal_block(std::size_t start, std::size_t len) const;
  SymmetricMatrix with_bandwidth(std::optional<std::size_t> d) const;

  const std::vector<double>& packed_upper() const { return upper_; }

  friend bool operator==(const SymmetricMatrix&, const SymmetricMatrix&) = default;

 private:
  std::size_t index(std::size_t i, std::size_t j) const;

  std::size_t n_ = 0;
  std::optional<std::size_t> bandwidth_;
  std::vector<double> upper_;
};

double max_abs_diff(const SymmetricMatrix& a, const SymmetricMatrix& b);

// Ascending list of eigenvalues.
class Spectrum {
 public:
  Spectrum() = default;
  // Throws InvalidArgument unless values are finite and non-decreasing.
  explicit Spectrum(std::vector<double> values);
  static Spectrum from_unsorted(std::vector<double> values);

  std::size_t size() const { return v_.size(); }
  bool empty() const { return v_.empty(); }
  double operator[](std::size_t i) const { return v_[i]; }
  const std::vector<double>& values() const { return v_; }
  auto begin() const { return v_.begin(); }
  auto end() const { return v_.end(); }

  double sum() const;
  double power_sum(int p) const;
  double diameter() const;
  double max_abs() const;
  double min_gap() const;

  friend bool operator==(const Spectrum&, const Spectrum&) = default;

 private:
  std::vector<double> v_;
};

// Spectra of the nested leading minors A^(1), ..., A^(N).
class SpectralData {
 public:
  SpectralData() = default;
  explicit SpectralData(std::vector<Spectrum> spectra);

  std::size_t size() const { return s_.size(); }
  // Spectrum of the k x k leading minor, 1 <= k <= size().
  const Spectrum& minor(std::size_t k) const { return s_.at(k - 1); }
  const std::vector<Spectrum>& spectra() const { return s_; }
  double scale() const;

 private:
  std::vector<Spectrum> s_;
};

enum class Gauge { LastEntryPositive, FirstNonzeroPositive };

std::string to_string(Gauge g);
Gauge gauge_from_string(const std::string& s);

struct EigDecomp {
  Spectrum spectrum;
  Matrix vectors;  // column k is the eigenvector of spectrum[k]
  Gauge gauge = Gauge::LastEntryPositive;
};

// Sign indicators per step: steps[n-1] holds s^(n)_r = Sign(<a^(n)|v^(n)(r)>)
// for r = 1..n, used to build A^(n+1) from A^(n).
struct SignIndicators {
  std::vector<SignVector> steps;
  Gauge gauge = Gauge::LastEntryPositive;
};

struct StepScalars {
  double h = 0;         // new diagonal entry
  double R2 = 0;        // squared norm of the new column
  double cubic_rho = 0;  // (delta tr A^3 - h^3) / 3 = <a|A|a> + h R2
  std::optional<double> inv_rho;  // <a|(A + inv_shift I)^{-1}|a>
  double inv_shift = 0;
  double quad_form() const { return cubic_rho - h * R2; }
};

enum class DegeneracyCase { None, I, II, III, IV };
std::string to_string(DegeneracyCase c);

struct StepReport {
  std::size_t n = 0;  // step builds A^(n+1) from A^(n)
  std::string method;
  DegeneracyCase degeneracy = DegeneracyCase::None;
  bool near_regular = false;
  std::size_t candidates = 1;
  bool alpha_condition = false;
  bool penta_degenerate = false;
  double spectrum_residual = 0;
};

struct Reconstruction {
  SymmetricMatrix matrix;
  std::vector<StepReport> steps;
};

}  // namespace mhear
