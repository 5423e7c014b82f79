#include "matrixhear/types.hpp"

#include "matrixhear/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mhear {

SymmetricMatrix::SymmetricMatrix(std::size_t n, std::optional<std::size_t> bandwidth)
    : n_(n), bandwidth_(bandwidth), upper_(n * (n + 1) / 2, 0.0) {
  if (bandwidth_ && n_ > 0 && *bandwidth_ >= n_ - 1) bandwidth_.reset();
}

SymmetricMatrix SymmetricMatrix::from_dense(const Matrix& a, std::optional<std::size_t> bandwidth) {
  if (a.rows() != a.cols()) fail(ErrorKind::InvalidArgument, "matrix is not square");
  const auto n = static_cast<std::size_t>(a.rows());
  SymmetricMatrix m(n, bandwidth);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const double v = a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (m.bandwidth_ && j - i > *m.bandwidth_) {
        if (v != 0.0) fail(ErrorKind::InvalidArgument, "nonzero entry outside band");
        continue;
      }
      m.upper_[m.index(i, j)] = v;
    }
  return m;
}

std::size_t SymmetricMatrix::index(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  // row-major packed upper triangle; row i starts at i*n - i*(i-1)/2
  return i * n_ - (i * (i - 1)) / 2 + (j - i);
}

std::size_t SymmetricMatrix::actual_bandwidth() const {
  std::size_t d = 0;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i; j < n_; ++j)
      if (upper_[index(i, j)] != 0.0) d = std::max(d, j - i);
  return d;
}

double SymmetricMatrix::operator()(std::size_t i, std::size_t j) const {
  if (i >= n_ || j >= n_) fail(ErrorKind::InvalidArgument, "index out of range");
  return upper_[index(i, j)];
}

void SymmetricMatrix::set(std::size_t i, std::size_t j, double v) {
  if (i >= n_ || j >= n_) fail(ErrorKind::InvalidArgument, "index out of range");
  const std::size_t dist = i > j ? i - j : j - i;
  if (bandwidth_ && dist > *bandwidth_ && v != 0.0)
    fail(ErrorKind::InvalidArgument, "entry outside band");
  upper_[index(i, j)] = v;
}

Matrix SymmetricMatrix::dense() const {
  const auto n = static_cast<Eigen::Index>(n_);
  Matrix a(n, n);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i; j < n_; ++j) {
      const double v = upper_[index(i, j)];
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      a(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
    }
  return a;
}

SymmetricMatrix SymmetricMatrix::leading_minor(std::size_t k) const { return principal_block(0, k); }

SymmetricMatrix SymmetricMatrix::principal_block(std::size_t start, std::size_t len) const {
  if (start + len > n_) fail(ErrorKind::InvalidArgument, "block out of range");
  SymmetricMatrix m(len, bandwidth_);
  for (std::size_t i = 0; i < len; ++i)
    for (std::size_t j = i; j < len; ++j) m.upper_[m.index(i, j)] = upper_[index(start + i, start + j)];
  return m;
}

SymmetricMatrix SymmetricMatrix::with_bandwidth(std::optional<std::size_t> d) const {
  SymmetricMatrix m(n_, d);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i; j < n_; ++j) m.set(i, j, upper_[index(i, j)]);
  return m;
}

double max_abs_diff(const SymmetricMatrix& a, const SymmetricMatrix& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i; j < a.size(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

Spectrum::Spectrum(std::vector<double> values) : v_(std::move(values)) {
  for (std::size_t i = 0; i < v_.size(); ++i) {
    if (!std::isfinite(v_[i])) fail(ErrorKind::InvalidArgument, "non-finite eigenvalue");
    if (i > 0 && v_[i] < v_[i - 1]) fail(ErrorKind::InvalidArgument, "spectrum not sorted ascending");
  }
}

Spectrum Spectrum::from_unsorted(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  return Spectrum(std::move(values));
}

double Spectrum::sum() const { return power_sum(1); }

double Spectrum::power_sum(int p) const {
  double s = 0;
  for (double x : v_) s += std::pow(x, p);
  return s;
}

double Spectrum::diameter() const { return v_.empty() ? 0.0 : v_.back() - v_.front(); }

double Spectrum::max_abs() const {
  double m = 0;
  for (double x : v_) m = std::max(m, std::abs(x));
  return m;
}

double Spectrum::min_gap() const {
  double g = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < v_.size(); ++i) g = std::min(g, v_[i] - v_[i - 1]);
  return g;
}

SpectralData::SpectralData(std::vector<Spectrum> spectra) : s_(std::move(spectra)) {
  for (std::size_t k = 0; k < s_.size(); ++k)
    if (s_[k].size() != k + 1)
      fail(ErrorKind::InvalidArgument, "spectrum " + std::to_string(k + 1) + " has wrong size");
}

double SpectralData::scale() const {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& s : s_)
    if (!s.empty()) {
      lo = std::min(lo, s.values().front());
      hi = std::max(hi, s.values().back());
    }
  return s_.empty() ? 1.0 : std::max(1.0, hi - lo);
}

std::string to_string(Gauge g) {
  return g == Gauge::LastEntryPositive ? "last-entry-positive" : "first-nonzero-positive";
}

Gauge gauge_from_string(const std::string& s) {
  if (s == "last-entry-positive") return Gauge::LastEntryPositive;
  if (s == "first-nonzero-positive") return Gauge::FirstNonzeroPositive;
  fail(ErrorKind::InvalidArgument, "unknown gauge '" + s + "'");
}

std::string to_string(DegeneracyCase c) {
  switch (c) {
    case DegeneracyCase::None: return "none";
    case DegeneracyCase::I: return "I";
    case DegeneracyCase::II: return "II";
    case DegeneracyCase::III: return "III";
    case DegeneracyCase::IV: return "IV";
  }
  return "none";
}

}  // namespace mhear
