#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mhear {

class SymmetricMatrix;

enum class ErrorKind {
  InvalidArgument,
  NonConvergence,
  GaugeAmbiguous,
  ZeroSpectrum,
  NotRegular,
  NotInterlacing,
  IllConditioned,
  Inconsistent,
  InconsistentSharedValue,
  CaseMismatch,
  MultiBlock,
  DegenerateM2,
  NoSolution,
  NoIntersection,
  Ambiguous,
  TooLarge,
  CannotSatisfyMargin,
  BadWindow,
  NotPentaStep,
  ParseError,
};

std::string_view to_string(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Thrown when more than one reconstruction is consistent with the data.
class AmbiguousError : public Error {
 public:
  AmbiguousError(const std::string& what, std::vector<SymmetricMatrix> branches);
  const std::vector<SymmetricMatrix>& branches() const noexcept;

 private:
  std::vector<SymmetricMatrix> branches_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

}  // namespace mhear
