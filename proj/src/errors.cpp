#include "matrixhear/errors.hpp"

#include "matrixhear/types.hpp"

namespace mhear {

std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::GaugeAmbiguous: return "GaugeAmbiguous";
    case ErrorKind::ZeroSpectrum: return "ZeroSpectrum";
    case ErrorKind::NotRegular: return "NotRegular";
    case ErrorKind::NotInterlacing: return "NotInterlacing";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::Inconsistent: return "Inconsistent";
    case ErrorKind::InconsistentSharedValue: return "InconsistentSharedValue";
    case ErrorKind::CaseMismatch: return "CaseMismatch";
    case ErrorKind::MultiBlock: return "MultiBlock";
    case ErrorKind::DegenerateM2: return "DegenerateM2";
    case ErrorKind::NoSolution: return "NoSolution";
    case ErrorKind::NoIntersection: return "NoIntersection";
    case ErrorKind::Ambiguous: return "Ambiguous";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::CannotSatisfyMargin: return "CannotSatisfyMargin";
    case ErrorKind::BadWindow: return "BadWindow";
    case ErrorKind::NotPentaStep: return "NotPentaStep";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

AmbiguousError::AmbiguousError(const std::string& what, std::vector<SymmetricMatrix> branches)
    : Error(ErrorKind::Ambiguous, what), branches_(std::move(branches)) {}

const std::vector<SymmetricMatrix>& AmbiguousError::branches() const noexcept { return branches_; }

ParseError::ParseError(const std::string& what, std::size_t line)
    : Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": " + what), line_(line) {}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace mhear
