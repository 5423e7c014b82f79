#pragma once

#include "matrixhear/sliding.hpp"
#include "matrixhear/types.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>

namespace mhear::io {

// Matrix text format:
//   # comment lines
//   n d              (d = n-1 for a full matrix)
//   row i: entries A_{i,j} for j = i .. min(n-1, i+d), one row per line
SymmetricMatrix read_matrix(std::istream& in);
SymmetricMatrix read_matrix_file(const std::filesystem::path& p);
void write_matrix(std::ostream& out, const SymmetricMatrix& a, const std::string& comment = {});
void write_matrix_file(const std::filesystem::path& p, const SymmetricMatrix& a, const std::string& comment = {});

using AnySpectra = std::variant<SpectralData, SlidingSpectralData>;

std::string spectra_to_json(const SpectralData& sd, int precision = 17);
std::string spectra_to_json(const SlidingSpectralData& sd, int precision = 17);
AnySpectra parse_spectra(const std::string& text);
AnySpectra read_spectra_file(const std::filesystem::path& p);

struct SignsFile {
  Gauge gauge = Gauge::LastEntryPositive;
  std::optional<SignIndicators> nested;
  std::optional<std::size_t> d;
  std::optional<SignVector> columns;
  std::optional<SlidingSigns> sliding;
};

std::string signs_to_json(const SignsFile& s);
SignsFile parse_signs(const std::string& text);
SignsFile read_signs_file(const std::filesystem::path& p);

std::string read_text(const std::filesystem::path& p);
void write_text(const std::filesystem::path& p, const std::string& text);

// Parses "+,-,+" or "1,-1,1".
SignVector parse_sign_list(const std::string& s);

}  // namespace mhear::io
