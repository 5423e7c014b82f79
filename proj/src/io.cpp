#include "matrixhear/io.hpp"

#include "matrixhear/errors.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace mhear::io {

namespace {

using json = nlohmann::json;

constexpr const char* kSpectraFormat = "matrixhear-spectra";
constexpr const char* kSignsFormat = "matrixhear-signs";
constexpr int kVersion = 1;

std::string fmt_double(double v, int precision = 17) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, precision);
  return std::string(buf, res.ptr);
}

double round_sig(double v, int precision) {
  if (precision >= 17) return v;
  const std::string s = fmt_double(v, precision);
  double out = 0;
  std::from_chars(s.data(), s.data() + s.size(), out);
  return out;
}

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  std::string t;
  while (ss >> t) out.push_back(t);
  return out;
}

double parse_double(const std::string& t, std::size_t line) {
  double v = 0;
  const char* end = t.data() + t.size();
  auto res = std::from_chars(t.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end || !std::isfinite(v))
    throw ParseError("'" + t + "' is not a finite number", line);
  return v;
}

std::size_t parse_size(const std::string& t, std::size_t line) {
  std::size_t v = 0;
  const char* end = t.data() + t.size();
  auto res = std::from_chars(t.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) throw ParseError("'" + t + "' is not a non-negative integer", line);
  return v;
}

std::size_t line_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), line_of(text, e.byte));
  }
}

json spectrum_json(const Spectrum& s, int precision) {
  json a = json::array();
  for (double v : s) a.push_back(round_sig(v, precision));
  return a;
}

std::vector<Spectrum> spectra_from(const json& arr, const char* what) {
  if (!arr.is_array()) throw ParseError(std::string(what) + " must be an array", 1);
  std::vector<Spectrum> out;
  for (const auto& s : arr) {
    if (!s.is_array()) throw ParseError(std::string(what) + " entries must be arrays", 1);
    std::vector<double> v;
    for (const auto& x : s) {
      if (!x.is_number()) throw ParseError(std::string(what) + " values must be numbers", 1);
      v.push_back(x.get<double>());
    }
    try {
      out.push_back(Spectrum(std::move(v)));
    } catch (const Error& e) {
      throw ParseError(e.what(), 1);
    }
  }
  return out;
}

json sign_rows(const std::vector<SignVector>& rows) {
  json a = json::array();
  for (const auto& r : rows) a.push_back(r);
  return a;
}

SignVector signs_from(const json& a) {
  if (!a.is_array()) throw ParseError("sign vector must be an array", 1);
  SignVector s;
  for (const auto& x : a) {
    if (!x.is_number_integer() || (x.get<int>() != 1 && x.get<int>() != -1))
      throw ParseError("signs must be +1 or -1", 1);
    s.push_back(x.get<int>());
  }
  return s;
}

std::vector<SignVector> sign_rows_from(const json& a) {
  if (!a.is_array()) throw ParseError("sign rows must be an array", 1);
  std::vector<SignVector> out;
  for (const auto& r : a) out.push_back(signs_from(r));
  return out;
}

void check_header(const json& j, const char* format) {
  if (!j.is_object() || !j.contains("format") || j["format"] != format)
    throw ParseError(std::string("expected format '") + format + "'", 1);
  if (!j.contains("version") || j["version"] != kVersion) throw ParseError("unsupported version", 1);
}

}  // namespace

SymmetricMatrix read_matrix(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::optional<std::size_t> n, d;
  std::size_t row = 0;
  SymmetricMatrix a;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = tokens(line);
    if (t.empty() || t[0][0] == '#') continue;
    if (!n) {
      if (t.size() != 2) throw ParseError("header must be 'n d'", lineno);
      n = parse_size(t[0], lineno);
      d = parse_size(t[1], lineno);
      if (*n == 0) throw ParseError("matrix size must be positive", lineno);
      if (*d + 1 > *n) throw ParseError("bandwidth must be below n", lineno);
      a = SymmetricMatrix(*n, *d + 1 < *n ? std::optional<std::size_t>(*d) : std::nullopt);
      continue;
    }
    if (row >= *n) throw ParseError("unexpected content after the last row", lineno);
    const std::size_t last = std::min(*n - 1, row + *d);
    if (t.size() != last - row + 1)
      throw ParseError("row " + std::to_string(row + 1) + " needs " + std::to_string(last - row + 1) + " entries", lineno);
    for (std::size_t j = row; j <= last; ++j) a.set(row, j, parse_double(t[j - row], lineno));
    ++row;
  }
  if (!n) throw ParseError("missing header", lineno + 1);
  if (row != *n) throw ParseError("expected " + std::to_string(*n) + " rows, found " + std::to_string(row), lineno + 1);
  return a;
}

SymmetricMatrix read_matrix_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) fail(ErrorKind::InvalidArgument, "cannot open " + p.string());
  return read_matrix(in);
}

void write_matrix(std::ostream& out, const SymmetricMatrix& a, const std::string& comment) {
  std::istringstream cs(comment);
  std::string c;
  while (std::getline(cs, c)) out << "# " << c << '\n';
  const std::size_t n = a.size();
  const std::size_t d = a.bandwidth().value_or(n - 1);
  out << n << ' ' << d << '\n';
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t last = std::min(n - 1, i + d);
    for (std::size_t j = i; j <= last; ++j) out << (j > i ? " " : "") << fmt_double(a(i, j));
    out << '\n';
  }
}

void write_matrix_file(const std::filesystem::path& p, const SymmetricMatrix& a, const std::string& comment) {
  std::ofstream out(p);
  if (!out) fail(ErrorKind::InvalidArgument, "cannot write " + p.string());
  write_matrix(out, a, comment);
}

std::string spectra_to_json(const SpectralData& sd, int precision) {
  json j;
  j["format"] = kSpectraFormat;
  j["version"] = kVersion;
  j["kind"] = "nested";
  j["n"] = sd.size();
  j["spectra"] = json::array();
  for (const auto& s : sd.spectra()) j["spectra"].push_back(spectrum_json(s, precision));
  return j.dump(1) + "\n";
}

std::string spectra_to_json(const SlidingSpectralData& sd, int precision) {
  json j;
  j["format"] = kSpectraFormat;
  j["version"] = kVersion;
  j["kind"] = "sliding";
  j["n"] = sd.n;
  j["d"] = sd.d;
  j["window"] = sd.window_size();
  j["head"] = json::array();
  for (const auto& s : sd.head) j["head"].push_back(spectrum_json(s, precision));
  j["windows"] = json::array();
  for (const auto& s : sd.windows) j["windows"].push_back(spectrum_json(s, precision));
  return j.dump(1) + "\n";
}

AnySpectra parse_spectra(const std::string& text) {
  const json j = parse_json(text);
  check_header(j, kSpectraFormat);
  const std::string kind = j.value("kind", "");
  try {
    if (kind == "nested") {
      SpectralData sd(spectra_from(j.at("spectra"), "spectra"));
      if (j.contains("n") && j["n"] != sd.size()) throw ParseError("'n' does not match the spectra", 1);
      return sd;
    }
    if (kind == "sliding") {
      SlidingSpectralData sd;
      sd.n = j.at("n").get<std::size_t>();
      sd.d = j.at("d").get<std::size_t>();
      const std::size_t w = j.at("window").get<std::size_t>();
      if (w == sd.d + 1) {
        sd.scheme = SlidingScheme::Minimal;
      } else if (w == sd.d + 2) {
        sd.scheme = SlidingScheme::Optimal;
      } else {
        throw ParseError("window must be d+1 or d+2", 1);
      }
      sd.head = spectra_from(j.at("head"), "head");
      sd.windows = spectra_from(j.at("windows"), "windows");
      sd.validate();
      return sd;
    }
  } catch (const json::exception& e) {
    throw ParseError(e.what(), 1);
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(e.what(), 1);
  }
  throw ParseError("unknown spectra kind '" + kind + "'", 1);
}

AnySpectra read_spectra_file(const std::filesystem::path& p) { return parse_spectra(read_text(p)); }

std::string signs_to_json(const SignsFile& s) {
  json j;
  j["format"] = kSignsFormat;
  j["version"] = kVersion;
  j["gauge"] = to_string(s.gauge);
  if (s.nested) j["nested"] = sign_rows(s.nested->steps);
  if (s.d) j["d"] = *s.d;
  if (s.columns) j["columns"] = *s.columns;
  if (s.sliding) j["sliding"] = {{"head", sign_rows(s.sliding->head)}, {"windows", sign_rows(s.sliding->windows)}};
  return j.dump() + "\n";
}

SignsFile parse_signs(const std::string& text) {
  const json j = parse_json(text);
  check_header(j, kSignsFormat);
  SignsFile s;
  try {
    s.gauge = gauge_from_string(j.value("gauge", "last-entry-positive"));
    if (j.contains("nested")) s.nested = SignIndicators{sign_rows_from(j["nested"]), s.gauge};
    if (j.contains("d")) s.d = j["d"].get<std::size_t>();
    if (j.contains("columns")) s.columns = signs_from(j["columns"]);
    if (j.contains("sliding")) {
      SlidingSigns ss;
      ss.head = sign_rows_from(j["sliding"].at("head"));
      ss.windows = sign_rows_from(j["sliding"].at("windows"));
      s.sliding = std::move(ss);
    }
  } catch (const json::exception& e) {
    throw ParseError(e.what(), 1);
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(e.what(), 1);
  }
  return s;
}

SignsFile read_signs_file(const std::filesystem::path& p) { return parse_signs(read_text(p)); }

std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) fail(ErrorKind::InvalidArgument, "cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) fail(ErrorKind::InvalidArgument, "cannot write " + p.string());
  out << text;
}

SignVector parse_sign_list(const std::string& s) {
  SignVector out;
  std::string tok;
  std::istringstream ss(s);
  while (std::getline(ss, tok, ',')) {
    const auto b = tok.find_first_not_of(" \t"), e = tok.find_last_not_of(" \t");
    tok = b == std::string::npos ? std::string() : tok.substr(b, e - b + 1);
    if (tok == "+" || tok == "+1" || tok == "1") {
      out.push_back(1);
    } else if (tok == "-" || tok == "-1") {
      out.push_back(-1);
    } else {
      fail(ErrorKind::InvalidArgument, "bad sign '" + tok + "'");
    }
  }
  return out;
}

}  // namespace mhear::io
