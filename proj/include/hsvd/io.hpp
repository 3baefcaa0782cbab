#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "hsvd/decomposition.hpp"
#include "hsvd/error.hpp"
#include "hsvd/matrix.hpp"
#include "hsvd/verify.hpp"

namespace hsvd::io {

using AnyMatrix = std::variant<Matrix<double>, Matrix<cplx>>;

inline constexpr const char* kFactorsSchema = "hsvd-factors/1";

namespace detail {

inline std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

[[noreturn]] inline void parse_fail(std::size_t line, const std::string& what) {
  throw error(errc::parse_error, "line " + std::to_string(line) + ": " + what);
}

inline double parse_double(const std::string& tok, std::size_t line) {
  // strtod rather than from_chars: it accepts the "inf"/"1e+05" spellings
  // other writers emit and is available for double on every toolchain.
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0') parse_fail(line, "bad number '" + tok + "'");
  return v;
}

inline std::size_t parse_index(const std::string& tok, std::size_t line) {
  std::size_t v = 0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size()) parse_fail(line, "bad integer '" + tok + "'");
  return v;
}

enum class Symmetry { general, symmetric, skew, hermitian };

template <Scalar T>
void place(Matrix<T>& a, std::size_t i, std::size_t j, T v, Symmetry sym) {
  a(i, j) = v;
  if (i == j) return;
  switch (sym) {
    case Symmetry::general: break;
    case Symmetry::symmetric: a(j, i) = v; break;
    case Symmetry::skew: a(j, i) = -v; break;
    case Symmetry::hermitian: a(j, i) = conj(v); break;
  }
}

template <Scalar T>
Matrix<T> read_body(std::istream& in, std::size_t& line, bool coordinate, Symmetry sym) {
  std::string text;
  std::vector<std::string> size_tokens;
  while (std::getline(in, text)) {
    ++line;
    if (text.empty() || text[0] == '%') continue;
    std::istringstream ss(text);
    std::string tok;
    while (ss >> tok) size_tokens.push_back(tok);
    if (!size_tokens.empty()) break;
  }
  const std::size_t expected_size_tokens = coordinate ? 3 : 2;
  if (size_tokens.size() != expected_size_tokens) parse_fail(line, "malformed size line");
  const std::size_t rows = parse_index(size_tokens[0], line);
  const std::size_t cols = parse_index(size_tokens[1], line);
  if (sym != Symmetry::general && rows != cols) parse_fail(line, "symmetric storage needs a square matrix");
  Matrix<T> a(rows, cols);

  const std::size_t values_per_entry = is_complex_v<T> ? 2 : 1;
  std::size_t entries = 0;
  if (coordinate) {
    entries = parse_index(size_tokens[2], line);
  } else if (sym == Symmetry::general) {
    entries = rows * cols;
  } else if (sym == Symmetry::skew) {
    entries = rows * (rows - (rows > 0 ? 1 : 0)) / 2;
  } else {
    entries = rows * (rows + 1) / 2;
  }

  // Array storage is column-major; symmetric kinds store the lower triangle
  // (strictly lower for skew-symmetric).
  std::size_t ai = 0, aj = 0;
  auto next_array_slot = [&]() {
    const std::size_t first = sym == Symmetry::general ? 0 : (sym == Symmetry::skew ? aj + 1 : aj);
    if (ai < first) ai = first;
    const auto slot = std::pair{ai, aj};
    if (++ai >= rows) {
      ++aj;
      ai = 0;
    }
    return slot;
  };

  std::size_t read = 0;
  while (read < entries) {
    if (!std::getline(in, text)) parse_fail(line, "expected " + std::to_string(entries) + " entries, found " +
                                                      std::to_string(read));
    ++line;
    if (text.empty() || text[0] == '%') continue;
    std::istringstream ss(text);
    std::vector<std::string> tok;
    std::string t;
    while (ss >> t) tok.push_back(t);
    if (tok.empty()) continue;
    const std::size_t need = (coordinate ? 2 : 0) + values_per_entry;
    if (tok.size() != need) parse_fail(line, "expected " + std::to_string(need) + " fields");
    std::size_t i = 0, j = 0;
    std::size_t off = 0;
    if (coordinate) {
      i = parse_index(tok[0], line);
      j = parse_index(tok[1], line);
      if (i == 0 || j == 0 || i > rows || j > cols) parse_fail(line, "index out of range");
      --i;
      --j;
      off = 2;
    } else {
      std::tie(i, j) = next_array_slot();
    }
    T v;
    if constexpr (is_complex_v<T>) {
      v = cplx(parse_double(tok[off], line), parse_double(tok[off + 1], line));
    } else {
      v = parse_double(tok[off], line);
    }
    place(a, i, j, v, sym);
    ++read;
  }
  while (std::getline(in, text)) {
    ++line;
    const auto nonblank = text.find_first_not_of(" \t\r");
    if (nonblank != std::string::npos && text[nonblank] != '%') parse_fail(line, "trailing data after last entry");
  }
  return a;
}

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace detail

/// Reads a Matrix Market file (array or coordinate; real, integer, double or
/// complex; general, symmetric, skew-symmetric or hermitian). Coordinate
/// files are densified. The scalar type follows the header field.
inline AnyMatrix read_matrix_market(std::istream& in) {
  std::string header;
  std::size_t line = 0;
  if (!std::getline(in, header)) detail::parse_fail(1, "empty input");
  ++line;
  std::istringstream hs(header);
  std::string banner, object, format, field, symmetry;
  hs >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket") detail::parse_fail(line, "missing %%MatrixMarket banner");
  object = detail::lower(object);
  format = detail::lower(format);
  field = detail::lower(field);
  symmetry = detail::lower(symmetry);
  if (object != "matrix") detail::parse_fail(line, "unsupported object '" + object + "'");
  if (format != "array" && format != "coordinate") detail::parse_fail(line, "unsupported format '" + format + "'");
  const bool coordinate = format == "coordinate";

  detail::Symmetry sym;
  if (symmetry == "general")
    sym = detail::Symmetry::general;
  else if (symmetry == "symmetric")
    sym = detail::Symmetry::symmetric;
  else if (symmetry == "skew-symmetric")
    sym = detail::Symmetry::skew;
  else if (symmetry == "hermitian")
    sym = detail::Symmetry::hermitian;
  else
    detail::parse_fail(line, "unsupported symmetry '" + symmetry + "'");

  if (field == "real" || field == "double" || field == "integer") {
    if (sym == detail::Symmetry::hermitian) sym = detail::Symmetry::symmetric;
    return detail::read_body<double>(in, line, coordinate, sym);
  }
  if (field == "complex") return detail::read_body<cplx>(in, line, coordinate, sym);
  detail::parse_fail(line, "unsupported field '" + field + "'");
}

inline AnyMatrix read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error(errc::parse_error, "cannot open " + path);
  return read_matrix_market(in);
}

/// Writes dense array format with 17 significant digits, which round-trips
/// every double exactly.
template <Scalar T>
void write_matrix_market(std::ostream& out, const Matrix<T>& a) {
  out << "%%MatrixMarket matrix array " << (is_complex_v<T> ? "complex" : "real") << " general\n";
  out << a.rows() << ' ' << a.cols() << '\n';
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i) {
      out << detail::format_double(real_part(a(i, j)));
      if constexpr (is_complex_v<T>) out << ' ' << detail::format_double(imag_part(a(i, j)));
      out << '\n';
    }
}

template <Scalar T>
void write_matrix_market(const std::string& path, const Matrix<T>& a) {
  std::ofstream out(path);
  if (!out) throw error(errc::parse_error, "cannot write " + path);
  write_matrix_market(out, a);
}

// ---------------------------------------------------------------------------
// Factors file

using json = nlohmann::ordered_json;

template <Scalar T>
json matrix_to_json(const Matrix<T>& a) {
  json rows = json::array();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if constexpr (is_complex_v<T>)
        row.push_back(json::array({a(i, j).real(), a(i, j).imag()}));
      else
        row.push_back(a(i, j));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

template <Scalar T>
Matrix<T> matrix_from_json(const json& j, std::size_t rows, std::size_t cols, const char* name) {
  if (!j.is_array() || j.size() != rows) throw error(errc::parse_error, std::string(name) + " has the wrong row count");
  Matrix<T> a(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const auto& row = j[i];
    if (!row.is_array() || row.size() != cols)
      throw error(errc::parse_error, std::string(name) + " row " + std::to_string(i) + " has the wrong length");
    for (std::size_t c = 0; c < cols; ++c) {
      if constexpr (is_complex_v<T>) {
        const auto& e = row[c];
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
          throw error(errc::parse_error, std::string(name) + " entries must be [re, im] pairs");
        a(i, c) = cplx(e[0].get<double>(), e[1].get<double>());
      } else {
        if (!row[c].is_number()) throw error(errc::parse_error, std::string(name) + " entries must be numbers");
        a(i, c) = row[c].get<double>();
      }
    }
  }
  return a;
}

inline json invariants_to_json(const HsvdInvariants& inv) {
  return json{{"j", inv.j}, {"l", inv.l}, {"t", inv.t}, {"k", inv.k}, {"s", inv.s}};
}

inline json tolerances_to_json(const ToleranceConfig& tol) {
  return json{{"rank_rtol", tol.rank_rtol}, {"residual_tol", tol.residual_tol}, {"breakdown_tol", tol.breakdown_tol}};
}

template <Scalar T>
json factors_to_json(const HsvdFactors<T>& f) {
  const auto& sf = f.sigma;
  json out;
  out["schema"] = kFactorsSchema;
  out["scalar_mode"] = is_complex_v<T> ? "complex" : "real";
  out["orientation"] = to_string(sf.orientation);
  out["p"] = sf.signature.p;
  out["q"] = sf.signature.q;
  out["m"] = sf.m;
  out["n"] = sf.n;
  out["invariants"] = invariants_to_json(sf.invariants);
  out["pos_values"] = sf.pos_values;
  out["neg_values"] = sf.neg_values;
  out["U"] = matrix_to_json(f.U);
  out["V"] = matrix_to_json(f.V);
  out["residual"] = f.residual;
  out["tolerances"] = tolerances_to_json(f.tolerances);
  return out;
}

using AnyFactors = std::variant<HsvdFactors<double>, HsvdFactors<cplx>>;

inline AnyFactors factors_from_json(const json& j) {
  try {
    if (j.value("schema", std::string{}) != kFactorsSchema)
      throw error(errc::parse_error, std::string("schema must be \"") + kFactorsSchema + "\"");
    const std::string mode = j.at("scalar_mode").get<std::string>();
    const std::string orient = j.at("orientation").get<std::string>();
    if (orient != "left" && orient != "right") throw error(errc::parse_error, "orientation must be left or right");

    SigmaForm sf;
    sf.orientation = orient == "left" ? Orientation::left : Orientation::right;
    sf.signature = Signature(j.at("p").get<std::size_t>(), j.at("q").get<std::size_t>());
    sf.m = j.at("m").get<std::size_t>();
    sf.n = j.at("n").get<std::size_t>();
    if (sf.m != sf.signature.m()) throw error(errc::parse_error, "m must equal p + q");
    const auto& inv = j.at("invariants");
    sf.invariants.j = inv.at("j").get<std::size_t>();
    sf.invariants.l = inv.at("l").get<std::size_t>();
    sf.invariants.t = inv.at("t").get<std::size_t>();
    sf.invariants.k = inv.at("k").get<std::size_t>();
    sf.invariants.s = inv.at("s").get<std::size_t>();
    sf.invariants.rank = sf.invariants.j + sf.invariants.l;
    sf.pos_values = j.at("pos_values").get<std::vector<double>>();
    sf.neg_values = j.at("neg_values").get<std::vector<double>>();

    ToleranceConfig tol;
    if (j.contains("tolerances")) {
      const auto& t = j["tolerances"];
      tol.rank_rtol = t.value("rank_rtol", tol.rank_rtol);
      tol.residual_tol = t.value("residual_tol", tol.residual_tol);
      tol.breakdown_tol = t.value("breakdown_tol", tol.breakdown_tol);
    }
    const double residual = j.value("residual", 0.0);

    auto build = [&]<Scalar T>(std::type_identity<T>) -> AnyFactors {
      HsvdFactors<T> f;
      f.U = matrix_from_json<T>(j.at("U"), sf.n, sf.n, "U");
      f.V = matrix_from_json<T>(j.at("V"), sf.m, sf.m, "V");
      f.sigma = sf;
      f.residual = residual;
      f.tolerances = tol;
      return f;
    };
    if (mode == "real") return build(std::type_identity<double>{});
    if (mode == "complex") return build(std::type_identity<cplx>{});
    throw error(errc::parse_error, "scalar_mode must be real or complex");
  } catch (const json::exception& e) {
    throw error(errc::parse_error, std::string("factors file: ") + e.what());
  }
}

inline AnyFactors read_factors(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error(errc::parse_error, "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw error(errc::parse_error, std::string("factors file: ") + e.what());
  }
  return factors_from_json(j);
}

template <Scalar T>
void write_factors(const std::string& path, const HsvdFactors<T>& f) {
  std::ofstream out(path);
  if (!out) throw error(errc::parse_error, "cannot write " + path);
  out << factors_to_json(f).dump(2) << '\n';
}

inline json report_to_json(const VerifyReport& r) {
  return json{{"residual", r.residual},
              {"unitary_defect", r.unitary_defect},
              {"j_unitary_defect", r.j_unitary_defect},
              {"sigma_pattern_ok", r.sigma_pattern_ok},
              {"invariants_match", r.invariants_match},
              {"eq12_defects", json::array({r.eq12_defects.first, r.eq12_defects.second})},
              {"bounds",
               {{"residual", r.residual_bound},
                {"unitary_defect", r.unitary_bound},
                {"j_unitary_defect", r.j_unitary_bound},
                {"eq12_defects", json::array({r.eq12_bounds.first, r.eq12_bounds.second})}}},
              {"passed", r.passed()}};
}

}  // namespace hsvd::io
