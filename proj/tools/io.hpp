#ifndef PICKFN_TOOLS_IO_HPP
#define PICKFN_TOOLS_IO_HPP

// JSON input formats and report serialization for the command-line tool.
//
// Measure:  {"atoms": [[x, mass], ...],
//            "pieces": [{"type": "polynomial", "lo": a, "hi": b, "coeffs": [c0, c1, ...]},
//                       {"type": "exp_convex", "from": a, "c": [c0, c1, c2], "scale": s}]}
// nu:       a measure plus optional "baseline" (nu(-inf)), "beta" and "alpha".
// Density:  {"box": [a, b, height]} or {"nu": <nu>} (boundary density of exp(f)).
// Convex:   {"a": 1, "coeffs": [c0, c1, c2], "gamma": 2} for psi = c0 + c1 t + c2 t^2.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "pickfn/measure.hpp"
#include "pickfn/plog.hpp"
#include "pickfn/transforms.hpp"

namespace pickfn::io {

using json = nlohmann::json;

// Malformed input: reported with exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inline JSON when the argument starts with '{', otherwise a file path.
inline json load_json(const std::string& arg) {
  std::string text = arg;
  if (arg.find_first_not_of(" \t\n") == std::string::npos || arg[arg.find_first_not_of(" \t\n")] != '{') {
    std::ifstream in(arg);
    if (!in) throw UsageError("cannot open '" + arg + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw UsageError(std::string("invalid JSON: ") + e.what());
  }
}

namespace detail {

template <class T>
T get(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw UsageError(where + ": missing \"" + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw UsageError(where + ": \"" + key + "\" has the wrong type");
  }
}

template <class T>
T get_or(const json& j, const char* key, T fallback, const std::string& where) {
  return j.contains(key) ? get<T>(j, key, where) : fallback;
}

}  // namespace detail

inline StieltjesMeasure parse_measure(const json& j) {
  if (!j.is_object()) throw UsageError("measure must be a JSON object");
  for (const auto& [k, _] : j.items()) {
    if (k != "atoms" && k != "pieces" && k != "baseline" && k != "beta" && k != "alpha") {
      throw UsageError("measure: unknown key \"" + k + "\"");
    }
  }
  std::vector<Atom> atoms;
  for (const auto& a : detail::get_or<json>(j, "atoms", json::array(), "measure")) {
    if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number()) {
      throw UsageError("measure: each atom is [location, mass]");
    }
    atoms.push_back({a[0].get<double>(), a[1].get<double>()});
  }
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.location < b.location; });
  std::vector<DensityPiece> pieces;
  for (const auto& p : detail::get_or<json>(j, "pieces", json::array(), "measure")) {
    const auto type = detail::get<std::string>(p, "type", "piece");
    if (type == "polynomial") {
      pieces.push_back(DensityPiece::polynomial(detail::get<double>(p, "lo", "piece"),
                                                detail::get<double>(p, "hi", "piece"),
                                                detail::get<std::vector<double>>(p, "coeffs", "piece")));
    } else if (type == "exp_convex") {
      const auto c = detail::get<std::vector<double>>(p, "c", "piece");
      if (c.size() != 3) throw UsageError("exp_convex piece: \"c\" must hold [c0, c1, c2]");
      pieces.push_back(DensityPiece::exp_convex(detail::get<double>(p, "from", "piece"), c[0], c[1], c[2],
                                                detail::get_or<double>(p, "scale", 1.0, "piece")));
    } else {
      throw UsageError("piece: unknown type \"" + type + "\"");
    }
  }
  return {atoms, pieces};
}

inline NuFunction parse_nu(const json& j) {
  return {detail::get_or<double>(j, "baseline", 0.0, "nu"), parse_measure(j)};
}

inline PLogFunction parse_plog(const json& j) {
  return {{detail::get_or<double>(j, "beta", 0.0, "nu"), parse_nu(j)}};
}

inline PrimitivePick parse_primitive(const json& j) {
  return {detail::get_or<double>(j, "alpha", 0.0, "nu"), detail::get_or<double>(j, "beta", 0.0, "nu"), parse_nu(j)};
}

inline BoundaryDensity parse_density(const json& j, const quad::Tolerance& tol = {}) {
  if (j.contains("box")) {
    const auto b = detail::get<std::vector<double>>(j, "box", "density");
    if (b.size() != 3) throw UsageError("density: \"box\" must hold [a, b, height]");
    return BoundaryDensity::box(b[0], b[1], b[2]);
  }
  if (j.contains("nu")) {
    const auto P = parse_plog(j.at("nu"));
    return BoundaryDensity::from_nu(P.log_part.nu, P.log_part.beta, tol);
  }
  throw UsageError("density: expected \"box\" or \"nu\"");
}

// "a+bi", "a-bi", "a", "bi", "i", "-i"; whitespace is ignored.
inline cplx parse_complex(std::string s) {
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
  static const std::regex re(
      R"(^([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?(?:([+-]?)((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?i)?$)");
  std::smatch m;
  if (s.empty() || !std::regex_match(s, m, re)) throw UsageError("cannot parse complex number '" + s + "'");
  const bool has_imag = s.back() == 'i';
  if (has_imag && m[1].matched && m[2].str().empty()) {
    // "bi": the leading number is the imaginary part.
    if (m[3].matched) throw UsageError("cannot parse complex number '" + s + "'");
    return {0.0, std::stod(m[1].str())};
  }
  const double re_part = m[1].matched ? std::stod(m[1].str()) : 0.0;
  double im_part = 0.0;
  if (has_imag) {
    im_part = m[3].matched ? std::stod(m[3].str()) : 1.0;
    if (m[2].str() == "-") im_part = -im_part;
    if (!m[1].matched && !m[2].matched && !m[3].matched) im_part = 1.0;
  }
  return {re_part, im_part};
}

// "lo:hi:n", n evenly spaced points including both ends.
inline std::vector<double> parse_grid(const std::string& s) {
  double lo = 0.0, hi = 0.0;
  int n = 0;
  char tail = 0;
  if (std::sscanf(s.c_str(), "%lf:%lf:%d%c", &lo, &hi, &n, &tail) != 3 || n < 1 || !(lo <= hi)) {
    throw UsageError("grid must be lo:hi:n with lo <= hi and n >= 1, got '" + s + "'");
  }
  std::vector<double> xs;
  for (int k = 0; k < n; ++k) xs.push_back(n == 1 ? lo : lo + (hi - lo) * k / (n - 1));
  return xs;
}

inline json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

// Non-finite values have no JSON literal; they are written as strings.
inline json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

namespace detail {

inline void flatten(const json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    out.emplace_back(prefix + ".re", format_double(j[0].get<double>()));
    out.emplace_back(prefix + ".im", format_double(j[1].get<double>()));
  } else if (j.is_number_float()) {
    out.emplace_back(prefix, format_double(j.get<double>()));
  } else if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s.find_first_of(",\"\n") != std::string::npos) {
      std::string q = "\"";
      for (char c : s) q += (c == '"') ? std::string("\"\"") : std::string(1, c);
      s = q + "\"";
    }
    out.emplace_back(prefix, s);
  } else if (j.is_array()) {
    out.emplace_back(prefix, "\"" + j.dump() + "\"");
  } else {
    out.emplace_back(prefix, j.dump());
  }
}

}  // namespace detail

// One CSV row per element of `rows`, columns from the union of flattened keys.
inline std::string to_csv(const json& rows) {
  std::vector<std::vector<std::pair<std::string, std::string>>> flat;
  std::vector<std::string> columns;
  for (const auto& r : rows) {
    flat.emplace_back();
    detail::flatten(r, "", flat.back());
    for (const auto& [k, _] : flat.back()) {
      if (std::find(columns.begin(), columns.end(), k) == columns.end()) columns.push_back(k);
    }
  }
  std::string out;
  if (columns.empty()) return out;
  for (std::size_t c = 0; c < columns.size(); ++c) out += (c ? "," : "") + columns[c];
  out += "\n";
  for (const auto& row : flat) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) out += ",";
      for (const auto& [k, v] : row) {
        if (k == columns[c]) out += v;
      }
    }
    out += "\n";
  }
  return out;
}

}  // namespace pickfn::io

#endif  // PICKFN_TOOLS_IO_HPP
