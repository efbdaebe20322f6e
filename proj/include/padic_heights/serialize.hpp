#pragma once

#include <nlohmann/json.hpp>
#include <regex>
#include <string>
#include <vector>

#include "heights.hpp"

namespace padic_heights {

using Json = nlohmann::json;

inline constexpr int cache_format_version = 1;

// ---------------------------------------------------------------------------
// p-adic numbers

inline Json padic_to_json(const PadicNumber& x) {
  return Json{{"val", x.valuation()}, {"digits", x.digits()}, {"prec", x.precision()}};
}

inline PadicNumber padic_from_json(const Json& j, long p) {
  if (!j.is_object() || !j.contains("val") || !j.contains("digits") || !j.contains("prec")) {
    throw std::invalid_argument("p-adic number must be an object with val, digits and prec");
  }
  const long v = j.at("val").get<long>();
  const long n = j.at("prec").get<long>();
  mpz_class u = 0;
  const auto& ds = j.at("digits");
  for (std::size_t i = ds.size(); i-- > 0;) {
    long d = ds[i].get<long>();
    if (d < 0 || d >= p) throw std::invalid_argument("p-adic digit out of range");
    u = u * p + d;
  }
  return PadicNumber::from_parts(p, v, u, n);
}

/// Parses the printed form "d_v*p^v + ... + O(p^N)", as well as "O(p^N)" for zero.
inline PadicNumber parse_padic(const std::string& s, long p) {
  static const std::regex big_o(R"(O\(\s*(\d+)\s*\^\s*(-?\d+)\s*\)\s*$)");
  static const std::regex big_o_plain(R"(O\(\s*(\d+)\s*\)\s*$)");
  std::smatch m;
  long n = 0;
  std::size_t end = 0;
  if (std::regex_search(s, m, big_o)) {
    n = std::stol(m[2]);
  } else if (std::regex_search(s, m, big_o_plain)) {
    n = 1;
  } else {
    throw std::invalid_argument("p-adic string must end with O(p^N): " + s);
  }
  if (std::stol(m[1]) != p) throw std::invalid_argument("p-adic string uses a different prime: " + s);
  end = static_cast<std::size_t>(m.position(0));
  static const std::regex term(R"(\s*(?:(\d+)\s*\*\s*)?(\d+)(?:\s*\^\s*(-?\d+))?\s*\+\s*)");
  std::string body = s.substr(0, end);
  PadicNumber acc = PadicNumber::zero(p, n);
  std::size_t pos = 0;
  while (pos < body.size()) {
    std::smatch t;
    std::string rest = body.substr(pos);
    if (!std::regex_search(rest, t, term, std::regex_constants::match_continuous)) {
      throw std::invalid_argument("malformed p-adic term in: " + s);
    }
    long coeff = 1;
    long e = 0;
    if (t[1].matched) {
      coeff = std::stol(t[1]);
      if (std::stol(t[2]) != p) throw std::invalid_argument("p-adic term uses a different prime: " + s);
      e = t[3].matched ? std::stol(t[3]) : 1;
    } else if (t[3].matched) {
      if (std::stol(t[2]) != p) throw std::invalid_argument("p-adic term uses a different prime: " + s);
      e = std::stol(t[3]);
    } else {
      // a bare integer is either the digit of p^0 or the prime itself (= p^1)
      long b = std::stol(t[2]);
      if (b == p) {
        e = 1;
      } else {
        coeff = b;
      }
    }
    acc += PadicNumber::from_parts(p, e, mpz_class(coeff), n);
    pos += static_cast<std::size_t>(t.length(0));
  }
  return acc;
}

/// A rational number written as "a" or "a/b".
inline mpq_class parse_rational(const std::string& s) {
  static const std::regex r(R"(\s*[-+]?\d+(\s*/\s*\d+)?\s*)");
  if (!std::regex_match(s, r)) throw std::invalid_argument("not a rational number: " + s);
  std::string t;
  for (char ch : s) {
    if (ch != ' ' && ch != '+') t += ch;
  }
  mpq_class q(t);
  q.canonicalize();
  return q;
}

inline bool looks_padic(const std::string& s) { return s.find("O(") != std::string::npos; }

inline std::string rational_to_string(const mpq_class& q) { return q.get_str(); }

// ---------------------------------------------------------------------------
// Curves, points and matrices

inline Json curve_to_json(const HyperellipticCurve& c) {
  Json f = Json::array();
  if (c.has_exact_coefficients()) {
    for (const auto& q : c.exact_coefficients()) f.push_back(rational_to_string(q));
  } else {
    for (const auto& a : c.f()) f.push_back(a.to_string());
  }
  return Json{{"p", c.prime()}, {"f", f}, {"prec", c.precision()}};
}

inline HyperellipticCurve curve_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("p") || !j.contains("f")) {
    throw std::invalid_argument("curve must be an object with p and f");
  }
  const long p = j.at("p").get<long>();
  const long prec = j.value("prec", 20L);
  if (prec < 1) throw std::invalid_argument("curve precision must be positive");
  const auto& f = j.at("f");
  if (!f.is_array() || f.empty()) throw std::invalid_argument("f must be a nonempty array of coefficients");
  bool exact = true;
  for (const auto& a : f) {
    if (a.is_string() && looks_padic(a.get<std::string>())) exact = false;
  }
  if (exact) {
    std::vector<mpq_class> q;
    for (const auto& a : f) q.push_back(a.is_string() ? parse_rational(a.get<std::string>()) : mpq_class(a.get<long>()));
    return build_curve(p, q, prec);
  }
  if (!detail::is_odd_prime(p)) throw DomainError("p must be an odd prime");
  PadicPolynomial g;
  for (const auto& a : f) {
    if (a.is_string()) {
      g.push_back(looks_padic(a.get<std::string>()) ? parse_padic(a.get<std::string>(), p).truncated(prec)
                                                     : PadicNumber::from_rational(p, parse_rational(a.get<std::string>()), prec));
    } else {
      g.push_back(PadicNumber::from_long(p, a.get<long>(), prec));
    }
  }
  HyperellipticCurve c(p, g, prec);
  if (c.degree() < 3) throw DomainError("f must have degree at least 3");
  if (!detail::good_reduction_mod_p(c)) throw DomainError("bad reduction at p");
  return c;
}

inline Json point_to_json(const CurvePoint& P) {
  if (P.kind == CurvePoint::Kind::inf_plus) return "inf+";
  if (P.kind == CurvePoint::Kind::inf_minus) return "inf-";
  Json j{{"x", P.exact_x ? rational_to_string(*P.exact_x) : P.x.to_string()}, {"y", P.y.to_string()}};
  return j;
}

/// Reads a point given by rational or p-adic coordinates. A missing y is lifted from x, taking the
/// square root whose unit part reduces to "y_residue" (by default the root with the smaller residue).
inline CurvePoint point_from_json(const HyperellipticCurve& c, const Json& j) {
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s == "inf+") return CurvePoint::infinity_plus();
    if (s == "inf-") return CurvePoint::infinity_minus();
    throw std::invalid_argument("point must be an object or \"inf+\"/\"inf-\": " + s);
  }
  if (!j.is_object() || !j.contains("x")) throw std::invalid_argument("point must have an x coordinate");
  const long p = c.prime();
  const long n = c.precision();
  auto text = [](const Json& v) { return v.is_string() ? v.get<std::string>() : std::to_string(v.get<long>()); };
  std::string xs = text(j.at("x"));
  if (!j.contains("y")) {
    long hint = j.value("y_residue", -1L);
    if (looks_padic(xs)) return lift_x(c, parse_padic(xs, p), hint);
    return lift_x(c, parse_rational(xs), hint);
  }
  std::string ys = text(j.at("y"));
  if (!looks_padic(xs) && !looks_padic(ys)) {
    CurvePoint P = rational_point(c, parse_rational(xs), parse_rational(ys));
    require_on_curve(c, P);
    return P;
  }
  std::optional<mpq_class> ex;
  PadicNumber x;
  if (looks_padic(xs)) {
    x = parse_padic(xs, p);
  } else {
    ex = parse_rational(xs);
    x = PadicNumber::from_rational(p, *ex, n);
  }
  PadicNumber y = looks_padic(ys) ? parse_padic(ys, p) : PadicNumber::from_rational(p, parse_rational(ys), n);
  CurvePoint P = CurvePoint::affine(x, y, ex);
  require_on_curve(c, P);
  return P;
}

inline Json matrix_to_json(const PadicMatrix& A) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < A.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < A.cols(); ++j) row.push_back(padic_to_json(A(i, j)));
    rows.push_back(row);
  }
  return rows;
}

inline PadicMatrix matrix_from_json(const Json& j, long p) {
  const std::size_t r = j.size();
  const std::size_t c = r ? j[0].size() : 0;
  PadicMatrix A(p, r, c, 1);
  for (std::size_t i = 0; i < r; ++i) {
    if (j[i].size() != c) throw std::invalid_argument("ragged matrix");
    for (std::size_t k = 0; k < c; ++k) A(i, k) = padic_from_json(j[i][k], p);
  }
  return A;
}

inline Json vector_to_json(const std::vector<PadicNumber>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(padic_to_json(x));
  return a;
}

inline std::vector<PadicNumber> vector_from_json(const Json& j, long p) {
  std::vector<PadicNumber> v;
  for (const auto& x : j) v.push_back(padic_from_json(x, p));
  return v;
}

// ---------------------------------------------------------------------------
// Precomputation cache

/// Canonical text identifying a precomputation request; the cache file name is derived from its hash.
inline std::string cache_identity(const HyperellipticCurve& c, long N, WMode mode) {
  Json j{{"version", cache_format_version}, {"curve", curve_to_json(c)}, {"N", N}, {"w_mode", to_string(mode)}};
  j["curve"].erase("prec");
  return j.dump();
}

inline Json precomputed_to_json(const PrecomputedData& D) {
  Json h = Json::array();
  for (const auto& prim : D.frobenius.h) {
    Json levels = Json::array();
    for (const auto& poly : prim.by_level) levels.push_back(vector_to_json(poly));
    h.push_back(levels);
  }
  Json j;
  j["version"] = cache_format_version;
  j["curve"] = curve_to_json(D.curve);
  j["N"] = D.target_precision;
  j["working_precision"] = D.working_precision;
  j["series_order"] = D.series_order;
  j["w_mode"] = to_string(D.w_mode);
  j["Phi"] = matrix_to_json(D.frobenius.phi);
  j["h"] = h;
  j["c"] = vector_to_json(D.eta.c);
  j["Frob"] = matrix_to_json(D.Frob);
  j["M"] = matrix_to_json(D.M);
  j["W"] = matrix_to_json(D.W);
  j["m"] = D.m;
  j["m1"] = D.m1;
  j["m2"] = D.m2;
  return j;
}

inline PrecomputedData precomputed_from_json(const Json& j) {
  if (j.value("version", 0) != cache_format_version) throw std::invalid_argument("unsupported cache version");
  PrecomputedData D;
  D.curve = curve_from_json(j.at("curve"));
  const long p = D.curve.prime();
  D.target_precision = j.at("N").get<long>();
  D.working_precision = j.at("working_precision").get<long>();
  D.series_order = j.at("series_order").get<long>();
  D.curve = D.curve.at_precision(D.working_precision);
  D.w_mode = parse_w_mode(j.at("w_mode").get<std::string>());
  D.frobenius.curve = D.curve;
  D.frobenius.precision = D.working_precision;
  D.frobenius.phi = matrix_from_json(j.at("Phi"), p);
  for (const auto& levels : j.at("h")) {
    FrobeniusPrimitive prim;
    for (const auto& poly : levels) prim.by_level.push_back(vector_from_json(poly, p));
    D.frobenius.h.push_back(prim);
  }
  D.eta.genus = D.curve.genus();
  D.eta.c = vector_from_json(j.at("c"), p);
  D.Frob = matrix_from_json(j.at("Frob"), p);
  D.M = matrix_from_json(j.at("M"), p);
  D.W = matrix_from_json(j.at("W"), p);
  D.m = j.at("m").get<long>();
  D.m1 = j.at("m1").get<long>();
  D.m2 = j.at("m2").get<long>();
  D.ordinary = is_ordinary(D.Frob);
  D.aux_cache = std::make_shared<AuxiliaryFrobeniusCache>();
  return D;
}

// ---------------------------------------------------------------------------
// Results

inline Json height_to_json(const HeightResult& r) {
  return Json{{"value", padic_to_json(r.value)},
              {"text", r.value.to_string()},
              {"precision", r.precision()},
              {"w_mode", to_string(r.w_mode)},
              {"trace", r.trace}};
}

inline Json integrals_to_json(const BasisIntegrals& ints) {
  return Json{{"from", point_to_json(ints.from)}, {"to", point_to_json(ints.to)}, {"values", vector_to_json(ints.values)},
              {"precision", ints.precision()}};
}

}  // namespace padic_heights
