#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "series.hpp"

namespace padic_heights {

/// A point on y^2 = f(x): affine, or one of the two points at infinity (1 : +-1 : 0).
/// On an odd-degree model both infinite tags denote the single point at infinity.
struct CurvePoint {
  enum class Kind { affine, inf_plus, inf_minus };

  Kind kind = Kind::affine;
  PadicNumber x;
  PadicNumber y;
  /// The x-coordinate as an exact rational, when it is known to be one.
  std::optional<mpq_class> exact_x;

  static CurvePoint affine(PadicNumber x, PadicNumber y, std::optional<mpq_class> exact_x = std::nullopt) {
    return {Kind::affine, std::move(x), std::move(y), std::move(exact_x)};
  }
  static CurvePoint infinity_plus() { return {Kind::inf_plus, {}, {}, std::nullopt}; }
  static CurvePoint infinity_minus() { return {Kind::inf_minus, {}, {}, std::nullopt}; }

  bool is_affine() const { return kind == Kind::affine; }
  bool is_infinite() const { return kind != Kind::affine; }

  long precision() const {
    if (!is_affine()) return 1L << 40;
    return std::min(x.precision(), y.precision());
  }

  CurvePoint truncated(long n) const {
    if (!is_affine()) return *this;
    return affine(x.truncated(n), y.truncated(n), exact_x);
  }

  std::string to_string() const {
    if (kind == Kind::inf_plus) return "inf+";
    if (kind == Kind::inf_minus) return "inf-";
    return "(" + x.to_string() + ", " + y.to_string() + ")";
  }
};

enum class DiscKind { ordinary_affine, weierstrass, infinite_plus, infinite_minus };

inline const char* to_string(DiscKind k) {
  switch (k) {
    case DiscKind::ordinary_affine:
      return "ordinary";
    case DiscKind::weierstrass:
      return "weierstrass";
    case DiscKind::infinite_plus:
      return "infinite+";
    case DiscKind::infinite_minus:
      return "infinite-";
  }
  return "?";
}

/// Residue disc of a point: its kind and reduction (x mod p, y mod p); infinite discs use x_bar = -1.
struct DiscClass {
  DiscKind kind = DiscKind::ordinary_affine;
  long x_bar = 0;
  long y_bar = 0;

  bool operator==(const DiscClass& o) const { return kind == o.kind && x_bar == o.x_bar && y_bar == o.y_bar; }
  bool operator!=(const DiscClass& o) const { return !(*this == o); }
  bool is_infinite() const { return kind == DiscKind::infinite_plus || kind == DiscKind::infinite_minus; }
};

namespace fp {

using Poly = std::vector<long>;

inline long mod(long a, long p) {
  a %= p;
  return a < 0 ? a + p : a;
}

inline long inv(long a, long p) {
  mpz_class A(mod(a, p)), P(p), r;
  if (mpz_invert(r.get_mpz_t(), A.get_mpz_t(), P.get_mpz_t()) == 0) throw DomainError("not invertible mod p");
  return r.get_si();
}

inline void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

inline Poly rem(Poly a, const Poly& b, long p) {
  trim(a);
  long lead_inv = inv(b.back(), p);
  while (a.size() >= b.size()) {
    long q = a.back() * lead_inv % p;
    std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] = mod(a[shift + i] - q * b[i], p);
    trim(a);
  }
  return a;
}

inline Poly gcd(Poly a, Poly b, long p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

inline long eval(const Poly& f, long x, long p) {
  long acc = 0;
  for (std::size_t i = f.size(); i-- > 0;) acc = mod(acc * x + f[i], p);
  return acc;
}

}  // namespace fp

/// Hyperelliptic curve y^2 = f(x) over Z_p.
class HyperellipticCurve {
 public:
  HyperellipticCurve() = default;

  HyperellipticCurve(long p, PadicPolynomial f, long prec, std::vector<mpq_class> exact = {})
      : p_(p), prec_(prec), f_(std::move(f)), exact_(std::move(exact)) {
    while (f_.size() > 1 && f_.back().is_zero()) f_.pop_back();
    genus_ = (degree() - 1) / 2;
  }

  long prime() const { return p_; }
  int genus() const { return genus_; }
  long precision() const { return prec_; }
  int degree() const { return static_cast<int>(f_.size()) - 1; }
  const PadicPolynomial& f() const { return f_; }
  const std::vector<mpq_class>& exact_coefficients() const { return exact_; }
  bool has_exact_coefficients() const { return !exact_.empty(); }

  /// Monic of even degree 2g+2.
  bool is_normal() const {
    return degree() % 2 == 0 && f_.back().equals(PadicNumber::from_long(p_, 1, prec_));
  }
  bool needs_normalization() const { return !is_normal(); }

  /// Same curve at another precision; exact coefficients are re-expanded, p-adic ones truncated.
  HyperellipticCurve at_precision(long n) const {
    if (!exact_.empty()) {
      PadicPolynomial g;
      for (const auto& c : exact_) g.push_back(PadicNumber::from_rational(p_, c, n));
      return HyperellipticCurve(p_, g, n, exact_);
    }
    PadicPolynomial g;
    for (const auto& c : f_) g.push_back(c.truncated(n));
    return HyperellipticCurve(p_, g, std::min(n, prec_));
  }

  PadicNumber eval(const PadicNumber& x) const { return poly_eval(f_, x); }
  PadicNumber eval_derivative(const PadicNumber& x) const { return poly_eval(poly_derivative(f_), x); }

  /// Reduction of f modulo p.
  fp::Poly reduction() const {
    fp::Poly r;
    for (const auto& c : f_) r.push_back(c.residue());
    return r;
  }

  bool operator==(const HyperellipticCurve& o) const {
    if (p_ != o.p_ || f_.size() != o.f_.size()) return false;
    for (std::size_t i = 0; i < f_.size(); ++i) {
      if (!f_[i].equals(o.f_[i])) return false;
    }
    return true;
  }

 private:
  long p_ = 0;
  int genus_ = 0;
  long prec_ = 0;
  PadicPolynomial f_;
  std::vector<mpq_class> exact_;
};

namespace detail {

/// Exact discriminant-like invariant: the resultant Res(f, f') over Q (zero iff f has a repeated root).
inline mpq_class resultant_with_derivative(const std::vector<mpq_class>& f) {
  const int n = static_cast<int>(f.size()) - 1;
  std::vector<mpq_class> df;
  for (int i = 1; i <= n; ++i) df.push_back(f[i] * i);
  const int m = n - 1;
  const int size = n + m;
  std::vector<std::vector<mpq_class>> s(size, std::vector<mpq_class>(size, 0));
  for (int r = 0; r < m; ++r) {
    for (int i = 0; i <= n; ++i) s[r][r + i] = f[n - i];
  }
  for (int r = 0; r < n; ++r) {
    for (int i = 0; i <= m; ++i) s[m + r][r + i] = df[m - i];
  }
  mpq_class det = 1;
  for (int j = 0; j < size; ++j) {
    int piv = -1;
    for (int i = j; i < size; ++i) {
      if (s[i][j] != 0) {
        piv = i;
        break;
      }
    }
    if (piv < 0) return 0;
    if (piv != j) {
      std::swap(s[piv], s[j]);
      det = -det;
    }
    det *= s[j][j];
    for (int i = j + 1; i < size; ++i) {
      if (s[i][j] == 0) continue;
      mpq_class factor = s[i][j] / s[j][j];
      for (int k = j; k < size; ++k) s[i][k] -= factor * s[j][k];
    }
  }
  return det;
}

inline long rational_valuation(const mpq_class& q, long p) {
  return valuation_of(q.get_num(), p) - valuation_of(q.get_den(), p);
}

inline bool is_odd_prime(long p) {
  if (p < 3 || p % 2 == 0) return false;
  for (long d = 3; d * d <= p; d += 2) {
    if (p % d == 0) return false;
  }
  return true;
}

/// True when f mod p keeps its degree and is squarefree.
inline bool good_reduction_mod_p(const HyperellipticCurve& c) {
  fp::Poly r = c.reduction();
  const long p = c.prime();
  if (r.empty() || r.back() == 0) {
    // Degree drop by exactly one keeps good reduction (a Weierstrass point reduces to infinity).
    fp::Poly t = r;
    fp::trim(t);
    if (static_cast<int>(t.size()) - 1 != c.degree() - 1 || c.degree() % 2 != 0) return false;
    r = t;
  }
  fp::Poly d;
  for (std::size_t i = 1; i < r.size(); ++i) d.push_back(fp::mod(static_cast<long>(i) * r[i], p));
  fp::Poly g = fp::gcd(r, d, p);
  return g.size() == 1;
}

}  // namespace detail

/// Validates y^2 = f(x) at p; coefficients are p-integral rationals, lowest degree first.
inline HyperellipticCurve build_curve(long p, const std::vector<mpq_class>& coeffs, long prec) {
  std::vector<mpq_class> f = coeffs;
  while (!f.empty() && f.back() == 0) f.pop_back();
  if (f.size() < 4) throw DomainError("degree of f must be at least 3");
  if (!detail::is_odd_prime(p)) throw DomainError("p must be an odd prime");
  const int g = (static_cast<int>(f.size()) - 2) / 2;
  if (p <= g) throw DomainError("prime too small: need p > g");
  for (const auto& c : f) {
    if (c != 0 && detail::rational_valuation(c, p) < 0) throw DomainError("coefficients must be p-integral");
  }
  mpq_class res = detail::resultant_with_derivative(f);
  if (res == 0) throw DomainError("singular: f has a repeated root");
  // disc(f) = +-Res(f, f') / lc(f).
  long vdisc = detail::rational_valuation(res, p) - detail::rational_valuation(f.back(), p);
  if (vdisc > 0) throw DomainError("bad reduction at p");
  PadicPolynomial fp_;
  for (const auto& c : f) fp_.push_back(PadicNumber::from_rational(p, c, prec));
  return HyperellipticCurve(p, fp_, prec, f);
}

inline PadicNumber one(long p, long prec) { return PadicNumber::from_long(p, 1, prec); }

inline bool on_curve(const HyperellipticCurve& c, const CurvePoint& P) {
  if (!P.is_affine()) return true;
  return (P.y * P.y - c.eval(P.x)).is_zero();
}

inline void require_on_curve(const HyperellipticCurve& c, const CurvePoint& P) {
  if (!on_curve(c, P)) throw DomainError("point is not on the curve: " + P.to_string());
}

inline CurvePoint involution(const HyperellipticCurve&, const CurvePoint& P) {
  switch (P.kind) {
    case CurvePoint::Kind::inf_plus:
      return CurvePoint::infinity_minus();
    case CurvePoint::Kind::inf_minus:
      return CurvePoint::infinity_plus();
    default:
      return CurvePoint::affine(P.x, -P.y, P.exact_x);
  }
}

inline DiscClass classify_point(const HyperellipticCurve& c, const CurvePoint& P) {
  if (P.kind == CurvePoint::Kind::inf_plus) return {DiscKind::infinite_plus, -1, 1};
  if (P.kind == CurvePoint::Kind::inf_minus) return {DiscKind::infinite_minus, -1, c.prime() - 1};
  if (!P.x.is_zero() && P.x.valuation() < 0) {
    // y / x^(g+1) tends to +-1 in the infinite discs of a monic model.
    PadicNumber ratio = P.y / P.x.pow(c.genus() + 1);
    long r = ratio.residue();
    if (r == 1) return {DiscKind::infinite_plus, -1, 1};
    if (r == c.prime() - 1) return {DiscKind::infinite_minus, -1, c.prime() - 1};
    throw DomainError("point with negative valuation is not in an infinite disc of a monic model");
  }
  long xb = P.x.residue();
  if (!P.y.is_zero() && P.y.valuation() < 0) throw DomainError("integral x with non-integral y");
  long yb = P.y.residue();
  if (yb == 0) return {DiscKind::weierstrass, xb, 0};
  return {DiscKind::ordinary_affine, xb, yb};
}

inline bool same_disc(const HyperellipticCurve& c, const CurvePoint& P, const CurvePoint& Q) {
  return classify_point(c, P) == classify_point(c, Q);
}

/// The Weierstrass point (a, 0) in the Weierstrass disc of P.
inline CurvePoint weierstrass_point(const HyperellipticCurve& c, const CurvePoint& P) {
  if (classify_point(c, P).kind != DiscKind::weierstrass) throw DomainError("point is not in a Weierstrass disc");
  const long n = c.precision();
  PadicNumber a = PadicNumber::from_long(c.prime(), P.x.residue(), n);
  PadicPolynomial df = poly_derivative(c.f());
  for (long have = 1; have < 2 * n; have *= 2) a = a - c.eval(a) / poly_eval(df, a);
  return CurvePoint::affine(a.truncated(n), PadicNumber::zero(c.prime(), n));
}

/// Frobenius-fixed point of the disc of an ordinary affine P.
inline CurvePoint teichmuller_point(const HyperellipticCurve& c, const CurvePoint& P) {
  DiscClass d = classify_point(c, P);
  if (d.kind != DiscKind::ordinary_affine) throw DomainError("Teichmuller point needs an ordinary affine disc");
  const long n = std::min(c.precision(), P.precision());
  PadicNumber x = d.x_bar == 0 ? PadicNumber::zero(c.prime(), n) : teichmuller(P.x.truncated(n));
  PadicNumber y = hensel_sqrt(c.eval(x), d.y_bar);
  return CurvePoint::affine(x, y);
}

/// Lifts a point with the given x: y = sqrt(f(x)) with y congruent to y_hint (or the smaller root).
inline CurvePoint lift_x(const HyperellipticCurve& c, const PadicNumber& x, long y_hint = -1) {
  PadicNumber fx = c.eval(x);
  if (!x.is_zero() && x.valuation() < 0) {
    long k = c.genus() + 1;
    PadicNumber scaled = fx / x.pow(2 * k);
    return CurvePoint::affine(x, hensel_sqrt(scaled, y_hint) * x.pow(k));
  }
  return CurvePoint::affine(x, hensel_sqrt(fx, y_hint));
}

/// Lifts a point with a rational x-coordinate, recording it as exact.
inline CurvePoint lift_x(const HyperellipticCurve& c, const mpq_class& x, long y_hint = -1) {
  CurvePoint P = lift_x(c, PadicNumber::from_rational(c.prime(), x, c.precision()), y_hint);
  P.exact_x = x;
  return P;
}

/// The affine point (x, y) with both coordinates rational.
inline CurvePoint rational_point(const HyperellipticCurve& c, const mpq_class& x, const mpq_class& y) {
  const long p = c.prime();
  const long n = c.precision();
  return CurvePoint::affine(PadicNumber::from_rational(p, x, n), PadicNumber::from_rational(p, y, n), x);
}

/// Recomputes an affine point with exact x on the curve c (typically at a higher precision).
/// The square root is chosen to agree with the old y-coordinate.
inline CurvePoint refine_point(const HyperellipticCurve& c, const CurvePoint& P) {
  if (!P.is_affine() || !P.exact_x) return P;
  const long p = c.prime();
  PadicNumber x = PadicNumber::from_rational(p, *P.exact_x, c.precision());
  PadicNumber fx = c.eval(x);
  if (fx.is_zero() || P.y.is_zero()) return CurvePoint::affine(x, PadicNumber::zero(p, c.precision()), P.exact_x);
  long hint = P.y.unit_part().residue();
  CurvePoint Q;
  if (!x.is_zero() && x.valuation() < 0) {
    long k = c.genus() + 1;
    PadicNumber scale = x.pow(k);
    PadicNumber r = hensel_sqrt(fx / (scale * scale));
    // Pick the sign whose product with x^k has the hinted unit residue.
    PadicNumber y = r * scale;
    if (y.unit_part().residue() != hint) y = -y;
    Q = CurvePoint::affine(x, y, P.exact_x);
  } else {
    Q = CurvePoint::affine(x, hensel_sqrt(fx, hint), P.exact_x);
  }
  return Q;
}

// ---------------------------------------------------------------------------
// Model changes.

/// Either the identity or tau: x' = 1/(x - a), y' = -y / (b (x - a)^(g+1)) with (a, b) a point of the source.
struct ModelMap {
  enum class Kind { identity, tau };
  Kind kind = Kind::identity;
  PadicNumber a;
  PadicNumber b;
  std::optional<mpq_class> exact_a;
  HyperellipticCurve source;
  HyperellipticCurve target;
};

namespace detail {

inline PadicPolynomial poly_mul(const PadicPolynomial& a, const PadicPolynomial& b) {
  PadicPolynomial r(a.size() + b.size() - 1);
  for (std::size_t k = 0; k < r.size(); ++k) {
    bool first = true;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (k < i || k - i >= b.size()) continue;
      PadicNumber t = a[i] * b[k - i];
      r[k] = first ? t : r[k] + t;
      first = false;
    }
  }
  return r;
}

/// Exact coefficients of x'^(2g+2) f(a + 1/x') / f(a).
inline std::vector<mpq_class> exact_tau_coefficients(const std::vector<mpq_class>& f, int g, const mpq_class& a) {
  const int d = 2 * g + 2;
  std::vector<mpq_class> acc(d + 1, 0);
  std::vector<mpq_class> power{1};
  mpq_class fa = 0;
  for (std::size_t k = f.size(); k-- > 0;) fa = fa * a + f[k];
  for (std::size_t k = 0; k < f.size(); ++k) {
    for (std::size_t i = 0; i < power.size(); ++i) acc[i + (d - k)] += f[k] * power[i];
    std::vector<mpq_class> next(power.size() + 1, 0);
    for (std::size_t i = 0; i < power.size(); ++i) {
      next[i] += power[i];
      next[i + 1] += power[i] * a;
    }
    power = std::move(next);
  }
  for (auto& coef : acc) coef /= fa;
  return acc;
}

}  // namespace detail

/// Target of tau at (a, b): f'(x') = x'^(2g+2) f(a + 1/x') / b^2, made exactly monic.
/// When the source has exact coefficients and a is an exact rational, so does the target.
inline HyperellipticCurve tau_target(const HyperellipticCurve& c, const PadicNumber& a, const PadicNumber& b,
                                     const std::optional<mpq_class>& exact_a = std::nullopt) {
  const long p = c.prime();
  const int g = c.genus();
  const int d = 2 * g + 2;
  if (exact_a && c.has_exact_coefficients()) {
    std::vector<mpq_class> ex = detail::exact_tau_coefficients(c.exact_coefficients(), g, *exact_a);
    const long n = c.precision();
    PadicPolynomial fp_;
    for (const auto& q : ex) fp_.push_back(PadicNumber::from_rational(p, q, n));
    return HyperellipticCurve(p, fp_, n, ex);
  }
  const long n = std::min({c.precision(), a.precision(), b.precision()});
  PadicPolynomial lin{one(p, n), a};  // 1 + a x'
  PadicPolynomial acc(d + 1, PadicNumber::zero(p, n));
  PadicPolynomial power{one(p, n)};  // (1 + a x')^k
  for (int k = 0; k <= c.degree(); ++k) {
    const PadicNumber& fk = c.f()[k];
    for (std::size_t i = 0; i < power.size(); ++i) acc[i + (d - k)] += fk * power[i];
    power = detail::poly_mul(power, lin);
  }
  PadicNumber b2inv = (b * b).inverse();
  for (auto& coef : acc) coef = (coef * b2inv).truncated(n);
  acc[d] = one(p, n);
  return HyperellipticCurve(p, acc, n);
}

/// The map tau based at the affine point P = (a, b) of c, which needs a unit y-coordinate.
inline ModelMap tau_map(const HyperellipticCurve& c, const CurvePoint& P) {
  if (!P.is_affine()) throw DomainError("base point must be affine");
  if (P.y.is_zero() || P.y.valuation() != 0) throw DomainError("base point must have a unit y-coordinate");
  ModelMap m;
  m.kind = ModelMap::Kind::tau;
  m.source = c;
  m.a = P.x;
  m.b = P.y;
  m.exact_a = P.exact_x;
  m.target = tau_target(c, P.x, P.y, P.exact_x);
  return m;
}

/// The same map with the source re-expanded at precision n; needs exact data to gain digits.
inline ModelMap refine_map(const ModelMap& m, long n) {
  if (m.kind == ModelMap::Kind::identity) {
    ModelMap r = m;
    r.source = m.source.at_precision(n);
    r.target = r.source;
    return r;
  }
  HyperellipticCurve src = m.source.at_precision(n);
  CurvePoint base = CurvePoint::affine(m.a, m.b, m.exact_a);
  base = refine_point(src, base);
  return tau_map(src, base);
}

inline CurvePoint map_point(const ModelMap& m, const CurvePoint& P) {
  if (m.kind == ModelMap::Kind::identity) return P;
  const HyperellipticCurve& src = m.source;
  const long p = src.prime();
  const int g = m.target.genus();
  const long n = m.target.precision();
  if (P.is_infinite()) {
    if (src.degree() % 2 == 1) {
      return CurvePoint::affine(PadicNumber::zero(p, n), PadicNumber::zero(p, n), mpq_class(0));
    }
    // y / x^(g+1) -> +-1 at infinity, so y' -> -(+-1)/b.
    PadicNumber yv = m.b.inverse();
    if (P.kind == CurvePoint::Kind::inf_plus) yv = -yv;
    return CurvePoint::affine(PadicNumber::zero(p, n), yv.truncated(n), mpq_class(0));
  }
  require_on_curve(src, P);
  PadicNumber dx = P.x - m.a;
  if (dx.is_zero()) {
    if ((P.y - m.b).is_zero()) return CurvePoint::infinity_minus();
    if ((P.y + m.b).is_zero()) return CurvePoint::infinity_plus();
    throw DomainError("point with x = a is neither (a, b) nor (a, -b)");
  }
  PadicNumber xp = dx.inverse();
  PadicNumber yp = -(P.y / (m.b * dx.pow(g + 1)));
  std::optional<mpq_class> ex;
  if (P.exact_x && m.exact_a) ex = mpq_class(1) / (*P.exact_x - *m.exact_a);
  return CurvePoint::affine(xp, yp, ex);
}

/// Brings the curve to monic even-degree normal form, moving P0 (or a scanned unit-y point) to infinity.
inline std::pair<HyperellipticCurve, ModelMap> normalize_model(const HyperellipticCurve& c,
                                                               const std::optional<CurvePoint>& P0 = std::nullopt) {
  if (!P0 && c.is_normal()) {
    ModelMap m;
    m.source = c;
    m.target = c;
    return {c, m};
  }
  CurvePoint base;
  if (P0) {
    if (!P0->is_affine()) throw DomainError("base point must be affine");
    require_on_curve(c, *P0);
    if (P0->y.is_zero() || P0->y.valuation() != 0) throw DomainError("base point must have a unit y-coordinate");
    base = *P0;
  } else {
    bool found = false;
    fp::Poly red = c.reduction();
    for (long xb = 0; xb < c.prime() && !found; ++xb) {
      long v = fp::eval(red, xb, c.prime());
      if (v == 0 || detail::sqrt_mod_prime(v, c.prime()) < 0) continue;
      base = lift_x(c, mpq_class(xb));
      found = true;
    }
    if (!found) throw DomainError("no unit-y point");
  }
  ModelMap m = tau_map(c, base);
  if (!m.target.is_normal() || !detail::good_reduction_mod_p(m.target)) {
    throw DomainError("normalized model does not have unit discriminant");
  }
  return {m.target, m};
}

// ---------------------------------------------------------------------------
// Local expansions.

/// Local coordinates (x(t), y(t)) in the uniformizer of the disc of P:
/// t = x - x(P) in ordinary discs, t = y in Weierstrass discs (centred at the Weierstrass point),
/// t = 1/x in infinite discs (centred at the point at infinity).
inline std::pair<PadicSeries, PadicSeries> local_expansion(const HyperellipticCurve& c, const CurvePoint& P, long k) {
  const long p = c.prime();
  const long n = c.precision();
  const int g = c.genus();
  DiscClass d = classify_point(c, P);
  if (d.is_infinite()) {
    PadicSeries x(p, -1, k - 1, {one(p, n)}, n);
    std::vector<PadicNumber> rev(c.f().rbegin(), c.f().rend());
    PadicSeries s = PadicSeries(p, 0, k, rev, n).sqrt(1);
    if (d.kind == DiscKind::infinite_minus) s = -s;
    return {x, s.shifted(-(g + 1))};
  }
  if (d.kind == DiscKind::weierstrass) {
    CurvePoint T = weierstrass_point(c, P);
    PadicSeries t = PadicSeries::variable(p, k, n);
    PadicSeries t2 = t * t;
    PadicSeries x = PadicSeries::constant(T.x, k);
    PadicPolynomial df = poly_derivative(c.f());
    for (long have = 1; have < 2 * k; have *= 2) {
      PadicSeries fx = PadicSeries::poly_compose(c.f(), x) - t2;
      PadicSeries dfx = PadicSeries::poly_compose(df, x);
      x = x - fx * dfx.inverse();
    }
    return {x, t};
  }
  PadicSeries x = PadicSeries::constant(P.x, k) + PadicSeries::variable(p, k, n);
  PadicSeries y = PadicSeries::poly_compose(c.f(), x).sqrt(d.y_bar);
  return {x, y};
}

/// omega = scalar * A(x) / (x - a)^e * dx / y with e in {0, 1}.
struct OddDifferential {
  PadicPolynomial numerator;
  std::optional<PadicNumber> pole;
  PadicNumber scalar;

  /// omega_i = x^i dx / y.
  static OddDifferential basis(long p, int i, long prec) {
    OddDifferential w;
    w.numerator.assign(i + 1, PadicNumber::zero(p, prec));
    w.numerator[i] = one(p, prec);
    w.scalar = one(p, prec);
    return w;
  }

  /// y(P)/(x - x(P)) dx / y.
  static OddDifferential third_kind(const CurvePoint& P) {
    OddDifferential w;
    w.numerator = {one(P.x.prime(), P.precision())};
    w.pole = P.x;
    w.scalar = P.y;
    return w;
  }
};

/// Laurent expansion of omega / dt in the uniformizer of local_expansion at P, with k terms.
inline PadicSeries expand_odd_differential(const HyperellipticCurve& c, const OddDifferential& w, const CurvePoint& P,
                                           long k) {
  const long p = c.prime();
  const long n = c.precision();
  DiscClass d = classify_point(c, P);
  auto [x, y] = local_expansion(c, P, k);
  PadicSeries body = PadicSeries::poly_compose(w.numerator, x);
  if (w.pole) {
    PadicSeries shifted = x - PadicSeries::constant(*w.pole, x.order());
    if (d.kind == DiscKind::ordinary_affine && shifted.coeff(0).is_zero()) {
      // Pole at the centre: x - a = t exactly.
      shifted = PadicSeries::variable(p, k, n);
    }
    body = body * shifted.inverse();
  }
  PadicSeries dx_over_y;
  if (d.kind == DiscKind::weierstrass) {
    PadicPolynomial df = poly_derivative(c.f());
    dx_over_y = PadicNumber::from_long(p, 2, n + 1) * PadicSeries::poly_compose(df, x).inverse();
  } else if (d.is_infinite()) {
    dx_over_y = -(y.inverse().shifted(-2));
  } else {
    dx_over_y = y.inverse();
  }
  return w.scalar * (body * dx_over_y);
}

}  // namespace padic_heights
