#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "padic_heights.hpp"

namespace fixtures {

using namespace padic_heights;

struct TestCurve {
  std::string name;
  long p;
  std::vector<long> f;  // increasing degree
  long N;

  std::vector<mpq_class> rational_f() const {
    std::vector<mpq_class> q;
    for (long c : f) q.emplace_back(c);
    return q;
  }
  HyperellipticCurve curve(long prec) const { return build_curve(p, rational_f(), prec); }
};

/// y^2 = x^6 + 2x^5 + 5x^4 + 2x^3 - 2x^2 - 4x - 3, a model of X_0^+(107), at p = 7.
inline TestCurve x0plus107() { return {"X0+(107)", 7, {-3, -4, -2, 2, 5, 2, 1}, 10}; }

/// y^2 = x^6 + 4x^5 + 2x^4 + 2x^3 + x^2 - 2x + 1, a model of X_0^+(67), at p = 11.
inline TestCurve x0plus67() { return {"X0+(67)", 11, {1, -2, 1, 2, 2, 4, 1}, 8}; }

/// y^2 = x(x - 1)(x - 2)(x - 3)(x - 4)(x + 1) at p = 11: six rational Weierstrass points.
inline TestCurve six_roots() { return {"six-roots", 11, {0, 24, -26, -15, 25, -9, 1}, 8}; }

/// y^2 = x^5 + (x - 1)(x - 4)(x - 9)(x - 16) at p = 7, before normalization.
inline TestCurve quintic() { return {"quintic", 7, {576, -820, 273, -30, 1, 1}, 10}; }

/// Genus one, y^2 = x^4 + x + 3 at p = 7.
inline TestCurve genus_one() { return {"genus-one", 7, {3, 1, 0, 0, 1}, 8}; }

/// The reference height on the quintic: h_7(P - Q, R - S) with P = (1, 1), Q = (4, 2^5), R = (9, 3^5),
/// S = (16, 4^5), unit-root complement, to 10 digits.
inline const char* quintic_reference() {
  return "5*7 + 4*7^3 + 6*7^4 + 3*7^5 + 3*7^6 + 4*7^7 + 4*7^8 + 6*7^9 + O(7^10)";
}

/// The quintic height computed on the monic sextic model obtained by moving `base` (or the automatically
/// chosen point when absent) to infinity.
inline HeightResult quintic_height(long N, WMode mode, std::optional<std::pair<long, long>> base) {
  HyperellipticCurve c = quintic().curve(N + 20);
  CurvePoint P = rational_point(c, 1, 1), Q = rational_point(c, 4, 32), R = rational_point(c, 9, 243),
             S = rational_point(c, 16, 1024);
  auto [model, map] = base ? normalize_model(c, rational_point(c, base->first, base->second)) : normalize_model(c);
  PrecomputedData D = precompute(model, N, mode);
  ModelMap fine = refine_map(map, D.working_precision);
  return pair_height(D, map_point(fine, P), map_point(fine, Q), map_point(fine, R), map_point(fine, S));
}

/// Shared precomputations, built once per test binary.
inline const PrecomputedData& precomputed(const TestCurve& t, WMode mode, long N = -1) {
  static std::mutex mu;
  static std::map<std::string, std::unique_ptr<PrecomputedData>> store;
  if (N < 0) N = t.N;
  std::string key = t.name + "/" + to_string(mode) + "/" + std::to_string(N);
  std::lock_guard<std::mutex> lock(mu);
  auto it = store.find(key);
  if (it == store.end()) {
    auto D = std::make_unique<PrecomputedData>(precompute(t.curve(N + 10), N, mode));
    it = store.emplace(key, std::move(D)).first;
  }
  return *it->second;
}

/// The lower bound N - m - m' - m'' on the attained precision of a height.
inline long precision_floor(const PrecomputedData& D) { return D.target_precision - D.m - D.m1 - D.m2; }

// ---------------------------------------------------------------------------
// Random points

enum class PointKind { ordinary, infinity, infinite_disc, weierstrass_disc, weierstrass };

inline bool is_unit_square_mod_p(const mpq_class& v, long p) {
  if (oracle::valuation(v, p) != 0) return false;
  long r = static_cast<long>(oracle::residue_mod(v, p, 1).get_si());
  long e = (p - 1) / 2, acc = 1, b = r;
  while (e > 0) {
    if (e & 1) acc = acc * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return acc == 1;
}

/// A random point of the given kind with exact rational x, or nullopt when none was found quickly.
inline std::optional<CurvePoint> random_point(const HyperellipticCurve& c, const TestCurve& t, PointKind kind,
                                              std::mt19937_64& rng) {
  const long p = t.p;
  std::vector<mpq_class> f = t.rational_f();
  std::uniform_int_distribution<long> num(-4 * p * p, 4 * p * p);
  std::uniform_int_distribution<int> coin(0, 1);
  for (int attempt = 0; attempt < 400; ++attempt) {
    switch (kind) {
      case PointKind::infinity:
        return coin(rng) ? CurvePoint::infinity_plus() : CurvePoint::infinity_minus();
      case PointKind::ordinary: {
        mpq_class x(num(rng));
        if (!is_unit_square_mod_p(oracle::eval(f, x), p)) continue;
        CurvePoint P = lift_x(c, x);
        return coin(rng) ? involution(c, P) : P;
      }
      case PointKind::infinite_disc: {
        long k = num(rng);
        if (k % p == 0) continue;
        mpq_class x(k, p);
        x.canonicalize();
        CurvePoint P = lift_x(c, x);
        return coin(rng) ? involution(c, P) : P;
      }
      case PointKind::weierstrass_disc:
      case PointKind::weierstrass: {
        mpq_class x(num(rng));
        mpq_class v = oracle::eval(f, x);
        if (v == 0 || oracle::valuation(v, p) == 0) continue;
        if (kind == PointKind::weierstrass) {
          long xb = static_cast<long>(oracle::residue_mod(x, p, 1).get_si());
          for (long r : {xb, xb - p}) {
            if (oracle::eval(f, mpq_class(r)) == 0) return rational_point(c, mpq_class(r), mpq_class(0));
          }
          PadicNumber xp = PadicNumber::from_rational(p, x, c.precision());
          return weierstrass_point(c, CurvePoint::affine(xp, PadicNumber::zero(p, c.precision())));
        }
        long vv = oracle::valuation(v, p);
        if (vv % 2 != 0) continue;
        mpq_class u = v / mpq_class(oracle::power(p, vv));
        if (!is_unit_square_mod_p(u, p)) continue;
        CurvePoint P = lift_x(c, x);
        return coin(rng) ? involution(c, P) : P;
      }
    }
  }
  return std::nullopt;
}

inline std::optional<CurvePoint> random_point(const PrecomputedData& D, const TestCurve& t, PointKind kind,
                                              std::mt19937_64& rng) {
  return random_point(D.curve, t, kind, rng);
}

struct Quadruple {
  CurvePoint P, Q, R, S;
};

inline bool condition_one(const HyperellipticCurve& c, const Quadruple& q) {
  for (const auto& X : {q.R, q.S}) {
    for (const auto& Y : {q.P, q.Q, involution(c, q.P), involution(c, q.Q)}) {
      if (same_disc(c, X, Y)) return false;
    }
  }
  return true;
}

inline bool distinct(const HyperellipticCurve& c, const CurvePoint& A, const CurvePoint& B) {
  if (A.kind != B.kind) return true;
  if (A.is_infinite()) return false;
  return !(A.x.equals(B.x) && A.y.equals(B.y)) && !(same_disc(c, A, B) && (A.x - B.x).is_zero());
}

/// Random quadruple satisfying Condition 1 whose first pair avoids non-unit y and whose second pair
/// draws from the kinds given.
inline Quadruple random_quadruple(const PrecomputedData& D, const TestCurve& t, std::mt19937_64& rng,
                                  const std::vector<PointKind>& first, const std::vector<PointKind>& second) {
  const HyperellipticCurve& c = D.curve;
  std::uniform_int_distribution<std::size_t> pick1(0, first.size() - 1), pick2(0, second.size() - 1);
  for (int attempt = 0; attempt < 2000; ++attempt) {
    auto P = random_point(D, t, first[pick1(rng)], rng);
    auto Q = random_point(D, t, first[pick1(rng)], rng);
    auto R = random_point(D, t, second[pick2(rng)], rng);
    auto S = random_point(D, t, second[pick2(rng)], rng);
    if (!P || !Q || !R || !S) continue;
    if (!distinct(c, *P, *Q) || !distinct(c, *R, *S)) continue;
    Quadruple q{*P, *Q, *R, *S};
    if (condition_one(c, q)) return q;
  }
  throw std::runtime_error("no admissible quadruple found");
}

inline const std::vector<PointKind>& ordinary_only() {
  static const std::vector<PointKind> v{PointKind::ordinary};
  return v;
}

inline const std::vector<PointKind>& ordinary_or_infinity() {
  static const std::vector<PointKind> v{PointKind::ordinary, PointKind::ordinary, PointKind::infinity};
  return v;
}

}  // namespace fixtures
