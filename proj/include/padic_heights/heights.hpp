#pragma once

#include <string>
#include <utility>
#include <vector>

#include "coleman.hpp"

namespace padic_heights {

/// A local height together with the digits it is certified to and the branches that produced it.
struct HeightResult {
  PadicNumber value;
  std::vector<std::string> trace;
  WMode w_mode = WMode::unit_root;

  long precision() const { return value.precision(); }
};

/// psi(omega) in the eta basis and the first g coordinates u of its decomposition
/// psi = sum_{i<g} u_i eta_i + (element of W).
struct MixedCoordinates {
  std::vector<PadicNumber> psi;
  std::vector<PadicNumber> u;
};

using Divisor = std::vector<std::pair<CurvePoint, long>>;

namespace detail {

inline std::vector<PadicNumber> solve_vector(const PadicMatrix& A, const std::vector<PadicNumber>& b) {
  return solve_linear(A, PadicMatrix::column(b)).column_vector(0);
}

inline HeightResult make_result(const PrecomputedData& D, PadicNumber v, std::vector<std::string> trace) {
  HeightResult r;
  r.value = v.truncated(D.target_precision);
  r.trace = std::move(trace);
  r.w_mode = D.w_mode;
  return r;
}

inline PadicNumber half_of(const PadicNumber& x) {
  return x / PadicNumber::from_long(x.prime(), 2, x.precision() + 1);
}

inline void append(std::vector<std::string>& into, const std::vector<std::string>& from) {
  into.insert(into.end(), from.begin(), from.end());
}

inline bool is_exact_weierstrass(const CurvePoint& P) { return P.is_affine() && P.y.is_zero(); }

}  // namespace detail

/// The point P re-expanded at the working precision of D when its x-coordinate is exact.
inline CurvePoint prepare_point(const PrecomputedData& D, const CurvePoint& P) {
  if (!P.is_affine()) return P;
  CurvePoint Q = refine_point(D.curve, P);
  require_on_curve(D.curve, Q);
  return Q;
}

/// Coordinates u_0..u_{g-1} of psi in the mixed basis eta_0..eta_{g-1}, kappa_0..kappa_{g-1}.
inline std::vector<PadicNumber> mixed_basis_coordinates(const PrecomputedData& D, const std::vector<PadicNumber>& psi) {
  const int g = D.genus();
  const long p = D.prime();
  const long n = D.W.min_precision();
  PadicMatrix B(p, 2 * g, 2 * g, n);
  for (int i = 0; i < g; ++i) B(i, i) = one(p, n + 1);
  for (int i = 0; i < 2 * g; ++i) {
    for (int j = 0; j < g; ++j) B(i, g + j) = D.W(i, j);
  }
  std::vector<PadicNumber> x = detail::solve_vector(B, psi);
  x.resize(g);
  return x;
}

/// psi(omega_g) = (Frob - pI)^{-1} v, where v lists the coefficients of omega_i (i != g) in phi^*(omega_g).
inline MixedCoordinates psi_omega_g(const PrecomputedData& D) {
  const int g = D.genus();
  const long p = D.prime();
  std::vector<PadicNumber> v;
  for (int i = 0; i < 2 * g; ++i) v.push_back(D.frobenius.phi(D.eta.omega_index(i), g));
  PadicMatrix A = D.Frob;
  for (int i = 0; i < 2 * g; ++i) A(i, i) = A(i, i) - PadicNumber::from_long(p, p, A(i, i).precision() + 1);
  MixedCoordinates out;
  out.psi = detail::solve_vector(A, v);
  out.u = mixed_basis_coordinates(D, out.psi);
  return out;
}

/// h_p(inf- - inf+, R - S) = int_S^R omega_g - sum_{i<g} u_i int_S^R eta_i with u from psi(omega_g).
inline HeightResult height_inf_inf(const PrecomputedData& D, const CurvePoint& R, const CurvePoint& S) {
  const int g = D.genus();
  if (classify_point(D.curve, R).is_infinite() || classify_point(D.curve, S).is_infinite()) {
    throw DomainError("Condition 1 violated: an endpoint lies in a disc at infinity");
  }
  MixedCoordinates mc = psi_omega_g(D);
  BasisIntegrals ints = coleman_integrals_on_basis(D, prepare_point(D, S), prepare_point(D, R));
  PadicNumber v = ints.values[g];
  for (int i = 0; i < g; ++i) v -= mc.u[i] * ints.values[i];
  std::vector<std::string> trace{"infinity pair: h(inf- - inf+, R - S)"};
  if (same_disc(D.curve, R, S)) trace.push_back("tiny integrals only");
  return detail::make_result(D, v, trace);
}

/// psi of y(P)/(x - x(P)) dx/y from the global symbols s_j = -int_{iota P}^P eta_j: psi = -M^{-1} s.
inline MixedCoordinates psi_antisymmetric(const PrecomputedData& D, const CurvePoint& P0) {
  const int g = D.genus();
  CurvePoint P = prepare_point(D, P0);
  detail::require_unit_y(D.curve, P);
  BasisIntegrals ints = coleman_integrals_on_basis(D, involution(D.curve, P), P);
  std::vector<PadicNumber> minus_s;
  for (int j = 0; j < 2 * g; ++j) {
    std::vector<PadicNumber> e(2 * g, PadicNumber::zero(D.prime(), D.working_precision));
    e[j] = one(D.prime(), D.working_precision);
    minus_s.push_back(combine_integrals(D.eta, ints, e, CoefficientBasis::eta));
  }
  MixedCoordinates out;
  out.psi = detail::solve_vector(D.M, minus_s);
  out.u = mixed_basis_coordinates(D, out.psi);
  return out;
}

/// h_p(P - iota(P), R - S) = int_S^R omega' - sum_{i<g} u_i int_S^R eta_i, with omega' = y(P)/(x - x(P)) dx/y.
/// The integral of omega' runs on tau_P(C); endpoints in discs at infinity are handled there as well.
inline HeightResult height_antisymmetric(const PrecomputedData& D, const CurvePoint& P0, const CurvePoint& R0,
                                         const CurvePoint& S0) {
  const int g = D.genus();
  CurvePoint P = prepare_point(D, P0);
  CurvePoint R = prepare_point(D, R0);
  CurvePoint S = prepare_point(D, S0);
  detail::require_unit_y(D.curve, P);
  detail::require_outside_discs(D.curve, P, R);
  detail::require_outside_discs(D.curve, P, S);
  MixedCoordinates mc = psi_antisymmetric(D, P);
  PadicNumber v = integrate_omega_prime(D, P, S, R);
  std::vector<std::string> trace{"antisymmetric: h(P - iota P, R - S) via the change of variables at P"};
  std::vector<PadicNumber> hol;
  if (classify_point(D.curve, R).is_infinite() || classify_point(D.curve, S).is_infinite()) {
    hol = integrate_holomorphic_via_tau(D, P, S, R);
    trace.push_back("holomorphic integrals transported to the model at P (endpoint in a disc at infinity)");
  } else {
    hol = coleman_integrals_on_basis(D, S, R).values;
  }
  for (int i = 0; i < g; ++i) v -= mc.u[i] * hol[i];
  return detail::make_result(D, v, trace);
}

namespace detail {

inline void check_condition_one(const HyperellipticCurve& c, const CurvePoint& P, const CurvePoint& Q,
                                const CurvePoint& R, const CurvePoint& S) {
  const std::pair<const char*, CurvePoint> left[] = {
      {"P", P}, {"Q", Q}, {"iota(P)", involution(c, P)}, {"iota(Q)", involution(c, Q)}};
  const std::pair<const char*, CurvePoint> right[] = {{"R", R}, {"S", S}};
  for (const auto& [rn, X] : right) {
    for (const auto& [ln, Y] : left) {
      if (same_disc(c, X, Y)) {
        throw DomainError(std::string("Condition 1 violated: ") + rn + " = " + X.truncated(3).to_string() +
                          " lies in the residue disc of " + ln + " = " + Y.truncated(3).to_string() +
                          " for the pair (P - Q, R - S); not supported: inputs satisfying only Condition 1' are out of scope");
      }
    }
  }
}

/// log_p of the value of (x - x(P))/(x - x(Q)) on R - S, where factors for infinite points are omitted.
inline PadicNumber cross_ratio_log(const CurvePoint& P, const CurvePoint& Q, const CurvePoint& R, const CurvePoint& S,
                                   long p, long n) {
  PadicNumber num = one(p, n);
  PadicNumber den = one(p, n);
  auto factor = [&](const CurvePoint& A, const CurvePoint& B, PadicNumber& into) {
    if (A.is_affine() && B.is_affine()) into *= (A.x - B.x);
  };
  factor(R, P, num);
  factor(S, Q, num);
  factor(R, Q, den);
  factor(S, P, den);
  return log_iwasawa(num / den);
}

/// h_p(X - iota X, R - S) for any point X, by the branch matching the kind of X.
inline HeightResult antisymmetric_part(const PrecomputedData& D, const CurvePoint& X, const CurvePoint& R,
                                       const CurvePoint& S, int depth) {
  const HyperellipticCurve& c = D.curve;
  if (X.kind == CurvePoint::Kind::inf_minus) return height_inf_inf(D, R, S);
  if (X.kind == CurvePoint::Kind::inf_plus) {
    HeightResult r = height_inf_inf(D, R, S);
    r.value = -r.value;
    r.trace.push_back("negated for inf+ - inf-");
    return r;
  }
  if (is_exact_weierstrass(X)) {
    return make_result(D, PadicNumber::zero(D.prime(), D.target_precision), {"Weierstrass point: P - iota P = 0"});
  }
  DiscClass d = classify_point(c, X);
  if (d.kind == DiscKind::ordinary_affine && X.y.valuation() == 0) return height_antisymmetric(D, X, R, S);
  if (depth > 0) {
    throw DomainError("not supported: both divisors contain points of non-unit y outside the Weierstrass points");
  }
  // Symmetry: h(X - iota X, R - S) = (h(R - iota R, X - iota X) - h(S - iota S, X - iota X)) / 2.
  CurvePoint iX = involution(c, X);
  HeightResult a = antisymmetric_part(D, R, X, iX, depth + 1);
  HeightResult b = antisymmetric_part(D, S, X, iX, depth + 1);
  std::vector<std::string> trace{"symmetry swap for a point with non-unit y"};
  append(trace, a.trace);
  append(trace, b.trace);
  return make_result(D, half_of(a.value - b.value), trace);
}

}  // namespace detail

/// h_p(P - Q, R - S) for four affine points satisfying Condition 1:
/// (h(P - iota P, R - S) - h(Q - iota Q, R - S) + log_p(cross ratio)) / 2.
inline HeightResult height_affine(const PrecomputedData& D, const CurvePoint& P0, const CurvePoint& Q0,
                                  const CurvePoint& R0, const CurvePoint& S0) {
  CurvePoint P = prepare_point(D, P0), Q = prepare_point(D, Q0), R = prepare_point(D, R0), S = prepare_point(D, S0);
  detail::check_condition_one(D.curve, P, Q, R, S);
  HeightResult a = detail::antisymmetric_part(D, P, R, S, 0);
  HeightResult b = detail::antisymmetric_part(D, Q, R, S, 0);
  PadicNumber lg = detail::cross_ratio_log(P, Q, R, S, D.prime(), D.working_precision);
  std::vector<std::string> trace{"symmetric/antisymmetric decomposition"};
  detail::append(trace, a.trace);
  detail::append(trace, b.trace);
  return detail::make_result(D, detail::half_of(a.value - b.value + lg), trace);
}

/// h_p(inf_sign - Q, R - S) for affine Q, R, S:
/// (log_p((x(S) - x(Q))/(x(R) - x(Q))) + h(inf- - inf+, R - S) - h(Q - iota Q, R - S)) / 2,
/// with the inf+ case reduced through h(inf+ - Q, R - S) = h(inf- - iota Q, iota R - iota S).
inline HeightResult height_one_infinity(const PrecomputedData& D, const CurvePoint& Q0, const CurvePoint& R0,
                                        const CurvePoint& S0, CurvePoint::Kind sign) {
  const HyperellipticCurve& c = D.curve;
  CurvePoint Q = prepare_point(D, Q0), R = prepare_point(D, R0), S = prepare_point(D, S0);
  if (sign == CurvePoint::Kind::inf_plus) {
    HeightResult r = height_one_infinity(D, involution(c, Q), involution(c, R), involution(c, S),
                                         CurvePoint::Kind::inf_minus);
    r.trace.insert(r.trace.begin(), "inf+ reduced to inf- by the hyperelliptic involution");
    return r;
  }
  detail::check_condition_one(c, CurvePoint::infinity_minus(), Q, R, S);
  HeightResult a = height_inf_inf(D, R, S);
  HeightResult b = detail::antisymmetric_part(D, Q, R, S, 0);
  PadicNumber lg = log_iwasawa((S.x - Q.x) / (R.x - Q.x));
  std::vector<std::string> trace{"one point at infinity"};
  detail::append(trace, a.trace);
  detail::append(trace, b.trace);
  return detail::make_result(D, detail::half_of(lg + a.value - b.value), trace);
}

/// h_p(P - Q, R - S) for any four points satisfying Condition 1.
inline HeightResult pair_height(const PrecomputedData& D, const CurvePoint& P0, const CurvePoint& Q0,
                                const CurvePoint& R0, const CurvePoint& S0) {
  CurvePoint P = prepare_point(D, P0), Q = prepare_point(D, Q0), R = prepare_point(D, R0), S = prepare_point(D, S0);
  detail::check_condition_one(D.curve, P, Q, R, S);
  if (P.is_infinite() && Q.is_infinite()) {
    if (P.kind == Q.kind) return detail::make_result(D, PadicNumber::zero(D.prime(), D.target_precision), {"P = Q"});
    return detail::antisymmetric_part(D, P, R, S, 0);
  }
  if (P.is_infinite() && R.is_affine() && S.is_affine()) return height_one_infinity(D, Q, R, S, P.kind);
  if (Q.is_infinite() && R.is_affine() && S.is_affine()) {
    HeightResult r = height_one_infinity(D, P, R, S, Q.kind);
    r.value = -r.value;
    r.trace.insert(r.trace.begin(), "negated: infinite point in the second slot");
    return r;
  }
  HeightResult a = detail::antisymmetric_part(D, P, R, S, 0);
  HeightResult b = detail::antisymmetric_part(D, Q, R, S, 0);
  PadicNumber lg = detail::cross_ratio_log(P, Q, R, S, D.prime(), D.working_precision);
  std::vector<std::string> trace{"symmetric/antisymmetric decomposition"};
  detail::append(trace, a.trace);
  detail::append(trace, b.trace);
  return detail::make_result(D, detail::half_of(a.value - b.value + lg), trace);
}

namespace detail {

inline bool same_point(const CurvePoint& A, const CurvePoint& B) {
  if (A.kind != B.kind) return false;
  if (!A.is_affine()) return true;
  return A.x.equals(B.x) && A.y.equals(B.y);
}

/// Splits a degree-zero divisor into differences of points, pairing positive and negative parts in input order.
inline std::vector<std::pair<CurvePoint, CurvePoint>> greedy_pairs(const Divisor& D) {
  std::vector<CurvePoint> pos, neg;
  long degree = 0;
  for (const auto& [pt, mult] : D) {
    degree += mult;
    for (long i = 0; i < std::abs(mult); ++i) (mult > 0 ? pos : neg).push_back(pt);
  }
  if (degree != 0) throw DomainError("divisor must have degree zero");
  std::vector<std::pair<CurvePoint, CurvePoint>> out;
  for (std::size_t i = 0; i < pos.size(); ++i) out.emplace_back(pos[i], neg[i]);
  return out;
}

}  // namespace detail

/// Local height pairing of two degree-zero divisors by bi-additivity.
inline HeightResult height_pairing(const PrecomputedData& D, const Divisor& D1, const Divisor& D2) {
  for (const auto& [a, ma] : D1) {
    for (const auto& [b, mb] : D2) {
      if (ma != 0 && mb != 0 && detail::same_point(a, b)) throw DomainError("divisors must have disjoint support");
    }
  }
  auto left = detail::greedy_pairs(D1);
  auto right = detail::greedy_pairs(D2);
  PadicNumber total = PadicNumber::zero(D.prime(), D.target_precision);
  std::vector<std::string> trace;
  for (const auto& [P, Q] : left) {
    for (const auto& [R, S] : right) {
      HeightResult h = pair_height(D, P, Q, R, S);
      total += h.value;
      detail::append(trace, h.trace);
    }
  }
  if (trace.empty()) trace.push_back("zero divisor");
  return detail::make_result(D, total, trace);
}

/// Cross-check of height_antisymmetric: h_p(inf- - inf+, tau(R) - tau(S)) computed on tau_P(C) from scratch,
/// which agrees when both sides use unit root complements.
inline HeightResult height_antisymmetric_by_reduction(const PrecomputedData& D, const CurvePoint& P0,
                                                      const CurvePoint& R0, const CurvePoint& S0) {
  if (D.w_mode != WMode::unit_root) throw DomainError("full reduction check needs the unit root complement");
  CurvePoint P = prepare_point(D, P0);
  detail::require_unit_y(D.curve, P);
  ModelMap m = tau_map(D.curve, P);
  PrecomputedData D2 = precompute(m.target, D.target_precision, WMode::unit_root);
  if (D2.working_precision > D.working_precision) {
    if (!P.exact_x) throw PrecisionError("base point known to too few digits for the reduced model", D2.working_precision);
    m = refine_map(m, D2.working_precision);
  }
  CurvePoint R = map_point(m, prepare_point(D, R0));
  CurvePoint S = map_point(m, prepare_point(D, S0));
  HeightResult r = height_inf_inf(D2, R, S);
  r.trace.insert(r.trace.begin(), "full reduction to the model at P");
  return r;
}

}  // namespace padic_heights
