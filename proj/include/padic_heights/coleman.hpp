#pragma once

#include <memory>
#include <string>
#include <vector>

#include "cohomology.hpp"

namespace padic_heights {

/// Integrals of omega_0..omega_2g (or a prefix of them) from `from` to `to`.
struct BasisIntegrals {
  CurvePoint from;
  CurvePoint to;
  std::vector<PadicNumber> values;

  long precision() const {
    long m = 1L << 40;
    for (const auto& v : values) m = std::min(m, v.precision());
    return m;
  }

  BasisIntegrals reversed() const {
    BasisIntegrals r{to, from, {}};
    for (const auto& v : values) r.values.push_back(-v);
    return r;
  }
};

namespace detail {

/// Centre of the expansion used for tiny integrals in the disc of P.
inline CurvePoint disc_centre(const HyperellipticCurve& c, const CurvePoint& P) {
  DiscClass d = classify_point(c, P);
  switch (d.kind) {
    case DiscKind::weierstrass:
      return weierstrass_point(c, P);
    case DiscKind::infinite_plus:
      return CurvePoint::infinity_plus();
    case DiscKind::infinite_minus:
      return CurvePoint::infinity_minus();
    default:
      return P;
  }
}

/// Value of the uniformizer of the expansion at `centre` on the point Q of the same disc.
inline PadicNumber local_parameter(const HyperellipticCurve& c, const CurvePoint& centre, const CurvePoint& Q) {
  const long p = c.prime();
  DiscClass d = classify_point(c, centre);
  if (d.is_infinite()) {
    if (Q.is_infinite()) return PadicNumber::zero(p, c.precision());
    return Q.x.inverse();
  }
  if (d.kind == DiscKind::weierstrass) return Q.y;
  return Q.x - centre.x;
}

/// Digits certified when a series with integral coefficients, truncated at t^order, is evaluated at t.
inline long truncation_bound(long p, long order, const PadicNumber& t) {
  if (t.is_zero()) return 1L << 40;
  if (t.valuation() < 1) throw DomainError("endpoint outside the disc of convergence");
  return order * t.valuation() - floor_log(p, std::max(1L, order));
}

inline PadicNumber integrate_series(const PadicSeries& form, const PadicNumber& t_from, const PadicNumber& t_to) {
  const long p = form.prime();
  PadicSeries F = form.antiderivative();
  long cap = std::min(truncation_bound(p, F.order(), t_from), truncation_bound(p, F.order(), t_to));
  PadicNumber a = t_from.is_zero() ? PadicNumber::zero(p, 1L << 40) : F.evaluate(t_from);
  PadicNumber b = t_to.is_zero() ? PadicNumber::zero(p, 1L << 40) : F.evaluate(t_to);
  return (b - a).truncated(cap);
}

inline void require_no_pole_at_start(const PadicSeries& s, const CurvePoint& centre) {
  for (long e = s.lowest(); e < 0 && e < s.order(); ++e) {
    if (!s.coeff(e).is_zero()) {
      throw DomainError("differential has a pole in the disc at " + centre.to_string());
    }
  }
}

inline void require_pole_outside_disc(const HyperellipticCurve& c, const OddDifferential& w, const CurvePoint& P) {
  if (!w.pole) return;
  DiscClass d = classify_point(c, P);
  if (d.is_infinite()) return;
  if (!w.pole->is_zero() && w.pole->valuation() < 0) return;
  if (fp::mod(w.pole->residue() - d.x_bar, c.prime()) == 0) {
    throw DomainError("differential has a pole in the disc of " + P.to_string());
  }
}

/// Expansions of omega_0..omega_{count-1} at the centre, sharing one local expansion.
inline std::vector<PadicSeries> basis_form_series(const HyperellipticCurve& c, const CurvePoint& centre, long k,
                                                  int count) {
  PadicSeries w0 = expand_odd_differential(c, OddDifferential::basis(c.prime(), 0, c.precision()), centre, k);
  auto [x, y] = local_expansion(c, centre, k);
  std::vector<PadicSeries> out{w0};
  for (int i = 1; i < count; ++i) out.push_back(out.back() * x);
  return out;
}

}  // namespace detail

/// Tiny integral of an odd differential between two points of one residue disc.
inline PadicNumber tiny_integral(const HyperellipticCurve& c, const OddDifferential& w, const CurvePoint& P,
                                 const CurvePoint& Q, long k) {
  if (!same_disc(c, P, Q)) throw DomainError("tiny integral needs endpoints in one residue disc");
  detail::require_pole_outside_disc(c, w, P);
  CurvePoint centre = detail::disc_centre(c, P);
  PadicSeries s = expand_odd_differential(c, w, centre, k);
  if (classify_point(c, centre).is_infinite()) detail::require_no_pole_at_start(s, centre);
  return detail::integrate_series(s, detail::local_parameter(c, centre, P), detail::local_parameter(c, centre, Q));
}

/// Tiny integrals of omega_0..omega_{count-1}; count defaults to the whole basis.
inline BasisIntegrals tiny_integrals_on_basis(const HyperellipticCurve& c, const CurvePoint& P, const CurvePoint& Q,
                                              long k, int count = -1) {
  if (!same_disc(c, P, Q)) throw DomainError("tiny integral needs endpoints in one residue disc");
  if (count < 0) count = 2 * c.genus() + 1;
  CurvePoint centre = detail::disc_centre(c, P);
  const bool infinite = classify_point(c, centre).is_infinite();
  PadicNumber tP = detail::local_parameter(c, centre, P);
  PadicNumber tQ = detail::local_parameter(c, centre, Q);
  BasisIntegrals out{P, Q, {}};
  std::vector<PadicSeries> forms = detail::basis_form_series(c, centre, k, count);
  for (const auto& s : forms) {
    if (infinite) detail::require_no_pole_at_start(s, centre);
    out.values.push_back(detail::integrate_series(s, tP, tQ));
  }
  return out;
}

namespace detail {

/// Integrals between two Frobenius-fixed points of ordinary discs from the equivariance system
/// (I - Phi^T) v = h(R) - h(S).
inline std::vector<PadicNumber> frobenius_system(const MWFrobeniusData& F, const CurvePoint& S, const CurvePoint& R) {
  const long p = F.curve.prime();
  const std::size_t n = F.phi.rows();
  PadicMatrix A = PadicMatrix::identity(p, n, F.phi.min_precision() + 1) - F.phi.transpose();
  PadicMatrix rhs(p, n, 1, F.precision);
  for (std::size_t i = 0; i < n; ++i) rhs(i, 0) = F.h[i].eval(R.x, R.y) - F.h[i].eval(S.x, S.y);
  PadicMatrix v = solve_linear(A, rhs);
  return v.column_vector(0);
}

inline bool is_weierstrass_disc(const HyperellipticCurve& c, const CurvePoint& P) {
  return classify_point(c, P).kind == DiscKind::weierstrass;
}

inline std::vector<PadicNumber> add(std::vector<PadicNumber> a, const std::vector<PadicNumber>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

inline std::vector<PadicNumber> scaled(std::vector<PadicNumber> a, const PadicNumber& s) {
  for (auto& x : a) x = s * x;
  return a;
}

}  // namespace detail

/// Coleman integrals of omega_0..omega_2g from S to R using the Frobenius structure of the curve.
/// Endpoints in Weierstrass discs are routed through the Weierstrass point of the disc.
inline BasisIntegrals coleman_integrals_on_basis(const MWFrobeniusData& F, const CurvePoint& S, const CurvePoint& R,
                                                 long k) {
  const HyperellipticCurve& c = F.curve;
  const long p = c.prime();
  const int g = c.genus();
  if (classify_point(c, S).is_infinite() || classify_point(c, R).is_infinite()) {
    if (same_disc(c, S, R)) return tiny_integrals_on_basis(c, S, R, k);
    throw DomainError("Condition 1 required: endpoint in a disc at infinity");
  }
  if (same_disc(c, S, R)) return tiny_integrals_on_basis(c, S, R, k);
  const bool weier_s = detail::is_weierstrass_disc(c, S);
  const bool weier_r = detail::is_weierstrass_disc(c, R);
  CurvePoint As = weier_s ? weierstrass_point(c, S) : teichmuller_point(c, S);
  CurvePoint Ar = weier_r ? weierstrass_point(c, R) : teichmuller_point(c, R);
  std::vector<PadicNumber> mid;
  const long n = F.precision;
  PadicNumber half = one(p, n) / PadicNumber::from_long(p, 2, n);
  if (!weier_s && !weier_r) {
    mid = detail::frobenius_system(F, As, Ar);
  } else if (!weier_s) {
    mid = detail::scaled(detail::frobenius_system(F, As, involution(c, As)), half);
  } else if (!weier_r) {
    mid = detail::scaled(detail::frobenius_system(F, Ar, involution(c, Ar)), -half);
  } else {
    mid.assign(2 * g + 1, PadicNumber::zero(p, n));
  }
  BasisIntegrals out{S, R, mid};
  out.values = detail::add(out.values, tiny_integrals_on_basis(c, S, As, k).values);
  out.values = detail::add(out.values, tiny_integrals_on_basis(c, Ar, R, k).values);
  return out;
}

inline BasisIntegrals coleman_integrals_on_basis(const PrecomputedData& D, const CurvePoint& S, const CurvePoint& R) {
  return coleman_integrals_on_basis(D.frobenius, S, R, D.series_order);
}

enum class CoefficientBasis { omega, eta };

/// Linear combination of basis integrals; eta_j with j >= g is expanded as omega_{j+1} - c_{j+1} omega_g.
inline PadicNumber combine_integrals(const EtaBasis& eta, const BasisIntegrals& ints,
                                     const std::vector<PadicNumber>& coeffs, CoefficientBasis basis) {
  const long p = eta.c[0].prime();
  PadicNumber acc = PadicNumber::zero(p, 1L << 40);
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    if (basis == CoefficientBasis::omega) {
      acc += coeffs[j] * ints.values.at(j);
    } else {
      std::vector<PadicNumber> w = eta.omega_coordinates(j);
      PadicNumber term = ints.values.at(eta.omega_index(j));
      if (eta.omega_index(j) > static_cast<std::size_t>(eta.genus)) term += w[eta.genus] * ints.values.at(eta.genus);
      acc += coeffs[j] * term;
    }
  }
  return acc;
}

inline PadicNumber integrate_combination(const PrecomputedData& D, const CurvePoint& S, const CurvePoint& R,
                                         const std::vector<PadicNumber>& coeffs, CoefficientBasis basis) {
  return combine_integrals(D.eta, coleman_integrals_on_basis(D, S, R), coeffs, basis);
}

namespace detail {

inline void require_unit_y(const HyperellipticCurve& c, const CurvePoint& P) {
  if (!P.is_affine() || classify_point(c, P).kind != DiscKind::ordinary_affine || P.y.valuation() != 0) {
    throw DomainError("the antisymmetric form needs an affine point with p not dividing y(P)");
  }
}

inline void require_outside_discs(const HyperellipticCurve& c, const CurvePoint& P, const CurvePoint& X) {
  if (same_disc(c, P, X) || same_disc(c, involution(c, P), X)) {
    throw DomainError("Condition 1 violated: " + X.to_string() + " shares a residue disc with " + P.to_string() +
                      " or its conjugate");
  }
}

inline std::string point_key(const CurvePoint& P) {
  return P.x.to_string() + "|" + P.y.to_string();
}

}  // namespace detail

/// The model C' = tau_P(C) together with its Frobenius structure, shared through the per-point cache.
struct AuxiliaryModel {
  ModelMap map;
  std::shared_ptr<const MWFrobeniusData> frobenius;
};

inline AuxiliaryModel auxiliary_model(const PrecomputedData& D, const CurvePoint& P) {
  detail::require_unit_y(D.curve, P);
  AuxiliaryModel aux;
  aux.map = tau_map(D.curve, P);
  long n = D.working_precision;
  if (!aux.map.target.has_exact_coefficients()) n = std::min(n, aux.map.target.precision());
  const std::string key = detail::point_key(P) + "@" + std::to_string(n);
  const HyperellipticCurve target = aux.map.target.at_precision(n);
  aux.frobenius = D.aux_cache->get_or_build(key, [&] { return frobenius_structure(target, n); });
  return aux;
}

/// Integral from S to R of y(P)/(x - x(P)) dx/y, computed as the integral of x'^g dx'/y' on tau_P(C).
inline PadicNumber integrate_omega_prime(const PrecomputedData& D, const CurvePoint& P, const CurvePoint& S,
                                         const CurvePoint& R) {
  detail::require_unit_y(D.curve, P);
  detail::require_outside_discs(D.curve, P, S);
  detail::require_outside_discs(D.curve, P, R);
  AuxiliaryModel aux = auxiliary_model(D, P);
  CurvePoint S1 = map_point(aux.map, S);
  CurvePoint R1 = map_point(aux.map, R);
  BasisIntegrals ints = coleman_integrals_on_basis(*aux.frobenius, S1, R1, D.series_order);
  return ints.values[D.genus()];
}

/// Integrals of the holomorphic omega_0..omega_{g-1} from S to R, transported to tau_P(C), where
/// omega_i = (1/b) sum_k binom(i, k) a^(i-k) omega'_{g-1-k} with (a, b) = P.
/// Endpoints may lie in the discs at infinity of C.
inline std::vector<PadicNumber> integrate_holomorphic_via_tau(const PrecomputedData& D, const CurvePoint& P,
                                                              const CurvePoint& S, const CurvePoint& R) {
  detail::require_unit_y(D.curve, P);
  detail::require_outside_discs(D.curve, P, S);
  detail::require_outside_discs(D.curve, P, R);
  const int g = D.genus();
  const long p = D.prime();
  AuxiliaryModel aux = auxiliary_model(D, P);
  CurvePoint S1 = map_point(aux.map, S);
  CurvePoint R1 = map_point(aux.map, R);
  BasisIntegrals ints = coleman_integrals_on_basis(*aux.frobenius, S1, R1, D.series_order);
  std::vector<PadicNumber> out;
  PadicNumber binv = P.y.inverse();
  for (int i = 0; i < g; ++i) {
    PadicNumber acc = PadicNumber::zero(p, 1L << 40);
    mpz_class binom;
    for (int k = 0; k <= i; ++k) {
      mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(i), static_cast<unsigned long>(k));
      PadicNumber coef = PadicNumber::from_integer(p, binom, P.x.precision() + 1) * P.x.pow(i - k);
      acc += coef * ints.values[g - 1 - k];
    }
    out.push_back(binv * acc);
  }
  return out;
}

}  // namespace padic_heights
