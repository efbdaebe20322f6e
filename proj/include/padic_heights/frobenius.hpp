#pragma once

#include <vector>

#include "curve.hpp"
#include "matrix.hpp"

namespace padic_heights {

/// Primitive h = sum_j P_j(x) * y^(1 - 2j) of an exact form, with P_0 of any degree.
struct FrobeniusPrimitive {
  std::vector<PadicPolynomial> by_level;

  PadicNumber eval(const PadicNumber& x, const PadicNumber& y) const {
    if (by_level.empty()) return PadicNumber::zero(x.prime(), x.precision());
    PadicNumber yinv2 = (y * y).inverse();
    PadicNumber acc = poly_eval(by_level.back(), x);
    for (std::size_t j = by_level.size() - 1; j-- > 0;) acc = acc * yinv2 + poly_eval(by_level[j], x);
    return acc * y;
  }
};

/// Frobenius on the odd part of Monsky-Washnitzer cohomology.
/// Column j of phi holds the coordinates of phi^*(omega_j) in the basis omega_0..omega_2g,
/// and phi^*(omega_j) = d h[j] + sum_i phi(i, j) omega_i.
struct MWFrobeniusData {
  HyperellipticCurve curve;
  long precision = 0;
  PadicMatrix phi;
  std::vector<FrobeniusPrimitive> h;
};

namespace detail {

struct ScaleTooSmall {};

using ZPoly = std::vector<mpz_class>;

/// Integer arithmetic on values scaled by p^scale, reduced modulo p^modexp.
class ScaledRing {
 public:
  ScaledRing(long p, long scale, long modexp) : p_(p), scale_(scale), mod_(prime_power(p, modexp)) {}

  const mpz_class& modulus() const { return mod_; }
  long prime() const { return p_; }
  long scale() const { return scale_; }

  void reduce(mpz_class& a) const { reduce_mod(a, mod_); }

  mpz_class inverse_unit(const mpz_class& u) const {
    mpz_class r;
    if (mpz_invert(r.get_mpz_t(), u.get_mpz_t(), mod_.get_mpz_t()) == 0) throw DomainError("not a unit");
    return r;
  }

  /// Exact division of the scaled value a by the integer d.
  mpz_class divide(const mpz_class& a, long d) const {
    mpz_class num = a;
    reduce(num);
    if (num == 0) return 0;
    long v = 0;
    long u = d;
    while (u % p_ == 0) {
      u /= p_;
      ++v;
    }
    if (v > 0) {
      const mpz_class& pv = prime_power(p_, v);
      if (!mpz_divisible_p(num.get_mpz_t(), pv.get_mpz_t())) throw ScaleTooSmall{};
      mpz_divexact(num.get_mpz_t(), num.get_mpz_t(), pv.get_mpz_t());
    }
    num *= inverse_unit(mpz_class(u));
    reduce(num);
    return num;
  }

 private:
  long p_;
  long scale_;
  mpz_class mod_;
};

inline ZPoly zmul(const ZPoly& a, const ZPoly& b, const mpz_class& mod) {
  if (a.empty() || b.empty()) return {};
  ZPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  for (auto& c : r) reduce_mod(c, mod);
  return r;
}

/// Divides a by the monic polynomial f: returns the quotient and leaves the remainder in a.
inline ZPoly zdivmod_monic(ZPoly& a, const ZPoly& f, const mpz_class& mod) {
  const std::size_t d = f.size() - 1;
  if (a.size() <= d) return {};
  ZPoly q(a.size() - d, 0);
  for (std::size_t top = a.size() - 1; top >= d; --top) {
    mpz_class c = a[top];
    reduce_mod(c, mod);
    q[top - d] = c;
    if (c != 0) {
      for (std::size_t l = 0; l < d; ++l) a[top - d + l] -= c * f[l];
    }
    if (top == d) break;
  }
  a.resize(d);
  for (auto& c : a) reduce_mod(c, mod);
  return q;
}

/// Polynomials alpha_l, beta_l with x^l = alpha_l f + beta_l f' for l < deg f.
inline void split_basis(const ZPoly& f, const mpz_class& mod, long p, long modexp, std::vector<ZPoly>& alpha,
                        std::vector<ZPoly>& beta) {
  const std::size_t d = f.size() - 1;
  ZPoly df;
  for (std::size_t i = 1; i <= d; ++i) {
    mpz_class c = f[i] * static_cast<unsigned long>(i);
    reduce_mod(c, mod);
    df.push_back(c);
  }
  // Solve a f + b f' = 1 with deg a <= d - 2 and deg b <= d - 1.
  const std::size_t unknowns = 2 * d - 1;
  PadicMatrix A(p, unknowns, unknowns, modexp);
  PadicMatrix rhs(p, unknowns, 1, modexp);
  for (std::size_t k = 0; k + 1 < d; ++k) {
    for (std::size_t i = 0; i <= d; ++i) A(k + i, k) = PadicNumber::from_integer(p, f[i], modexp);
  }
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t i = 0; i < d; ++i) A(k + i, d - 1 + k) = PadicNumber::from_integer(p, df[i], modexp);
  }
  rhs(0, 0) = PadicNumber::from_long(p, 1, modexp);
  PadicMatrix sol = solve_linear(A, rhs);
  ZPoly b;
  for (std::size_t k = 0; k < d; ++k) b.push_back(sol(d - 1 + k, 0).truncated(modexp).lift());
  alpha.clear();
  beta.clear();
  for (std::size_t l = 0; l < d; ++l) {
    ZPoly xl(l + 1, 0);
    xl[l] = 1;
    ZPoly bl = zmul(xl, b, mod);
    zdivmod_monic(bl, f, mod);
    ZPoly rest = xl;
    rest.resize(std::max(rest.size(), d + bl.size()), 0);
    ZPoly prod = zmul(bl, df, mod);
    for (std::size_t i = 0; i < prod.size(); ++i) rest[i] -= prod[i];
    for (auto& c : rest) reduce_mod(c, mod);
    ZPoly al = zdivmod_monic(rest, f, mod);
    alpha.push_back(al);
    beta.push_back(bl);
  }
}

/// (-1/2 choose k) = (-1)^k binom(2k, k) / 4^k modulo the modulus.
inline std::vector<mpz_class> half_binomials(long count, const mpz_class& mod) {
  std::vector<mpz_class> out;
  mpz_class inv4;
  mpz_class four = 4;
  mpz_invert(inv4.get_mpz_t(), four.get_mpz_t(), mod.get_mpz_t());
  mpz_class inv4k = 1;
  for (long k = 0; k < count; ++k) {
    mpz_class c;
    mpz_bin_uiui(c.get_mpz_t(), static_cast<unsigned long>(2 * k), static_cast<unsigned long>(k));
    c *= inv4k;
    if (k % 2 == 1) c = -c;
    reduce_mod(c, mod);
    out.push_back(c);
    inv4k = inv4k * inv4 % mod;
  }
  return out;
}

struct KedlayaPlan {
  long terms;
  long loss;
  long scale;
  long modexp;
};

inline KedlayaPlan plan_kedlaya(long p, int g, long n, long extra_scale) {
  KedlayaPlan plan{};
  long lx = floor_log(p, p * g + g + 1);
  long terms = n + 2;
  for (int iter = 0; iter < 64; ++iter) {
    long jmax = (p - 1) / 2 + p * (terms - 1);
    long loss = floor_log(p, 2 * jmax + 1) + lx + 1;
    long want = n + loss;
    if (want <= terms) {
      plan.terms = terms;
      plan.loss = loss;
      break;
    }
    terms = want;
  }
  plan.scale = plan.loss + 3 + extra_scale;
  plan.modexp = n + plan.scale + plan.loss + 2;
  return plan;
}

inline MWFrobeniusData kedlaya_run(const HyperellipticCurve& c, long n, const KedlayaPlan& plan) {
  const long p = c.prime();
  const int g = c.genus();
  const std::size_t d = static_cast<std::size_t>(2 * g + 2);
  const long modexp = plan.modexp;
  ScaledRing ring(p, plan.scale, modexp);
  const mpz_class& mod = ring.modulus();
  const mpz_class& scale_factor = prime_power(p, plan.scale);

  ZPoly f;
  for (const auto& coef : c.f()) {
    if (coef.precision() < n) throw PrecisionError("curve coefficients are known to fewer digits than requested", n);
    f.push_back(coef.truncated(modexp).is_zero() ? mpz_class(0) : coef.lift());
  }
  f[d] = 1;

  std::vector<ZPoly> alpha, beta;
  split_basis(f, mod, p, modexp, alpha, beta);

  // E = f(x^p) - f(x)^p.
  ZPoly fxp((d * p) + 1, 0);
  for (std::size_t i = 0; i <= d; ++i) fxp[i * p] = f[i];
  ZPoly fpow{1};
  for (long k = 0; k < p; ++k) fpow = zmul(fpow, f, mod);
  ZPoly E(fxp.size(), 0);
  for (std::size_t i = 0; i < E.size(); ++i) {
    E[i] = fxp[i] - fpow[i];
    reduce_mod(E[i], mod);
  }

  const long terms = plan.terms;
  std::vector<ZPoly> epow{ZPoly{1}};
  for (long k = 1; k < terms; ++k) epow.push_back(zmul(epow.back(), E, mod));
  std::vector<mpz_class> binom = half_binomials(terms, mod);

  ZPoly df;
  for (std::size_t i = 1; i <= d; ++i) df.push_back(f[i] * static_cast<unsigned long>(i));
  mpz_class half;
  {
    mpz_class two = 2;
    mpz_invert(half.get_mpz_t(), two.get_mpz_t(), mod.get_mpz_t());
  }

  const long jmax = (p - 1) / 2 + p * (terms - 1);
  MWFrobeniusData out;
  out.curve = c;
  out.precision = n;
  out.phi = PadicMatrix(p, 2 * g + 1, 2 * g + 1, n);

  const long real_prec = modexp - plan.scale;
  auto to_padic = [&](const mpz_class& v) {
    return PadicNumber::from_parts(p, -plan.scale, v, real_prec).truncated(n);
  };

  for (int i = 0; i <= 2 * g; ++i) {
    const std::size_t shift = static_cast<std::size_t>(p * (i + 1) - 1);
    std::vector<ZPoly> hlevels(static_cast<std::size_t>(jmax) + 1);
    ZPoly cur;
    for (long j = jmax; j >= 1; --j) {
      if ((j - (p - 1) / 2) % p == 0) {
        long k = (j - (p - 1) / 2) / p;
        mpz_class coef = binom[k] * p * scale_factor;
        reduce_mod(coef, mod);
        const ZPoly& ek = epow[k];
        if (cur.size() < shift + ek.size()) cur.resize(shift + ek.size(), 0);
        for (std::size_t l = 0; l < ek.size(); ++l) {
          if (ek[l] != 0) cur[shift + l] += coef * ek[l];
        }
      }
      ZPoly next = zdivmod_monic(cur, f, mod);
      if (cur.size() < d) cur.resize(d, 0);
      // Remainder R = sum r_l x^l = alpha f + beta f'.
      ZPoly al(d, 0), be(d, 0);
      for (std::size_t l = 0; l < d; ++l) {
        mpz_class r = cur[l];
        reduce_mod(r, mod);
        if (r == 0) continue;
        for (std::size_t t = 0; t < alpha[l].size(); ++t) al[t] += r * alpha[l][t];
        for (std::size_t t = 0; t < beta[l].size(); ++t) be[t] += r * beta[l][t];
      }
      for (auto& v : be) reduce_mod(v, mod);
      // beta f' y^(-2j-1) dx = (2/(1-2j)) d(beta y^(1-2j)) + (2/(2j-1)) beta' y^(1-2j) dx.
      ZPoly hj(d, 0);
      for (std::size_t t = 0; t < d; ++t) {
        if (be[t] != 0) hj[t] = ring.divide(-2 * be[t], 2 * j - 1);
      }
      hlevels[static_cast<std::size_t>(j)] = std::move(hj);
      if (next.size() < d) next.resize(d, 0);
      for (std::size_t t = 0; t < d; ++t) next[t] += al[t];
      for (std::size_t t = 1; t < d; ++t) {
        if (be[t] != 0) next[t - 1] += ring.divide(2 * be[t] * static_cast<unsigned long>(t), 2 * j - 1);
      }
      for (auto& v : next) reduce_mod(v, mod);
      cur = std::move(next);
    }
    // Level 0: reduce x^k dx / y for k >= 2g+1 using d(x^m y) = (m x^(m-1) f + x^m f'/2) dx / y.
    ZPoly h0;
    for (auto& v : cur) reduce_mod(v, mod);
    while (cur.size() > static_cast<std::size_t>(2 * g + 1)) {
      const std::size_t k = cur.size() - 1;
      mpz_class top = cur[k];
      reduce_mod(top, mod);
      cur.pop_back();
      if (top == 0) continue;
      const std::size_t m = k - (2 * g + 1);
      mpz_class q = ring.divide(top, static_cast<long>(k) - g);
      if (h0.size() < m + 1) h0.resize(m + 1, 0);
      h0[m] += q;
      // Subtract q * (m x^(m-1) f + x^m f'/2) without its leading term.
      for (std::size_t l = 0; l <= d; ++l) {
        if (m >= 1 && l + m - 1 < k) cur[l + m - 1] -= q * f[l] * static_cast<unsigned long>(m);
      }
      for (std::size_t l = 0; l < d; ++l) {
        if (l + m < k) {
          mpz_class t = q * df[l];
          t *= half;
          cur[l + m] -= t;
        }
      }
      for (std::size_t l = (m >= 1 ? m - 1 : 0); l < k; ++l) reduce_mod(cur[l], mod);
    }
    cur.resize(static_cast<std::size_t>(2 * g + 1), 0);
    for (int r = 0; r <= 2 * g; ++r) out.phi(r, i) = to_padic(cur[r]);
    FrobeniusPrimitive prim;
    prim.by_level.resize(hlevels.size());
    for (auto& v : h0) reduce_mod(v, mod);
    for (const auto& v : h0) prim.by_level[0].push_back(to_padic(v));
    if (prim.by_level[0].empty()) prim.by_level[0].push_back(PadicNumber::zero(p, n));
    for (std::size_t j = 1; j < hlevels.size(); ++j) {
      for (const auto& v : hlevels[j]) prim.by_level[j].push_back(to_padic(v));
      if (prim.by_level[j].empty()) prim.by_level[j].push_back(PadicNumber::zero(p, n));
    }
    out.h.push_back(std::move(prim));
  }
  return out;
}

}  // namespace detail

/// Frobenius matrix and primitives of the odd cohomology of a normal-form curve, to n digits.
inline MWFrobeniusData frobenius_structure(const HyperellipticCurve& c, long n) {
  if (!c.is_normal()) throw DomainError("frobenius_structure needs a monic even-degree model");
  for (long extra = 0; extra <= 32; extra += 4) {
    detail::KedlayaPlan plan = detail::plan_kedlaya(c.prime(), c.genus(), n, extra);
    try {
      return detail::kedlaya_run(c, n, plan);
    } catch (const detail::ScaleTooSmall&) {
      continue;
    }
  }
  throw PrecisionError("raise series order: reduction denominators exceeded the scaling bound", n);
}

}  // namespace padic_heights
