#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <deque>
#include <string>
#include <unordered_map>
#include <vector>

#include "errors.hpp"

namespace padic_heights {

/// Returns p^e, memoized per thread.
inline const mpz_class& prime_power(long p, long e) {
  if (e < 0) throw std::invalid_argument("negative exponent in prime_power");
  thread_local std::unordered_map<long, std::deque<mpz_class>> cache;
  auto& powers = cache[p];
  if (powers.empty()) powers.emplace_back(1);
  while (static_cast<long>(powers.size()) <= e) powers.emplace_back(powers.back() * p);
  return powers[e];
}

/// Reduces r into [0, m).
inline void reduce_mod(mpz_class& r, const mpz_class& m) {
  mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t());
}

/// Number of times p divides the nonzero integer n.
inline long valuation_of(const mpz_class& n, long p) {
  if (n == 0) throw std::invalid_argument("valuation of zero integer");
  mpz_class q = n;
  long v = 0;
  while (mpz_divisible_ui_p(q.get_mpz_t(), static_cast<unsigned long>(p))) {
    mpz_divexact_ui(q.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(p));
    ++v;
  }
  return v;
}

/// floor(log_p(n)) for n >= 1.
inline long floor_log(long p, long n) {
  long k = 0;
  long q = n;
  while (q >= p) {
    q /= p;
    ++k;
  }
  return k;
}

/// An element of Q_p known modulo p^N (absolute precision N).
///
/// A nonzero value is stored as p^v * u with 0 < u < p^(N - v) and p not dividing u.
/// Zero is stored as O(p^N) with valuation equal to N.
class PadicNumber {
 public:
  PadicNumber() = default;

  static PadicNumber zero(long p, long prec) {
    PadicNumber z;
    z.p_ = p;
    z.val_ = prec;
    z.prec_ = prec;
    return z;
  }

  /// The value p^v * r known modulo p^prec.
  static PadicNumber from_parts(long p, long v, mpz_class r, long prec) {
    if (v >= prec) return zero(p, prec);
    reduce_mod(r, prime_power(p, prec - v));
    if (r == 0) return zero(p, prec);
    mpz_class pp(p);
    long k = static_cast<long>(mpz_remove(r.get_mpz_t(), r.get_mpz_t(), pp.get_mpz_t()));
    PadicNumber x;
    x.p_ = p;
    x.val_ = v + k;
    x.prec_ = prec;
    x.unit_ = std::move(r);
    if (x.val_ >= prec) return zero(p, prec);
    return x;
  }

  static PadicNumber from_integer(long p, const mpz_class& n, long prec) {
    return from_parts(p, 0, n, prec);
  }

  static PadicNumber from_long(long p, long n, long prec) { return from_parts(p, 0, mpz_class(n), prec); }

  static PadicNumber from_rational(long p, const mpq_class& q, long prec) {
    if (q == 0) return zero(p, prec);
    mpz_class num = q.get_num();
    mpz_class den = q.get_den();
    mpz_class pp(p);
    long vd = static_cast<long>(mpz_remove(den.get_mpz_t(), den.get_mpz_t(), pp.get_mpz_t()));
    long width = prec + vd;
    if (width <= 0) return zero(p, prec);
    const mpz_class& mod = prime_power(p, width);
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t());
    return from_parts(p, -vd, num * inv, prec);
  }

  long prime() const { return p_; }
  long valuation() const { return val_; }
  long precision() const { return prec_; }
  long relative_precision() const { return prec_ - val_; }
  bool is_zero() const { return unit_ == 0; }
  const mpz_class& unit() const { return unit_; }

  /// Integer representative in [0, p^N); requires a nonnegative valuation.
  mpz_class lift() const {
    if (is_zero()) return 0;
    if (val_ < 0) throw DomainError("lift of a non-integral p-adic number");
    return unit_ * prime_power(p_, val_);
  }

  /// Rational representative p^v * u.
  mpq_class rational_lift() const {
    if (is_zero()) return 0;
    if (val_ >= 0) return mpq_class(lift());
    mpq_class q(unit_, prime_power(p_, -val_));
    q.canonicalize();
    return q;
  }

  /// Residue mod p of an integral element.
  long residue() const {
    if (val_ < 0) throw DomainError("residue of a non-integral p-adic number");
    if (val_ > 0 || is_zero()) return 0;
    return static_cast<long>(mpz_fdiv_ui(unit_.get_mpz_t(), static_cast<unsigned long>(p_)));
  }

  /// Base-p digits of the unit part, least significant first.
  std::vector<long> digits() const {
    std::vector<long> out;
    if (is_zero()) return out;
    mpz_class q = unit_;
    for (long i = 0; i < prec_ - val_; ++i) {
      out.push_back(static_cast<long>(mpz_fdiv_q_ui(q.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(p_))));
    }
    while (!out.empty() && out.back() == 0) out.pop_back();
    return out;
  }

  /// The unit part p^(-v) x, with precision N - v.
  PadicNumber unit_part() const {
    if (is_zero()) throw DomainError("unit part of zero");
    PadicNumber u = *this;
    u.prec_ = prec_ - val_;
    u.val_ = 0;
    return u;
  }

  /// Lowers the precision to min(N, n).
  PadicNumber truncated(long n) const {
    if (n >= prec_) return *this;
    return from_parts(p_, val_, unit_, n);
  }

  /// Treats the stored representative as exact and raises the precision to max(N, n).
  PadicNumber padded(long n) const {
    if (n <= prec_) return *this;
    if (is_zero()) return zero(p_, n);
    PadicNumber x = *this;
    x.prec_ = n;
    return x;
  }

  PadicNumber operator-() const {
    if (is_zero()) return *this;
    PadicNumber x = *this;
    x.unit_ = prime_power(p_, prec_ - val_) - unit_;
    return x;
  }

  friend PadicNumber operator+(const PadicNumber& a, const PadicNumber& b) {
    check_same_prime(a, b);
    long n = std::min(a.prec_, b.prec_);
    if (a.is_zero()) return b.truncated(n);
    if (b.is_zero()) return a.truncated(n);
    long v = std::min(a.val_, b.val_);
    if (v >= n) return zero(a.p_, n);
    mpz_class r;
    if (a.val_ == b.val_) {
      r = a.unit_ + b.unit_;
    } else if (a.val_ < b.val_) {
      r = a.unit_ + b.unit_ * prime_power(a.p_, b.val_ - v);
    } else {
      r = b.unit_ + a.unit_ * prime_power(a.p_, a.val_ - v);
    }
    return from_parts(a.p_, v, std::move(r), n);
  }

  friend PadicNumber operator-(const PadicNumber& a, const PadicNumber& b) { return a + (-b); }

  friend PadicNumber operator*(const PadicNumber& a, const PadicNumber& b) {
    check_same_prime(a, b);
    long n = std::min(a.val_ + b.prec_, b.val_ + a.prec_);
    if (a.is_zero() || b.is_zero()) return zero(a.p_, n);
    long v = a.val_ + b.val_;
    if (v >= n) return zero(a.p_, n);
    mpz_class r = a.unit_ * b.unit_;
    reduce_mod(r, prime_power(a.p_, n - v));
    PadicNumber x;
    x.p_ = a.p_;
    x.val_ = v;
    x.prec_ = n;
    x.unit_ = std::move(r);
    return x;
  }

  friend PadicNumber operator/(const PadicNumber& a, const PadicNumber& b) {
    check_same_prime(a, b);
    if (b.is_zero()) throw PrecisionError("division by an element indistinguishable from zero");
    if (a.is_zero()) return zero(a.p_, a.prec_ - b.val_);
    long v = a.val_ - b.val_;
    long rel = std::min(a.prec_ - a.val_, b.prec_ - b.val_);
    if (rel <= 0) return zero(a.p_, v + rel);
    const mpz_class& mod = prime_power(a.p_, rel);
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), b.unit_.get_mpz_t(), mod.get_mpz_t());
    mpz_class r = a.unit_ * inv;
    reduce_mod(r, mod);
    PadicNumber x;
    x.p_ = a.p_;
    x.val_ = v;
    x.prec_ = v + rel;
    x.unit_ = std::move(r);
    return x;
  }

  PadicNumber& operator+=(const PadicNumber& b) { return *this = *this + b; }
  PadicNumber& operator-=(const PadicNumber& b) { return *this = *this - b; }
  PadicNumber& operator*=(const PadicNumber& b) { return *this = *this * b; }
  PadicNumber& operator/=(const PadicNumber& b) { return *this = *this / b; }

  PadicNumber inverse() const { return from_long(p_, 1, std::max(1L, prec_ - val_)) / *this; }

  PadicNumber pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    if (e == 0) return from_long(p_, 1, std::max(1L, prec_));
    PadicNumber result = from_long(p_, 1, std::max(1L, prec_ - val_ + 1));
    PadicNumber base = *this;
    while (e > 0) {
      if (e & 1) result *= base;
      e >>= 1;
      if (e > 0) base *= base;
    }
    return result;
  }

  /// True when a - b is indistinguishable from zero at the common precision.
  bool equals(const PadicNumber& b) const { return (*this - b).is_zero(); }

  /// Canonical form "d*p^v + ... + O(p^N)".
  std::string to_string() const {
    std::string s;
    std::string ps = std::to_string(p_);
    if (!is_zero()) {
      std::vector<long> ds = digits();
      for (std::size_t i = 0; i < ds.size(); ++i) {
        if (ds[i] == 0) continue;
        long e = val_ + static_cast<long>(i);
        std::string term;
        if (e == 0) {
          term = std::to_string(ds[i]);
        } else {
          if (ds[i] != 1) term = std::to_string(ds[i]) + "*";
          term += ps;
          if (e != 1) term += "^" + std::to_string(e);
        }
        s += term + " + ";
      }
    }
    s += "O(" + ps + "^" + std::to_string(prec_) + ")";
    return s;
  }

 private:
  static void check_same_prime(const PadicNumber& a, const PadicNumber& b) {
    if (a.p_ != b.p_) throw std::invalid_argument("p-adic numbers over different primes");
  }

  long p_ = 0;
  long val_ = 0;
  long prec_ = 0;
  mpz_class unit_ = 0;
};

namespace detail {

/// A square root of the unit n modulo the odd prime p (Tonelli-Shanks), or -1.
inline long sqrt_mod_prime(long n, long p) {
  n %= p;
  if (n < 0) n += p;
  if (n == 0) return 0;
  mpz_class a(n), P(p), r;
  if (mpz_legendre(a.get_mpz_t(), P.get_mpz_t()) != 1) return -1;
  long q = p - 1, s = 0;
  while (q % 2 == 0) {
    q /= 2;
    ++s;
  }
  long z = 2;
  mpz_class Z;
  while (true) {
    Z = z;
    if (mpz_legendre(Z.get_mpz_t(), P.get_mpz_t()) == -1) break;
    ++z;
  }
  mpz_class c, x, t, b;
  mpz_powm_ui(c.get_mpz_t(), Z.get_mpz_t(), q, P.get_mpz_t());
  mpz_powm_ui(x.get_mpz_t(), a.get_mpz_t(), (q + 1) / 2, P.get_mpz_t());
  mpz_powm_ui(t.get_mpz_t(), a.get_mpz_t(), q, P.get_mpz_t());
  long m = s;
  while (t != 1) {
    long i = 0;
    mpz_class tt = t;
    while (tt != 1) {
      tt = tt * tt % P;
      ++i;
    }
    b = c;
    for (long j = 0; j < m - i - 1; ++j) b = b * b % P;
    x = x * b % P;
    c = b * b % P;
    t = t * c % P;
    m = i;
  }
  return x.get_si();
}

}  // namespace detail

/// Iwasawa logarithm: log_p(p) = 0 and log_p(zeta) = 0 for roots of unity.
inline PadicNumber log_iwasawa(const PadicNumber& x) {
  if (x.is_zero()) throw DomainError("logarithm of zero");
  const long p = x.prime();
  PadicNumber u = x.unit_part();
  const long n = u.precision();
  if (n <= 0) return PadicNumber::zero(p, n);
  PadicNumber z = u.pow(p - 1) - PadicNumber::from_long(p, 1, n);
  PadicNumber sum = PadicNumber::zero(p, n);
  if (!z.is_zero()) {
    const long vz = z.valuation();
    PadicNumber zk = z;
    for (long k = 1; k * vz - floor_log(p, k) < n; ++k) {
      PadicNumber term = zk / PadicNumber::from_long(p, k, n + k * vz);
      sum = (k % 2 == 1) ? sum + term : sum - term;
      zk *= z;
    }
  }
  return sum / PadicNumber::from_long(p, p - 1, n);
}

/// The (p-1)-st root of unity congruent to a unit x modulo p, known to the precision of x.
inline PadicNumber teichmuller(const PadicNumber& x) {
  if (x.is_zero() || x.valuation() != 0) throw DomainError("Teichmuller lift needs a unit");
  const long p = x.prime();
  const long n = x.precision();
  mpz_class t = x.residue();
  long have = 1;
  while (have < n) {
    have = std::min(2 * have, n);
    const mpz_class& mod = prime_power(p, have);
    mpz_class tp, deriv, inv;
    mpz_powm_ui(tp.get_mpz_t(), t.get_mpz_t(), static_cast<unsigned long>(p - 2), mod.get_mpz_t());
    deriv = tp * (p - 1);
    mpz_class fval = tp * t - 1;
    mpz_invert(inv.get_mpz_t(), deriv.get_mpz_t(), mod.get_mpz_t());
    t -= fval * inv;
    reduce_mod(t, mod);
  }
  return PadicNumber::from_integer(p, t, n);
}

/// Square root of a with unit part congruent to sign_hint mod p.
/// A negative sign_hint selects the root whose unit part has the smaller residue.
inline PadicNumber hensel_sqrt(const PadicNumber& a, long sign_hint = -1) {
  const long p = a.prime();
  if (a.is_zero()) return PadicNumber::zero(p, (a.precision() + 1) / 2);
  if (a.valuation() % 2 != 0) throw DomainError("no square root: odd valuation");
  const long half = a.valuation() / 2;
  PadicNumber u = a.unit_part();
  const long n = u.precision();
  long r = detail::sqrt_mod_prime(u.residue(), p);
  if (r < 0) throw DomainError("no square root");
  long other = (p - r) % p;
  if (sign_hint < 0) {
    r = std::min(r, other);
  } else {
    long h = sign_hint % p;
    if (h == other) {
      r = other;
    } else if (h != r) {
      throw DomainError("sign hint is not a square root modulo p");
    }
  }
  mpz_class s = r;
  const mpz_class target = u.unit();
  long have = 1;
  while (have < n) {
    have = std::min(2 * have, n);
    const mpz_class& mod = prime_power(p, have);
    mpz_class inv, two_s = 2 * s;
    mpz_invert(inv.get_mpz_t(), two_s.get_mpz_t(), mod.get_mpz_t());
    s -= (s * s - target) * inv;
    reduce_mod(s, mod);
  }
  return PadicNumber::from_parts(p, half, s, n + half);
}

}  // namespace padic_heights
