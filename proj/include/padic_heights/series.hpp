#pragma once

#include <string>
#include <vector>

#include "padic.hpp"

namespace padic_heights {

using PadicPolynomial = std::vector<PadicNumber>;

/// Evaluates a polynomial (coefficients by increasing degree) at x by Horner's rule.
inline PadicNumber poly_eval(const PadicPolynomial& f, const PadicNumber& x) {
  if (f.empty()) return PadicNumber::zero(x.prime(), x.precision());
  PadicNumber acc = f.back();
  for (std::size_t i = f.size() - 1; i-- > 0;) acc = acc * x + f[i];
  return acc;
}

inline PadicPolynomial poly_derivative(const PadicPolynomial& f) {
  PadicPolynomial d;
  for (std::size_t i = 1; i < f.size(); ++i) {
    d.push_back(f[i] * PadicNumber::from_long(f[i].prime(), static_cast<long>(i), f[i].precision() + 1));
  }
  return d;
}

/// Truncated Laurent series sum_{e >= lowest} c_e t^e, with coefficients known for e < order.
class PadicSeries {
 public:
  PadicSeries() = default;

  /// Coefficients for exponents lowest, lowest+1, ...; missing ones up to order are zero at precision prec.
  PadicSeries(long p, long lowest, long order, std::vector<PadicNumber> coeffs, long prec, std::string var = "t")
      : p_(p), low_(lowest), order_(order), var_(std::move(var)) {
    if (order < lowest) order_ = lowest;
    c_ = std::move(coeffs);
    c_.resize(static_cast<std::size_t>(order_ - low_), PadicNumber::zero(p, prec));
    if (c_.size() > static_cast<std::size_t>(order_ - low_)) c_.resize(order_ - low_);
  }

  /// The constant series a + O(t^order).
  static PadicSeries constant(const PadicNumber& a, long order) {
    return PadicSeries(a.prime(), 0, order, {a}, a.precision());
  }

  /// The series t + O(t^order).
  static PadicSeries variable(long p, long order, long prec) {
    return PadicSeries(p, 1, order, {PadicNumber::from_long(p, 1, prec)}, prec);
  }

  long prime() const { return p_; }
  long lowest() const { return low_; }
  long order() const { return order_; }
  const std::string& variable_name() const { return var_; }

  /// Coefficient of t^e; exponents at or beyond the truncation order are never read.
  PadicNumber coeff(long e) const {
    if (e >= order_) throw PrecisionError("series coefficient beyond truncation order");
    if (e < low_) return PadicNumber::zero(p_, min_precision());
    return c_[static_cast<std::size_t>(e - low_)];
  }

  PadicNumber residue() const { return coeff(-1); }

  long min_precision() const {
    long m = 1L << 40;
    for (const auto& c : c_) m = std::min(m, c.precision());
    return m;
  }

  PadicSeries truncated(long order) const {
    if (order >= order_) return *this;
    std::vector<PadicNumber> cs(c_.begin(), c_.begin() + std::max(0L, order - low_));
    return PadicSeries(p_, low_, order, cs, min_precision(), var_);
  }

  /// Multiplication by t^k.
  PadicSeries shifted(long k) const {
    PadicSeries s = *this;
    s.low_ += k;
    s.order_ += k;
    return s;
  }

  PadicSeries operator-() const {
    PadicSeries s = *this;
    for (auto& c : s.c_) c = -c;
    return s;
  }

  friend PadicSeries operator+(const PadicSeries& a, const PadicSeries& b) {
    long low = std::min(a.low_, b.low_);
    long order = std::min(a.order_, b.order_);
    long prec = std::min(a.min_precision(), b.min_precision());
    std::vector<PadicNumber> cs;
    for (long e = low; e < order; ++e) {
      PadicNumber x = PadicNumber::zero(a.p_, prec);
      if (e >= a.low_) x = a.c_[e - a.low_];
      if (e >= b.low_) x = (e >= a.low_) ? x + b.c_[e - b.low_] : b.c_[e - b.low_];
      cs.push_back(x);
    }
    return PadicSeries(a.p_, low, order, cs, prec, a.var_);
  }

  friend PadicSeries operator-(const PadicSeries& a, const PadicSeries& b) { return a + (-b); }

  friend PadicSeries operator*(const PadicSeries& a, const PadicSeries& b) {
    long low = a.low_ + b.low_;
    long order = std::min(a.order_ + b.low_, b.order_ + a.low_);
    long n = order - low;
    std::vector<PadicNumber> cs;
    cs.reserve(std::max(0L, n));
    for (long k = 0; k < n; ++k) {
      PadicNumber acc = a.c_[0] * b.c_[k];
      for (long i = 1; i <= k; ++i) acc += a.c_[i] * b.c_[k - i];
      cs.push_back(acc);
    }
    return PadicSeries(a.p_, low, order, cs, std::min(a.min_precision(), b.min_precision()), a.var_);
  }

  friend PadicSeries operator*(const PadicNumber& s, const PadicSeries& a) {
    PadicSeries r = a;
    for (auto& c : r.c_) c = s * c;
    return r;
  }

  /// Multiplicative inverse; the coefficient at the lowest exponent must be nonzero.
  PadicSeries inverse() const {
    long n = order_ - low_;
    if (n <= 0 || c_[0].is_zero()) throw PrecisionError("series inverse needs a nonzero leading coefficient");
    std::vector<PadicNumber> b;
    b.reserve(n);
    PadicNumber a0inv = c_[0].inverse();
    b.push_back(a0inv);
    for (long k = 1; k < n; ++k) {
      PadicNumber acc = c_[1] * b[k - 1];
      for (long i = 2; i <= k; ++i) acc += c_[i] * b[k - i];
      b.push_back(-(acc * a0inv));
    }
    return PadicSeries(p_, -low_, -low_ + n, b, a0inv.precision(), var_);
  }

  /// Square root with leading coefficient congruent to sign_hint mod p (see hensel_sqrt).
  PadicSeries sqrt(long sign_hint = -1) const {
    long n = order_ - low_;
    if (n <= 0 || c_[0].is_zero()) throw PrecisionError("series square root needs a nonzero leading coefficient");
    if (low_ % 2 != 0) throw DomainError("series square root of odd order");
    std::vector<PadicNumber> s;
    s.reserve(n);
    s.push_back(hensel_sqrt(c_[0], sign_hint));
    PadicNumber inv2s0 = (PadicNumber::from_long(p_, 2, s[0].precision() + 1) * s[0]).inverse();
    for (long k = 1; k < n; ++k) {
      PadicNumber acc = c_[k];
      for (long i = 1; i < k; ++i) acc -= s[i] * s[k - i];
      s.push_back(acc * inv2s0);
    }
    return PadicSeries(p_, low_ / 2, low_ / 2 + n, s, s[0].precision(), var_);
  }

  PadicSeries derivative() const {
    std::vector<PadicNumber> cs;
    long low = low_ - 1;
    for (long e = low_; e < order_; ++e) {
      const PadicNumber& c = c_[e - low_];
      cs.push_back(c * PadicNumber::from_long(p_, e, c.precision() + 1));
    }
    return PadicSeries(p_, low, order_ - 1, cs, min_precision(), var_);
  }

  /// Termwise antiderivative with zero constant term.
  PadicSeries antiderivative() const {
    if (low_ <= -1 && -1 < order_ && !c_[-1 - low_].is_zero()) throw DomainError("log term required");
    std::vector<PadicNumber> cs;
    long low = low_ + 1;
    for (long e = low_; e < order_; ++e) {
      const PadicNumber& c = c_[e - low_];
      if (e == -1) {
        cs.push_back(PadicNumber::zero(p_, c.precision()));
      } else {
        cs.push_back(c / PadicNumber::from_long(p_, e + 1, c.precision() + 64));
      }
    }
    return PadicSeries(p_, low, order_ + 1, cs, min_precision(), var_);
  }

  /// Sum of c_e t^e over the known exponents; the truncation tail is the caller's responsibility.
  PadicNumber evaluate(const PadicNumber& t) const {
    PadicNumber acc = PadicNumber::zero(p_, 1L << 40);
    bool first = true;
    for (long e = order_ - 1; e >= low_; --e) {
      const PadicNumber& c = c_[e - low_];
      acc = first ? c : acc * t + c;
      first = false;
    }
    if (first) return PadicNumber::zero(p_, t.precision());
    if (low_ != 0) acc = acc * t.pow(low_);
    return acc;
  }

  /// Composition f(s) for a polynomial f.
  static PadicSeries poly_compose(const PadicPolynomial& f, const PadicSeries& s) {
    PadicSeries acc = constant(f.back(), std::max(1L, s.order_ - s.low_));
    for (std::size_t i = f.size() - 1; i-- > 0;) {
      PadicSeries prod = acc * s;
      acc = prod + constant(f[i], std::max(0L, prod.order_));
    }
    return acc;
  }

 private:
  long p_ = 0;
  long low_ = 0;
  long order_ = 0;
  std::string var_ = "t";
  std::vector<PadicNumber> c_;
};

}  // namespace padic_heights
