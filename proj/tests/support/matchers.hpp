#pragma once

#include <gtest/gtest.h>

#include <cstdlib>
#include <random>

#include "oracles.hpp"
#include "padic_heights.hpp"

namespace matchers {

using padic_heights::PadicNumber;

inline mpq_class frac(long a, long b) {
  mpq_class q(a, b);
  q.canonicalize();
  return q;
}

inline PadicNumber Q(long p, const mpq_class& q, long n) { return PadicNumber::from_rational(p, q, n); }

/// x agrees with the rational q to the precision x carries.
inline ::testing::AssertionResult MatchesRational(const PadicNumber& x, const mpq_class& q) {
  if (oracle::congruent(x.rational_lift(), q, x.prime(), x.precision())) return ::testing::AssertionSuccess();
  return ::testing::AssertionFailure() << x.to_string() << " is not " << q.get_str() << " mod p^" << x.precision();
}

/// a and b agree to their common precision, which is at least `floor`.
inline ::testing::AssertionResult AgreeTo(const PadicNumber& a, const PadicNumber& b, long floor) {
  if (std::min(a.precision(), b.precision()) < floor) {
    return ::testing::AssertionFailure() << "precision " << std::min(a.precision(), b.precision()) << " below "
                                         << floor << " for " << a.to_string() << " and " << b.to_string();
  }
  if (!a.equals(b)) return ::testing::AssertionFailure() << a.to_string() << " != " << b.to_string();
  return ::testing::AssertionSuccess();
}

inline mpq_class random_rational(std::mt19937_64& rng, long p, bool unit) {
  std::uniform_int_distribution<long> d(-100000, 100000);
  for (;;) {
    mpq_class q = frac(d(rng), std::labs(d(rng)) % 97 + 1);
    if (q == 0 || oracle::valuation(mpz_class(q.get_den()), p) > 0) continue;
    if (unit && oracle::valuation(q, p) != 0) continue;
    return q;
  }
}

}  // namespace matchers
