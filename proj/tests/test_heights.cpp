#include <gtest/gtest.h>

#include <functional>
#include <random>
#include <string>

#include "padic_heights.hpp"
#include "support/fixtures.hpp"
#include "support/matchers.hpp"
#include "support/oracles.hpp"

using namespace padic_heights;
using namespace matchers;
using fixtures::PointKind;
using fixtures::Quadruple;

namespace {

constexpr int kQuadruples = 20;

std::vector<fixtures::TestCurve> SymmetryCurves() { return {fixtures::x0plus107(), fixtures::x0plus67()}; }

PadicNumber H(const PrecomputedData& D, const Quadruple& q) { return pair_height(D, q.P, q.Q, q.R, q.S).value; }

PadicNumber H(const PrecomputedData& D, const CurvePoint& P, const CurvePoint& Q, const CurvePoint& R,
              const CurvePoint& S) {
  return pair_height(D, P, Q, R, S).value;
}

CurvePoint Ordinary(const PrecomputedData& D, const fixtures::TestCurve& t, std::mt19937_64& rng) {
  auto P = fixtures::random_point(D, t, PointKind::ordinary, rng);
  if (!P) throw std::runtime_error("no ordinary point");
  return *P;
}

/// True when no point of `a` shares a residue disc with a point of `b` or its conjugate.
bool DiscsApart(const HyperellipticCurve& c, const std::vector<CurvePoint>& a, const std::vector<CurvePoint>& b) {
  for (const auto& X : a) {
    for (const auto& Y : b) {
      if (same_disc(c, X, Y) || same_disc(c, X, involution(c, Y))) return false;
    }
  }
  return true;
}

void ExpectDomainError(const std::function<void()>& f, const std::string& needle) {
  try {
    f();
    ADD_FAILURE() << "expected an error mentioning \"" << needle << "\"";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
  }
}

}  // namespace

TEST(Golden, QuinticReferenceValue) {
  HeightResult h = fixtures::quintic_height(10, WMode::unit_root, std::make_pair(1L, 1L));
  EXPECT_EQ(h.value.to_string(), fixtures::quintic_reference());
  EXPECT_EQ(h.precision(), 10);
}

TEST(Golden, IndependentOfTheNormalizingPoint) {
  HeightResult a = fixtures::quintic_height(10, WMode::unit_root, std::make_pair(1L, 1L));
  HeightResult b = fixtures::quintic_height(10, WMode::unit_root, std::nullopt);
  EXPECT_EQ(b.value.to_string(), a.value.to_string());
}

TEST(Golden, HundredDigitsExtendTheReference) {
  HeightResult h = fixtures::quintic_height(100, WMode::unit_root, std::make_pair(1L, 1L));
  EXPECT_GE(h.precision(), 100);
  EXPECT_EQ(h.value.truncated(10).to_string(), fixtures::quintic_reference());
}

TEST(Symmetry, RandomQuadruplesBothModes) {
  for (const auto& t : SymmetryCurves()) {
    for (WMode mode : {WMode::unit_root, WMode::symplectic}) {
      const PrecomputedData& D = fixtures::precomputed(t, mode);
      std::mt19937_64 rng(211);
      for (int n = 0; n < kQuadruples; ++n) {
        Quadruple q = fixtures::random_quadruple(D, t, rng, fixtures::ordinary_only(), fixtures::ordinary_or_infinity());
        PadicNumber forward = H(D, q);
        PadicNumber backward = H(D, q.R, q.S, q.P, q.Q);
        EXPECT_TRUE(AgreeTo(forward, backward, fixtures::precision_floor(D)))
            << t.name << " " << to_string(mode) << " P=" << q.P.to_string() << " Q=" << q.Q.to_string()
            << " R=" << q.R.to_string() << " S=" << q.S.to_string();
      }
    }
  }
}

TEST(Symmetry, X0Plus107RationalPoints) {
  auto t = fixtures::x0plus107();
  for (WMode mode : {WMode::unit_root, WMode::symplectic}) {
    const PrecomputedData& D = fixtures::precomputed(t, mode);
    const HyperellipticCurve& c = D.curve;
    CurvePoint a = rational_point(c, 1, 1), b = rational_point(c, 1, -1);
    CurvePoint d = rational_point(c, -1, 1), e = rational_point(c, -1, -1);
    EXPECT_TRUE(AgreeTo(H(D, a, b, d, e), H(D, d, e, a, b), fixtures::precision_floor(D)));
    CurvePoint im = CurvePoint::infinity_minus(), ip = CurvePoint::infinity_plus();
    EXPECT_TRUE(AgreeTo(H(D, im, ip, a, b), H(D, a, b, im, ip), fixtures::precision_floor(D)));
    EXPECT_TRUE(AgreeTo(H(D, im, a, d, e), H(D, d, e, im, a), fixtures::precision_floor(D)));
  }
}

TEST(PrincipalDivisor, MatchesLogarithmOfTheFunction) {
  for (const auto& t : SymmetryCurves()) {
    const PrecomputedData& D = fixtures::precomputed(t, WMode::unit_root);
    const HyperellipticCurve& c = D.curve;
    std::mt19937_64 rng(223);
    int done = 0;
    for (int attempt = 0; attempt < 400 && done < kQuadruples; ++attempt) {
      CurvePoint A = Ordinary(D, t, rng), B = Ordinary(D, t, rng);
      if (same_disc(c, A, B) || same_disc(c, A, involution(c, B))) continue;
      auto R = fixtures::random_point(D, t, done % 4 == 3 ? PointKind::infinity : PointKind::ordinary, rng);
      auto S = fixtures::random_point(D, t, PointKind::ordinary, rng);
      if (!DiscsApart(c, {*R, *S}, {A, B})) continue;
      if (!fixtures::distinct(c, *R, *S)) continue;
      // div((x - a)/(x - b)) = A + iota(A) - B - iota(B).
      Divisor div_f{{A, 1}, {involution(c, A), 1}, {B, -1}, {involution(c, B), -1}};
      Divisor rs{{*R, 1}, {*S, -1}};
      HeightResult h = height_pairing(D, div_f, rs);
      const mpq_class a = *A.exact_x, b = *B.exact_x;
      mpq_class value = (*S->exact_x - b) / (*S->exact_x - a);
      if (R->is_affine()) value *= (*R->exact_x - a) / (*R->exact_x - b);
      PadicNumber expected = Q(t.p, oracle::log_rational(value, t.p, D.working_precision), D.working_precision);
      EXPECT_TRUE(AgreeTo(h.value, expected, fixtures::precision_floor(D)))
          << t.name << " a=" << a.get_str() << " b=" << b.get_str();
      ++done;
    }
    EXPECT_EQ(done, kQuadruples) << t.name;
  }
}

TEST(Bilinearity, SumsOfDivisorsInEitherArgument) {
  for (const auto& t : SymmetryCurves()) {
    const PrecomputedData& D = fixtures::precomputed(t, WMode::unit_root);
    const HyperellipticCurve& c = D.curve;
    std::mt19937_64 rng(227);
    int done = 0;
    for (int attempt = 0; attempt < 400 && done < kQuadruples; ++attempt) {
      CurvePoint P = Ordinary(D, t, rng), Q1 = Ordinary(D, t, rng), P2 = Ordinary(D, t, rng),
                 Q2 = Ordinary(D, t, rng), R = Ordinary(D, t, rng), S = Ordinary(D, t, rng);
      if (!DiscsApart(c, {R, S}, {P, Q1, P2, Q2})) continue;
      if (!fixtures::distinct(c, P, Q1) || !fixtures::distinct(c, P2, Q2) || !fixtures::distinct(c, R, S)) continue;
      if (!fixtures::distinct(c, P, Q2) || !fixtures::distinct(c, P2, Q1)) continue;
      Divisor d1{{P, 1}, {Q1, -1}}, d1b{{P2, 1}, {Q2, -1}}, d2{{R, 1}, {S, -1}};
      Divisor sum{{P, 1}, {Q1, -1}, {P2, 1}, {Q2, -1}};
      PadicNumber separate = height_pairing(D, d1, d2).value + height_pairing(D, d1b, d2).value;
      PadicNumber together = height_pairing(D, sum, d2).value;
      // A different ordering pairs P with Q2 and P2 with Q1.
      Divisor reordered{{P, 1}, {Q2, -1}, {P2, 1}, {Q1, -1}};
      PadicNumber permuted = height_pairing(D, reordered, d2).value;
      const long floor = fixtures::precision_floor(D);
      EXPECT_TRUE(AgreeTo(separate, together, floor)) << t.name;
      EXPECT_TRUE(AgreeTo(separate, permuted, floor)) << t.name;
      // Second argument: R - S = (R - T) + (T - S).
      CurvePoint T = Ordinary(D, t, rng);
      if (DiscsApart(c, {T}, {P, Q1}) && fixtures::distinct(c, R, T) && fixtures::distinct(c, T, S)) {
        PadicNumber split = H(D, P, Q1, R, T) + H(D, P, Q1, T, S);
        EXPECT_TRUE(AgreeTo(H(D, P, Q1, R, S), split, floor)) << t.name;
      }
      ++done;
    }
    EXPECT_EQ(done, kQuadruples) << t.name;
  }
}

TEST(TwoPath, AntisymmetricMatchesFullReduction) {
  for (const auto& t : SymmetryCurves()) {
    const PrecomputedData& D = fixtures::precomputed(t, WMode::unit_root);
    const HyperellipticCurve& c = D.curve;
    std::mt19937_64 rng(229);
    int done = 0;
    for (int attempt = 0; attempt < 200 && done < 10; ++attempt) {
      CurvePoint P = Ordinary(D, t, rng), R = Ordinary(D, t, rng), S = Ordinary(D, t, rng);
      if (!DiscsApart(c, {R, S}, {P}) || !fixtures::distinct(c, R, S)) continue;
      HeightResult direct = height_antisymmetric(D, P, R, S);
      HeightResult reduced = height_antisymmetric_by_reduction(D, P, R, S);
      EXPECT_TRUE(AgreeTo(direct.value, reduced.value, fixtures::precision_floor(D))) << t.name;
      ++done;
    }
    EXPECT_EQ(done, 10) << t.name;
  }
}

TEST(TwoPath, RejectsSymplecticMode) {
  const PrecomputedData& D = fixtures::precomputed(fixtures::x0plus107(), WMode::symplectic);
  CurvePoint P = rational_point(D.curve, 1, 1), R = rational_point(D.curve, -1, 1);
  ExpectDomainError([&] { height_antisymmetric_by_reduction(D, P, R, involution(D.curve, R)); }, "unit root");
}

TEST(Invariance, HyperellipticInvolution) {
  for (const auto& t : SymmetryCurves()) {
    const PrecomputedData& D = fixtures::precomputed(t, WMode::unit_root);
    const HyperellipticCurve& c = D.curve;
    std::mt19937_64 rng(233);
    for (int n = 0; n < 10; ++n) {
      Quadruple q = fixtures::random_quadruple(D, t, rng, fixtures::ordinary_only(), fixtures::ordinary_or_infinity());
      Quadruple iq{involution(c, q.P), involution(c, q.Q), involution(c, q.R), involution(c, q.S)};
      EXPECT_TRUE(AgreeTo(H(D, q), H(D, iq), fixtures::precision_floor(D))) << t.name;
    }
  }
}

TEST(Invariance, ChangeOfModel) {
  auto t = fixtures::x0plus107();
  const PrecomputedData& D = fixtures::precomputed(t, WMode::unit_root);
  const HyperellipticCurve& c = D.curve;
  // Move (-1, 1) to infinity.
  ModelMap m = tau_map(c.at_precision(D.working_precision), rational_point(c, -1, 1));
  PrecomputedData D2 = precompute(m.target, t.N, WMode::unit_root);
  ModelMap fine = refine_map(m, D2.working_precision);
  std::mt19937_64 rng(239);
  int done = 0;
  for (int attempt = 0; attempt < 100 && done < 8; ++attempt) {
    Quadruple q = fixtures::random_quadruple(D, t, rng, fixtures::ordinary_only(), fixtures::ordinary_or_infinity());
    Quadruple mq{map_point(fine, q.P), map_point(fine, q.Q), map_point(fine, q.R), map_point(fine, q.S)};
    if (!fixtures::condition_one(D2.curve, mq)) continue;
    if (mq.P.is_affine() && mq.P.y.valuation() != 0) continue;
    if (mq.Q.is_affine() && mq.Q.y.valuation() != 0) continue;
    const long floor = std::min(fixtures::precision_floor(D), fixtures::precision_floor(D2));
    EXPECT_TRUE(AgreeTo(H(D, q), H(D2, mq), floor));
    ++done;
  }
  EXPECT_EQ(done, 8);
}

TEST(ComplementDependence, DifferenceIsBilinearInAbelianLogarithms) {
  for (const auto& t : SymmetryCurves()) {
    const PrecomputedData& U = fixtures::precomputed(t, WMode::unit_root);
    const PrecomputedData& S = fixtures::precomputed(t, WMode::symplectic);
    const int g = U.genus();
    const long p = t.p;
    const int unknowns = g * g;
    const int fit = unknowns + 1, held_out = 6;
    std::mt19937_64 rng(241);
    std::vector<std::vector<PadicNumber>> rows;
    std::vector<PadicNumber> diffs;
    bool differ = false;
    while (static_cast<int>(rows.size()) < fit + held_out) {
      Quadruple q = fixtures::random_quadruple(U, t, rng, fixtures::ordinary_only(), fixtures::ordinary_only());
      auto l1 = coleman_integrals_on_basis(U, q.Q, q.P).values;
      auto l2 = coleman_integrals_on_basis(U, q.S, q.R).values;
      std::vector<PadicNumber> row;
      for (int i = 0; i < g; ++i) {
        for (int j = 0; j < g; ++j) row.push_back(l1[i] * l2[j]);
      }
      PadicNumber d = H(S, q) - H(U, q);
      differ = differ || !d.is_zero();
      rows.push_back(row);
      diffs.push_back(d);
    }
    EXPECT_TRUE(differ) << t.name;
    // Fit on the first g^2 samples; the remaining fit sample and the held-out samples must be predicted.
    PadicMatrix A(p, unknowns, unknowns, U.working_precision);
    PadicMatrix b(p, unknowns, 1, U.working_precision);
    for (int r = 0; r < unknowns; ++r) {
      for (int k = 0; k < unknowns; ++k) A(r, k) = rows[r][k];
      b(r, 0) = diffs[r];
    }
    std::vector<PadicNumber> coeffs = solve_linear(A, b).column_vector(0);
    for (int r = unknowns; r < fit + held_out; ++r) {
      PadicNumber predicted = PadicNumber::zero(p, 1L << 40);
      for (int k = 0; k < unknowns; ++k) predicted += coeffs[k] * rows[r][k];
      EXPECT_TRUE(AgreeTo(predicted, diffs[r], 1)) << t.name << " sample " << r;
      EXPECT_GE(std::min(predicted.precision(), diffs[r].precision()) - (predicted - diffs[r]).valuation(), 0);
    }
  }
}

TEST(Psi, OmegaGResidualsAndDecomposition) {
  for (const auto& t : SymmetryCurves()) {
    for (WMode mode : {WMode::unit_root, WMode::symplectic}) {
      const PrecomputedData& D = fixtures::precomputed(t, mode);
      const int g = D.genus();
      const long p = t.p;
      MixedCoordinates mc = psi_omega_g(D);
      PadicMatrix A = D.Frob;
      for (int i = 0; i < 2 * g; ++i) A(i, i) -= PadicNumber::from_long(p, p, 1000);
      std::vector<PadicNumber> lhs = (A * PadicMatrix::column(mc.psi)).column_vector(0);
      for (int i = 0; i < 2 * g; ++i) {
        EXPECT_TRUE(lhs[i].equals(D.frobenius.phi(D.eta.omega_index(i), g))) << t.name << " row " << i;
      }
      // psi - sum u_i eta_i lies in W, whose lower block is the identity.
      std::vector<PadicNumber> rest = mc.psi;
      for (int i = 0; i < g; ++i) rest[i] -= mc.u[i];
      std::vector<PadicNumber> lower(rest.begin() + g, rest.end());
      std::vector<PadicNumber> rebuilt = (D.W * PadicMatrix::column(lower)).column_vector(0);
      for (int i = 0; i < 2 * g; ++i) EXPECT_TRUE(rebuilt[i].equals(rest[i])) << t.name;
    }
  }
}

TEST(Psi, AntisymmetricResidualAndPathIndependence) {
  for (const auto& t : SymmetryCurves()) {
    const PrecomputedData& D = fixtures::precomputed(t, WMode::unit_root);
    const HyperellipticCurve& c = D.curve;
    const int g = D.genus();
    std::mt19937_64 rng(251);
    for (int n = 0; n < 5; ++n) {
      CurvePoint P = Ordinary(D, t, rng), T = Ordinary(D, t, rng);
      MixedCoordinates mc = psi_antisymmetric(D, P);
      auto via_t = coleman_integrals_on_basis(D, involution(c, P), T);
      auto rest = coleman_integrals_on_basis(D, T, P);
      for (std::size_t i = 0; i < via_t.values.size(); ++i) via_t.values[i] += rest.values[i];
      std::vector<PadicNumber> minus_s;
      for (int j = 0; j < 2 * g; ++j) {
        std::vector<PadicNumber> e(2 * g, PadicNumber::zero(t.p, D.working_precision));
        e[j] = one(t.p, D.working_precision);
        minus_s.push_back(combine_integrals(D.eta, via_t, e, CoefficientBasis::eta));
      }
      std::vector<PadicNumber> image = (D.M * PadicMatrix::column(mc.psi)).column_vector(0);
      for (int j = 0; j < 2 * g; ++j) EXPECT_TRUE(image[j].equals(minus_s[j])) << t.name << " j=" << j;
    }
    ExpectDomainError([&] { psi_antisymmetric(D, CurvePoint::infinity_minus()); }, "p not dividing y(P)");
  }
}

TEST(Psi, WeierstrassPointHasNoThirdKindForm) {
  const PrecomputedData& D = fixtures::precomputed(fixtures::six_roots(), WMode::unit_root);
  ExpectDomainError([&] { psi_antisymmetric(D, rational_point(D.curve, 2, 0)); }, "p not dividing y(P)");
}

TEST(InfinityPair, OrientationAndTinyPath) {
  auto t = fixtures::x0plus107();
  const PrecomputedData& D = fixtures::precomputed(t, WMode::unit_root);
  const HyperellipticCurve& c = D.curve;
  const int g = D.genus();
  std::mt19937_64 rng(257);
  for (int n = 0; n < 5; ++n) {
    CurvePoint R = Ordinary(D, t, rng), S = Ordinary(D, t, rng);
    EXPECT_TRUE(AgreeTo(height_inf_inf(D, R, S).value, -height_inf_inf(D, S, R).value, fixtures::precision_floor(D)));
    // Same disc: only tiny integrals are involved.
    CurvePoint R2 = lift_x(c, *R.exact_x + 7 * (n + 1), R.y.residue());
    auto tiny = tiny_integrals_on_basis(c, R2, R, D.series_order).values;
    MixedCoordinates mc = psi_omega_g(D);
    PadicNumber expected = tiny[g];
    for (int i = 0; i < g; ++i) expected -= mc.u[i] * tiny[i];
    HeightResult h = height_inf_inf(D, R, R2);
    EXPECT_TRUE(AgreeTo(h.value, expected, fixtures::precision_floor(D)));
  }
  ExpectDomainError([&] { height_inf_inf(D, CurvePoint::infinity_plus(), rational_point(c, 1, 1)); }, "Condition 1");
}

TEST(Antisymmetric, OrientationAndHalfPaths) {
  for (const auto& t : SymmetryCurves()) {
    const PrecomputedData& D = fixtures::precomputed(t, WMode::unit_root);
    const HyperellipticCurve& c = D.curve;
    std::mt19937_64 rng(263);
    int done = 0;
    for (int attempt = 0; attempt < 100 && done < 5; ++attempt) {
      CurvePoint P = Ordinary(D, t, rng), R = Ordinary(D, t, rng), S = Ordinary(D, t, rng), T = Ordinary(D, t, rng);
      if (!DiscsApart(c, {R, S, T}, {P})) continue;
      const long floor = fixtures::precision_floor(D);
      PadicNumber h = height_antisymmetric(D, P, R, S).value;
      EXPECT_TRUE(AgreeTo(h, -height_antisymmetric(D, P, S, R).value, floor));
      PadicNumber halves = height_antisymmetric(D, P, R, T).value + height_antisymmetric(D, P, T, S).value;
      EXPECT_TRUE(AgreeTo(h, halves, floor));
      ++done;
    }
    EXPECT_EQ(done, 5);
  }
}

TEST(OneInfinity, BiAdditiveAssemblyAndWeierstrassPoint) {
  auto t = fixtures::x0plus107();
  const PrecomputedData& D = fixtures::precomputed(t, WMode::unit_root);
  const HyperellipticCurve& c = D.curve;
  std::mt19937_64 rng(269);
  int done = 0;
  for (int attempt = 0; attempt < 100 && done < 5; ++attempt) {
    CurvePoint Q = Ordinary(D, t, rng), R = Ordinary(D, t, rng), S = Ordinary(D, t, rng);
    if (!DiscsApart(c, {R, S}, {Q}) || !fixtures::distinct(c, R, S)) continue;
    const long floor = fixtures::precision_floor(D);
    PadicNumber minus = height_one_infinity(D, Q, R, S, CurvePoint::Kind::inf_minus).value;
    PadicNumber plus = height_one_infinity(D, Q, R, S, CurvePoint::Kind::inf_plus).value;
    EXPECT_TRUE(AgreeTo(height_inf_inf(D, R, S).value, minus - plus, floor));
    EXPECT_TRUE(AgreeTo(minus, -height_one_infinity(D, Q, S, R, CurvePoint::Kind::inf_minus).value, floor));
    ++done;
  }
  EXPECT_EQ(done, 5);

  auto w = fixtures::six_roots();
  const PrecomputedData& W = fixtures::precomputed(w, WMode::unit_root);
  CurvePoint Q = rational_point(W.curve, 2, 0);
  CurvePoint R = lift_x(W.curve, mpq_class(5)), S = lift_x(W.curve, mpq_class(9));
  PadicNumber expected = detail::half_of(log_iwasawa((S.x - Q.x) / (R.x - Q.x)) + height_inf_inf(W, R, S).value);
  PadicNumber h = height_one_infinity(W, Q, R, S, CurvePoint::Kind::inf_minus).value;
  EXPECT_TRUE(AgreeTo(h, expected, fixtures::precision_floor(W)));
}

TEST(Pairing, ZeroDivisorAndDegreeChecks) {
  auto t = fixtures::x0plus107();
  const PrecomputedData& D = fixtures::precomputed(t, WMode::unit_root);
  const HyperellipticCurve& c = D.curve;
  CurvePoint a = rational_point(c, 1, 1), b = rational_point(c, -1, 1);
  HeightResult z = height_pairing(D, {}, {{a, 1}, {b, -1}});
  EXPECT_TRUE(z.value.is_zero());
  EXPECT_EQ(z.precision(), D.target_precision);
  ExpectDomainError([&] { height_pairing(D, {{a, 1}}, {{b, 1}, {involution(c, b), -1}}); }, "degree zero");
  ExpectDomainError([&] { height_pairing(D, {{a, 1}, {b, -1}}, {{a, 1}, {involution(c, b), -1}}); },
                    "disjoint support");
}

TEST(Pairing, ConditionOneViolationNamesThePair) {
  auto t = fixtures::x0plus107();
  const PrecomputedData& D = fixtures::precomputed(t, WMode::unit_root);
  const HyperellipticCurve& c = D.curve;
  CurvePoint a = rational_point(c, 1, 1), b = rational_point(c, 1, -1);
  CurvePoint d = rational_point(c, -1, 1), e = rational_point(c, -1, -1);
  ExpectDomainError([&] { pair_height(D, a, d, b, e); }, "Condition 1 violated: R");
  ExpectDomainError([&] { pair_height(D, CurvePoint::infinity_minus(), a, CurvePoint::infinity_plus(), d); },
                    "not supported");
}

TEST(Weierstrass, ExactWeierstrassEndpointsInBothSlots) {
  auto t = fixtures::six_roots();
  for (WMode mode : {WMode::unit_root, WMode::symplectic}) {
    const PrecomputedData& D = fixtures::precomputed(t, mode);
    const HyperellipticCurve& c = D.curve;
    CurvePoint W0 = rational_point(c, 0, 0), W3 = rational_point(c, 3, 0);
    std::mt19937_64 rng(271);
    int done = 0;
    for (int attempt = 0; attempt < 200 && done < 4; ++attempt) {
      CurvePoint R = Ordinary(D, t, rng), S = Ordinary(D, t, rng);
      if (!fixtures::distinct(c, R, S)) continue;
      const long floor = fixtures::precision_floor(D);
      PadicNumber forward = H(D, W0, W3, R, S);
      PadicNumber backward = H(D, R, S, W0, W3);
      EXPECT_TRUE(AgreeTo(forward, backward, floor)) << to_string(mode);
      // For Weierstrass points the antisymmetric parts vanish and only the cross ratio remains.
      PadicNumber cross = detail::half_of(log_iwasawa(((R.x - W0.x) * (S.x - W3.x)) / ((R.x - W3.x) * (S.x - W0.x))));
      EXPECT_TRUE(AgreeTo(forward, cross, floor)) << to_string(mode);
      ++done;
    }
    EXPECT_EQ(done, 4);
  }
}
