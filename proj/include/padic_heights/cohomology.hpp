#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "frobenius.hpp"

namespace padic_heights {

enum class WMode { unit_root, symplectic };

inline std::string to_string(WMode m) { return m == WMode::unit_root ? "unit-root" : "symplectic"; }

inline WMode parse_w_mode(const std::string& s) {
  if (s == "unit-root" || s == "unit_root") return WMode::unit_root;
  if (s == "symplectic") return WMode::symplectic;
  throw std::invalid_argument("unknown complement mode: " + s);
}

/// Default truncation order for local expansions at target precision n.
inline long default_series_order(int g, long n) { return std::max<long>(2 * g + 2, 2 * (n + g)); }

/// The basis eta_0..eta_{2g-1} of de Rham cohomology:
/// eta_i = omega_i for i < g and eta_i = omega_{i+1} - c_{i+1} omega_g for i >= g,
/// where c_k is the residue of omega_k at the point at infinity (1 : -1 : 0).
struct EtaBasis {
  int genus = 0;
  std::vector<PadicNumber> c;  // c[k] = Res_{inf-}(omega_k), k = 0..2g

  /// Index of the omega that eta_k is built from.
  std::size_t omega_index(std::size_t k) const { return k < static_cast<std::size_t>(genus) ? k : k + 1; }

  /// Coordinates of eta_k in omega_0..omega_2g.
  std::vector<PadicNumber> omega_coordinates(std::size_t k) const {
    const long p = c[0].prime();
    const long n = c[0].precision();
    std::vector<PadicNumber> v(2 * genus + 1, PadicNumber::zero(p, n));
    std::size_t w = omega_index(k);
    v[w] = one(p, n);
    if (w > static_cast<std::size_t>(genus)) v[genus] = -c[w];
    return v;
  }

  /// eta_k as an odd differential.
  OddDifferential differential(std::size_t k) const {
    OddDifferential w;
    w.numerator = omega_coordinates(k);
    w.scalar = one(c[0].prime(), c[0].precision());
    return w;
  }
};

/// Residues c_k = Res_{inf-}(omega_k) from the Laurent expansion at infinity.
inline EtaBasis eta_basis_constants(const HyperellipticCurve& c) {
  if (!c.is_normal()) throw DomainError("eta basis needs a monic even-degree model");
  const int g = c.genus();
  const long k = 2 * g + 4;
  EtaBasis e;
  e.genus = g;
  CurvePoint inf = CurvePoint::infinity_minus();
  for (int i = 0; i <= 2 * g; ++i) {
    PadicSeries s = expand_odd_differential(c, OddDifferential::basis(c.prime(), i, c.precision()), inf, k);
    e.c.push_back(s.residue());
  }
  return e;
}

/// Frobenius on the eta basis: entry (i, j) is f_{i,j} - c_j f_{i,g} with omega indices skipping g.
/// Column j holds the coordinates of phi^*(eta_j).
inline PadicMatrix eta_frobenius(const PadicMatrix& phi, const EtaBasis& eta) {
  const int g = eta.genus;
  const long p = phi.prime();
  PadicMatrix F(p, 2 * g, 2 * g, phi.min_precision());
  for (int i = 0; i < 2 * g; ++i) {
    std::size_t wi = eta.omega_index(i);
    for (int j = 0; j < 2 * g; ++j) {
      std::size_t wj = eta.omega_index(j);
      F(i, j) = phi(wi, wj) - eta.c[wj] * phi(wi, g);
    }
  }
  return F;
}

/// Cup product matrix m_ij = <eta_i, eta_j> = 2 Res_{inf+}(eta_j * integral(eta_i)).
inline PadicMatrix cup_product_matrix(const HyperellipticCurve& c, const EtaBasis& eta,
                                      const CurvePoint& at = CurvePoint::infinity_plus(), long factor = 2) {
  const int g = eta.genus;
  const long p = c.prime();
  const long k = 2 * g + 6;
  std::vector<PadicSeries> forms, prims;
  for (int i = 0; i < 2 * g; ++i) {
    forms.push_back(expand_odd_differential(c, eta.differential(i), at, k));
    prims.push_back(forms.back().antiderivative());
  }
  PadicMatrix M(p, 2 * g, 2 * g, c.precision());
  PadicNumber f = PadicNumber::from_long(p, factor, c.precision() + 1);
  for (int i = 0; i < 2 * g; ++i) {
    for (int j = 0; j < 2 * g; ++j) M(i, j) = f * (forms[j] * prims[i]).residue();
  }
  return M;
}

/// Basis kappa of a complement W with <eta_i, kappa_j> = delta_ij and <kappa_i, kappa_j> = 0.
/// Columns are coordinates in the eta basis.
inline PadicMatrix symplectic_complement(const PadicMatrix& M) {
  const std::size_t g = M.rows() / 2;
  const long p = M.prime();
  std::vector<std::size_t> lo, hi;
  for (std::size_t i = 0; i < g; ++i) {
    lo.push_back(i);
    hi.push_back(g + i);
  }
  PadicMatrix B = M.submatrix(lo, hi);
  PadicMatrix D = M.submatrix(hi, hi);
  PadicMatrix Z = inverse(B);
  PadicNumber half = PadicNumber::from_long(p, 1, M.min_precision()) / PadicNumber::from_long(p, 2, M.min_precision());
  PadicMatrix A = half * (Z.transpose() * D * Z);
  PadicMatrix K(p, 2 * g, g, M.min_precision());
  for (std::size_t i = 0; i < g; ++i) {
    for (std::size_t j = 0; j < g; ++j) {
      K(i, j) = A(i, j);
      K(g + i, j) = Z(i, j);
    }
  }
  return K;
}

/// Number of Frobenius eigenvalues that are p-adic units, read off the Newton polygon of the charpoly.
inline int count_unit_roots(const PadicMatrix& frob) {
  std::vector<PadicNumber> cp = characteristic_polynomial(frob);
  const int n = static_cast<int>(frob.rows());
  for (int k = 0; k <= n; ++k) {
    if (!cp[k].is_zero() && cp[k].valuation() == 0) return n - k;
  }
  return 0;
}

inline bool is_ordinary(const PadicMatrix& frob) { return 2 * count_unit_roots(frob) == static_cast<int>(frob.rows()); }

/// The basis of span(K) whose lower g x g block is the identity.
inline PadicMatrix echelon_complement(const PadicMatrix& K) {
  const std::size_t g = K.cols();
  const long p = K.prime();
  std::vector<std::size_t> lo, hi, cols;
  for (std::size_t i = 0; i < g; ++i) {
    lo.push_back(i);
    hi.push_back(g + i);
    cols.push_back(i);
  }
  PadicMatrix bottom = K.submatrix(hi, cols);
  PadicMatrix top = K.submatrix(lo, cols);
  // top * bottom^{-1} = (bottom^T)^{-1} top^T transposed.
  PadicMatrix A = solve_linear(bottom.transpose(), top.transpose()).transpose();
  PadicMatrix W(p, 2 * g, g, K.min_precision());
  for (std::size_t i = 0; i < g; ++i) {
    for (std::size_t j = 0; j < g; ++j) {
      W(i, j) = A(i, j);
      W(g + i, j) = i == j ? one(p, A(i, j).precision()) : PadicNumber::zero(p, A(i, j).precision());
    }
  }
  return W;
}

/// Unit root subspace modulo p^n: Frob^n applied to the coordinate vectors of eta_g..eta_{2g-1},
/// in echelon form.
inline PadicMatrix unit_root_subspace(const PadicMatrix& frob, long n) {
  if (!is_ordinary(frob)) throw DomainError("not ordinary at p");
  const std::size_t g = frob.rows() / 2;
  const long p = frob.prime();
  const long prec = frob.min_precision();
  PadicMatrix E(p, 2 * g, g, prec);
  for (std::size_t j = 0; j < g; ++j) E(g + j, j) = one(p, prec);
  return echelon_complement(frob.pow(n) * E);
}

class AuxiliaryFrobeniusCache;

/// Everything a height computation needs about one curve at one precision.
struct PrecomputedData {
  HyperellipticCurve curve;  // normal form at the working precision
  long target_precision = 0;
  long working_precision = 0;
  long series_order = 0;
  WMode w_mode = WMode::unit_root;
  MWFrobeniusData frobenius;
  EtaBasis eta;
  PadicMatrix Frob;
  PadicMatrix M;
  PadicMatrix W;
  long m = 0;   // ord_p det(Frob - pI)
  long m1 = 0;  // ord_p det(Phi - I)
  long m2 = 0;  // ord_p det(M)
  bool ordinary = false;
  std::shared_ptr<AuxiliaryFrobeniusCache> aux_cache;

  long prime() const { return curve.prime(); }
  int genus() const { return curve.genus(); }
};

/// Thread-safe insert-or-get store of Frobenius structures of auxiliary models, keyed by a string.
class AuxiliaryFrobeniusCache {
 public:
  template <class Build>
  std::shared_ptr<const MWFrobeniusData> get_or_build(const std::string& key, Build&& build) {
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = entries_.find(key);
      if (it != entries_.end()) return it->second;
    }
    auto value = std::make_shared<const MWFrobeniusData>(build());
    std::lock_guard<std::mutex> lock(mutex_);
    auto [it, inserted] = entries_.emplace(key, value);
    return it->second;
  }

  std::size_t size() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return entries_.size();
  }

 private:
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<const MWFrobeniusData>> entries_;
};

namespace detail {

inline PadicMatrix minus_scalar_identity(const PadicMatrix& A, long s) {
  PadicMatrix B = A;
  for (std::size_t i = 0; i < A.rows(); ++i) B(i, i) = B(i, i) - PadicNumber::from_long(A.prime(), s, A(i, i).precision() + 1);
  return B;
}

inline PrecomputedData precompute_at(const HyperellipticCurve& c0, long N, WMode mode, long n) {
  if (!c0.has_exact_coefficients() && c0.precision() < n) {
    throw PrecisionError("curve coefficients are known to fewer digits than the working precision needs", n);
  }
  PrecomputedData D;
  D.curve = c0.at_precision(n);
  D.target_precision = N;
  D.working_precision = n;
  D.series_order = default_series_order(D.curve.genus(), n);
  D.w_mode = mode;
  const long p = D.curve.prime();
  D.frobenius = frobenius_structure(D.curve, n);
  D.eta = eta_basis_constants(D.curve);
  D.Frob = eta_frobenius(D.frobenius.phi, D.eta);
  D.M = cup_product_matrix(D.curve, D.eta);
  D.m = determinant_valuation(minus_scalar_identity(D.Frob, p));
  D.m1 = determinant_valuation(minus_scalar_identity(D.frobenius.phi, 1));
  D.m2 = determinant_valuation(D.M);
  D.ordinary = is_ordinary(D.Frob);
  if (mode == WMode::unit_root) {
    D.W = unit_root_subspace(D.Frob, n);
  } else {
    D.W = echelon_complement(symplectic_complement(D.M));
  }
  D.aux_cache = std::make_shared<AuxiliaryFrobeniusCache>();
  return D;
}

inline long required_working_precision(long p, long N, long losses) {
  return N + losses + floor_log(p, 2 * (N + losses)) + 1;
}

}  // namespace detail

/// Runs the precomputation at a working precision inflated by the loss valuations m, m', m''.
inline PrecomputedData precompute(const HyperellipticCurve& c, long N, WMode mode) {
  if (!c.is_normal()) throw DomainError("precompute needs a monic even-degree model");
  if (N < 1) throw std::invalid_argument("target precision must be positive");
  const long p = c.prime();
  long n = detail::required_working_precision(p, N, 2);
  for (int round = 0; round < 8; ++round) {
    PrecomputedData D = detail::precompute_at(c, N, mode, n);
    long need = detail::required_working_precision(p, N, D.m + D.m1 + D.m2);
    if (need <= n) return D;
    n = need;
  }
  throw PrecisionError("working precision did not stabilize", n);
}

}  // namespace padic_heights
