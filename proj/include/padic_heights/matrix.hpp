#pragma once

#include <algorithm>
#include <cstdlib>
#include <vector>

#include "padic.hpp"

namespace padic_heights {

/// Dense matrix over Q_p with entries carrying their own absolute precision.
class PadicMatrix {
 public:
  PadicMatrix() = default;
  PadicMatrix(long p, std::size_t rows, std::size_t cols, long prec)
      : p_(p), rows_(rows), cols_(cols), a_(rows * cols, PadicNumber::zero(p, prec)) {}

  static PadicMatrix identity(long p, std::size_t n, long prec) {
    PadicMatrix m(p, n, n, prec);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = PadicNumber::from_long(p, 1, prec);
    return m;
  }

  static PadicMatrix column(const std::vector<PadicNumber>& v) {
    PadicMatrix m(v.empty() ? 0 : v[0].prime(), v.size(), 1, 0);
    for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
    return m;
  }

  long prime() const { return p_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  PadicNumber& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const PadicNumber& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  std::vector<PadicNumber> column_vector(std::size_t j) const {
    std::vector<PadicNumber> v;
    for (std::size_t i = 0; i < rows_; ++i) v.push_back((*this)(i, j));
    return v;
  }

  long min_precision() const {
    long m = 1L << 40;
    for (const auto& x : a_) m = std::min(m, x.precision());
    return m;
  }

  long min_valuation() const {
    long m = 1L << 40;
    for (const auto& x : a_) {
      if (!x.is_zero()) m = std::min(m, x.valuation());
    }
    return m;
  }

  bool is_zero() const {
    for (const auto& x : a_) {
      if (!x.is_zero()) return false;
    }
    return true;
  }

  PadicMatrix transpose() const {
    PadicMatrix t(p_, cols_, rows_, 0);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    }
    return t;
  }

  PadicMatrix truncated(long n) const {
    PadicMatrix t = *this;
    for (auto& x : t.a_) x = x.truncated(n);
    return t;
  }

  PadicMatrix submatrix(const std::vector<std::size_t>& rs, const std::vector<std::size_t>& cs) const {
    PadicMatrix s(p_, rs.size(), cs.size(), 0);
    for (std::size_t i = 0; i < rs.size(); ++i) {
      for (std::size_t j = 0; j < cs.size(); ++j) s(i, j) = (*this)(rs[i], cs[j]);
    }
    return s;
  }

  friend PadicMatrix operator+(const PadicMatrix& a, const PadicMatrix& b) {
    check_shape(a.rows_ == b.rows_ && a.cols_ == b.cols_);
    PadicMatrix c = a;
    for (std::size_t k = 0; k < c.a_.size(); ++k) c.a_[k] += b.a_[k];
    return c;
  }

  friend PadicMatrix operator-(const PadicMatrix& a, const PadicMatrix& b) {
    check_shape(a.rows_ == b.rows_ && a.cols_ == b.cols_);
    PadicMatrix c = a;
    for (std::size_t k = 0; k < c.a_.size(); ++k) c.a_[k] -= b.a_[k];
    return c;
  }

  friend PadicMatrix operator*(const PadicMatrix& a, const PadicMatrix& b) {
    check_shape(a.cols_ == b.rows_);
    PadicMatrix c(a.p_, a.rows_, b.cols_, 0);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t j = 0; j < b.cols_; ++j) {
        if (a.cols_ == 0) {
          c(i, j) = PadicNumber::zero(a.p_, 1L << 40);
          continue;
        }
        PadicNumber acc = a(i, 0) * b(0, j);
        for (std::size_t k = 1; k < a.cols_; ++k) acc += a(i, k) * b(k, j);
        c(i, j) = acc;
      }
    }
    return c;
  }

  friend PadicMatrix operator*(const PadicNumber& s, const PadicMatrix& a) {
    PadicMatrix c = a;
    for (auto& x : c.a_) x = s * x;
    return c;
  }

  PadicMatrix pow(long e) const {
    PadicMatrix result = identity(p_, rows_, min_precision());
    PadicMatrix base = *this;
    while (e > 0) {
      if (e & 1) result = result * base;
      e >>= 1;
      if (e > 0) base = base * base;
    }
    return result;
  }

 private:
  static void check_shape(bool ok) {
    if (!ok) throw std::invalid_argument("matrix shape mismatch");
  }

  long p_ = 0;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<PadicNumber> a_;
};

namespace detail {

/// Row index of the pivot in column j among rows >= start: minimal valuation, lowest index on ties.
inline std::size_t choose_pivot(const PadicMatrix& a, std::size_t j, std::size_t start) {
  std::size_t best = a.rows();
  long best_val = 0;
  for (std::size_t i = start; i < a.rows(); ++i) {
    if (a(i, j).is_zero()) continue;
    if (best == a.rows() || a(i, j).valuation() < best_val) {
      best = i;
      best_val = a(i, j).valuation();
    }
  }
  return best;
}

inline bool all_integral(const PadicMatrix& a) {
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (!a(i, j).is_zero() && a(i, j).valuation() < 0) return false;
    }
  }
  return true;
}

}  // namespace detail

/// Determinant by elimination with minimal-valuation pivoting.
inline PadicNumber determinant(const PadicMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant of a non-square matrix");
  const long p = m.prime();
  PadicMatrix a = m;
  const std::size_t n = a.rows();
  PadicNumber det = PadicNumber::from_long(p, 1, a.min_precision() + 1);
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t piv = detail::choose_pivot(a, j, j);
    if (piv == n) return PadicNumber::zero(p, a.min_precision());
    if (piv != j) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a(j, k), a(piv, k));
      det = -det;
    }
    det *= a(j, j);
    for (std::size_t i = j + 1; i < n; ++i) {
      if (a(i, j).is_zero()) continue;
      PadicNumber factor = a(i, j) / a(j, j);
      for (std::size_t k = j; k < n; ++k) a(i, k) -= factor * a(j, k);
    }
  }
  return det;
}

/// Valuation of the determinant; throws if it is indistinguishable from zero.
inline long determinant_valuation(const PadicMatrix& m) {
  PadicNumber d = determinant(m);
  if (d.is_zero()) throw PrecisionError("precision exhausted: determinant indistinguishable from zero");
  return d.valuation();
}

namespace detail {

inline PadicMatrix eliminate(const PadicMatrix& A, const PadicMatrix& b, long& det_val) {
  const std::size_t n = A.rows();
  const std::size_t m = b.cols();
  PadicMatrix a = A;
  PadicMatrix x = b;
  det_val = 0;
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t piv = choose_pivot(a, j, j);
    if (piv == n) throw PrecisionError("precision exhausted: singular matrix at working precision");
    if (piv != j) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a(j, k), a(piv, k));
      for (std::size_t k = 0; k < m; ++k) std::swap(x(j, k), x(piv, k));
    }
    det_val += a(j, j).valuation();
    for (std::size_t i = j + 1; i < n; ++i) {
      if (a(i, j).is_zero()) continue;
      PadicNumber factor = a(i, j) / a(j, j);
      for (std::size_t k = j; k < n; ++k) a(i, k) -= factor * a(j, k);
      for (std::size_t k = 0; k < m; ++k) x(i, k) -= factor * x(j, k);
    }
  }
  for (std::size_t j = n; j-- > 0;) {
    for (std::size_t k = 0; k < m; ++k) {
      PadicNumber acc = x(j, k);
      for (std::size_t l = j + 1; l < n; ++l) acc -= a(j, l) * x(l, k);
      x(j, k) = acc / a(j, j);
    }
  }
  return x;
}

inline PadicMatrix padded(const PadicMatrix& a, long n) {
  PadicMatrix t = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(i, j) = a(i, j).padded(n);
  return t;
}

}  // namespace detail

/// Solves A x = b by elimination with minimal-valuation pivoting (ties: lowest row index).
///
/// When A and b are integral, every entry of x is returned to precision
/// N - ord_p(det A) + min(0, ord_p(x_i)), with N the least input precision. Any integral lift of the
/// inputs has a solution agreeing with the true one to that precision, so entries falling short of it
/// are recomputed from lifted inputs carrying guard digits.
inline PadicMatrix solve_linear(const PadicMatrix& A, const PadicMatrix& b) {
  if (A.rows() != A.cols() || A.rows() != b.rows()) throw std::invalid_argument("solve_linear shape mismatch");
  long det_val = 0;
  PadicMatrix x = detail::eliminate(A, b, det_val);
  if (!detail::all_integral(A) || !detail::all_integral(b)) return x;
  const long N = std::min(A.min_precision(), b.min_precision());
  const long base = N - det_val;
  auto bound_of = [&](const PadicNumber& v) { return base + std::min(0L, v.valuation()); };
  bool short_entry = false;
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t k = 0; k < x.cols(); ++k) short_entry = short_entry || x(i, k).precision() < bound_of(x(i, k));
  if (!short_entry) return x;
  for (long guard = 2 * det_val + 2; guard <= 4 * (std::abs(N) + det_val) + 64; guard = 2 * guard + 1) {
    long lifted_val = 0;
    PadicMatrix y = detail::eliminate(detail::padded(A, N + guard), detail::padded(b, N + guard), lifted_val);
    bool enough = true;
    for (std::size_t i = 0; i < y.rows() && enough; ++i) {
      for (std::size_t k = 0; k < y.cols(); ++k) {
        PadicNumber& yi = y(i, k);
        const long bound = bound_of(yi);
        if (yi.precision() < bound) {
          enough = false;
          break;
        }
        yi = x(i, k).precision() >= bound ? x(i, k) : yi.truncated(bound);
      }
    }
    if (enough) return y;
  }
  return x;
}

inline PadicMatrix inverse(const PadicMatrix& A) {
  return solve_linear(A, PadicMatrix::identity(A.prime(), A.rows(), A.min_precision()));
}

/// Characteristic polynomial det(tI - A) by the division-free Berkowitz algorithm,
/// coefficients by increasing degree.
inline std::vector<PadicNumber> characteristic_polynomial(const PadicMatrix& A) {
  const long p = A.prime();
  const std::size_t n = A.rows();
  const long prec = A.min_precision();
  auto one = PadicNumber::from_long(p, 1, prec + 1);
  std::vector<PadicNumber> vect{one, -A(0, 0)};
  for (std::size_t r = 1; r < n; ++r) {
    std::vector<PadicNumber> q{one, -A(r, r)};
    std::vector<PadicNumber> akc;
    for (std::size_t i = 0; i < r; ++i) akc.push_back(A(i, r));
    for (std::size_t k = 0; k < r; ++k) {
      PadicNumber dot = A(r, 0) * akc[0];
      for (std::size_t i = 1; i < r; ++i) dot += A(r, i) * akc[i];
      q.push_back(-dot);
      std::vector<PadicNumber> next;
      for (std::size_t i = 0; i < r; ++i) {
        PadicNumber acc = A(i, 0) * akc[0];
        for (std::size_t l = 1; l < r; ++l) acc += A(i, l) * akc[l];
        next.push_back(acc);
      }
      akc = std::move(next);
    }
    std::vector<PadicNumber> nv;
    for (std::size_t i = 0; i < r + 2; ++i) {
      PadicNumber acc = PadicNumber::zero(p, prec + 1);
      bool first = true;
      for (std::size_t j = 0; j <= std::min(i, r); ++j) {
        if (i - j >= q.size() || j >= vect.size()) continue;
        PadicNumber term = q[i - j] * vect[j];
        acc = first ? term : acc + term;
        first = false;
      }
      nv.push_back(acc);
    }
    vect = std::move(nv);
  }
  std::reverse(vect.begin(), vect.end());
  return vect;
}

}  // namespace padic_heights
