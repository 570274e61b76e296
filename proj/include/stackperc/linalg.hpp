#pragma once

// Exact linear algebra used throughout: fraction-free (Bareiss) rank over the
// integers, Gaussian elimination over prime fields, and an incremental basis
// for greedy column selection.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace stackperc {

using BigInt = boost::multiprecision::cpp_int;

/// Two primes near 2^61 used for modular rank cross-checks.
inline constexpr std::uint64_t kPrime61a = 2305843009213693951ull;  // 2^61 - 1
inline constexpr std::uint64_t kPrime61b = 2305843009213693921ull;  // 2^61 - 31
/// 62-bit prime used by algebraic shifting.
inline constexpr std::uint64_t kPrime62 = 4611686018427387847ull;  // 2^62 - 57

/// Row-major dense matrix.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  Matrix transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  /// Appends columns of `other` (same row count).
  Matrix hconcat(const Matrix& other) const {
    if (other.rows_ != rows_) throw std::invalid_argument("hconcat: row count mismatch");
    Matrix out(rows_, cols_ + other.cols_);
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t c = 0; c < cols_; ++c) out(r, c) = (*this)(r, c);
      for (std::size_t c = 0; c < other.cols_; ++c) out(r, cols_ + c) = other(r, c);
    }
    return out;
  }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

// ---------------------------------------------------------------------------
// Prime field arithmetic (p < 2^63).

class PrimeField {
 public:
  explicit constexpr PrimeField(std::uint64_t p) : p_(p) {}

  constexpr std::uint64_t modulus() const noexcept { return p_; }

  std::uint64_t reduce(std::int64_t v) const noexcept {
    std::int64_t r = v % static_cast<std::int64_t>(p_);
    return static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(p_) : r);
  }
  std::uint64_t reduce(const BigInt& v) const {
    BigInt r = v % p_;
    if (r < 0) r += p_;
    return r.convert_to<std::uint64_t>();
  }
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const noexcept {
    std::uint64_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const noexcept {
    return a >= b ? a - b : a + p_ - b;
  }
  std::uint64_t neg(std::uint64_t a) const noexcept { return a == 0 ? 0 : p_ - a; }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const noexcept {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p_);
  }
  std::uint64_t pow(std::uint64_t a, std::uint64_t e) const noexcept {
    std::uint64_t r = 1 % p_;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }
  std::uint64_t inv(std::uint64_t a) const {
    if (a == 0) throw std::domain_error("PrimeField::inv: zero has no inverse");
    return pow(a, p_ - 2);
  }

 private:
  std::uint64_t p_;
};

/// Rank of an integer matrix over GF(p).
template <class T>
std::size_t rank_mod(const Matrix<T>& m, std::uint64_t p) {
  const PrimeField field(p);
  Matrix<std::uint64_t> a(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) a(r, c) = field.reduce(m(r, c));

  std::size_t rank = 0;
  for (std::size_t c = 0; c < a.cols() && rank < a.rows(); ++c) {
    std::size_t pivot = rank;
    while (pivot < a.rows() && a(pivot, c) == 0) ++pivot;
    if (pivot == a.rows()) continue;
    if (pivot != rank)
      for (std::size_t k = c; k < a.cols(); ++k) std::swap(a(pivot, k), a(rank, k));
    const std::uint64_t inv = field.inv(a(rank, c));
    for (std::size_t r = rank + 1; r < a.rows(); ++r) {
      if (a(r, c) == 0) continue;
      const std::uint64_t factor = field.mul(a(r, c), inv);
      for (std::size_t k = c; k < a.cols(); ++k)
        a(r, k) = field.sub(a(r, k), field.mul(factor, a(rank, k)));
    }
    ++rank;
  }
  return rank;
}

namespace detail {

// Fraction-free elimination. Returns nullopt if an intermediate value
// overflows T (only possible for fixed-width T).
template <class T>
std::optional<std::size_t> bareiss_rank(Matrix<T> a) {
  constexpr bool kChecked = std::is_integral_v<T> || std::is_same_v<T, __int128>;
  T prev = 1;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < a.cols() && rank < a.rows(); ++c) {
    std::size_t pivot = rank;
    while (pivot < a.rows() && a(pivot, c) == 0) ++pivot;
    if (pivot == a.rows()) continue;
    if (pivot != rank)
      for (std::size_t k = 0; k < a.cols(); ++k) std::swap(a(pivot, k), a(rank, k));
    for (std::size_t r = rank + 1; r < a.rows(); ++r) {
      for (std::size_t k = c + 1; k < a.cols(); ++k) {
        if constexpr (kChecked) {
          T x, y, diff;
          if (__builtin_mul_overflow(a(rank, c), a(r, k), &x)) return std::nullopt;
          if (__builtin_mul_overflow(a(r, c), a(rank, k), &y)) return std::nullopt;
          if (__builtin_sub_overflow(x, y, &diff)) return std::nullopt;
          a(r, k) = diff / prev;
        } else {
          a(r, k) = (a(rank, c) * a(r, k) - a(r, c) * a(rank, k)) / prev;
        }
      }
      a(r, c) = 0;
    }
    prev = a(rank, c);
    ++rank;
  }
  return rank;
}

}  // namespace detail

/// Exact rank over Q of an integer matrix by Bareiss elimination. Runs in
/// 128-bit arithmetic and falls back to arbitrary precision on overflow.
template <class T>
std::size_t rank_exact(const Matrix<T>& m) {
  if constexpr (std::is_integral_v<T>) {
    Matrix<__int128> narrow(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r)
      for (std::size_t c = 0; c < m.cols(); ++c) narrow(r, c) = m(r, c);
    if (auto r = detail::bareiss_rank(std::move(narrow))) return *r;
    Matrix<BigInt> wide(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r)
      for (std::size_t c = 0; c < m.cols(); ++c) wide(r, c) = m(r, c);
    return *detail::bareiss_rank(std::move(wide));
  } else {
    return *detail::bareiss_rank(m);
  }
}

/// Exact determinant of a small square integer matrix (Bareiss).
inline BigInt determinant(Matrix<BigInt> a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("determinant: matrix not square");
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  BigInt prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t pivot = k + 1;
      while (pivot < n && a(pivot, k) == 0) ++pivot;
      if (pivot == n) return 0;
      for (std::size_t c = 0; c < n; ++c) std::swap(a(pivot, c), a(k, c));
      sign = -sign;
    }
    for (std::size_t r = k + 1; r < n; ++r) {
      for (std::size_t c = k + 1; c < n; ++c)
        a(r, c) = (a(k, k) * a(r, c) - a(r, k) * a(k, c)) / prev;
    }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

/// Determinant over GF(p) of a small square matrix given as field elements.
inline std::uint64_t determinant_mod(Matrix<std::uint64_t> a, const PrimeField& field) {
  const std::size_t n = a.rows();
  std::uint64_t det = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    while (pivot < n && a(pivot, k) == 0) ++pivot;
    if (pivot == n) return 0;
    if (pivot != k) {
      for (std::size_t c = k; c < n; ++c) std::swap(a(pivot, c), a(k, c));
      det = field.neg(det);
    }
    det = field.mul(det, a(k, k));
    const std::uint64_t inv = field.inv(a(k, k));
    for (std::size_t r = k + 1; r < n; ++r) {
      if (a(r, k) == 0) continue;
      const std::uint64_t f = field.mul(a(r, k), inv);
      for (std::size_t c = k; c < n; ++c) a(r, c) = field.sub(a(r, c), field.mul(f, a(k, c)));
    }
  }
  return det;
}

/// Incrementally maintained row-echelon basis over GF(p). `try_insert`
/// reports whether a vector is independent of everything inserted so far.
class ModularBasis {
 public:
  ModularBasis(std::size_t dim, std::uint64_t p) : dim_(dim), field_(p) {}

  std::size_t size() const noexcept { return rows_.size(); }
  std::size_t dimension() const noexcept { return dim_; }

  bool try_insert(std::vector<std::uint64_t> v) {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const std::uint64_t coef = v[pivots_[i]];
      if (coef == 0) continue;
      const auto& row = rows_[i];
      for (std::size_t k = pivots_[i]; k < dim_; ++k)
        if (row[k] != 0) v[k] = field_.sub(v[k], field_.mul(coef, row[k]));
    }
    std::size_t pivot = 0;
    while (pivot < dim_ && v[pivot] == 0) ++pivot;
    if (pivot == dim_) return false;
    const std::uint64_t inv = field_.inv(v[pivot]);
    for (std::size_t k = pivot; k < dim_; ++k) v[k] = field_.mul(v[k], inv);
    // Keep the basis fully reduced so later reductions need one pass.
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const std::uint64_t coef = rows_[i][pivot];
      if (coef == 0) continue;
      for (std::size_t k = pivot; k < dim_; ++k)
        if (v[k] != 0) rows_[i][k] = field_.sub(rows_[i][k], field_.mul(coef, v[k]));
    }
    rows_.push_back(std::move(v));
    pivots_.push_back(pivot);
    return true;
  }

 private:
  std::size_t dim_;
  PrimeField field_;
  std::vector<std::vector<std::uint64_t>> rows_;
  std::vector<std::size_t> pivots_;
};

}  // namespace stackperc
