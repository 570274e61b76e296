#pragma once

// Fuss–Catalan numbers, (d+1)-ary tree shapes, the growth constant α_d, the
// percolation threshold scale, and the density root γ̂ of x^{d+1} - x + γ.

#include "stackperc/linalg.hpp"
#include "stackperc/rng.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace stackperc {

using BigRational = boost::multiprecision::cpp_rational;

inline void require_dimension(int d) {
  if (d < 2) throw std::invalid_argument("dimension d must be >= 2, got " + std::to_string(d));
}

inline BigInt big_binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  BigInt r = 1;
  for (unsigned i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

/// C_d(s) = C((d+1)s, s) / (ds + 1).
inline BigInt fuss_catalan(int d, int s) {
  require_dimension(d);
  if (s < 0) throw std::invalid_argument("fuss_catalan: s must be >= 0");
  const auto ds = static_cast<unsigned>(d) * static_cast<unsigned>(s);
  return big_binomial(ds + static_cast<unsigned>(s), static_cast<unsigned>(s)) / (ds + 1);
}

/// C_d(0..s_max) from the convolution recursion
/// C_d(s) = sum_{s_1+...+s_{d+1}=s-1} prod_j C_d(s_j).
inline std::vector<BigInt> fuss_catalan_by_recursion(int d, int s_max) {
  require_dimension(d);
  std::vector<BigInt> c(static_cast<std::size_t>(s_max + 1), 0);
  c[0] = 1;
  for (int s = 1; s <= s_max; ++s) {
    // power[t] = [x^t] F(x)^j built up to j = d+1 over known coefficients.
    std::vector<BigInt> power(static_cast<std::size_t>(s), 0);
    power[0] = 1;
    for (int j = 0; j < d + 1; ++j) {
      std::vector<BigInt> next(static_cast<std::size_t>(s), 0);
      for (int a = 0; a < s; ++a) {
        if (power[static_cast<std::size_t>(a)] == 0) continue;
        for (int b = 0; a + b < s; ++b) next[static_cast<std::size_t>(a + b)] += power[static_cast<std::size_t>(a)] * c[static_cast<std::size_t>(b)];
      }
      power = std::move(next);
    }
    c[static_cast<std::size_t>(s)] = power[static_cast<std::size_t>(s - 1)];
  }
  return c;
}

/// α_d = (d+1)^{d+1} / d^d, exactly.
inline BigRational alpha(int d) {
  require_dimension(d);
  BigInt num = boost::multiprecision::pow(BigInt(d + 1), static_cast<unsigned>(d + 1));
  BigInt den = boost::multiprecision::pow(BigInt(d), static_cast<unsigned>(d));
  return BigRational(num, den);
}

inline double alpha_value(int d) { return alpha(d).convert_to<double>(); }

/// α_d^{-1/d}: the critical value of γ in p = γ n^{-1/d}.
inline double critical_gamma(int d) { return std::pow(alpha_value(d), -1.0 / d); }

/// (α_d n)^{-1/d}; rejected when the value is not below 1.
inline double critical_p(int d, int n) {
  require_dimension(d);
  if (n <= d + 1) throw std::invalid_argument("critical_p: need n > d + 1");
  const double p = std::pow(alpha_value(d) * n, -1.0 / d);
  if (p >= 1.0) throw std::invalid_argument("critical_p: (alpha_d n)^(-1/d) >= 1, n too small");
  return p;
}

/// Q_γ(x) = x^{d+1} - x + γ
inline double q_gamma(int d, double gamma, double x) { return std::pow(x, d + 1) - x + gamma; }

/// Smallest positive root γ̂ of Q_γ for 0 <= γ <= α_d^{-1/d}, by bisection on
/// [0, (d+1)^{-1/d}] where Q_γ is strictly decreasing. At the critical value
/// itself the root is the double root (d+1)^{-1/d}.
inline double hat_gamma(int d, double gamma) {
  require_dimension(d);
  const double crit = critical_gamma(d);
  if (!(gamma >= 0.0)) throw std::invalid_argument("hat_gamma: gamma must be >= 0");
  // Boundary tolerance: α_d^{-1/d} itself is only known to rounding.
  if (gamma > crit * (1 + 1e-12))
    throw std::invalid_argument("hat_gamma: gamma = " + std::to_string(gamma) +
                                " is supercritical (alpha_d^(-1/d) = " + std::to_string(crit) + "), no root");
  if (gamma == 0.0) return 0.0;
  double lo = 0.0;
  double hi = std::pow(d + 1.0, -1.0 / d);
  if (q_gamma(d, gamma, hi) >= 0.0) return hi;
  while (hi - lo > 1e-16 && lo < std::nextafter(hi, 0.0)) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (q_gamma(d, gamma, mid) > 0.0 ? lo : hi) = mid;
  }
  return std::abs(q_gamma(d, gamma, lo)) <= std::abs(q_gamma(d, gamma, hi)) ? lo : hi;
}

/// Partial sum sum_{s <= s_max} C_d(s) γ^{ds+1} of the generating function.
inline double density_series(int d, double gamma, int s_max) {
  require_dimension(d);
  double sum = 0.0;
  for (int s = 0; s <= s_max; ++s) {
    const double term = fuss_catalan(d, s).convert_to<double>() * std::pow(gamma, d * s + 1);
    sum += term;
  }
  return sum;
}

// ---------------------------------------------------------------------------
// (d+1)-ary tree shapes

/// A rooted tree whose internal nodes have exactly d + 1 ordered children,
/// stored canonically as the preorder string of arities ('0' leaf, '1'
/// internal).
class TreeShape {
 public:
  TreeShape(int d, std::string preorder) : d_(d), code_(std::move(preorder)) {
    int need = 1;
    for (char c : code_) {
      if (need == 0 || (c != '0' && c != '1')) throw std::invalid_argument("TreeShape: malformed preorder code");
      need += (c == '1') ? d_ : -1;
    }
    if (need != 0) throw std::invalid_argument("TreeShape: incomplete preorder code");
  }

  static TreeShape leaf(int d) { return {d, "0"}; }

  int d() const noexcept { return d_; }
  const std::string& preorder() const noexcept { return code_; }
  int internal_count() const noexcept { return static_cast<int>(std::count(code_.begin(), code_.end(), '1')); }
  int leaf_count() const noexcept { return static_cast<int>(code_.size()) - internal_count(); }

  /// Preorder codes of the d + 1 root subtrees (empty for a leaf).
  std::vector<TreeShape> children() const {
    std::vector<TreeShape> out;
    if (code_ == "0") return out;
    std::size_t pos = 1;
    for (int j = 0; j <= d_; ++j) {
      const std::size_t start = pos;
      int need = 1;
      while (need > 0) need += (code_[pos++] == '1') ? d_ : -1;
      out.emplace_back(d_, code_.substr(start, pos - start));
    }
    return out;
  }

  friend bool operator==(const TreeShape&, const TreeShape&) = default;
  friend auto operator<=>(const TreeShape& a, const TreeShape& b) { return a.code_ <=> b.code_; }

 private:
  int d_;
  std::string code_;
};

inline constexpr std::uint64_t kTreeEnumerationLimit = 1'000'000;

namespace detail {

inline void compose_trees(int d, int s, std::map<int, std::vector<std::string>>& memo) {
  if (memo.count(s)) return;
  std::vector<std::string> out;
  if (s == 0) {
    out.push_back("0");
  } else {
    // Distribute s - 1 internal nodes over d + 1 ordered subtrees.
    std::vector<int> sizes(static_cast<std::size_t>(d + 1), 0);
    auto rec = [&](auto&& self, int j, int left, std::string prefix) -> void {
      if (j == d) {
        compose_trees(d, left, memo);
        for (const auto& t : memo.at(left)) out.push_back(prefix + t);
        return;
      }
      for (int k = 0; k <= left; ++k) {
        compose_trees(d, k, memo);
        for (const auto& t : memo.at(k)) self(self, j + 1, left - k, prefix + t);
      }
    };
    rec(rec, 0, s - 1, "1");
  }
  memo.emplace(s, std::move(out));
}

}  // namespace detail

/// All (d+1)-ary trees with s internal nodes (exactly C_d(s) of them), by
/// recursive composition over the child subtree sizes.
inline std::vector<TreeShape> enumerate_trees(int d, int s) {
  require_dimension(d);
  if (s < 0) throw std::invalid_argument("enumerate_trees: s must be >= 0");
  const BigInt count = fuss_catalan(d, s);
  if (count > kTreeEnumerationLimit)
    throw std::length_error("enumerate_trees: C_d(s) = " + count.str() + " exceeds the enumeration limit of " +
                            std::to_string(kTreeEnumerationLimit));
  std::map<int, std::vector<std::string>> memo;
  detail::compose_trees(d, s, memo);
  std::vector<TreeShape> out;
  out.reserve(memo.at(s).size());
  for (const auto& code : memo.at(s)) out.emplace_back(d, code);
  return out;
}

/// Uniform random (d+1)-ary tree with s internal nodes (cycle lemma: a
/// uniformly shuffled arity sequence has exactly one rotation that is a
/// valid preorder code).
inline TreeShape random_tree(int d, int s, SplitMix64& rng) {
  require_dimension(d);
  std::string code(static_cast<std::size_t>(s), '1');
  code.append(static_cast<std::size_t>(d * s + 1), '0');
  shuffle(std::span<char>(code), rng);
  // The valid rotation starts right after the first position where the
  // running sum of (arity - 1) attains its minimum.
  long sum = 0, best = 1;
  std::size_t start = 0;
  for (std::size_t i = 0; i < code.size(); ++i) {
    sum += (code[i] == '1') ? d : -1;
    if (sum < best) {
      best = sum;
      start = i + 1;
    }
  }
  std::rotate(code.begin(), code.begin() + static_cast<std::ptrdiff_t>(start % code.size()), code.end());
  return {d, code};
}

}  // namespace stackperc
