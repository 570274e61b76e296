#pragma once

// Exterior algebraic shifting of the top dimension of a pure d-complex over
// GF(p), with a seeded random matrix standing in for a generic one.

#include "stackperc/combinatorics.hpp"
#include "stackperc/linalg.hpp"
#include "stackperc/pedigree.hpp"
#include "stackperc/rng.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace stackperc {

/// Largest vertex count accepted by shift().
inline constexpr int kShiftMaxVertices = 16;

class GenericityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An n×n matrix with independent uniform entries of GF(p), reproducible from
/// (n, p, seed). p defaults to 2^62 - 57.
class ShiftContext {
 public:
  ShiftContext(int n, std::uint64_t seed, std::uint64_t prime = kPrime62)
      : n_(n), seed_(seed), field_(prime), x_(static_cast<std::size_t>(n), static_cast<std::size_t>(n)) {
    if (n < 1 || n > kShiftMaxVertices)
      throw std::invalid_argument("ShiftContext: n must be in [1, " + std::to_string(kShiftMaxVertices) + "]");
    SplitMix64 rng(seed);
    for (std::size_t r = 0; r < x_.rows(); ++r)
      for (std::size_t c = 0; c < x_.cols(); ++c) x_(r, c) = rng.below(prime);
  }

  int n() const noexcept { return n_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t prime() const noexcept { return field_.modulus(); }
  const PrimeField& field() const noexcept { return field_; }
  const Matrix<std::uint64_t>& x() const noexcept { return x_; }

  /// det X[rows g, columns f] over GF(p).
  std::uint64_t minor(const Face& g, const Face& f) const {
    const auto k = static_cast<std::size_t>(g.size());
    Matrix<std::uint64_t> m(k, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        m(i, j) = x_(static_cast<std::size_t>(g[static_cast<int>(i)] - 1), static_cast<std::size_t>(f[static_cast<int>(j)] - 1));
    return determinant_mod(std::move(m), field_);
  }

 private:
  int n_;
  std::uint64_t seed_;
  PrimeField field_;
  Matrix<std::uint64_t> x_;
};

/// A family of (d+1)-sets, kept sorted lexicographically.
struct ShiftedFamily {
  int d = 0;
  std::vector<Face> faces;

  bool contains(const Face& f) const { return std::binary_search(faces.begin(), faces.end(), f); }
  std::size_t size() const noexcept { return faces.size(); }

  friend bool operator==(const ShiftedFamily&, const ShiftedFamily&) = default;
};

namespace detail {

// All k-subsets of [n] in lexicographic order.
inline std::vector<Face> lex_subsets(int n, int k) {
  std::vector<Face> out;
  std::vector<int> v(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) v[static_cast<std::size_t>(i)] = i + 1;
  if (k > n) return out;
  while (true) {
    out.emplace_back(v);
    int i = k - 1;
    while (i >= 0 && v[static_cast<std::size_t>(i)] == n - k + i + 1) --i;
    if (i < 0) break;
    ++v[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) v[static_cast<std::size_t>(j)] = v[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

}  // namespace detail

/// Δ(K): the lexicographically greedy basis of the column space of the
/// |K| × C(n, d+1) matrix of minors det X[g, f] (g ∈ K, f a (d+1)-subset of
/// [n]). Columns are scanned smallest-first; the scan stops once |K|
/// columns are kept.
inline ShiftedFamily shift(std::vector<Face> K, const ShiftContext& ctx) {
  std::sort(K.begin(), K.end());
  K.erase(std::unique(K.begin(), K.end()), K.end());
  if (K.empty()) throw std::invalid_argument("shift: empty complex");
  const int k = K.front().size();
  for (const Face& g : K) {
    if (g.size() != k) throw FaceError("shift: faces of mixed dimension");
    if (g.back() > ctx.n()) throw FaceError("shift: face " + g.to_string() + " exceeds n = " + std::to_string(ctx.n()));
  }
  ShiftedFamily out{k - 1, {}};
  ModularBasis basis(K.size(), ctx.prime());
  for (const Face& f : detail::lex_subsets(ctx.n(), k)) {
    std::vector<std::uint64_t> col(K.size());
    for (std::size_t r = 0; r < K.size(); ++r) col[r] = ctx.minor(K[r], f);
    if (basis.try_insert(std::move(col))) {
      out.faces.push_back(f);
      if (out.faces.size() == K.size()) break;
    }
  }
  return out;
}

/// shift() under two independent seeds derived from `seed`; a disagreement
/// means one of the matrices was not generic and raises GenericityError.
inline ShiftedFamily shift_confirmed(const std::vector<Face>& K, int n, std::uint64_t seed) {
  const ShiftedFamily a = shift(K, ShiftContext(n, derive_seed(seed, 0)));
  const ShiftedFamily b = shift(K, ShiftContext(n, derive_seed(seed, 1)));
  if (!(a == b)) throw GenericityError("shift: two seeds disagree; retry with a fresh seed");
  return a;
}

/// Closed under replacing any v ∈ f by a smaller u ∉ f.
inline bool is_shifted(const ShiftedFamily& F) {
  for (const Face& f : F.faces) {
    for (int i = 0; i < f.size(); ++i) {
      for (int u = 1; u < f[i]; ++u) {
        if (f.contains(u)) continue;
        if (!F.contains(f.replace(f[i], u))) return false;
      }
    }
  }
  return true;
}

/// f ≤_P g: componentwise comparison of the sorted labels.
inline bool dominance(const Face& f, const Face& g) {
  if (f.size() != g.size()) throw FaceError("dominance: faces of different sizes");
  for (int i = 0; i < f.size(); ++i)
    if (f[i] > g[i]) return false;
  return true;
}

/// b_d(Δ) = number of faces of a shifted family that avoid vertex 1; equals
/// β_d of the shifted complex.
inline std::size_t b_top(const ShiftedFamily& F) {
  if (!is_shifted(F)) throw std::invalid_argument("b_top: family is not shifted");
  return static_cast<std::size_t>(std::count_if(F.faces.begin(), F.faces.end(), [](const Face& f) { return !f.contains(1); }));
}

/// Relabels the vertex support of K order-preservingly onto [v]; returns
/// the relabeled faces and v.
inline std::pair<std::vector<Face>, int> compact_labels(const std::vector<Face>& K) {
  const auto support = label_union(K);
  std::map<int, int> to;
  for (std::size_t i = 0; i < support.size(); ++i) to[support[i]] = static_cast<int>(i) + 1;
  std::vector<Face> out;
  for (const Face& f : K) {
    std::vector<int> v;
    for (int x : f) v.push_back(to.at(x));
    out.emplace_back(v);
  }
  return {out, static_cast<int>(support.size())};
}

/// For the vertex set K of a pedigree with s >= 1, relabeled onto
/// [s+d+1]: whether v0 = [d+1] ∪ {s+d+1} \ {2} lies in Δ(K).
inline bool shift_contains_v0(const std::vector<Face>& K, std::uint64_t seed) {
  if (K.empty()) throw std::invalid_argument("shift_contains_v0: empty vertex set");
  const int d = K.front().size() - 1;
  auto [faces, v] = compact_labels(K);
  const int s = v - (d + 1);
  if (s < 1) throw std::invalid_argument("shift_contains_v0: needs s >= 1");
  const Face v0 = Face::initial(d + 1).without(2).with(s + d + 1);
  return shift_confirmed(faces, v, seed).contains(v0);
}

inline bool shift_contains_v0(const Pedigree& p, std::uint64_t seed) { return shift_contains_v0(p.faces(), seed); }

/// 𝒟_Γ(f) = #{w > y_d : {y_1, ..., y_d, w} ∈ Δ(Γ)} for f = {y_1 < ... < y_{d+1}},
/// with Γ shifted on the vertex set [n].
inline std::size_t nevo_d(const std::vector<Face>& gamma, const Face& f, int n, std::uint64_t seed) {
  const ShiftedFamily delta = shift_confirmed(gamma, n, seed);
  const Face head = f.without_index(f.size() - 1);
  std::size_t count = 0;
  for (int w = head.back() + 1; w <= n; ++w)
    if (delta.contains(head.with(w))) ++count;
  return count;
}

struct NevoCheck {
  bool in_union_shift = false;     // f ∈ Δ(Γ1 ∪ Γ2)
  int gap = 0;                     // y_{d+1} - y_d
  std::size_t d1 = 0, d2 = 0, d12 = 0;
  bool criterion = false;          // gap <= d1 + d2 - d12
  bool holds() const noexcept { return in_union_shift == criterion; }
};

/// Both sides of the union-along-a-simplex characterization of Δ(Γ1 ∪ Γ2).
/// Γ1, Γ2 and f must live on the labels [n]; the top-dimensional faces of
/// Γ1 and Γ2 must share exactly one face.
inline NevoCheck verify_nevo(const std::vector<Face>& g1, const std::vector<Face>& g2, const Face& f, int n,
                             std::uint64_t seed) {
  const std::set<Face> s1(g1.begin(), g1.end()), s2(g2.begin(), g2.end());
  std::vector<Face> common, all;
  std::set_intersection(s1.begin(), s1.end(), s2.begin(), s2.end(), std::back_inserter(common));
  std::set_union(s1.begin(), s1.end(), s2.begin(), s2.end(), std::back_inserter(all));
  if (common.size() != 1) throw std::invalid_argument("verify_nevo: intersection is not a single d-face");
  NevoCheck c;
  c.in_union_shift = shift_confirmed(all, n, seed).contains(f);
  c.gap = f[f.size() - 1] - f[f.size() - 2];
  c.d1 = nevo_d(g1, f, n, seed);
  c.d2 = nevo_d(g2, f, n, seed);
  c.d12 = nevo_d(common, f, n, seed);
  c.criterion = static_cast<std::int64_t>(c.gap) <=
                static_cast<std::int64_t>(c.d1) + static_cast<std::int64_t>(c.d2) - static_cast<std::int64_t>(c.d12);
  return c;
}

/// {"d":…, "faces":[[…],…]}, faces sorted lexicographically.
inline nlohmann::json to_json(const ShiftedFamily& F) {
  nlohmann::json faces = nlohmann::json::array();
  for (const Face& f : F.faces) faces.push_back(f.labels());
  return {{"d", F.d}, {"faces", std::move(faces)}};
}

}  // namespace stackperc
