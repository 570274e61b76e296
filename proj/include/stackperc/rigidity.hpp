#pragma once

// Cofactor vectors w_f of d-simplices spanned by points in R^d, the matrix
// A_K with columns w_f, and exact rank checks for pedigree leaf sets.

#include "stackperc/combinatorics.hpp"
#include "stackperc/linalg.hpp"
#include "stackperc/pedigree.hpp"
#include "stackperc/rng.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace stackperc {

/// Integer coordinates are drawn from [-kPointRange, kPointRange].
inline constexpr std::int64_t kPointRange = 1000;

/// Points v_1, ..., v_count in Z^d.
class PointConfig {
 public:
  PointConfig(int d, std::vector<std::vector<std::int64_t>> points) : d_(d), points_(std::move(points)) {
    for (const auto& p : points_)
      if (p.size() != static_cast<std::size_t>(d)) throw std::invalid_argument("PointConfig: point of wrong dimension");
  }

  /// Seeded random configuration of `count` points, redrawn until every
  /// (d+1)-subset spans a nondegenerate simplex.
  static PointConfig random(int d, int count, std::uint64_t seed) {
    if (d < 1 || count < d + 1) throw std::invalid_argument("PointConfig::random: need count >= d + 1");
    SplitMix64 rng(seed);
    for (int attempt = 0; attempt < 64; ++attempt) {
      std::vector<std::vector<std::int64_t>> pts(static_cast<std::size_t>(count), std::vector<std::int64_t>(static_cast<std::size_t>(d)));
      for (auto& p : pts)
        for (auto& x : p) x = static_cast<std::int64_t>(rng.below(2 * kPointRange + 1)) - kPointRange;
      PointConfig cfg(d, std::move(pts));
      if (!cfg.degenerate_face()) return cfg;
    }
    throw std::runtime_error("PointConfig::random: no configuration in general position after 64 attempts");
  }

  int d() const noexcept { return d_; }
  int count() const noexcept { return static_cast<int>(points_.size()); }
  const std::vector<std::int64_t>& point(int label) const { return points_.at(static_cast<std::size_t>(label - 1)); }

  /// First (d+1)-subset (colex order) with det A_f = 0, or nullopt when the
  /// configuration is in general position.
  std::optional<Face> degenerate_face() const;

 private:
  int d_;
  std::vector<std::vector<std::int64_t>> points_;
};

/// A_f: column j is v_{x_j} with a 1 appended (coordinate rows 1..d, then
/// the row of ones).
inline Matrix<BigInt> face_matrix(const Face& f, const PointConfig& cfg) {
  const int d = cfg.d();
  if (f.size() != d + 1) throw FaceError("face_matrix: face " + f.to_string() + " is not a d-face");
  if (f.back() > cfg.count()) throw FaceError("face_matrix: label " + std::to_string(f.back()) + " has no point");
  Matrix<BigInt> a(static_cast<std::size_t>(d + 1), static_cast<std::size_t>(d + 1));
  for (int j = 0; j <= d; ++j) {
    const auto& v = cfg.point(f[j]);
    for (int i = 0; i < d; ++i) a(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = v[static_cast<std::size_t>(i)];
    a(static_cast<std::size_t>(d), static_cast<std::size_t>(j)) = 1;
  }
  return a;
}

inline std::optional<Face> PointConfig::degenerate_face() const {
  const ColexRanker rk(count(), d_ + 1);
  for (std::uint64_t r = 0; r < rk.total(); ++r) {
    const Face f = rk.unrank(r);
    if (determinant(face_matrix(f, *this)) == 0) return f;
  }
  return std::nullopt;
}

namespace detail {

inline Matrix<BigInt> drop(const Matrix<BigInt>& a, std::size_t row, std::size_t col) {
  Matrix<BigInt> m(a.rows() - 1, a.cols() - 1);
  for (std::size_t r = 0, rr = 0; r < a.rows(); ++r) {
    if (r == row) continue;
    for (std::size_t c = 0, cc = 0; c < a.cols(); ++c) {
      if (c == col) continue;
      m(rr, cc++) = a(r, c);
    }
    ++rr;
  }
  return m;
}

}  // namespace detail

/// w_f ∈ Z^{count × d}, flattened row-major: entry (x_j, i) = C_{i,j}(A_f)
/// = (-1)^{i+j} det(A_f without row i and column j) for coordinates
/// i = 1..d; rows of labels outside f are zero.
inline std::vector<BigInt> cofactor_vector(const Face& f, const PointConfig& cfg) {
  const int d = cfg.d();
  const auto a = face_matrix(f, cfg);
  std::vector<BigInt> w(static_cast<std::size_t>(cfg.count()) * static_cast<std::size_t>(d), 0);
  for (int j = 0; j <= d; ++j) {
    for (int i = 0; i < d; ++i) {
      BigInt c = determinant(detail::drop(a, static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
      if ((i + j) % 2 != 0) c = -c;
      w[static_cast<std::size_t>(f[j] - 1) * static_cast<std::size_t>(d) + static_cast<std::size_t>(i)] = c;
    }
  }
  return w;
}

inline BigInt dot(const std::vector<BigInt>& a, const std::vector<BigInt>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
  BigInt s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// A_K: column k is w_{K[k]}, faces taken in colex order.
inline Matrix<BigInt> rigidity_matrix(std::vector<Face> K, const PointConfig& cfg) {
  std::sort(K.begin(), K.end(), ColexLess{});
  K.erase(std::unique(K.begin(), K.end()), K.end());
  Matrix<BigInt> a(static_cast<std::size_t>(cfg.count()) * static_cast<std::size_t>(cfg.d()), K.size());
  for (std::size_t k = 0; k < K.size(); ++k) {
    const auto w = cofactor_vector(K[k], cfg);
    for (std::size_t r = 0; r < w.size(); ++r) a(r, k) = w[r];
  }
  return a;
}

/// The d translations and d² - 1 traceless linear maps, applied to every
/// point, as vectors in the row space of A_K. Each is orthogonal to every w_f.
inline std::vector<std::vector<BigInt>> motion_basis(const PointConfig& cfg) {
  const int d = cfg.d();
  const auto len = static_cast<std::size_t>(cfg.count()) * static_cast<std::size_t>(d);
  std::vector<std::vector<BigInt>> out;
  for (int c = 0; c < d; ++c) {
    std::vector<BigInt> z(len, 0);
    for (int x = 1; x <= cfg.count(); ++x) z[static_cast<std::size_t>((x - 1) * d + c)] = 1;
    out.push_back(std::move(z));
  }
  // z_x = M v_x for M = E_ab (a != b) and M = E_aa - E_dd.
  auto apply = [&](auto&& entry) {
    std::vector<BigInt> z(len, 0);
    for (int x = 1; x <= cfg.count(); ++x) {
      const auto& v = cfg.point(x);
      for (int a = 0; a < d; ++a) {
        BigInt s = 0;
        for (int b = 0; b < d; ++b) s += entry(a, b) * v[static_cast<std::size_t>(b)];
        z[static_cast<std::size_t>((x - 1) * d + a)] = s;
      }
    }
    return z;
  };
  for (int a0 = 0; a0 < d; ++a0)
    for (int b0 = 0; b0 < d; ++b0)
      if (a0 != b0) out.push_back(apply([&](int a, int b) { return static_cast<std::int64_t>(a == a0 && b == b0); }));
  for (int a0 = 0; a0 + 1 < d; ++a0)
    out.push_back(apply([&](int a, int b) -> std::int64_t {
      if (a != b) return 0;
      return a == a0 ? 1 : (a == d - 1 ? -1 : 0);
    }));
  return out;
}

struct LeafRankReport {
  std::size_t rank = 0;
  std::size_t leaves = 0;
  std::int64_t expected_rank = 0;  // ds + 1
  std::int64_t kernel_dim = 0;     // leaves - rank
  bool pass = false;
};

/// rank(A_K) for K the leaves of a pedigree, compared with ds + 1. Labels
/// are relabeled order-preservingly onto [s+d+1] first; cfg must provide at
/// least that many points in general position.
inline LeafRankReport verify_leaf_rank(const Pedigree& p, const PointConfig& cfg) {
  const int d = p.d();
  if (cfg.d() != d) throw std::invalid_argument("verify_leaf_rank: dimension mismatch");
  const auto support = p.labels();
  if (static_cast<int>(support.size()) > cfg.count())
    throw std::invalid_argument("verify_leaf_rank: configuration has fewer points than the pedigree has labels");
  std::vector<Face> leaves;
  for (const Face& f : p.leaves()) {
    std::vector<int> v;
    for (int x : f) v.push_back(static_cast<int>(std::lower_bound(support.begin(), support.end(), x) - support.begin()) + 1);
    leaves.emplace_back(v);
  }
  LeafRankReport rep;
  rep.leaves = leaves.size();
  rep.rank = rank_exact(rigidity_matrix(leaves, cfg));
  rep.expected_rank = static_cast<std::int64_t>(d) * stats(p).s + 1;
  rep.kernel_dim = static_cast<std::int64_t>(rep.leaves) - static_cast<std::int64_t>(rep.rank);
  rep.pass = static_cast<std::int64_t>(rep.rank) == rep.expected_rank;
  return rep;
}

/// f_r = f with x_r replaced by z, r = 1..d+1.
inline std::vector<Face> subdivision_faces(const Face& f, int z) {
  if (f.contains(z)) throw FaceError("label " + std::to_string(z) + " already in face " + f.to_string());
  std::vector<Face> out;
  for (int r = 0; r < f.size(); ++r) out.push_back(f.replace(f[r], z));
  return out;
}

/// w_f = Σ_{r<k} (-1)^{k+r+1} w_{f_r} + Σ_{r>=k} (-1)^{k+r} w_{f_r}, where
/// x_{k-1} < z < x_k (1-based), checked exactly.
inline bool verify_subdivision_identity(const Face& f, int z, const PointConfig& cfg) {
  const auto fr = subdivision_faces(f, z);
  int k = 1;
  while (k <= f.size() && f[k - 1] < z) ++k;
  const auto wf = cofactor_vector(f, cfg);
  std::vector<BigInt> rhs(wf.size(), 0);
  for (int r = 1; r <= f.size(); ++r) {
    const auto w = cofactor_vector(fr[static_cast<std::size_t>(r - 1)], cfg);
    const int e = r < k ? k + r + 1 : k + r;
    for (std::size_t i = 0; i < w.size(); ++i) rhs[i] += (e % 2 == 0) ? w[i] : BigInt(-w[i]);
  }
  return rhs == wf;
}

/// Rank of a set of vectors, exact.
inline std::size_t vector_rank(const std::vector<std::vector<BigInt>>& vs) {
  if (vs.empty()) return 0;
  Matrix<BigInt> m(vs.size(), vs.front().size());
  for (std::size_t r = 0; r < vs.size(); ++r)
    for (std::size_t c = 0; c < vs[r].size(); ++c) m(r, c) = vs[r][c];
  return rank_exact(m);
}

/// For faces `extra` avoiding z and a seeded nonzero combination w̃ of their
/// cofactor vectors: whether w̃, w_{f_1}, ..., w_{f_d} are independent.
inline bool verify_new_label_independence(const Face& f, int z, const std::vector<Face>& extra, const PointConfig& cfg,
                            std::uint64_t seed) {
  if (extra.empty()) throw std::invalid_argument("verify_new_label_independence: empty face collection");
  for (const Face& g : extra)
    if (g.contains(z)) throw std::invalid_argument("verify_new_label_independence: face " + g.to_string() + " contains z");
  const auto fr = subdivision_faces(f, z);
  std::vector<std::vector<BigInt>> ws;
  for (const Face& g : extra) ws.push_back(cofactor_vector(g, cfg));
  SplitMix64 rng(seed);
  std::vector<BigInt> tilde;
  for (int attempt = 0; attempt < 64; ++attempt) {
    tilde.assign(ws.front().size(), 0);
    for (const auto& w : ws) {
      const BigInt c = static_cast<std::int64_t>(rng.below(2001)) - 1000;
      for (std::size_t i = 0; i < w.size(); ++i) tilde[i] += c * w[i];
    }
    if (std::any_of(tilde.begin(), tilde.end(), [](const BigInt& x) { return x != 0; })) break;
  }
  if (std::all_of(tilde.begin(), tilde.end(), [](const BigInt& x) { return x == 0; }))
    throw std::runtime_error("verify_new_label_independence: could not draw a nonzero combination");
  std::vector<std::vector<BigInt>> set{tilde};
  for (int r = 0; r < f.size() - 1; ++r) set.push_back(cofactor_vector(fr[static_cast<std::size_t>(r)], cfg));
  return vector_rank(set) == set.size();
}

}  // namespace stackperc
