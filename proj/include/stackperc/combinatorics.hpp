#pragma once

// Face ranking, face sets, boundary matrices and top-dimensional Betti numbers
// of pure d-dimensional complexes.

#include "stackperc/face.hpp"
#include "stackperc/linalg.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace stackperc {

/// C(n, k); throws std::overflow_error if the value exceeds 64 bits.
inline std::uint64_t binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (std::int64_t i = 0; i < k; ++i) {
    r = r * static_cast<unsigned __int128>(n - i) / static_cast<unsigned __int128>(i + 1);
    if (r > std::numeric_limits<std::uint64_t>::max()) throw std::overflow_error("binomial exceeds 64 bits");
  }
  return static_cast<std::uint64_t>(r);
}

/// Colex ranking of k-subsets of [n] with a precomputed binomial table:
/// rank({v_1 < ... < v_k}) = sum_i C(v_i - 1, i). Ranks do not depend on n.
class ColexRanker {
 public:
  ColexRanker(int n, int k) : n_(n), k_(k), table_(static_cast<std::size_t>(n + 1) * static_cast<std::size_t>(k + 1)) {
    if (n < 0 || k < 1 || k > kMaxFaceSize) throw std::invalid_argument("ColexRanker: bad (n, k)");
    for (int v = 0; v <= n; ++v)
      for (int i = 0; i <= k; ++i) table_[idx(v, i)] = binomial(v, i);
    total_ = binomial(n, k);
  }

  int n() const noexcept { return n_; }
  int k() const noexcept { return k_; }
  std::uint64_t total() const noexcept { return total_; }

  /// C(v, i) for 0 <= v <= n, 0 <= i <= k.
  std::uint64_t choose(int v, int i) const noexcept { return table_[idx(v, i)]; }

  std::uint64_t rank(const Face& f) const noexcept {
    std::uint64_t r = 0;
    for (int i = 0; i < k_; ++i) r += choose(f[i] - 1, i + 1);
    return r;
  }

  /// Rank of (w \ w[omit]) for a (k+1)-set w.
  std::uint64_t rank_without(const Face& w, int omit) const noexcept {
    std::uint64_t r = 0;
    for (int i = 0; i < omit; ++i) r += choose(w[i] - 1, i + 1);
    for (int i = omit + 1; i <= k_; ++i) r += choose(w[i] - 1, i);
    return r;
  }

  Face unrank(std::uint64_t r) const {
    if (r >= total_) throw FaceError("rank " + std::to_string(r) + " out of range for C(" + std::to_string(n_) + "," +
                                     std::to_string(k_) + ")");
    std::array<int, kMaxFaceSize> v{};
    int hi = n_;
    for (int i = k_; i >= 1; --i) {
      // largest c < hi with C(c, i) <= r
      int lo = i - 1, top = hi - 1;
      while (lo < top) {
        const int mid = (lo + top + 1) / 2;
        if (choose(mid, i) <= r) lo = mid;
        else top = mid - 1;
      }
      v[static_cast<std::size_t>(i - 1)] = lo + 1;
      r -= choose(lo, i);
      hi = lo;
    }
    return Face(std::span<const int>(v.data(), static_cast<std::size_t>(k_)));
  }

 private:
  std::size_t idx(int v, int i) const noexcept {
    return static_cast<std::size_t>(v) * static_cast<std::size_t>(k_ + 1) + static_cast<std::size_t>(i);
  }

  int n_;
  int k_;
  std::vector<std::uint64_t> table_;
  std::uint64_t total_ = 0;
};

/// Colex rank of a d-face of [n]; validates the face first.
inline std::uint64_t colex_rank(const Face& f, int n, int d) {
  f.validate(n, d);
  std::uint64_t r = 0;
  for (int i = 0; i < f.size(); ++i) r += binomial(f[i] - 1, i + 1);
  return r;
}

inline Face colex_unrank(std::uint64_t rank, int n, int d) { return ColexRanker(n, d + 1).unrank(rank); }

/// The d + 2 facets of a (d+2)-set w, ordered by omitted element ascending.
inline std::vector<Face> facets(const Face& w, int d) {
  if (w.size() != d + 2)
    throw FaceError("facets: expected a set of size d+2 = " + std::to_string(d + 2) + ", got " +
                    std::to_string(w.size()));
  std::vector<Face> out;
  out.reserve(static_cast<std::size_t>(w.size()));
  for (int i = 0; i < w.size(); ++i) out.push_back(w.without_index(i));
  return out;
}

/// lk_z(K) = { v \ {z} : z ∈ v ∈ K }
template <class Range>
std::set<Face> link(int z, const Range& faces) {
  std::set<Face> out;
  for (const Face& v : faces)
    if (v.contains(z)) out.insert(v.without(z));
  return out;
}

// ---------------------------------------------------------------------------

/// Bit set over the colex-ranked d-faces of [n]. Single writer.
class FaceSet {
 public:
  FaceSet(int n, int d) : ranker_(n, d + 1), d_(d), words_((ranker_.total() + 63) / 64, 0) {
    if (d < 1 || d > kMaxDimension) throw std::invalid_argument("FaceSet: dimension out of range");
    if (n < d + 1) throw std::invalid_argument("FaceSet: need n >= d + 1");
  }

  int n() const noexcept { return ranker_.n(); }
  int d() const noexcept { return d_; }
  std::uint64_t universe() const noexcept { return ranker_.total(); }
  std::uint64_t size() const noexcept { return count_; }
  bool empty() const noexcept { return count_ == 0; }
  const ColexRanker& ranker() const noexcept { return ranker_; }

  bool contains_rank(std::uint64_t r) const noexcept { return (words_[r >> 6] >> (r & 63)) & 1u; }
  bool contains(const Face& f) const { return contains_rank(rank(f)); }

  /// Returns true if newly inserted.
  bool insert_rank(std::uint64_t r) noexcept {
    auto& w = words_[r >> 6];
    const std::uint64_t bit = std::uint64_t{1} << (r & 63);
    if (w & bit) return false;
    w |= bit;
    ++count_;
    return true;
  }
  bool insert(const Face& f) { return insert_rank(rank(f)); }

  std::uint64_t rank(const Face& f) const {
    f.validate(n(), d_);
    return ranker_.rank(f);
  }
  Face face(std::uint64_t r) const { return ranker_.unrank(r); }

  /// Ranks in increasing (colex) order.
  std::vector<std::uint64_t> ranks() const {
    std::vector<std::uint64_t> out;
    out.reserve(count_);
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::uint64_t w = words_[i];
      while (w) {
        out.push_back(i * 64 + static_cast<std::uint64_t>(std::countr_zero(w)));
        w &= w - 1;
      }
    }
    return out;
  }

  std::vector<Face> faces() const {
    std::vector<Face> out;
    for (auto r : ranks()) out.push_back(face(r));
    return out;
  }

  bool is_subset_of(const FaceSet& other) const {
    if (other.n() != n() || other.d() != d_) return false;
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~other.words_[i]) return false;
    return true;
  }

  friend bool operator==(const FaceSet& a, const FaceSet& b) {
    return a.n() == b.n() && a.d_ == b.d_ && a.words_ == b.words_;
  }

 private:
  ColexRanker ranker_;
  int d_;
  std::vector<std::uint64_t> words_;
  std::uint64_t count_ = 0;
};

/// {"n":…, "d":…, "faces":[[v,…],…]} with faces in colex order.
inline nlohmann::json to_json(const FaceSet& s) {
  nlohmann::json faces = nlohmann::json::array();
  for (const Face& f : s.faces()) faces.push_back(f.labels());
  return {{"n", s.n()}, {"d", s.d()}, {"faces", std::move(faces)}};
}

inline FaceSet face_set_from_json(const nlohmann::json& j) {
  FaceSet s(j.at("n").get<int>(), j.at("d").get<int>());
  for (const auto& f : j.at("faces")) s.insert(Face(f.get<std::vector<int>>()));
  return s;
}

// ---------------------------------------------------------------------------

/// Signed incidence matrix of ∂_d restricted to a list of d-faces. Column j is
/// ∂(faces[j]) = sum_i (-1)^i (f \ v_i); rows are the (d-1)-faces that occur.
class BoundaryMatrix {
 public:
  explicit BoundaryMatrix(std::vector<Face> faces) : columns_(std::move(faces)) {
    for (const Face& f : columns_)
      for (int i = 0; i < f.size(); ++i) row_index_.emplace(f.without_index(i), 0);
    std::size_t k = 0;
    for (auto& [face, idx] : row_index_) {
      idx = k++;
      rows_.push_back(face);
    }
  }

  const std::vector<Face>& columns() const noexcept { return columns_; }
  const std::vector<Face>& rows() const noexcept { return rows_; }

  std::size_t row_of(const Face& g) const { return row_index_.at(g); }

  Matrix<std::int64_t> dense() const {
    Matrix<std::int64_t> m(rows_.size(), columns_.size());
    for (std::size_t c = 0; c < columns_.size(); ++c) {
      const Face& f = columns_[c];
      for (int i = 0; i < f.size(); ++i) m(row_of(f.without_index(i)), c) = (i % 2 == 0) ? 1 : -1;
    }
    return m;
  }

 private:
  std::vector<Face> columns_;
  std::vector<Face> rows_;
  std::map<Face, std::size_t> row_index_;
};

enum class RankMethod { Auto, Exact, Modular };

struct BettiResult {
  enum class Status { Ok, EmptyComplex };
  Status status = Status::Ok;
  std::size_t value = 0;
  RankMethod method = RankMethod::Exact;
};

/// Column count above which Auto switches from Bareiss to two-prime modular rank.
inline constexpr std::size_t kExactRankColumnLimit = 2000;

/// β_d = dim ker ∂_d of the pure complex spanned by `faces` (duplicates are
/// ignored). The empty complex reports Status::EmptyComplex with value 0.
inline BettiResult betti_top(std::vector<Face> faces, RankMethod method = RankMethod::Auto,
                             std::uint64_t prime = kPrime61a) {
  std::sort(faces.begin(), faces.end());
  faces.erase(std::unique(faces.begin(), faces.end()), faces.end());
  if (faces.empty()) return {BettiResult::Status::EmptyComplex, 0, method};
  const int k = faces.front().size();
  for (const Face& f : faces)
    if (f.size() != k) throw FaceError("betti_top: faces of mixed dimension");
  const auto m = BoundaryMatrix(faces).dense();
  if (method == RankMethod::Auto) method = faces.size() <= kExactRankColumnLimit ? RankMethod::Exact : RankMethod::Modular;
  std::size_t rank = 0;
  if (method == RankMethod::Exact) {
    rank = rank_exact(m);
  } else if (prime != kPrime61a) {
    rank = rank_mod(m, prime);
  } else {
    rank = rank_mod(m, kPrime61a);
    if (rank != rank_mod(m, kPrime61b)) throw std::runtime_error("betti_top: modular ranks disagree");
  }
  return {BettiResult::Status::Ok, faces.size() - rank, method};
}

}  // namespace stackperc
