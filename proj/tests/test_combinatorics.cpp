#include "stackperc/combinatorics.hpp"
#include "stackperc/rng.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace stackperc;

namespace {

// All k-subsets of [n] by brute force over bitmasks, in colex order.
std::vector<Face> brute_colex(int n, int k) {
  std::vector<std::pair<std::uint64_t, Face>> keyed;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) != k) continue;
    std::vector<int> v;
    for (int i = 0; i < n; ++i)
      if (mask >> i & 1u) v.push_back(i + 1);
    keyed.emplace_back(mask, Face(v));  // colex order is numeric order of the mask
  }
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Face> out;
  for (auto& [m, f] : keyed) out.push_back(f);
  return out;
}

}  // namespace

TEST(Face, SortsAndRejectsBadInput) {
  const Face f{3, 1, 2};
  EXPECT_EQ(f.labels(), (std::vector<int>{1, 2, 3}));
  EXPECT_THROW((Face{1, 1, 2}), FaceError);
  EXPECT_THROW((Face{0, 1, 2}), FaceError);
  EXPECT_EQ(f.replace(2, 7), (Face{1, 3, 7}));
  EXPECT_EQ(f.without_index(0), (Face{2, 3}));
  EXPECT_EQ(Face::initial(3), f);
}

TEST(Colex, RankMatchesBruteForceEnumeration) {
  for (int n = 1; n <= 10; ++n) {
    for (int k = 1; k <= std::min(n, 5); ++k) {
      const auto faces = brute_colex(n, k);
      const ColexRanker rk(n, k);
      ASSERT_EQ(rk.total(), faces.size());
      ASSERT_EQ(binomial(n, k), faces.size());
      for (std::size_t r = 0; r < faces.size(); ++r) {
        EXPECT_EQ(rk.rank(faces[r]), r);
        EXPECT_EQ(rk.unrank(r), faces[r]);
      }
    }
  }
}

TEST(Colex, RankWithoutMatchesRankOfFacet) {
  const ColexRanker rk(9, 3);
  const Face w{2, 4, 7, 9};
  for (int i = 0; i < w.size(); ++i) EXPECT_EQ(rk.rank_without(w, i), rk.rank(w.without_index(i)));
}

TEST(FaceSet, InsertContainsAndJson) {
  FaceSet s(7, 2);
  EXPECT_TRUE(s.insert({1, 2, 3}));
  EXPECT_FALSE(s.insert({1, 2, 3}));
  EXPECT_TRUE(s.insert({4, 6, 7}));
  EXPECT_EQ(s.size(), 2u);
  EXPECT_TRUE(s.contains({4, 6, 7}));
  EXPECT_FALSE(s.contains({1, 2, 4}));
  EXPECT_EQ(face_set_from_json(to_json(s)), s);
}

TEST(Boundary, BoundaryOfBoundaryIsZero) {
  // ∂_{k-1} ∘ ∂_k over all k-faces of a 6-vertex simplex.
  for (int k = 3; k <= 5; ++k) {
    const BoundaryMatrix top(brute_colex(6, k));
    const BoundaryMatrix low(top.rows());
    const auto a = top.dense();
    const auto b = low.dense();
    ASSERT_EQ(b.cols(), a.rows());
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j) {
        std::int64_t sum = 0;
        for (std::size_t t = 0; t < a.rows(); ++t) sum += b(i, t) * a(t, j);
        EXPECT_EQ(sum, 0);
      }
  }
}

TEST(Betti, KnownComplexes) {
  const std::vector<Face> sphere{{1, 2, 3}, {1, 2, 4}, {1, 3, 4}, {2, 3, 4}};
  EXPECT_EQ(betti_top(sphere).value, 1u);
  EXPECT_EQ(betti_top({{1, 2, 3}}).value, 0u);
  EXPECT_EQ(betti_top({}).status, BettiResult::Status::EmptyComplex);
  // 7-vertex torus: triangles {i, i+1, i+3} and {i, i+2, i+3} mod 7.
  std::vector<Face> torus;
  for (int i = 0; i < 7; ++i) {
    torus.push_back(Face{i % 7 + 1, (i + 1) % 7 + 1, (i + 3) % 7 + 1});
    torus.push_back(Face{i % 7 + 1, (i + 2) % 7 + 1, (i + 3) % 7 + 1});
  }
  EXPECT_EQ(betti_top(torus).value, 1u);
  // Boundary of the 3-simplex on [5]: β_3 of all 4-subsets of [5] is 1.
  EXPECT_EQ(betti_top(brute_colex(5, 4)).value, 1u);
  // All 3-subsets of [6]: β_2 = C(5, 3) = 10.
  EXPECT_EQ(betti_top(brute_colex(6, 3)).value, 10u);
}

TEST(Betti, ExactAgreesWithModular) {
  SplitMix64 rng(11);
  const auto all = brute_colex(8, 3);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Face> K;
    for (const auto& f : all)
      if (rng.uniform01() < 0.4) K.push_back(f);
    if (K.empty()) continue;
    EXPECT_EQ(betti_top(K, RankMethod::Exact).value, betti_top(K, RankMethod::Modular).value);
  }
}
