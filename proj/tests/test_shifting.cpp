#include "stackperc/shifting.hpp"

#include <gtest/gtest.h>

using namespace stackperc;

namespace {

std::vector<Face> random_complex(int n, int k, double density, SplitMix64& rng) {
  std::vector<Face> out;
  for (const auto& f : detail::lex_subsets(n, k))
    if (rng.uniform01() < density) out.push_back(f);
  if (out.empty()) out.push_back(Face::initial(k));
  return out;
}

}  // namespace

TEST(Shifting, IsShiftedOnSmallFamilies) {
  EXPECT_FALSE(is_shifted({2, {{1, 2, 4}}}));
  EXPECT_TRUE(is_shifted({2, {{1, 2, 3}, {1, 2, 4}}}));
  EXPECT_FALSE(is_shifted({2, {{1, 2, 3}, {2, 3, 4}}}));
  EXPECT_TRUE(dominance({1, 2, 5}, {1, 3, 6}));
  EXPECT_FALSE(dominance({1, 4, 5}, {2, 3, 6}));
}

TEST(Shifting, PreservesSizeShiftednessAndTopBetti) {
  SplitMix64 rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 5 + trial % 4;
    const int k = 3 + trial % 2;
    const auto K = random_complex(n, k, 0.35, rng);
    const auto delta = shift_confirmed(K, n, static_cast<std::uint64_t>(trial));
    EXPECT_EQ(delta.size(), K.size());
    EXPECT_TRUE(is_shifted(delta));
    EXPECT_EQ(b_top(delta), betti_top(K).value) << trial;
    // Shifting a shifted family changes nothing.
    EXPECT_EQ(shift_confirmed(delta.faces, n, 99), delta);
  }
}

TEST(Shifting, LexInitialSegmentIsFixed) {
  const auto all = detail::lex_subsets(7, 3);
  for (std::size_t len : {1u, 5u, 12u, 35u}) {
    std::vector<Face> seg(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(len));
    EXPECT_EQ(shift_confirmed(seg, 7, 4).faces, seg);
  }
}

TEST(Shifting, FullSimplexBoundary) {
  const std::vector<Face> bd{{1, 2, 3}, {1, 2, 4}, {1, 3, 4}, {2, 3, 4}};
  const auto delta = shift_confirmed(bd, 4, 1);
  EXPECT_EQ(delta.faces, (std::vector<Face>{{1, 2, 3}, {1, 2, 4}, {1, 3, 4}, {2, 3, 4}}));
  EXPECT_EQ(b_top(delta), 1u);
}

TEST(Shifting, ContextIsReproducible) {
  const ShiftContext a(6, 5), b(6, 5), c(6, 6);
  EXPECT_EQ(a.minor({1, 2, 3}, {2, 4, 6}), b.minor({1, 2, 3}, {2, 4, 6}));
  EXPECT_NE(a.minor({1, 2, 3}, {2, 4, 6}), c.minor({1, 2, 3}, {2, 4, 6}));
  EXPECT_THROW(ShiftContext(kShiftMaxVertices + 1, 0), std::invalid_argument);
  EXPECT_THROW(shift({{1, 2, 9}}, ShiftContext(6, 0)), FaceError);
}

TEST(Shifting, PedigreeVertexSetsContainV0) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto t = random_proper(2, 3, 9, seed);
    EXPECT_TRUE(shift_contains_v0(t.pedigree(), seed));
  }
  EXPECT_TRUE(shift_contains_v0(betti_excess_pedigree(), 1));
}

TEST(Shifting, CompactLabels) {
  const auto [faces, v] = compact_labels({{2, 5, 9}, {5, 9, 11}});
  EXPECT_EQ(v, 4);
  EXPECT_EQ(faces, (std::vector<Face>{{1, 2, 3}, {2, 3, 4}}));
}

TEST(Shifting, JsonShape) {
  const auto j = to_json(ShiftedFamily{2, {{1, 2, 3}, {1, 2, 4}}});
  EXPECT_EQ(j.at("d"), 2);
  EXPECT_EQ(j.at("faces").size(), 2u);
}
