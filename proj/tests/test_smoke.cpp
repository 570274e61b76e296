#include "stackperc/pedigree.hpp"

#include <gtest/gtest.h>

using namespace stackperc;

TEST(Smoke, BettiExcessExample) {
  const auto p = betti_excess_pedigree();
  EXPECT_FALSE(validate(p).has_value());
  const auto st = stats(p);
  EXPECT_EQ(st.m, 6);
  EXPECT_EQ(st.l, 11);
  EXPECT_EQ(st.s, 3);
  EXPECT_EQ(betti_top(p.faces()).value, 7u);
}

TEST(Smoke, Close) {
  FaceSet y0(5, 2);
  y0.insert({1, 2, 3});
  y0.insert({1, 2, 4});
  y0.insert({1, 3, 4});
  const auto st = close(y0);
  EXPECT_TRUE(st.infected().contains({2, 3, 4}));
  EXPECT_EQ(st.infected().size(), 4u);
}

#include "stackperc/rigidity.hpp"
#include "stackperc/shifting.hpp"

TEST(Smoke, Shift) {
  const auto p = betti_excess_pedigree();
  const auto delta = shift_confirmed(p.faces(), 6, 7);
  EXPECT_TRUE(is_shifted(delta));
  EXPECT_EQ(b_top(delta), 7u);
  EXPECT_TRUE(shift_contains_v0(p, 3));
  std::vector<Face> bd{{1, 2, 3}, {1, 2, 4}, {1, 3, 4}, {2, 3, 4}};
  EXPECT_EQ(b_top(shift_confirmed(bd, 6, 1)), 1u);
}

TEST(Smoke, Rigidity) {
  const auto p = betti_excess_pedigree();
  const auto cfg = PointConfig::random(2, 6, 5);
  const auto rep = verify_leaf_rank(p, cfg);
  EXPECT_EQ(rep.rank, 7u);
  EXPECT_EQ(rep.kernel_dim, 4);
  const auto cfg7 = PointConfig::random(2, 7, 9);
  for (int z : {1, 3, 5, 7}) EXPECT_TRUE(verify_subdivision_identity({2, 4, 6}, z, cfg7)) << z;
  for (const auto& m : motion_basis(cfg7))
    for (const Face& f : {Face{1, 2, 3}, Face{2, 5, 7}}) EXPECT_EQ(dot(m, cofactor_vector(f, cfg7)), 0);
  EXPECT_TRUE(verify_new_label_independence({2, 4, 6}, 7, {{2, 4, 6}}, cfg7, 1));
}
