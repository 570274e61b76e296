#include "stackperc/analysis.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace stackperc;

TEST(FussCatalan, SmallValues) {
  // Ternary and quaternary tree counts.
  const std::vector<int> d2{1, 1, 3, 12, 55, 273, 1428};
  const std::vector<int> d3{1, 1, 4, 22, 140, 969};
  for (std::size_t s = 0; s < d2.size(); ++s) EXPECT_EQ(fuss_catalan(2, static_cast<int>(s)), d2[s]);
  for (std::size_t s = 0; s < d3.size(); ++s) EXPECT_EQ(fuss_catalan(3, static_cast<int>(s)), d3[s]);
  const auto rec = fuss_catalan_by_recursion(4, 8);
  for (int s = 0; s <= 8; ++s) EXPECT_EQ(rec[static_cast<std::size_t>(s)], fuss_catalan(4, s));
}

TEST(FussCatalan, GrowthRate) {
  EXPECT_EQ(alpha(2), BigRational(27, 4));
  EXPECT_EQ(alpha(3), BigRational(256, 27));
  EXPECT_NEAR(critical_gamma(2), std::sqrt(4.0 / 27.0), 1e-15);
}

TEST(TreeShapes, EnumerationCountsAndValidity) {
  for (int d = 2; d <= 3; ++d)
    for (int s = 0; s <= 6; ++s) {
      const auto trees = enumerate_trees(d, s);
      EXPECT_EQ(BigInt(trees.size()), fuss_catalan(d, s));
      std::set<std::string> codes;
      for (const auto& t : trees) {
        EXPECT_EQ(t.internal_count(), s);
        EXPECT_EQ(t.leaf_count(), d * s + 1);
        codes.insert(t.preorder());
      }
      EXPECT_EQ(codes.size(), trees.size());
    }
}

TEST(TreeShapes, RandomTreeIsValid) {
  SplitMix64 rng(3);
  for (int i = 0; i < 50; ++i) {
    const auto t = random_tree(3, i % 9, rng);
    EXPECT_EQ(t.internal_count(), i % 9);
    EXPECT_EQ(t.leaf_count(), 3 * (i % 9) + 1);
    // Every prefix holds more leaves-to-come than it has closed: the
    // Łukasiewicz word stays positive until its last symbol.
    int need = 1;
    for (std::size_t k = 0; k < t.preorder().size(); ++k) {
      need += t.preorder()[k] == '1' ? 3 : -1;  // d = 3
      if (k + 1 < t.preorder().size()) {
        EXPECT_GT(need, 0);
      }
    }
    EXPECT_EQ(need, 0);
  }
}

TEST(HatGamma, RootProperties) {
  for (int d = 2; d <= 5; ++d) {
    EXPECT_EQ(hat_gamma(d, 0.0), 0.0);
    const double x0 = std::pow(d + 1.0, -1.0 / d);
    for (double frac : {0.1, 0.5, 0.9, 0.999}) {
      const double g = frac * critical_gamma(d);
      const double r = hat_gamma(d, g);
      EXPECT_NEAR(q_gamma(d, g, r), 0.0, 1e-12);
      EXPECT_GT(r, g);  // root exceeds the initial density
      EXPECT_LT(r, x0);
      EXPECT_NEAR(density_series(d, g * 0.2, 60), hat_gamma(d, g * 0.2), 1e-8);
    }
    EXPECT_NEAR(hat_gamma(d, critical_gamma(d)), x0, 1e-6);
  }
  EXPECT_THROW(hat_gamma(2, 1.0), std::invalid_argument);
}
