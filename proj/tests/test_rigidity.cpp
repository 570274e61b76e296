#include "stackperc/rigidity.hpp"

#include <gtest/gtest.h>

using namespace stackperc;

namespace {

// 2×2 determinant for the planar cofactor oracle.
std::int64_t det2(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t e) { return a * e - b * c; }

}  // namespace

TEST(Rigidity, UnitTriangleAndCollinearPoints) {
  const PointConfig tri(2, {{0, 0}, {1, 0}, {0, 1}});
  const BigInt det = determinant(face_matrix({1, 2, 3}, tri));
  EXPECT_TRUE(det == 1 || det == -1);
  EXPECT_FALSE(tri.degenerate_face().has_value());
  const PointConfig line(2, {{0, 0}, {1, 1}, {2, 2}, {0, 5}});
  EXPECT_EQ(determinant(face_matrix({1, 2, 3}, line)), 0);
  EXPECT_EQ(line.degenerate_face(), (Face{1, 2, 3}));
}

TEST(Rigidity, RandomConfigurationIsGeneric) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto cfg = PointConfig::random(3, 8, seed);
    EXPECT_FALSE(cfg.degenerate_face().has_value());
    for (int x = 1; x <= 8; ++x)
      for (auto c : cfg.point(x)) EXPECT_LE(std::abs(c), kPointRange);
  }
}

TEST(Rigidity, CofactorVectorMatchesPlanarFormula) {
  const auto cfg = PointConfig::random(2, 6, 4);
  const Face f{2, 3, 5};
  const auto w = cofactor_vector(f, cfg);
  // A_f rows: x, y, 1. Cofactor (i, j) deletes row i and column j.
  for (int j = 0; j < 3; ++j) {
    std::vector<std::vector<std::int64_t>> cols;
    for (int k = 0; k < 3; ++k)
      if (k != j) cols.push_back({cfg.point(f[k])[0], cfg.point(f[k])[1], 1});
    for (int i = 0; i < 2; ++i) {
      const int r1 = i == 0 ? 1 : 0;
      const std::int64_t minor = det2(cols[0][static_cast<std::size_t>(r1)], cols[1][static_cast<std::size_t>(r1)], cols[0][2], cols[1][2]);
      const std::int64_t c = (i + j) % 2 == 0 ? minor : -minor;
      EXPECT_EQ(w[static_cast<std::size_t>((f[j] - 1) * 2 + i)], c) << i << " " << j;
    }
  }
  for (int x : {1, 4, 6})
    for (int i = 0; i < 2; ++i) EXPECT_EQ(w[static_cast<std::size_t>((x - 1) * 2 + i)], 0);
}

TEST(Rigidity, MotionsAreOrthogonalToEveryFace) {
  for (int d = 2; d <= 3; ++d) {
    const auto cfg = PointConfig::random(d, d + 4, 8);
    const auto motions = motion_basis(cfg);
    EXPECT_EQ(motions.size(), static_cast<std::size_t>(d + d * d - 1));
    EXPECT_EQ(vector_rank(motions), motions.size());
    for (std::uint64_t r = 0; r < binomial(d + 4, d + 1); ++r) {
      const auto w = cofactor_vector(colex_unrank(r, d + 4, d), cfg);
      for (const auto& m : motions) EXPECT_EQ(dot(m, w), 0);
    }
  }
}

TEST(Rigidity, SingleSubdivisionRanks) {
  // The d+1 faces of a subdivision are independent; with the subdivided
  // face added they satisfy one relation.
  for (int d = 2; d <= 4; ++d) {
    const auto cfg = PointConfig::random(d, d + 2, 3);
    const Face f = Face::initial(d + 1);
    const auto parts = subdivision_faces(f, d + 2);
    EXPECT_EQ(rank_exact(rigidity_matrix(parts, cfg)), static_cast<std::size_t>(d + 1));
    auto all = parts;
    all.push_back(f);
    EXPECT_EQ(rank_exact(rigidity_matrix(all, cfg)), static_cast<std::size_t>(d + 1));
    EXPECT_TRUE(verify_subdivision_identity(f, d + 2, cfg));
  }
}

TEST(Rigidity, LeafRankOfProperPedigrees) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto t = random_proper(2, 4, 9, seed);
    const auto rep = verify_leaf_rank(t.pedigree(), PointConfig::random(2, 7, seed));
    EXPECT_TRUE(rep.pass);
    EXPECT_EQ(rep.rank, 9u);
    EXPECT_EQ(rep.kernel_dim, 0);
  }
}
