#include "stackperc/bootstrap.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace stackperc;

namespace {

using FaceSetStd = std::set<std::vector<int>>;

void subsets(int n, int k, int start, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == k) {
    out.push_back(cur);
    return;
  }
  for (int v = start; v <= n; ++v) {
    cur.push_back(v);
    subsets(n, k, v + 1, cur, out);
    cur.pop_back();
  }
}

// Independent closure: sweep every (d+2)-set until no clique has exactly
// one uninfected facet.
FaceSetStd brute_closure(int n, int d, FaceSetStd infected) {
  std::vector<std::vector<int>> cliques, cur_buf;
  std::vector<int> cur;
  subsets(n, d + 2, 1, cur, cliques);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& w : cliques) {
      int missing = 0;
      std::vector<int> last;
      for (std::size_t i = 0; i < w.size(); ++i) {
        std::vector<int> facet = w;
        facet.erase(facet.begin() + static_cast<std::ptrdiff_t>(i));
        if (!infected.count(facet)) {
          ++missing;
          last = facet;
        }
      }
      if (missing == 1) {
        infected.insert(last);
        changed = true;
      }
    }
  }
  return infected;
}

FaceSetStd as_std(const FaceSet& s) {
  FaceSetStd out;
  for (const auto& f : s.faces()) out.insert(f.labels());
  return out;
}

}  // namespace

TEST(Sampling, DeterministicAndExtremes) {
  const Instance inst{12, 2, 0.2, 99};
  EXPECT_EQ(sample_complex(inst), sample_complex(inst));
  EXPECT_NE(sample_complex(inst), sample_complex({12, 2, 0.2, 100}));
  EXPECT_TRUE(sample_complex({12, 2, 0.0, 1}).empty());
  EXPECT_EQ(sample_complex({12, 2, 1.0, 1}).size(), binomial(12, 3));
  EXPECT_THROW(sample_complex({3, 2, 0.5, 1}), std::invalid_argument);
}

TEST(Sampling, MeanDensity) {
  // 40 draws of C(30, 3) = 4060 faces at p = 0.1: the mean count is 406
  // with standard error about 3.
  double total = 0;
  for (std::uint64_t s = 0; s < 40; ++s) total += static_cast<double>(sample_complex({30, 2, 0.1, s}).size());
  EXPECT_NEAR(total / 40.0, 406.0, 15.0);
}

TEST(Closure, MatchesBruteForce) {
  for (int d = 2; d <= 3; ++d)
    for (int n = d + 2; n <= 9; ++n)
      for (std::uint64_t seed = 0; seed < 12; ++seed) {
        const double p = 0.15 + 0.05 * static_cast<double>(seed % 5);
        const Instance inst{n, d, p, seed};
        const auto y0 = sample_complex(inst);
        const auto fifo = close(inst, y0, QueueDiscipline::Fifo);
        const auto lifo = close(inst, y0, QueueDiscipline::Lifo);
        EXPECT_EQ(as_std(fifo.infected()), brute_closure(n, d, as_std(y0))) << n << " " << seed;
        EXPECT_EQ(fifo.infected(), lifo.infected());
        EXPECT_EQ(fifo.infected(), close_naive(y0));
        EXPECT_FALSE(check_certificates(fifo).has_value());
        EXPECT_TRUE(replay_certificates(lifo));
      }
}

TEST(Closure, BoundaryOfSimplexCompletes) {
  FaceSet y0(6, 2);
  for (auto f : {Face{1, 2, 3}, Face{1, 2, 4}, Face{1, 3, 4}}) y0.insert(f);
  const auto st = close(y0);
  EXPECT_EQ(as_std(st.infected()), (FaceSetStd{{1, 2, 3}, {1, 2, 4}, {1, 3, 4}, {2, 3, 4}}));
  const auto cert = st.certificate(st.infected().rank({2, 3, 4}));
  ASSERT_TRUE(cert.has_value());
  EXPECT_EQ(cert->apex, 1);
  EXPECT_FALSE(st.certificate(st.infected().rank({1, 2, 3})).has_value());
}

TEST(Closure, IncrementalAgreesWithFull) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Instance inst{10, 2, 0.25, seed};
    const auto y0 = sample_complex(inst);
    auto st = close(FaceSet(10, 2));
    for (const auto& f : y0.faces()) incremental_add(st, f);
    EXPECT_EQ(st.infected(), close(y0).infected());
    EXPECT_TRUE(replay_certificates(st));
  }
}

TEST(Closure, DensityAndJson) {
  const Instance inst{9, 2, 1.0, 0};
  const auto st = close(inst);
  EXPECT_EQ(density(st), 1.0);
  EXPECT_EQ(density(close(FaceSet(9, 2))), 0.0);
  const auto j = to_json(close({9, 2, 0.3, 4}));
  EXPECT_TRUE(j.is_object());
}

TEST(CriticalStep, TrajectoryEndpoints) {
  const auto tr = critical_step(12, 2, 5, 20);
  EXPECT_EQ(tr.total, binomial(12, 3));
  ASSERT_FALSE(tr.points.empty());
  EXPECT_EQ(tr.points.back().second, 1.0);
  for (std::size_t i = 1; i < tr.points.size(); ++i) EXPECT_GE(tr.points[i].second, tr.points[i - 1].second);
  EXPECT_GE(tr.tau, 1u);
  EXPECT_LE(tr.tau, tr.total);
}
