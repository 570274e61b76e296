#include "stackperc/pedigree.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace stackperc;

namespace {

// Canonical description of a pedigree: each node's face, label and child faces.
using Shape = std::set<std::tuple<Face, int, std::set<Face>>>;

Shape shape_of(const Pedigree& p) {
  Shape out;
  for (const auto& v : p.nodes()) {
    std::set<Face> kids;
    for (auto c : v.children) kids.insert(p.node(c).face);
    out.emplace(v.face, v.label, kids);
  }
  return out;
}

std::set<Face> subdivide(const Face& u, int z) {
  std::set<Face> out;
  for (int x : u) out.insert(u.replace(x, z));
  return out;
}

// Proper tree on root 123: 123 by 4, 124 by 5, 234 by 6, 346 by 7, 367 by 8.
ProperPedigree worked_tree() {
  PedigreeBuilder b(2, {1, 2, 3});
  b.expand(b.node({1, 2, 3}), 4);
  b.expand(b.node({1, 2, 4}), 5);
  b.expand(b.node({2, 3, 4}), 6);
  b.expand(b.node({3, 4, 6}), 7);
  b.expand(b.node({3, 6, 7}), 8);
  return ProperPedigree(std::move(b).build());
}

const std::set<Face> kWorkedP{{1, 2, 5}, {2, 3, 6}, {3, 7, 8}, {6, 7, 8}};

}  // namespace

TEST(Pedigree, BuilderDeduplicatesFaces) {
  PedigreeBuilder b(2, {1, 2, 3});
  const auto kids = b.expand(b.root(), 4);
  EXPECT_EQ(kids.size(), 3u);
  EXPECT_EQ(b.node({1, 2, 4}), kids[2]);
  const auto p = std::move(b).build();
  EXPECT_EQ(p.size(), 4u);
  EXPECT_FALSE(validate(p).has_value());
}

TEST(Pedigree, BettiExcessExampleStats) {
  const auto p = betti_excess_pedigree();
  ASSERT_FALSE(validate(p).has_value());
  const auto st = stats(p);
  EXPECT_EQ(st, (PedigreeStats{6, 11, 3, 11 - (2 * 3 + 1), 2 * 6 - (11 - 1)}));
  EXPECT_EQ(betti_top(p.faces()).value, 7u);
  EXPECT_TRUE(check_excess_bound(st, 2));
}

TEST(Pedigree, GkLevelsFromDefinition) {
  // Leaves are {k} ∪ f for every d-subset f of [k-1]; internal nodes are
  // the lower levels, C(k-1, d+1) in total.
  for (int d = 2; d <= 3; ++d)
    for (int k = d + 2; k <= 10; ++k) {
      const auto g = generate_gk(d, k);
      ASSERT_FALSE(validate(g).has_value()) << d << " " << k;
      const auto leaves = g.leaves();
      EXPECT_EQ(leaves.size(), binomial(k - 1, d));
      for (const auto& f : leaves) EXPECT_TRUE(f.contains(k));
      const auto st = stats(g);
      EXPECT_EQ(st.m, static_cast<std::int64_t>(binomial(k - 1, d + 1)));
      EXPECT_EQ(st.s, k - d - 1);
      EXPECT_TRUE(check_excess_bound(st, d));
    }
  const auto one = generate_gk(2, 4);
  EXPECT_EQ(shape_of(one), (Shape{{Face{1, 2, 3}, 4, subdivide({1, 2, 3}, 4)},
                                  {Face{2, 3, 4}, 0, {}},
                                  {Face{1, 3, 4}, 0, {}},
                                  {Face{1, 2, 4}, 0, {}}}));
}

TEST(Pedigree, ValidateFlagsEachRule) {
  const auto good = betti_excess_pedigree();
  auto tamper = [&](auto&& edit) {
    Pedigree p = good;
    edit(p.mutable_nodes());
    const auto v = validate(p);
    return v ? v->rule : PedigreeRule::Labels;
  };
  const auto leaf = [&] {
    for (std::size_t i = 0; i < good.size(); ++i)
      if (good.node(i).is_leaf()) return i;
    return std::size_t{0};
  }();
  const auto inner = *good.find({2, 3, 6});

  EXPECT_EQ(tamper([&](auto& n) { n[leaf].face = Face{1, 2}; }), PedigreeRule::Labels);
  EXPECT_EQ(tamper([&](auto& n) { n[leaf].face = good.root_face(); }), PedigreeRule::DistinctFaces);
  EXPECT_EQ(tamper([&](auto& n) { n[inner].children[0] = 999; }), PedigreeRule::Structure);
  EXPECT_EQ(tamper([&](auto& n) { n[inner].children.pop_back(); }), PedigreeRule::OutDegree);
  EXPECT_EQ(tamper([&](auto& n) { n.push_back({Face{7, 8, 9}, 0, {}}); }), PedigreeRule::Root);
  EXPECT_EQ(tamper([&](auto& n) {
              // Four faces pointing at each other: no in-degree-0 node, unreachable from the root.
              const std::size_t base = n.size();
              for (int i = 0; i < 4; ++i) n.push_back({Face{20 + i, 30, 31}, 9, {}});
              for (std::size_t i = 0; i < 4; ++i)
                for (std::size_t j = 0; j < 4; ++j)
                  if (i != j) n[base + i].children.push_back(base + j);
            }),
            PedigreeRule::Acyclic);
  EXPECT_EQ(tamper([&](auto& n) { n[inner].label = 1; }), PedigreeRule::Stacking);
  EXPECT_EQ(tamper([&](auto& n) { n[inner].label = 9; }), PedigreeRule::Stacking);
}

TEST(Pedigree, ExcessBoundExactAgreesWithFloat) {
  for (int d = 2; d <= 4; ++d)
    for (std::int64_t a = 0; a <= 40; ++a)
      for (std::int64_t b = -5; b <= 400; ++b) {
        const double bound = excess_bound(a, d);
        if (std::abs(static_cast<double>(b) - bound) < 1e-6) continue;
        EXPECT_EQ(check_excess_bound({0, 0, 0, a, b}, d), static_cast<double>(b) <= bound) << d << " " << a << " " << b;
      }
  EXPECT_FALSE(check_excess_bound({0, 0, 0, -1, 0}, 2));
  // Exact boundary: d = 2, a = 4 gives 2·8 + 12 = 28.
  EXPECT_TRUE(check_excess_bound({0, 0, 0, 4, 28}, 2));
  EXPECT_FALSE(check_excess_bound({0, 0, 0, 4, 29}, 2));
}

TEST(Pedigree, WitnessOfClosure) {
  FaceSet y0(6, 2);
  for (auto f : {Face{1, 2, 4}, Face{1, 3, 4}, Face{2, 3, 4}}) y0.insert(f);
  const auto st = close(y0);
  const auto w = extract_witness(st, {1, 2, 3});
  ASSERT_TRUE(w.has_value());
  EXPECT_FALSE(validate(*w).has_value());
  EXPECT_EQ(shape_of(*w), shape_of(generate_gk(2, 4)));
  EXPECT_FALSE(extract_witness(st, {4, 5, 6}).has_value());
}

TEST(Pedigree, JsonRoundTripAndDot) {
  const auto p = betti_excess_pedigree();
  const auto q = pedigree_from_json(to_json(p));
  EXPECT_EQ(shape_of(q), shape_of(p));
  EXPECT_EQ(q.root_face(), p.root_face());
  const auto dot = to_dot(p);
  EXPECT_NE(dot.find("digraph"), std::string::npos);
  EXPECT_EQ(std::count(dot.begin(), dot.end(), '>'), 3 * 6);
  EXPECT_NE(dot.find("shape=box"), std::string::npos);
}

TEST(Proper, RejectsRepeatedLabels) {
  EXPECT_THROW(ProperPedigree{betti_excess_pedigree()}, std::invalid_argument);
  const auto t = random_proper(2, 5, 20, 7);
  EXPECT_EQ(t.s(), 5);
  EXPECT_EQ(t.leaves().size(), 11u);
  EXPECT_TRUE(is_balanced(random_balanced_proper(2, 2, 30, 1)));
}

TEST(SubpedigreeH, WorkedExampleLowestIndex) {
  const auto t = worked_tree();
  const auto h = subpedigree_h(t, kWorkedP);
  // 4 is eliminated through 346 in the subtree at 234 and replaced by 7.
  const Shape expected{
      {Face{1, 2, 3}, 7, subdivide({1, 2, 3}, 7)},
      {Face{1, 2, 7}, 5, subdivide({1, 2, 7}, 5)},
      {Face{2, 3, 7}, 6, subdivide({2, 3, 7}, 6)},
      {Face{3, 6, 7}, 8, subdivide({3, 6, 7}, 8)},
      {Face{1, 3, 7}, 0, {}},
      {Face{1, 2, 5}, 0, {}},
      {Face{1, 5, 7}, 0, {}},
      {Face{2, 5, 7}, 0, {}},
      {Face{2, 3, 6}, 0, {}},
      {Face{2, 6, 7}, 0, {}},
      {Face{3, 6, 8}, 0, {}},
      {Face{3, 7, 8}, 0, {}},
      {Face{6, 7, 8}, 0, {}},
  };
  EXPECT_EQ(shape_of(h.pedigree()), expected);
}

TEST(SubpedigreeH, WorkedExampleHighestIndex) {
  const auto h = subpedigree_h(worked_tree(), kWorkedP, EliminationSide::HighestIndex);
  // 4 is eliminated through 124 itself and replaced by 5.
  EXPECT_EQ(h.pedigree().root_face(), (Face{1, 2, 3}));
  EXPECT_EQ(h.pedigree().node(h.pedigree().root()).label, 5);
  const auto leaves = h.leaves();
  const std::set<Face> leaf_set(leaves.begin(), leaves.end());
  for (const auto& f : kWorkedP) EXPECT_TRUE(leaf_set.count(f)) << f.to_string();
  EXPECT_EQ(leaves.size(), 2u * internal_labels(kWorkedP, {1, 2, 3}).size() + 1);
}

TEST(SubpedigreeH, AllLeavesGivesTree) {
  const auto t = worked_tree();
  const auto leaves = t.leaves();
  const auto h = subpedigree_h(t, std::set<Face>(leaves.begin(), leaves.end()));
  EXPECT_EQ(shape_of(h.pedigree()), shape_of(t.pedigree()));
  EXPECT_THROW(subpedigree_h(t, {{1, 2, 3}}), std::invalid_argument);
}

TEST(LabelClasses, Extremes) {
  const auto t = worked_tree();
  const auto leaves = t.leaves();
  for (const auto& [z, c] : classify_labels(std::set<Face>(leaves.begin(), leaves.end()), t))
    if (!t.root().contains(z)) {
      EXPECT_EQ(c, LabelClass::EncircledInP) << z;
    }
  for (const auto& [z, c] : classify_labels({}, t))
    if (!t.root().contains(z)) {
      EXPECT_EQ(c, LabelClass::EncircledInComplement) << z;
    }
  EXPECT_TRUE(link_is_cycle({{1, 2}, {2, 3}, {1, 3}}));
  EXPECT_FALSE(link_is_cycle({{1, 2}, {2, 3}}));
}

TEST(LeafSubsets, FamilySizeMatchesFormula) {
  const auto e = enumerate_leaf_subsets(2, 1, 7);
  EXPECT_EQ(BigInt(e.family_size), e.formula_size);
  EXPECT_EQ(e.family_size, 24u);
}
