#pragma once

// Pedigrees: DAGs of d-faces in which every internal face u is subdivided by
// an outgoing label z into the d + 1 faces u \ {x_i} ∪ {z}. A stacked
// contraction of a face in Y is a pedigree rooted at that face whose leaves
// lie in Y.

#include "stackperc/analysis.hpp"
#include "stackperc/bootstrap.hpp"
#include "stackperc/combinatorics.hpp"
#include "stackperc/rng.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace stackperc {

struct PedigreeNode {
  Face face;
  int label = 0;  // outgoing label z of an internal node; 0 for leaves
  std::vector<std::size_t> children;

  bool is_leaf() const noexcept { return children.empty(); }
};

class Pedigree {
 public:
  Pedigree(int d, std::vector<PedigreeNode> nodes, std::size_t root)
      : d_(d), nodes_(std::move(nodes)), root_(root) {}

  int d() const noexcept { return d_; }
  std::size_t root() const noexcept { return root_; }
  const Face& root_face() const { return nodes_.at(root_).face; }
  std::size_t size() const noexcept { return nodes_.size(); }
  const std::vector<PedigreeNode>& nodes() const noexcept { return nodes_; }
  const PedigreeNode& node(std::size_t i) const { return nodes_.at(i); }
  /// Mutable access, for building deliberately broken pedigrees in tests.
  std::vector<PedigreeNode>& mutable_nodes() noexcept { return nodes_; }

  std::optional<std::size_t> find(const Face& f) const {
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      if (nodes_[i].face == f) return i;
    return std::nullopt;
  }

  std::vector<Face> faces() const {
    std::vector<Face> out;
    for (const auto& v : nodes_) out.push_back(v.face);
    return out;
  }

  /// Leaf faces, sorted.
  std::vector<Face> leaves() const {
    std::vector<Face> out;
    for (const auto& v : nodes_)
      if (v.is_leaf()) out.push_back(v.face);
    std::sort(out.begin(), out.end());
    return out;
  }

  /// ∪ of all labels, sorted.
  std::vector<int> labels() const { return label_union(faces()); }

  std::vector<int> outgoing_labels() const {
    std::vector<int> out;
    for (const auto& v : nodes_)
      if (!v.is_leaf()) out.push_back(v.label);
    return out;
  }

 private:
  int d_;
  std::vector<PedigreeNode> nodes_;
  std::size_t root_;
};

/// Builds pedigrees node by node; nodes are deduplicated by face.
class PedigreeBuilder {
 public:
  PedigreeBuilder(int d, const Face& root) : d_(d) { root_ = node(root); }

  std::size_t root() const noexcept { return root_; }

  std::size_t node(const Face& f) {
    if (auto it = index_.find(f); it != index_.end()) return it->second;
    nodes_.push_back({f, 0, {}});
    index_.emplace(f, nodes_.size() - 1);
    return nodes_.size() - 1;
  }

  const Face& face(std::size_t i) const { return nodes_.at(i).face; }
  bool expanded(std::size_t i) const { return !nodes_.at(i).children.empty(); }

  /// Subdivides node u by label z: children u \ {x_i} ∪ {z}, i ascending.
  std::vector<std::size_t> expand(std::size_t u, int z) {
    const Face f = nodes_.at(u).face;
    if (f.contains(z)) throw FaceError("outgoing label " + std::to_string(z) + " lies in " + f.to_string());
    std::vector<std::size_t> kids;
    for (int i = 0; i < f.size(); ++i) kids.push_back(node(f.without_index(i).with(z)));
    nodes_[u].label = z;
    nodes_[u].children = kids;
    return kids;
  }

  Pedigree build() && { return Pedigree(d_, std::move(nodes_), root_); }

 private:
  int d_;
  std::size_t root_ = 0;
  std::vector<PedigreeNode> nodes_;
  std::map<Face, std::size_t> index_;
};

// ---------------------------------------------------------------------------
// Validation and statistics

enum class PedigreeRule {
  Labels,        // every node is a (d+1)-set of positive labels
  DistinctFaces, // one node per face
  Structure,     // child indices in range
  OutDegree,     // out-degree 0 or d+1
  Root,          // the root is the unique node of in-degree 0
  Acyclic,
  Stacking,      // children are u \ {x_i} ∪ {z} with z ∉ u
};

inline const char* to_string(PedigreeRule r) {
  switch (r) {
    case PedigreeRule::Labels: return "labels";
    case PedigreeRule::DistinctFaces: return "distinct-faces";
    case PedigreeRule::Structure: return "structure";
    case PedigreeRule::OutDegree: return "out-degree";
    case PedigreeRule::Root: return "root";
    case PedigreeRule::Acyclic: return "acyclic";
    case PedigreeRule::Stacking: return "stacking";
  }
  return "?";
}

struct PedigreeViolation {
  PedigreeRule rule;
  std::size_t node;
  std::string message;
};

/// First violated pedigree condition, or nullopt if P is a valid pedigree.
inline std::optional<PedigreeViolation> validate(const Pedigree& p) {
  const int d = p.d();
  const auto& nodes = p.nodes();
  auto fail = [](PedigreeRule r, std::size_t i, std::string msg) {
    return std::optional<PedigreeViolation>(PedigreeViolation{r, i, std::move(msg)});
  };
  if (nodes.empty()) return fail(PedigreeRule::Structure, 0, "empty pedigree");
  if (p.root() >= nodes.size()) return fail(PedigreeRule::Structure, p.root(), "root index out of range");
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].face.size() != d + 1)
      return fail(PedigreeRule::Labels, i, "node " + nodes[i].face.to_string() + " is not a (d+1)-set");
  {
    std::map<Face, std::size_t> seen;
    for (std::size_t i = 0; i < nodes.size(); ++i)
      if (!seen.emplace(nodes[i].face, i).second)
        return fail(PedigreeRule::DistinctFaces, i, "face " + nodes[i].face.to_string() + " appears twice");
  }
  std::vector<int> indegree(nodes.size(), 0);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (auto c : nodes[i].children) {
      if (c >= nodes.size()) return fail(PedigreeRule::Structure, i, "child index out of range");
      ++indegree[c];
    }
    if (!nodes[i].children.empty() && nodes[i].children.size() != static_cast<std::size_t>(d + 1))
      return fail(PedigreeRule::OutDegree, i,
                  "node " + nodes[i].face.to_string() + " has out-degree " + std::to_string(nodes[i].children.size()));
    std::set<std::size_t> distinct(nodes[i].children.begin(), nodes[i].children.end());
    if (distinct.size() != nodes[i].children.size())
      return fail(PedigreeRule::OutDegree, i, "node " + nodes[i].face.to_string() + " has a repeated child");
  }
  if (indegree[p.root()] != 0)
    return fail(PedigreeRule::Root, p.root(), "root " + p.root_face().to_string() + " has an incoming edge");
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (i != p.root() && indegree[i] == 0)
      return fail(PedigreeRule::Root, i, "node " + nodes[i].face.to_string() + " has in-degree 0 but is not the root");
  {
    // Kahn's algorithm
    std::vector<int> deg = indegree;
    std::vector<std::size_t> stack{p.root()};
    std::size_t seen = 0;
    while (!stack.empty()) {
      const auto u = stack.back();
      stack.pop_back();
      ++seen;
      for (auto c : nodes[u].children)
        if (--deg[c] == 0) stack.push_back(c);
    }
    if (seen != nodes.size()) {
      for (std::size_t i = 0; i < nodes.size(); ++i)
        if (deg[i] > 0) return fail(PedigreeRule::Acyclic, i, "cycle through " + nodes[i].face.to_string());
    }
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& u = nodes[i];
    if (u.is_leaf()) continue;
    if (u.label < 1 || u.face.contains(u.label))
      return fail(PedigreeRule::Stacking, i,
                  "outgoing label " + std::to_string(u.label) + " of " + u.face.to_string() + " is invalid");
    std::set<Face> expect, got;
    for (int k = 0; k < u.face.size(); ++k) expect.insert(u.face.without_index(k).with(u.label));
    for (auto c : u.children) got.insert(nodes[c].face);
    if (expect != got)
      return fail(PedigreeRule::Stacking, i,
                  "children of " + u.face.to_string() + " are not its subdivision by " + std::to_string(u.label));
  }
  return std::nullopt;
}

struct PedigreeStats {
  std::int64_t m = 0;  // internal nodes
  std::int64_t l = 0;  // leaves
  std::int64_t s = 0;  // labels - (d+1)
  std::int64_t a = 0;  // leaf excess l - (ds+1)
  std::int64_t b = 0;  // tree excess dm - (l-1)

  friend bool operator==(const PedigreeStats&, const PedigreeStats&) = default;
};

inline PedigreeStats stats(const Pedigree& p) {
  PedigreeStats st;
  for (const auto& v : p.nodes()) (v.is_leaf() ? st.l : st.m) += 1;
  const std::int64_t d = p.d();
  st.s = static_cast<std::int64_t>(p.labels().size()) - (d + 1);
  st.a = st.l - (d * st.s + 1);
  st.b = d * st.m - (st.l - 1);
  return st;
}

/// d·a^{(d+1)/d} + (d²-1)·a as a double, for reports.
inline double excess_bound(std::int64_t a, int d) {
  const double ad = static_cast<double>(a);
  return d * std::pow(ad, (d + 1.0) / d) + (d * d - 1.0) * ad;
}

/// a >= 0 and b <= d·a^{(d+1)/d} + (d²-1)·a, decided exactly: with
/// L = b - (d²-1)a the bound reads L <= d·a·a^{1/d}, i.e. L <= 0 or
/// L^d <= d^d·a^{d+1}.
inline bool check_excess_bound(const PedigreeStats& st, int d) {
  if (st.a < 0) return false;
  const BigInt lhs = BigInt(st.b) - BigInt(d * d - 1) * st.a;
  if (lhs <= 0) return true;
  const auto ud = static_cast<unsigned>(d);
  return boost::multiprecision::pow(lhs, ud) <=
         boost::multiprecision::pow(BigInt(d), ud) * boost::multiprecision::pow(BigInt(st.a), ud + 1);
}

// ---------------------------------------------------------------------------
// Witnesses from bootstrap certificates

/// Pedigree of f obtained by expanding certificates downward; leaves are
/// exactly faces of Y0. nullopt if f is not infected.
inline std::optional<Pedigree> extract_witness(const BootstrapState& st, const Face& f) {
  const std::uint64_t r = st.infected().rank(f);
  if (!st.is_infected(r)) return std::nullopt;
  PedigreeBuilder b(st.d(), f);
  std::vector<std::size_t> work{b.root()};
  std::set<std::size_t> done;
  while (!work.empty()) {
    const auto u = work.back();
    work.pop_back();
    if (!done.insert(u).second) continue;
    const auto cert = st.certificate(st.infected().ranker().rank(b.face(u)));
    if (!cert) continue;  // Y0 face: leaf
    for (auto c : b.expand(u, cert->apex))
      if (!done.count(c)) work.push_back(c);
  }
  return std::move(b).build();
}

/// The sub-pedigree of all nodes reachable from `start`.
inline Pedigree subpedigree(const Pedigree& p, std::size_t start) {
  PedigreeBuilder b(p.d(), p.node(start).face);
  std::vector<std::pair<std::size_t, std::size_t>> work{{start, b.root()}};
  std::set<std::size_t> done;
  while (!work.empty()) {
    auto [src, dst] = work.back();
    work.pop_back();
    if (!done.insert(src).second) continue;
    const auto& v = p.node(src);
    if (v.is_leaf()) continue;
    const auto kids = b.expand(dst, v.label);
    for (std::size_t k = 0; k < kids.size(); ++k) {
      const auto it = std::find_if(v.children.begin(), v.children.end(),
                                   [&](std::size_t c) { return p.node(c).face == b.face(kids[k]); });
      work.emplace_back(*it, kids[k]);
    }
  }
  return std::move(b).build();
}

namespace detail {

inline std::size_t reachable_label_count(const Pedigree& p, std::size_t start) {
  std::set<int> labels;
  std::set<std::size_t> seen;
  std::vector<std::size_t> work{start};
  while (!work.empty()) {
    const auto u = work.back();
    work.pop_back();
    if (!seen.insert(u).second) continue;
    labels.insert(p.node(u).face.begin(), p.node(u).face.end());
    for (auto c : p.node(u).children) work.push_back(c);
  }
  return labels.size();
}

}  // namespace detail

struct LabelReduction {
  Face face;
  Pedigree pedigree;
  std::int64_t s = 0;  // surplus labels of the returned pedigree
};

/// Descends from the root of a witness, each time into the child whose
/// sub-pedigree has the most labels, until the label surplus is at most k.
/// The result satisfies k/(d+1) <= s' <= k.
inline LabelReduction reduce_labels(const Pedigree& witness, std::int64_t k) {
  const int d = witness.d();
  std::int64_t s = stats(witness).s;
  if (k < 0 || k >= s)
    throw std::invalid_argument("reduce_labels: need 0 <= k < s (k = " + std::to_string(k) +
                                ", s = " + std::to_string(s) + ")");
  std::size_t cur = witness.root();
  do {
    const auto& v = witness.node(cur);
    std::size_t best = v.children.front();
    std::int64_t best_s = -1;
    for (auto c : v.children) {
      const auto sc = static_cast<std::int64_t>(detail::reachable_label_count(witness, c)) - (d + 1);
      if (sc > best_s) {
        best_s = sc;
        best = c;
      }
    }
    cur = best;
    s = best_s;
  } while (s > k);
  return {witness.node(cur).face, subpedigree(witness, cur), s};
}

/// (d,k) member of the family whose level j (d+1 <= j <= k) consists of
/// {j} ∪ f for all d-subsets f of [j-1]; nodes below level k are subdivided
/// by the label j + 1.
inline Pedigree generate_gk(int d, int k) {
  require_dimension(d);
  if (k <= d + 1) throw std::invalid_argument("generate_gk: need k > d + 1");
  PedigreeBuilder b(d, Face::initial(d + 1));
  std::vector<std::size_t> level{b.root()};
  for (int j = d + 1; j < k; ++j) {
    std::set<std::size_t> next;
    for (auto u : level)
      for (auto c : b.expand(u, j + 1)) next.insert(c);
    level.assign(next.begin(), next.end());
  }
  return std::move(b).build();
}

/// The (6,11,3)-pedigree for d = 2 with β_2 = 7 > m = 6.
inline Pedigree betti_excess_pedigree() {
  PedigreeBuilder b(2, {1, 2, 3});
  b.expand(b.node({1, 2, 3}), 6);
  b.expand(b.node({2, 3, 6}), 5);
  b.expand(b.node({2, 5, 6}), 4);
  b.expand(b.node({1, 2, 6}), 4);
  b.expand(b.node({1, 2, 4}), 5);
  b.expand(b.node({1, 4, 5}), 3);
  return std::move(b).build();
}

// ---------------------------------------------------------------------------
// Proper pedigrees

/// A pedigree whose outgoing labels are pairwise distinct and avoid the
/// root's labels; it is a (d+1)-ary tree with m = s and l = ds + 1.
class ProperPedigree {
 public:
  explicit ProperPedigree(Pedigree p) : p_(std::move(p)) {
    if (auto v = validate(p_)) throw std::invalid_argument("not a pedigree: " + v->message);
    auto labels = p_.outgoing_labels();
    std::sort(labels.begin(), labels.end());
    if (std::adjacent_find(labels.begin(), labels.end()) != labels.end())
      throw std::invalid_argument("not proper: repeated outgoing label");
    for (int z : labels)
      if (p_.root_face().contains(z)) throw std::invalid_argument("not proper: outgoing label on the root");
  }

  const Pedigree& pedigree() const noexcept { return p_; }
  int d() const noexcept { return p_.d(); }
  const Face& root() const { return p_.root_face(); }
  std::vector<Face> leaves() const { return p_.leaves(); }
  std::int64_t s() const { return static_cast<std::int64_t>(p_.outgoing_labels().size()); }

 private:
  Pedigree p_;
};

/// Tree with the given shape rooted at `root`; internal nodes take their
/// outgoing labels from `labels` in preorder.
inline Pedigree pedigree_from_shape(const TreeShape& shape, const Face& root, const std::vector<int>& labels) {
  if (static_cast<std::size_t>(shape.internal_count()) != labels.size())
    throw std::invalid_argument("pedigree_from_shape: label count differs from internal node count");
  PedigreeBuilder b(shape.d(), root);
  std::size_t next_label = 0;
  std::size_t pos = 0;
  const std::string& code = shape.preorder();
  auto rec = [&](auto&& self, std::size_t u) -> void {
    if (code[pos++] == '0') return;
    const auto kids = b.expand(u, labels[next_label++]);
    for (auto c : kids) self(self, c);
  };
  rec(rec, b.root());
  return std::move(b).build();
}

/// Random proper s-pedigree of [d+1]: the shape is uniform over the
/// (d+1)-ary trees with s internal nodes, the outgoing labels a uniform
/// ordered sample without replacement from {d+2, ..., n}, assigned in preorder.
inline ProperPedigree random_proper(int d, int s, int n, std::uint64_t seed) {
  require_dimension(d);
  if (s < 0) throw std::invalid_argument("random_proper: s must be >= 0");
  if (n < s + d + 1) throw std::invalid_argument("random_proper: label pool {d+2..n} smaller than s");
  SplitMix64 rng(seed);
  const TreeShape shape = random_tree(d, s, rng);
  std::vector<int> pool;
  for (int z = d + 2; z <= n; ++z) pool.push_back(z);
  for (int i = 0; i < s; ++i) std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(i) + rng.below(pool.size() - static_cast<std::size_t>(i))]);
  pool.resize(static_cast<std::size_t>(s));
  return ProperPedigree(pedigree_from_shape(shape, Face::initial(d + 1), pool));
}

/// Random balanced proper pedigree: root subdivided once, each of its d + 1
/// subtrees an independent uniform tree with s' internal nodes, so
/// s = (d+1)s' + 1 and every root subtree has ds' + 1 leaves.
inline ProperPedigree random_balanced_proper(int d, int s_sub, int n, std::uint64_t seed) {
  require_dimension(d);
  const int s = (d + 1) * s_sub + 1;
  if (n < s + d + 1) throw std::invalid_argument("random_balanced_proper: label pool {d+2..n} smaller than s");
  SplitMix64 rng(seed);
  std::string code = "1";
  for (int j = 0; j <= d; ++j) code += random_tree(d, s_sub, rng).preorder();
  std::vector<int> pool;
  for (int z = d + 2; z <= n; ++z) pool.push_back(z);
  for (int i = 0; i < s; ++i) std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(i) + rng.below(pool.size() - static_cast<std::size_t>(i))]);
  pool.resize(static_cast<std::size_t>(s));
  return ProperPedigree(pedigree_from_shape(TreeShape(d, code), Face::initial(d + 1), pool));
}

/// True if the d + 1 root subtrees have equal leaf counts.
inline bool is_balanced(const ProperPedigree& t) {
  const auto& p = t.pedigree();
  const auto& root = p.node(p.root());
  if (root.is_leaf()) return false;
  std::set<std::size_t> counts;
  for (auto c : root.children) counts.insert(subpedigree(p, c).leaves().size());
  return counts.size() == 1;
}

// ---------------------------------------------------------------------------
// H(P, T): a proper pedigree containing P among its leaves and using only the
// labels of P.

struct TreeNode {
  Face face;
  int label = 0;
  std::vector<TreeNode> children;

  bool is_leaf() const noexcept { return children.empty(); }
};

inline TreeNode to_tree(const Pedigree& p, std::size_t i) {
  const auto& v = p.node(i);
  TreeNode t{v.face, v.label, {}};
  for (auto c : v.children) t.children.push_back(to_tree(p, c));
  return t;
}

inline Pedigree to_pedigree(const TreeNode& t, int d) {
  PedigreeBuilder b(d, t.face);
  auto rec = [&](auto&& self, const TreeNode& n, std::size_t idx) -> void {
    if (n.is_leaf()) return;
    const auto kids = b.expand(idx, n.label);
    for (std::size_t k = 0; k < kids.size(); ++k) {
      const auto it = std::find_if(n.children.begin(), n.children.end(),
                                   [&](const TreeNode& c) { return c.face == b.face(kids[k]); });
      if (it == n.children.end()) throw std::logic_error("to_pedigree: child does not match subdivision");
      self(self, *it, kids[k]);
    }
  };
  rec(rec, t, b.root());
  return std::move(b).build();
}

/// Which nonempty root subtree eliminates an unused root label z. The
/// subtree at v_j = root \ {x_j} ∪ {z} has index j; either extreme gives a
/// valid construction.
enum class EliminationSide { LowestIndex, HighestIndex };

namespace detail {

inline void collect_leaves(const TreeNode& t, std::vector<Face>& out) {
  if (t.is_leaf()) out.push_back(t.face);
  for (const auto& c : t.children) collect_leaves(c, out);
}

// Deepest internal node containing z; ties broken by smallest face in colex.
inline void deepest_with(TreeNode& t, int z, int depth, TreeNode*& best, int& best_depth) {
  if (t.is_leaf()) return;
  if (t.face.contains(z) &&
      (best == nullptr || depth > best_depth || (depth == best_depth && ColexLess{}(t.face, best->face)))) {
    best = &t;
    best_depth = depth;
  }
  for (auto& c : t.children) deepest_with(c, z, depth + 1, best, best_depth);
}

inline void substitute(TreeNode& t, int z, int y) {
  if (t.face.contains(z)) t.face = t.face.replace(z, y);
  if (t.label == z) t.label = y;
  for (auto& c : t.children) substitute(c, z, y);
}

inline TreeNode build_h(const TreeNode& t, const std::set<Face>& P, EliminationSide side) {
  if (t.is_leaf()) return t;
  std::vector<Face> leaves;
  collect_leaves(t, leaves);
  std::vector<Face> pt;
  for (const Face& f : leaves)
    if (P.count(f)) pt.push_back(f);
  if (pt.empty()) return TreeNode{t.face, 0, {}};

  TreeNode h{t.face, t.label, {}};
  std::vector<bool> nonempty;
  for (const auto& c : t.children) {
    h.children.push_back(build_h(c, P, side));
    std::vector<Face> cl;
    collect_leaves(c, cl);
    nonempty.push_back(std::any_of(cl.begin(), cl.end(), [&](const Face& f) { return P.count(f) > 0; }));
  }
  const int z = t.label;
  const bool z_used = std::any_of(pt.begin(), pt.end(), [&](const Face& f) { return f.contains(z); });
  if (z_used) return h;

  // z must go: pick a root subtree with P-leaves, find its deepest internal
  // node u containing z, and replace u by the subtree at u' = u[z -> y].
  std::size_t j = 0;
  int best = -1;
  for (std::size_t k = 0; k < nonempty.size(); ++k) {
    if (!nonempty[k]) continue;
    int idx = 0;  // position of the root label missing from the child
    while (t.children[k].face.contains(t.face[idx])) ++idx;
    if (best < 0 || (side == EliminationSide::LowestIndex ? idx < best : idx > best)) {
      best = idx;
      j = k;
    }
  }
  TreeNode* u = nullptr;
  int depth = -1;
  deepest_with(h.children[j], z, 1, u, depth);
  if (u == nullptr) throw std::logic_error("H(P,T): no internal node contains the unused label");
  const int y = u->label;
  const Face u_prime = u->face.replace(z, y);
  auto it = std::find_if(u->children.begin(), u->children.end(), [&](const TreeNode& c) { return c.face == u_prime; });
  if (it == u->children.end()) throw std::logic_error("H(P,T): subdivision child u' missing");
  TreeNode replacement = *it;
  *u = std::move(replacement);
  substitute(h, z, y);
  return h;
}

}  // namespace detail

/// H(P, T) for a proper pedigree T and P ⊆ leaves(T).
inline ProperPedigree subpedigree_h(const ProperPedigree& t, const std::set<Face>& P,
                                    EliminationSide side = EliminationSide::LowestIndex) {
  const auto leaves = t.leaves();
  for (const Face& f : P)
    if (!std::binary_search(leaves.begin(), leaves.end(), f))
      throw std::invalid_argument("subpedigree_h: " + f.to_string() + " is not a leaf of T");
  const TreeNode h = detail::build_h(to_tree(t.pedigree(), t.pedigree().root()), P, side);
  return ProperPedigree(to_pedigree(h, t.d()));
}

/// R = ∪P \ root.
inline std::vector<int> internal_labels(const std::set<Face>& P, const Face& root) {
  std::vector<int> out;
  for (int z : label_union(P))
    if (!root.contains(z)) out.push_back(z);
  return out;
}

// ---------------------------------------------------------------------------
// Encircled and boundary labels

enum class LabelClass { EncircledInP, EncircledInComplement, Boundary };

inline const char* to_string(LabelClass c) {
  switch (c) {
    case LabelClass::EncircledInP: return "encircled-in-P";
    case LabelClass::EncircledInComplement: return "encircled-in-complement";
    case LabelClass::Boundary: return "boundary";
  }
  return "?";
}

/// Classifies each internal label z of L = leaves(T) relative to P ⊆ L:
/// lk_z(P) = lk_z(L), lk_z(P) = ∅, or neither.
inline std::map<int, LabelClass> classify_labels(const std::set<Face>& P, const ProperPedigree& t) {
  const auto leaves = t.leaves();
  for (const Face& f : P)
    if (!std::binary_search(leaves.begin(), leaves.end(), f))
      throw std::invalid_argument("classify_labels: P is not a subset of L");
  std::map<int, LabelClass> out;
  for (int z : label_union(leaves)) {
    if (t.root().contains(z)) continue;
    const auto lp = link(z, P);
    const auto ll = link(z, leaves);
    out[z] = lp == ll ? LabelClass::EncircledInP : lp.empty() ? LabelClass::EncircledInComplement : LabelClass::Boundary;
  }
  return out;
}

/// For d = 2: the edges of a link form a single cycle (a triangulated circle).
inline bool link_is_cycle(const std::set<Face>& edges) {
  if (edges.size() < 3) return false;
  std::map<int, std::vector<int>> adj;
  for (const Face& e : edges) {
    if (e.size() != 2) return false;
    adj[e[0]].push_back(e[1]);
    adj[e[1]].push_back(e[0]);
  }
  for (const auto& [v, nb] : adj)
    if (nb.size() != 2) return false;
  std::set<int> seen;
  std::vector<int> work{adj.begin()->first};
  while (!work.empty()) {
    const int v = work.back();
    work.pop_back();
    if (!seen.insert(v).second) continue;
    for (int w : adj[v]) work.push_back(w);
  }
  return seen.size() == adj.size();
}

// ---------------------------------------------------------------------------
// Exhaustive enumeration over balanced proper pedigrees of [d+1]

struct LeafSubsetRecord {
  std::vector<Face> faces;  // P
  int r = 0;                // internal labels of P
  int t = 0;                // boundary labels of P
  std::size_t containing = 0;  // |{L : P ⊆ L}|
};

struct LeafSubsetEnumeration {
  int d = 0, s_sub = 0, s = 0, n = 0;
  std::size_t family_size = 0;  // |𝓛| by enumeration
  BigInt formula_size;          // C_d(s')^{d+1} (n-d-1)_s
  std::vector<LeafSubsetRecord> records;
  std::map<std::pair<int, int>, std::size_t> bins;  // (r, t) -> count
};

/// Upper bound on |𝓛| * 2^{ds+1} for enumerate_leaf_subsets.
inline constexpr double kLeafSubsetBudget = 4.0e6;

/// All nonempty proper subsets P of leaf sets of balanced proper s-pedigrees
/// of [d+1] (s = (d+1)s' + 1) with labels in [n], with their (r, t) counts.
/// A label of P is encircled if its link in P equals its link in every
/// leaf set containing P.
inline LeafSubsetEnumeration enumerate_leaf_subsets(int d, int s_sub, int n) {
  require_dimension(d);
  LeafSubsetEnumeration out;
  out.d = d;
  out.s_sub = s_sub;
  out.s = (d + 1) * s_sub + 1;
  out.n = n;
  const int s = out.s;
  const int leaves_per_tree = d * s + 1;
  if (n < s + d + 1) throw std::invalid_argument("enumerate_leaf_subsets: n too small for s labels");
  BigInt falling = 1;
  for (int i = 0; i < s; ++i) falling *= (n - d - 1 - i);
  out.formula_size = boost::multiprecision::pow(fuss_catalan(d, s_sub), static_cast<unsigned>(d + 1)) * falling;
  if (out.formula_size.convert_to<double>() * std::ldexp(1.0, leaves_per_tree) > kLeafSubsetBudget)
    throw std::length_error("enumerate_leaf_subsets: instance exceeds the enumeration budget");

  const ColexRanker rk(n, d + 1);
  const auto shapes = enumerate_trees(d, s_sub);
  std::set<std::vector<std::uint64_t>> family;
  std::vector<std::size_t> pick(static_cast<std::size_t>(d + 1), 0);
  std::vector<int> pool;
  for (int z = d + 2; z <= n; ++z) pool.push_back(z);
  while (true) {
    std::string code = "1";
    for (auto k : pick) code += shapes[k].preorder();
    const TreeShape shape(d, code);
    // every ordered choice of s distinct labels
    std::vector<int> labels;
    std::vector<bool> used(pool.size(), false);
    auto rec = [&](auto&& self) -> void {
      if (labels.size() == static_cast<std::size_t>(s)) {
        std::vector<std::uint64_t> key;
        for (const Face& f : pedigree_from_shape(shape, Face::initial(d + 1), labels).leaves()) key.push_back(rk.rank(f));
        std::sort(key.begin(), key.end());
        family.insert(std::move(key));
        return;
      }
      for (std::size_t i = 0; i < pool.size(); ++i) {
        if (used[i]) continue;
        used[i] = true;
        labels.push_back(pool[i]);
        self(self);
        labels.pop_back();
        used[i] = false;
      }
    };
    rec(rec);
    std::size_t k = 0;
    while (k < pick.size() && ++pick[k] == shapes.size()) pick[k++] = 0;
    if (k == pick.size()) break;
  }
  out.family_size = family.size();

  const std::vector<std::vector<std::uint64_t>> fam(family.begin(), family.end());
  std::map<std::vector<std::uint64_t>, std::vector<std::size_t>> containing;
  const std::uint32_t full = (1u << leaves_per_tree) - 1;
  for (std::size_t li = 0; li < fam.size(); ++li) {
    for (std::uint32_t mask = 1; mask < full; ++mask) {
      std::vector<std::uint64_t> key;
      for (int b = 0; b < leaves_per_tree; ++b)
        if (mask >> b & 1u) key.push_back(fam[li][static_cast<std::size_t>(b)]);
      containing[key].push_back(li);
    }
  }

  const Face root = Face::initial(d + 1);
  auto faces_of = [&](const std::vector<std::uint64_t>& ranks) {
    std::vector<Face> fs;
    for (auto r : ranks) fs.push_back(rk.unrank(r));
    return fs;
  };
  for (const auto& [key, owners] : containing) {
    LeafSubsetRecord rec;
    rec.faces = faces_of(key);
    rec.containing = owners.size();
    const std::set<Face> pset(rec.faces.begin(), rec.faces.end());
    const auto r_labels = internal_labels(pset, root);
    rec.r = static_cast<int>(r_labels.size());
    for (int z : r_labels) {
      const auto lp = link(z, pset);
      bool encircled = true;
      for (auto li : owners) {
        if (link(z, faces_of(fam[li])) != lp) {
          encircled = false;
          break;
        }
      }
      if (!encircled) ++rec.t;
    }
    ++out.bins[{rec.r, rec.t}];
    out.records.push_back(std::move(rec));
  }
  return out;
}

/// Bound on the number of P with r - t encircled and t boundary labels:
/// 2 (α_d n)^r (2^d r)^t.
inline double leaf_subset_count_bound(int d, int n, int r, int t) {
  return 2.0 * std::pow(alpha_value(d) * n, r) * std::pow(std::ldexp(1.0, d) * r, t);
}

/// The same count summed over boundary-label sets B before the final
/// simplification: C(n-d-1, t) · 2 (α_d n)^{r-t} (α_d 2^d r)^t.
inline double leaf_subset_count_envelope(int d, int n, int r, int t) {
  const double a = alpha_value(d);
  return static_cast<double>(binomial(n - d - 1, t)) * 2.0 * std::pow(a * n, r - t) *
         std::pow(a * std::ldexp(1.0, d) * r, t);
}

/// Bound on the number of leaf sets containing a given P:
/// 2 (α_d n)^{s-r} (α_d 2^d (s - r + t))^t.
inline double containing_count_bound(int d, int n, int s, int r, int t) {
  const double a = alpha_value(d);
  return 2.0 * std::pow(a * n, s - r) * std::pow(a * std::ldexp(1.0, d) * (s - r + t), t);
}

// ---------------------------------------------------------------------------
// Export

/// {"d":…, "root":[…], "nodes":[{"face":[…],"z":int-or-null,"children":[indices]}]}
inline nlohmann::json to_json(const Pedigree& p) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& v : p.nodes()) {
    nlohmann::json z = v.is_leaf() ? nlohmann::json(nullptr) : nlohmann::json(v.label);
    nodes.push_back({{"face", v.face.labels()}, {"z", std::move(z)}, {"children", v.children}});
  }
  return {{"d", p.d()}, {"root", p.root_face().labels()}, {"nodes", std::move(nodes)}};
}

inline Pedigree pedigree_from_json(const nlohmann::json& j) {
  const int d = j.at("d").get<int>();
  const Face root(j.at("root").get<std::vector<int>>());
  std::vector<PedigreeNode> nodes;
  std::size_t root_idx = 0;
  for (const auto& n : j.at("nodes")) {
    PedigreeNode v{Face(n.at("face").get<std::vector<int>>()), n.at("z").is_null() ? 0 : n.at("z").get<int>(),
                   n.at("children").get<std::vector<std::size_t>>()};
    if (v.face == root) root_idx = nodes.size();
    nodes.push_back(std::move(v));
  }
  return Pedigree(d, std::move(nodes), root_idx);
}

/// Graphviz rendering: faces as node labels, leaves boxed, internal nodes
/// circled.
inline std::string to_dot(const Pedigree& p, const std::string& name = "pedigree") {
  std::ostringstream os;
  os << "digraph " << name << " {\n  node [shape=circle, fontsize=10];\n";
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto& v = p.node(i);
    os << "  n" << i << " [label=\"" << v.face.to_string() << "\"" << (v.is_leaf() ? ", shape=box" : "") << "];\n";
  }
  for (std::size_t i = 0; i < p.size(); ++i)
    for (auto c : p.node(i).children) os << "  n" << i << " -> n" << c << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace stackperc
