#pragma once

// Verification suites: each check runs one family of invariants at a given
// scale and reports pass/fail with a short detail string. Used by the
// `verify` command and by the acceptance runner.

#include "stackperc/analysis.hpp"
#include "stackperc/bootstrap.hpp"
#include "stackperc/experiments.hpp"
#include "stackperc/pedigree.hpp"
#include "stackperc/rigidity.hpp"
#include "stackperc/shifting.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace stackperc {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// Collects excess-bound outcomes of every pedigree checked anywhere.
struct WitnessLedger {
  std::size_t checked = 0;
  std::size_t violations = 0;
  std::string first_violation;

  void record(const PedigreeStats& st, int d, const std::string& origin) {
    ++checked;
    if (!check_excess_bound(st, d)) {
      if (violations++ == 0) {
        std::ostringstream os;
        os << origin << ": m=" << st.m << " l=" << st.l << " s=" << st.s << " a=" << st.a << " b=" << st.b;
        first_violation = os.str();
      }
    }
  }
  /// Also checks validity and, up to kBettiCheckFaces faces, β_d >= m.
  void record(const Pedigree& p, const std::string& origin) {
    const auto st = stats(p);
    record(st, p.d(), origin);
    if (auto v = validate(p)) flag(origin + ": invalid pedigree: " + v->message);
    if (p.size() <= kBettiCheckFaces) {
      ++betti_checked;
      const auto beta = betti_top(p.faces(), RankMethod::Exact).value;
      if (static_cast<std::int64_t>(beta) < st.m)
        flag(origin + ": beta_d = " + std::to_string(beta) + " < m = " + std::to_string(st.m));
    }
  }
  /// Proper pedigrees are trees: b = 0 and l = ds + 1.
  void record(const ProperPedigree& t, const std::string& origin) {
    record(t.pedigree(), origin);
    const auto st = stats(t.pedigree());
    if (st.b != 0 || st.l != t.d() * st.s + 1)
      flag(origin + ": proper pedigree with b=" + std::to_string(st.b) + " l=" + std::to_string(st.l));
  }

  static constexpr std::size_t kBettiCheckFaces = 2000;
  std::size_t betti_checked = 0;

 private:
  void flag(const std::string& what) {
    if (violations++ == 0) first_violation = what;
  }

 public:
  void record(const std::vector<SweepRecord>& recs, int d, const std::string& origin) {
    for (const auto& r : recs)
      if (r.witness) record(r.witness->stats, d, origin);
  }
};

/// Runs `body` and stamps the elapsed time on its result.
inline CheckResult timed(const std::string& name, const std::function<CheckResult()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  CheckResult r;
  try {
    r = body();
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.name = name;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

/// Accumulates failures of individual assertions inside a check.
class Tally {
 public:
  void expect(bool ok, const std::string& what) {
    ++total_;
    if (!ok && failures_++ == 0) first_ = what;
  }
  bool ok() const noexcept { return failures_ == 0; }
  std::size_t total() const noexcept { return total_; }
  std::string summary(const std::string& extra = "") const {
    std::ostringstream os;
    os << total_ - failures_ << "/" << total_ << " assertions";
    if (!extra.empty()) os << "; " << extra;
    if (failures_) os << "; first failure: " << first_;
    return os.str();
  }
  CheckResult result(const std::string& extra = "") const { return {"", ok(), summary(extra), 0.0}; }

 private:
  std::size_t total_ = 0, failures_ = 0;
  std::string first_;
};

// ---------------------------------------------------------------------------
// Combinatorics and analysis

inline CheckResult check_fuss_catalan(int s_max = 8) {
  Tally t;
  for (int d : {2, 3}) {
    const auto rec = fuss_catalan_by_recursion(d, s_max);
    for (int s = 0; s <= s_max; ++s) {
      const BigInt closed = fuss_catalan(d, s);
      const auto trees = enumerate_trees(d, s);
      std::set<std::string> distinct;
      for (const auto& tr : trees) distinct.insert(tr.preorder());
      t.expect(closed == rec[static_cast<std::size_t>(s)] && closed == BigInt(trees.size()) &&
                   distinct.size() == trees.size(),
               "d=" + std::to_string(d) + " s=" + std::to_string(s));
    }
  }
  return t.result();
}

inline CheckResult check_root_consistency() {
  Tally t;
  double worst = 0;
  for (int d = 2; d <= 5; ++d) {
    const double crit = critical_gamma(d);
    for (int i = 0; i < 100; ++i) {
      const double g = crit * i / 99.0;
      const double q = std::abs(q_gamma(d, g, hat_gamma(d, g)));
      worst = std::max(worst, q);
      t.expect(q <= 1e-12, "|Q| at d=" + std::to_string(d) + " gamma=" + fmt(g));
    }
    const double at_crit = hat_gamma(d, crit);
    t.expect(std::abs(at_crit - std::pow(d + 1.0, -1.0 / d)) <= 1e-6, "critical root at d=" + std::to_string(d));
  }
  const double series = density_series(2, 0.2, 60);
  t.expect(std::abs(series - hat_gamma(2, 0.2)) <= 1e-8, "series vs root at gamma=0.2");
  return t.result("max |Q(root)| = " + fmt(worst));
}

// ---------------------------------------------------------------------------
// Pedigrees

inline CheckResult check_betti_excess_example(std::uint64_t seed = 6) {
  Tally t;
  const Pedigree p = betti_excess_pedigree();
  t.expect(!validate(p).has_value(), "validates");
  const auto st = stats(p);
  t.expect(st.m == 6 && st.l == 11 && st.s == 3, "(m,l,s) = (6,11,3)");
  t.expect(st.a == 4 && st.b == 2, "a = 4, b = 2");
  const auto beta = betti_top(p.faces(), RankMethod::Exact);
  t.expect(beta.value == 7, "beta_2 = 7 (got " + std::to_string(beta.value) + ")");
  const auto delta = shift_confirmed(p.faces(), 6, seed);
  t.expect(b_top(delta) == 7, "b_top = 7");
  t.expect(check_excess_bound(st, 2), "excess bound");
  return t.result();
}

/// Random Y0 at a density giving nontrivial cascades for small n.
inline FaceSet random_small_complex(int n, int d, std::uint64_t seed) {
  SplitMix64 rng(seed);
  const double p = 0.05 + 0.5 * rng.uniform01();
  return sample_complex(Instance{n, d, p, rng.next()});
}

inline CheckResult check_bootstrap_oracle(int per_cell = 100, int n_max = 12, WitnessLedger* ledger = nullptr,
                                          std::uint64_t seed = 11) {
  Tally t;
  std::size_t cascades = 0;
  for (int d : {2, 3}) {
    for (int n = d + 2; n <= n_max; ++n) {
      for (int i = 0; i < per_cell; ++i) {
        const auto y0 = random_small_complex(n, d, derive_seed(seed, static_cast<std::uint64_t>(d * 1000 + n * 100 + i)));
        const auto fifo = close(y0, QueueDiscipline::Fifo);
        const auto lifo = close(y0, QueueDiscipline::Lifo);
        const std::string where = "d=" + std::to_string(d) + " n=" + std::to_string(n) + " i=" + std::to_string(i);
        t.expect(fifo.infected() == close_naive(y0), "close = close_naive at " + where);
        t.expect(fifo.infected() == lifo.infected(), "FIFO = LIFO at " + where);
        t.expect(!check_certificates(fifo).has_value(), "certificates at " + where);
        if (fifo.infected().size() > y0.size()) ++cascades;
        if (ledger) {
          for (auto r : fifo.order()) {
            if (fifo.in_y0(r)) continue;
            ledger->record(*extract_witness(fifo, fifo.infected().face(r)), "closure " + where);
          }
        }
      }
    }
  }
  return t.result(std::to_string(cascades) + " instances with a nontrivial cascade");
}

/// Pedigrees used across suites: random proper and balanced ones, G_k,
/// the (6,11,3) example, and witnesses of small closures, all with at most `max_labels`
/// labels.
inline std::vector<Pedigree> pedigree_corpus(int count, int max_labels, std::uint64_t seed, std::vector<int> dims = {2, 3}) {
  std::vector<Pedigree> out;
  out.push_back(betti_excess_pedigree());
  for (int d : dims)
    for (int k = d + 2; k <= max_labels; ++k) out.push_back(generate_gk(d, k));
  SplitMix64 rng(seed);
  std::size_t attempts = 0;
  while (static_cast<int>(out.size()) < count && attempts++ < 100000) {
    const int d = dims[static_cast<std::size_t>(rng.below(dims.size()))];
    const int kind = static_cast<int>(rng.below(3));
    const int smax = max_labels - d - 1;
    if (kind == 0) {
      const int s = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(smax)));
      out.push_back(random_proper(d, s, max_labels, rng.next()).pedigree());
    } else if (kind == 1) {
      if ((d + 1) + 1 > smax) continue;
      const int sub = static_cast<int>(rng.below(static_cast<std::uint64_t>((smax - 1) / (d + 1) + 1)));
      out.push_back(random_balanced_proper(d, sub, max_labels, rng.next()).pedigree());
    } else {
      const int n = d + 3 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_labels - d - 2)));
      const auto y0 = random_small_complex(n, d, rng.next());
      const auto st = close(y0);
      std::vector<std::uint64_t> cascade;
      for (auto r : st.order())
        if (!st.in_y0(r)) cascade.push_back(r);
      if (cascade.empty()) continue;
      out.push_back(*extract_witness(st, st.infected().face(cascade[rng.below(cascade.size())])));
    }
  }
  return out;
}

inline CheckResult check_excess_bounds(const WitnessLedger& external, std::uint64_t seed = 34) {
  WitnessLedger own;
  for (const auto& p : pedigree_corpus(400, 12, seed)) own.record(p, "corpus");
  for (int d : {2, 3})
    for (int k = d + 2; k <= 12; ++k) own.record(generate_gk(d, k), "G_k");
  SplitMix64 rng(seed);
  for (int i = 0; i < 200; ++i) {
    const int d = 2 + static_cast<int>(rng.below(2));
    const int s = static_cast<int>(rng.below(40));
    own.record(random_proper(d, s, s + d + 1 + static_cast<int>(rng.below(20)), rng.next()), "proper");
    const int sub = static_cast<int>(rng.below(8));
    own.record(random_balanced_proper(d, sub, (d + 1) * sub + d + 2 + static_cast<int>(rng.below(20)), rng.next()),
               "balanced");
  }
  std::ostringstream os;
  os << own.checked << " generated pedigrees (" << own.betti_checked << " with beta_d >= m checked), " << external.checked
     << " extracted witnesses; violations "
     << own.violations + external.violations;
  if (own.violations) os << "; first: " << own.first_violation;
  if (external.violations) os << "; first witness: " << external.first_violation;
  const bool nonempty = external.checked > 0;
  if (!nonempty) os << "; no witnesses were collected";
  return {"", own.violations == 0 && external.violations == 0 && nonempty, os.str(), 0};
}

namespace detail {

// T \ T_v leaf sets, as sorted vectors.
inline std::set<std::vector<Face>> complements_of_subtrees(const Pedigree& t) {
  std::set<std::vector<Face>> out;
  const auto all = t.leaves();
  for (std::size_t v = 0; v < t.size(); ++v) {
    const auto sub = subpedigree(t, v).leaves();
    std::vector<Face> rest;
    std::set_difference(all.begin(), all.end(), sub.begin(), sub.end(), std::back_inserter(rest));
    out.insert(rest);
  }
  return out;
}

}  // namespace detail

/// All proper pedigrees of [3] with s <= s_max internal nodes (every shape,
/// every assignment of the labels 4..s+3) and every leaf subset P.
inline CheckResult check_subpedigree_h(int s_max = 4, int d = 2) {
  Tally t;
  std::size_t pairs = 0;
  for (int s = 0; s <= s_max; ++s) {
    std::vector<int> labels;
    for (int i = 0; i < s; ++i) labels.push_back(d + 2 + i);
    for (const auto& shape : enumerate_trees(d, s)) {
      std::vector<int> perm = labels;
      do {
        const ProperPedigree tree(pedigree_from_shape(shape, Face::initial(d + 1), perm));
        const auto leaves = tree.leaves();
        const auto complements = detail::complements_of_subtrees(tree.pedigree());
        const std::uint32_t l = static_cast<std::uint32_t>(leaves.size());
        for (std::uint32_t mask = 0; mask < (1u << l); ++mask) {
          std::set<Face> P;
          for (std::uint32_t b = 0; b < l; ++b)
            if (mask >> b & 1u) P.insert(leaves[b]);
          ++pairs;
          for (auto side : {EliminationSide::LowestIndex, EliminationSide::HighestIndex}) {
            const auto h = subpedigree_h(tree, P, side);
            const auto hl = h.leaves();
            const auto r = static_cast<std::int64_t>(internal_labels(P, tree.root()).size());
            const std::string where = shape.preorder() + " mask=" + std::to_string(mask);
            t.expect(std::includes(hl.begin(), hl.end(), P.begin(), P.end()), "P in leaves(H) " + where);
            t.expect(static_cast<std::int64_t>(hl.size()) == d * r + 1 && h.s() == r, "|leaves(H)| = dr+1 " + where);
            const bool full = P.size() == leaves.size();
            t.expect((std::vector<Face>(P.begin(), P.end()) == hl) == full, "P = L(H) iff P = L(T) " + where);
            if (!full) {
              const auto sz = static_cast<std::int64_t>(P.size());
              t.expect(sz <= d * r, "|P| <= dr " + where);
              t.expect((sz == d * r) == (complements.count(std::vector<Face>(P.begin(), P.end())) > 0),
                       "|P| = dr iff P = L(T) \\ L(T_v) " + where);
            }
          }
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
  }
  return t.result(std::to_string(pairs) + " (T, P) pairs");
}

inline CheckResult check_leaf_subset_bounds(std::vector<int> ns = {7, 8, 9}, int d = 2, int s_sub = 1) {
  Tally t;
  std::ostringstream extra;
  double worst1 = 0, worst2 = 0;
  for (int n : ns) {
    const auto e = enumerate_leaf_subsets(d, s_sub, n);
    t.expect(BigInt(e.family_size) == e.formula_size,
             "|L| = " + std::to_string(e.family_size) + " vs formula " + e.formula_size.str() + " at n=" + std::to_string(n));
    for (const auto& [rt, count] : e.bins) {
      const auto [r, tt] = rt;
      const double b1 = leaf_subset_count_bound(d, n, r, tt);
      const double env = leaf_subset_count_envelope(d, n, r, tt);
      worst1 = std::max(worst1, static_cast<double>(count) / std::min(b1, env));
      t.expect(static_cast<double>(count) <= b1, "item 1 bound at n=" + std::to_string(n) + " (r,t)=(" +
                                                     std::to_string(r) + "," + std::to_string(tt) + ")");
      t.expect(static_cast<double>(count) <= env, "item 1 envelope at n=" + std::to_string(n));
    }
    for (const auto& rec : e.records) {
      const double b2 = containing_count_bound(d, n, e.s, rec.r, rec.t);
      worst2 = std::max(worst2, static_cast<double>(rec.containing) / b2);
      t.expect(static_cast<double>(rec.containing) <= b2, "item 2 bound at n=" + std::to_string(n));
    }
    extra << "n=" << n << ": |L|=" << e.family_size << ", |P|=" << e.records.size() << "; ";
  }
  extra << "max count/bound item1 " << fmt(worst1) << ", item2 " << fmt(worst2);
  return t.result(extra.str());
}

inline CheckResult check_label_classes(int trials = 200, std::uint64_t seed = 44) {
  Tally t;
  SplitMix64 rng(seed);
  for (int i = 0; i < trials; ++i) {
    const auto tree = random_balanced_proper(2, 2, 15, rng.next());
    const auto leaves = tree.leaves();
    std::set<Face> P;
    const double keep = rng.uniform01();
    for (const Face& f : leaves)
      if (rng.uniform01() < keep) P.insert(f);
    for (const auto& [z, cls] : classify_labels(P, tree)) {
      const bool cycle = link_is_cycle(link(z, P));
      t.expect((cls == LabelClass::EncircledInP) == cycle, "cycle test agrees for label " + std::to_string(z));
    }
  }
  return t.result();
}

// ---------------------------------------------------------------------------
// Shifting

inline std::vector<Face> random_pure_complex(int n, int d, SplitMix64& rng, double density) {
  std::vector<Face> out;
  const ColexRanker rk(n, d + 1);
  for (std::uint64_t r = 0; r < rk.total(); ++r)
    if (rng.uniform01() < density) out.push_back(rk.unrank(r));
  if (out.empty()) out.push_back(rk.unrank(rng.below(rk.total())));
  return out;
}

struct ShiftingScale {
  int random_complexes = 100;
  int nested_pairs = 100;
  int v0_pedigrees = 200;
  int nevo_unions = 50;
};

inline CheckResult check_shifting(const ShiftingScale& scale = {}, std::uint64_t seed = 23) {
  Tally t;
  std::size_t shifts = 0;
  auto confirmed = [&](const std::vector<Face>& K, int n, std::uint64_t s) {
    ++shifts;
    return shift_confirmed(K, n, s);
  };
  for (int d : {2, 3}) {
    std::vector<Face> facets_of_simplex = facets(Face::initial(d + 2), d);
    std::sort(facets_of_simplex.begin(), facets_of_simplex.end());
    t.expect(confirmed(facets_of_simplex, d + 4, seed).faces == facets_of_simplex, "Delta(boundary) = boundary");
    const Face single = d == 2 ? Face{5, 6, 7} : Face{2, 5, 6, 7};
    t.expect(confirmed({single}, 8, seed).faces == std::vector<Face>{Face::initial(d + 1)},
             "Delta(single face) = {[d+1]}");
  }
  SplitMix64 rng(seed);
  for (int i = 0; i < scale.random_complexes; ++i) {
    const int d = 2 + static_cast<int>(rng.below(2));
    const int n = d + 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(9 - d - 1)));
    const auto K = random_pure_complex(n, d, rng, 0.2 + 0.6 * rng.uniform01());
    const auto delta = confirmed(K, n, rng.next());
    t.expect(delta.size() == K.size(), "|Delta| = |K|");
    t.expect(is_shifted(delta), "Delta shifted");
    t.expect(betti_top(K, RankMethod::Exact).value == b_top(delta), "beta_d = b_d(Delta)");
  }
  for (int i = 0; i < scale.nested_pairs; ++i) {
    const int d = 2 + static_cast<int>(rng.below(2));
    const int n = d + 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(9 - d - 1)));
    const auto K = random_pure_complex(n, d, rng, 0.3 + 0.5 * rng.uniform01());
    std::vector<Face> sub;
    for (const Face& f : K)
      if (rng.uniform01() < 0.6) sub.push_back(f);
    if (sub.empty()) sub.push_back(K.front());
    const std::uint64_t s = rng.next();
    const auto big = confirmed(K, n, s), small = confirmed(sub, n, s);
    t.expect(std::includes(big.faces.begin(), big.faces.end(), small.faces.begin(), small.faces.end()),
             "monotonicity");
  }
  for (const auto& p : pedigree_corpus(scale.v0_pedigrees, 9, rng.next())) {
    if (stats(p).s < 1 || stats(p).s > 6) continue;
    t.expect(shift_contains_v0(p, rng.next()), "v0 in the shift of " + p.root_face().to_string());
  }
  std::size_t nevo_f = 0, nevo_in = 0;
  for (int i = 0; i < scale.nevo_unions; ++i) {
    // Γ1 on [a] and Γ2 on u ∪ {a+1..v}, sharing only the face u.
    const int d = 2 + static_cast<int>(rng.below(2));
    const int v = d + 3 + static_cast<int>(rng.below(static_cast<std::uint64_t>(8 - d - 2)));
    const int a = d + 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(v - d - 1)));
    std::vector<int> first(static_cast<std::size_t>(a));
    for (int x = 0; x < a; ++x) first[static_cast<std::size_t>(x)] = x + 1;
    shuffle(std::span<int>(first), rng);
    std::vector<int> u_labels(first.begin(), first.begin() + d + 1);
    const Face u(u_labels);
    std::vector<int> second_ground = u_labels;
    for (int x = a + 1; x <= v; ++x) second_ground.push_back(x);
    auto random_on = [&](const std::vector<int>& ground) {
      std::vector<Face> out{u};
      const int m = static_cast<int>(ground.size());
      const ColexRanker rk(m, d + 1);
      for (std::uint64_t r = 0; r < rk.total(); ++r) {
        if (rng.uniform01() >= 0.5) continue;
        std::vector<int> f;
        for (int x : rk.unrank(r)) f.push_back(ground[static_cast<std::size_t>(x - 1)]);
        out.emplace_back(f);
      }
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
      return out;
    };
    std::vector<int> ground1(static_cast<std::size_t>(a));
    for (int x = 0; x < a; ++x) ground1[static_cast<std::size_t>(x)] = x + 1;
    const auto g1 = random_on(ground1);
    const auto g2 = random_on(second_ground);
    const std::uint64_t s = rng.next();
    for (const Face& f : detail::lex_subsets(v, d + 1)) {
      const auto c = verify_nevo(g1, g2, f, v, s);
      ++nevo_f;
      nevo_in += c.in_union_shift;
      t.expect(c.holds(), "Nevo criterion for f=" + f.to_string());
    }
  }
  std::ostringstream os;
  os << shifts << " two-seed confirmed shifts; Nevo: " << nevo_f << " faces, " << nevo_in << " in the union's shift";
  return t.result(os.str());
}

// ---------------------------------------------------------------------------
// Rigidity

inline CheckResult check_rigidity(int pedigrees = 100, int a2_triples = 1000, int a3_configs = 100,
                                    std::uint64_t seed = 77) {
  Tally t;
  SplitMix64 rng(seed);
  std::size_t checked = 0;
  for (const auto& p : pedigree_corpus(pedigrees, 12, rng.next())) {
    const auto cfg = PointConfig::random(p.d(), static_cast<int>(p.labels().size()), rng.next());
    const auto rep = verify_leaf_rank(p, cfg);
    ++checked;
    const auto st = stats(p);
    t.expect(rep.pass, "rank(A) = ds+1 on " + p.root_face().to_string());
    t.expect(rep.kernel_dim == st.a, "ker dim = l - (ds+1)");
    std::vector<Face> leaves;
    const auto support = p.labels();
    for (const Face& f : p.leaves()) {
      std::vector<int> v;
      for (int x : f) v.push_back(static_cast<int>(std::lower_bound(support.begin(), support.end(), x) - support.begin()) + 1);
      leaves.emplace_back(v);
    }
    const auto a = rigidity_matrix(leaves, cfg);
    const auto motions = motion_basis(cfg);
    t.expect(motions.size() == static_cast<std::size_t>(p.d() * p.d() + p.d() - 1) &&
                 vector_rank(motions) == motions.size(),
             "motion basis has full rank d^2+d-1");
    for (const auto& m : motions)
      for (std::size_t c = 0; c < a.cols(); ++c) {
        BigInt s = 0;
        for (std::size_t r = 0; r < a.rows(); ++r) s += m[r] * a(r, c);
        if (s != 0) {
          t.expect(false, "motion annihilates A_K");
          break;
        }
      }
  }
  for (int i = 0; i < a2_triples; ++i) {
    const int d = 2 + static_cast<int>(rng.below(2));
    const int count = d + 2 + static_cast<int>(rng.below(4));
    const auto cfg = PointConfig::random(d, count, rng.next());
    std::vector<int> labels(static_cast<std::size_t>(count));
    for (int x = 0; x < count; ++x) labels[static_cast<std::size_t>(x)] = x + 1;
    shuffle(std::span<int>(labels), rng);
    const Face f(std::vector<int>(labels.begin(), labels.begin() + d + 1));
    t.expect(verify_subdivision_identity(f, labels[static_cast<std::size_t>(d + 1)], cfg), "subdivision identity");
  }
  for (int i = 0; i < a3_configs; ++i) {
    const int d = 2 + static_cast<int>(rng.below(2));
    const int count = d + 3 + static_cast<int>(rng.below(3));
    const auto cfg = PointConfig::random(d, count, rng.next());
    std::vector<int> labels(static_cast<std::size_t>(count));
    for (int x = 0; x < count; ++x) labels[static_cast<std::size_t>(x)] = x + 1;
    shuffle(std::span<int>(labels), rng);
    const int z = labels.back();
    const Face f(std::vector<int>(labels.begin(), labels.begin() + d + 1));
    std::vector<Face> extra{f};
    const ColexRanker rk(count, d + 1);
    for (std::uint64_t r = 0; r < rk.total(); ++r) {
      const Face g = rk.unrank(r);
      if (!g.contains(z) && rng.uniform01() < 0.3) extra.push_back(g);
    }
    t.expect(verify_new_label_independence(f, z, extra, cfg, rng.next()), "new-label independence");
  }
  return t.result(std::to_string(checked) + " pedigrees");
}

// ---------------------------------------------------------------------------
// Statistical checks

inline CheckResult check_density_law(int n = 200, std::vector<double> gammas = {0.1, 0.2, 0.3}, int trials = 50,
                                     std::uint64_t seed = 1, int jobs = 1, WitnessLedger* ledger = nullptr) {
  const int d = 2;
  const auto recs = run_sweep(d, {n}, gammas, trials, seed, jobs);
  if (ledger) ledger->record(recs, d, "density sweep");
  Tally t;
  std::ostringstream os;
  for (const auto& s : summarize(d, recs)) {
    const double rel = std::abs(s.mean_scaled - s.hat_gamma) / s.hat_gamma;
    os << "gamma=" << s.gamma << ": mean " << fmt(s.mean_scaled).substr(0, 8) << " vs " << fmt(s.hat_gamma).substr(0, 8)
       << " (" << fmt(100 * rel).substr(0, 5) << "%) ";
    t.expect(rel <= 0.15, "gamma=" + fmt(s.gamma));
  }
  return t.result(os.str());
}

inline CheckResult check_phase_transition(int n = 200, int trials = 20, std::uint64_t seed = 2, int jobs = 1,
                                          WitnessLedger* ledger = nullptr) {
  const int d = 2;
  const double crit = critical_gamma(d);
  const auto recs = run_sweep(d, {n}, {0.7 * crit, 1.5 * crit}, trials, seed, jobs);
  if (ledger) ledger->record(recs, d, "threshold scan");
  const auto sum = summarize(d, recs);
  Tally t;
  const double cap = 10.0 / std::sqrt(static_cast<double>(n));
  t.expect(sum[0].percolation_frequency <= 0.1, "frequency at 0.7 crit");
  t.expect(sum[0].max_x_hat <= cap, "X_hat <= 10/sqrt(n) at 0.7 crit");
  t.expect(sum[1].percolation_frequency >= 0.9, "frequency at 1.5 crit");
  std::size_t biggest = 0, leaves = 0, labels = 0;
  for (const auto& r : recs)
    if (r.witness && r.witness->vertices > biggest) {
      biggest = r.witness->vertices;
      leaves = static_cast<std::size_t>(r.witness->stats.l);
      labels = static_cast<std::size_t>(r.witness->stats.s + d + 1);
    }
  std::ostringstream os;
  os << "freq(0.7c)=" << sum[0].percolation_frequency << " max X_hat(0.7c)=" << fmt(sum[0].max_x_hat).substr(0, 8)
     << " (cap " << fmt(cap).substr(0, 6) << ") freq(1.5c)=" << sum[1].percolation_frequency
     << "; largest witness " << biggest << " vertices, " << leaves << " leaves, " << labels << " labels";
  // Reported only: a vertex pair covered by no initial face can never be
  // infected, which caps the full-percolation frequency at finite n.
  std::size_t root_hits = 0;
  double min_x = 1.0;
  for (const auto& r : recs) {
    if (r.gamma != recs.back().gamma) continue;
    if (r.witness && r.witness->target == Face::initial(d + 1)) ++root_hits;
    min_x = std::min(min_x, r.x_hat);
  }
  const double p_hi = p_of_gamma(d, n, 1.5 * crit);
  const double uncovered = static_cast<double>(binomial(n, 2)) * std::pow(1.0 - p_hi, n - 2);
  os << "; at 1.5 crit: [d+1] infected in " << root_hits << "/" << trials << ", min X_hat " << fmt(min_x).substr(0, 8)
     << ", expected uncovered pairs " << fmt(uncovered).substr(0, 5);
  return t.result(os.str());
}

/// Renders every command twice (and sweeps with 1 and 2 workers) and
/// compares the bytes.
inline CheckResult check_determinism(std::uint64_t seed = 5) {
  Tally t;
  auto base = [&](const std::string& cmd, const std::string& format) {
    ExperimentConfig c;
    c.command = cmd;
    c.d = 2;
    c.n = {40};
    c.gamma = {0.9};
    c.trials = 3;
    c.seed = seed;
    c.format = format;
    return c;
  };
  for (const std::string format : {"csv", "json"}) {
    t.expect(render_sample(base("sample", format)) == render_sample(base("sample", format)), "sample " + format);
    t.expect(render_close(base("close", format)) == render_close(base("close", format)), "close " + format);
    auto sweep = base("density-sweep", format);
    sweep.gamma = {0.2, 0.3};
    auto par = sweep;
    par.jobs = 2;
    t.expect(render_density_sweep(sweep) == render_density_sweep(sweep), "density-sweep " + format);
    // jobs is not part of the echoed config, so the bytes must match.
    t.expect(render_density_sweep(par) == render_density_sweep(sweep), "parallel density-sweep " + format);
    auto scan = base("threshold-scan", format);
    scan.gamma.clear();
    scan.trials = 2;
    t.expect(render_threshold_scan(scan) == render_threshold_scan(scan), "threshold-scan " + format);
    auto cs = base("critical-step", format);
    cs.n = {20};
    t.expect(render_critical_step(cs) == render_critical_step(cs), "critical-step " + format);
  }
  for (const std::string format : {"csv", "json", "dot"}) {
    auto w = base("witness", format);
    w.gamma = {1.5};
    t.expect(render_witness(w).first == render_witness(w).first, "witness " + format);
  }
  return t.result();
}

}  // namespace stackperc
