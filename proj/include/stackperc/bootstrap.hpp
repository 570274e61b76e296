#pragma once

// K_{d+2}^{d+1} bootstrap percolation on the d-faces of [n]: sampling the
// Linial–Meshulam complex, closure with infection certificates, incremental
// insertion, and the one-face-at-a-time critical-step process.

#include "stackperc/combinatorics.hpp"
#include "stackperc/rng.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdint>
#include <deque>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace stackperc {

struct Instance {
  int n = 0;
  int d = 2;
  double p = 0.0;
  std::uint64_t seed = 0;

  void validate() const {
    if (d < 1 || d > kMaxDimension) throw std::invalid_argument("Instance: d out of range");
    if (n < d + 2) throw std::invalid_argument("Instance: need n >= d + 2");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("Instance: p must lie in [0, 1]");
  }
};

/// Y ~ Y_d(n, p): every d-face independently with probability p, drawn by
/// geometric skips over colex ranks.
inline FaceSet sample_complex(const Instance& inst) {
  inst.validate();
  FaceSet y(inst.n, inst.d);
  const std::uint64_t total = y.universe();
  if (inst.p <= 0.0) return y;
  if (inst.p >= 1.0) {
    for (std::uint64_t r = 0; r < total; ++r) y.insert_rank(r);
    return y;
  }
  SplitMix64 rng(inst.seed);
  const double log_q = std::log1p(-inst.p);
  double pos = -1.0;
  while (true) {
    pos += 1.0 + std::floor(std::log(rng.uniform_open0()) / log_q);
    if (pos >= static_cast<double>(total)) break;
    y.insert_rank(static_cast<std::uint64_t>(pos));
  }
  return y;
}

/// How a face came to be infected: it is the last facet of face ∪ {apex}.
struct Certificate {
  int apex = 0;
  std::vector<std::uint64_t> parents;  // ranks of the other d + 1 facets, by omitted element
};

enum class QueueDiscipline { Fifo, Lifo };

struct AddOutcome {
  bool already_infected = false;
  std::uint64_t newly_infected = 0;  // including the added face itself
};

class BootstrapState {
 public:
  BootstrapState(Instance inst, FaceSet y0)
      : instance_(inst), y0_(std::move(y0)), infected_(y0_), apex_(y0_.universe(), 0) {
    instance_.n = y0_.n();
    instance_.d = y0_.d();
    order_ = y0_.ranks();
  }

  const Instance& instance() const noexcept { return instance_; }
  int n() const noexcept { return y0_.n(); }
  int d() const noexcept { return y0_.d(); }
  const FaceSet& y0() const noexcept { return y0_; }
  const FaceSet& infected() const noexcept { return infected_; }
  /// Every infected face: Y0 in colex order, then the cascade in infection order.
  const std::vector<std::uint64_t>& order() const noexcept { return order_; }

  bool in_y0(std::uint64_t r) const noexcept { return y0_.contains_rank(r); }
  bool is_infected(std::uint64_t r) const noexcept { return infected_.contains_rank(r); }

  /// Certificate of an infected face outside Y0.
  std::optional<Certificate> certificate(std::uint64_t r) const {
    if (r >= apex_.size() || apex_[r] == 0) return std::nullopt;
    const ColexRanker& rk = infected_.ranker();
    const Face w = rk.unrank(r).with(apex_[r]);
    Certificate c{apex_[r], {}};
    for (int i = 0; i < w.size(); ++i)
      if (w[i] != apex_[r]) c.parents.push_back(rk.rank_without(w, i));
    return c;
  }

  double density() const noexcept {
    return static_cast<double>(infected_.size()) / static_cast<double>(infected_.universe());
  }

  /// Work-queue propagation: when f is infected, inspect w = f ∪ {z} for every
  /// z ∉ f (ascending); if exactly one facet of w is uninfected, infect it
  /// with apex w \ facet. Stops early once every face is infected.
  void cascade(std::deque<std::uint64_t>& queue, QueueDiscipline discipline) {
    const int n = this->n();
    const int k = d() + 1;
    const ColexRanker& rk = infected_.ranker();
    const std::uint64_t total = infected_.universe();
    std::array<std::uint64_t, kMaxFaceSize> facet_rank{};
    while (!queue.empty() && infected_.size() < total) {
      std::uint64_t r;
      if (discipline == QueueDiscipline::Fifo) {
        r = queue.front();
        queue.pop_front();
      } else {
        r = queue.back();
        queue.pop_back();
      }
      const Face f = rk.unrank(r);
      for (int z = 1; z <= n; ++z) {
        if (f.contains(z)) continue;
        const Face w = f.with(z);
        int missing = -1;
        bool several = false;
        for (int i = 0; i <= k; ++i) {
          if (w[i] == z) continue;
          const std::uint64_t g = rk.rank_without(w, i);
          facet_rank[static_cast<std::size_t>(i)] = g;
          if (!infected_.contains_rank(g)) {
            if (missing >= 0) {
              several = true;
              break;
            }
            missing = i;
          }
        }
        if (several || missing < 0) continue;
        const std::uint64_t g = facet_rank[static_cast<std::size_t>(missing)];
        infected_.insert_rank(g);
        apex_[g] = static_cast<std::uint16_t>(w[missing]);
        order_.push_back(g);
        queue.push_back(g);
      }
    }
  }

  /// Adds f to Y0 of a closed state and restarts the cascade from f alone.
  AddOutcome add(const Face& f) {
    const std::uint64_t r = infected_.rank(f);
    if (infected_.contains_rank(r)) return {true, 0};
    const std::uint64_t before = infected_.size();
    y0_.insert_rank(r);
    infected_.insert_rank(r);
    order_.push_back(r);
    std::deque<std::uint64_t> queue{r};
    cascade(queue, QueueDiscipline::Fifo);
    return {false, infected_.size() - before};
  }

 private:
  Instance instance_;
  FaceSet y0_;
  FaceSet infected_;
  std::vector<std::uint64_t> order_;
  std::vector<std::uint16_t> apex_;  // 0 = no certificate
};

/// Bootstrap closure of Y0 with per-face certificates. The infected set is
/// independent of the queue discipline; certificates are canonical for FIFO.
inline BootstrapState close(const Instance& inst, const FaceSet& y0,
                            QueueDiscipline discipline = QueueDiscipline::Fifo) {
  BootstrapState st(inst, y0);
  std::deque<std::uint64_t> queue(st.order().begin(), st.order().end());
  st.cascade(queue, discipline);
  return st;
}

inline BootstrapState close(const FaceSet& y0, QueueDiscipline discipline = QueueDiscipline::Fifo) {
  return close(Instance{y0.n(), y0.d(), 0.0, 0}, y0, discipline);
}

inline BootstrapState close(const Instance& inst, QueueDiscipline discipline = QueueDiscipline::Fifo) {
  return close(inst, sample_complex(inst), discipline);
}

inline constexpr int kNaiveClosureMaxN = 16;

/// Reference closure: repeated full scans over all (d+2)-subsets until no
/// change.
inline FaceSet close_naive(const FaceSet& y0) {
  if (y0.n() > kNaiveClosureMaxN)
    throw std::invalid_argument("close_naive: n = " + std::to_string(y0.n()) + " exceeds the limit of " +
                                std::to_string(kNaiveClosureMaxN));
  const int n = y0.n();
  const int d = y0.d();
  FaceSet cur = y0;
  const ColexRanker big(n, d + 2);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::uint64_t wr = 0; wr < big.total(); ++wr) {
      const Face w = big.unrank(wr);
      int missing = -1, count = 0;
      for (int i = 0; i < w.size(); ++i) {
        if (!cur.contains_rank(cur.ranker().rank_without(w, i))) {
          ++count;
          missing = i;
        }
      }
      if (count == 1) {
        cur.insert_rank(cur.ranker().rank_without(w, missing));
        changed = true;
      }
    }
  }
  return cur;
}

inline double density(const BootstrapState& st) { return st.density(); }

/// Adds f to Y0 of a closed state and restarts the cascade from f alone.
/// A face that is already infected leaves the state unchanged (flagged).
inline AddOutcome incremental_add(BootstrapState& st, const Face& f) { return st.add(f); }

/// Soundness of every certificate: parents are exactly the other facets of
/// face ∪ {apex} and all precede the face in infection order. Returns a
/// description of the first violation.
inline std::optional<std::string> check_certificates(const BootstrapState& st) {
  std::vector<std::int64_t> position(st.infected().universe(), -1);
  const auto& order = st.order();
  for (std::size_t i = 0; i < order.size(); ++i) position[order[i]] = static_cast<std::int64_t>(i);
  if (order.size() != st.infected().size()) return "order length differs from infected count";
  for (std::size_t i = 0; i < order.size(); ++i) {
    const std::uint64_t r = order[i];
    const auto cert = st.certificate(r);
    if (st.in_y0(r)) {
      if (cert) return "face " + std::to_string(r) + " in Y0 carries a certificate";
      continue;
    }
    if (!cert) return "infected face " + std::to_string(r) + " has no certificate";
    const Face f = st.infected().face(r);
    if (f.contains(cert->apex)) return "apex inside certified face " + f.to_string();
    const Face w = f.with(cert->apex);
    std::vector<std::uint64_t> expect;
    for (const Face& g : facets(w, st.d()))
      if (g != f) expect.push_back(st.infected().ranker().rank(g));
    if (expect != cert->parents) return "parents of " + f.to_string() + " are not the facets of face+apex";
    for (auto p : cert->parents)
      if (position[p] < 0 || position[p] >= static_cast<std::int64_t>(i))
        return "parent of " + f.to_string() + " not infected earlier";
  }
  return std::nullopt;
}

/// Replays certificates in order starting from Y0; true if the replay
/// regenerates the infected set.
inline bool replay_certificates(const BootstrapState& st) {
  FaceSet replay = st.y0();
  for (auto r : st.order()) {
    if (st.in_y0(r)) continue;
    const auto cert = st.certificate(r);
    if (!cert) return false;
    for (auto p : cert->parents)
      if (!replay.contains_rank(p)) return false;
    replay.insert_rank(r);
  }
  return replay == st.infected();
}

/// {"instance":…, "y0":[ranks], "order":[ranks], "certs":{rank:{"apex":z,"parents":[ranks]}}}
inline nlohmann::json to_json(const BootstrapState& st) {
  const auto& inst = st.instance();
  nlohmann::json certs = nlohmann::json::object();
  for (auto r : st.order()) {
    if (auto c = st.certificate(r)) certs[std::to_string(r)] = {{"apex", c->apex}, {"parents", c->parents}};
  }
  return {{"instance", {{"n", inst.n}, {"d", inst.d}, {"p", inst.p}, {"seed", inst.seed}}},
          {"y0", st.y0().ranks()},
          {"order", st.order()},
          {"certs", std::move(certs)}};
}

// ---------------------------------------------------------------------------

struct Trajectory {
  std::uint64_t total = 0;                              // C(n, d+1)
  std::vector<std::pair<std::uint64_t, double>> points;  // (t, X̂(t))
  std::uint64_t tau = 0;                                // first t with X̂(t) = 1
  double density_before_tau = 0.0;                      // X̂(τ - 1)
};

/// Upper bound on C(n, d+1) for the one-face-at-a-time process.
inline constexpr std::uint64_t kCriticalStepFaceBudget = 50'000'000;

/// Inserts all faces in a seeded uniform order via incremental_add and
/// records X̂(t) at `sample_points` evenly spaced times (plus t = τ - 1, τ and
/// the final time).
inline Trajectory critical_step(int n, int d, std::uint64_t seed, std::uint64_t sample_points) {
  FaceSet empty(n, d);
  if (empty.universe() > kCriticalStepFaceBudget)
    throw std::invalid_argument("critical_step: C(n, d+1) exceeds the face budget");
  BootstrapState st = close(empty);
  Trajectory tr;
  tr.total = empty.universe();
  std::vector<std::uint64_t> perm(tr.total);
  for (std::uint64_t i = 0; i < tr.total; ++i) perm[i] = i;
  SplitMix64 rng(seed);
  shuffle(std::span<std::uint64_t>(perm), rng);
  const std::uint64_t stride = std::max<std::uint64_t>(1, tr.total / std::max<std::uint64_t>(1, sample_points));
  const ColexRanker& rk = empty.ranker();
  double prev = 0.0;
  tr.points.emplace_back(0, 0.0);
  for (std::uint64_t t = 1; t <= tr.total; ++t) {
    incremental_add(st, rk.unrank(perm[t - 1]));
    const double x = st.density();
    const bool full = st.infected().size() == tr.total;
    if (full && tr.tau == 0) {
      tr.tau = t;
      tr.density_before_tau = prev;
      if (tr.points.back().first != t - 1) tr.points.emplace_back(t - 1, prev);
      tr.points.emplace_back(t, x);
    } else if (t % stride == 0 || t == tr.total) {
      if (tr.points.back().first != t) tr.points.emplace_back(t, x);
    }
    prev = x;
    if (full) {
      if (tr.points.back().first != tr.total) tr.points.emplace_back(tr.total, 1.0);
      break;
    }
  }
  return tr;
}

}  // namespace stackperc
