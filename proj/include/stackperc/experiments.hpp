#pragma once

// Experiment drivers behind the command-line tool: density sweeps, threshold
// scans, critical-step runs and witness extraction, with CSV/JSON/DOT
// writers. Every output embeds its configuration and the library version.

#include "stackperc/analysis.hpp"
#include "stackperc/bootstrap.hpp"
#include "stackperc/pedigree.hpp"
#include "stackperc/rng.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace stackperc {

inline constexpr const char* kVersion = "stackperc 0.1.0";

struct ExperimentConfig {
  std::string command;
  int d = 2;
  std::vector<int> n{200};
  std::vector<double> gamma;       // p = γ n^{-1/d}
  std::optional<double> p;         // overrides γ when set
  int trials = 1;
  std::uint64_t seed = 0;
  std::string format = "csv";      // csv | json | dot
  int jobs = 1;
  bool allow_supercritical = false;
  bool timing = false;             // adds wall-clock columns (breaks byte-identity)
  std::optional<Face> target;      // witness target face
  std::uint64_t sample_points = 100;
  std::string suite;

  nlohmann::json to_json() const {
    nlohmann::json j = {{"command", command}, {"d", d}, {"n", n}, {"gamma", gamma}, {"trials", trials},
                        {"seed", seed}, {"format", format}, {"allow_supercritical", allow_supercritical},
                        {"timing", timing}, {"sample_points", sample_points}};
    j["p"] = p ? nlohmann::json(*p) : nlohmann::json(nullptr);
    j["target"] = target ? nlohmann::json(target->labels()) : nlohmann::json(nullptr);
    if (!suite.empty()) j["suite"] = suite;
    return j;
  }
};

/// Round-trip decimal rendering used in every text output.
inline std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << x;
  return os.str();
}

/// `#`-prefixed preamble: version, then the configuration as JSON.
inline std::string csv_preamble(const ExperimentConfig& cfg) {
  return std::string("# ") + kVersion + "\n# config: " + cfg.to_json().dump() + "\n";
}

inline double p_of_gamma(int d, int n, double gamma) { return gamma * std::pow(static_cast<double>(n), -1.0 / d); }

// ---------------------------------------------------------------------------
// Sweeps

struct WitnessSummary {
  Face target;
  std::size_t vertices = 0;
  PedigreeStats stats;
  bool bound_ok = false;
  double bound_margin = 0.0;  // bound - b
};

struct SweepRecord {
  int n = 0;
  double gamma = 0.0;
  double p = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t y0_faces = 0;
  std::uint64_t infected = 0;
  double x_hat = 0.0;
  bool percolated = false;  // X̂ = 1
  std::optional<WitnessSummary> witness;
  double wall_seconds = 0.0;

  double scaled(int d) const { return std::pow(static_cast<double>(n), 1.0 / d) * x_hat; }
};

inline WitnessSummary summarize_witness(const Pedigree& w) {
  WitnessSummary s;
  s.target = w.root_face();
  s.vertices = w.size();
  s.stats = stats(w);
  s.bound_ok = check_excess_bound(s.stats, w.d());
  s.bound_margin = excess_bound(s.stats.a, w.d()) - static_cast<double>(s.stats.b);
  return s;
}

/// The face whose witness a sweep reports: [d+1] if it was infected by the
/// cascade, otherwise the last face the cascade infected; none if nothing
/// was infected beyond Y0.
inline std::optional<Face> default_witness_target(const BootstrapState& st) {
  const Face base = Face::initial(st.d() + 1);
  const auto r = st.infected().ranker().rank(base);
  if (st.is_infected(r) && !st.in_y0(r)) return base;
  const auto& order = st.order();
  if (order.empty() || st.in_y0(order.back())) return std::nullopt;
  return st.infected().face(order.back());
}

/// One closure run on Y_d(n, p) with p = γ n^{-1/d}.
inline SweepRecord run_trial(int d, int n, double gamma, std::uint64_t seed, bool with_witness = true) {
  const auto t0 = std::chrono::steady_clock::now();
  SweepRecord rec;
  rec.n = n;
  rec.gamma = gamma;
  rec.p = p_of_gamma(d, n, gamma);
  rec.seed = seed;
  const Instance inst{n, d, rec.p, seed};
  const BootstrapState st = close(inst);
  rec.y0_faces = st.y0().size();
  rec.infected = st.infected().size();
  rec.x_hat = st.density();
  rec.percolated = rec.infected == st.infected().universe();
  if (with_witness)
    if (auto target = default_witness_target(st)) rec.witness = summarize_witness(*extract_witness(st, *target));
  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

/// Runs every (n, γ, trial) cell; trial t uses seed derive_seed(seed, t) for
/// every (n, γ). Cells are distributed over `jobs` threads by index and
/// stored by index, so the result does not depend on `jobs`.
inline std::vector<SweepRecord> run_sweep(int d, const std::vector<int>& ns, const std::vector<double>& gammas,
                                          int trials, std::uint64_t seed, int jobs = 1, bool with_witness = true) {
  require_dimension(d);
  if (trials < 1) throw std::invalid_argument("run_sweep: trials must be >= 1");
  struct Cell {
    int n;
    double gamma;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (int n : ns)
    for (double g : gammas)
      for (int t = 0; t < trials; ++t) cells.push_back({n, g, derive_seed(seed, static_cast<std::uint64_t>(t))});
  std::vector<SweepRecord> out(cells.size());
  const auto workers = static_cast<std::size_t>(std::max(1, jobs));
  auto work = [&](std::size_t w) {
    for (std::size_t i = w; i < cells.size(); i += workers)
      out[i] = run_trial(d, cells[i].n, cells[i].gamma, cells[i].seed, with_witness);
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  return out;
}

struct SweepSummary {
  int n = 0;
  double gamma = 0.0;
  std::size_t trials = 0;
  double mean_scaled = 0.0;    // mean of n^{1/d} X̂
  double stderr_scaled = 0.0;
  double hat_gamma = std::numeric_limits<double>::quiet_NaN();  // NaN above the critical value
  double mean_x_hat = 0.0;
  double max_x_hat = 0.0;
  double percolation_frequency = 0.0;
};

inline std::vector<SweepSummary> summarize(int d, const std::vector<SweepRecord>& records) {
  std::map<std::pair<int, double>, std::vector<const SweepRecord*>> groups;
  std::vector<std::pair<int, double>> order;
  for (const auto& r : records) {
    auto key = std::make_pair(r.n, r.gamma);
    if (!groups.count(key)) order.push_back(key);
    groups[key].push_back(&r);
  }
  std::vector<SweepSummary> out;
  for (const auto& key : order) {
    const auto& g = groups[key];
    SweepSummary s;
    s.n = key.first;
    s.gamma = key.second;
    s.trials = g.size();
    double sum = 0, sum2 = 0, perc = 0;
    for (const auto* r : g) {
      const double v = r->scaled(d);
      sum += v;
      sum2 += v * v;
      s.mean_x_hat += r->x_hat;
      s.max_x_hat = std::max(s.max_x_hat, r->x_hat);
      perc += r->percolated ? 1 : 0;
    }
    const double k = static_cast<double>(g.size());
    s.mean_scaled = sum / k;
    s.stderr_scaled = k > 1 ? std::sqrt(std::max(0.0, (sum2 - k * s.mean_scaled * s.mean_scaled) / (k - 1)) / k) : 0.0;
    s.mean_x_hat /= k;
    s.percolation_frequency = perc / k;
    if (s.gamma <= critical_gamma(d) * (1 + 1e-12)) s.hat_gamma = hat_gamma(d, s.gamma);
    out.push_back(s);
  }
  return out;
}

inline nlohmann::json to_json(const SweepRecord& r, bool timing) {
  nlohmann::json j = {{"n", r.n}, {"gamma", r.gamma}, {"p", r.p}, {"seed", r.seed}, {"y0_faces", r.y0_faces},
                      {"infected", r.infected}, {"x_hat", r.x_hat}, {"percolated", r.percolated}};
  if (r.witness) {
    const auto& w = *r.witness;
    j["witness"] = {{"target", w.target.labels()}, {"vertices", w.vertices}, {"leaves", w.stats.l},
                    {"internal", w.stats.m}, {"labels", w.stats.s + static_cast<std::int64_t>(w.target.size())},
                    {"a", w.stats.a}, {"b", w.stats.b}, {"bound_ok", w.bound_ok}};
  } else {
    j["witness"] = nullptr;
  }
  if (timing) j["wall_seconds"] = r.wall_seconds;
  return j;
}

inline nlohmann::json to_json(const SweepSummary& s) {
  return {{"n", s.n},
          {"gamma", s.gamma},
          {"trials", s.trials},
          {"mean_scaled_x_hat", s.mean_scaled},
          {"stderr_scaled_x_hat", s.stderr_scaled},
          {"hat_gamma", std::isnan(s.hat_gamma) ? nlohmann::json(nullptr) : nlohmann::json(s.hat_gamma)},
          {"mean_x_hat", s.mean_x_hat},
          {"max_x_hat", s.max_x_hat},
          {"percolation_frequency", s.percolation_frequency}};
}

/// Records as CSV (one per line) followed by the per-(n, γ) summary as a
/// second CSV block, both under the metadata preamble.
inline std::string sweep_csv(const ExperimentConfig& cfg, const std::vector<SweepRecord>& records,
                             const std::vector<SweepSummary>& summary) {
  std::ostringstream os;
  os << csv_preamble(cfg);
  os << "n,gamma,p,seed,y0_faces,infected,x_hat,scaled_x_hat,percolated,"
        "witness_vertices,witness_leaves,witness_labels,witness_a,witness_b,witness_bound_ok";
  if (cfg.timing) os << ",wall_seconds";
  os << '\n';
  for (const auto& r : records) {
    os << r.n << ',' << fmt(r.gamma) << ',' << fmt(r.p) << ',' << r.seed << ',' << r.y0_faces << ',' << r.infected
       << ',' << fmt(r.x_hat) << ',' << fmt(r.scaled(cfg.d)) << ',' << (r.percolated ? 1 : 0) << ',';
    if (r.witness) {
      const auto& w = *r.witness;
      os << w.vertices << ',' << w.stats.l << ',' << w.stats.s + w.target.size() << ',' << w.stats.a << ','
         << w.stats.b << ',' << (w.bound_ok ? 1 : 0);
    } else {
      os << ",,,,,";
    }
    if (cfg.timing) os << ',' << fmt(r.wall_seconds);
    os << '\n';
  }
  os << "\n# summary\nn,gamma,trials,mean_scaled_x_hat,stderr_scaled_x_hat,hat_gamma,mean_x_hat,max_x_hat,"
        "percolation_frequency\n";
  for (const auto& s : summary)
    os << s.n << ',' << fmt(s.gamma) << ',' << s.trials << ',' << fmt(s.mean_scaled) << ',' << fmt(s.stderr_scaled)
       << ',' << fmt(s.hat_gamma) << ',' << fmt(s.mean_x_hat) << ',' << fmt(s.max_x_hat) << ','
       << fmt(s.percolation_frequency) << '\n';
  return os.str();
}

inline std::string sweep_json(const ExperimentConfig& cfg, const std::vector<SweepRecord>& records,
                              const std::vector<SweepSummary>& summary) {
  nlohmann::json recs = nlohmann::json::array(), sums = nlohmann::json::array();
  for (const auto& r : records) recs.push_back(to_json(r, cfg.timing));
  for (const auto& s : summary) sums.push_back(to_json(s));
  nlohmann::json j = {{"version", kVersion}, {"config", cfg.to_json()}, {"records", recs}, {"summary", sums}};
  return j.dump(2) + "\n";
}

/// γ-grid of `points` values spanning [lo, hi]·α_d^{-1/d}.
inline std::vector<double> threshold_grid(int d, double lo, double hi, int points) {
  if (points < 2) return {lo * critical_gamma(d)};
  std::vector<double> out;
  for (int i = 0; i < points; ++i) out.push_back((lo + (hi - lo) * i / (points - 1)) * critical_gamma(d));
  return out;
}

// ---------------------------------------------------------------------------
// Critical step

inline std::string critical_step_csv(const ExperimentConfig& cfg, const std::vector<Trajectory>& runs) {
  std::ostringstream os;
  os << csv_preamble(cfg);
  os << "# tau_scaled = tau / C(n,d+1), reference (alpha_d n)^(-1/d) = " << fmt(critical_p(cfg.d, cfg.n.front()))
     << "\n";
  os << "run,seed,t,x_hat\n";
  for (std::size_t i = 0; i < runs.size(); ++i)
    for (const auto& [t, x] : runs[i].points)
      os << i << ',' << derive_seed(cfg.seed, i) << ',' << t << ',' << fmt(x) << '\n';
  os << "\n# summary\nrun,seed,total,tau,tau_scaled,x_hat_before_tau,scaled_x_hat_before_tau\n";
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& r = runs[i];
    os << i << ',' << derive_seed(cfg.seed, i) << ',' << r.total << ',' << r.tau << ','
       << fmt(static_cast<double>(r.tau) / static_cast<double>(r.total)) << ',' << fmt(r.density_before_tau) << ','
       << fmt(r.density_before_tau * std::pow(static_cast<double>(cfg.n.front()), 1.0 / cfg.d)) << '\n';
  }
  return os.str();
}

inline std::string critical_step_json(const ExperimentConfig& cfg, const std::vector<Trajectory>& runs) {
  nlohmann::json arr = nlohmann::json::array();
  for (std::size_t i = 0; i < runs.size(); ++i) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& [t, x] : runs[i].points) pts.push_back({t, x});
    arr.push_back({{"seed", derive_seed(cfg.seed, i)},
                   {"total", runs[i].total},
                   {"tau", runs[i].tau},
                   {"x_hat_before_tau", runs[i].density_before_tau},
                   {"points", pts}});
  }
  return nlohmann::json{{"version", kVersion}, {"config", cfg.to_json()}, {"runs", arr}}.dump(2) + "\n";
}

inline std::vector<Trajectory> run_critical_steps(const ExperimentConfig& cfg) {
  std::vector<Trajectory> out(static_cast<std::size_t>(cfg.trials));
  const auto workers = static_cast<std::size_t>(std::max(1, cfg.jobs));
  auto work = [&](std::size_t w) {
    for (std::size_t i = w; i < out.size(); i += workers)
      out[i] = critical_step(cfg.n.front(), cfg.d, derive_seed(cfg.seed, i), cfg.sample_points);
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work, w);
  work(0);
  for (auto& t : pool) t.join();
  return out;
}

// ---------------------------------------------------------------------------
// Witness

/// One-line stats for a witness pedigree.
inline std::string witness_stats_line(const Pedigree& w) {
  const auto s = summarize_witness(w);
  std::ostringstream os;
  os << "target=" << s.target.to_string() << " vertices=" << s.vertices << " internal=" << s.stats.m
     << " leaves=" << s.stats.l << " labels=" << s.stats.s + w.d() + 1 << " a=" << s.stats.a << " b=" << s.stats.b
     << " bound_ok=" << (s.bound_ok ? "true" : "false") << " bound_margin=" << fmt(s.bound_margin);
  return os.str();
}

// ---------------------------------------------------------------------------
// Command rendering (shared by the CLI and the determinism checks)

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline Instance instance_of(const ExperimentConfig& cfg) {
  Instance inst;
  inst.n = cfg.n.front();
  inst.d = cfg.d;
  inst.seed = cfg.seed;
  if (cfg.p) {
    inst.p = *cfg.p;
  } else if (!cfg.gamma.empty()) {
    inst.p = p_of_gamma(cfg.d, inst.n, cfg.gamma.front());
  } else {
    throw UsageError("one of --gamma or --p is required");
  }
  inst.validate();
  return inst;
}

inline std::string render_sample(const ExperimentConfig& cfg) {
  const FaceSet y = sample_complex(instance_of(cfg));
  if (cfg.format == "json")
    return nlohmann::json{{"version", kVersion}, {"config", cfg.to_json()}, {"complex", to_json(y)}}.dump(2) + "\n";
  std::ostringstream os;
  os << csv_preamble(cfg) << "rank,face\n";
  for (auto r : y.ranks()) os << r << ',' << y.face(r).to_string() << '\n';
  return os.str();
}

inline std::string render_close(const ExperimentConfig& cfg) {
  const BootstrapState st = close(instance_of(cfg));
  if (cfg.format == "json")
    return nlohmann::json{{"version", kVersion}, {"config", cfg.to_json()}, {"closure", to_json(st)}}.dump(2) + "\n";
  std::ostringstream os;
  os << csv_preamble(cfg) << "# y0_faces=" << st.y0().size() << " infected=" << st.infected().size()
     << " x_hat=" << fmt(st.density()) << "\nstep,rank,face,apex,parents\n";
  std::size_t step = 0;
  for (auto r : st.order()) {
    os << step++ << ',' << r << ',' << st.infected().face(r).to_string() << ',';
    if (auto c = st.certificate(r)) {
      os << c->apex << ',';
      for (std::size_t i = 0; i < c->parents.size(); ++i) os << (i ? " " : "") << c->parents[i];
    } else {
      os << ',';
    }
    os << '\n';
  }
  return os.str();
}

/// Witness of cfg.target (default [d+1]) after closing Y_d(n, p). Returns
/// the rendered output and whether the target was infected.
inline std::pair<std::string, bool> render_witness(const ExperimentConfig& cfg) {
  const BootstrapState st = close(instance_of(cfg));
  const Face target = cfg.target.value_or(Face::initial(cfg.d + 1));
  target.validate(cfg.n.front(), cfg.d);
  const auto w = extract_witness(st, target);
  if (!w) {
    const std::string msg = "target " + target.to_string() + " is not infected";
    if (cfg.format == "json")
      return {nlohmann::json{{"version", kVersion}, {"config", cfg.to_json()}, {"witness", nullptr}, {"message", msg}}.dump(2) + "\n", false};
    return {csv_preamble(cfg) + "# " + msg + "\n", false};
  }
  if (cfg.format == "dot") {
    std::string out = "// " + std::string(kVersion) + "\n// config: " + cfg.to_json().dump() + "\n// " + witness_stats_line(*w) + "\n";
    return {out + to_dot(*w, "witness"), true};
  }
  if (cfg.format == "json") {
    const auto s = summarize_witness(*w);
    nlohmann::json stats_json = {{"vertices", s.vertices}, {"internal", s.stats.m}, {"leaves", s.stats.l},
                                 {"labels", s.stats.s + cfg.d + 1}, {"s", s.stats.s}, {"a", s.stats.a},
                                 {"b", s.stats.b}, {"bound_ok", s.bound_ok}, {"bound_margin", s.bound_margin}};
    return {nlohmann::json{{"version", kVersion}, {"config", cfg.to_json()}, {"stats", stats_json}, {"witness", to_json(*w)}}.dump(2) + "\n", true};
  }
  return {csv_preamble(cfg) + witness_stats_line(*w) + "\n", true};
}

inline std::string render_density_sweep(const ExperimentConfig& cfg) {
  if (cfg.gamma.empty()) throw UsageError("density-sweep needs at least one --gamma");
  for (double g : cfg.gamma)
    if (g < 0 || (!cfg.allow_supercritical && g >= critical_gamma(cfg.d)))
      throw UsageError("gamma " + fmt(g) + " is not below alpha_d^(-1/d) = " + fmt(critical_gamma(cfg.d)) +
                       " (pass --allow-supercritical to run anyway)");
  const auto recs = run_sweep(cfg.d, cfg.n, cfg.gamma, cfg.trials, cfg.seed, cfg.jobs);
  const auto sum = summarize(cfg.d, recs);
  return cfg.format == "json" ? sweep_json(cfg, recs, sum) : sweep_csv(cfg, recs, sum);
}

/// Default grid: 9 points over [0.7, 1.5]·α_d^{-1/d}.
inline std::string render_threshold_scan(ExperimentConfig cfg) {
  if (cfg.gamma.empty()) cfg.gamma = threshold_grid(cfg.d, 0.7, 1.5, 9);
  const auto recs = run_sweep(cfg.d, cfg.n, cfg.gamma, cfg.trials, cfg.seed, cfg.jobs);
  const auto sum = summarize(cfg.d, recs);
  return cfg.format == "json" ? sweep_json(cfg, recs, sum) : sweep_csv(cfg, recs, sum);
}

inline std::string render_critical_step(const ExperimentConfig& cfg) {
  const auto runs = run_critical_steps(cfg);
  return cfg.format == "json" ? critical_step_json(cfg, runs) : critical_step_csv(cfg, runs);
}

}  // namespace stackperc
