// Command-line driver: sampling, closure, witnesses, sweeps and verification.

#include "stackperc/experiments.hpp"
#include "stackperc/suites.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

using namespace stackperc;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

// Relative --out paths resolve against STACKPERC_OUT_DIR when it is set.
std::filesystem::path output_path(const std::string& out) {
  std::filesystem::path p(out);
  if (p.is_relative())
    if (const char* dir = std::getenv("STACKPERC_OUT_DIR"); dir && *dir) p = std::filesystem::path(dir) / p;
  return p;
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  const auto path = output_path(out);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f << text;
}

std::vector<CheckResult> run_suite(const std::string& suite) {
  std::vector<CheckResult> out;
  auto add = [&](const std::string& name, std::function<CheckResult()> f) { out.push_back(timed(name, f)); };
  WitnessLedger ledger;
  const bool all = suite == "all";
  if (all || suite == "analysis") {
    add("fuss-catalan", [] { return check_fuss_catalan(); });
    add("density-root", [] { return check_root_consistency(); });
  }
  if (all || suite == "bootstrap") add("bootstrap-oracle", [&] { return check_bootstrap_oracle(20, 10, &ledger); });
  if (all || suite == "pedigree") {
    add("betti-excess-example", [] { return check_betti_excess_example(); });
    add("subpedigree-h", [] { return check_subpedigree_h(3); });
    add("label-classes", [] { return check_label_classes(50); });
    add("leaf-subset-bounds", [] { return check_leaf_subset_bounds({7, 8}); });
    add("excess-bounds", [&] {
      if (ledger.checked == 0) check_bootstrap_oracle(5, 9, &ledger);
      return check_excess_bounds(ledger);
    });
  }
  if (all || suite == "shifting") add("shifting", [] { return check_shifting({20, 20, 40, 10}); });
  if (all || suite == "rigidity") add("rigidity", [] { return check_rigidity(30, 200, 30); });
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hypergraph bootstrap percolation, stacked contractions and pedigrees"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  ExperimentConfig cfg;
  std::string out;
  std::vector<int> target;
  bool supercritical = false;

  auto common = [&](CLI::App* sub, bool sweep) {
    sub->add_option("--d", cfg.d, "dimension d (faces have d+1 labels)")->check(CLI::Range(2, kMaxDimension));
    if (sweep)
      sub->add_option("--n", cfg.n, "vertex count(s)")->check(CLI::PositiveNumber)->expected(1, -1);
    else
      sub->add_option("--n", cfg.n, "vertex count")->check(CLI::PositiveNumber)->expected(1);
    sub->add_option("--gamma", cfg.gamma, "p = gamma * n^(-1/d)")->expected(1, sweep ? -1 : 1);
    sub->add_option("--seed", cfg.seed, "base seed");
    sub->add_option("--out", out, "output file (default stdout; relative paths use STACKPERC_OUT_DIR)");
    sub->add_option("--format", cfg.format, "output format")
        ->check(CLI::IsMember({"csv", "json", "dot"}));
    sub->add_option("--jobs", cfg.jobs, "worker threads")->check(CLI::PositiveNumber);
    sub->add_flag("--timing", cfg.timing, "add wall-clock columns (output no longer byte-reproducible)");
  };

  auto* sample = app.add_subcommand("sample", "draw Y ~ Y_d(n, p)");
  common(sample, false);
  auto* close_cmd = app.add_subcommand("close", "bootstrap closure of Y_d(n, p) with certificates");
  common(close_cmd, false);
  auto* witness = app.add_subcommand("witness", "stacked-contraction witness of a face after closure");
  common(witness, false);
  witness->add_option("--target", target, "target face labels (default 1..d+1)")->expected(1, -1);
  auto* sweep = app.add_subcommand("density-sweep", "closure density against the predicted root");
  common(sweep, true);
  sweep->add_option("--trials", cfg.trials, "seeds per (n, gamma)")->check(CLI::PositiveNumber);
  sweep->add_flag("--allow-supercritical", supercritical, "allow gamma at or above alpha_d^(-1/d)");
  auto* scan = app.add_subcommand("threshold-scan", "percolation frequency around the critical gamma");
  common(scan, true);
  scan->add_option("--trials", cfg.trials, "seeds per (n, gamma)")->check(CLI::PositiveNumber);
  auto* crit = app.add_subcommand("critical-step", "one-face-at-a-time process and the critical step");
  common(crit, false);
  crit->add_option("--trials", cfg.trials, "independent runs")->check(CLI::PositiveNumber);
  crit->add_option("--points", cfg.sample_points, "trajectory sample points")->check(CLI::PositiveNumber);
  auto* verify = app.add_subcommand("verify", "run verification suites");
  cfg.suite = "all";
  verify->add_option("--suite", cfg.suite, "suite")
      ->check(CLI::IsMember({"all", "analysis", "bootstrap", "pedigree", "shifting", "rigidity"}));
  verify->add_option("--out", out, "report file (default stdout)");
  for (auto* sub : {sample, close_cmd, witness}) sub->add_option("--p", cfg.p, "face probability (overrides --gamma)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    cfg.allow_supercritical = supercritical;
    if (!target.empty()) cfg.target = Face(target);
    for (auto* sub : app.get_subcommands()) cfg.command = sub->get_name();
    if (cfg.format == "dot" && cfg.command != "witness") throw UsageError("--format dot is only available for witness");
    if (cfg.command == "sample") {
      emit(render_sample(cfg), out);
    } else if (cfg.command == "close") {
      emit(render_close(cfg), out);
    } else if (cfg.command == "witness") {
      auto [text, found] = render_witness(cfg);
      emit(text, out);
      if (!found) return kExitFailed;
    } else if (cfg.command == "density-sweep") {
      emit(render_density_sweep(cfg), out);
    } else if (cfg.command == "threshold-scan") {
      emit(render_threshold_scan(cfg), out);
    } else if (cfg.command == "critical-step") {
      emit(render_critical_step(cfg), out);
    } else if (cfg.command == "verify") {
      const auto results = run_suite(cfg.suite);
      nlohmann::json report = {{"version", kVersion}, {"suite", cfg.suite}, {"checks", nlohmann::json::array()}};
      bool ok = true;
      for (const auto& r : results) {
        ok = ok && r.pass;
        report["checks"].push_back({{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
        std::cerr << (r.pass ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
      }
      report["pass"] = ok;
      emit(report.dump(2) + "\n", out);
      return ok ? kExitOk : kExitFailed;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const FaceError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailed;
  }
  return kExitOk;
}
