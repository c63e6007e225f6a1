#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "sparserec/acceptance.hpp"
#include "sparserec/csv.hpp"
#include "sparserec/experiments.hpp"
#include "sparserec/greedy.hpp"

namespace fs = std::filesystem;
using namespace sparserec;

namespace {

struct Common {
  std::string config_path;
  std::vector<std::string> overrides;
  long long seed = -1;
  std::string out = ".";
  int threads = 0;
  bool dump = false;
};

Config load(const Common& common, const std::string& section) {
  Config c = common.config_path.empty() ? Config{} : Config::parse_file(common.config_path, section);
  for (const auto& kv : common.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("override must be key=value: " + kv);
    c.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (common.seed >= 0) c.set("seed", std::to_string(common.seed));
  if (common.threads > 0) c.set("threads", std::to_string(common.threads));
  return c;
}

std::ofstream open_out(const Common& common, const std::string& name) {
  fs::create_directories(common.out);
  const fs::path path = fs::path(common.out) / name;
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  std::cerr << "wrote " << path.string() << "\n";
  return os;
}

int run_find_points(const Common& common) {
  const auto cfg = FindPointsConfig::from(load(common, "find-points"));
  if (common.dump) {
    std::cout << cfg.dump();
    return 0;
  }
  const auto result = cmd_find_points(cfg);
  auto csv = open_out(common, "find_points.csv");
  csv << discretization_csv_header() << ",d,degree\n";
  for (const auto& r : result.trail) csv << to_csv_row(r) << ',' << cfg.d << ',' << cfg.degree << '\n';
  if (result.points) {
    auto pts = open_out(common, "points.txt");
    write_points(pts, *result.points);
    std::cout << "holds at m = " << result.points->size() << "\n";
  } else {
    std::cout << "no certified point set up to m = " << cfg.m_cap << "\n";
  }
  return result.success ? 0 : 1;
}

int run_check_disc(const Common& common) {
  const auto cfg = CheckDiscConfig::from(load(common, "check-disc"));
  if (common.dump) {
    std::cout << cfg.dump();
    return 0;
  }
  const auto report = cmd_check_disc(cfg);
  auto csv = open_out(common, "check_disc.csv");
  csv << discretization_csv_header() << ",d,degree\n" << to_csv_row(report) << ',' << cfg.d << ',' << cfg.degree << '\n';
  std::cout << "holds = " << (report.holds ? "true" : "false") << ", c_low = " << format_double(report.c_low)
            << ", c_high = " << format_double(report.c_high) << " (" << report.method << ")\n";
  return 0;
}

int run_recover(const Common& common) {
  const auto cfg = RecoverConfig::from(load(common, "recover"));
  if (common.dump) {
    std::cout << cfg.dump();
    return 0;
  }
  const auto report = cmd_recover(cfg);
  {
    auto csv = open_out(common, "recover.csv");
    csv << recovery_csv_header() << ",r,beta,profile,oversample\n"
        << to_csv_row(report) << ',' << format_double(cfg.r) << ',' << format_double(cfg.beta) << ','
        << cfg.profile << ',' << cfg.oversample << '\n';
  }
  {
    auto trace = open_out(common, "womp_trace.csv");
    write_womp_csv(trace, report.trace);
  }
  {
    auto poly = open_out(common, "approximant.txt");
    write_polynomial(poly, report.approximant);
  }
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
  std::cout << "error_Lp_mu = " << format_double(report.error_Lp_mu) << ", steps = " << report.steps_used() << "\n";
  return 0;
}

int run_rate_sweep(const Common& common) {
  const auto cfg = RateSweepConfig::from(load(common, "rate-sweep"));
  if (common.dump) {
    std::cout << cfg.dump();
    return 0;
  }
  const auto result = cmd_rate_sweep(cfg);
  {
    auto csv = open_out(common, "rate_sweep.csv");
    write_rate_sweep_csv(csv, cfg, result);
  }
  {
    auto plot = open_out(common, "rate_fit.dat");
    write_rate_plot_data(plot, result.fit);
  }
  const auto& fit = result.fit;
  for (int v : fit.dropped_v) std::cerr << "warning: v = " << v << " dropped\n";
  std::cout << "slope = " << format_double(fit.slope) << ", target = " << format_double(fit.target_exponent)
            << ", tolerance = " << format_double(fit.slope_tolerance) << " -> " << (fit.passes() ? "ok" : "slower")
            << "\n";
  return fit.passes() ? 0 : 1;
}

int run_fooling(const Common& common) {
  const auto cfg = FoolingConfig::from(load(common, "fooling"));
  if (common.dump) {
    std::cout << cfg.dump();
    return 0;
  }
  const auto result = cmd_fooling(cfg);
  auto csv = open_out(common, "fooling_gap.csv");
  csv << gap_csv_header() << ",seed,d\n";
  for (std::size_t i = 0; i < result.records.size(); ++i) {
    csv << to_csv_row(result.records[i]) << ',' << result.seeds[i] << ',' << cfg.d << '\n';
    const auto& inst = result.instances[i];
    auto file = open_out(common, "fooling_N" + join_indices(inst.N_box, 'x') + "_p" + format_double(inst.p) +
                                     "_seed" + std::to_string(result.seeds[i]) + ".txt");
    write_fooling(file, inst);
  }
  return 0;
}

int run_verify(const Common& common, bool list, const std::vector<int>& only) {
  if (list) {
    for (const auto& c : list_criteria())
      std::cout << c.id << "  " << c.name << "  (budget " << c.budget_seconds << " s)\n";
    return 0;
  }
  const auto cfg = AcceptanceConfig::from(load(common, "verify"));
  if (common.dump) {
    std::cout << cfg.dump();
    return 0;
  }
  std::vector<CriterionResult> results;
  for (const auto& c : list_criteria()) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    results.push_back(run_criterion(c.id, cfg));
    std::cout << format_result(results.back()) << std::endl;
  }
  {
    auto json = open_out(common, "verify_summary.json");
    json << summary_json(results) << '\n';
  }
  bool all = true;
  for (const auto& r : results) all = all && r.passed;
  if (!all) {
    std::cout << "failing:";
    for (const auto& r : results)
      if (!r.passed) std::cout << ' ' << r.id << ':' << r.name;
    std::cout << '\n';
  }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse sampling recovery experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--config", common.config_path, "Config file with [section] key = value entries");
  app.add_option("--set", common.overrides, "Override a config key (key=value), repeatable");
  app.add_option("--seed", common.seed, "Seed override");
  app.add_option("--out", common.out, "Output directory");
  app.add_option("--threads", common.threads, "Worker threads");
  app.add_flag("--dump-config", common.dump, "Print the effective configuration and exit");

  auto* find = app.add_subcommand("find-points", "Doubling search for a certified point set");
  auto* check = app.add_subcommand("check-disc", "Check universal sampling discretization");
  auto* rec = app.add_subcommand("recover", "Recover one function by WOMP from samples");
  auto* sweep = app.add_subcommand("rate-sweep", "Error-vs-sparsity sweep with slope fit");
  auto* fool = app.add_subcommand("fooling", "Fooling-function lower-bound sweep");
  auto* verify = app.add_subcommand("verify", "Run the acceptance suite");
  bool list = false;
  std::vector<int> only;
  verify->add_flag("--list", list, "List criteria without running");
  verify->add_option("--only", only, "Run only these criterion ids");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*find) return run_find_points(common);
    if (*check) return run_check_disc(common);
    if (*rec) return run_recover(common);
    if (*sweep) return run_rate_sweep(common);
    if (*fool) return run_fooling(common);
    if (*verify) return run_verify(common, list, only);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
