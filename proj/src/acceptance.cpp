#include "sparserec/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>

#include "json.hpp"

#include "sparserec/csv.hpp"
#include "sparserec/greedy.hpp"
#include "sparserec/subsets.hpp"

namespace sparserec {

namespace {

std::string fmt(double x, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

double median(std::vector<double> x) {
  std::sort(x.begin(), x.end());
  const std::size_t n = x.size();
  return n % 2 ? x[n / 2] : 0.5 * (x[n / 2 - 1] + x[n / 2]);
}

Eigen::VectorXcd random_coefficients(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd c(n);
  for (int i = 0; i < n; ++i) c(i) = Complex(g(rng), g(rng));
  return c;
}

struct Outcome {
  bool passed = false;
  std::string detail;
};

// ---------------------------------------------------------------------------

Outcome fejer_identities(const AcceptanceConfig&) {
  double worst_c0 = 0.0, worst_peak = 0.0, worst_min = 0.0;
  int kernels = 0;
  auto check = [&](const std::vector<int>& orders) {
    const TrigPolynomial K = fejer_kernel(orders);
    const int d = static_cast<int>(orders.size());
    double prod = 1.0;
    for (int j : orders) prod *= j;
    worst_c0 = std::max(worst_c0, std::abs(K.coeff(MultiIndex(std::vector<int>(static_cast<std::size_t>(d), 0))) - 1.0));
    const std::vector<double> origin(static_cast<std::size_t>(d), 0.0);
    worst_peak = std::max(worst_peak, std::abs(eval(K, origin) - prod) / prod);
    const auto values = grid_values(K, d == 1 ? 4096 : 64);
    for (const auto& z : values) worst_min = std::min(worst_min, z.real());
    ++kernels;
  };
  for (int j = 1; j <= 8; ++j) check({j});
  for (int j1 = 1; j1 <= 8; ++j1)
    for (int j2 = 1; j2 <= 8; ++j2) check({j1, j2});
  Outcome o;
  o.passed = worst_c0 == 0.0 && worst_peak <= 1e-13 && worst_min >= -1e-12;
  o.detail = std::to_string(kernels) + " kernels; |c_0 - 1| max " + fmt(worst_c0) + ", K(0) rel. dev. max " +
             fmt(worst_peak) + ", grid min " + fmt(worst_min);
  return o;
}

Outcome exact_grid(const AcceptanceConfig&) {
  double worst = 0.0;
  int checks = 0;
  for (int N = 2; N <= 8; ++N) {
    const TrigSystem system(N, 1);
    const SampledSystem sampled(system, uniform_grid_points(2 * N + 1, 1));
    for (int u = 1; u <= N; ++u) {
      const auto rep = check_usd(sampled, u, 2.0);
      worst = std::max({worst, std::abs(rep.c_low - 1.0), std::abs(rep.c_high - 1.0)});
      ++checks;
    }
  }
  return {worst <= 1e-10, std::to_string(checks) + " (N, u) pairs; max |c - 1| = " + fmt(worst)};
}

Outcome womp_correctness(const AcceptanceConfig&) {
  int runs = 0, support_failures = 0, step_failures = 0;
  double worst_residual = 0.0, worst_orth = 0.0, worst_increase = 0.0;

  auto invariants = [&](const DiscreteHilbert& h, const Eigen::VectorXcd& f0, const WompTrace& tr) {
    const double scale = h.norm(f0);
    for (std::size_t k = 1; k < tr.residual_norms.size(); ++k)
      worst_increase = std::max(worst_increase, (tr.residual_norms[k] - tr.residual_norms[k - 1]) / scale);
    for (int k = 1; k <= tr.steps_used(); ++k) {
      const std::vector<int> support(tr.selected.begin(), tr.selected.begin() + k);
      const Projection proj = project(h, f0, support);
      for (int j : support)
        worst_orth = std::max(worst_orth, std::abs(h.inner(proj.residual, h.columns().col(j))) / scale);
    }
  };

  for (int seed = 1; seed <= 100; ++seed) {
    const bool two_d = seed % 2 == 0;
    const TrigSystem system = two_d ? TrigSystem(3, 2) : TrigSystem(8, 1);
    const int n = two_d ? 7 : 17;
    const DiscreteHilbert exact(SampledSystem(system, uniform_grid_points(n, system.dim())));
    const DiscreteHilbert random(SampledSystem(system, draw_points(3 * system.cardinality(), system.dim(),
                                                                  static_cast<std::uint64_t>(seed) + 7000)));
    std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
    for (int v = 1; v <= 4; ++v) {
      std::vector<int> support = random_subset(system.cardinality(), v, rng);
      std::uniform_real_distribution<double> phase(0.0, kTwoPi);
      std::uniform_real_distribution<double> jitter(0.0, 0.5);
      Eigen::VectorXcd c = Eigen::VectorXcd::Zero(system.cardinality());
      for (int i = 0; i < v; ++i)
        c(support[static_cast<std::size_t>(i)]) = (v - i + jitter(rng)) * std::polar(1.0, phase(rng));
      const Eigen::VectorXcd f0 = exact.columns() * c;
      const WompTrace tr = womp(exact, f0, 1.0, std::min(exact.m(), exact.N()));
      ++runs;
      std::vector<int> got = tr.selected;
      std::sort(got.begin(), got.end());
      std::sort(support.begin(), support.end());
      if (got != support) ++support_failures;
      if (tr.steps_used() != v) ++step_failures;
      worst_residual = std::max(worst_residual, tr.residual_norms.back() / exact.norm(f0));
      invariants(exact, f0, tr);

      const Eigen::VectorXcd g0 = random.columns() * c + random.columns() * random_coefficients(system.cardinality(), rng) * 0.1;
      invariants(random, g0, womp(random, g0, 1.0, std::min(3 * v, random.N())));
    }
  }
  Outcome o;
  o.passed = support_failures == 0 && step_failures == 0 && worst_residual <= 1e-10 && worst_orth <= 1e-11 &&
             worst_increase <= 1e-12;
  o.detail = std::to_string(runs) + " exact-grid runs; support failures " + std::to_string(support_failures) +
             ", step-count failures " + std::to_string(step_failures) + ", max final residual " +
             fmt(worst_residual) + ", max |<f_k, g_j>| " + fmt(worst_orth) + ", max residual increase " +
             fmt(worst_increase);
  return o;
}

struct LebesgueCell {
  int degree = 0;
  int u = 0;
  std::uint64_t seed = 0;
  bool certified = false;
  std::optional<PointSet> points;
  DiscretizationReport certificate;
  TrigPolynomial f0{1};
};

// d = 1, N in {9, 17}, u in {3, 4}, 50 seeds; certified point sets by doubling search.
std::vector<LebesgueCell> lebesgue_ensemble(int threads) {
  static std::mutex mutex;
  static std::vector<LebesgueCell> cache;
  std::lock_guard lock(mutex);
  if (!cache.empty()) return cache;
  std::vector<LebesgueCell> cells;
  for (int degree : {4, 8})
    for (int u : {3, 4})
      for (std::uint64_t seed = 1; seed <= 50; ++seed) cells.push_back({degree, u, seed, false, {}, {}, TrigPolynomial(1)});
  parallel_for(static_cast<int>(cells.size()), threads, [&](int i) {
    auto& cell = cells[static_cast<std::size_t>(i)];
    FindPointsConfig fc;
    fc.degree = cell.degree;
    fc.u = cell.u;
    fc.m_start = 2 * cell.u;
    fc.m_cap = 4096;
    fc.seed = cell.seed * 100 + static_cast<std::uint64_t>(cell.degree * 10 + cell.u);
    auto found = cmd_find_points(fc);
    cell.certified = found.success;
    if (found.success) {
      cell.points = *found.points;
      cell.certificate = found.trail.back();
    }
    const TrigSystem system(cell.degree, 1);
    std::mt19937_64 rng(cell.seed + 9000);
    const Eigen::VectorXcd c = random_coefficients(system.cardinality(), rng);
    std::vector<int> all(static_cast<std::size_t>(system.cardinality()));
    for (int j = 0; j < system.cardinality(); ++j) all[static_cast<std::size_t>(j)] = j;
    const std::vector<Complex> cv(c.data(), c.data() + c.size());
    cell.f0 = system.dictionary().combine(cv, all);
  });
  cache = cells;
  return cache;
}

Outcome discrete_lebesgue(const AcceptanceConfig& cfg) {
  const auto cells = lebesgue_ensemble(cfg.threads);
  int uncertified = 0, runs = 0, exact_failures = 0;
  double worst = 0.0;
  std::mutex m;
  parallel_for(static_cast<int>(cells.size()), cfg.threads, [&](int i) {
    const auto& cell = cells[static_cast<std::size_t>(i)];
    if (!cell.certified) {
      std::lock_guard lock(m);
      ++uncertified;
      return;
    }
    const TrigSystem system(cell.degree, 1);
    const int vmax = static_cast<int>(std::floor(cell.u / (1.0 + cfg.c_emp)));
    for (int v = 1; v <= vmax; ++v) {
      RecoveryOptions opts;
      opts.c_emp = cfg.c_emp;
      opts.certificate = cell.certificate;
      opts.seed = cell.seed;
      const auto rep = recover(cell.f0, system, *cell.points, v, opts);
      std::lock_guard lock(m);
      ++runs;
      if (rep.ratio_discrete) {
        worst = std::max(worst, *rep.ratio_discrete);
      } else if (rep.residual_L2_mum > 1e-9) {
        ++exact_failures;
      }
    }
  });
  Outcome o;
  o.passed = uncertified == 0 && exact_failures == 0 && runs > 0 && worst <= cfg.lebesgue_threshold;
  o.detail = std::to_string(runs) + " recoveries; worst ||f_{cv}||/sigma_v = " + fmt(worst) + " (threshold " +
             fmt(cfg.lebesgue_threshold) + "), uncertified cells " + std::to_string(uncertified) +
             ", exact-case failures " + std::to_string(exact_failures);
  return o;
}

Outcome pipeline_bound(const AcceptanceConfig& cfg) {
  const auto cells = lebesgue_ensemble(cfg.threads);
  int uncertified = 0, runs = 0, violations = 0;
  double worst = 0.0;
  std::mutex m;
  parallel_for(static_cast<int>(cells.size()), cfg.threads, [&](int i) {
    const auto& cell = cells[static_cast<std::size_t>(i)];
    if (!cell.certified) {
      std::lock_guard lock(m);
      ++uncertified;
      return;
    }
    const TrigSystem system(cell.degree, 1);
    const int vmax = static_cast<int>(std::floor(cell.u / (1.0 + cfg.c_emp)));
    for (double p : {2.0, 4.0}) {
      const double H = std::pow(static_cast<double>(cell.u), 0.5 - 1.0 / p);
      for (int v = 1; v <= vmax; ++v) {
        RecoveryOptions opts;
        opts.c_emp = cfg.c_emp;
        opts.p = p;
        opts.certificate = cell.certificate;
        opts.seed = cell.seed;
        const auto rep = recover(cell.f0, system, *cell.points, v, opts);
        const double sigma = rep.sigma_ref.value_or(0.0);
        const double normalized = sigma > 0.0 ? rep.error_Lp_mu / (H * sigma) : (rep.error_Lp_mu > 1e-9 ? INFINITY : 0.0);
        std::lock_guard lock(m);
        ++runs;
        worst = std::max(worst, normalized);
        if (normalized > cfg.pipeline_threshold) ++violations;
      }
    }
  });
  Outcome o;
  o.passed = uncertified == 0 && violations == 0 && runs > 0;
  o.detail = std::to_string(runs) + " recoveries over p in {2, 4}; worst error/(H sigma_ref) = " + fmt(worst) +
             " (threshold " + fmt(cfg.pipeline_threshold) + "), violations " + std::to_string(violations) +
             ", uncertified cells " + std::to_string(uncertified);
  return o;
}

Outcome random_point_scaling(const AcceptanceConfig& cfg) {
  const int u = 2;
  const TrigSystem system(4, 1);
  const double N = system.cardinality();
  const double l2u = std::log(2.0 * u);
  const int m_full =
      static_cast<int>(std::ceil(cfg.schedule_C * u * std::log(N) * l2u * l2u * (l2u + std::log(std::log(N)))));
  int m_small = m_full;
  for (int i = 0; i < 4; ++i) m_small = (m_small + 1) / 2;

  std::vector<char> full(50), small(50);
  parallel_for(50, cfg.threads, [&](int i) {
    const auto seed = static_cast<std::uint64_t>(i + 1);
    full[static_cast<std::size_t>(i)] = check_usd(SampledSystem(system, draw_points(m_full, 1, seed)), u, 2.0).holds;
    small[static_cast<std::size_t>(i)] =
        check_usd(SampledSystem(system, draw_points(m_small, 1, seed + 500)), u, 2.0).holds;
  });
  const int holds_full = static_cast<int>(std::count(full.begin(), full.end(), 1));
  const int holds_small = static_cast<int>(std::count(small.begin(), small.end(), 1));
  Outcome o;
  o.passed = holds_full >= 45 && holds_small <= 10;
  o.detail = "m = " + std::to_string(m_full) + ": holds " + std::to_string(holds_full) + "/50 (need >= 45); m = " +
             std::to_string(m_small) + ": holds " + std::to_string(holds_small) + "/50 (need <= 10)";
  return o;
}

Outcome fooling_adversary(const AcceptanceConfig& cfg) {
  FoolingConfig fc;
  fc.N_values = {8, 16, 32};
  fc.m_fraction = 0.25;
  fc.p_values = {4.0};
  fc.q = 2.0;
  fc.seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  (void)cfg;
  const auto sweep = cmd_fooling(fc);
  int sample_failures = 0, recovery_failures = 0, gap_failures = 0;
  std::map<int, std::vector<double>> gaps;
  for (const auto& g : sweep.records) {
    if (g.max_sample > 1e-9 * g.grid_sup_f) ++sample_failures;
    const bool exact = std::abs(g.error_plus - g.norm_p) <= 1e-12 * g.norm_p &&
                       std::abs(g.error_minus - g.norm_p) <= 1e-12 * g.norm_p;
    if (!g.recovery_checked || !g.recovery_zero || !exact) ++recovery_failures;
    if (g.normalized_gap < 1.0) ++gap_failures;
    gaps[g.N_box.front()].push_back(g.normalized_gap);
  }
  std::vector<double> medians;
  for (const auto& [N, values] : gaps) medians.push_back(median(values));
  const bool monotone = std::is_sorted(medians.begin(), medians.end());
  Outcome o;
  o.passed = sample_failures == 0 && recovery_failures == 0 && gap_failures == 0 && monotone;
  std::string med;
  for (double x : medians) med += (med.empty() ? "" : ", ") + fmt(x);
  o.detail = std::to_string(sweep.records.size()) + " instances; sample failures " + std::to_string(sample_failures) +
             ", recovery failures " + std::to_string(recovery_failures) + ", gap < 1: " +
             std::to_string(gap_failures) + ", median ||f||_4/||f||_2 over N = 8, 16, 32: " + med;
  return o;
}

Outcome rate_sweep(const AcceptanceConfig& cfg) {
  Outcome o;
  o.passed = true;
  for (double p : {2.0, 4.0}) {
    RateSweepConfig rc;
    rc.d = 1;
    rc.beta = 1.0;
    rc.r = 2.0;
    rc.p = p;
    rc.c_emp = cfg.c_emp;
    rc.v_values = {1, 2, 3, 4, 6, 8};
    for (std::uint64_t s = 1; s <= 20; ++s) rc.seeds.push_back(s);
    rc.a = cfg.rate_a;
    rc.m_floor_factor = cfg.rate_floor_factor;
    rc.slope_tolerance = cfg.slope_tolerance;
    rc.threads = cfg.threads;
    const auto result = cmd_rate_sweep(rc);
    const bool pass = result.fit.passes();
    o.passed = o.passed && pass;
    if (!o.detail.empty()) o.detail += "; ";
    o.detail += "p = " + fmt(p) + ": slope " + fmt(result.fit.slope) + " vs target " +
                fmt(result.fit.target_exponent) + " + " + fmt(cfg.slope_tolerance) + " (lower-bound exponent " +
                fmt(result.fit.lower_bound_exponent) + ")";
  }
  return o;
}

Outcome nikolskii_chain(const AcceptanceConfig&) {
  double worst = 0.0;
  int inexact = 0;
  std::mt19937_64 rng(20240601);
  const TrigSystem one(16, 1);
  const TrigSystem two(4, 2);
  for (int i = 0; i < 500; ++i) {
    const int u = 1 + i % 4;
    const TrigSystem& system = i % 2 ? two : one;
    const std::vector<int> support = random_subset(system.cardinality(), u, rng);
    const Eigen::VectorXcd c = random_coefficients(u, rng);
    const std::vector<Complex> cv(c.data(), c.data() + c.size());
    const TrigPolynomial f = system.dictionary().combine(cv, support);
    const NormEstimate n4 = lp_norm(f, 4.0, 2);
    if (!n4.exact) ++inexact;
    worst = std::max(worst, n4.value / l2_norm(f) / std::pow(u, 0.25));
  }
  return {inexact == 0 && worst <= 1.0 + 1e-9,
          "500 polynomials; max (||f||_4/||f||_2)/u^{1/4} = " + fmt(worst, 12) + ", inexact quadratures " +
              std::to_string(inexact)};
}

struct Entry {
  CriterionInfo info;
  std::function<Outcome(const AcceptanceConfig&)> run;
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries{
      {{1, "fejer-identities", 5}, fejer_identities},
      {{2, "exact-grid-discretization", 30}, exact_grid},
      {{3, "womp-correctness", 60}, womp_correctness},
      {{4, "discrete-lebesgue-inequality", 600}, discrete_lebesgue},
      {{5, "pipeline-bound", 600}, pipeline_bound},
      {{6, "random-point-scaling", 300}, random_point_scaling},
      {{7, "fooling-adversary", 180}, fooling_adversary},
      {{8, "rate-sweep", 1200}, rate_sweep},
      {{9, "nikolskii-chain", 60}, nikolskii_chain},
  };
  return entries;
}

}  // namespace

AcceptanceConfig AcceptanceConfig::from(const Config& c) {
  AcceptanceConfig a;
  a.lebesgue_threshold = c.get_double("C", a.lebesgue_threshold);
  a.pipeline_threshold = c.get_double("T", a.pipeline_threshold);
  a.c_emp = c.get_double("c_emp", a.c_emp);
  a.slope_tolerance = c.get_double("slope_tolerance", a.slope_tolerance);
  a.rate_a = c.get_double("a", a.rate_a);
  a.rate_floor_factor = c.get_double("m_floor_factor", a.rate_floor_factor);
  a.schedule_C = c.get_double("schedule_C", a.schedule_C);
  a.threads = c.get_int("threads", a.threads);
  a.enforce_runtime = c.get_bool("enforce_runtime", a.enforce_runtime);
  if (!(a.lebesgue_threshold > 0.0) || !(a.pipeline_threshold > 0.0))
    throw ConfigError("thresholds C and T must be > 0");
  if (!(a.c_emp > 0.0)) throw ConfigError("c_emp must be > 0");
  if (!(a.slope_tolerance >= 0.0)) throw ConfigError("slope_tolerance must be >= 0");
  if (!(a.rate_a > 0.0)) throw ConfigError("a must be > 0");
  if (!(a.rate_floor_factor >= 0.0)) throw ConfigError("m_floor_factor must be >= 0");
  if (!(a.schedule_C > 0.0)) throw ConfigError("schedule_C must be > 0");
  if (a.threads < 1) throw ConfigError("threads must be >= 1");
  return a;
}

std::string AcceptanceConfig::dump() const {
  std::ostringstream os;
  os << "[verify]\n"
     << "C = " << format_double(lebesgue_threshold) << "\n"
     << "T = " << format_double(pipeline_threshold) << "\n"
     << "c_emp = " << format_double(c_emp) << "\n"
     << "slope_tolerance = " << format_double(slope_tolerance) << "\n"
     << "a = " << format_double(rate_a) << "\n"
     << "m_floor_factor = " << format_double(rate_floor_factor) << "\n"
     << "schedule_C = " << format_double(schedule_C) << "\n"
     << "threads = " << threads << "\n"
     << "enforce_runtime = " << (enforce_runtime ? "true" : "false") << "\n";
  return os.str();
}

std::vector<CriterionInfo> list_criteria() {
  std::vector<CriterionInfo> out;
  for (const auto& e : registry()) out.push_back(e.info);
  return out;
}

CriterionResult run_criterion(int id, const AcceptanceConfig& config) {
  CriterionResult r;
  r.id = id;
  const auto& entries = registry();
  const auto it = std::find_if(entries.begin(), entries.end(), [id](const Entry& e) { return e.info.id == id; });
  if (it == entries.end()) {
    r.name = "unknown";
    r.detail = "no criterion with this id";
    return r;
  }
  r.name = it->info.name;
  r.budget_seconds = it->info.budget_seconds;
  const auto start = std::chrono::steady_clock::now();
  try {
    const Outcome o = it->run(config);
    r.passed = o.passed;
    r.detail = o.detail;
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (config.enforce_runtime && r.seconds > r.budget_seconds) {
    r.passed = false;
    r.detail += "; runtime budget " + fmt(r.budget_seconds) + " s exceeded";
  }
  return r;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceConfig& config) {
  std::vector<CriterionResult> out;
  for (const auto& info : list_criteria()) out.push_back(run_criterion(info.id, config));
  return out;
}

std::string format_result(const CriterionResult& r) {
  return std::string(r.passed ? "[PASS] " : "[FAIL] ") + std::to_string(r.id) + " " + r.name + " (" +
         fmt(r.seconds, 3) + " s): " + r.detail;
}

std::string summary_json(const std::vector<CriterionResult>& results) {
  nlohmann::json j;
  bool all = true;
  for (const auto& r : results) {
    all = all && r.passed;
    j["criteria"].push_back({{"id", r.id},
                             {"name", r.name},
                             {"passed", r.passed},
                             {"seconds", r.seconds},
                             {"budget_seconds", r.budget_seconds},
                             {"detail", r.detail}});
  }
  j["all_passed"] = all;
  return j.dump(2);
}

}  // namespace sparserec
