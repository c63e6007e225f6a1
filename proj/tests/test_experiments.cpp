#include "doctest.h"

#include <atomic>
#include <cmath>
#include <sstream>

#include "sparserec/acceptance.hpp"
#include "sparserec/experiments.hpp"

using namespace sparserec;

namespace {

Config parse(const std::string& text, const std::string& section) {
  std::istringstream is(text);
  return Config::parse(is, section);
}

}  // namespace

TEST_CASE("config sections, common keys and comments") {
  const std::string text =
      "d = 2  # top level\n"
      "[common]\n"
      "seed = 7\n"
      "[recover]\n"
      "m = 80\n"
      "p = inf\n"
      "[fooling]\n"
      "m = 3\n"
      "N = 8, 16\n";
  const auto rec = parse(text, "recover");
  CHECK(rec.get_int("d", 0) == 2);
  CHECK(rec.get_u64("seed", 0) == 7);
  CHECK(rec.get_int("m", 0) == 80);
  CHECK(std::isinf(rec.get_double("p", 0.0)));
  CHECK_FALSE(rec.has("N"));

  const auto fool = parse(text, "fooling");
  CHECK(fool.get_int("m", 0) == 3);
  CHECK(fool.get_int_list("N", {}) == std::vector<int>{8, 16});
  CHECK(fool.get_int("missing", 11) == 11);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse("[recover\n", "recover"), ConfigError);
  CHECK_THROWS_AS(parse("just words\n", "recover"), ConfigError);
  CHECK_THROWS_AS(parse(" = 3\n", "recover"), ConfigError);
  const auto c = parse("m = 3.5\nflag = maybe\nseed = -1\n", "x");
  CHECK_THROWS_AS(c.get_int("m", 0), ConfigError);
  CHECK_THROWS_AS(c.get_bool("flag", false), ConfigError);
  CHECK_THROWS_AS(c.get_u64("seed", 0), ConfigError);
  CHECK(c.get_double("m", 0.0) == 3.5);
  CHECK_THROWS_AS(Config::parse_file("/nonexistent/config.ini", "x"), ConfigError);
}

TEST_CASE("seed lists") {
  CHECK(seeds_from(Config{}, 1, 3) == std::vector<std::uint64_t>{1, 2, 3});
  CHECK(seeds_from(parse("seed = 10\nnum_seeds = 2\n", "x"), 1, 3) == std::vector<std::uint64_t>{10, 11});
  CHECK(seeds_from(parse("seeds = 5, 9\n", "x"), 1, 3) == std::vector<std::uint64_t>{5, 9});
  CHECK_THROWS_AS(seeds_from(parse("num_seeds = 0\n", "x"), 1, 3), ConfigError);
}

TEST_CASE("parallel_for covers every index once and forwards exceptions") {
  for (int threads : {1, 3}) {
    std::vector<std::atomic<int>> hits(50);
    parallel_for(50, threads, [&](int i) { ++hits[static_cast<std::size_t>(i)]; });
    for (const auto& h : hits) CHECK(h.load() == 1);
    CHECK_THROWS_AS(parallel_for(10, threads, [](int i) {
                      if (i == 4) throw std::runtime_error("boom");
                    }),
                    std::runtime_error);
  }
}

TEST_CASE("find-points succeeds with random points") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    FindPointsConfig cfg;
    cfg.degree = 1;
    cfg.u = 1;
    cfg.m_cap = 64;
    cfg.seed = seed;
    const auto res = cmd_find_points(cfg);
    CHECK(res.success);
    REQUIRE(res.points.has_value());
    CHECK(res.trail.back().holds);
  }
}

TEST_CASE("find-points on the exact grid") {
  FindPointsConfig cfg;
  cfg.degree = 3;
  cfg.u = 4;
  cfg.grid = true;
  const auto res = cmd_find_points(cfg);
  REQUIRE(res.success);
  CHECK(res.points->size() == 7);
  CHECK(res.trail.front().c_low == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(res.trail.front().c_high == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("find-points reports failure below the cardinality") {
  FindPointsConfig cfg;
  cfg.degree = 2;
  cfg.u = 5;
  cfg.m_cap = 4;
  const auto res = cmd_find_points(cfg);
  CHECK_FALSE(res.success);
  CHECK_FALSE(res.points.has_value());
  CHECK(res.trail.empty());

  cfg.m_cap = 6;
  cfg.u = 5;
  cfg.degree = 4;
  const auto capped = cmd_find_points(cfg);
  CHECK_FALSE(capped.success);
  CHECK(capped.trail.size() == 2);
}

TEST_CASE("config validation raises ConfigError") {
  CHECK_THROWS_AS(FindPointsConfig::from(parse("u = 9\n", "x")), ConfigError);
  CHECK_THROWS_AS(FoolingConfig::from(parse("p = 2\n", "x")), ConfigError);
  CHECK_THROWS_AS(FoolingConfig::from(parse("N = 4\nm = 5\n", "x")), ConfigError);
  CHECK_THROWS_AS(RateSweepConfig::from(parse("p = 1\n", "x")), ConfigError);
  CHECK_THROWS_AS(AcceptanceConfig::from(parse("T = 0\n", "x")), ConfigError);
  CHECK_NOTHROW(RecoverConfig::from(Config{}));
}

TEST_CASE("config dumps name their keys") {
  const auto rate = RateSweepConfig::from(Config{}).dump();
  for (const char* key : {"d =", "r =", "beta =", "p =", "v =", "a =", "log_power ="})
    CHECK(rate.find(key) != std::string::npos);
  CHECK(FoolingConfig::from(Config{}).dump().find("N = ") != std::string::npos);
  CHECK(AcceptanceConfig{}.dump().find("T = ") != std::string::npos);
}

TEST_CASE("rate exponents") {
  CHECK(target_exponent(2.0, 1.0, 2.0, 1) == doctest::Approx(-2.5));
  CHECK(target_exponent(4.0, 1.0, 2.0, 1) == doctest::Approx(-2.25));
  CHECK(target_exponent(2.0, 1.0, 2.0, 2) == doctest::Approx(-1.5));
}

TEST_CASE("fit_rate recovers an exact power law") {
  const std::vector<int> v{1, 2, 4, 8, 16};
  std::vector<std::vector<double>> errors;
  for (int x : v) errors.push_back({3.0 * std::pow(x, -2.0), 3.0 * std::pow(x, -2.0)});
  const auto fit = fit_rate(v, errors);
  CHECK(fit.valid);
  CHECK(fit.slope == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(fit.points.size() == 10);
}

TEST_CASE("fit_rate uses medians and needs four values of v") {
  const std::vector<int> v{1, 2, 4, 8};
  std::vector<std::vector<double>> errors;
  for (int x : v) errors.push_back({std::pow(x, -1.0), 1e6, std::pow(x, -1.0)});
  const auto fit = fit_rate(v, errors);
  CHECK(fit.slope == doctest::Approx(-1.0).epsilon(1e-12));

  CHECK_THROWS_AS(fit_rate({1, 2, 4}, {{1.0}, {0.5}, {0.25}}), std::invalid_argument);
}

TEST_CASE("rate schedule floor") {
  RateSweepConfig cfg;
  CHECK(cfg.m_for(1, 31) == std::max(static_cast<int>(std::ceil(10.0 * std::pow(std::log(2.0), 4))), 62));
  cfg.m_floor_factor = 0.0;
  CHECK(cfg.m_for(4, 1) == static_cast<int>(std::ceil(40.0 * std::pow(std::log(8.0), 4))));
}

TEST_CASE("fooling sweep with no points") {
  FoolingConfig cfg;
  cfg.N_values = {4};
  cfg.m = 0;
  cfg.seeds = {1};
  const auto res = cmd_fooling(cfg);
  REQUIRE(res.records.size() == 1);
  CHECK(res.records[0].m == 0);
  CHECK(res.records[0].recovery_ok);
  CHECK(res.records[0].max_sample == 0.0);
}

TEST_CASE("fooling sweep keeps samples at zero") {
  FoolingConfig cfg;
  cfg.N_values = {8, 16};
  cfg.seeds = {1, 2};
  const auto res = cmd_fooling(cfg);
  CHECK(res.records.size() == 4);
  for (const auto& r : res.records) {
    CHECK(r.max_sample <= 1e-9 * r.grid_sup_f);
    CHECK(r.normalized_gap >= 1.0);
    CHECK(r.recovery_ok);
  }
}

TEST_CASE("acceptance registry and a forced failure") {
  const auto list = list_criteria();
  CHECK(list.size() == 9);
  CHECK(list.front().name == "fejer-identities");
  CHECK(list.back().name == "nikolskii-chain");

  const auto ok = run_criterion(1, AcceptanceConfig{});
  CHECK(ok.passed);
  CHECK(format_result(ok).rfind("[PASS] 1 fejer-identities", 0) == 0);

  AcceptanceConfig strict;
  strict.pipeline_threshold = 0.01;
  const auto bad = run_criterion(5, strict);
  CHECK_FALSE(bad.passed);
  CHECK(format_result(bad).rfind("[FAIL] 5", 0) == 0);

  const auto unknown = run_criterion(42, AcceptanceConfig{});
  CHECK_FALSE(unknown.passed);

  const auto json = summary_json({ok, bad});
  CHECK(json.find("\"passed\"") != std::string::npos);
}
