#pragma once

// Batch experiments behind the CLI: point-set search, certificate checks,
// single recoveries, recovery-rate sweeps with log-log slope fits, and the
// fooling-function sweep.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sparserec/discretization.hpp"
#include "sparserec/function_classes.hpp"
#include "sparserec/recovery.hpp"

namespace sparserec {

/// Invalid configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat key = value store. Files hold `[section]` headers; keys outside any
/// section, or under [common], apply to every subcommand.
class Config {
 public:
  static Config parse(std::istream& is, const std::string& section);
  static Config parse_file(const std::string& path, const std::string& section);

  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::map<std::string, std::string>& values() const { return values_; }

  std::string get(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<int> get_int_list(const std::string& key, const std::vector<int>& fallback) const;
  std::vector<double> get_double_list(const std::string& key, const std::vector<double>& fallback) const;
  std::vector<std::uint64_t> get_seed_list(const std::string& key, const std::vector<std::uint64_t>& fallback) const;

 private:
  std::map<std::string, std::string> values_;
};

/// Seeds from either "seeds = a,b,c" or "seed = s" plus "num_seeds = n" (s, s+1, ...).
std::vector<std::uint64_t> seeds_from(const Config& config, std::uint64_t default_seed, int default_count);

/// Runs fn(i) for i in [0, count) on up to `threads` workers.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

// ---------------------------------------------------------------------------
// find-points

struct FindPointsConfig {
  int d = 1;
  int degree = 1;  // dictionary T(degree, d)
  int u = 1;
  int m_start = 0;  // 0: start at u
  int m_cap = 4096;
  std::uint64_t seed = 1;
  bool grid = false;  // use the exact-quadrature grid n = 2 degree + 1

  static FindPointsConfig from(const Config& c);
  std::string dump() const;
};

struct FindPointsResult {
  bool success = false;
  std::optional<PointSet> points;
  std::vector<DiscretizationReport> trail;
};

/// Doubling search on m for a two-sided L_2 certificate (exhaustive); reaching
/// the cap yields success = false rather than an exception.
FindPointsResult cmd_find_points(const FindPointsConfig& config);

// ---------------------------------------------------------------------------
// check-disc

struct CheckDiscConfig {
  int d = 1;
  int degree = 4;
  int u = 2;
  double p = 2.0;
  int m = 40;
  std::uint64_t seed = 1;
  std::string points_file;  // overrides m / seed
  std::string mode = "two-sided";
  std::string budget = "exhaustive";  // or "randomized"
  int trials = 2000;
  double D = 1.4142135623730951;

  static CheckDiscConfig from(const Config& c);
  std::string dump() const;
};

DiscretizationReport cmd_check_disc(const CheckDiscConfig& config);

// ---------------------------------------------------------------------------
// recover

struct RecoverConfig {
  int d = 1;
  int degree = 4;
  int v = 1;
  double p = 2.0;
  double t = 1.0;
  double c_emp = 2.0;
  int m = 60;
  std::uint64_t seed = 1;
  std::string points_file;
  std::string function_file;  // overrides the class generator
  double r = 1.0;
  double beta = 1.0;
  int J = -1;  // -1: default truncation level
  std::string profile = "saturated-spread";
  double density = 0.5;
  int oversample = 4;

  static RecoverConfig from(const Config& c);
  std::string dump() const;
};

RecoveryReport cmd_recover(const RecoverConfig& config);

// ---------------------------------------------------------------------------
// rate-sweep

struct RateSweepConfig {
  int d = 1;
  double r = 2.0;
  double beta = 1.0;
  double p = 2.0;
  double t = 1.0;
  double c_emp = 2.0;
  std::vector<int> v_values{1, 2, 3, 4, 6, 8};
  std::vector<std::uint64_t> seeds;  // default 1..20
  std::string profile = "saturated-spread";
  double density = 0.5;
  double a = 10.0;          // m(v) = ceil(a v (log 2v)^power)
  int log_power = 4;        // 4, or 3 for the alternate schedule
  double m_floor_factor = 2.0;  // m >= m_floor_factor * N
  int J_offset = 2;         // J = ceil(log2 v) + J_offset
  int oversample = 4;
  int certificate_trials = 200;
  double slope_tolerance = 0.35;
  int threads = 1;

  static RateSweepConfig from(const Config& c);
  std::string dump() const;
  int m_for(int v, int N) const;
};

struct RateFit {
  std::vector<int> v_values;           // surviving v
  std::vector<double> median_errors;   // per surviving v
  std::vector<std::pair<double, double>> points;  // (log v, log error) per seed
  double slope = 0.0;
  double intercept = 0.0;
  double target_exponent = 0.0;        // 1 - 1/p - 1/beta - r/d
  double lower_bound_exponent = 0.0;   // same exponent, in m
  double slope_tolerance = 0.35;
  bool valid = false;                  // >= 4 distinct v survived
  std::vector<int> dropped_v;

  bool passes() const { return valid && slope <= target_exponent + slope_tolerance; }
};

double target_exponent(double p, double beta, double r, int d);

/// Least squares of log(median error) on log v. Throws std::invalid_argument
/// with fewer than 4 distinct v values.
RateFit fit_rate(const std::vector<int>& v, const std::vector<std::vector<double>>& errors_per_v);

struct RateSweepResult {
  std::vector<RecoveryReport> rows;  // ordered by (v, seed)
  RateFit fit;
};

RateSweepResult cmd_rate_sweep(const RateSweepConfig& config);
void write_rate_sweep_csv(std::ostream& os, const RateSweepConfig& config, const RateSweepResult& result);
/// Two-column "log_v log_median_error" for gnuplot.
void write_rate_plot_data(std::ostream& os, const RateFit& fit);

// ---------------------------------------------------------------------------
// fooling

struct FoolingConfig {
  int d = 1;
  std::vector<int> N_values{8, 16, 32};
  double m_fraction = 0.25;  // m = floor(m_fraction * vartheta)
  int m = -1;                // fixed m when >= 0
  std::vector<double> p_values{4.0};
  double q = 2.0;
  std::vector<std::uint64_t> seeds;  // default 1..10
  int oversample = 8;
  int womp_steps = 4;

  static FoolingConfig from(const Config& c);
  std::string dump() const;
};

struct FoolingSweepResult {
  std::vector<GapRecord> records;
  std::vector<FoolingInstance> instances;
  std::vector<std::uint64_t> seeds;  // parallel to records
};

FoolingSweepResult cmd_fooling(const FoolingConfig& config);

}  // namespace sparserec
