#include "sparserec/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "sparserec/csv.hpp"

namespace sparserec {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream ss(s);
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <class T>
std::string list_string(const std::vector<T>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

std::vector<std::uint64_t> default_seeds(int count) {
  std::vector<std::uint64_t> s(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) s[static_cast<std::size_t>(i)] = static_cast<std::uint64_t>(i + 1);
  return s;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

double median(std::vector<double> x) {
  std::sort(x.begin(), x.end());
  const std::size_t n = x.size();
  return n % 2 ? x[n / 2] : 0.5 * (x[n / 2 - 1] + x[n / 2]);
}

PointSet load_points(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open points file: " + path);
  return read_points(in);
}

}  // namespace

Config Config::parse(std::istream& is, const std::string& section) {
  Config c;
  std::string line;
  std::string current;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("malformed section header at line " + std::to_string(lineno));
      current = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key = value at line " + std::to_string(lineno));
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("empty key at line " + std::to_string(lineno));
    if (current.empty() || current == "common" || current == section) c.set(key, trim(line.substr(eq + 1)));
  }
  return c;
}

Config Config::parse_file(const std::string& path, const std::string& section) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  return parse(in, section);
}

std::string Config::get(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
  if (!has(key)) return fallback;
  const std::string s = get(key, "");
  if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
  try {
    std::size_t pos = 0;
    const double x = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("invalid number for " + key + ": " + s);
  }
}

int Config::get_int(const std::string& key, int fallback) const {
  if (!has(key)) return fallback;
  const std::string s = get(key, "");
  try {
    std::size_t pos = 0;
    const int x = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("invalid integer for " + key + ": " + s);
  }
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback) const {
  if (!has(key)) return fallback;
  const std::string s = get(key, "");
  try {
    std::size_t pos = 0;
    if (!s.empty() && s.front() == '-') throw std::invalid_argument(s);
    const auto x = std::stoull(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("invalid unsigned integer for " + key + ": " + s);
  }
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string s = get(key, "");
  if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
  if (s == "0" || s == "false" || s == "no" || s == "off") return false;
  throw ConfigError("invalid boolean for " + key + ": " + s);
}

std::vector<int> Config::get_int_list(const std::string& key, const std::vector<int>& fallback) const {
  if (!has(key)) return fallback;
  std::vector<int> out;
  for (const auto& item : split_list(get(key, ""))) {
    Config tmp;
    tmp.set(key, item);
    out.push_back(tmp.get_int(key, 0));
  }
  return out;
}

std::vector<double> Config::get_double_list(const std::string& key, const std::vector<double>& fallback) const {
  if (!has(key)) return fallback;
  std::vector<double> out;
  for (const auto& item : split_list(get(key, ""))) {
    Config tmp;
    tmp.set(key, item);
    out.push_back(tmp.get_double(key, 0.0));
  }
  return out;
}

std::vector<std::uint64_t> Config::get_seed_list(const std::string& key,
                                                 const std::vector<std::uint64_t>& fallback) const {
  if (!has(key)) return fallback;
  std::vector<std::uint64_t> out;
  for (const auto& item : split_list(get(key, ""))) {
    Config tmp;
    tmp.set(key, item);
    out.push_back(tmp.get_u64(key, 0));
  }
  return out;
}

std::vector<std::uint64_t> seeds_from(const Config& config, std::uint64_t default_seed, int default_count) {
  if (config.has("seeds")) {
    auto s = config.get_seed_list("seeds", {});
    require(!s.empty(), "seeds must not be empty");
    return s;
  }
  const std::uint64_t first = config.get_u64("seed", default_seed);
  const int count = config.get_int("num_seeds", default_count);
  require(count >= 1, "num_seeds must be >= 1");
  std::vector<std::uint64_t> s;
  for (int i = 0; i < count; ++i) s.push_back(first + static_cast<std::uint64_t>(i));
  return s;
}

void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
  const int workers = std::max(1, std::min(threads, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

// ---------------------------------------------------------------------------

FindPointsConfig FindPointsConfig::from(const Config& c) {
  FindPointsConfig f;
  f.d = c.get_int("d", f.d);
  f.degree = c.get_int("degree", f.degree);
  f.u = c.get_int("u", f.u);
  f.m_start = c.get_int("m_start", f.m_start);
  f.m_cap = c.get_int("m_cap", f.m_cap);
  f.seed = c.get_u64("seed", f.seed);
  f.grid = c.get_bool("grid", f.grid);
  require(f.d >= 1, "d must be >= 1");
  require(f.degree >= 0, "degree must be >= 0");
  const int N = TrigSystem(f.degree, f.d).cardinality();
  require(f.u >= 1 && f.u <= N, "u must lie in [1, N]");
  require(f.m_start >= 0, "m_start must be >= 0");
  require(f.m_cap >= 1, "m_cap must be >= 1");
  return f;
}

std::string FindPointsConfig::dump() const {
  std::ostringstream os;
  os << "[find-points]\n"
     << "d = " << d << "\n"
     << "degree = " << degree << "\n"
     << "u = " << u << "\n"
     << "m_start = " << m_start << "\n"
     << "m_cap = " << m_cap << "\n"
     << "seed = " << seed << "\n"
     << "grid = " << (grid ? "true" : "false") << "\n";
  return os.str();
}

FindPointsResult cmd_find_points(const FindPointsConfig& config) {
  const TrigSystem system(config.degree, config.d);
  FindPointsResult result;
  if (config.grid) {
    PointSet grid = uniform_grid_points(2 * config.degree + 1, config.d);
    auto report = check_usd(SampledSystem(system, grid), config.u, 2.0);
    result.success = report.holds;
    result.trail.push_back(report);
    if (report.holds) result.points = std::move(grid);
    return result;
  }
  int m = config.m_start > 0 ? config.m_start : config.u;
  int attempt = 0;
  while (m <= config.m_cap) {
    const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(attempt);
    PointSet xi = draw_points(m, config.d, seed);
    auto report = check_usd(SampledSystem(system, xi), config.u, 2.0);
    result.trail.push_back(report);
    if (report.holds) {
      result.success = true;
      result.points = std::move(xi);
      return result;
    }
    if (m == config.m_cap) break;
    m = std::min(2 * m, config.m_cap);
    ++attempt;
  }
  return result;
}

// ---------------------------------------------------------------------------

CheckDiscConfig CheckDiscConfig::from(const Config& c) {
  CheckDiscConfig f;
  f.d = c.get_int("d", f.d);
  f.degree = c.get_int("degree", f.degree);
  f.u = c.get_int("u", f.u);
  f.p = c.get_double("p", f.p);
  f.m = c.get_int("m", f.m);
  f.seed = c.get_u64("seed", f.seed);
  f.points_file = c.get("points", f.points_file);
  f.mode = c.get("mode", f.mode);
  f.budget = c.get("budget", f.budget);
  f.trials = c.get_int("trials", f.trials);
  f.D = c.get_double("D", f.D);
  require(f.d >= 1 && f.degree >= 0, "d must be >= 1 and degree >= 0");
  require(f.m >= 1, "m must be >= 1");
  require(f.p >= 1.0, "p must be >= 1");
  require(f.mode == "two-sided" || f.mode == "one-sided-lower", "mode must be two-sided or one-sided-lower");
  require(f.budget == "exhaustive" || f.budget == "randomized", "budget must be exhaustive or randomized");
  require(f.budget == "randomized" || f.p == 2.0, "an exhaustive budget requires p = 2");
  require(f.trials >= 1, "trials must be >= 1");
  require(f.D >= 1.0, "D must be >= 1");
  return f;
}

std::string CheckDiscConfig::dump() const {
  std::ostringstream os;
  os << "[check-disc]\n"
     << "d = " << d << "\n"
     << "degree = " << degree << "\n"
     << "u = " << u << "\n"
     << "p = " << format_double(p) << "\n"
     << "m = " << m << "\n"
     << "seed = " << seed << "\n"
     << "points = " << points_file << "\n"
     << "mode = " << mode << "\n"
     << "budget = " << budget << "\n"
     << "trials = " << trials << "\n"
     << "D = " << format_double(D) << "\n";
  return os.str();
}

DiscretizationReport cmd_check_disc(const CheckDiscConfig& config) {
  const TrigSystem system(config.degree, config.d);
  PointSet xi = config.points_file.empty() ? draw_points(config.m, config.d, config.seed)
                                           : load_points(config.points_file);
  if (xi.dim() != config.d) throw ConfigError("points file dimension does not match d");
  UsdOptions opts;
  opts.mode = config.mode == "two-sided" ? DiscretizationMode::TwoSided : DiscretizationMode::OneSidedLower;
  opts.budget = config.budget == "exhaustive" ? Budget::exhaustive() : Budget::randomized(config.trials, config.seed);
  opts.one_sided_D = config.D;
  auto report = check_usd(SampledSystem(system, std::move(xi)), config.u, config.p, opts);
  report.seed = config.seed;
  return report;
}

// ---------------------------------------------------------------------------

RecoverConfig RecoverConfig::from(const Config& c) {
  RecoverConfig f;
  f.d = c.get_int("d", f.d);
  f.degree = c.get_int("degree", f.degree);
  f.v = c.get_int("v", f.v);
  f.p = c.get_double("p", f.p);
  f.t = c.get_double("t", f.t);
  f.c_emp = c.get_double("c_emp", f.c_emp);
  f.m = c.get_int("m", f.m);
  f.seed = c.get_u64("seed", f.seed);
  f.points_file = c.get("points", f.points_file);
  f.function_file = c.get("function", f.function_file);
  f.r = c.get_double("r", f.r);
  f.beta = c.get_double("beta", f.beta);
  f.J = c.get_int("J", f.J);
  f.profile = c.get("profile", f.profile);
  f.density = c.get_double("density", f.density);
  f.oversample = c.get_int("oversample", f.oversample);
  require(f.d >= 1 && f.degree >= 0, "d must be >= 1 and degree >= 0");
  require(f.v >= 1, "v must be >= 1");
  require(f.p >= 1.0, "p must be >= 1");
  require(f.t > 0.0 && f.t <= 1.0, "t must lie in (0, 1]");
  require(f.c_emp > 0.0, "c_emp must be > 0");
  require(f.m >= 1, "m must be >= 1");
  require(f.r > 0.0, "r must be > 0");
  require(f.beta > 0.0 && f.beta <= 1.0, "beta must lie in (0, 1]");
  require(f.oversample >= 1, "oversample must be >= 1");
  try {
    parse_profile_kind(f.profile);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  return f;
}

std::string RecoverConfig::dump() const {
  std::ostringstream os;
  os << "[recover]\n"
     << "d = " << d << "\n"
     << "degree = " << degree << "\n"
     << "v = " << v << "\n"
     << "p = " << format_double(p) << "\n"
     << "t = " << format_double(t) << "\n"
     << "c_emp = " << format_double(c_emp) << "\n"
     << "m = " << m << "\n"
     << "seed = " << seed << "\n"
     << "points = " << points_file << "\n"
     << "function = " << function_file << "\n"
     << "r = " << format_double(r) << "\n"
     << "beta = " << format_double(beta) << "\n"
     << "J = " << J << "\n"
     << "profile = " << profile << "\n"
     << "density = " << format_double(density) << "\n"
     << "oversample = " << oversample << "\n";
  return os.str();
}

RecoveryReport cmd_recover(const RecoverConfig& config) {
  const TrigSystem system(config.degree, config.d);
  TrigPolynomial f0(config.d);
  if (!config.function_file.empty()) {
    std::ifstream in(config.function_file);
    if (!in) throw ConfigError("cannot open function file: " + config.function_file);
    f0 = read_polynomial(in);
    if (f0.dim() != config.d) throw ConfigError("function dimension does not match d");
  } else {
    ClassSpec spec;
    spec.r = config.r;
    spec.beta = config.beta;
    spec.dim = config.d;
    spec.J = config.J >= 0 ? config.J : default_truncation_level(config.v);
    Profile profile;
    profile.kind = parse_profile_kind(config.profile);
    profile.density = config.density;
    f0 = sample_class_function(spec, profile, config.seed);
  }
  PointSet xi = config.points_file.empty() ? draw_points(config.m, config.d, config.seed ^ 0x9e3779b97f4a7c15ULL)
                                           : load_points(config.points_file);
  RecoveryOptions opts;
  opts.t = config.t;
  opts.c_emp = config.c_emp;
  opts.p = config.p;
  opts.oversample = config.oversample;
  opts.seed = config.seed;
  return recover(f0, system, xi, config.v, opts);
}

// ---------------------------------------------------------------------------

RateSweepConfig RateSweepConfig::from(const Config& c) {
  RateSweepConfig f;
  f.d = c.get_int("d", f.d);
  f.r = c.get_double("r", f.r);
  f.beta = c.get_double("beta", f.beta);
  f.p = c.get_double("p", f.p);
  f.t = c.get_double("t", f.t);
  f.c_emp = c.get_double("c_emp", f.c_emp);
  f.v_values = c.get_int_list("v", f.v_values);
  f.seeds = seeds_from(c, 1, 20);
  f.profile = c.get("profile", f.profile);
  f.density = c.get_double("density", f.density);
  f.a = c.get_double("a", f.a);
  f.log_power = c.get_int("log_power", f.log_power);
  f.m_floor_factor = c.get_double("m_floor_factor", f.m_floor_factor);
  f.J_offset = c.get_int("J_offset", f.J_offset);
  f.oversample = c.get_int("oversample", f.oversample);
  f.certificate_trials = c.get_int("certificate_trials", f.certificate_trials);
  f.slope_tolerance = c.get_double("slope_tolerance", f.slope_tolerance);
  f.threads = c.get_int("threads", f.threads);
  require(f.d >= 1, "d must be >= 1");
  require(f.r > 0.0, "r must be > 0");
  require(f.beta > 0.0 && f.beta <= 1.0, "beta must lie in (0, 1]");
  require(f.p >= 2.0, "p must be >= 2");
  require(f.t > 0.0 && f.t <= 1.0, "t must lie in (0, 1]");
  require(f.c_emp > 0.0, "c_emp must be > 0");
  require(!f.v_values.empty(), "v must not be empty");
  for (int v : f.v_values) require(v >= 1, "every v must be >= 1");
  require(f.a > 0.0, "a must be > 0");
  require(f.log_power == 3 || f.log_power == 4, "log_power must be 3 or 4");
  require(f.m_floor_factor >= 0.0, "m_floor_factor must be >= 0");
  require(f.J_offset >= 0, "J_offset must be >= 0");
  require(f.oversample >= 1, "oversample must be >= 1");
  require(f.certificate_trials >= 0, "certificate_trials must be >= 0");
  require(f.threads >= 1, "threads must be >= 1");
  try {
    parse_profile_kind(f.profile);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  return f;
}

std::string RateSweepConfig::dump() const {
  std::ostringstream os;
  os << "[rate-sweep]\n"
     << "d = " << d << "\n"
     << "r = " << format_double(r) << "\n"
     << "beta = " << format_double(beta) << "\n"
     << "p = " << format_double(p) << "\n"
     << "t = " << format_double(t) << "\n"
     << "c_emp = " << format_double(c_emp) << "\n"
     << "v = " << list_string(v_values) << "\n"
     << "seeds = " << list_string(seeds.empty() ? default_seeds(20) : seeds) << "\n"
     << "profile = " << profile << "\n"
     << "density = " << format_double(density) << "\n"
     << "a = " << format_double(a) << "\n"
     << "log_power = " << log_power << "\n"
     << "m_floor_factor = " << format_double(m_floor_factor) << "\n"
     << "J_offset = " << J_offset << "\n"
     << "oversample = " << oversample << "\n"
     << "certificate_trials = " << certificate_trials << "\n"
     << "slope_tolerance = " << format_double(slope_tolerance) << "\n"
     << "threads = " << threads << "\n";
  return os.str();
}

int RateSweepConfig::m_for(int v, int N) const {
  const double lg = std::log(2.0 * v);
  const double m = std::ceil(a * v * std::pow(lg, log_power));
  const double floor = std::ceil(m_floor_factor * N);
  return static_cast<int>(std::max({m, floor, 1.0}));
}

double target_exponent(double p, double beta, double r, int d) {
  return 1.0 - 1.0 / p - 1.0 / beta - r / d;
}

RateFit fit_rate(const std::vector<int>& v, const std::vector<std::vector<double>>& errors_per_v) {
  if (v.size() != errors_per_v.size()) throw std::invalid_argument("fit_rate: size mismatch");
  RateFit fit;
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::vector<double> finite;
    for (double e : errors_per_v[i])
      if (std::isfinite(e) && e > 0.0) finite.push_back(e);
    if (finite.empty()) {
      fit.dropped_v.push_back(v[i]);
      continue;
    }
    const double med = median(finite);
    fit.v_values.push_back(v[i]);
    fit.median_errors.push_back(med);
    for (double e : finite) fit.points.emplace_back(std::log(v[i]), std::log(e));
    xs.push_back(std::log(static_cast<double>(v[i])));
    ys.push_back(std::log(med));
  }
  std::vector<int> distinct = fit.v_values;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 4) throw std::invalid_argument("fit_rate: fewer than 4 distinct v values");
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / n;
  fit.valid = true;
  return fit;
}

RateSweepResult cmd_rate_sweep(const RateSweepConfig& config) {
  const auto seeds = config.seeds.empty() ? default_seeds(20) : config.seeds;
  const int nv = static_cast<int>(config.v_values.size());
  const int ns = static_cast<int>(seeds.size());
  RateSweepResult result;
  result.rows.resize(static_cast<std::size_t>(nv * ns));

  parallel_for(nv * ns, config.threads, [&](int cell) {
    const int v = config.v_values[static_cast<std::size_t>(cell / ns)];
    const std::uint64_t seed = seeds[static_cast<std::size_t>(cell % ns)];
    ClassSpec spec;
    spec.r = config.r;
    spec.beta = config.beta;
    spec.dim = config.d;
    spec.J = static_cast<int>(std::ceil(std::log2(static_cast<double>(v)) - 1e-12)) + config.J_offset;
    Profile profile;
    profile.kind = parse_profile_kind(config.profile);
    profile.density = config.density;
    const TrigPolynomial f0 = sample_class_function(spec, profile, seed);
    const TrigSystem system((1 << spec.J) - 1, config.d);
    const int m = config.m_for(v, system.cardinality());
    const PointSet xi = draw_points(m, config.d, seed * 1000003ULL + static_cast<std::uint64_t>(v));

    RecoveryOptions opts;
    opts.t = config.t;
    opts.c_emp = config.c_emp;
    opts.p = config.p;
    opts.oversample = config.oversample;
    opts.seed = seed;
    opts.compute_certificate = config.certificate_trials > 0;
    opts.certificate_trials = std::max(1, config.certificate_trials);
    opts.compute_sigma = false;
    result.rows[static_cast<std::size_t>(cell)] = recover(f0, system, xi, v, opts);
  });

  std::vector<std::vector<double>> errors(static_cast<std::size_t>(nv));
  for (int i = 0; i < nv * ns; ++i)
    errors[static_cast<std::size_t>(i / ns)].push_back(result.rows[static_cast<std::size_t>(i)].error_Lp_mu);
  result.fit = fit_rate(config.v_values, errors);
  result.fit.target_exponent = target_exponent(config.p, config.beta, config.r, config.d);
  result.fit.lower_bound_exponent = result.fit.target_exponent;
  result.fit.slope_tolerance = config.slope_tolerance;
  return result;
}

void write_rate_sweep_csv(std::ostream& os, const RateSweepConfig& config, const RateSweepResult& result) {
  os << recovery_csv_header() << ",r,beta,J_offset,profile,a,log_power,m_floor_factor,oversample\n";
  for (const auto& row : result.rows) {
    os << to_csv_row(row) << ',' << format_double(config.r) << ',' << format_double(config.beta) << ','
       << config.J_offset << ',' << config.profile << ',' << format_double(config.a) << ',' << config.log_power
       << ',' << format_double(config.m_floor_factor) << ',' << config.oversample << '\n';
  }
}

void write_rate_plot_data(std::ostream& os, const RateFit& fit) {
  os << "# log_v log_median_error\n";
  os << "# slope " << format_double(fit.slope) << " intercept " << format_double(fit.intercept) << " target "
     << format_double(fit.target_exponent) << "\n";
  for (std::size_t i = 0; i < fit.v_values.size(); ++i)
    os << format_double(std::log(static_cast<double>(fit.v_values[i]))) << ' '
       << format_double(std::log(fit.median_errors[i])) << '\n';
}

// ---------------------------------------------------------------------------

FoolingConfig FoolingConfig::from(const Config& c) {
  FoolingConfig f;
  f.d = c.get_int("d", f.d);
  f.N_values = c.get_int_list("N", f.N_values);
  f.m_fraction = c.get_double("m_fraction", f.m_fraction);
  f.m = c.get_int("m", f.m);
  f.p_values = c.get_double_list("p", f.p_values);
  f.q = c.get_double("q", f.q);
  f.seeds = seeds_from(c, 1, 10);
  f.oversample = c.get_int("oversample", f.oversample);
  f.womp_steps = c.get_int("womp_steps", f.womp_steps);
  require(f.d >= 1, "d must be >= 1");
  require(!f.N_values.empty(), "N must not be empty");
  for (int N : f.N_values) require(N >= 1, "every N must be >= 1");
  require(f.m_fraction >= 0.0 && f.m_fraction <= 0.5, "m_fraction must lie in [0, 0.5]");
  require(!f.p_values.empty(), "p must not be empty");
  for (double p : f.p_values) require(p > 2.0, "every p must be > 2");
  require(f.q >= 1.0 && f.q <= 2.0, "q must lie in [1, 2]");
  require(f.oversample >= 8, "oversample must be >= 8");
  require(f.womp_steps >= 0, "womp_steps must be >= 0");
  for (int N : f.N_values) {
    const int vartheta = TrigSystem(N, f.d).cardinality();
    require(f.m < 0 || 2 * f.m <= vartheta, "m must satisfy 2 m <= vartheta(N) for every N");
  }
  return f;
}

std::string FoolingConfig::dump() const {
  std::ostringstream os;
  os << "[fooling]\n"
     << "d = " << d << "\n"
     << "N = " << list_string(N_values) << "\n"
     << "m_fraction = " << format_double(m_fraction) << "\n"
     << "m = " << m << "\n"
     << "p = " << list_string(p_values) << "\n"
     << "q = " << format_double(q) << "\n"
     << "seeds = " << list_string(seeds.empty() ? default_seeds(10) : seeds) << "\n"
     << "oversample = " << oversample << "\n"
     << "womp_steps = " << womp_steps << "\n";
  return os.str();
}

FoolingSweepResult cmd_fooling(const FoolingConfig& config) {
  const auto seeds = config.seeds.empty() ? default_seeds(10) : config.seeds;
  FoolingSweepResult out;
  for (int N : config.N_values) {
    const std::vector<int> box(static_cast<std::size_t>(config.d), N);
    const int vartheta = TrigSystem(box).cardinality();
    const int m = config.m >= 0 ? config.m : static_cast<int>(std::floor(config.m_fraction * vartheta));
    const Dictionary wide = TrigSystem(2 * N, config.d).dictionary();
    for (double p : config.p_values) {
      for (std::uint64_t seed : seeds) {
        const PointSet xi = m > 0 ? draw_points(m, config.d, seed) : PointSet(config.d, {});
        const int steps = std::min({config.womp_steps, m, wide.size()});
        RecoveryMap map;
        if (m > 0)
          map = [&wide, &xi, steps](const std::vector<Complex>& samples) {
            return womp_recovery_map(wide, xi, samples, steps);
          };
        out.records.push_back(adversary_gap(xi, box, p, config.q, map, config.oversample));
        out.instances.push_back(make_fooling(xi, box, p, config.q, config.oversample));
        out.seeds.push_back(seed);
      }
    }
  }
  return out;
}

}  // namespace sparserec
