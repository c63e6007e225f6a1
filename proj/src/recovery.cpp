#include "sparserec/recovery.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "sparserec/csv.hpp"
#include "sparserec/subsets.hpp"

namespace sparserec {

namespace {

std::string opt_cell(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

std::vector<int> iota_vec(int n) {
  std::vector<int> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = i;
  return v;
}

std::vector<Complex> as_std(const Eigen::VectorXcd& v) {
  return {v.data(), v.data() + v.size()};
}

}  // namespace

int womp_steps(int v, double c_emp) { return static_cast<int>(std::ceil(c_emp * v - 1e-12)); }

int sparsity_for(int v, double c_emp) { return static_cast<int>(std::ceil((1.0 + c_emp) * v - 1e-12)); }

std::string recovery_csv_header() {
  return "seed,d,N,m,v,u,p,t,c_emp,cert_holds,c_low,c_high,error_Lp_mu,sigma_ref,ratio,steps_used";
}

std::string to_csv_row(const RecoveryReport& r) {
  std::ostringstream os;
  os << r.seed << ',' << r.d << ',' << r.N << ',' << r.m << ',' << r.v << ',' << r.u << ','
     << format_double(r.p) << ',' << format_double(r.t) << ',' << format_double(r.c_emp) << ','
     << (r.cert_available ? (r.cert_holds ? "1" : "0") : "") << ','
     << (r.cert_available ? format_double(r.c_low) : "") << ','
     << (r.cert_available ? format_double(r.c_high) : "") << ',' << format_double(r.error_Lp_mu) << ','
     << opt_cell(r.sigma_ref) << ',' << opt_cell(r.ratio) << ',' << r.steps_used();
  return os.str();
}

// ---------------------------------------------------------------------------
// WOMP pipeline

double sigma_upper_mixed(const TrigPolynomial& f, const Dictionary& dictionary, const PointSet& xi, int v,
                         double p, int oversample, std::uint64_t cap) {
  const BestTerm best = best_vterm(f, dictionary, v, 2.0, Measure::Mixed, xi, oversample, cap);
  const TrigPolynomial fit = dictionary.combine(as_std(best.coefficients), best.support);
  return lp_norm(f - fit, p, Measure::Mixed, xi, oversample).value;
}

TrigPolynomial womp_recovery_map(const Dictionary& dictionary, const PointSet& xi,
                                 const std::vector<Complex>& samples, int steps, double t) {
  const SampledSystem sampled(dictionary, xi);
  const DiscreteHilbert h(sampled);
  const WompTrace trace = womp(h, to_vector(samples), t, std::min({steps, h.m(), h.N()}));
  return dictionary.combine(as_std(trace.coefficients), trace.selected);
}

RecoveryReport recover(const TrigPolynomial& f0, const Dictionary& dictionary, const PointSet& xi, int v,
                       const RecoveryOptions& options) {
  if (f0.dim() != dictionary.dim || xi.dim() != dictionary.dim)
    throw std::invalid_argument("recover: dimension mismatch");
  if (v < 0) throw std::invalid_argument("recover: v must be >= 0");
  if (!(options.p >= 2.0) || std::isinf(options.p)) throw std::invalid_argument("recover: require 2 <= p < infinity");
  if (xi.empty()) throw std::invalid_argument("recover: empty point set");

  RecoveryReport rep;
  rep.seed = options.seed;
  rep.d = dictionary.dim;
  rep.N = dictionary.size();
  rep.m = xi.size();
  rep.v = v;
  rep.u = sparsity_for(v, options.c_emp);
  rep.p = options.p;
  rep.t = options.t;
  rep.c_emp = options.c_emp;
  rep.H_theory = std::pow(static_cast<double>(std::max(rep.u, 1)), 0.5 - 1.0 / options.p);
  if (rep.u > rep.N) throw std::invalid_argument("recover: u = ceil((1 + c_emp) v) exceeds N");

  const SampledSystem sampled(dictionary, xi);
  const DiscreteHilbert h(sampled);

  if (options.certificate) {
    const auto& c = *options.certificate;
    rep.cert_available = true;
    rep.cert_holds = c.holds && c.mode == DiscretizationMode::TwoSided && c.p == 2.0 && c.u >= rep.u;
    rep.cert_exhaustive = c.certificate;
    rep.c_low = c.c_low;
    rep.c_high = c.c_high;
    if (c.u < rep.u) rep.warnings.push_back("supplied certificate covers u < ceil((1 + c_emp) v)");
  } else if (options.compute_certificate && rep.u >= 1) {
    UsdOptions uo;
    if (binomial(rep.N, rep.u) > options.cap) {
      uo.budget = Budget::randomized(options.certificate_trials, options.seed);
      rep.warnings.push_back("certificate is randomized (subset cap exceeded)");
    }
    const auto c = check_usd(sampled, rep.u, 2.0, uo);
    rep.cert_available = true;
    rep.cert_holds = c.holds;
    rep.cert_exhaustive = c.certificate;
    rep.c_low = c.c_low;
    rep.c_high = c.c_high;
  }
  if (rep.cert_available && !rep.cert_holds) rep.warnings.push_back("discretization certificate failed");
  if (!rep.cert_available && v > 0) rep.warnings.push_back("no discretization certificate");

  const Eigen::VectorXcd samples = to_vector(eval(f0, xi));
  rep.steps_requested = womp_steps(v, options.c_emp);
  int steps = rep.steps_requested;
  if (steps > std::min(h.m(), h.N())) {
    steps = std::min(h.m(), h.N());
    rep.warnings.push_back("step count clipped to min(m, N)");
  }
  rep.trace = womp(h, samples, options.t, steps, options.rule);
  rep.approximant = dictionary.combine(as_std(rep.trace.coefficients), rep.trace.selected);
  rep.residual_L2_mum = rep.trace.residual_norms.back();
  rep.error_Lp_mu = lp_norm(f0 - rep.approximant, options.p, options.oversample).value;

  if (options.compute_sigma && binomial(rep.N, v) <= options.cap) {
    const double s_disc = best_vterm(h, samples, v, options.cap).sigma;
    const double s_mixed = sigma_upper_mixed(f0, dictionary, xi, v, options.p, options.oversample, options.cap);
    rep.sigma_refs["L2(mu_m)"] = s_disc;
    rep.sigma_refs["Lp(mu_xi)"] = s_mixed;
    rep.sigma_ref = s_mixed;
    const double scale = std::max(l2_norm(f0), 1e-300);
    if (s_mixed <= 1e-13 * scale) {
      rep.exact_recovery = true;
    } else {
      rep.ratio = rep.error_Lp_mu / s_mixed;
    }
    if (s_disc > 1e-13 * scale) rep.ratio_discrete = rep.residual_L2_mum / s_disc;
  } else if (options.compute_sigma) {
    rep.warnings.push_back("sigma references omitted (subset cap exceeded)");
  }
  return rep;
}

RecoveryReport recover(const TrigPolynomial& f0, const TrigSystem& system, const PointSet& xi, int v,
                       const RecoveryOptions& options) {
  return recover(f0, system.dictionary(), xi, v, options);
}

RecoveryReport recover_best_vterm(const TrigPolynomial& f0, const Dictionary& dictionary, const PointSet& xi,
                                  int v, SampleNorm norm, double p, const RecoveryOptions& options) {
  if (f0.dim() != dictionary.dim || xi.dim() != dictionary.dim)
    throw std::invalid_argument("recover_best_vterm: dimension mismatch");
  if (!(p >= 1.0) || std::isinf(p)) throw std::invalid_argument("recover_best_vterm: require 1 <= p < infinity");
  if (xi.empty()) throw std::invalid_argument("recover_best_vterm: empty point set");

  RecoveryReport rep;
  rep.seed = options.seed;
  rep.d = dictionary.dim;
  rep.N = dictionary.size();
  rep.m = xi.size();
  rep.v = v;
  rep.u = 2 * v;
  rep.p = p;
  rep.t = 1.0;
  rep.c_emp = 0.0;
  rep.H_theory = std::pow(static_cast<double>(std::max(rep.u, 1)), 0.5 - 1.0 / p);
  if (options.certificate) {
    rep.cert_available = true;
    rep.cert_holds = options.certificate->holds;
    rep.cert_exhaustive = options.certificate->certificate;
    rep.c_low = options.certificate->c_low;
    rep.c_high = options.certificate->c_high;
  }

  const SampledSystem sampled(dictionary, xi);
  const DiscreteHilbert h(sampled);
  const Eigen::VectorXcd samples = to_vector(eval(f0, xi));
  const double sample_p = norm == SampleNorm::L2 ? 2.0 : p;
  const BestTerm best = best_vterm(h, samples, v, sample_p, options.cap);
  rep.approximant = dictionary.combine(as_std(best.coefficients), best.support);
  rep.trace.selected = best.support;
  rep.trace.coefficients = best.coefficients;
  rep.trace.residual_norms = {h.norm(samples), best.sigma};
  rep.residual_L2_mum = h.norm(samples - to_vector(eval(rep.approximant, xi)));
  rep.error_Lp_mu = lp_norm(f0 - rep.approximant, p, options.oversample).value;
  rep.sigma_refs["L" + std::string(norm == SampleNorm::L2 ? "2" : "p") + "(mu_m)"] = best.sigma;

  if (options.compute_sigma) {
    const double s_mixed = sigma_upper_mixed(f0, dictionary, xi, v, p, options.oversample, options.cap);
    rep.sigma_refs["Lp(mu_xi)"] = s_mixed;
    rep.sigma_ref = s_mixed;
    if (s_mixed <= 1e-13 * std::max(l2_norm(f0), 1e-300)) {
      rep.exact_recovery = true;
    } else {
      rep.ratio = rep.error_Lp_mu / s_mixed;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Fooling construction

int FoolingInstance::vartheta() const {
  int t = 1;
  for (int n : N_box) t *= 2 * n + 1;
  return t;
}

FoolingInstance make_fooling(const PointSet& xi, const std::vector<int>& N_box, double p, double q,
                             int oversample) {
  if (N_box.empty()) throw std::invalid_argument("make_fooling: empty degree vector");
  for (int n : N_box)
    if (n < 1) throw std::invalid_argument("make_fooling: degrees must be >= 1");
  if (xi.dim() != static_cast<int>(N_box.size())) throw std::invalid_argument("make_fooling: dimension mismatch");
  if (oversample < 8) throw std::invalid_argument("make_fooling: oversample must be >= 8");
  const TrigSystem system(N_box);
  const int vartheta = system.cardinality();
  const int m = xi.size();
  if (m >= vartheta) throw std::invalid_argument("make_fooling: requires m < vartheta(N)");

  // Orthonormal basis of the null space of the m x vartheta evaluation matrix.
  Eigen::MatrixXcd basis;
  if (m == 0) {
    basis = Eigen::MatrixXcd::Identity(vartheta, vartheta);
  } else {
    const SampledSystem sampled(system, xi);
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(sampled.matrix(), Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const double tol = 1e-10 * (s.size() ? s.maxCoeff() : 0.0);
    int rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
      if (s(i) > tol) ++rank;
    basis = svd.matrixV().rightCols(vartheta - rank);
  }
  if (basis.cols() == 0) throw std::logic_error("make_fooling: numerically trivial null space");

  const int d = system.dim();
  const int n_grid = quadrature_grid_size(*std::max_element(N_box.begin(), N_box.end()),
                                          std::numeric_limits<double>::infinity(), oversample);
  auto to_poly = [&](const Eigen::VectorXcd& b) {
    TrigPolynomial::Map coeffs;
    for (int j = 0; j < vartheta; ++j)
      if (b(j) != Complex(0.0)) coeffs.emplace(system.indices()[static_cast<std::size_t>(j)], b(j));
    return TrigPolynomial(d, std::move(coeffs));
  };

  // The basis element with the largest grid sup-norm / L_2 ratio; basis
  // columns have unit L_2 norm.
  double best_sup = -1.0;
  std::size_t best_arg = 0;
  TrigPolynomial g(d);
  for (Eigen::Index c = 0; c < basis.cols(); ++c) {
    const TrigPolynomial cand = to_poly(basis.col(c));
    const auto values = grid_values(cand, n_grid);
    std::size_t arg = 0;
    double mx = -1.0;
    for (std::size_t i = 0; i < values.size(); ++i)
      if (std::abs(values[i]) > mx) {
        mx = std::abs(values[i]);
        arg = i;
      }
    if (mx > best_sup * (1.0 + 1e-12)) {
      best_sup = mx;
      best_arg = arg;
      g = cand;
    }
  }

  FoolingInstance inst;
  inst.points = xi;
  inst.N_box = N_box;
  inst.p = p;
  inst.q = q;
  inst.oversample = oversample;
  inst.null_dim = static_cast<int>(basis.cols());
  inst.g_xi = g * Complex(1.0 / best_sup);

  // Grid index (row-major, first coordinate slowest) to x*.
  inst.x_star.assign(static_cast<std::size_t>(d), 0.0);
  std::size_t rem = best_arg;
  for (int i = d - 1; i >= 0; --i) {
    inst.x_star[static_cast<std::size_t>(i)] = kTwoPi * static_cast<double>(rem % static_cast<std::size_t>(n_grid)) / n_grid;
    rem /= static_cast<std::size_t>(n_grid);
  }

  const TrigPolynomial kernel = translate(fejer_kernel(N_box), inst.x_star);
  inst.f = multiply(inst.g_xi, kernel);
  inst.norm_q = lp_norm(inst.f, q, oversample).value;
  inst.norm_p = lp_norm(inst.f, p, oversample).value;
  inst.f_at_xstar = std::abs(eval(inst.f, inst.x_star));
  inst.g_at_xstar = std::abs(eval(inst.g_xi, inst.x_star));
  inst.grid_sup_f = lp_norm(inst.f, std::numeric_limits<double>::infinity(), oversample).value;
  if (m > 0) {
    const auto s = eval(inst.f, xi);
    for (const auto& z : s) inst.max_sample = std::max(inst.max_sample, std::abs(z));
  }
  return inst;
}

void write_fooling(std::ostream& os, const FoolingInstance& inst) {
  os << "# m " << inst.points.size() << '\n';
  os << "# N " << join_indices(inst.N_box) << '\n';
  os << "# x_star";
  for (double x : inst.x_star) os << ' ' << format_double(x);
  os << '\n';
  os << "# p " << format_double(inst.p) << " q " << format_double(inst.q) << '\n';
  os << "# norm_q " << format_double(inst.norm_q) << " norm_p " << format_double(inst.norm_p) << '\n';
  os << "# f_at_xstar " << format_double(inst.f_at_xstar) << " grid_sup " << format_double(inst.grid_sup_f)
     << " max_sample " << format_double(inst.max_sample) << '\n';
  write_polynomial(os, inst.f);
}

GapRecord adversary_gap(const PointSet& xi, const std::vector<int>& N_box, double p, double q,
                        const RecoveryMap& recovery, int oversample) {
  int vartheta = 1;
  for (int n : N_box) vartheta *= 2 * n + 1;
  if (2 * xi.size() > vartheta) throw std::invalid_argument("adversary_gap: requires m <= vartheta(N) / 2");
  const FoolingInstance inst = make_fooling(xi, N_box, p, q, oversample);

  GapRecord g;
  g.m = xi.size();
  g.N_box = N_box;
  g.vartheta = vartheta;
  g.p = p;
  g.q = q;
  g.norm_q = inst.norm_q;
  g.norm_p = inst.norm_p;
  g.guaranteed_error = inst.norm_p;
  g.normalized_gap = inst.norm_q > 0.0 ? inst.norm_p / inst.norm_q : 0.0;
  g.scale_ratio = inst.norm_p / std::pow(static_cast<double>(vartheta), 1.0 - 1.0 / p);
  g.max_sample = inst.max_sample;
  g.grid_sup_f = inst.grid_sup_f;
  g.f_at_xstar = inst.f_at_xstar;

  if (recovery) {
    // f and -f share the all-zero sample vector.
    const TrigPolynomial h = recovery(std::vector<Complex>(static_cast<std::size_t>(xi.size()), Complex(0.0)));
    g.recovery_checked = true;
    g.recovery_zero = h.is_zero();
    g.error_plus = lp_norm(inst.f - h, p, oversample).value;
    g.error_minus = lp_norm(-inst.f - h, p, oversample).value;
    g.recovery_ok = std::max(g.error_plus, g.error_minus) >= inst.norm_p * (1.0 - 1e-12);
  }
  return g;
}

std::string gap_csv_header() {
  return "m,N,vartheta,p,q,norm_q,norm_p,guaranteed_error,normalized_gap,scale_ratio,max_sample,grid_sup_f,"
         "f_at_xstar,recovery_ok";
}

std::string to_csv_row(const GapRecord& g) {
  std::ostringstream os;
  os << g.m << ',' << join_indices(g.N_box, 'x') << ',' << g.vartheta << ',' << format_double(g.p) << ','
     << format_double(g.q) << ',' << format_double(g.norm_q) << ',' << format_double(g.norm_p) << ','
     << format_double(g.guaranteed_error) << ',' << format_double(g.normalized_gap) << ','
     << format_double(g.scale_ratio) << ',' << format_double(g.max_sample) << ',' << format_double(g.grid_sup_f)
     << ',' << format_double(g.f_at_xstar) << ',' << (g.recovery_checked ? (g.recovery_ok ? "1" : "0") : "");
  return os.str();
}

}  // namespace sparserec
