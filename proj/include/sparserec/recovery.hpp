#pragma once

// Sampling recovery: WOMP on the sampled dictionary, the exhaustive
// best-v-term-from-samples map, and the Fejer fooling construction that
// bounds every sample-based recovery map from below.

#include <functional>
#include <limits>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sparserec/discretization.hpp"
#include "sparserec/greedy.hpp"

namespace sparserec {

struct RecoveryOptions {
  double t = 1.0;
  double c_emp = 2.0;
  double p = 2.0;
  int oversample = 4;
  SelectionRule rule = SelectionRule::Greedy;
  /// A previously computed two-sided L_2 certificate for u; computed on demand otherwise.
  std::optional<DiscretizationReport> certificate;
  bool compute_certificate = true;
  /// Randomized fallback when the exhaustive certificate exceeds the subset cap.
  int certificate_trials = 2000;
  bool compute_sigma = true;
  std::uint64_t cap = 2'000'000;
  std::uint64_t seed = 0;  // echoed into the report and used for randomized budgets
};

struct RecoveryReport {
  std::uint64_t seed = 0;
  int d = 1;
  int N = 0;
  int m = 0;
  int v = 0;
  int u = 0;
  double p = 2.0;
  double t = 1.0;
  double c_emp = 2.0;

  bool cert_available = false;
  bool cert_holds = false;
  bool cert_exhaustive = false;
  double c_low = std::numeric_limits<double>::quiet_NaN();
  double c_high = std::numeric_limits<double>::quiet_NaN();

  double error_Lp_mu = 0.0;      // ||f_0 - approximant||_{L_p(mu)}
  double residual_L2_mum = 0.0;  // ||f_{c v}||_{L_2(mu_m)}
  /// "L2(mu_m)": sigma_v(f_0, D(Omega_m)) exactly; "Lp(mu_xi)": upper bound on
  /// sigma_v(f_0, D)_{L_p(mu_xi)} from the L_2(mu_xi)-best support.
  std::map<std::string, double> sigma_refs;
  std::optional<double> sigma_ref;        // the Lp(mu_xi) entry
  std::optional<double> ratio;            // error_Lp_mu / sigma_ref
  std::optional<double> ratio_discrete;   // residual_L2_mum / sigma_L2(mu_m)
  bool exact_recovery = false;            // sigma_ref == 0
  double H_theory = 1.0;                  // u^{1/2 - 1/p}

  int steps_requested = 0;
  WompTrace trace;
  TrigPolynomial approximant{1};
  std::vector<std::string> warnings;

  int steps_used() const { return trace.steps_used(); }
};

std::string recovery_csv_header();
std::string to_csv_row(const RecoveryReport& report);

/// Steps c_emp * v and u = ceil((1 + c_emp) v).
int womp_steps(int v, double c_emp);
int sparsity_for(int v, double c_emp);

/// Samples f0 at xi, runs WOMP for ceil(c_emp v) steps in L_2(Omega_m, mu_m),
/// rebuilds the continuous approximant and measures its L_p(mu) error. A
/// failed or missing certificate is recorded, not fatal.
RecoveryReport recover(const TrigPolynomial& f0, const Dictionary& dictionary, const PointSet& xi, int v,
                       const RecoveryOptions& options = {});
RecoveryReport recover(const TrigPolynomial& f0, const TrigSystem& system, const PointSet& xi, int v,
                       const RecoveryOptions& options = {});

/// Same algorithm on raw samples; returns the continuous approximant.
TrigPolynomial womp_recovery_map(const Dictionary& dictionary, const PointSet& xi,
                                 const std::vector<Complex>& samples, int steps, double t = 1.0);

/// Upper bound on sigma_v(f, D)_{L_p(mu_xi)}: the L_2(mu_xi)-best v-term fit
/// evaluated in L_p(mu_xi). Exact for p = 2.
double sigma_upper_mixed(const TrigPolynomial& f, const Dictionary& dictionary, const PointSet& xi, int v,
                         double p, int oversample = 4, std::uint64_t cap = 2'000'000);

enum class SampleNorm { L2, Lp };

/// B_v(f, D, L_2(xi)) or B_v(f, D, L_p(xi)) by exhaustive search on the samples;
/// reports ||f - B_v||_{L_p(mu)} and the L_p(mu_xi) reference.
RecoveryReport recover_best_vterm(const TrigPolynomial& f0, const Dictionary& dictionary, const PointSet& xi,
                                  int v, SampleNorm norm, double p, const RecoveryOptions& options = {});

struct FoolingInstance {
  PointSet points{1, {}};
  std::vector<int> N_box;
  TrigPolynomial g_xi{1};
  std::vector<double> x_star;
  TrigPolynomial f{1};
  double p = 4.0;
  double q = 2.0;
  double norm_q = 0.0;
  double norm_p = 0.0;
  double f_at_xstar = 0.0;   // |f(x*)|
  double g_at_xstar = 0.0;   // |g_xi(x*)|, 1 by normalization
  double grid_sup_f = 0.0;   // grid estimate of ||f||_inf
  double max_sample = 0.0;   // max_j |f(xi^j)|
  int null_dim = 0;
  int oversample = 8;

  int vartheta() const;
};

/// Builds f = g_xi * K_N(. - x*) with g_xi in T(N, d) vanishing on xi.
/// Requires m < vartheta(N).
FoolingInstance make_fooling(const PointSet& xi, const std::vector<int>& N_box, double p = 4.0,
                             double q = 2.0, int oversample = 8);

void write_fooling(std::ostream& os, const FoolingInstance& inst);

using RecoveryMap = std::function<TrigPolynomial(const std::vector<Complex>& samples)>;

struct GapRecord {
  int m = 0;
  std::vector<int> N_box;
  int vartheta = 0;
  double p = 4.0;
  double q = 2.0;
  double norm_q = 0.0;
  double norm_p = 0.0;
  double guaranteed_error = 0.0;  // ||f||_p
  double normalized_gap = 0.0;    // ||f||_p / ||f||_q: the gap for the pair +-f/||f||_q
  double scale_ratio = 0.0;       // guaranteed_error / vartheta^{1 - 1/p}
  double max_sample = 0.0;
  double grid_sup_f = 0.0;
  double f_at_xstar = 0.0;
  bool recovery_checked = false;
  double error_plus = 0.0;   // ||f - M(0)||_p
  double error_minus = 0.0;  // ||-f - M(0)||_p
  bool recovery_ok = true;   // max(error_plus, error_minus) >= ||f||_p
  bool recovery_zero = false;
};

/// Requires m <= vartheta(N) / 2.
GapRecord adversary_gap(const PointSet& xi, const std::vector<int>& N_box, double p, double q,
                        const RecoveryMap& recovery = {}, int oversample = 8);

std::string gap_csv_header();
std::string to_csv_row(const GapRecord& gap);

}  // namespace sparserec
