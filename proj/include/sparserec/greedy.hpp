#pragma once

// Weak Orthogonal Matching Pursuit in L_2(Omega_m, mu_m) and exhaustive best
// v-term approximation used as ground truth.

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sparserec/discretization.hpp"

namespace sparserec {

/// L_2(Omega_m, mu_m) with <f, g> = (1/m) sum_j f(xi^j) conj(g(xi^j)), and
/// the sampled dictionary as its columns.
class DiscreteHilbert {
 public:
  explicit DiscreteHilbert(const SampledSystem& sampled);
  explicit DiscreteHilbert(Eigen::MatrixXcd columns);

  int m() const { return static_cast<int>(columns_.rows()); }
  int N() const { return static_cast<int>(columns_.cols()); }
  const Eigen::MatrixXcd& columns() const { return columns_; }
  /// Discrete norms of the dictionary columns.
  const Eigen::VectorXd& column_norms() const { return column_norms_; }

  Complex inner(const Eigen::VectorXcd& f, const Eigen::VectorXcd& g) const;
  double norm(const Eigen::VectorXcd& f) const;
  /// <f, phi_j / ||phi_j||> for every column j.
  Eigen::VectorXcd normalized_inner_products(const Eigen::VectorXcd& f) const;

 private:
  Eigen::MatrixXcd columns_;
  Eigen::VectorXd column_norms_;
};

Eigen::VectorXcd to_vector(const std::vector<Complex>& values);

enum class SelectionRule {
  Greedy,          // argmax |<f_{k-1}, g>|, ties to the lowest index
  AdversarialWeak  // lowest index with |<f_{k-1}, g>| >= t * max
};

struct WompTrace {
  double t = 1.0;
  SelectionRule rule = SelectionRule::Greedy;
  std::vector<int> selected;
  std::vector<double> residual_norms;  // ||f_k||, k = 0..steps_used
  std::vector<double> chosen_ips;      // |<f_{k-1}, g_k>| (normalized columns)
  std::vector<double> max_ips;         // sup_g |<f_{k-1}, g>|
  /// Least-squares coefficients of G_K(f_0) against the (unnormalized)
  /// selected columns, in selection order.
  Eigen::VectorXcd coefficients;
  Eigen::VectorXcd residual;
  bool stopped_early = false;  // the max inner product fell below 1e-13 ||f_0||
  bool rank_deficient = false;

  int steps_used() const { return static_cast<int>(selected.size()); }
  /// Every step satisfies |<f_{k-1}, g_k>| >= t sup_g |<f_{k-1}, g>|.
  bool weakness_certified() const;
};

/// Runs at most `steps` iterations. Throws std::invalid_argument for t outside
/// (0, 1], steps > min(m, N), a zero dictionary column, or a size mismatch.
WompTrace womp(const DiscreteHilbert& h, const Eigen::VectorXcd& f0, double t, int steps,
               SelectionRule rule = SelectionRule::Greedy);

std::string womp_csv_header();
void write_womp_csv(std::ostream& os, const WompTrace& trace);

struct Projection {
  Eigen::VectorXcd coefficients;
  Eigen::VectorXcd residual;
  int rank = 0;
  bool rank_deficient = false;
};

/// Orthogonal projection of f0 onto span of the support columns (minimum-norm
/// least squares when the columns are dependent).
Projection project(const DiscreteHilbert& h, const Eigen::VectorXcd& f0, const std::vector<int>& support);
Projection project(const Eigen::MatrixXcd& columns, const Eigen::VectorXcd& f0, const std::vector<int>& support);

struct BestTerm {
  double sigma = 0.0;
  std::vector<int> support;
  Eigen::VectorXcd coefficients;
  bool approximate = false;  // per-support minimization was iterative (p != 2)
  std::uint64_t supports_examined = 0;
};

/// Weighted problem min over v-sparse c of (sum_i w_i |y_i - (A c)_i|^p)^{1/p}
/// by enumerating supports of size v (lexicographic; ties keep the first).
/// p = 2 uses least squares; other p use iteratively reweighted least squares
/// to relative tolerance `tol`. Throws std::length_error when C(N, v) > cap.
BestTerm best_vterm_weighted(const Eigen::MatrixXcd& rows, const Eigen::VectorXd& weights,
                             const Eigen::VectorXcd& y, int v, double p,
                             std::uint64_t cap = 2'000'000, double tol = 1e-8);

/// sigma_v in L_2(Omega_m, mu_m).
BestTerm best_vterm(const DiscreteHilbert& h, const Eigen::VectorXcd& f0, int v,
                    std::uint64_t cap = 2'000'000);
/// sigma_v in L_p(Omega_m, mu_m).
BestTerm best_vterm(const DiscreteHilbert& h, const Eigen::VectorXcd& f0, int v, double p,
                    std::uint64_t cap = 2'000'000, double tol = 1e-8);

/// sigma_v(f, D)_{L_p(nu)} for a trigonometric polynomial f and nu in
/// {mu, mu_m, mu_xi}. The Lebesgue part uses the exact-quadrature grid for
/// even p (so p = 2 is exact); `points` is ignored for mu.
BestTerm best_vterm(const TrigPolynomial& f, const Dictionary& dictionary, int v, double p,
                    Measure measure, const PointSet& points, int oversample = 2,
                    std::uint64_t cap = 2'000'000, double tol = 1e-8);

}  // namespace sparserec
