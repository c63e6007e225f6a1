#pragma once

// Point sets, sampled dictionaries, and certification of L_p-universal
// sampling discretization: for every u-sparse f in the span of a dictionary,
//   c_low ||f||_p^p <= (1/m) sum_j |f(xi^j)|^p <= c_high ||f||_p^p.
// For p = 2 the extremes over a support A are generalized eigenvalues of the
// discrete Gram matrix relative to the L_2(mu) Gram matrix, so exhaustive
// enumeration over supports is an exact certificate.

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "sparserec/trig.hpp"

namespace sparserec {

/// m i.i.d. uniform points on [0, 2pi)^d.
PointSet draw_points(int m, int dim, std::uint64_t seed);

/// Tensor grid {2 pi k / n}^d; throws std::length_error when n^d exceeds `cap`.
PointSet uniform_grid_points(int n_per_dim, int dim, std::size_t cap = 10'000'000);

/// Format: header "dim d m", then one point per line.
void write_points(std::ostream& os, const PointSet& points);
PointSet read_points(std::istream& is);

/// Exact L_2(mu) Gram matrix G(i, j) = <phi_j, phi_i>.
Eigen::MatrixXcd continuous_gram(const Dictionary& dictionary);

/// A dictionary restricted to a point set: Phi(i, j) = phi_j(xi^i).
class SampledSystem {
 public:
  SampledSystem(Dictionary dictionary, PointSet points);
  SampledSystem(const TrigSystem& system, PointSet points);

  const Dictionary& dictionary() const { return dictionary_; }
  const PointSet& points() const { return points_; }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  int m() const { return static_cast<int>(matrix_.rows()); }
  int N() const { return static_cast<int>(matrix_.cols()); }

  /// (1/m) Phi^* Phi
  Eigen::MatrixXcd discrete_gram() const;
  Eigen::MatrixXcd continuous_gram() const { return sparserec::continuous_gram(dictionary_); }
  /// Every entry has magnitude <= 1 (uniform boundedness).
  bool bounded() const;

 private:
  Dictionary dictionary_;
  PointSet points_;
  Eigen::MatrixXcd matrix_;
};

enum class DiscretizationMode { TwoSided, OneSidedLower };

std::string to_string(DiscretizationMode mode);

struct Budget {
  enum class Kind { Exhaustive, Randomized };
  Kind kind = Kind::Exhaustive;
  int trials = 0;
  std::uint64_t seed = 0;
  /// Maximum number of enumerated subsets (or subset pairs).
  std::uint64_t cap = 2'000'000;

  static Budget exhaustive(std::uint64_t cap = 2'000'000) { return {Kind::Exhaustive, 0, 0, cap}; }
  static Budget randomized(int trials, std::uint64_t seed) { return {Kind::Randomized, trials, seed, 2'000'000}; }
  std::string label() const;
};

struct UsdOptions {
  DiscretizationMode mode = DiscretizationMode::TwoSided;
  Budget budget = Budget::exhaustive();
  /// D in ||f||_p <= D (m^{-1} sum |f(xi^j)|^p)^{1/p} for the one-sided mode.
  double one_sided_D = std::sqrt(2.0);
  int oversample = 4;       // quadrature for p != 2
  int polish_rounds = 3;    // coordinate polishing for p != 2
};

/// c_low / c_high are extremal ratios (1/m) sum |f(xi^j)|^p / ||f||_p^p.
struct DiscretizationReport {
  int m = 0;
  int N = 0;
  int u = 0;
  double p = 2.0;
  DiscretizationMode mode = DiscretizationMode::TwoSided;
  bool holds = false;
  double c_low = 0.0;
  double c_high = 0.0;
  std::vector<int> worst_support;  // attains c_low
  std::vector<int> peak_support;   // attains c_high
  std::string method;
  std::uint64_t seed = 0;
  double one_sided_D = std::sqrt(2.0);
  /// True only for p = 2 exhaustive enumeration.
  bool certificate = false;
  std::uint64_t supports_examined = 0;

  /// c_low^{1/p}: the norm-level lower constant.
  double lower_norm_constant() const;
  double upper_norm_constant() const;
};

std::string discretization_csv_header();
std::string to_csv_row(const DiscretizationReport& report);

/// Throws std::invalid_argument when u > N, u < 1, or p != 2 with an exhaustive
/// budget; std::length_error when the exhaustive enumeration exceeds the cap.
DiscretizationReport check_usd(const SampledSystem& sampled, int u, double p,
                               const UsdOptions& options = {});

enum class ConstantTag { Exact, EmpiricalLowerBound, TheoreticalUpperBound };

std::string to_string(ConstantTag tag);

struct TaggedConstant {
  double value = 0.0;
  ConstantTag tag = ConstantTag::Exact;
};

struct UpEstimate {
  TaggedConstant U;
  std::vector<int> A;
  std::vector<int> J;
  std::uint64_t pairs_examined = 0;
};

/// UP(u, D) constant: sup over disjoint (A, J) with |A| <= u, |A| + |J| <= D_cap of
/// ||f_A|| / dist(f_A, span{phi_i : i in J}) in the Hilbert space whose Gram
/// matrix is `gram`. Returns infinity when some f_A lies in a span V_J.
UpEstimate check_up(const Eigen::MatrixXcd& gram, int u, int D_cap, const Budget& budget = {});
UpEstimate check_up(const SampledSystem& sampled, int u, int D_cap, const Budget& budget = {});
UpEstimate check_up(const Dictionary& dictionary, int u, int D_cap, const Budget& budget = {});

struct NikolskiiEstimate {
  /// R_2^{1 - 2/p} u^{1/2 - 1/p}
  double H_theory = 1.0;
  /// max over random u-sparse f of ||f||_p / ||f||_2 (grid quadrature)
  double H_emp = 1.0;
  bool consistent = true;  // H_emp <= H_theory (1 + tol)
  int trials = 0;
};

/// Throws std::invalid_argument when p < 2 or u is out of range.
NikolskiiEstimate nikolskii_constant(const Dictionary& dictionary, int u, double p, int trials,
                                     std::uint64_t seed, double R2 = 1.0, int oversample = 8,
                                     double tol = 1e-9);
NikolskiiEstimate nikolskii_constant(const TrigSystem& system, int u, double p, int trials,
                                     std::uint64_t seed, int oversample = 8, double tol = 1e-9);

struct ConstantsReport {
  TaggedConstant R1;
  TaggedConstant R2;
  TaggedConstant K;
  TaggedConstant U;
  TaggedConstant H;      // theoretical
  TaggedConstant H_emp;  // empirical lower bound
};

ConstantsReport system_constants(const Dictionary& dictionary, int u, double p, int trials,
                                 std::uint64_t seed, const Budget& up_budget = {});

}  // namespace sparserec
