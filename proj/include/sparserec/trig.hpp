#pragma once

// Multivariate trigonometric polynomials on the torus [0, 2pi)^d: sparse
// coefficient storage, evaluation, L_p norms under the Lebesgue measure,
// the empirical measure of a point set and their average, Fejer kernels
// and dyadic frequency blocks.

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace sparserec {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Coefficients below this magnitude are dropped after arithmetic.
inline constexpr double kDropTolerance = 1e-14;

/// Frequency vector k in Z^d.
struct MultiIndex {
  std::vector<int> k;

  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> v) : k(std::move(v)) {}
  MultiIndex(std::initializer_list<int> v) : k(v) {}

  int dim() const { return static_cast<int>(k.size()); }
  int sup_norm() const;
  int operator[](int i) const { return k[static_cast<std::size_t>(i)]; }

  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;
  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
};

MultiIndex operator+(const MultiIndex& a, const MultiIndex& b);
MultiIndex operator-(const MultiIndex& a);
std::string to_string(const MultiIndex& k);

/// A finite point set on the torus, stored row-major (m rows of d coordinates).
class PointSet {
 public:
  enum class Provenance { Grid, Random, Explicit };

  PointSet(int dim, std::vector<double> coords, Provenance provenance = Provenance::Explicit,
           std::uint64_t seed = 0);

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(coords_.size() / static_cast<std::size_t>(dim_)); }
  bool empty() const { return coords_.empty(); }
  std::span<const double> point(int i) const {
    return {coords_.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(dim_),
            static_cast<std::size_t>(dim_)};
  }
  const std::vector<double>& coords() const { return coords_; }
  Provenance provenance() const { return provenance_; }
  std::uint64_t seed() const { return seed_; }
  std::string provenance_label() const;

  /// Concatenation; provenance becomes Explicit.
  PointSet joined(const PointSet& other) const;

 private:
  int dim_;
  std::vector<double> coords_;
  Provenance provenance_;
  std::uint64_t seed_;
};

/// Sparse trigonometric polynomial sum_k c_k e^{i(k,x)} in canonical form:
/// no stored coefficient is exactly zero, keys are ordered lexicographically.
class TrigPolynomial {
 public:
  using Map = std::map<MultiIndex, Complex>;

  explicit TrigPolynomial(int dim);
  TrigPolynomial(int dim, Map coeffs);

  static TrigPolynomial constant(int dim, Complex c);
  static TrigPolynomial monomial(const MultiIndex& k, Complex c = 1.0);

  int dim() const { return dim_; }
  const Map& coeffs() const { return coeffs_; }
  std::size_t size() const { return coeffs_.size(); }
  bool is_zero() const { return coeffs_.empty(); }
  Complex coeff(const MultiIndex& k) const;

  /// Max over stored k of ||k||_inf; 0 for the zero polynomial.
  int degree() const;
  /// Per-coordinate max |k_i| over stored indices.
  std::vector<int> degree_vector() const;

  /// Stores c exactly (removing the entry when c == 0).
  void set(const MultiIndex& k, Complex c);

  TrigPolynomial& operator+=(const TrigPolynomial& other);
  TrigPolynomial& operator-=(const TrigPolynomial& other);
  TrigPolynomial& operator*=(Complex s);

  friend TrigPolynomial operator+(TrigPolynomial a, const TrigPolynomial& b) { return a += b; }
  friend TrigPolynomial operator-(TrigPolynomial a, const TrigPolynomial& b) { return a -= b; }
  friend TrigPolynomial operator*(TrigPolynomial a, Complex s) { return a *= s; }
  friend TrigPolynomial operator*(Complex s, TrigPolynomial a) { return a *= s; }
  TrigPolynomial operator-() const;

  friend bool operator==(const TrigPolynomial&, const TrigPolynomial&) = default;

 private:
  void accumulate(const MultiIndex& k, Complex c);
  void prune();

  int dim_;
  Map coeffs_;
};

/// Values at each point, using compensated summation over terms.
std::vector<Complex> eval(const TrigPolynomial& f, const PointSet& points);
Complex eval(const TrigPolynomial& f, std::span<const double> x);

/// Values on the tensor grid {2 pi i / n}^d, row-major with the first coordinate slowest.
std::vector<Complex> grid_values(const TrigPolynomial& f, int n_per_dim);

/// Parseval: (sum |c_k|^2)^{1/2}.
double l2_norm(const TrigPolynomial& f);

/// <f, g> in L_2(mu) with mu the normalized Lebesgue measure.
Complex inner_product(const TrigPolynomial& f, const TrigPolynomial& g);

enum class Measure { Lebesgue, Empirical, Mixed };

std::string to_string(Measure m);

/// Result of a norm computation. For the Lebesgue part the grid size is part of
/// the result; `exact` is set when the quadrature is exact up to roundoff
/// (p an even integer and grid_per_dim > p * degree).
struct NormEstimate {
  double value = 0.0;
  int grid_per_dim = 0;
  int oversample = 0;
  bool exact = false;
};

/// Grid size used for the Lebesgue quadrature of |f|^p.
int quadrature_grid_size(int degree, double p, int oversample);

/// ||f||_{L_p(mu)} by tensor grid quadrature. p = infinity gives the grid
/// maximum of |f|, a lower estimate of the sup norm.
NormEstimate lp_norm(const TrigPolynomial& f, double p, int oversample = 2);

/// ||f||_{L_p(nu)} for nu in {mu, mu_m, (mu + mu_m)/2}; mu_m is the empirical
/// measure of `points`.
NormEstimate lp_norm(const TrigPolynomial& f, double p, Measure measure, const PointSet& points,
                     int oversample = 2);

/// (m^{-1} sum_j |values_j|^p)^{1/p}, or max |values_j| for p = infinity.
double discrete_lp_norm(std::span<const Complex> values, double p);

/// Product of univariate Fejer kernels K_j(x) = sum_{|k| < j} (1 - |k|/j) e^{ikx}.
TrigPolynomial fejer_kernel(const std::vector<int>& orders);
TrigPolynomial fejer_kernel(int order, int dim);

/// g(x - shift): coefficients multiplied by e^{-i(k, shift)}.
TrigPolynomial translate(const TrigPolynomial& f, std::span<const double> shift);

/// Coefficient-space convolution.
TrigPolynomial multiply(const TrigPolynomial& f, const TrigPolynomial& g);

/// Dyadic sup-norm blocks { k : [2^{j-1}] <= ||k||_inf < 2^j }.
struct BlockFamily {
  enum class Kind { DyadicSup };
  Kind kind = Kind::DyadicSup;

  std::vector<MultiIndex> block(int j, int dim) const;
  /// Index j of the block containing k.
  int block_of(const MultiIndex& k) const;
};

std::vector<MultiIndex> dyadic_block(int j, int dim);

/// Enumerates the box prod_i [-N_i, N_i] lexicographically.
std::vector<MultiIndex> box_indices(const std::vector<int>& degrees);

/// A finite dictionary of trigonometric polynomials. `orthonormal` marks
/// dictionaries whose L_2(mu) Gram matrix is the identity.
struct Dictionary {
  int dim = 1;
  std::vector<TrigPolynomial> elements;
  bool orthonormal = false;

  int size() const { return static_cast<int>(elements.size()); }
  /// sum_j c_j phi_j
  TrigPolynomial combine(std::span<const Complex> coefficients,
                         std::span<const int> support) const;
};

/// The exponentials e^{i(k,x)} with |k_i| <= N_i, in lexicographic order.
class TrigSystem {
 public:
  explicit TrigSystem(std::vector<int> degrees);
  TrigSystem(int degree, int dim);

  int dim() const { return static_cast<int>(degrees_.size()); }
  const std::vector<int>& degrees() const { return degrees_; }
  /// prod (2 N_i + 1)
  int cardinality() const { return static_cast<int>(indices_.size()); }
  const std::vector<MultiIndex>& indices() const { return indices_; }
  /// Position of k in the enumeration, or -1.
  int position(const MultiIndex& k) const;
  Dictionary dictionary() const;

 private:
  std::vector<int> degrees_;
  std::vector<MultiIndex> indices_;
};

/// Text format: header "dim d", then one line "k_1 ... k_d re im" per coefficient.
void write_polynomial(std::ostream& os, const TrigPolynomial& f);
TrigPolynomial read_polynomial(std::istream& is);

}  // namespace sparserec
