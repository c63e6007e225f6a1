#include "sparserec/trig.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace sparserec {

namespace {

// Neumaier compensated sum of complex terms.
class CompensatedSum {
 public:
  void add(Complex z) {
    add_part(sum_re_, comp_re_, z.real());
    add_part(sum_im_, comp_im_, z.imag());
  }
  Complex value() const { return {sum_re_ + comp_re_, sum_im_ + comp_im_}; }

 private:
  static void add_part(double& sum, double& comp, double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  double sum_re_ = 0.0, comp_re_ = 0.0, sum_im_ = 0.0, comp_im_ = 0.0;
};

bool is_even_integer(double p) {
  return std::isfinite(p) && p == std::floor(p) && std::fmod(p, 2.0) == 0.0;
}

void check_p(double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
}

constexpr std::size_t kMaxGridPoints = 50'000'000;

double wrap_angle(double x) {
  double r = std::fmod(x, kTwoPi);
  if (r < 0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

}  // namespace

int MultiIndex::sup_norm() const {
  int s = 0;
  for (int v : k) s = std::max(s, std::abs(v));
  return s;
}

MultiIndex operator+(const MultiIndex& a, const MultiIndex& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("MultiIndex: dimension mismatch");
  MultiIndex r = a;
  for (std::size_t i = 0; i < r.k.size(); ++i) r.k[i] += b.k[i];
  return r;
}

MultiIndex operator-(const MultiIndex& a) {
  MultiIndex r = a;
  for (int& v : r.k) v = -v;
  return r;
}

std::string to_string(const MultiIndex& k) {
  std::string s = "(";
  for (int i = 0; i < k.dim(); ++i) {
    if (i) s += ",";
    s += std::to_string(k[i]);
  }
  return s + ")";
}

// ---------------------------------------------------------------------------
// PointSet

PointSet::PointSet(int dim, std::vector<double> coords, Provenance provenance, std::uint64_t seed)
    : dim_(dim), coords_(std::move(coords)), provenance_(provenance), seed_(seed) {
  if (dim < 1) throw std::invalid_argument("PointSet: dimension must be >= 1");
  if (coords_.size() % static_cast<std::size_t>(dim) != 0)
    throw std::invalid_argument("PointSet: coordinate count is not a multiple of dim");
  for (double& x : coords_) {
    if (!std::isfinite(x)) throw std::invalid_argument("PointSet: non-finite coordinate");
    x = wrap_angle(x);
  }
}

std::string PointSet::provenance_label() const {
  switch (provenance_) {
    case Provenance::Grid:
      return "grid";
    case Provenance::Random:
      return "random(" + std::to_string(seed_) + ")";
    case Provenance::Explicit:
      return "explicit";
  }
  return "explicit";
}

PointSet PointSet::joined(const PointSet& other) const {
  if (other.dim_ != dim_) throw std::invalid_argument("PointSet::joined: dimension mismatch");
  std::vector<double> c = coords_;
  c.insert(c.end(), other.coords_.begin(), other.coords_.end());
  return PointSet(dim_, std::move(c), Provenance::Explicit);
}

// ---------------------------------------------------------------------------
// TrigPolynomial

TrigPolynomial::TrigPolynomial(int dim) : dim_(dim) {
  if (dim < 1) throw std::invalid_argument("TrigPolynomial: dimension must be >= 1");
}

TrigPolynomial::TrigPolynomial(int dim, Map coeffs) : TrigPolynomial(dim) {
  for (auto& [k, c] : coeffs) {
    if (k.dim() != dim) throw std::invalid_argument("TrigPolynomial: index dimension mismatch");
    if (c != Complex(0.0)) coeffs_.emplace(k, c);
  }
}

TrigPolynomial TrigPolynomial::constant(int dim, Complex c) {
  TrigPolynomial f(dim);
  f.set(MultiIndex(std::vector<int>(static_cast<std::size_t>(dim), 0)), c);
  return f;
}

TrigPolynomial TrigPolynomial::monomial(const MultiIndex& k, Complex c) {
  TrigPolynomial f(k.dim());
  f.set(k, c);
  return f;
}

Complex TrigPolynomial::coeff(const MultiIndex& k) const {
  auto it = coeffs_.find(k);
  return it == coeffs_.end() ? Complex(0.0) : it->second;
}

int TrigPolynomial::degree() const {
  int d = 0;
  for (const auto& [k, c] : coeffs_) d = std::max(d, k.sup_norm());
  return d;
}

std::vector<int> TrigPolynomial::degree_vector() const {
  std::vector<int> d(static_cast<std::size_t>(dim_), 0);
  for (const auto& [k, c] : coeffs_)
    for (int i = 0; i < dim_; ++i) d[static_cast<std::size_t>(i)] = std::max(d[static_cast<std::size_t>(i)], std::abs(k[i]));
  return d;
}

void TrigPolynomial::set(const MultiIndex& k, Complex c) {
  if (k.dim() != dim_) throw std::invalid_argument("TrigPolynomial::set: dimension mismatch");
  if (c == Complex(0.0)) {
    coeffs_.erase(k);
  } else {
    coeffs_[k] = c;
  }
}

void TrigPolynomial::accumulate(const MultiIndex& k, Complex c) { coeffs_[k] += c; }

void TrigPolynomial::prune() {
  std::erase_if(coeffs_, [](const auto& kv) { return std::abs(kv.second) < kDropTolerance; });
}

TrigPolynomial& TrigPolynomial::operator+=(const TrigPolynomial& other) {
  if (other.dim_ != dim_) throw std::invalid_argument("TrigPolynomial: dimension mismatch");
  for (const auto& [k, c] : other.coeffs_) accumulate(k, c);
  prune();
  return *this;
}

TrigPolynomial& TrigPolynomial::operator-=(const TrigPolynomial& other) {
  if (other.dim_ != dim_) throw std::invalid_argument("TrigPolynomial: dimension mismatch");
  for (const auto& [k, c] : other.coeffs_) accumulate(k, -c);
  prune();
  return *this;
}

TrigPolynomial& TrigPolynomial::operator*=(Complex s) {
  for (auto& [k, c] : coeffs_) c *= s;
  prune();
  return *this;
}

TrigPolynomial TrigPolynomial::operator-() const {
  TrigPolynomial r = *this;
  for (auto& [k, c] : r.coeffs_) c = -c;
  return r;
}

// ---------------------------------------------------------------------------
// Evaluation

Complex eval(const TrigPolynomial& f, std::span<const double> x) {
  if (static_cast<int>(x.size()) != f.dim()) throw std::invalid_argument("eval: dimension mismatch");
  CompensatedSum sum;
  for (const auto& [k, c] : f.coeffs()) {
    double phase = 0.0;
    for (int i = 0; i < f.dim(); ++i) phase += k[i] * x[static_cast<std::size_t>(i)];
    sum.add(c * std::polar(1.0, phase));
  }
  return sum.value();
}

std::vector<Complex> eval(const TrigPolynomial& f, const PointSet& points) {
  if (points.dim() != f.dim()) throw std::invalid_argument("eval: dimension mismatch");
  const int d = f.dim();
  const int deg = f.degree();
  const std::size_t width = static_cast<std::size_t>(2 * deg + 1);
  std::vector<Complex> out(static_cast<std::size_t>(points.size()));
  // Per-point table of e^{i k x_i} for |k| <= deg.
  std::vector<Complex> table(width * static_cast<std::size_t>(d));
  for (int j = 0; j < points.size(); ++j) {
    auto x = points.point(j);
    for (int i = 0; i < d; ++i)
      for (int k = -deg; k <= deg; ++k)
        table[static_cast<std::size_t>(i) * width + static_cast<std::size_t>(k + deg)] =
            std::polar(1.0, k * x[static_cast<std::size_t>(i)]);
    CompensatedSum sum;
    for (const auto& [k, c] : f.coeffs()) {
      Complex term = c;
      for (int i = 0; i < d; ++i)
        term *= table[static_cast<std::size_t>(i) * width + static_cast<std::size_t>(k[i] + deg)];
      sum.add(term);
    }
    out[static_cast<std::size_t>(j)] = sum.value();
  }
  return out;
}

std::vector<Complex> grid_values(const TrigPolynomial& f, int n) {
  if (n < 1) throw std::invalid_argument("grid_values: n must be >= 1");
  const int d = f.dim();
  const int deg = f.degree();
  const std::size_t len = static_cast<std::size_t>(2 * deg + 1);
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) {
    total *= std::max<std::size_t>(len, static_cast<std::size_t>(n));
    if (total > kMaxGridPoints) throw std::length_error("grid_values: grid too large");
  }

  // Dense coefficient tensor, axis i of length `len`, replaced axis by axis with
  // length n via a direct (non-FFT) transform.
  std::vector<std::size_t> shape(static_cast<std::size_t>(d), len);
  std::size_t size = 1;
  for (auto s : shape) size *= s;
  std::vector<Complex> data(size, Complex(0.0));
  for (const auto& [k, c] : f.coeffs()) {
    std::size_t idx = 0;
    for (int i = 0; i < d; ++i) idx = idx * len + static_cast<std::size_t>(k[i] + deg);
    data[idx] = c;
  }

  std::vector<Complex> roots(static_cast<std::size_t>(n));
  for (int t = 0; t < n; ++t) roots[static_cast<std::size_t>(t)] = std::polar(1.0, kTwoPi * t / n);

  for (int axis = 0; axis < d; ++axis) {
    std::size_t outer = 1, inner = 1;
    for (int i = 0; i < axis; ++i) outer *= shape[static_cast<std::size_t>(i)];
    for (int i = axis + 1; i < d; ++i) inner *= shape[static_cast<std::size_t>(i)];
    std::vector<Complex> next(outer * static_cast<std::size_t>(n) * inner, Complex(0.0));
    for (std::size_t o = 0; o < outer; ++o) {
      for (int g = 0; g < n; ++g) {
        Complex* dst = next.data() + (o * static_cast<std::size_t>(n) + static_cast<std::size_t>(g)) * inner;
        for (std::size_t kk = 0; kk < len; ++kk) {
          const long long kval = static_cast<long long>(kk) - deg;
          long long r = (static_cast<long long>(g) * kval) % n;
          if (r < 0) r += n;
          const Complex w = roots[static_cast<std::size_t>(r)];
          const Complex* src = data.data() + (o * len + kk) * inner;
          for (std::size_t in = 0; in < inner; ++in) dst[in] += w * src[in];
        }
      }
    }
    shape[static_cast<std::size_t>(axis)] = static_cast<std::size_t>(n);
    data = std::move(next);
  }
  return data;
}

// ---------------------------------------------------------------------------
// Norms

double l2_norm(const TrigPolynomial& f) {
  double s = 0.0;
  for (const auto& [k, c] : f.coeffs()) s += std::norm(c);
  return std::sqrt(s);
}

Complex inner_product(const TrigPolynomial& f, const TrigPolynomial& g) {
  if (f.dim() != g.dim()) throw std::invalid_argument("inner_product: dimension mismatch");
  CompensatedSum sum;
  const auto& a = f.coeffs();
  const auto& b = g.coeffs();
  // Merge walk over the two ordered maps.
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      sum.add(ia->second * std::conj(ib->second));
      ++ia;
      ++ib;
    }
  }
  return sum.value();
}

std::string to_string(Measure m) {
  switch (m) {
    case Measure::Lebesgue:
      return "mu";
    case Measure::Empirical:
      return "mu_m";
    case Measure::Mixed:
      return "mu_xi";
  }
  return "mu";
}

int quadrature_grid_size(int degree, double p, int oversample) {
  if (oversample < 2) throw std::invalid_argument("lp_norm: oversample must be >= 2");
  int n = oversample * (degree + 1) + 1;
  if (is_even_integer(p)) n = std::max(n, static_cast<int>(p) * degree + 1);
  return n;
}

double discrete_lp_norm(std::span<const Complex> values, double p) {
  check_p(p);
  if (values.empty()) return 0.0;
  if (std::isinf(p)) {
    double mx = 0.0;
    for (const auto& v : values) mx = std::max(mx, std::abs(v));
    return mx;
  }
  // Scale by the max to avoid overflow for large p.
  double mx = 0.0;
  for (const auto& v : values) mx = std::max(mx, std::abs(v));
  if (mx == 0.0) return 0.0;
  double s = 0.0;
  for (const auto& v : values) s += std::pow(std::abs(v) / mx, p);
  return mx * std::pow(s / static_cast<double>(values.size()), 1.0 / p);
}

NormEstimate lp_norm(const TrigPolynomial& f, double p, int oversample) {
  check_p(p);
  NormEstimate r;
  r.oversample = oversample;
  r.grid_per_dim = quadrature_grid_size(f.degree(), p, oversample);
  r.exact = is_even_integer(p) && r.grid_per_dim > static_cast<int>(p) * f.degree();
  if (f.is_zero()) return r;
  const auto values = grid_values(f, r.grid_per_dim);
  r.value = discrete_lp_norm(values, p);
  return r;
}

NormEstimate lp_norm(const TrigPolynomial& f, double p, Measure measure, const PointSet& points,
                     int oversample) {
  check_p(p);
  if (measure == Measure::Lebesgue) return lp_norm(f, p, oversample);
  if (points.empty()) throw std::invalid_argument("lp_norm: discrete measure needs a nonempty point set");
  const auto samples = eval(f, points);
  const double discrete = discrete_lp_norm(samples, p);
  if (measure == Measure::Empirical) {
    NormEstimate r;
    r.value = discrete;
    r.exact = true;
    return r;
  }
  NormEstimate r = lp_norm(f, p, oversample);
  if (std::isinf(p)) {
    r.value = std::max(r.value, discrete);
  } else {
    r.value = std::pow(0.5 * (std::pow(r.value, p) + std::pow(discrete, p)), 1.0 / p);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Kernels, products, blocks

TrigPolynomial fejer_kernel(const std::vector<int>& orders) {
  if (orders.empty()) throw std::invalid_argument("fejer_kernel: empty order vector");
  for (int j : orders)
    if (j < 1) throw std::invalid_argument("fejer_kernel: orders must be >= 1");
  const int d = static_cast<int>(orders.size());
  TrigPolynomial result(d);
  std::vector<int> lim(orders.size());
  for (std::size_t i = 0; i < orders.size(); ++i) lim[i] = orders[i] - 1;
  for (const auto& k : box_indices(lim)) {
    double c = 1.0;
    for (int i = 0; i < d; ++i) c *= 1.0 - static_cast<double>(std::abs(k[i])) / orders[static_cast<std::size_t>(i)];
    result.set(k, c);
  }
  return result;
}

TrigPolynomial fejer_kernel(int order, int dim) {
  return fejer_kernel(std::vector<int>(static_cast<std::size_t>(dim), order));
}

TrigPolynomial translate(const TrigPolynomial& f, std::span<const double> shift) {
  if (static_cast<int>(shift.size()) != f.dim()) throw std::invalid_argument("translate: dimension mismatch");
  TrigPolynomial::Map out;
  for (const auto& [k, c] : f.coeffs()) {
    double phase = 0.0;
    for (int i = 0; i < f.dim(); ++i) phase += k[i] * shift[static_cast<std::size_t>(i)];
    out.emplace(k, c * std::polar(1.0, -phase));
  }
  return TrigPolynomial(f.dim(), std::move(out));
}

TrigPolynomial multiply(const TrigPolynomial& f, const TrigPolynomial& g) {
  if (f.dim() != g.dim()) throw std::invalid_argument("multiply: dimension mismatch");
  TrigPolynomial::Map acc;
  for (const auto& [ka, ca] : f.coeffs())
    for (const auto& [kb, cb] : g.coeffs()) acc[ka + kb] += ca * cb;
  std::erase_if(acc, [](const auto& kv) { return std::abs(kv.second) < kDropTolerance; });
  return TrigPolynomial(f.dim(), std::move(acc));
}

std::vector<MultiIndex> box_indices(const std::vector<int>& degrees) {
  for (int n : degrees)
    if (n < 0) throw std::invalid_argument("box_indices: negative degree");
  std::vector<MultiIndex> out;
  if (degrees.empty()) return out;
  std::vector<int> cur(degrees.size());
  for (std::size_t i = 0; i < degrees.size(); ++i) cur[i] = -degrees[i];
  while (true) {
    out.emplace_back(cur);
    int i = static_cast<int>(degrees.size()) - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == degrees[static_cast<std::size_t>(i)]) {
      cur[static_cast<std::size_t>(i)] = -degrees[static_cast<std::size_t>(i)];
      --i;
    }
    if (i < 0) break;
    ++cur[static_cast<std::size_t>(i)];
  }
  return out;
}

std::vector<MultiIndex> dyadic_block(int j, int dim) {
  if (j < 0) throw std::invalid_argument("dyadic_block: j must be >= 0");
  if (j > 24) throw std::length_error("dyadic_block: block index too large");
  const int hi = (1 << j) - 1;             // ||k||_inf < 2^j
  const int lo = j == 0 ? 0 : 1 << (j - 1);  // [2^{j-1}]
  std::vector<MultiIndex> out;
  for (auto& k : box_indices(std::vector<int>(static_cast<std::size_t>(dim), hi)))
    if (k.sup_norm() >= lo) out.push_back(std::move(k));
  return out;
}

std::vector<MultiIndex> BlockFamily::block(int j, int dim) const { return dyadic_block(j, dim); }

int BlockFamily::block_of(const MultiIndex& k) const {
  int s = k.sup_norm();
  int j = 0;
  while (s > 0) {
    s >>= 1;
    ++j;
  }
  return j;
}

// ---------------------------------------------------------------------------
// Dictionaries

TrigPolynomial Dictionary::combine(std::span<const Complex> coefficients,
                                   std::span<const int> support) const {
  if (coefficients.size() != support.size())
    throw std::invalid_argument("Dictionary::combine: size mismatch");
  TrigPolynomial out(dim);
  for (std::size_t i = 0; i < support.size(); ++i)
    out += elements.at(static_cast<std::size_t>(support[i])) * coefficients[i];
  return out;
}

TrigSystem::TrigSystem(std::vector<int> degrees) : degrees_(std::move(degrees)) {
  if (degrees_.empty()) throw std::invalid_argument("TrigSystem: empty degree vector");
  indices_ = box_indices(degrees_);
}

TrigSystem::TrigSystem(int degree, int dim)
    : TrigSystem(std::vector<int>(static_cast<std::size_t>(dim), degree)) {}

int TrigSystem::position(const MultiIndex& k) const {
  auto it = std::lower_bound(indices_.begin(), indices_.end(), k);
  if (it == indices_.end() || *it != k) return -1;
  return static_cast<int>(it - indices_.begin());
}

Dictionary TrigSystem::dictionary() const {
  Dictionary d;
  d.dim = dim();
  d.orthonormal = true;
  d.elements.reserve(indices_.size());
  for (const auto& k : indices_) d.elements.push_back(TrigPolynomial::monomial(k));
  return d;
}

// ---------------------------------------------------------------------------
// Serialization

void write_polynomial(std::ostream& os, const TrigPolynomial& f) {
  os << "dim " << f.dim() << '\n';
  os << std::setprecision(17);
  for (const auto& [k, c] : f.coeffs()) {
    for (int i = 0; i < f.dim(); ++i) os << k[i] << ' ';
    os << c.real() << ' ' << c.imag() << '\n';
  }
}

TrigPolynomial read_polynomial(std::istream& is) {
  std::string line;
  int dim = 0;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream hs(line);
    std::string tag;
    if (!(hs >> tag >> dim) || tag != "dim" || dim < 1)
      throw std::runtime_error("read_polynomial: expected header 'dim d'");
    break;
  }
  if (dim < 1) throw std::runtime_error("read_polynomial: missing header");
  TrigPolynomial f(dim);
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::vector<int> k(static_cast<std::size_t>(dim));
    double re = 0.0, im = 0.0;
    for (int i = 0; i < dim; ++i)
      if (!(ls >> k[static_cast<std::size_t>(i)])) throw std::runtime_error("read_polynomial: bad index in '" + line + "'");
    if (!(ls >> re >> im)) throw std::runtime_error("read_polynomial: bad coefficient in '" + line + "'");
    MultiIndex idx(std::move(k));
    f.set(idx, f.coeff(idx) + Complex(re, im));
  }
  return f;
}

}  // namespace sparserec
