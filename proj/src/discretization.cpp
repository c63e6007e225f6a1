#include "sparserec/discretization.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "sparserec/csv.hpp"
#include "sparserec/subsets.hpp"

namespace sparserec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::MatrixXcd principal(const Eigen::MatrixXcd& g, const std::vector<int>& rows,
                           const std::vector<int>& cols) {
  Eigen::MatrixXcd out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = g(rows[i], cols[j]);
  return out;
}

// Whitening map W with W^* G W = I on the range of the Hermitian PSD matrix G.
Eigen::MatrixXcd whitening(const Eigen::MatrixXcd& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g);
  const auto& lam = es.eigenvalues();
  const double top = lam.size() ? std::max(lam.maxCoeff(), 0.0) : 0.0;
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    if (lam(i) > 1e-12 * top && lam(i) > 0.0) keep.push_back(i);
  Eigen::MatrixXcd w(g.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c)
    w.col(static_cast<Eigen::Index>(c)) = es.eigenvectors().col(keep[c]) / std::sqrt(lam(keep[c]));
  return w;
}

// Extreme generalized eigenvalues of (M, G), restricted to the range of G.
std::pair<double, double> generalized_extremes(const Eigen::MatrixXcd& m, const Eigen::MatrixXcd& g,
                                               bool g_is_identity) {
  Eigen::MatrixXcd t;
  if (g_is_identity) {
    t = m;
  } else {
    const Eigen::MatrixXcd w = whitening(g);
    if (w.cols() == 0) return {kInf, 0.0};
    t = w.adjoint() * m * w;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(t, Eigen::EigenvaluesOnly);
  return {es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()};
}

}  // namespace

// ---------------------------------------------------------------------------
// Point sets

PointSet draw_points(int m, int dim, std::uint64_t seed) {
  if (m < 1) throw std::invalid_argument("draw_points: m must be >= 1");
  if (dim < 1) throw std::invalid_argument("draw_points: dim must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  std::vector<double> coords(static_cast<std::size_t>(m) * static_cast<std::size_t>(dim));
  for (double& x : coords) x = angle(rng);
  return PointSet(dim, std::move(coords), PointSet::Provenance::Random, seed);
}

PointSet uniform_grid_points(int n, int dim, std::size_t cap) {
  if (n < 1) throw std::invalid_argument("uniform_grid_points: n must be >= 1");
  if (dim < 1) throw std::invalid_argument("uniform_grid_points: dim must be >= 1");
  std::size_t m = 1;
  for (int i = 0; i < dim; ++i) {
    m *= static_cast<std::size_t>(n);
    if (m > cap) throw std::length_error("uniform_grid_points: grid exceeds point cap");
  }
  std::vector<double> coords;
  coords.reserve(m * static_cast<std::size_t>(dim));
  std::vector<int> idx(static_cast<std::size_t>(dim), 0);
  for (std::size_t p = 0; p < m; ++p) {
    for (int i = 0; i < dim; ++i) coords.push_back(kTwoPi * idx[static_cast<std::size_t>(i)] / n);
    for (int i = dim - 1; i >= 0; --i) {
      if (++idx[static_cast<std::size_t>(i)] < n) break;
      idx[static_cast<std::size_t>(i)] = 0;
    }
  }
  return PointSet(dim, std::move(coords), PointSet::Provenance::Grid);
}

void write_points(std::ostream& os, const PointSet& points) {
  os << "dim " << points.dim() << ' ' << points.size() << '\n';
  for (int j = 0; j < points.size(); ++j) {
    auto x = points.point(j);
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (i) os << ' ';
      os << format_double(x[i]);
    }
    os << '\n';
  }
}

PointSet read_points(std::istream& is) {
  std::string line;
  int dim = 0, m = -1;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream hs(line);
    std::string tag;
    if (!(hs >> tag >> dim >> m) || tag != "dim" || dim < 1 || m < 0)
      throw std::runtime_error("read_points: expected header 'dim d m'");
    break;
  }
  if (dim < 1) throw std::runtime_error("read_points: missing header");
  std::vector<double> coords;
  coords.reserve(static_cast<std::size_t>(m) * static_cast<std::size_t>(dim));
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    for (int i = 0; i < dim; ++i) {
      double x;
      if (!(ls >> x)) throw std::runtime_error("read_points: bad point line '" + line + "'");
      coords.push_back(x);
    }
  }
  if (coords.size() != static_cast<std::size_t>(m) * static_cast<std::size_t>(dim))
    throw std::runtime_error("read_points: point count does not match header");
  return PointSet(dim, std::move(coords), PointSet::Provenance::Explicit);
}

// ---------------------------------------------------------------------------
// Sampled systems

Eigen::MatrixXcd continuous_gram(const Dictionary& dictionary) {
  const Eigen::Index n = dictionary.size();
  if (dictionary.orthonormal) return Eigen::MatrixXcd::Identity(n, n);
  Eigen::MatrixXcd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) {
      const Complex v = inner_product(dictionary.elements[static_cast<std::size_t>(j)],
                                      dictionary.elements[static_cast<std::size_t>(i)]);
      g(i, j) = v;
      g(j, i) = std::conj(v);
    }
  return g;
}

SampledSystem::SampledSystem(Dictionary dictionary, PointSet points)
    : dictionary_(std::move(dictionary)), points_(std::move(points)) {
  if (points_.dim() != dictionary_.dim) throw std::invalid_argument("SampledSystem: dimension mismatch");
  matrix_.resize(points_.size(), dictionary_.size());
  for (int j = 0; j < dictionary_.size(); ++j) {
    const auto col = eval(dictionary_.elements[static_cast<std::size_t>(j)], points_);
    for (int i = 0; i < points_.size(); ++i) matrix_(i, j) = col[static_cast<std::size_t>(i)];
  }
}

SampledSystem::SampledSystem(const TrigSystem& system, PointSet points)
    : dictionary_(system.dictionary()), points_(std::move(points)) {
  if (points_.dim() != system.dim()) throw std::invalid_argument("SampledSystem: dimension mismatch");
  const auto& idx = system.indices();
  matrix_.resize(points_.size(), system.cardinality());
  for (int i = 0; i < points_.size(); ++i) {
    auto x = points_.point(i);
    for (int j = 0; j < system.cardinality(); ++j) {
      double phase = 0.0;
      for (int a = 0; a < system.dim(); ++a) phase += idx[static_cast<std::size_t>(j)][a] * x[static_cast<std::size_t>(a)];
      matrix_(i, j) = std::polar(1.0, phase);
    }
  }
}

Eigen::MatrixXcd SampledSystem::discrete_gram() const {
  if (m() == 0) return Eigen::MatrixXcd::Zero(N(), N());
  return (matrix_.adjoint() * matrix_) / static_cast<double>(m());
}

bool SampledSystem::bounded() const {
  return matrix_.size() == 0 || matrix_.cwiseAbs().maxCoeff() <= 1.0 + 1e-12;
}

// ---------------------------------------------------------------------------
// Universal discretization

std::string to_string(DiscretizationMode mode) {
  return mode == DiscretizationMode::TwoSided ? "two-sided" : "one-sided-lower";
}

std::string Budget::label() const {
  if (kind == Kind::Exhaustive) return "exhaustive";
  return "randomized(" + std::to_string(trials) + ";" + std::to_string(seed) + ")";
}

double DiscretizationReport::lower_norm_constant() const { return std::pow(std::max(c_low, 0.0), 1.0 / p); }
double DiscretizationReport::upper_norm_constant() const { return std::pow(std::max(c_high, 0.0), 1.0 / p); }

std::string discretization_csv_header() { return "m,N,u,p,mode,holds,c_low,c_high,method,seed"; }

std::string to_csv_row(const DiscretizationReport& r) {
  std::ostringstream os;
  os << r.m << ',' << r.N << ',' << r.u << ',' << format_double(r.p) << ',' << to_string(r.mode) << ','
     << (r.holds ? 1 : 0) << ',' << format_double(r.c_low) << ',' << format_double(r.c_high) << ','
     << r.method << ',' << r.seed;
  return os.str();
}

namespace {

bool decide_holds(const DiscretizationReport& r) {
  if (r.mode == DiscretizationMode::TwoSided) return r.c_low >= 0.5 && r.c_high <= 1.5;
  return r.one_sided_D * r.lower_norm_constant() >= 1.0;
}

void check_usd_l2(const SampledSystem& sampled, int u, const UsdOptions& options,
                  DiscretizationReport& report) {
  const Eigen::MatrixXcd discrete = sampled.discrete_gram();
  const bool identity = sampled.dictionary().orthonormal;
  const Eigen::MatrixXcd gram = identity ? Eigen::MatrixXcd() : sampled.continuous_gram();
  const int n = sampled.N();

  report.c_low = kInf;
  report.c_high = -kInf;
  auto visit = [&](const std::vector<int>& support) {
    const Eigen::MatrixXcd ma = principal(discrete, support, support);
    const auto [lo, hi] = identity ? generalized_extremes(ma, ma, true)
                                   : generalized_extremes(ma, principal(gram, support, support), false);
    if (lo < report.c_low) {
      report.c_low = lo;
      report.worst_support = support;
    }
    if (hi > report.c_high) {
      report.c_high = hi;
      report.peak_support = support;
    }
    ++report.supports_examined;
    return true;
  };

  // Supports of size exactly u suffice: the span of a smaller support lies in
  // the span of any u-superset, so its extremes are dominated.
  if (options.budget.kind == Budget::Kind::Exhaustive) {
    if (binomial(n, u) > options.budget.cap)
      throw std::length_error("check_usd: C(N, u) exceeds the exhaustive subset cap");
    for_each_subset(n, u, visit);
    report.certificate = true;
  } else {
    std::mt19937_64 rng(options.budget.seed);
    for (int t = 0; t < options.budget.trials; ++t) visit(random_subset(n, u, rng));
    report.certificate = false;
  }
}

// Randomized search for p != 2 over u-sparse combinations.
void check_usd_lp(const SampledSystem& sampled, int u, double p, const UsdOptions& options,
                  DiscretizationReport& report) {
  const auto& dict = sampled.dictionary();
  int degree = 0;
  for (const auto& e : dict.elements) degree = std::max(degree, e.degree());
  const int n_grid = quadrature_grid_size(degree, p, options.oversample);

  // Grid evaluation matrix of the dictionary.
  std::vector<std::vector<Complex>> grid_cols;
  grid_cols.reserve(dict.elements.size());
  for (const auto& e : dict.elements) grid_cols.push_back(grid_values(e, n_grid));
  const std::size_t grid_size = grid_cols.empty() ? 0 : grid_cols.front().size();
  const auto& phi = sampled.matrix();

  auto ratio = [&](const std::vector<int>& support, const std::vector<Complex>& c) {
    std::vector<Complex> disc(static_cast<std::size_t>(sampled.m()), Complex(0.0));
    std::vector<Complex> cont(grid_size, Complex(0.0));
    for (std::size_t a = 0; a < support.size(); ++a) {
      const int j = support[a];
      for (int i = 0; i < sampled.m(); ++i) disc[static_cast<std::size_t>(i)] += c[a] * phi(i, j);
      const auto& col = grid_cols[static_cast<std::size_t>(j)];
      for (std::size_t i = 0; i < grid_size; ++i) cont[i] += c[a] * col[i];
    }
    const double dn = discrete_lp_norm(disc, p);
    const double cn = discrete_lp_norm(cont, p);
    if (cn == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return std::pow(dn / cn, p);
  };

  std::mt19937_64 rng(options.budget.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  report.c_low = kInf;
  report.c_high = -kInf;

  auto polish = [&](const std::vector<int>& support, std::vector<Complex> c, bool minimize) {
    double best = ratio(support, c);
    double step = 0.5;
    const Complex dirs[] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    for (int round = 0; round < options.polish_rounds; ++round, step *= 0.5) {
      for (std::size_t a = 0; a < c.size(); ++a) {
        for (const auto& dir : dirs) {
          auto trial = c;
          trial[a] += step * dir * std::abs(c[a] == Complex(0.0) ? Complex(1.0) : c[a]);
          const double v = ratio(support, trial);
          if (std::isnan(v)) continue;
          if (minimize ? v < best : v > best) {
            best = v;
            c = std::move(trial);
          }
        }
      }
    }
    return best;
  };

  for (int t = 0; t < options.budget.trials; ++t) {
    const auto support = random_subset(sampled.N(), u, rng);
    std::vector<Complex> c(static_cast<std::size_t>(u));
    for (auto& z : c) z = Complex(gauss(rng), gauss(rng));
    const double lo = polish(support, c, true);
    const double hi = polish(support, c, false);
    if (lo < report.c_low) {
      report.c_low = lo;
      report.worst_support = support;
    }
    if (hi > report.c_high) {
      report.c_high = hi;
      report.peak_support = support;
    }
    ++report.supports_examined;
  }
  report.certificate = false;
}

}  // namespace

DiscretizationReport check_usd(const SampledSystem& sampled, int u, double p, const UsdOptions& options) {
  if (u < 1 || u > sampled.N()) throw std::invalid_argument("check_usd: require 1 <= u <= N");
  if (!(p >= 1.0) || std::isinf(p)) throw std::invalid_argument("check_usd: require 1 <= p < infinity");
  if (sampled.m() < 1) throw std::invalid_argument("check_usd: empty point set");
  const bool l2 = p == 2.0;
  if (!l2 && options.budget.kind == Budget::Kind::Exhaustive)
    throw std::invalid_argument("check_usd: p != 2 requires a randomized budget");
  if (options.budget.kind == Budget::Kind::Randomized && options.budget.trials < 1)
    throw std::invalid_argument("check_usd: randomized budget needs trials >= 1");

  DiscretizationReport report;
  report.m = sampled.m();
  report.N = sampled.N();
  report.u = u;
  report.p = p;
  report.mode = options.mode;
  report.method = options.budget.label();
  report.seed = sampled.points().provenance() == PointSet::Provenance::Random ? sampled.points().seed()
                                                                               : options.budget.seed;
  report.one_sided_D = options.one_sided_D;

  if (l2) {
    check_usd_l2(sampled, u, options, report);
  } else {
    check_usd_lp(sampled, u, p, options, report);
  }
  // Roundoff can push an exact zero eigenvalue slightly negative.
  report.c_low = std::max(report.c_low, 0.0);
  report.holds = decide_holds(report);
  return report;
}

// ---------------------------------------------------------------------------
// Unconditionality, Nikol'skii and Riesz constants

std::string to_string(ConstantTag tag) {
  switch (tag) {
    case ConstantTag::Exact:
      return "exact";
    case ConstantTag::EmpiricalLowerBound:
      return "empirical-lower-bound";
    case ConstantTag::TheoreticalUpperBound:
      return "theoretical-upper-bound";
  }
  return "exact";
}

namespace {

// sup_c ||f_A|| / dist(f_A, V_J) for one pair (A, J).
double up_ratio(const Eigen::MatrixXcd& gram, const std::vector<int>& a, const std::vector<int>& j) {
  const Eigen::MatrixXcd gaa = principal(gram, a, a);
  Eigen::MatrixXcd schur = gaa;
  if (!j.empty()) {
    const Eigen::MatrixXcd gaj = principal(gram, a, j);
    const Eigen::MatrixXcd gjj = principal(gram, j, j);
    // Pseudo-inverse through the complete orthogonal decomposition.
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(gjj);
    cod.setThreshold(1e-12);
    schur -= gaj * cod.solve(gaj.adjoint());
  }
  const Eigen::MatrixXcd w = whitening(gaa);
  if (w.cols() == 0) return 1.0;  // f_A = 0 for every c
  const Eigen::MatrixXcd t = w.adjoint() * schur * w;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(t, Eigen::EigenvaluesOnly);
  const double lam = es.eigenvalues().minCoeff();
  if (lam <= 1e-14) return kInf;
  return 1.0 / std::sqrt(lam);
}

}  // namespace

UpEstimate check_up(const Eigen::MatrixXcd& gram, int u, int D_cap, const Budget& budget) {
  const int n = static_cast<int>(gram.rows());
  if (u < 1 || u > D_cap || D_cap > n) throw std::invalid_argument("check_up: require 1 <= u <= D_cap <= N");
  UpEstimate est;
  est.U.value = 1.0;

  auto visit = [&](const std::vector<int>& a, const std::vector<int>& j) {
    const double r = up_ratio(gram, a, j);
    ++est.pairs_examined;
    if (r > est.U.value || est.A.empty()) {
      est.U.value = std::max(est.U.value, r);
      est.A = a;
      est.J = j;
    }
  };

  // Enlarging A or J can only increase the ratio, so |A| + |J| = D_cap suffices.
  if (budget.kind == Budget::Kind::Exhaustive) {
    std::uint64_t total = 0;
    for (int a = 1; a <= u; ++a) {
      const auto c1 = binomial(n, a);
      const auto c2 = binomial(n - a, D_cap - a);
      if (c1 != 0 && c2 > budget.cap / c1) throw std::length_error("check_up: pair count exceeds cap");
      total += c1 * c2;
      if (total > budget.cap) throw std::length_error("check_up: pair count exceeds cap");
    }
    for (int a = 1; a <= u; ++a) {
      for_each_subset(n, a, [&](const std::vector<int>& A) {
        std::vector<int> rest;
        for (int i = 0, p = 0; i < n; ++i) {
          if (p < a && A[static_cast<std::size_t>(p)] == i) {
            ++p;
          } else {
            rest.push_back(i);
          }
        }
        for_each_subset(static_cast<int>(rest.size()), D_cap - a, [&](const std::vector<int>& pick) {
          std::vector<int> J;
          J.reserve(pick.size());
          for (int q : pick) J.push_back(rest[static_cast<std::size_t>(q)]);
          visit(A, J);
          return true;
        });
        return true;
      });
    }
    est.U.tag = ConstantTag::Exact;
  } else {
    std::mt19937_64 rng(budget.seed);
    std::uniform_int_distribution<int> size_a(1, u);
    for (int t = 0; t < budget.trials; ++t) {
      const int a = size_a(rng);
      auto all = random_subset(n, D_cap, rng);
      std::shuffle(all.begin(), all.end(), rng);
      std::vector<int> A(all.begin(), all.begin() + a), J(all.begin() + a, all.end());
      std::sort(A.begin(), A.end());
      std::sort(J.begin(), J.end());
      visit(A, J);
    }
    est.U.tag = ConstantTag::EmpiricalLowerBound;
  }
  return est;
}

UpEstimate check_up(const SampledSystem& sampled, int u, int D_cap, const Budget& budget) {
  return check_up(sampled.discrete_gram(), u, D_cap, budget);
}

UpEstimate check_up(const Dictionary& dictionary, int u, int D_cap, const Budget& budget) {
  return check_up(continuous_gram(dictionary), u, D_cap, budget);
}

NikolskiiEstimate nikolskii_constant(const Dictionary& dictionary, int u, double p, int trials,
                                     std::uint64_t seed, double R2, int oversample, double tol) {
  if (!(p >= 2.0)) throw std::invalid_argument("nikolskii_constant: require p >= 2");
  if (u < 1 || u > dictionary.size()) throw std::invalid_argument("nikolskii_constant: require 1 <= u <= N");
  NikolskiiEstimate est;
  const double inv_p = std::isinf(p) ? 0.0 : 1.0 / p;
  est.H_theory = std::pow(R2, 1.0 - 2.0 * inv_p) * std::pow(static_cast<double>(u), 0.5 - inv_p);
  est.H_emp = 0.0;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int t = 0; t < trials; ++t) {
    const auto support = random_subset(dictionary.size(), u, rng);
    std::vector<Complex> c(static_cast<std::size_t>(u));
    for (auto& z : c) z = Complex(gauss(rng), gauss(rng));
    const TrigPolynomial f = dictionary.combine(c, support);
    const double l2 = dictionary.orthonormal ? l2_norm(f) : std::sqrt(std::real(inner_product(f, f)));
    if (l2 == 0.0) continue;
    est.H_emp = std::max(est.H_emp, lp_norm(f, p, oversample).value / l2);
    ++est.trials;
  }
  est.consistent = est.H_emp <= est.H_theory * (1.0 + tol);
  return est;
}

NikolskiiEstimate nikolskii_constant(const TrigSystem& system, int u, double p, int trials,
                                     std::uint64_t seed, int oversample, double tol) {
  return nikolskii_constant(system.dictionary(), u, p, trials, seed, 1.0, oversample, tol);
}

ConstantsReport system_constants(const Dictionary& dictionary, int u, double p, int trials,
                                 std::uint64_t seed, const Budget& up_budget) {
  ConstantsReport rep;
  if (dictionary.orthonormal) {
    rep.R1 = {1.0, ConstantTag::Exact};
    rep.R2 = {1.0, ConstantTag::Exact};
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(continuous_gram(dictionary), Eigen::EigenvaluesOnly);
    rep.R1 = {std::sqrt(std::max(es.eigenvalues().minCoeff(), 0.0)), ConstantTag::Exact};
    rep.R2 = {std::sqrt(std::max(es.eigenvalues().maxCoeff(), 0.0)), ConstantTag::Exact};
  }
  rep.K = {rep.R1.value > 0.0 ? 1.0 / (rep.R1.value * rep.R1.value) : kInf, rep.R1.tag};
  rep.U = check_up(dictionary, u, std::min(dictionary.size(), 2 * u), up_budget).U;
  const auto nik = nikolskii_constant(dictionary, u, p, trials, seed, rep.R2.value);
  rep.H = {nik.H_theory, ConstantTag::TheoreticalUpperBound};
  rep.H_emp = {nik.H_emp, ConstantTag::EmpiricalLowerBound};
  return rep;
}

}  // namespace sparserec
