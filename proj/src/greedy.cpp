#include "sparserec/greedy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "sparserec/csv.hpp"
#include "sparserec/subsets.hpp"

namespace sparserec {

constexpr double kStopTolerance = 1e-13;

DiscreteHilbert::DiscreteHilbert(const SampledSystem& sampled) : DiscreteHilbert(sampled.matrix()) {}

DiscreteHilbert::DiscreteHilbert(Eigen::MatrixXcd columns) : columns_(std::move(columns)) {
  column_norms_.resize(columns_.cols());
  const double scale = columns_.rows() > 0 ? 1.0 / std::sqrt(static_cast<double>(columns_.rows())) : 0.0;
  for (Eigen::Index j = 0; j < columns_.cols(); ++j) column_norms_(j) = columns_.col(j).norm() * scale;
}

Complex DiscreteHilbert::inner(const Eigen::VectorXcd& f, const Eigen::VectorXcd& g) const {
  // Eigen's dot conjugates its first argument.
  return g.dot(f) / static_cast<double>(m());
}

double DiscreteHilbert::norm(const Eigen::VectorXcd& f) const {
  return m() > 0 ? f.norm() / std::sqrt(static_cast<double>(m())) : 0.0;
}

Eigen::VectorXcd DiscreteHilbert::normalized_inner_products(const Eigen::VectorXcd& f) const {
  Eigen::VectorXcd ip = columns_.adjoint() * f / static_cast<double>(m());
  for (Eigen::Index j = 0; j < ip.size(); ++j) ip(j) /= column_norms_(j);
  return ip;
}

Eigen::VectorXcd to_vector(const std::vector<Complex>& values) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) v(static_cast<Eigen::Index>(i)) = values[i];
  return v;
}

// ---------------------------------------------------------------------------
// Projection

Projection project(const Eigen::MatrixXcd& columns, const Eigen::VectorXcd& f0,
                   const std::vector<int>& support) {
  if (f0.size() != columns.rows()) throw std::invalid_argument("project: sample vector size mismatch");
  {
    auto s = support;
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end())
      throw std::invalid_argument("project: support indices must be distinct");
    for (int j : s)
      if (j < 0 || j >= columns.cols()) throw std::invalid_argument("project: support index out of range");
  }
  Projection out;
  if (support.empty()) {
    out.coefficients.resize(0);
    out.residual = f0;
    return out;
  }
  Eigen::MatrixXcd a(columns.rows(), static_cast<Eigen::Index>(support.size()));
  for (std::size_t i = 0; i < support.size(); ++i) a.col(static_cast<Eigen::Index>(i)) = columns.col(support[i]);
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(a);
  out.coefficients = cod.solve(f0);
  out.rank = static_cast<int>(cod.rank());
  out.rank_deficient = out.rank < static_cast<int>(support.size());
  out.residual = f0 - a * out.coefficients;
  return out;
}

Projection project(const DiscreteHilbert& h, const Eigen::VectorXcd& f0, const std::vector<int>& support) {
  return project(h.columns(), f0, support);
}

// ---------------------------------------------------------------------------
// WOMP

bool WompTrace::weakness_certified() const {
  for (std::size_t k = 0; k < chosen_ips.size(); ++k)
    if (chosen_ips[k] < t * max_ips[k] * (1.0 - 1e-12)) return false;
  return true;
}

WompTrace womp(const DiscreteHilbert& h, const Eigen::VectorXcd& f0, double t, int steps, SelectionRule rule) {
  if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("womp: weakness t must be in (0, 1]");
  if (steps < 0 || steps > std::min(h.m(), h.N()))
    throw std::invalid_argument("womp: steps must be <= min(m, N)");
  if (f0.size() != h.m()) throw std::invalid_argument("womp: sample vector size mismatch");
  const double top = h.N() ? h.column_norms().maxCoeff() : 0.0;
  for (Eigen::Index j = 0; j < h.N(); ++j)
    if (!(h.column_norms()(j) > 1e-14 * std::max(top, 1e-300)))
      throw std::invalid_argument("womp: zero dictionary column");

  WompTrace trace;
  trace.t = t;
  trace.rule = rule;
  trace.residual = f0;
  trace.coefficients.resize(0);
  const double norm0 = h.norm(f0);
  trace.residual_norms.push_back(norm0);
  if (norm0 == 0.0) {
    trace.stopped_early = steps > 0;
    return trace;
  }

  std::vector<char> taken(static_cast<std::size_t>(h.N()), 0);
  for (int k = 1; k <= steps; ++k) {
    const Eigen::VectorXcd ip = h.normalized_inner_products(trace.residual);
    const Eigen::VectorXd mag = ip.cwiseAbs();
    const double max_ip = mag.maxCoeff();
    if (max_ip <= kStopTolerance * norm0) {
      trace.stopped_early = true;
      break;
    }
    int choice = -1;
    if (rule == SelectionRule::Greedy) {
      for (Eigen::Index j = 0; j < mag.size(); ++j)
        if (!taken[static_cast<std::size_t>(j)] && (choice < 0 || mag(j) > mag(choice))) choice = static_cast<int>(j);
    } else {
      for (Eigen::Index j = 0; j < mag.size(); ++j)
        if (!taken[static_cast<std::size_t>(j)] && mag(j) >= t * max_ip) {
          choice = static_cast<int>(j);
          break;
        }
    }
    if (choice < 0 || mag(choice) < t * max_ip) {
      // Only previously selected columns meet the threshold; they are orthogonal
      // to the residual up to roundoff, so nothing is left to gain.
      trace.stopped_early = true;
      break;
    }
    taken[static_cast<std::size_t>(choice)] = 1;
    trace.selected.push_back(choice);
    trace.chosen_ips.push_back(mag(choice));
    trace.max_ips.push_back(max_ip);

    const Projection proj = project(h, f0, trace.selected);
    trace.coefficients = proj.coefficients;
    trace.residual = proj.residual;
    trace.rank_deficient = trace.rank_deficient || proj.rank_deficient;
    trace.residual_norms.push_back(h.norm(trace.residual));
  }
  return trace;
}

std::string womp_csv_header() { return "step,chosen_index,chosen_ip,max_ip,residual_norm"; }

void write_womp_csv(std::ostream& os, const WompTrace& trace) {
  os << womp_csv_header() << '\n';
  os << 0 << ',' << -1 << ",nan,nan," << format_double(trace.residual_norms.front()) << '\n';
  for (int k = 1; k <= trace.steps_used(); ++k) {
    const auto i = static_cast<std::size_t>(k - 1);
    os << k << ',' << trace.selected[i] << ',' << format_double(trace.chosen_ips[i]) << ','
       << format_double(trace.max_ips[i]) << ',' << format_double(trace.residual_norms[static_cast<std::size_t>(k)])
       << '\n';
  }
}

// ---------------------------------------------------------------------------
// Best v-term approximation

namespace {

double weighted_norm(const Eigen::VectorXd& w, const Eigen::VectorXcd& r, double p) {
  double mx = 0.0;
  for (Eigen::Index i = 0; i < r.size(); ++i)
    if (w(i) > 0.0) mx = std::max(mx, std::abs(r(i)));
  if (mx == 0.0) return 0.0;
  double s = 0.0;
  for (Eigen::Index i = 0; i < r.size(); ++i) s += w(i) * std::pow(std::abs(r(i)) / mx, p);
  return mx * std::pow(s, 1.0 / p);
}

Eigen::VectorXcd weighted_ls(const Eigen::MatrixXcd& a, const Eigen::VectorXd& w, const Eigen::VectorXcd& y) {
  const Eigen::VectorXd s = w.cwiseSqrt();
  const Eigen::MatrixXcd sa = s.asDiagonal() * a;
  const Eigen::VectorXcd sy = s.asDiagonal() * y;
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(sa);
  return cod.solve(sy);
}

// Iteratively reweighted least squares for min sum_i w_i |y_i - (A c)_i|^p,
// with a backtracking step so that the objective never increases.
Eigen::VectorXcd irls(const Eigen::MatrixXcd& a, const Eigen::VectorXd& w, const Eigen::VectorXcd& y,
                      double p, double tol) {
  Eigen::VectorXcd c = weighted_ls(a, w, y);
  double obj = weighted_norm(w, y - a * c, p);
  for (int iter = 0; iter < 500 && obj > 0.0; ++iter) {
    const Eigen::VectorXcd r = y - a * c;
    const double rmax = r.cwiseAbs().maxCoeff();
    const double floor = 1e-12 * rmax;
    Eigen::VectorXd omega(w.size());
    for (Eigen::Index i = 0; i < w.size(); ++i)
      omega(i) = w(i) * std::pow(std::max(std::abs(r(i)), floor) / rmax, p - 2.0);
    const Eigen::VectorXcd target = weighted_ls(a, omega, y);
    double step = 1.0;
    bool improved = false;
    for (int ls = 0; ls < 30; ++ls, step *= 0.5) {
      const Eigen::VectorXcd trial = c + step * (target - c);
      const double v = weighted_norm(w, y - a * trial, p);
      if (v < obj) {
        const double rel = (obj - v) / obj;
        c = trial;
        obj = v;
        improved = rel > tol;
        break;
      }
    }
    if (!improved) break;
  }
  return c;
}

}  // namespace

BestTerm best_vterm_weighted(const Eigen::MatrixXcd& rows, const Eigen::VectorXd& weights,
                             const Eigen::VectorXcd& y, int v, double p, std::uint64_t cap, double tol) {
  const int n = static_cast<int>(rows.cols());
  if (v < 0 || v > n) throw std::invalid_argument("best_vterm: require 0 <= v <= N");
  if (weights.size() != rows.rows() || y.size() != rows.rows())
    throw std::invalid_argument("best_vterm: size mismatch");
  if (!(p >= 1.0) || std::isinf(p)) throw std::invalid_argument("best_vterm: require 1 <= p < infinity");
  if (binomial(n, v) > cap) throw std::length_error("best_vterm: C(N, v) exceeds the subset cap");

  BestTerm best;
  best.sigma = std::numeric_limits<double>::infinity();
  best.approximate = p != 2.0;
  for_each_subset(n, v, [&](const std::vector<int>& support) {
    Eigen::MatrixXcd a(rows.rows(), v);
    for (int i = 0; i < v; ++i) a.col(i) = rows.col(support[static_cast<std::size_t>(i)]);
    const Eigen::VectorXcd c = v == 0 ? Eigen::VectorXcd(0)
                               : p == 2.0 ? weighted_ls(a, weights, y)
                                          : irls(a, weights, y, p, tol);
    const double s = weighted_norm(weights, v == 0 ? y : Eigen::VectorXcd(y - a * c), p);
    ++best.supports_examined;
    if (s < best.sigma) {
      best.sigma = s;
      best.support = support;
      best.coefficients = c;
    }
    return true;
  });
  return best;
}

BestTerm best_vterm(const DiscreteHilbert& h, const Eigen::VectorXcd& f0, int v, std::uint64_t cap) {
  return best_vterm(h, f0, v, 2.0, cap);
}

BestTerm best_vterm(const DiscreteHilbert& h, const Eigen::VectorXcd& f0, int v, double p,
                    std::uint64_t cap, double tol) {
  const Eigen::VectorXd w = Eigen::VectorXd::Constant(h.m(), 1.0 / std::max(h.m(), 1));
  return best_vterm_weighted(h.columns(), w, f0, v, p, cap, tol);
}

BestTerm best_vterm(const TrigPolynomial& f, const Dictionary& dictionary, int v, double p,
                    Measure measure, const PointSet& points, int oversample, std::uint64_t cap, double tol) {
  if (f.dim() != dictionary.dim) throw std::invalid_argument("best_vterm: dimension mismatch");
  const int n_dict = dictionary.size();
  const bool use_grid = measure != Measure::Empirical;
  const bool use_points = measure != Measure::Lebesgue;
  if (use_points && points.empty()) throw std::invalid_argument("best_vterm: discrete measure needs points");

  int degree = f.degree();
  for (const auto& e : dictionary.elements) degree = std::max(degree, e.degree());
  const int n_grid = use_grid ? quadrature_grid_size(degree, p, oversample) : 0;

  std::vector<std::vector<Complex>> grid_cols;
  std::vector<Complex> grid_f;
  if (use_grid) {
    for (const auto& e : dictionary.elements) grid_cols.push_back(grid_values(e, n_grid));
    grid_f = grid_values(f, n_grid);
  }
  const Eigen::Index g = static_cast<Eigen::Index>(grid_f.size());
  const Eigen::Index m = use_points ? points.size() : 0;

  Eigen::MatrixXcd rows(g + m, n_dict);
  Eigen::VectorXcd y(g + m);
  Eigen::VectorXd w(g + m);
  const double grid_share = use_points ? 0.5 : 1.0;
  const double point_share = use_grid ? 0.5 : 1.0;
  for (Eigen::Index i = 0; i < g; ++i) {
    for (int j = 0; j < n_dict; ++j) rows(i, j) = grid_cols[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
    y(i) = grid_f[static_cast<std::size_t>(i)];
    w(i) = grid_share / static_cast<double>(g);
  }
  if (use_points) {
    const auto fv = eval(f, points);
    for (int j = 0; j < n_dict; ++j) {
      const auto col = eval(dictionary.elements[static_cast<std::size_t>(j)], points);
      for (Eigen::Index i = 0; i < m; ++i) rows(g + i, j) = col[static_cast<std::size_t>(i)];
    }
    for (Eigen::Index i = 0; i < m; ++i) {
      y(g + i) = fv[static_cast<std::size_t>(i)];
      w(g + i) = point_share / static_cast<double>(m);
    }
  }
  return best_vterm_weighted(rows, w, y, v, p, cap, tol);
}

}  // namespace sparserec
