#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "sparserec/greedy.hpp"
#include "sparserec/subsets.hpp"

using namespace sparserec;

namespace {

Eigen::VectorXcd samples_of(const TrigPolynomial& f, const PointSet& pts) { return to_vector(eval(f, pts)); }

Eigen::VectorXcd gaussian(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) v(i) = Complex(g(rng), g(rng));
  return v;
}

}  // namespace

TEST_CASE("DiscreteHilbert inner product and norm") {
  const auto pts = draw_points(9, 1, 2);
  const DiscreteHilbert h(SampledSystem(TrigSystem(2, 1), pts));
  const auto f = TrigPolynomial::monomial({1}, 2.0) + TrigPolynomial::constant(1, 1.0);
  const auto fs = samples_of(f, pts);
  CHECK(h.norm(fs) == doctest::Approx(lp_norm(f, 2.0, Measure::Empirical, pts).value).epsilon(1e-13));
  CHECK(std::abs(h.inner(fs, fs) - Complex(h.norm(fs) * h.norm(fs))) < 1e-12);
  for (int j = 0; j < h.N(); ++j) CHECK(h.column_norms()(j) == doctest::Approx(1.0));
}

TEST_CASE("WOMP on the exact grid: worked example") {
  const auto grid = uniform_grid_points(8, 1);
  const DiscreteHilbert h(SampledSystem(TrigSystem(1, 1), grid));
  const auto f0 = TrigPolynomial::monomial({1}, 2.0) + TrigPolynomial::monomial({-1}, 1.0) +
                  TrigPolynomial::constant(1, 0.5);
  const auto tr = womp(h, samples_of(f0, grid), 1.0, 3);
  // Column order: k = -1, 0, 1.
  CHECK(tr.selected == std::vector<int>{2, 0, 1});
  REQUIRE(tr.residual_norms.size() == 4);
  CHECK(tr.residual_norms[0] == doctest::Approx(std::sqrt(5.25)));
  CHECK(tr.residual_norms[1] == doctest::Approx(std::sqrt(1.25)));
  CHECK(tr.residual_norms[2] == doctest::Approx(0.5));
  CHECK(tr.residual_norms[3] <= 1e-14);
  CHECK(tr.weakness_certified());
  CHECK(std::abs(tr.coefficients(0) - Complex(2.0)) < 1e-13);
  CHECK(std::abs(tr.coefficients(1) - Complex(1.0)) < 1e-13);
  CHECK(std::abs(tr.coefficients(2) - Complex(0.5)) < 1e-13);
}

TEST_CASE("WOMP on the zero function takes no steps") {
  const auto pts = draw_points(10, 1, 1);
  const DiscreteHilbert h(SampledSystem(TrigSystem(2, 1), pts));
  const auto tr = womp(h, Eigen::VectorXcd::Zero(10), 1.0, 3);
  CHECK(tr.steps_used() == 0);
  CHECK(tr.selected.empty());
  REQUIRE(tr.residual_norms.size() == 1);
  CHECK(tr.residual_norms[0] == 0.0);
}

TEST_CASE("WOMP coherent pair against a 2x2 Gram oracle") {
  // g_0 = e^{ix}, g_1 = (e^{ix} + e^{2ix}) / sqrt 2, G = [[1, s], [s, 1]], s = 1/sqrt 2.
  const auto grid = uniform_grid_points(5, 1);
  const double s = 1.0 / std::sqrt(2.0);
  Dictionary d;
  d.dim = 1;
  d.elements = {TrigPolynomial::monomial({1}),
                (TrigPolynomial::monomial({1}) + TrigPolynomial::monomial({2})) * Complex(s)};
  const DiscreteHilbert h(SampledSystem(d, grid));

  SUBCASE("f0 = e^{ix} is a dictionary element") {
    const auto tr = womp(h, samples_of(TrigPolynomial::monomial({1}), grid), 1.0, 2);
    CHECK(tr.selected == std::vector<int>{0});
    CHECK(tr.stopped_early);
    CHECK(tr.residual_norms.back() <= 1e-14);
  }
  SUBCASE("f0 = e^{2ix}") {
    const auto tr = womp(h, samples_of(TrigPolynomial::monomial({2}), grid), 1.0, 2);
    // <f0, g_0> = 0, <f0, g_1> = s: pick g_1; residual e^{2ix} - s g_1 has norm s.
    REQUIRE(tr.selected.size() == 2);
    CHECK(tr.selected[0] == 1);
    CHECK(tr.chosen_ips[0] == doctest::Approx(s));
    CHECK(tr.residual_norms[1] == doctest::Approx(s));
    // <r_1, g_0> = -1/2, then the 2-column projection is exact.
    CHECK(tr.selected[1] == 0);
    CHECK(tr.chosen_ips[1] == doctest::Approx(0.5));
    CHECK(tr.residual_norms[2] <= 1e-14);
    // Oracle: G c = b with b = (<f0, g_1>, <f0, g_0>) = (s, 0) in selection order.
    Eigen::Matrix2cd G;
    G << 1.0, s, s, 1.0;
    Eigen::Vector2cd b(s, 0.0);
    const Eigen::Vector2cd c = G.lu().solve(b);
    CHECK(std::abs(tr.coefficients(0) - c(0)) < 1e-12);
    CHECK(std::abs(tr.coefficients(1) - c(1)) < 1e-12);
  }
}

TEST_CASE("WOMP invariants on random point sets") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const auto pts = draw_points(25, 1, static_cast<std::uint64_t>(trial + 1));
    const DiscreteHilbert h(SampledSystem(TrigSystem(5, 1), pts));
    const Eigen::VectorXcd f0 = h.columns() * gaussian(h.N(), rng);
    for (double t : {1.0, 0.5}) {
      for (auto rule : {SelectionRule::Greedy, SelectionRule::AdversarialWeak}) {
        const auto tr = womp(h, f0, t, 8, rule);
        CHECK(tr.weakness_certified());
        std::vector<int> sorted = tr.selected;
        std::sort(sorted.begin(), sorted.end());
        CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
        for (std::size_t k = 1; k < tr.residual_norms.size(); ++k)
          CHECK(tr.residual_norms[k] <= tr.residual_norms[k - 1] + 1e-12 * tr.residual_norms[0]);
        for (int j : tr.selected) CHECK(std::abs(h.inner(tr.residual, h.columns().col(j))) <= 1e-11 * h.norm(f0));
      }
    }
  }
}

TEST_CASE("adversarial-weak picks the lowest index over the threshold") {
  const auto grid = uniform_grid_points(9, 1);
  const DiscreteHilbert h(SampledSystem(TrigSystem(2, 1), grid));
  // Coefficients on k = -2..2: 0.1, 0.6, 0.2, 1.0, 0.3.
  TrigPolynomial f(1);
  const double c[] = {0.1, 0.6, 0.2, 1.0, 0.3};
  for (int k = -2; k <= 2; ++k) f.set({k}, c[k + 2]);
  const auto tr = womp(h, samples_of(f, grid), 0.5, 1, SelectionRule::AdversarialWeak);
  CHECK(tr.selected == std::vector<int>{1});
  const auto greedy = womp(h, samples_of(f, grid), 0.5, 1, SelectionRule::Greedy);
  CHECK(greedy.selected == std::vector<int>{3});
}

TEST_CASE("WOMP ties go to the lowest index") {
  const auto grid = uniform_grid_points(5, 1);
  const DiscreteHilbert h(SampledSystem(TrigSystem(2, 1), grid));
  const auto f = TrigPolynomial::monomial({-1}) + TrigPolynomial::monomial({2});
  const auto tr = womp(h, samples_of(f, grid), 1.0, 1);
  CHECK(tr.selected == std::vector<int>{1});
}

TEST_CASE("WOMP argument validation") {
  const auto pts = draw_points(4, 1, 1);
  const DiscreteHilbert h(SampledSystem(TrigSystem(2, 1), pts));
  const Eigen::VectorXcd f = Eigen::VectorXcd::Ones(4);
  CHECK_THROWS_AS(womp(h, f, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(womp(h, f, 1.5, 1), std::invalid_argument);
  CHECK_THROWS_AS(womp(h, f, 1.0, 5), std::invalid_argument);
  CHECK_THROWS_AS(womp(h, Eigen::VectorXcd::Ones(3), 1.0, 1), std::invalid_argument);
  Eigen::MatrixXcd cols = Eigen::MatrixXcd::Ones(4, 2);
  cols.col(1).setZero();
  CHECK_THROWS_AS(womp(DiscreteHilbert(cols), f, 1.0, 1), std::invalid_argument);
}

TEST_CASE("WOMP trace CSV") {
  const auto grid = uniform_grid_points(3, 1);
  const DiscreteHilbert h(SampledSystem(TrigSystem(1, 1), grid));
  const auto tr = womp(h, samples_of(TrigPolynomial::monomial({1}), grid), 1.0, 1);
  std::ostringstream os;
  write_womp_csv(os, tr);
  const std::string out = os.str();
  CHECK(womp_csv_header() == "step,chosen_index,chosen_ip,max_ip,residual_norm");
  CHECK(out.rfind(womp_csv_header() + "\n0,-1,nan,nan,", 0) == 0);
  CHECK(out.find("\n1,2,") != std::string::npos);
}

TEST_CASE("project examples") {
  std::mt19937_64 rng(41);
  const auto grid = uniform_grid_points(11, 1);
  const DiscreteHilbert h(SampledSystem(TrigSystem(5, 1), grid));
  const Eigen::VectorXcd f0 = h.columns() * gaussian(h.N(), rng);

  std::vector<int> all(static_cast<std::size_t>(h.N()));
  for (int j = 0; j < h.N(); ++j) all[static_cast<std::size_t>(j)] = j;
  CHECK(h.norm(project(h, f0, all).residual) <= 1e-12 * h.norm(f0));

  const auto empty = project(h, f0, {});
  CHECK((empty.residual - f0).norm() == 0.0);
  CHECK(empty.coefficients.size() == 0);

  CHECK_THROWS_AS(project(h, f0, {1, 1}), std::invalid_argument);
}

TEST_CASE("project agrees with the normal equations") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXcd cols = Eigen::MatrixXcd::Random(15, 6);
    const Eigen::VectorXcd f0 = gaussian(15, rng);
    const std::vector<int> support = random_subset(6, 3, rng);
    const auto proj = project(cols, f0, support);
    Eigen::MatrixXcd A(15, 3);
    for (int i = 0; i < 3; ++i) A.col(i) = cols.col(support[static_cast<std::size_t>(i)]);
    const Eigen::VectorXcd c = (A.adjoint() * A).lu().solve(A.adjoint() * f0);
    CHECK((proj.coefficients - c).norm() <= 1e-9 * c.norm());
    CHECK((A.adjoint() * proj.residual).norm() <= 1e-11 * f0.norm() * 15);
    CHECK_FALSE(proj.rank_deficient);
  }
}

TEST_CASE("project flags a rank-deficient support") {
  Eigen::MatrixXcd cols(4, 2);
  cols.col(0) = Eigen::VectorXcd::Ones(4);
  cols.col(1) = 2.0 * Eigen::VectorXcd::Ones(4);
  const auto proj = project(cols, Eigen::VectorXcd::Ones(4), {0, 1});
  CHECK(proj.rank_deficient);
  CHECK(proj.rank == 1);
  CHECK(proj.residual.norm() <= 1e-12);
}

TEST_CASE("best_vterm examples") {
  std::mt19937_64 rng(51);
  const auto grid = uniform_grid_points(9, 1);
  const DiscreteHilbert h(SampledSystem(TrigSystem(4, 1), grid));

  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(9);
  c(2) = 1.5;
  c(7) = Complex(0, -2.0);
  const auto exact = best_vterm(h, h.columns() * c, 2);
  CHECK(exact.sigma <= 1e-12);
  CHECK(exact.support == std::vector<int>{2, 7});

  const Eigen::VectorXcd dense = h.columns() * gaussian(9, rng);
  CHECK(best_vterm(h, dense, 9).sigma <= 1e-12);
  CHECK(best_vterm(h, dense, 0).sigma == doctest::Approx(h.norm(dense)));

  CHECK_THROWS_AS(best_vterm(h, dense, 4, std::uint64_t{5}), std::length_error);
}

TEST_CASE("best_vterm equals an independent loop over supports") {
  std::mt19937_64 rng(52);
  const auto pts = draw_points(20, 1, 52);
  const DiscreteHilbert h(SampledSystem(TrigSystem(3, 1), pts));
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::VectorXcd f = gaussian(20, rng);
    const auto best = best_vterm(h, f, 2);
    CHECK(best.supports_examined == 21);
    double oracle = INFINITY;
    std::vector<int> arg;
    for (int a = 0; a < 7; ++a)
      for (int b = a + 1; b < 7; ++b) {
        Eigen::MatrixXcd A(20, 2);
        A.col(0) = h.columns().col(a);
        A.col(1) = h.columns().col(b);
        const Eigen::VectorXcd x = A.colPivHouseholderQr().solve(f);
        const double r = (f - A * x).norm() / std::sqrt(20.0);
        if (r < oracle) {
          oracle = r;
          arg = {a, b};
        }
      }
    CHECK(best.sigma == doctest::Approx(oracle).epsilon(1e-10));
    CHECK(best.support == arg);
  }
}

TEST_CASE("best_vterm in L_p is no worse than the L_2 support") {
  std::mt19937_64 rng(53);
  const auto pts = draw_points(30, 1, 53);
  const DiscreteHilbert h(SampledSystem(TrigSystem(3, 1), pts));
  const Eigen::VectorXcd f = gaussian(30, rng);
  const auto b4 = best_vterm(h, f, 2, 4.0);
  CHECK(b4.approximate);
  const auto b2 = best_vterm(h, f, 2);
  Eigen::MatrixXcd A(30, 2);
  for (int i = 0; i < 2; ++i) A.col(i) = h.columns().col(b2.support[static_cast<std::size_t>(i)]);
  const Eigen::VectorXcd r = f - A * b2.coefficients;
  const std::vector<Complex> rv(r.data(), r.data() + r.size());
  CHECK(b4.sigma <= discrete_lp_norm(rv, 4.0) * (1 + 1e-8));
}

TEST_CASE("best_vterm for a polynomial under the Lebesgue measure") {
  // Orthonormal dictionary: sigma_v in L_2(mu) is the l_2 tail of the coefficients.
  const TrigSystem sys(3, 1);
  TrigPolynomial f(1);
  const double c[] = {0.5, 3.0, -1.0, 0.25, 2.0, 0.1, -0.7};
  for (int k = -3; k <= 3; ++k) f.set({k}, c[k + 3]);
  const auto b = best_vterm(f, sys.dictionary(), 3, 2.0, Measure::Lebesgue, PointSet(1, {}));
  const double tail = std::sqrt(0.5 * 0.5 + 0.25 * 0.25 + 0.1 * 0.1 + 0.7 * 0.7);
  CHECK(b.sigma == doctest::Approx(tail).epsilon(1e-12));
  CHECK(b.support == std::vector<int>{1, 2, 4});

  const auto pts = draw_points(11, 1, 3);
  const auto mixed = best_vterm(f, sys.dictionary(), 3, 2.0, Measure::Mixed, pts);
  const auto emp = best_vterm(f, sys.dictionary(), 3, 2.0, Measure::Empirical, pts);
  std::vector<Complex> coef(b.coefficients.data(), b.coefficients.data() + b.coefficients.size());
  const auto approx = sys.dictionary().combine(coef, b.support);
  CHECK(mixed.sigma <= lp_norm(f - approx, 2.0, Measure::Mixed, pts).value + 1e-12);
  CHECK(mixed.sigma >= std::sqrt(0.5) * std::max(tail, emp.sigma) - 1e-12);
}
