#include "doctest.h"

#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "sparserec/trig.hpp"

using namespace sparserec;

namespace {

TrigPolynomial random_poly(int dim, int degree, int terms, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> k(-degree, degree);
  std::normal_distribution<double> g;
  TrigPolynomial f(dim);
  for (int t = 0; t < terms; ++t) {
    std::vector<int> idx(static_cast<std::size_t>(dim));
    for (auto& x : idx) x = k(rng);
    f += TrigPolynomial::monomial(MultiIndex(idx), Complex(g(rng), g(rng)));
  }
  return f;
}

const std::vector<double> at(std::initializer_list<double> x) { return std::vector<double>(x); }

}  // namespace

TEST_CASE("eval of constants, monomials and Fejer kernels") {
  const auto c = TrigPolynomial::constant(1, 3.0);
  CHECK(std::abs(eval(c, at({1.7})) - Complex(3.0)) < 1e-15);

  const auto e1 = TrigPolynomial::monomial({1});
  CHECK(std::abs(eval(e1, at({kPi})) - Complex(-1.0)) < 1e-15);

  CHECK(std::abs(eval(fejer_kernel(2, 1), at({0.0})) - Complex(2.0)) < 1e-15);
}

TEST_CASE("eval rejects a dimension mismatch") {
  const auto f = TrigPolynomial::monomial({1, 2});
  CHECK_THROWS_AS(eval(f, at({0.5})), std::invalid_argument);
  CHECK_THROWS_AS(eval(f, PointSet(1, {0.1, 0.2})), std::invalid_argument);
}

TEST_CASE("canonical form drops zeros and tiny coefficients") {
  TrigPolynomial f = TrigPolynomial::monomial({1}, 2.0);
  f -= TrigPolynomial::monomial({1}, 2.0);
  CHECK(f.is_zero());

  TrigPolynomial g = TrigPolynomial::monomial({0}, 1.0);
  g += TrigPolynomial::monomial({0}, -1.0 + 1e-16);
  CHECK(g.is_zero());

  TrigPolynomial h(1);
  h.set({3}, 0.0);
  CHECK(h.is_zero());
}

TEST_CASE("l2_norm examples") {
  CHECK(l2_norm(TrigPolynomial::constant(1, 3.0)) == doctest::Approx(3.0).epsilon(1e-15));
  const auto f = TrigPolynomial::monomial({1}) + TrigPolynomial::monomial({-1});
  CHECK(l2_norm(f) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  // K_2 = 0.5 e^{-ix} + 1 + 0.5 e^{ix}
  CHECK(l2_norm(fejer_kernel(2, 1)) == doctest::Approx(std::sqrt(1.5)).epsilon(1e-15));
}

TEST_CASE("lp_norm examples") {
  for (int j = 1; j <= 6; ++j) {
    const auto n = lp_norm(fejer_kernel(j, 1), 1.0, 8);
    CHECK(n.value == doctest::Approx(1.0).epsilon(1e-12));
  }
  const auto n4 = lp_norm(TrigPolynomial::monomial({1}), 4.0);
  CHECK(n4.value == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(n4.exact);
  CHECK(n4.grid_per_dim > 4);
  CHECK_THROWS_AS(lp_norm(TrigPolynomial::monomial({1}), 0.5), std::invalid_argument);
}

TEST_CASE("lp_norm under empirical and mixed measures") {
  const auto f = TrigPolynomial::monomial({1}, 2.0) + TrigPolynomial::constant(1, 1.0);
  const PointSet xi(1, {0.0, kPi});
  // |f(0)| = 3, |f(pi)| = 1
  const double emp = lp_norm(f, 2.0, Measure::Empirical, xi).value;
  CHECK(emp == doctest::Approx(std::sqrt(5.0)).epsilon(1e-14));
  const double leb = lp_norm(f, 2.0, Measure::Lebesgue, xi).value;
  CHECK(leb == doctest::Approx(std::sqrt(5.0)).epsilon(1e-14));
  const double mixed = lp_norm(f, 2.0, Measure::Mixed, xi).value;
  CHECK(mixed == doctest::Approx(std::sqrt(0.5 * (5.0 + 5.0))).epsilon(1e-14));

  const double emp4 = lp_norm(f, 4.0, Measure::Empirical, xi).value;
  CHECK(emp4 == doctest::Approx(std::pow((81.0 + 1.0) / 2.0, 0.25)).epsilon(1e-14));
  const double leb4 = lp_norm(f, 4.0, Measure::Lebesgue, xi).value;
  const double mixed4 = lp_norm(f, 4.0, Measure::Mixed, xi).value;
  CHECK(mixed4 == doctest::Approx(std::pow(0.5 * (std::pow(leb4, 4) + std::pow(emp4, 4)), 0.25)).epsilon(1e-14));

  CHECK_THROWS_AS(lp_norm(f, 2.0, Measure::Empirical, PointSet(1, {})), std::invalid_argument);
}

TEST_CASE("p = infinity is the grid maximum") {
  const auto K = fejer_kernel(5, 1);
  const auto n = lp_norm(K, std::numeric_limits<double>::infinity(), 8);
  CHECK(n.value == doctest::Approx(5.0).epsilon(1e-14));
  CHECK_FALSE(n.exact);
}

TEST_CASE("Parseval consistency on random polynomials") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int dim = 1 + trial % 2;
    const int degree = dim == 1 ? 16 : 8;
    const auto f = random_poly(dim, degree, 1 + trial % 12, rng);
    const double l2 = l2_norm(f);
    CHECK(std::abs(lp_norm(f, 2.0).value - l2) <= 1e-10 * l2);
  }
}

TEST_CASE("even-p quadrature does not move when the grid doubles") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = random_poly(1, 10, 6, rng);
    for (double p : {4.0, 6.0}) {
      const auto a = lp_norm(f, p, 2);
      const auto b = lp_norm(f, p, 4);
      CHECK(a.exact);
      CHECK(std::abs(a.value - b.value) <= 1e-10 * b.value);
    }
  }
}

TEST_CASE("fejer_kernel coefficients and nonnegativity") {
  CHECK(fejer_kernel(1, 1) == TrigPolynomial::constant(1, 1.0));

  const auto K2 = fejer_kernel(2, 1);
  CHECK(K2.size() == 3);
  CHECK(K2.coeff({-1}) == Complex(0.5));
  CHECK(K2.coeff({0}) == Complex(1.0));
  CHECK(K2.coeff({1}) == Complex(0.5));

  CHECK(std::abs(eval(fejer_kernel(std::vector<int>{2, 2}), at({0.0, 0.0})) - Complex(4.0)) < 1e-14);

  for (int j = 1; j <= 8; ++j) {
    const auto K = fejer_kernel(j, 1);
    for (const auto& [k, c] : K.coeffs()) CHECK(c.imag() == 0.0);
    CHECK(K.coeff({0}) == Complex(1.0));
    double lo = 0.0;
    for (const auto& z : grid_values(K, 4096)) lo = std::min(lo, z.real());
    CHECK(lo >= -1e-12);
  }
  CHECK_THROWS_AS(fejer_kernel(std::vector<int>{2, 0}), std::invalid_argument);
}

TEST_CASE("dyadic blocks") {
  const auto b0 = dyadic_block(0, 1);
  REQUIRE(b0.size() == 1);
  CHECK(b0[0] == MultiIndex{0});

  const auto b1 = dyadic_block(1, 1);
  CHECK(b1 == std::vector<MultiIndex>{MultiIndex{-1}, MultiIndex{1}});

  const auto b2 = dyadic_block(2, 2);
  CHECK(b2.size() == 40);
  for (const auto& k : b2) {
    CHECK(k.sup_norm() >= 2);
    CHECK(k.sup_norm() <= 3);
  }
}

TEST_CASE("dyadic blocks partition the box of sup-norm <= 64") {
  for (int d : {1, 2}) {
    std::map<MultiIndex, int> hits;
    for (int j = 0; j <= 7; ++j)
      for (const auto& k : dyadic_block(j, d)) {
        ++hits[k];
        CHECK(BlockFamily{}.block_of(k) == j);
      }
    const int side = 2 * 127 + 1;
    CHECK(hits.size() == static_cast<std::size_t>(d == 1 ? side : side * side));
    for (const auto& [k, n] : hits) CHECK(n == 1);
    for (const auto& k : box_indices(std::vector<int>(static_cast<std::size_t>(d), 64))) CHECK(hits.count(k) == 1);
  }
}

TEST_CASE("multiply examples") {
  const auto f = TrigPolynomial::monomial({1}, Complex(1.0, 2.0)) + TrigPolynomial::constant(1, 0.5);
  CHECK(multiply(f, TrigPolynomial::constant(1, 1.0)) == f);
  CHECK(multiply(TrigPolynomial::monomial({1}), TrigPolynomial::monomial({-1})) == TrigPolynomial::constant(1, 1.0));

  const auto c = TrigPolynomial::monomial({1}) + TrigPolynomial::monomial({-1});
  const auto sq = multiply(c, c);
  CHECK(sq.size() == 3);
  CHECK(sq.coeff({-2}) == Complex(1.0));
  CHECK(sq.coeff({0}) == Complex(2.0));
  CHECK(sq.coeff({2}) == Complex(1.0));
}

TEST_CASE("multiply is commutative and pointwise") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> x(0.0, kTwoPi);
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = 1 + trial % 2;
    const auto f = random_poly(dim, 5, 4, rng);
    const auto g = random_poly(dim, 5, 4, rng);
    const auto fg = multiply(f, g);
    const auto gf = multiply(g, f);
    CHECK(fg.size() == gf.size());
    for (const auto& [k, c] : fg.coeffs()) CHECK(std::abs(c - gf.coeff(k)) <= 1e-12);
    CHECK(fg.degree() <= f.degree() + g.degree());
    for (int i = 0; i < 10; ++i) {
      std::vector<double> pt(static_cast<std::size_t>(dim));
      for (auto& v : pt) v = x(rng);
      CHECK(std::abs(eval(fg, pt) - eval(f, pt) * eval(g, pt)) <= 1e-10 * (1.0 + std::abs(eval(fg, pt))));
    }
  }
}

TEST_CASE("translate shifts the argument") {
  const auto K = fejer_kernel(4, 1);
  const std::vector<double> shift{1.3};
  const auto T = translate(K, shift);
  CHECK(std::abs(eval(T, at({1.3})) - Complex(4.0)) < 1e-13);
  CHECK(std::abs(eval(T, at({2.0})) - eval(K, at({0.7}))) < 1e-13);
}

TEST_CASE("TrigSystem enumeration and cardinality") {
  const TrigSystem s(std::vector<int>{1, 2});
  CHECK(s.cardinality() == 3 * 5);
  CHECK(s.indices().front() == MultiIndex{-1, -2});
  CHECK(s.indices().back() == MultiIndex{1, 2});
  CHECK(std::is_sorted(s.indices().begin(), s.indices().end()));
  CHECK(s.position({0, 0}) == 7);
  CHECK(s.position({2, 0}) == -1);
  const auto dict = s.dictionary();
  CHECK(dict.orthonormal);
  CHECK(dict.size() == 15);
}

TEST_CASE("grid_values agrees with eval on the grid") {
  std::mt19937_64 rng(14);
  const auto f = random_poly(2, 3, 5, rng);
  const int n = 5;
  const auto vals = grid_values(f, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const std::vector<double> pt{kTwoPi * i / n, kTwoPi * j / n};
      CHECK(std::abs(vals[static_cast<std::size_t>(i * n + j)] - eval(f, pt)) < 1e-12);
    }
}

TEST_CASE("polynomial text format round-trips") {
  std::mt19937_64 rng(15);
  const auto f = random_poly(2, 4, 6, rng);
  std::stringstream ss;
  write_polynomial(ss, f);
  CHECK(ss.str().rfind("dim 2\n", 0) == 0);
  const auto g = read_polynomial(ss);
  CHECK(g == f);

  std::stringstream bad("dim 1\n1 2\n");
  CHECK_THROWS(read_polynomial(bad));
}

TEST_CASE("PointSet wraps coordinates and records provenance") {
  const PointSet p(1, {-0.5, kTwoPi + 0.25}, PointSet::Provenance::Random, 42);
  CHECK(p.point(0)[0] == doctest::Approx(kTwoPi - 0.5));
  CHECK(p.point(1)[0] == doctest::Approx(0.25));
  CHECK(p.provenance_label() == "random(42)");
  CHECK_THROWS_AS(PointSet(2, {0.1, 0.2, 0.3}), std::invalid_argument);
}
