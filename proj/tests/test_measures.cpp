#include <cmath>
#include <numbers>

#include "doctest.h"
#include "orthoroots/measures.hpp"
#include "orthoroots/quadrature.hpp"

using namespace orthoroots;
using namespace orthoroots::measures;

TEST_CASE("gauss-legendre integrates polynomials of degree 2q-1 exactly") {
  const auto rule = quadrature::gauss_legendre(6, 0.0, 2.0);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) s += rule.weights[i] * std::pow(rule.nodes[i], 11);
  CHECK(s == doctest::Approx(std::pow(2.0, 12) / 12.0).epsilon(1e-13));
  CHECK(std::is_sorted(rule.nodes.begin(), rule.nodes.end()));
}

TEST_CASE("adaptive simpson copes with a jump") {
  auto step = [](double x) { return x < 0.3 ? 1.0 : 2.0; };
  CHECK(quadrature::adaptive_simpson(step, 0.0, 1.0, 1e-10) == doctest::Approx(1.7).epsilon(1e-8));
}

TEST_CASE("jacobi mass matches the beta-function value") {
  // 2^{b+g+1} B(b+1, g+1) for (b, g) = (1.5, -0.25); p0 = 0.57357216167011915 from mpmath.
  const auto w = WeightSpec::jacobi(1.5, -0.25);
  const double mass = integrate_wrt_mu([](double) { return 1.0; }, w);
  CHECK(1.0 / std::sqrt(mass) == doctest::Approx(0.57357216167011915).epsilon(1e-11));
}

TEST_CASE("chebyshev first kind mass is pi") {
  const auto w = WeightSpec::jacobi(-0.5, -0.5);
  CHECK(integrate_wrt_mu([](double) { return 1.0; }, w) == doctest::Approx(std::numbers::pi).epsilon(1e-11));
}

TEST_CASE("discretize rejects a negative density") {
  const auto w = WeightSpec::custom([](double x) { return x; }, {{-1.0, 1.0}}, false);
  CHECK_THROWS_AS(discretize(w, 0), InvalidArgument);
}

TEST_CASE("piecewise linear weight integrates exactly") {
  // Hat function on [-1, 1] with peak 2 at 0: area 2.
  const auto w = WeightSpec::piecewise_linear({{-1.0, 0.0}, {0.0, 2.0}, {1.0, 0.0}});
  CHECK(w.smooth());
  CHECK(integrate_wrt_mu([](double) { return 1.0; }, w) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(integrate_wrt_mu([](double x) { return x * x; }, w) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("equilibrium measure") {
  CHECK(equilibrium_density(0.0) == doctest::Approx(1.0 / std::numbers::pi));
  CHECK(equilibrium_density(1.5) == 0.0);
  CHECK(equilibrium_mass(-1.0, 1.0).value == doctest::Approx(1.0));
  // Edge bands at eps = 0.1.
  CHECK(1.0 - equilibrium_mass(-0.9, 0.9).value == doctest::Approx(0.28712));
  const auto m = equilibrium_mass(-2.0, 0.0);
  CHECK(m.clamped);
  CHECK(m.value == doctest::Approx(0.5));
  CHECK_THROWS_AS(equilibrium_mass(0.5, 0.0), InvalidArgument);
  CHECK(equilibrium_cdf(0.0) == doctest::Approx(0.5));
}

TEST_CASE("log potential is log 2 on the interval and decays outside") {
  for (double x : {-1.0, -0.73, 0.0, 0.2, 0.999, 1.0}) {
    CHECK(log_potential(x) == doctest::Approx(std::numbers::ln2).epsilon(1e-10));
  }
  // log 2 - log(|x| + sqrt(x^2 - 1))
  CHECK(log_potential(2.0) == doctest::Approx(-0.62381071636487140).epsilon(1e-9));
  CHECK(log_potential(-1.5) == doctest::Approx(-0.26927646955926159).epsilon(1e-9));
}

TEST_CASE("weight conditions") {
  SUBCASE("legendre: circle integral is pi, L(h) bounded") {
    const auto rep = check_weight_conditions(WeightSpec::jacobi(0.0, 0.0), {0.2, 2.9}, {0.1, 0.05, 0.025});
    CHECK(rep.circle_finite);
    CHECK(rep.circle_integral == doctest::Approx(std::numbers::pi).epsilon(1e-8));
    CHECK(rep.lipschitz_bounded);
  }
  SUBCASE("chebyshev: 1/w = sin(theta), integral 2") {
    const auto rep = check_weight_conditions(WeightSpec::jacobi(-0.5, -0.5), {0.2, 2.9}, {0.1, 0.05});
    CHECK(rep.circle_integral == doctest::Approx(2.0).epsilon(1e-8));
  }
  SUBCASE("a zero of order >= 1/2 at an end makes the integral diverge") {
    const auto rep = check_weight_conditions(WeightSpec::jacobi(0.75, 0.0), {0.2, 2.9}, {0.1, 0.05});
    CHECK_FALSE(rep.circle_finite);
  }
  SUBCASE("a jump contributes O(h) to the squared modulus, so L(h) stays bounded") {
    // unit jump at theta = pi/2: the squared difference is 1 on a set of length h
    const auto w = WeightSpec::custom([](double x) { return x < 0.0 ? 1.0 : 2.0; }, {{-1.0, 1.0}}, false);
    const auto rep = check_weight_conditions(w, {0.2, 2.9}, {1e-2, 1e-3, 1e-4});
    CHECK(rep.lipschitz_bounded);
    for (double r : rep.lipschitz_ratios) CHECK(r == doctest::Approx(1.0).epsilon(1e-2));
  }
  CHECK_THROWS_AS(check_weight_conditions(WeightSpec::jacobi(0, 0), {0.0, 1.0}, {0.1}), InvalidArgument);
}
