#include <cmath>

#include "doctest.h"
#include "orthoroots/ensembles.hpp"

using namespace orthoroots::ensembles;

TEST_CASE("counter streams are pure functions of the seed path") {
  CounterStream a({7, 3}), b({7, 3}), c({7, 4});
  for (int i = 0; i < 10; ++i) {
    const auto va = a.next_u64();
    CHECK(va == b.next_u64());
    CHECK(va != c.next_u64());
  }
  const auto s1 = sample_coeffs(CoefficientDistribution::gaussian(), 20, {1, 2});
  const auto s2 = sample_coeffs(CoefficientDistribution::gaussian(), 20, {1, 2});
  CHECK(s1.coeffs == s2.coeffs);
  CHECK(s1.coeffs.size() == 21);
}

TEST_CASE("declared moments") {
  // 2^{p/2} Gamma((p+1)/2) / sqrt(pi) at p = 3
  CHECK(CoefficientDistribution::gaussian().moment_2pe() == doctest::Approx(1.5957691216057308));
  CHECK(CoefficientDistribution::rademacher().moment_2pe() == 1.0);
  // alpha = 2.5, eps = 0.25: (a/(a-p)) / (a/(a-2))^{p/2}
  const auto p = CoefficientDistribution::pareto_sym(2.5);
  CHECK(p.epsilon() == doctest::Approx(0.25));
  CHECK(p.moment_2pe() == doctest::Approx(1.6355308679158849));
  CHECK_THROWS(CoefficientDistribution::pareto_sym(3.5));
  CHECK_THROWS(CoefficientDistribution::from_name("cauchy"));
}

TEST_CASE("empirical moments are near the declared ones") {
  for (const auto& d : {CoefficientDistribution::gaussian(), CoefficientDistribution::rademacher(),
                        CoefficientDistribution::uniform_sym(), CoefficientDistribution::pareto_sym(2.5)}) {
    const auto r = moment_report(d, 200000, 9);
    CAPTURE(d.name());
    CHECK(std::abs(r.mean) < 5.0 * std::sqrt(1.0 / 200000.0));
    CHECK(r.var == doctest::Approx(1.0).epsilon(d.kind() == DistKind::ParetoSym ? 0.15 : 0.02));
    if (d.kind() != DistKind::ParetoSym) {
      CHECK(std::abs(r.skewness) < 5.0 * r.skewness_stderr);
      CHECK(r.abs_moment_2pe == doctest::Approx(d.moment_2pe()).epsilon(0.03));
    }
  }
  CHECK_THROWS(moment_report(CoefficientDistribution::gaussian(), 10));
}

TEST_CASE("rademacher draws are +-1 and uniform draws stay in range") {
  CounterStream s({1, 1});
  const auto r = CoefficientDistribution::rademacher();
  const auto u = CoefficientDistribution::uniform_sym();
  for (int i = 0; i < 1000; ++i) {
    CHECK(std::abs(r.draw(s)) == 1.0);
    CHECK(std::abs(u.draw(s)) <= std::sqrt(3.0));
  }
}

TEST_CASE("match table compares first and second moments") {
  const auto rows = match_table(CoefficientDistribution::gaussian(), CoefficientDistribution::rademacher(), 100000);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].order == 1);
  CHECK(std::abs(rows[0].difference) < 0.03);
  CHECK(std::abs(rows[1].difference) < 0.03);
}
