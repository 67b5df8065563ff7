#include <cmath>
#include <numbers>

#include "doctest.h"
#include "orthoroots/basis.hpp"

using namespace orthoroots;
using namespace orthoroots::basis;

// Reference values from mpmath: P_k^{(b,g)}(x) / sqrt(h_k).
TEST_CASE("jacobi basis values and derivatives against mpmath") {
  struct Row {
    double beta, gamma;
    int k;
    double x, p, dp;
  };
  const Row rows[] = {
      {1.5, -0.25, 3, 0.3, -0.70928525386960297, 2.6638509534538890},
      {1.5, -0.25, 10, -0.7, -0.29607761321881195, -7.1877900074827537},
      {1.5, -0.25, 40, 0.55, 1.6553804569350692, -10.291293249227379},
      {0.5, 2.0, 3, 0.3, -0.28124263288168507, -3.0075401474661866},
      {0.5, 2.0, 10, -0.7, 2.1772329791034782, 19.487277348081815},
      {0.5, 2.0, 40, 0.55, -0.27685333397442427, 31.382344702387474},
  };
  for (const auto& r : rows) {
    const auto t = jacobi_recurrence(r.beta, r.gamma, 40);
    const auto ev = eval_basis(t, r.x, r.k, 1);
    CHECK(ev.values[r.k] == doctest::Approx(r.p).epsilon(1e-10));
    CHECK(ev.d1[r.k] == doctest::Approx(r.dp).epsilon(1e-9));
  }
}

TEST_CASE("legendre closed form coefficients") {
  const auto t = jacobi_recurrence(0.0, 0.0, 10);
  for (int k = 1; k <= 10; ++k) {
    CHECK(t.a(k - 1) == 0.0);
    CHECK(t.b(k) == doctest::Approx(k / std::sqrt(4.0 * k * k - 1.0)).epsilon(1e-15));
  }
  CHECK(t.p0() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-13));
  CHECK(t.orthonormality_defect() < 1e-12);
}

TEST_CASE("chebyshev basis is sqrt(2/pi) cos(k theta)") {
  const auto t = jacobi_recurrence(-0.5, -0.5, 64);
  for (double theta : {0.1, 1.0, 2.2, 3.0}) {
    const auto ev = eval_basis(t, std::cos(theta), 64);
    CHECK(ev.values[0] == doctest::Approx(1.0 / std::sqrt(std::numbers::pi)).epsilon(1e-13));
    for (int k = 1; k <= 64; ++k) {
      CHECK(std::abs(ev.values[k] - std::sqrt(2.0 / std::numbers::pi) * std::cos(k * theta)) < 1e-10);
    }
  }
}

TEST_CASE("stieltjes on a jacobi weight reproduces the closed form") {
  const auto w = measures::WeightSpec::custom(
      [](double, double from_lo, double from_hi) { return std::pow(from_hi, 0.5) * std::pow(from_lo, -0.3); });
  const auto s = recurrence_from_weight(w, 30);
  std::vector<double> a, b;
  jacobi_coefficients(0.5, -0.3, 30, a, b);
  for (int k = 0; k < 30; ++k) {
    CHECK(s.a(k) == doctest::Approx(a[k]).epsilon(1e-9));
    CHECK(s.b(k + 1) == doctest::Approx(b[k]).epsilon(1e-9));
  }
  CHECK(s.orthonormality_defect() < 1e-9);
}

TEST_CASE("stieltjes on a piecewise linear weight is orthonormal") {
  const auto w = measures::WeightSpec::piecewise_linear({{-1.0, 0.5}, {0.0, 1.5}, {0.5, 1.0}, {1.0, 0.2}});
  const auto t = table_for_weight(w, 40);
  CHECK(t.orthonormality_defect() < 1e-10);
  CHECK(t.weight_id() == "custom");
}

TEST_CASE("clenshaw agrees with the forward sum") {
  const auto t = jacobi_recurrence(0.0, 0.0, 5);
  const std::vector<double> c{0.3, -1.2, 0.5, 0.8, -0.4, 1.1};
  // numpy legval of the rescaled coefficients
  CHECK(eval_combo(t, c, 0.37) == doctest::Approx(-0.37068701730055880).epsilon(1e-13));
  std::vector<double> xs{-0.9, 0.0, 0.37, 1.4}, out(4);
  eval_combo(t, c, xs, out);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto ev = eval_basis(t, xs[i], 5);
    double s = 0.0;
    for (int k = 0; k <= 5; ++k) s += c[k] * ev.values[k];
    CHECK(out[i] == doctest::Approx(s).epsilon(1e-13));
  }
  CHECK_THROWS_AS(eval_combo(t, std::vector<double>(7, 1.0), 0.0), InvalidArgument);
  CHECK_THROWS_AS(eval_combo(t, std::vector<double>{}, 0.0), InvalidArgument);
}

TEST_CASE("christoffel-darboux kernels against mpmath") {
  const auto t = jacobi_recurrence(0.0, 0.0, 30);
  auto kv = kernels(t, 0.3, 10);
  CHECK(kv.A == doctest::Approx(3.8336176396141354).epsilon(1e-12));
  CHECK(kv.B == doctest::Approx(-0.17597836944672181).epsilon(1e-10));
  CHECK(kv.C == doctest::Approx(141.33326966156959).epsilon(1e-11));
  kv = kernels(t, -0.8, 25);
  CHECK(kv.A == doctest::Approx(13.997628494249594).epsilon(1e-12));
  CHECK(kv.B == doctest::Approx(1.3512944118454059).epsilon(1e-10));
  CHECK(kv.C == doctest::Approx(8215.6308640607299).epsilon(1e-11));
}

TEST_CASE("complex evaluation matches real evaluation on the axis") {
  const auto t = jacobi_recurrence(0.5, 0.5, 12);
  const auto z = eval_basis(t, std::complex<double>(0.4, 0.0), 12);
  const auto r = eval_basis(t, 0.4, 12);
  for (int k = 0; k <= 12; ++k) CHECK(z[k].real() == doctest::Approx(r.values[k]).epsilon(1e-14));
}

TEST_CASE("invalid jacobi exponents") {
  CHECK_THROWS_AS(jacobi_recurrence(-1.0, 0.0, 4), InvalidArgument);
  CHECK_THROWS_AS(jacobi_recurrence(0.0, 0.0, -1), InvalidArgument);
  CHECK_THROWS_AS(RecurrenceTable({0.0}, {-1.0}, 1.0, "x"), InvalidArgument);
}
