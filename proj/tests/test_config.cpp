#include "doctest.h"
#include "orthoroots/config.hpp"

using namespace orthoroots;
using namespace orthoroots::config;

TEST_CASE("experiment config round trip") {
  const json in = json::parse(R"({
    "weight": {"kind": "jacobi", "beta": 0.5, "gamma": -0.25},
    "dist": {"dist": "pareto", "alpha": 2.5},
    "n": 30, "trials": 12, "intervals": [[-0.5, 0.5], [0.1, 0.2]],
    "seed": 18446744073709551615, "workers": 3,
    "grid": {"min_points": 32, "points_per_degree": 10, "max_points": 4096}
  })");
  const auto c = experiment_from_json(in);
  CHECK(c.n == 30);
  CHECK(c.seed == 18446744073709551615ULL);
  CHECK(c.dist.alpha() == 2.5);
  CHECK(c.grid.points_per_degree == 10);
  const auto out = experiment_to_json(c);
  CHECK(experiment_to_json(experiment_from_json(out)) == out);
  CHECK(fingerprint(experiment_to_json(c, false)).size() == 16);
  auto c2 = c;
  c2.workers = 8;
  CHECK(fingerprint(experiment_to_json(c, false)) == fingerprint(experiment_to_json(c2, false)));
  c2.seed = 1;
  CHECK(fingerprint(experiment_to_json(c, false)) != fingerprint(experiment_to_json(c2, false)));
}

TEST_CASE("unknown keys and bad values are rejected") {
  CHECK_THROWS_AS(experiment_from_json(json::parse(R"({"n": 3, "trails": 4})")), InvalidArgument);
  CHECK_THROWS_AS(experiment_from_json(json::parse(R"({"n": -1})")), InvalidArgument);
  CHECK_THROWS_AS(experiment_from_json(json::parse(R"({"intervals": [[1, 0]]})")), InvalidArgument);
  CHECK_THROWS_AS(weight_from_json(json::parse(R"({"kind": "hermite"})")), InvalidArgument);
  CHECK_THROWS_AS(dist_from_json(json::parse(R"({"dist": "gaussian", "alpha": 2.5})")), InvalidArgument);
  CHECK_THROWS_AS(dist_from_json(json::parse(R"({"dist": "pareto", "alpha": 3.5})")), InvalidArgument);
}

TEST_CASE("custom weight table and recurrence table round trip") {
  const auto w = weight_from_json(json::parse(R"({"kind": "custom", "table": [[-1, 1], [0, 2], [1, 1]]})"));
  CHECK(weight_to_json(w)["table"].size() == 3);
  const auto t = basis::table_for_weight(w, 8);
  const auto j = table_to_json(t, weight_to_json(w));
  const auto back = table_from_json(j);
  CHECK(back.a_coeffs() == t.a_coeffs());
  CHECK(back.b_coeffs() == t.b_coeffs());
  CHECK(back.p0() == t.p0());
}
