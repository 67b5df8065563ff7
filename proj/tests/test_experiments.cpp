#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "orthoroots/basis.hpp"
#include "orthoroots/config.hpp"
#include "orthoroots/experiments.hpp"
#include "orthoroots/kacrice.hpp"

using namespace orthoroots;
using namespace orthoroots::experiments;

namespace {
ExperimentConfig small(int n = 40, std::size_t trials = 200) {
  ExperimentConfig c;
  c.n = n;
  c.trials = trials;
  c.seed = 5;
  c.workers = 2;
  return c;
}
bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }
}  // namespace

TEST_CASE("constant polynomial has no roots") {
  auto c = small(0, 50);
  const auto r = run_global_count(c);
  CHECK(r.estimate == 0.0);
  CHECK(r.std_error == 0.0);
  CHECK(r.trials == 50);
}

TEST_CASE("records are bit-identical across runs and worker counts") {
  auto c = small();
  c.intervals = {{-0.4, 0.1}, {0.1, 0.9}};
  c.workers = 1;
  const auto a = run_interval_counts(c);
  c.workers = 3;
  const auto b = run_interval_counts(c);
  REQUIRE(a.size() == 3);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(same_bits(a[i].estimate, b[i].estimate));
    CHECK(same_bits(a[i].std_error, b[i].std_error));
    CHECK(a[i].fingerprint == b[i].fingerprint);
  }
}

TEST_CASE("interval counts are additive trial by trial") {
  auto c = small();
  c.intervals = {{-0.5, 0.2}, {0.2, 0.7}, {-0.5, 0.7}};
  const auto r = run_interval_counts(c);
  REQUIRE(r.size() == 4);
  REQUIRE(r[1].per_trial.size() == r[3].per_trial.size());
  for (std::size_t t = 0; t < r[1].per_trial.size(); ++t) {
    CHECK(r[1].per_trial[t] + r[2].per_trial[t] == r[3].per_trial[t]);
  }
}

TEST_CASE("gaussian interval estimate is consistent with kac-rice") {
  auto c = small(60, 800);
  c.intervals = {{-0.6, 0.3}};
  const auto r = run_interval_counts(c)[1];
  const auto t = basis::jacobi_recurrence(0.0, 0.0, 60);
  const double ec = kacrice::expected_count(t, 60, {-0.6, 0.3});
  CHECK(std::abs(r.estimate - ec) <= 4.0 * r.std_error);
}

TEST_CASE("local count, zero-length window, and universality plumbing") {
  auto c = small(100, 2000);
  CHECK(run_local_count(c, {0.3, 0.3}).estimate == 0.0);
  const auto loc = run_local_count(c, {-0.01, 0.01});
  const auto t = basis::jacobi_recurrence(0.0, 0.0, 100);
  CHECK(std::abs(loc.estimate - kacrice::expected_count(t, 100, {-0.01, 0.01})) <= 3.5 * loc.std_error);

  auto a = small(50, 400);
  auto b = a;
  b.seed = 77;
  const auto rep = universality_gap(a, b, CountScope::Global);
  CHECK(rep.pooled_stderr > 0.0);
  CHECK(rep.gap == doctest::Approx(rep.record_a.estimate - rep.record_b.estimate));
  b.n = 51;
  CHECK_THROWS_AS(universality_gap(a, b, CountScope::Global), InvalidArgument);
  b = a;
  CHECK_THROWS_AS(universality_gap(a, b, CountScope::Local), InvalidArgument);
}

TEST_CASE("compare records verdict") {
  ResultRecord a, b;
  a.estimate = 10.0;
  a.std_error = 0.3;
  b.estimate = 10.5;
  b.std_error = 0.4;
  auto rep = compare_records(a, b);
  CHECK(rep.pooled_stderr == doctest::Approx(0.5));
  CHECK(rep.pass);
  b.estimate = 11.6;
  CHECK_FALSE(compare_records(a, b).pass);
}

TEST_CASE("edge fractions shrink with eps") {
  auto c = small(100, 300);
  const auto rep = edge_profile(c, {0.2, 0.1, 0.05});
  REQUIRE(rep.band.size() == 3);
  CHECK(rep.band[0].estimate > rep.band[1].estimate);
  CHECK(rep.band[1].estimate > rep.band[2].estimate);
  CHECK(rep.outside.estimate < 0.02);
  CHECK(rep.total.estimate > 50.0);
  CHECK_THROWS_AS(edge_profile(c, {0.0}), InvalidArgument);
}

TEST_CASE("pair correlation events are ordered") {
  auto c = small(100, 1000);
  const auto rep = pair_correlation(c, 0.0, 1.0);
  CHECK(rep.at_least_two.estimate < rep.at_least_one.estimate);
  CHECK(rep.factorial_moment.estimate >= 2.0 * rep.at_least_two.estimate);
  const auto tiny = pair_correlation(c, 0.0, 1e-3);
  CHECK(tiny.at_least_two.estimate == 0.0);
}

TEST_CASE("anti-concentration") {
  auto c = small(100, 500);
  CHECK(anticoncentration_check(c, 0.2, 1.0).estimate >= 0.999);
  CHECK(anticoncentration_check(c, 0.2, 1.0, 0.0).estimate == 1.0);
  c.dist = ensembles::CoefficientDistribution::rademacher();
  CHECK(anticoncentration_check(c, 0.2, 1.0).estimate >= 0.999);
  c.damping.assign(101, 0.0);
  CHECK(anticoncentration_check(c, 0.2, 1.0).estimate == 0.0);
}

TEST_CASE("trig baseline: first order has exactly two zeros") {
  const auto r = trig_baseline(1, 300, 4);
  CHECK(r.estimate == 2.0);
  CHECK(r.std_error == 0.0);
  const auto again = trig_baseline(5, 50, 4, 1);
  CHECK(same_bits(again.estimate, trig_baseline(5, 50, 4, 3).estimate));
  CHECK_THROWS_AS(trig_baseline(0, 10, 1), InvalidArgument);
}

TEST_CASE("nonconvergence budget") {
  auto c = small(40, 20);
  c.grid.max_points = 16;
  CHECK_THROWS_AS(run_global_count(c), ConvergenceError);
}

TEST_CASE("csv contract") {
  CHECK(csv_header() ==
        "experiment,weight,beta,gamma,dist,n,trials,interval_lo,interval_hi,estimate,stderr,seed,wall_ms,"
        "schema_version");
  ResultRecord r;
  r.experiment = "global";
  r.weight_kind = "jacobi";
  r.dist = "gaussian";
  r.n = 3;
  r.trials = 2;
  r.interval = {-1.5, 0.25};
  r.estimate = 1.5;
  r.std_error = 0.5;
  r.seed = 9;
  CHECK(csv_row(r) == "global,jacobi,0,0,gaussian,3,2,-1.5,0.25,1.5,0.5,9,0,1");
  r.beta = std::nan("");
  r.gamma = std::nan("");
  r.weight_kind = "custom";
  CHECK(csv_row(r) == "global,custom,,,gaussian,3,2,-1.5,0.25,1.5,0.5,9,0,1");

  const auto path = (std::filesystem::temp_directory_path() / "orthoroots_csv_test.csv").string();
  std::filesystem::remove(path);
  append_csv(path, {r});
  append_csv(path, {r});
  std::ifstream in(path);
  std::string line;
  int lines = 0, headers = 0;
  while (std::getline(in, line)) {
    ++lines;
    headers += line == csv_header() ? 1 : 0;
  }
  CHECK(lines == 3);
  CHECK(headers == 1);
  std::filesystem::remove(path);
}

TEST_CASE("invalid configs") {
  auto c = small();
  c.trials = 0;
  CHECK_THROWS_AS(run_global_count(c), InvalidArgument);
  c = small();
  c.intervals = {{-3.0, 0.0}};
  CHECK_THROWS_AS(run_interval_counts(c), InvalidArgument);
  c = small();
  c.damping = {1.0, 2.0};
  CHECK_THROWS_AS(run_global_count(c), InvalidArgument);
}
