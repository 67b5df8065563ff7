// Acceptance run: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "orthoroots/basis.hpp"
#include "orthoroots/experiments.hpp"
#include "orthoroots/kacrice.hpp"
#include "orthoroots/measures.hpp"
#include "orthoroots/selftest.hpp"

using namespace orthoroots;
using namespace orthoroots::experiments;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

void report(const char* id, bool pass, const std::string& detail, double secs, double budget) {
  const bool in_time = secs <= budget;
  if (!(pass && in_time)) ++failures;
  std::printf("%s %s %s (%.1f s, budget %.0f s)\n", pass && in_time ? "PASS" : "FAIL", id, detail.c_str(), secs,
              budget);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

ExperimentConfig legendre(int n, std::size_t trials, std::uint64_t seed) {
  ExperimentConfig c;
  c.n = n;
  c.trials = trials;
  c.seed = seed;
  return c;
}

const double kInvSqrt3 = 1.0 / std::numbers::sqrt3;

}  // namespace

int main() {
  const auto start_all = Clock::now();

  // A1, A2 and A4 share the Legendre/Gaussian runs; interval endpoints are
  // grid breakpoints, so the global count is taken from the same trials.
  const Interval bulk_half{0.0, 0.5};
  const Interval bulk{-0.9, 0.9};
  std::vector<std::vector<ResultRecord>> runs;
  std::vector<double> run_secs;
  for (int n : {50, 100, 200, 400}) {
    auto c = legendre(n, 2000, 1000 + static_cast<std::uint64_t>(n));
    c.intervals = {bulk_half, bulk};
    const auto t = Clock::now();
    runs.push_back(run_interval_counts(c));
    run_secs.push_back(seconds_since(t));
  }

  {
    std::vector<double> err;
    std::string list;
    for (std::size_t i = 0; i < runs.size(); ++i) {
      err.push_back(std::abs(runs[i][0].estimate / runs[i][0].n - kInvSqrt3));
      list += (i ? "," : "") + fmt("%.4f", err.back());
    }
    bool monotone = true;
    for (std::size_t i = 1; i < err.size(); ++i) monotone = monotone && err[i] <= err[i - 1];
    const double at400 = runs[3][0].estimate / 400.0;
    report("A1", std::abs(at400 - kInvSqrt3) <= 0.02 && monotone,
           "global law: estimate/n at n=400 = " + fmt("%.5f", at400) + " vs 1/sqrt3 = 0.57735 (tol 0.02); |error| for n=50,100,200,400 = " +
               list + (monotone ? " non-increasing" : " NOT non-increasing"),
           run_secs[0] + run_secs[1] + run_secs[2] + run_secs[3], 300.0);
  }
  {
    const auto& r = runs[3][1];
    const double target = kInvSqrt3 * measures::equilibrium_mass(0.0, 0.5).value;
    const double v = r.estimate / 400.0;
    report("A2", std::abs(v - target) <= 0.01,
           "local law on [0,0.5], n=400: estimate/n = " + fmt("%.5f", v) + fmt(" vs %.5f (tol 0.01)", target),
           run_secs[3], 300.0);
  }

  {
    const auto t = Clock::now();
    const Interval window{-1.0 / 200.0, 1.0 / 200.0};
    auto base = legendre(200, 2000, 31);
    const auto g_global = run_global_count(base);
    auto base_local = legendre(200, 20000, 32);
    const auto g_local = run_local_count(base_local, window);
    const std::vector<ensembles::CoefficientDistribution> others = {
        ensembles::CoefficientDistribution::rademacher(), ensembles::CoefficientDistribution::uniform_sym(),
        ensembles::CoefficientDistribution::pareto_sym(2.5)};
    bool all = true;
    std::string detail = "universality at n=200:";
    std::uint64_t seed = 40;
    for (const auto& d : others) {
      auto c = legendre(200, 2000, seed++);
      c.dist = d;
      const auto gl = compare_records(run_global_count(c), g_global);
      auto cl = legendre(200, 20000, seed++);
      cl.dist = d;
      const auto lo = compare_records(run_local_count(cl, window), g_local);
      all = all && gl.pass && lo.pass;
      detail += " " + d.name() + fmt(" global |gap|/se=%.2f local |gap|/se=%.2f;", std::abs(gl.gap) / gl.pooled_stderr,
                                     std::abs(lo.gap) / lo.pooled_stderr);
    }
    report("A3", all, detail + " (each must be <= 3)", seconds_since(t), 300.0);
  }

  {
    const auto t = Clock::now();
    const auto table = basis::jacobi_recurrence(0.0, 0.0, 200);
    const double ec = kacrice::expected_count(table, 200, bulk);
    const auto& r = runs[2][2];
    const double z = std::abs(r.estimate - ec) / r.std_error;
    report("A4", z <= 3.0,
           fmt("Kac-Rice on [-0.9,0.9], n=200: expected_count = %.4f, Monte Carlo = %.4f +- %.4f, |z| = %.2f (tol 3)",
               ec, r.estimate, r.std_error, z),
           seconds_since(t) + run_secs[2], 300.0);
  }

  {
    const auto t = Clock::now();
    const auto r20 = trig_baseline(20, 2000, 51);
    const double exact = kacrice::qualls_exact(20);
    const double z = std::abs(r20.estimate - exact) / r20.std_error;
    const auto r1 = trig_baseline(1, 2000, 52);
    bool all_two = r1.per_trial.size() == 2000;
    for (double v : r1.per_trial) all_two = all_two && v == 2.0;
    report("A5", z <= 3.0 && all_two,
           fmt("trig n=20: %.4f +- %.4f vs %.4f, |z| = %.2f (tol 3);", r20.estimate, r20.std_error, exact, z) +
               (all_two ? " n=1: 2 zeros in every trial" : " n=1: NOT 2 zeros in every trial"),
           seconds_since(t), 300.0);
  }

  {
    const auto t = Clock::now();
    const auto rep = edge_profile(legendre(200, 2000, 61), {0.2, 0.1, 0.05}, 0.05);
    const double target = 1.0 - measures::equilibrium_mass(-0.9, 0.9).value;
    const double band = rep.band[1].estimate;
    const bool decreasing = rep.band[0].estimate > rep.band[1].estimate && rep.band[1].estimate > rep.band[2].estimate;
    const bool pass = rep.outside.estimate <= 0.01 && std::abs(band - target) <= 0.03 && decreasing;
    report("A6", pass,
           fmt("edge, n=200: outside [-1.05,1.05] = %.5f (<= 0.01); band eps=0.1 = %.4f vs %.4f (tol 0.03); ",
               rep.outside.estimate, band, target) +
               fmt("bands eps=0.2,0.1,0.05 = %.4f,%.4f,%.4f", rep.band[0].estimate, rep.band[1].estimate,
                   rep.band[2].estimate) +
               (decreasing ? " decreasing" : " NOT decreasing"),
           seconds_since(t), 300.0);
  }

  {
    const auto t = Clock::now();
    std::string failed;
    std::size_t count = 0;
    for (const auto& c : selftest::run_all()) {
      ++count;
      if (!c.pass) failed += " [" + c.name + fmt(": %.4g vs %.4g]", c.value, c.bound);
    }
    report("A7", failed.empty(),
           std::to_string(count) + " invariant checks" + (failed.empty() ? " all passed" : "; failed:" + failed),
           seconds_since(t), 600.0);
  }

  std::printf("total %.1f s, %d failed\n", seconds_since(start_all), failures);
  return failures;
}
