#include "orthoroots/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>

#include "orthoroots/basis.hpp"
#include "orthoroots/ensembles.hpp"
#include "orthoroots/experiments.hpp"
#include "orthoroots/measures.hpp"
#include "orthoroots/roots.hpp"

namespace orthoroots::selftest {

namespace {

Check make(std::string name, double value, double bound, bool upper) {
  Check c{std::move(name), value, bound, upper, false};
  c.pass = upper ? (value <= bound) : (value >= bound);
  return c;
}

struct Params {
  double beta, gamma;
};
constexpr Params kJacobiSets[] = {{0.0, 0.0}, {-0.5, -0.5}, {1.5, -0.25}};
// The kernel constants depend on the weight, so the fixed bounds are checked
// on weights bounded above by 2.3 on [-0.9, 0.9].
constexpr Params kKernelSets[] = {{0.0, 0.0}, {-0.5, -0.5}, {0.5, 0.5}};

}  // namespace

std::vector<Check> orthonormality_checks() {
  std::vector<Check> out;
  for (auto [beta, gamma] : kJacobiSets) {
    const auto table = basis::jacobi_recurrence(beta, gamma, 64);
    // A rule two levels finer than the one used to build the table.
    const auto rule = measures::discretize(measures::WeightSpec::jacobi(beta, gamma), 3, 160);
    const double defect = basis::orthonormality_defect(table, rule, 64);
    out.push_back(make("orthonormality defect " + table.weight_id() + " N=64", defect, 1e-8, true));
  }
  return out;
}

Check chebyshev_closed_form() {
  const auto table = basis::jacobi_recurrence(-0.5, -0.5, 64);
  double worst = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double theta = std::numbers::pi * (i + 0.5) / 201.0;
    const auto ev = basis::eval_basis(table, std::cos(theta), 64);
    for (int k = 0; k <= 64; ++k) {
      const double expect =
          k == 0 ? 1.0 / std::sqrt(std::numbers::pi) : std::sqrt(2.0 / std::numbers::pi) * std::cos(k * theta);
      worst = std::max(worst, std::abs(ev.values[static_cast<std::size_t>(k)] - expect));
    }
  }
  return make("chebyshev closed form max error", worst, 1e-10, true);
}

Check frostman_constancy() {
  double worst = 0.0;
  for (int i = 0; i <= 40; ++i) {
    const double x = -1.0 + 2.0 * i / 40.0;
    worst = std::max(worst, std::abs(measures::log_potential(x) - std::numbers::ln2));
  }
  return make("log potential minus log 2 on [-1,1]", worst, 1e-6, true);
}

std::vector<Check> kernel_checks() {
  double min_k = std::numeric_limits<double>::infinity();
  double max_growth = 0.0;
  double max_deloc = 0.0;
  for (auto [beta, gamma] : kKernelSets) {
    const auto table = basis::jacobi_recurrence(beta, gamma, 400);
    for (int n : {10, 50, 100, 200, 400}) {
      for (int i = 0; i <= 180; ++i) {
        const double x = -0.9 + 1.8 * i / 180.0;
        const auto ev = basis::eval_basis(table, x, n, 1);
        double A = 0.0, C = 0.0, top = 0.0;
        for (int k = 0; k <= n; ++k) {
          const double p = ev.values[static_cast<std::size_t>(k)];
          const double d = ev.d1[static_cast<std::size_t>(k)];
          A += p * p;
          C += d * d;
          top = std::max(top, p * p);
        }
        min_k = std::min(min_k, A / n);
        max_growth = std::max(max_growth, C / (static_cast<double>(n) * n * A));
        max_deloc = std::max(max_deloc, top / A * n);
      }
    }
  }
  return {make("min K_n(x,x)/n on [-0.9,0.9]", min_k, 0.2, false),
          make("max C/(n^2 A) on [-0.9,0.9]", max_growth, 50.0, true),
          make("max n * max_i p_i^2 / K_n on [-0.9,0.9]", max_deloc, 20.0, true)};
}

Check grid_vs_comrade(std::size_t trials) {
  const auto table = basis::jacobi_recurrence(0.0, 0.0, 32);
  const auto dist = ensembles::CoefficientDistribution::gaussian();
  const Interval window{-1.5, 1.5};
  std::size_t agree = 0, total = 0;
  for (int n : {4, 8, 16, 32}) {
    for (std::size_t t = 0; t < trials; ++t) {
      const auto s = ensembles::sample_coeffs(dist, n, {0x5eed0000u + static_cast<std::uint64_t>(n), t});
      const auto eig = roots::comrade_roots(s.coeffs, table);
      std::vector<double> inside;
      for (double r : eig.roots) {
        if (r > window.lo && r < window.hi) inside.push_back(r);
      }
      const auto coeffs = s.coeffs;
      auto f = [&](double x) { return basis::eval_combo(table, coeffs, x); };
      ++total;
      try {
        const auto grid = roots::locate_roots(f, n, window);
        if (grid.roots.size() != inside.size()) continue;
        bool same = true;
        for (std::size_t i = 0; i < inside.size(); ++i) same = same && std::abs(grid.roots[i] - inside[i]) <= 1e-6;
        agree += same ? 1 : 0;
      } catch (const ConvergenceError&) {
      }
    }
  }
  return make("grid vs comrade root agreement n<=32", static_cast<double>(agree) / static_cast<double>(total), 0.99,
              false);
}

Check anticoncentration(std::size_t trials) {
  experiments::ExperimentConfig c;
  c.n = 200;
  c.trials = trials;
  c.seed = 7;
  const auto r = experiments::anticoncentration_check(c, 0.3, 1.0, 1e-9);
  return make("anti-concentration frequency n=200", r.estimate, 0.999, false);
}

Check worker_reproducibility() {
  experiments::ExperimentConfig c;
  c.n = 60;
  c.trials = 96;
  c.seed = 11;
  c.intervals = {{-0.5, 0.25}};
  c.workers = 1;
  const auto one = experiments::run_interval_counts(c);
  c.workers = 4;
  const auto four = experiments::run_interval_counts(c);
  bool same = one.size() == four.size();
  for (std::size_t i = 0; same && i < one.size(); ++i) {
    same = std::memcmp(&one[i].estimate, &four[i].estimate, sizeof(double)) == 0 &&
           std::memcmp(&one[i].std_error, &four[i].std_error, sizeof(double)) == 0 &&
           one[i].per_trial == four[i].per_trial && one[i].fingerprint == four[i].fingerprint;
  }
  return make("bit-identical records for 1 and 4 workers", same ? 1.0 : 0.0, 1.0, false);
}

std::vector<Check> run_all() {
  std::vector<Check> out = orthonormality_checks();
  out.push_back(chebyshev_closed_form());
  out.push_back(frostman_constancy());
  for (auto& c : kernel_checks()) out.push_back(std::move(c));
  out.push_back(grid_vs_comrade());
  out.push_back(anticoncentration());
  out.push_back(worker_reproducibility());
  return out;
}

}  // namespace orthoroots::selftest
