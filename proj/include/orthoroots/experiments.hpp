#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "orthoroots/common.hpp"
#include "orthoroots/ensembles.hpp"
#include "orthoroots/measures.hpp"
#include "orthoroots/roots.hpp"

namespace orthoroots::experiments {

inline constexpr int kSchemaVersion = 1;

struct ExperimentConfig {
  measures::WeightSpec weight = measures::WeightSpec::jacobi(0.0, 0.0);
  ensembles::CoefficientDistribution dist = ensembles::CoefficientDistribution::gaussian();
  int n = 0;
  std::size_t trials = 1;
  std::vector<Interval> intervals;
  std::uint64_t seed = 0;
  unsigned workers = 0;  ///< 0 = hardware concurrency
  roots::GridPolicy grid;
  /// Optional deterministic multipliers b_j applied to xi_j (length n + 1).
  std::vector<double> damping;
};

/// One Monte Carlo estimate plus what is needed to reproduce and tabulate it.
struct ResultRecord {
  std::string experiment;
  Interval interval;
  double estimate = 0.0;
  double std_error = 0.0;  ///< sample std / sqrt(trials)
  std::size_t trials = 0;  ///< trials that entered the estimate
  std::size_t nonconverged = 0;
  std::string fingerprint;  ///< hash of the resolved configuration
  double wall_ms = 0.0;

  std::string weight_kind;  ///< "jacobi" or "custom"
  double beta = 0.0;
  double gamma = 0.0;
  std::string dist;
  int n = 0;
  std::uint64_t seed = 0;

  std::vector<double> per_trial;  ///< per-trial statistic in trial order
};

struct UniversalityReport {
  ResultRecord record_a;
  ResultRecord record_b;
  double gap = 0.0;
  double pooled_stderr = 0.0;
  double z = 3.0;
  bool pass = false;
};

enum class CountScope { Global, Local };

/// Mean number of real roots on the support inflated by 0.1 on each side.
/// Non-converged trials are excluded and reported; more than 0.1% of them
/// throws ConvergenceError.
ResultRecord run_global_count(const ExperimentConfig& config);

/// The global record followed by one record per configured interval, all
/// taken from the same trials. Interval endpoints are grid breakpoints, so
/// counts are additive trial by trial.
std::vector<ResultRecord> run_interval_counts(const ExperimentConfig& config);

/// Per-trial counts on one (typically O(1/n)) interval.
ResultRecord run_local_count(const ExperimentConfig& config, Interval interval);

/// Difference of the two estimates against z pooled standard errors. The
/// configs may differ only in the distribution and the seed. Local scope
/// uses the first configured interval.
UniversalityReport universality_gap(const ExperimentConfig& a, const ExperimentConfig& b,
                                    CountScope scope, double z = 3.0);

/// Same verdict for two records computed elsewhere.
UniversalityReport compare_records(ResultRecord a, ResultRecord b, double z = 3.0);

struct EdgeReport {
  std::vector<double> eps;
  std::vector<ResultRecord> band;  ///< fraction of real roots outside [lo+eps, hi-eps]
  ResultRecord outside;            ///< fraction outside [lo-margin, hi+margin]
  ResultRecord total;              ///< mean count on the search window
};

/// Root counts on [lo - 0.5, hi + 0.5] (treated as all real roots), split at
/// every edge. Fractions are ratios of pooled counts.
EdgeReport edge_profile(const ExperimentConfig& config, std::vector<double> eps, double margin = 0.05);
ResultRecord edge_mass(const ExperimentConfig& config, double eps);

struct PairCorrelationReport {
  ResultRecord factorial_moment;  ///< E[N(N-1)]
  ResultRecord at_least_two;      ///< P(N >= 2)
  ResultRecord at_least_one;      ///< P(N >= 1)
};

/// Window [x0 - c/n, x0 + c/n].
PairCorrelationReport pair_correlation(const ExperimentConfig& config, double x0, double c);

/// Frequency of max |F| > threshold over 64 equally spaced points of
/// [x0 - c/n, x0 + c/n]; config.damping, when set, multiplies each xi_j.
ResultRecord anticoncentration_check(const ExperimentConfig& config, double x0, double c,
                                     double threshold = 1e-9);

/// Mean number of zeros in [-pi, pi] of a Gaussian trigonometric polynomial
/// of order n.
ResultRecord trig_baseline(int n, std::size_t trials, std::uint64_t seed, unsigned workers = 0,
                           const roots::GridPolicy& grid = {});

// -- CSV contract ------------------------------------------------------------

std::string csv_header();
std::string csv_row(const ResultRecord& r);
/// Appends rows; writes the header first if the file is new or empty.
void append_csv(const std::string& path, const std::vector<ResultRecord>& records);

unsigned resolve_workers(unsigned requested);

}  // namespace orthoroots::experiments
