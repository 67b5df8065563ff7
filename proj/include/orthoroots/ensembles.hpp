#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace orthoroots::ensembles {

/// Identifies one trial's coefficient stream.
struct SeedPath {
  std::uint64_t master = 0;
  std::uint64_t trial = 0;

  friend bool operator==(const SeedPath&, const SeedPath&) = default;
};

/// Counter-based generator: draw i of the stream keyed by (master, trial)
/// is a fixed function of (master, trial, i). SplitMix64 output mixing over
/// a key derived by hashing the seed path.
class CounterStream {
 public:
  explicit CounterStream(SeedPath path);

  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double next_open01();
  double next_gaussian();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t mix64(std::uint64_t z);

enum class DistKind { Gaussian, Rademacher, UniformSym, ParetoSym };

/// A mean-zero, unit-variance coefficient law with a declared bound on
/// E|xi|^(2+eps).
class CoefficientDistribution {
 public:
  static CoefficientDistribution gaussian();
  static CoefficientDistribution rademacher();
  /// Uniform on [-sqrt 3, sqrt 3].
  static CoefficientDistribution uniform_sym();
  /// Symmetrized Pareto(alpha) tail with x_min = 1, scaled to unit variance.
  /// Requires 2 < alpha < 3; eps defaults to (alpha - 2) / 2.
  static CoefficientDistribution pareto_sym(double alpha, double eps = -1.0);
  /// "gaussian", "rademacher", "uniform", "pareto" (alpha given separately).
  static CoefficientDistribution from_name(const std::string& name, double alpha = 2.5);

  DistKind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  double declared_mean() const { return 0.0; }
  double declared_var() const { return 1.0; }
  double epsilon() const { return eps_; }
  /// Closed-form E|xi|^(2+eps).
  double moment_2pe() const { return moment_2pe_; }
  std::string name() const;

  double draw(CounterStream& stream) const;

 private:
  CoefficientDistribution(DistKind kind, double alpha, double eps);

  DistKind kind_;
  double alpha_;
  double eps_;
  double moment_2pe_;
  double pareto_scale_ = 1.0;
};

struct SampleVector {
  std::vector<double> coeffs;
  SeedPath seed_path;
};

/// n + 1 iid draws from the stream keyed by `path`.
SampleVector sample_coeffs(const CoefficientDistribution& dist, int n, SeedPath path);
/// Same, writing into a caller-owned buffer of length n + 1.
void sample_coeffs_into(const CoefficientDistribution& dist, SeedPath path, std::vector<double>& out);

struct MomentReport {
  std::size_t samples = 0;
  double mean = 0.0;
  double var = 0.0;
  double abs_moment_2pe = 0.0;  ///< empirical E|xi|^(2+eps)
  double skewness = 0.0;
  double skewness_stderr = 0.0;  ///< sqrt(6/m), the normal-theory value
};

struct MomentMatchRow {
  int order = 0;
  double first = 0.0;
  double second = 0.0;
  double difference = 0.0;
};

/// Empirical moments from m draws (m >= 10000) of `dist` seeded by `seed`.
MomentReport moment_report(const CoefficientDistribution& dist, std::size_t m,
                           std::uint64_t seed = 1);

/// First- and second-moment comparison between two laws.
std::vector<MomentMatchRow> match_table(const CoefficientDistribution& a,
                                        const CoefficientDistribution& b, std::size_t m,
                                        std::uint64_t seed = 1);

}  // namespace orthoroots::ensembles
