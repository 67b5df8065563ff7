#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "orthoroots/common.hpp"
#include "orthoroots/quadrature.hpp"

namespace orthoroots::measures {

/// Density (1-x)^beta (1+x)^gamma on (-1, 1).
struct JacobiWeight {
  double beta = 0.0;
  double gamma = 0.0;
};

/// Density evaluator that also receives the distances to the ends of the
/// support piece containing x, so singular factors like (1-x)^beta can be
/// formed without cancellation.
using EndpointDensity = std::function<double(double x, double from_lo, double from_hi)>;

/// A measure d mu = w(x) dx, either Jacobi or user supplied. Custom weights
/// may live on several disjoint intervals.
class WeightSpec {
 public:
  static WeightSpec jacobi(double beta, double gamma);
  static WeightSpec custom(EndpointDensity density, std::vector<Interval> support = {{-1.0, 1.0}},
                           bool singular_ends = true, std::string label = "custom");
  static WeightSpec custom(std::function<double(double)> density,
                           std::vector<Interval> support = {{-1.0, 1.0}},
                           bool singular_ends = true, std::string label = "custom");
  /// Piecewise-linear interpolant of (x, w) samples; support is [x_first, x_last].
  static WeightSpec piecewise_linear(std::vector<std::pair<double, double>> samples);

  double density(double x) const;
  double density(double x, double from_lo, double from_hi) const;

  const std::vector<Interval>& support() const { return support_; }
  Interval hull() const { return {support_.front().lo, support_.back().hi}; }
  bool single_interval() const { return support_.size() == 1; }

  const std::optional<JacobiWeight>& jacobi_params() const { return jacobi_; }
  const std::vector<std::pair<double, double>>& samples() const { return samples_; }
  /// True when plain Gauss-Legendre converges fast (no endpoint singularity).
  bool smooth() const { return !singular_ends_; }
  const std::string& label() const { return label_; }

 private:
  WeightSpec() = default;

  EndpointDensity density_;
  std::vector<Interval> support_;
  std::optional<JacobiWeight> jacobi_;
  std::vector<std::pair<double, double>> samples_;
  bool singular_ends_ = true;
  std::string label_;
};

/// A quadrature rule for d mu: weights already include w(x).
struct MeasureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Discretize mu at refinement `level` (0, 1, 2, ...; each level roughly
/// doubles the node count). Smooth pieces use Gauss-Legendre with
/// `min_nodes << level` nodes; singular pieces use x = cos(theta) with a
/// composite rule graded toward both ends in theta. Throws InvalidArgument
/// if the density is negative or non-finite at any node.
MeasureRule discretize(const WeightSpec& weight, int level, std::size_t min_nodes = 32);

/// Integral of f against mu, doubling the rule until two successive values
/// differ by less than tol * max(1, |value|).
double integrate_wrt_mu(const std::function<double(double)>& f, const WeightSpec& weight,
                        double tol = 1e-12);

// -- equilibrium measure of [-1, 1] ----------------------------------------

/// Arcsine density 1 / (pi sqrt(1 - x^2)); zero outside (-1, 1).
double equilibrium_density(double x);
/// nu([-1, x]).
double equilibrium_cdf(double x);

struct MassResult {
  double value = 0.0;
  bool clamped = false;  ///< an endpoint was outside [-1, 1] and got clamped
};

/// nu([a, b]) = (asin b - asin a) / pi.
MassResult equilibrium_mass(double a, double b);

/// U(x) = -int log|x - t| d nu(t), computed by quadrature with the log
/// singularity isolated. Constant log 2 on [-1, 1].
double log_potential(double x);

// -- regularity checks for a weight on [-1, 1] -----------------------------

struct WeightConditionReport {
  double circle_integral = 0.0;  ///< int dx / (w sqrt(1-x^2)) at the last refinement
  std::vector<double> circle_estimates;
  bool circle_finite = false;

  Interval theta_window;
  std::vector<double> h_values;
  std::vector<double> lipschitz_ratios;  ///< L(h) for each h
  bool lipschitz_bounded = false;
};

/// Numerical evidence for the two regularity conditions on w: finiteness of
/// int dx/(w(x) sqrt(1-x^2)), and boundedness of
/// L(h) = int_J |w(cos(theta+h)) - w(cos theta)|^2 d theta / h as h shrinks.
/// Multi-interval weights and supports other than [-1, 1] are rejected.
WeightConditionReport check_weight_conditions(const WeightSpec& weight, Interval theta_window,
                                              std::vector<double> h_values);

}  // namespace orthoroots::measures
