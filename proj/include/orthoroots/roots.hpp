#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "orthoroots/basis.hpp"
#include "orthoroots/common.hpp"

namespace orthoroots::roots {

using ScalarFunction = std::function<double(double)>;
/// Fills out[i] = f(xs[i]). Must be safe to call concurrently if the caller
/// counts from several threads.
using BatchFunction = std::function<void(std::span<const double> xs, std::span<double> out)>;

/// Sign-change grid refinement policy. The first grid on each piece has
/// max(min_points, points_per_degree * degree_hint) Chebyshev-spaced points;
/// each refinement doubles the number of gaps, reusing every old point.
struct GridPolicy {
  std::size_t min_points = 64;
  std::size_t points_per_degree = 8;
  std::size_t max_points = std::size_t{1} << 22;
  /// Extra piece boundaries; each piece gets its own Chebyshev grid, so the
  /// grid is densest next to every breakpoint.
  std::vector<double> breakpoints;
};

enum class Method { Grid, Comrade };

struct CountReport {
  Interval interval;
  std::size_t count = 0;
  std::vector<std::size_t> grid_sizes;  ///< distinct points at each refinement
  std::vector<std::size_t> counts;      ///< count at each refinement
  bool converged = false;
  /// Close root pairs found between samples of the final grid (each adds 2 to count).
  std::size_t hidden_pairs = 0;
  Method method = Method::Grid;
};

/// Sign-change bracket [lo, hi]; `exact` is set when a grid point hit zero.
struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
  bool exact = false;
  double zero = 0.0;
};

struct PiecewiseCount {
  std::vector<Interval> pieces;
  std::vector<std::size_t> piece_counts;  ///< at the final refinement
  std::vector<Bracket> brackets;          ///< only when requested
  CountReport total;
};

/// Counts sign changes on nested Chebyshev grids until two consecutive
/// refinements agree on every piece, or max_points is reached
/// (converged = false). Every local minimum of |f| between same-signed
/// samples of the final grid is then searched for a hidden pair of roots.
/// Roots of even multiplicity are invisible.
PiecewiseCount count_sign_changes(const BatchFunction& f, int degree_hint, Interval interval,
                                  const GridPolicy& policy = {}, bool want_brackets = false);

CountReport count_real_roots(const BatchFunction& f, int degree_hint, Interval interval,
                             const GridPolicy& policy = {});
CountReport count_real_roots(const ScalarFunction& f, int degree_hint, Interval interval,
                             const GridPolicy& policy = {});

/// Batch evaluator for sum_i coeffs[i] p_i. Holds references: table and
/// coeffs must outlive it.
BatchFunction combo_function(const basis::RecurrenceTable& table, std::span<const double> coeffs);

struct RootList {
  std::vector<double> roots;  ///< ascending
  double bracket_width = 0.0;  ///< widest final bisection bracket
};

/// Bisects every converged sign-change bracket down to `tol` (default
/// 1e-12 times the interval width). Throws ConvergenceError if the count
/// did not converge.
RootList locate_roots(const ScalarFunction& f, int degree_hint, Interval interval,
                      double tol = -1.0, const GridPolicy& policy = {});

/// Real eigenvalues of the comrade matrix of sum c_i p_i (degree <= 64):
/// the truncated Jacobi matrix with its last row corrected by the
/// coefficients. Throws InvalidArgument when |c_n| <= 1e-12 * ||c||; the
/// caller deflates.
RootList comrade_roots(std::span<const double> coeffs, const basis::RecurrenceTable& table);

/// Sum of G over all ordered k-tuples of roots, repeated indices included.
double linear_statistic(const RootList& roots,
                        const std::function<double(std::span<const double>)>& G, int k);

}  // namespace orthoroots::roots
