#pragma once

#include <cstdint>
#include <vector>

#include "orthoroots/basis.hpp"
#include "orthoroots/common.hpp"

namespace orthoroots::kacrice {

/// Expected number of real zeros per unit length of the Gaussian combination
/// sum xi_i p_i at x:
///
///   rho_n(x) = (1/pi) sqrt(C/A - (B/A)^2),
///
/// with A, B, C the Christoffel-Darboux sums. A weight factor w(x) multiplying
/// all three kernels cancels, so none is applied. Negative discriminants
/// (rounding only, by Cauchy-Schwarz) are clamped to zero and counted.
double gaussian_intensity(const basis::RecurrenceTable& table, int n, double x);

/// Number of discriminant clamps since process start.
std::uint64_t discriminant_clamp_events();

struct IntensityCurve {
  int n = 0;
  std::vector<double> xs;
  std::vector<double> rho;
};

/// rho_n on `points` equally spaced abscissae strictly inside `interval`
/// (cell midpoints, so the endpoints themselves are never sampled).
IntensityCurve intensity_curve(const basis::RecurrenceTable& table, int n, Interval interval,
                               std::size_t points);

/// int_interval rho_n(x) dx by adaptive Simpson to relative tolerance tol.
/// The interval must lie strictly inside the support of the table's weight.
double expected_count(const basis::RecurrenceTable& table, int n, Interval interval,
                      double tol = 1e-6);

/// Expected number of zeros in [-pi, pi] of sum_{k<=n} xi_{1k} cos kt + xi_{2k} sin kt
/// with iid standard Gaussians: 2 sqrt((2n+1)(n+1)/6).
double qualls_exact(int n);

/// Limit of rho_n(x)/n on (-1, 1): (1/sqrt 3) / (pi sqrt(1 - x^2)).
double limit_density(double x);

}  // namespace orthoroots::kacrice
