#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace orthoroots::quadrature {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// q-point Gauss-Legendre rule on [lo, hi] (Newton on the three-term
/// recurrence, nodes returned ascending).
Rule gauss_legendre(std::size_t q, double lo = -1.0, double hi = 1.0);

/// Composite Gauss-Legendre on [lo, hi] with panels graded geometrically
/// (ratio `sigma`, `levels` panels) toward whichever ends are flagged. The
/// interior is cut into panels no wider than `max_panel`.
Rule graded_gauss_legendre(double lo, double hi, bool grade_lo, bool grade_hi,
                           std::size_t q, int levels, double sigma = 0.15,
                           double max_panel = 0.25);

/// Adaptive Simpson with interval bisection. The integration range is first
/// cut into `initial_panels` equal pieces so narrow features are not skipped.
/// Panels that reach `max_depth` are accepted as they stand, which keeps
/// jump discontinuities from recursing forever.
double adaptive_simpson(const std::function<double(double)>& f, double lo,
                        double hi, double tol, int max_depth = 40,
                        std::size_t initial_panels = 1);

}  // namespace orthoroots::quadrature
