#include "orthoroots/kacrice.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <sstream>

#include "orthoroots/measures.hpp"
#include "orthoroots/quadrature.hpp"

namespace orthoroots::kacrice {

namespace {
std::atomic<std::uint64_t> clamp_events{0};
}

double gaussian_intensity(const basis::RecurrenceTable& table, int n, double x) {
  const auto kv = basis::kernels(table, x, n);
  if (!(kv.A > 0.0)) {
    std::ostringstream msg;
    msg << "gaussian_intensity: K_n(x,x) = " << kv.A << " is not positive at x=" << x;
    throw InvalidArgument(msg.str());
  }
  // (AC - B^2) / A^2, which is C/A - (B/A)^2.
  double disc = (kv.A * kv.C - kv.B * kv.B) / (kv.A * kv.A);
  if (disc < 0.0) {
    clamp_events.fetch_add(1, std::memory_order_relaxed);
    disc = 0.0;
  }
  return std::sqrt(disc) / std::numbers::pi;
}

std::uint64_t discriminant_clamp_events() { return clamp_events.load(std::memory_order_relaxed); }

IntensityCurve intensity_curve(const basis::RecurrenceTable& table, int n, Interval interval,
                               std::size_t points) {
  if (points == 0) throw InvalidArgument("intensity_curve: need at least one point");
  if (!(interval.lo < interval.hi)) throw InvalidArgument("intensity_curve: empty interval");
  IntensityCurve c;
  c.n = n;
  c.xs.resize(points);
  c.rho.resize(points);
  const double step = interval.width() / static_cast<double>(points);
  for (std::size_t i = 0; i < points; ++i) {
    // Symmetric construction so that an interval symmetric about 0 gives
    // exactly mirrored abscissae.
    const double offset = (static_cast<double>(i) + 0.5) * step;
    const double back = (static_cast<double>(points - 1 - i) + 0.5) * step;
    c.xs[i] = 0.5 * ((interval.lo + offset) + (interval.hi - back));
    c.rho[i] = gaussian_intensity(table, n, c.xs[i]);
  }
  return c;
}

double expected_count(const basis::RecurrenceTable& table, int n, Interval interval, double tol) {
  if (interval.lo > interval.hi) throw InvalidArgument("expected_count: need lo <= hi");
  if (interval.degenerate()) return 0.0;
  const Interval support = table.support();
  if (!(interval.lo > support.lo && interval.hi < support.hi)) {
    std::ostringstream msg;
    msg << "expected_count: interval [" << interval.lo << ", " << interval.hi
        << "] must lie strictly inside the support [" << support.lo << ", " << support.hi << "]";
    throw InvalidArgument(msg.str());
  }
  if (!(tol > 0.0)) throw InvalidArgument("expected_count: tol must be positive");
  auto rho = [&](double x) { return gaussian_intensity(table, n, x); };
  // Scale the absolute target by the rough size of the answer: rho ~ n / (pi sqrt 3)
  // in the bulk. Panels ~ one per expected root keep oscillations resolved.
  const double scale = std::max(1.0, static_cast<double>(n)) * interval.width() * 0.2;
  const auto panels = static_cast<std::size_t>(std::ceil(std::max(1.0, 0.5 * n * interval.width())));
  return quadrature::adaptive_simpson(rho, interval.lo, interval.hi, tol * scale, 40, panels);
}

double qualls_exact(int n) {
  if (n < 1) throw InvalidArgument("qualls_exact: n must be >= 1");
  const double nd = n;
  return 2.0 * std::sqrt((2.0 * nd + 1.0) * (nd + 1.0) / 6.0);
}

double limit_density(double x) { return measures::equilibrium_density(x) / std::numbers::sqrt3; }

}  // namespace orthoroots::kacrice
