#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>

namespace orthoroots {

/// Closed interval [lo, hi] on the real line.
struct Interval {
  double lo = -1.0;
  double hi = 1.0;

  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  bool contains(double x) const { return x >= lo && x <= hi; }
  bool degenerate() const { return !(hi > lo); }

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Base for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad parameter, bad config, precondition violation.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure hit its refinement cap without settling. Carries
/// the last two estimates so callers can judge how far off it was.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double previous, double last)
      : Error(what), previous_(previous), last_(last) {}

  double previous() const { return previous_; }
  double last() const { return last_; }

 private:
  double previous_;
  double last_;
};

/// Pairwise (cascade) summation; result depends only on the input order.
double pairwise_sum(std::span<const double> values);

std::string format_double(double v);

}  // namespace orthoroots
