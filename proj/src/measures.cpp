#include "orthoroots/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace orthoroots::measures {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_nonnegative_integer(double v) { return v >= 0.0 && v == std::floor(v); }

void validate_support(const std::vector<Interval>& support) {
  if (support.empty()) throw InvalidArgument("weight support must not be empty");
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (!(support[i].lo < support[i].hi)) {
      throw InvalidArgument("weight support interval must satisfy lo < hi");
    }
    if (i > 0 && !(support[i - 1].hi <= support[i].lo)) {
      throw InvalidArgument("weight support intervals must be sorted and disjoint");
    }
  }
}

double checked_density(const WeightSpec& w, double x, double from_lo, double from_hi) {
  const double v = w.density(x, from_lo, from_hi);
  if (!std::isfinite(v)) {
    std::ostringstream msg;
    msg << "weight '" << w.label() << "' is not integrable: density is non-finite at x=" << x;
    throw InvalidArgument(msg.str());
  }
  if (v < 0.0) {
    std::ostringstream msg;
    msg << "weight '" << w.label() << "' is negative at x=" << x;
    throw InvalidArgument(msg.str());
  }
  return v;
}

// Half of a theta rule on [0, pi/2], graded toward theta = 0. Each node t is
// mirrored to both ends of the piece.
quadrature::Rule half_theta_rule(std::size_t q, int level) {
  return quadrature::graded_gauss_legendre(0.0, 0.5 * kPi, true, false, q, 8 * (level + 2));
}

// Visit every (x, from_lo, from_hi, dx-weight) of the cos-substituted rule on
// [lo, hi].
template <class Visit>
void for_each_theta_node(Interval piece, const quadrature::Rule& half, Visit&& visit) {
  const double half_width = 0.5 * piece.width();
  for (std::size_t j = 0; j < half.size(); ++j) {
    const double t = half.nodes[j];
    const double s = std::sin(0.5 * t);
    const double c = std::cos(0.5 * t);
    const double near = 2.0 * half_width * s * s;
    const double far = 2.0 * half_width * c * c;
    const double dx = half.weights[j] * half_width * std::sin(t);
    visit(piece.lo + near, near, far, dx);  // near lo
    visit(piece.hi - near, far, near, dx);  // near hi
  }
}

}  // namespace

WeightSpec WeightSpec::jacobi(double beta, double gamma) {
  if (!(beta > -1.0) || !(gamma > -1.0)) {
    std::ostringstream msg;
    msg << "Jacobi exponents must exceed -1 (got beta=" << beta << ", gamma=" << gamma << ")";
    throw InvalidArgument(msg.str());
  }
  WeightSpec w;
  w.jacobi_ = JacobiWeight{beta, gamma};
  w.support_ = {{-1.0, 1.0}};
  w.singular_ends_ = !(is_nonnegative_integer(beta) && is_nonnegative_integer(gamma));
  w.density_ = [beta, gamma](double, double from_lo, double from_hi) {
    const double left = gamma == 0.0 ? 1.0 : std::pow(from_lo, gamma);
    const double right = beta == 0.0 ? 1.0 : std::pow(from_hi, beta);
    return left * right;
  };
  std::ostringstream label;
  label << "jacobi(" << beta << "," << gamma << ")";
  w.label_ = label.str();
  return w;
}

WeightSpec WeightSpec::custom(EndpointDensity density, std::vector<Interval> support,
                              bool singular_ends, std::string label) {
  if (!density) throw InvalidArgument("custom weight needs a density evaluator");
  validate_support(support);
  WeightSpec w;
  w.density_ = std::move(density);
  w.support_ = std::move(support);
  w.singular_ends_ = singular_ends;
  w.label_ = std::move(label);
  return w;
}

WeightSpec WeightSpec::custom(std::function<double(double)> density, std::vector<Interval> support,
                              bool singular_ends, std::string label) {
  if (!density) throw InvalidArgument("custom weight needs a density evaluator");
  return custom(EndpointDensity([f = std::move(density)](double x, double, double) { return f(x); }),
                std::move(support), singular_ends, std::move(label));
}

WeightSpec WeightSpec::piecewise_linear(std::vector<std::pair<double, double>> samples) {
  if (samples.size() < 2) throw InvalidArgument("piecewise-linear weight needs at least two samples");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!std::isfinite(samples[i].first) || !std::isfinite(samples[i].second)) {
      throw InvalidArgument("piecewise-linear weight samples must be finite");
    }
    if (samples[i].second < 0.0) {
      std::ostringstream msg;
      msg << "piecewise-linear weight is negative at x=" << samples[i].first;
      throw InvalidArgument(msg.str());
    }
    if (i > 0 && !(samples[i].first > samples[i - 1].first)) {
      throw InvalidArgument("piecewise-linear weight abscissae must be strictly increasing");
    }
  }
  auto table = samples;
  auto eval = [table](double x) {
    if (x <= table.front().first) return table.front().second;
    if (x >= table.back().first) return table.back().second;
    auto it = std::upper_bound(table.begin(), table.end(), x,
                               [](double v, const auto& s) { return v < s.first; });
    const auto& right = *it;
    const auto& left = *(it - 1);
    const double t = (x - left.first) / (right.first - left.first);
    return left.second + t * (right.second - left.second);
  };
  WeightSpec w = custom(std::function<double(double)>(eval),
                        {{samples.front().first, samples.back().first}}, false, "custom");
  w.samples_ = std::move(samples);
  return w;
}

double WeightSpec::density(double x) const {
  for (const auto& piece : support_) {
    if (piece.contains(x)) return density_(x, x - piece.lo, piece.hi - x);
  }
  return 0.0;
}

double WeightSpec::density(double x, double from_lo, double from_hi) const {
  return density_(x, from_lo, from_hi);
}

MeasureRule discretize(const WeightSpec& weight, int level, std::size_t min_nodes) {
  MeasureRule rule;
  for (const auto& piece : weight.support()) {
    if (weight.smooth()) {
      // Cut at piecewise-linear knots so each panel integrates a polynomial.
      std::vector<double> cuts{piece.lo};
      for (const auto& s : weight.samples()) {
        if (s.first > piece.lo && s.first < piece.hi) cuts.push_back(s.first);
      }
      cuts.push_back(piece.hi);
      const std::size_t panels = cuts.size() - 1;
      const std::size_t total = min_nodes << level;
      const std::size_t q = std::max<std::size_t>(8, (total + panels - 1) / panels);
      for (std::size_t p = 0; p < panels; ++p) {
        const auto gl = quadrature::gauss_legendre(q, cuts[p], cuts[p + 1]);
        for (std::size_t j = 0; j < q; ++j) {
          const double x = gl.nodes[j];
          const double d = checked_density(weight, x, x - piece.lo, piece.hi - x);
          rule.nodes.push_back(x);
          rule.weights.push_back(gl.weights[j] * d);
        }
      }
    } else {
      const std::size_t q = std::max<std::size_t>(16, min_nodes / 8) << level;
      const auto half = half_theta_rule(q, level);
      for_each_theta_node(piece, half, [&](double x, double from_lo, double from_hi, double dx) {
        const double d = checked_density(weight, x, from_lo, from_hi);
        rule.nodes.push_back(x);
        rule.weights.push_back(dx * d);
      });
    }
  }
  return rule;
}

double integrate_wrt_mu(const std::function<double(double)>& f, const WeightSpec& weight,
                        double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("integrate_wrt_mu: tol must be positive");
  constexpr int kMaxLevel = 6;
  double previous = 0.0;
  for (int level = 0; level <= kMaxLevel; ++level) {
    const auto rule = discretize(weight, level);
    std::vector<double> terms(rule.nodes.size());
    for (std::size_t j = 0; j < terms.size(); ++j) terms[j] = rule.weights[j] * f(rule.nodes[j]);
    const double value = pairwise_sum(terms);
    if (!std::isfinite(value)) {
      throw InvalidArgument("integrate_wrt_mu: integrand is not finite on the support");
    }
    if (level > 0 && std::abs(value - previous) <= tol * std::max(1.0, std::abs(value))) {
      return value;
    }
    previous = value;
    if (level == kMaxLevel) {
      const auto coarse = discretize(weight, level - 1);
      std::vector<double> t2(coarse.nodes.size());
      for (std::size_t j = 0; j < t2.size(); ++j) t2[j] = coarse.weights[j] * f(coarse.nodes[j]);
      throw ConvergenceError("integrate_wrt_mu: quadrature did not converge under doubling",
                             pairwise_sum(t2), value);
    }
  }
  return previous;
}

double equilibrium_density(double x) {
  if (!(x > -1.0 && x < 1.0)) return 0.0;
  return 1.0 / (kPi * std::sqrt((1.0 - x) * (1.0 + x)));
}

double equilibrium_cdf(double x) {
  if (x <= -1.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return 0.5 + std::asin(x) / kPi;
}

MassResult equilibrium_mass(double a, double b) {
  if (std::isnan(a) || std::isnan(b)) throw InvalidArgument("equilibrium_mass: NaN endpoint");
  if (a > b) throw InvalidArgument("equilibrium_mass: need a <= b");
  MassResult r;
  if (a < -1.0 || a > 1.0 || b < -1.0 || b > 1.0) {
    r.clamped = true;
    a = std::clamp(a, -1.0, 1.0);
    b = std::clamp(b, -1.0, 1.0);
  }
  r.value = (std::asin(b) - std::asin(a)) / kPi;
  return r;
}

double log_potential(double x) {
  if (std::isnan(x)) throw InvalidArgument("log_potential: NaN argument");
  constexpr std::size_t kNodes = 24;
  constexpr int kLevels = 40;
  // U(x) = -(1/pi) int_0^pi log|x - cos phi| d phi.
  if (std::abs(x) < 1.0) {
    // Parametrize by distance u from the singular angle phi0 = acos x and use
    // x - cos phi = 2 sin((phi + phi0)/2) sin((phi - phi0)/2).
    const double phi0 = std::acos(x);
    double total = 0.0;
    for (int side = 0; side < 2; ++side) {
      const double span = side == 0 ? phi0 : kPi - phi0;
      if (!(span > 0.0)) continue;
      const auto rule = quadrature::graded_gauss_legendre(0.0, span, true, false, kNodes, kLevels);
      std::vector<double> terms(rule.size());
      for (std::size_t j = 0; j < rule.size(); ++j) {
        const double u = rule.nodes[j];
        const double phi = side == 0 ? phi0 - u : phi0 + u;
        const double prod = 2.0 * std::abs(std::sin(0.5 * (phi + phi0)) * std::sin(0.5 * u));
        terms[j] = rule.weights[j] * std::log(prod);
      }
      total += pairwise_sum(terms);
    }
    return -total / kPi;
  }
  // |x| >= 1: x - cos phi = (x - 1) + 2 sin^2(phi/2) for x >= 1, mirrored for
  // x <= -1. Grade toward the near end, where the integrand is most curved.
  const double ax = std::abs(x);
  const auto rule = quadrature::graded_gauss_legendre(0.0, kPi, true, false, kNodes, kLevels);
  std::vector<double> terms(rule.size());
  for (std::size_t j = 0; j < rule.size(); ++j) {
    const double s = std::sin(0.5 * rule.nodes[j]);
    terms[j] = rule.weights[j] * std::log((ax - 1.0) + 2.0 * s * s);
  }
  return -pairwise_sum(terms) / kPi;
}

WeightConditionReport check_weight_conditions(const WeightSpec& weight, Interval theta_window,
                                              std::vector<double> h_values) {
  if (!weight.single_interval() || weight.hull() != Interval{-1.0, 1.0}) {
    throw InvalidArgument("check_weight_conditions: weight must be supported on the single interval [-1,1]");
  }
  if (!(theta_window.lo > 0.0 && theta_window.hi < kPi && theta_window.lo < theta_window.hi)) {
    throw InvalidArgument("check_weight_conditions: theta window must be a compact subinterval of (0, pi)");
  }
  for (std::size_t i = 0; i < h_values.size(); ++i) {
    if (!(h_values[i] > 0.0)) throw InvalidArgument("check_weight_conditions: h values must be positive");
    if (i > 0 && !(h_values[i] < h_values[i - 1])) {
      throw InvalidArgument("check_weight_conditions: h values must be decreasing");
    }
    if (theta_window.hi + h_values[i] >= kPi) {
      throw InvalidArgument("check_weight_conditions: theta window shifted by h leaves (0, pi)");
    }
  }

  WeightConditionReport report;
  report.theta_window = theta_window;
  report.h_values = h_values;

  // int_{-1}^{1} dx / (w sqrt(1-x^2)) = int_0^pi d theta / w(cos theta).
  constexpr int kMaxLevel = 5;
  const Interval piece{-1.0, 1.0};
  bool diverged = false;
  for (int level = 0; level <= kMaxLevel && !diverged; ++level) {
    const auto half = half_theta_rule(std::size_t{16} << level, level);
    std::vector<double> terms;
    terms.reserve(2 * half.size());
    for (std::size_t j = 0; j < half.size(); ++j) {
      const double t = half.nodes[j];
      const double s = std::sin(0.5 * t);
      const double c = std::cos(0.5 * t);
      const double near = 2.0 * s * s;
      const double far = 2.0 * c * c;
      for (int end = 0; end < 2; ++end) {
        const double x = end == 0 ? piece.lo + near : piece.hi - near;
        const double w = end == 0 ? weight.density(x, near, far) : weight.density(x, far, near);
        if (!(w > 0.0) || !std::isfinite(1.0 / w)) {
          diverged = true;
          break;
        }
        terms.push_back(half.weights[j] / w);
      }
      if (diverged) break;
    }
    if (diverged) break;
    const double value = pairwise_sum(terms);
    report.circle_estimates.push_back(value);
    const auto m = report.circle_estimates.size();
    if (m >= 2 && std::abs(value - report.circle_estimates[m - 2]) <= 1e-6 * std::abs(value)) {
      report.circle_finite = true;
      break;
    }
  }
  report.circle_integral = diverged || report.circle_estimates.empty()
                               ? INFINITY
                               : report.circle_estimates.back();
  if (!report.circle_finite) report.circle_integral = INFINITY;

  for (double h : h_values) {
    auto integrand = [&](double theta) {
      const double d = weight.density(std::cos(theta + h)) - weight.density(std::cos(theta));
      return d * d;
    };
    const auto panels = static_cast<std::size_t>(std::ceil(2.0 * theta_window.width() / h));
    const double integral = quadrature::adaptive_simpson(integrand, theta_window.lo,
                                                         theta_window.hi, 1e-9 * h, 30, panels);
    report.lipschitz_ratios.push_back(integral / h);
  }
  report.lipschitz_bounded = true;
  for (std::size_t i = 0; i < report.lipschitz_ratios.size(); ++i) {
    const double r = report.lipschitz_ratios[i];
    if (!std::isfinite(r)) report.lipschitz_bounded = false;
    if (i > 0 && r > 2.0 * report.lipschitz_ratios[i - 1] + 1e-9) report.lipschitz_bounded = false;
  }
  return report;
}

}  // namespace orthoroots::measures
