#include "orthoroots/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "orthoroots/common.hpp"

namespace orthoroots::quadrature {

Rule gauss_legendre(std::size_t q, double lo, double hi) {
  if (q == 0) throw InvalidArgument("gauss_legendre: need at least one node");
  Rule rule;
  rule.nodes.resize(q);
  rule.weights.resize(q);
  const double xm = 0.5 * (hi + lo);
  const double xl = 0.5 * (hi - lo);
  const std::size_t m = (q + 1) / 2;
  for (std::size_t i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(q) + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0;
      double p2 = 0.0;
      for (std::size_t j = 0; j < q; ++j) {
        const double p3 = p2;
        p2 = p1;
        const double jd = static_cast<double>(j);
        p1 = ((2.0 * jd + 1.0) * z * p2 - jd * p3) / (jd + 1.0);
      }
      pp = static_cast<double>(q) * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15) break;
    }
    // z runs from near +1 downward; store ascending.
    rule.nodes[i] = xm - xl * z;
    rule.nodes[q - 1 - i] = xm + xl * z;
    rule.weights[i] = 2.0 * xl / ((1.0 - z * z) * pp * pp);
    rule.weights[q - 1 - i] = rule.weights[i];
  }
  if (q % 2 == 1) rule.nodes[q / 2] = xm;
  return rule;
}

Rule graded_gauss_legendre(double lo, double hi, bool grade_lo, bool grade_hi,
                           std::size_t q, int levels, double sigma,
                           double max_panel) {
  if (!(hi > lo)) throw InvalidArgument("graded_gauss_legendre: empty range");
  const double width = hi - lo;
  // Graded zone on each flagged side covers a fraction of the range.
  const double zone = (grade_lo && grade_hi) ? 0.25 * width : 0.5 * width;

  std::vector<double> breaks;
  breaks.push_back(lo);
  if (grade_lo) {
    for (int j = levels; j >= 1; --j) breaks.push_back(lo + zone * std::pow(sigma, j));
    breaks.push_back(lo + zone);
  }
  const double inner_lo = grade_lo ? lo + zone : lo;
  const double inner_hi = grade_hi ? hi - zone : hi;
  const auto pieces = static_cast<std::size_t>(
      std::max(1.0, std::ceil((inner_hi - inner_lo) / max_panel)));
  for (std::size_t k = 1; k < pieces; ++k) {
    breaks.push_back(inner_lo + (inner_hi - inner_lo) * static_cast<double>(k) /
                                    static_cast<double>(pieces));
  }
  if (grade_hi) {
    breaks.push_back(hi - zone);
    for (int j = 1; j <= levels; ++j) breaks.push_back(hi - zone * std::pow(sigma, j));
  }
  breaks.push_back(hi);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  const Rule base = gauss_legendre(q);
  Rule rule;
  rule.nodes.reserve((breaks.size() - 1) * q);
  rule.weights.reserve((breaks.size() - 1) * q);
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double a = breaks[p];
    const double b = breaks[p + 1];
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    for (std::size_t j = 0; j < q; ++j) {
      rule.nodes.push_back(mid + half * base.nodes[j]);
      rule.weights.push_back(half * base.weights[j]);
    }
  }
  return rule;
}

namespace {

struct SimpsonPanel {
  double a, fa, m, fm, b, fb, whole;
};

double simpson_recurse(const std::function<double(double)>& f,
                       const SimpsonPanel& p, double tol, int depth) {
  const double lm = 0.5 * (p.a + p.m);
  const double rm = 0.5 * (p.m + p.b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (p.m - p.a) / 6.0 * (p.fa + 4.0 * flm + p.fm);
  const double right = (p.b - p.m) / 6.0 * (p.fm + 4.0 * frm + p.fb);
  const double delta = left + right - p.whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return simpson_recurse(f, {p.a, p.fa, lm, flm, p.m, p.fm, left}, 0.5 * tol, depth - 1) +
         simpson_recurse(f, {p.m, p.fm, rm, frm, p.b, p.fb, right}, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double lo,
                        double hi, double tol, int max_depth,
                        std::size_t initial_panels) {
  if (hi == lo) return 0.0;
  if (initial_panels == 0) initial_panels = 1;
  std::vector<double> parts(initial_panels);
  const double step = (hi - lo) / static_cast<double>(initial_panels);
  const double panel_tol = tol / static_cast<double>(initial_panels);
  double fa = f(lo);
  for (std::size_t k = 0; k < initial_panels; ++k) {
    const double a = lo + step * static_cast<double>(k);
    const double b = (k + 1 == initial_panels) ? hi : a + step;
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    parts[k] = simpson_recurse(f, {a, fa, m, fm, b, fb, whole}, panel_tol, max_depth);
    fa = fb;
  }
  return pairwise_sum(parts);
}

}  // namespace orthoroots::quadrature
