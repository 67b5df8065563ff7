#include "orthoroots/roots.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "orthoroots/eigen.hpp"

namespace orthoroots::roots {

namespace {

struct PieceGrid {
  Interval span;
  std::vector<double> xs;
  std::vector<double> values;
};

double chebyshev_point(const Interval& piece, std::size_t i, std::size_t gaps) {
  if (i == 0) return piece.lo;
  if (i == gaps) return piece.hi;
  const double c = std::cos(std::numbers::pi * static_cast<double>(i) / static_cast<double>(gaps));
  return piece.mid() - 0.5 * piece.width() * c;
}

double sign_guard(double v) {
  if (std::isnan(v)) throw InvalidArgument("count_real_roots: evaluator returned NaN");
  return v;
}

int sign_of(double v) {
  if (std::isnan(v)) throw InvalidArgument("count_real_roots: evaluator returned NaN");
  return (v > 0.0) - (v < 0.0);
}

// One left-to-right sweep over all pieces. A sign change is charged to the
// piece holding its right-hand sample.
std::vector<std::size_t> sweep(const std::vector<PieceGrid>& grids, std::vector<Bracket>* brackets) {
  std::vector<std::size_t> counts(grids.size(), 0);
  int last_sign = 0;
  double last_x = 0.0;
  bool pending_zero = false;
  double first_zero = 0.0;
  for (std::size_t p = 0; p < grids.size(); ++p) {
    const auto& g = grids[p];
    for (std::size_t i = (p == 0 ? 0 : 1); i < g.xs.size(); ++i) {
      const int s = sign_of(g.values[i]);
      if (s == 0) {
        if (!pending_zero) first_zero = g.xs[i];
        pending_zero = true;
        continue;
      }
      if (last_sign != 0 && s != last_sign) {
        ++counts[p];
        if (brackets) brackets->push_back({last_x, g.xs[i], pending_zero, first_zero});
      }
      last_sign = s;
      last_x = g.xs[i];
      pending_zero = false;
    }
  }
  return counts;
}

// A pair of close roots between two samples leaves no sign change but shows
// up as a local minimum of |f| among three same-signed samples. Each such
// minimum is chased by golden-section search on s*f (s the common sign);
// if s*f turns negative the two roots are charged to the piece of the cell
// holding the negative sample. All candidates advance together so that f
// is called on batches.
std::size_t find_hidden_pairs(const std::vector<PieceGrid>& grids, const BatchFunction& f,
                              std::vector<std::size_t>& counts, std::vector<Bracket>* brackets) {
  std::vector<double> xs, vs;
  std::vector<std::size_t> owner;
  for (std::size_t p = 0; p < grids.size(); ++p) {
    for (std::size_t i = (p == 0 ? 0 : 1); i < grids[p].xs.size(); ++i) {
      xs.push_back(grids[p].xs[i]);
      vs.push_back(grids[p].values[i]);
      owner.push_back(p);
    }
  }
  struct Search {
    std::size_t left;  // sample index of the bracket start
    double s;
    double a, m, b, fm;
  };
  std::vector<Search> active;
  for (std::size_t j = 1; j + 1 < xs.size(); ++j) {
    const double l = vs[j - 1], c = vs[j], r = vs[j + 1];
    if (c == 0.0 || l == 0.0 || r == 0.0) continue;
    if ((l > 0.0) != (c > 0.0) || (r > 0.0) != (c > 0.0)) continue;
    const double ac = std::abs(c);
    if (ac < std::abs(l) && ac <= std::abs(r)) {
      const double s = c > 0.0 ? 1.0 : -1.0;
      active.push_back({j - 1, s, xs[j - 1], xs[j], xs[j + 1], s * c});
    }
  }

  constexpr double kInvPhi2 = 0.38196601125010515;  // 2 - golden ratio
  constexpr int kMaxSteps = 60;
  std::size_t pairs = 0;
  std::vector<double> probe, value;
  for (int step = 0; step < kMaxSteps && !active.empty(); ++step) {
    probe.resize(active.size());
    for (std::size_t k = 0; k < active.size(); ++k) {
      auto& q = active[k];
      probe[k] = (q.b - q.m > q.m - q.a) ? q.m + kInvPhi2 * (q.b - q.m) : q.m - kInvPhi2 * (q.m - q.a);
    }
    value.resize(probe.size());
    f(probe, value);
    std::size_t keep = 0;
    for (std::size_t k = 0; k < active.size(); ++k) {
      auto q = active[k];
      const double u = probe[k];
      const double fu = q.s * sign_guard(value[k]);
      if (fu < 0.0) {
        // Two sign changes around u, inside the cell that holds u.
        std::size_t right = q.left + 1;
        if (u > xs[right]) ++right;
        counts[owner[right]] += 2;
        pairs += 1;
        if (brackets) {
          brackets->push_back({xs[right - 1], u, false, 0.0});
          brackets->push_back({u, xs[right], false, 0.0});
        }
        continue;
      }
      if (fu < q.fm) {
        if (u > q.m) q.a = q.m; else q.b = q.m;
        q.m = u;
        q.fm = fu;
      } else {
        if (u > q.m) q.b = u; else q.a = u;
      }
      const double scale = xs[q.left + 2] - xs[q.left];
      if (q.b - q.a > 1e-9 * scale && q.b > q.a) active[keep++] = q;
    }
    active.resize(keep);
  }
  return pairs;
}

}  // namespace

PiecewiseCount count_sign_changes(const BatchFunction& f, int degree_hint, Interval interval,
                                  const GridPolicy& policy, bool want_brackets) {
  if (std::isnan(interval.lo) || std::isnan(interval.hi) || interval.lo > interval.hi) {
    throw InvalidArgument("count_real_roots: interval must satisfy lo <= hi");
  }
  PiecewiseCount result;
  result.total.interval = interval;
  if (interval.degenerate()) {
    result.pieces = {interval};
    result.piece_counts = {0};
    result.total.converged = true;
    return result;
  }

  std::vector<double> cuts{interval.lo};
  for (double b : policy.breakpoints) {
    if (b > interval.lo && b < interval.hi) cuts.push_back(b);
  }
  cuts.push_back(interval.hi);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const std::size_t pieces = cuts.size() - 1;
  const std::size_t max_points = std::max<std::size_t>(policy.max_points, 3);
  std::size_t points = std::max(policy.min_points,
                                policy.points_per_degree * static_cast<std::size_t>(std::max(degree_hint, 0)));
  points = std::clamp<std::size_t>(points, 2, max_points);
  std::size_t gaps = points - 1;

  std::vector<PieceGrid> grids(pieces);
  std::vector<double> batch_x, batch_y;
  for (std::size_t p = 0; p < pieces; ++p) {
    grids[p].span = {cuts[p], cuts[p + 1]};
    grids[p].xs.resize(gaps + 1);
    for (std::size_t i = 0; i <= gaps; ++i) grids[p].xs[i] = chebyshev_point(grids[p].span, i, gaps);
    batch_x.insert(batch_x.end(), grids[p].xs.begin(), grids[p].xs.end());
  }
  batch_y.resize(batch_x.size());
  f(batch_x, batch_y);
  for (std::size_t p = 0, off = 0; p < pieces; ++p) {
    grids[p].values.assign(batch_y.begin() + static_cast<std::ptrdiff_t>(off),
                           batch_y.begin() + static_cast<std::ptrdiff_t>(off + gaps + 1));
    off += gaps + 1;
  }

  auto distinct_points = [&](std::size_t g) { return pieces * g + 1; };
  std::vector<std::size_t> counts = sweep(grids, nullptr);
  auto total_of = [](const std::vector<std::size_t>& c) {
    std::size_t t = 0;
    for (auto v : c) t += v;
    return t;
  };
  result.total.grid_sizes.push_back(distinct_points(gaps));
  result.total.counts.push_back(total_of(counts));

  while (true) {
    const std::size_t finer = 2 * gaps;
    if (finer + 1 > max_points) break;
    batch_x.clear();
    for (std::size_t p = 0; p < pieces; ++p) {
      for (std::size_t i = 1; i < finer; i += 2) batch_x.push_back(chebyshev_point(grids[p].span, i, finer));
    }
    batch_y.resize(batch_x.size());
    f(batch_x, batch_y);
    std::size_t off = 0;
    for (std::size_t p = 0; p < pieces; ++p) {
      auto& g = grids[p];
      std::vector<double> xs(finer + 1), vs(finer + 1);
      for (std::size_t i = 0; i <= gaps; ++i) {
        xs[2 * i] = g.xs[i];
        vs[2 * i] = g.values[i];
      }
      for (std::size_t i = 1; i < finer; i += 2, ++off) {
        xs[i] = batch_x[off];
        vs[i] = batch_y[off];
      }
      g.xs = std::move(xs);
      g.values = std::move(vs);
    }
    gaps = finer;
    auto next = sweep(grids, nullptr);
    result.total.grid_sizes.push_back(distinct_points(gaps));
    result.total.counts.push_back(total_of(next));
    const bool agree = next == counts;
    counts = std::move(next);
    if (agree) {
      result.total.converged = true;
      break;
    }
  }

  if (want_brackets) sweep(grids, &result.brackets);
  result.total.hidden_pairs = find_hidden_pairs(grids, f, counts, want_brackets ? &result.brackets : nullptr);
  if (want_brackets) {
    std::sort(result.brackets.begin(), result.brackets.end(),
              [](const Bracket& a, const Bracket& b) { return a.lo < b.lo; });
  }
  result.piece_counts = counts;
  result.total.count = total_of(counts);
  for (const auto& g : grids) result.pieces.push_back(g.span);
  return result;
}

CountReport count_real_roots(const BatchFunction& f, int degree_hint, Interval interval,
                             const GridPolicy& policy) {
  return count_sign_changes(f, degree_hint, interval, policy, false).total;
}

namespace {
BatchFunction batched(const ScalarFunction& f) {
  return [&f](std::span<const double> xs, std::span<double> out) {
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = f(xs[i]);
  };
}
}  // namespace

CountReport count_real_roots(const ScalarFunction& f, int degree_hint, Interval interval,
                             const GridPolicy& policy) {
  return count_real_roots(batched(f), degree_hint, interval, policy);
}

BatchFunction combo_function(const basis::RecurrenceTable& table, std::span<const double> coeffs) {
  return [&table, coeffs](std::span<const double> xs, std::span<double> out) {
    basis::eval_combo(table, coeffs, xs, out);
  };
}

RootList locate_roots(const ScalarFunction& f, int degree_hint, Interval interval, double tol,
                      const GridPolicy& policy) {
  const auto pc = count_sign_changes(batched(f), degree_hint, interval, policy, true);
  if (!pc.total.converged) {
    const auto& c = pc.total.counts;
    throw ConvergenceError("locate_roots: sign-change count did not converge",
                           c.size() >= 2 ? static_cast<double>(c[c.size() - 2]) : NAN,
                           c.empty() ? NAN : static_cast<double>(c.back()));
  }
  if (!(tol > 0.0)) tol = 1e-12 * interval.width();
  RootList out;
  for (const auto& br : pc.brackets) {
    if (br.exact) {
      out.roots.push_back(br.zero);
      continue;
    }
    double lo = br.lo, hi = br.hi;
    double flo = f(lo);
    while (hi - lo > tol) {
      const double mid = lo + 0.5 * (hi - lo);
      if (mid <= lo || mid >= hi) break;
      const double fm = f(mid);
      if (fm == 0.0) {
        lo = hi = mid;
        break;
      }
      if ((fm > 0.0) == (flo > 0.0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    out.roots.push_back(0.5 * (lo + hi));
    out.bracket_width = std::max(out.bracket_width, hi - lo);
  }
  std::sort(out.roots.begin(), out.roots.end());
  return out;
}

RootList comrade_roots(std::span<const double> coeffs, const basis::RecurrenceTable& table) {
  if (coeffs.empty()) throw InvalidArgument("comrade_roots: empty coefficient vector");
  const std::size_t n = coeffs.size() - 1;
  if (n > 64) throw InvalidArgument("comrade_roots: degree above 64 is not supported");
  if (n > static_cast<std::size_t>(table.degree())) {
    throw InvalidArgument("comrade_roots: coefficient vector longer than table degree + 1");
  }
  double norm = 0.0;
  for (double c : coeffs) norm += c * c;
  norm = std::sqrt(norm);
  if (!(std::abs(coeffs[n]) > 1e-12 * norm)) {
    throw InvalidArgument("comrade_roots: leading coefficient is negligible; deflate the degree first");
  }
  RootList out;
  if (n == 0) return out;

  // Transpose of the comrade matrix, which is upper Hessenberg.
  linalg::Matrix h(n);
  for (std::size_t i = 0; i < n; ++i) {
    h(i, i) = table.a(static_cast<int>(i));
    if (i + 1 < n) {
      const double bb = table.b(static_cast<int>(i) + 1);
      h(i, i + 1) = bb;
      h(i + 1, i) = bb;
    }
  }
  const double scale = table.b(static_cast<int>(n)) / coeffs[n];
  for (std::size_t j = 0; j < n; ++j) h(j, n - 1) -= scale * coeffs[j];

  linalg::balance(h);
  for (const auto& z : linalg::hessenberg_eigenvalues(std::move(h))) {
    if (std::abs(z.imag()) <= 1e-8 * std::max(1.0, std::abs(z.real()))) out.roots.push_back(z.real());
  }
  std::sort(out.roots.begin(), out.roots.end());
  return out;
}

double linear_statistic(const RootList& roots,
                        const std::function<double(std::span<const double>)>& G, int k) {
  if (k < 1) throw InvalidArgument("linear_statistic: k must be >= 1");
  const std::size_t n = roots.roots.size();
  if (n == 0) return 0.0;
  const auto ku = static_cast<std::size_t>(k);
  std::vector<std::size_t> idx(ku, 0);
  std::vector<double> tuple(ku);
  std::vector<double> terms;
  while (true) {
    for (std::size_t i = 0; i < ku; ++i) tuple[i] = roots.roots[idx[i]];
    terms.push_back(G(tuple));
    std::size_t pos = ku;
    while (pos > 0) {
      --pos;
      if (++idx[pos] < n) break;
      idx[pos] = 0;
      if (pos == 0) return pairwise_sum(terms);
    }
  }
}

}  // namespace orthoroots::roots
