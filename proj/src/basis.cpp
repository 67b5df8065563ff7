#include "orthoroots/basis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace orthoroots::basis {

namespace {

constexpr int kCheckedDegree = 64;
constexpr double kClosedFormAgreement = 1e-8;

void require_degree(const RecurrenceTable& table, int n, const char* what) {
  if (n < 0 || n > table.degree()) {
    std::ostringstream msg;
    msg << what << ": degree " << n << " outside table range [0, " << table.degree() << "]";
    throw InvalidArgument(msg.str());
  }
}

struct StieltjesRun {
  std::vector<double> a;
  std::vector<double> b;
  double p0 = 0.0;
};

StieltjesRun stieltjes(const measures::MeasureRule& rule, int N) {
  const std::size_t m = rule.nodes.size();
  StieltjesRun out;
  out.a.resize(static_cast<std::size_t>(N));
  out.b.resize(static_cast<std::size_t>(N));
  const double mass = pairwise_sum(rule.weights);
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw InvalidArgument("stieltjes: weight has zero or non-finite total mass");
  }
  out.p0 = 1.0 / std::sqrt(mass);
  std::vector<double> prev(m, 0.0), cur(m, out.p0), next(m), terms(m);
  double b_k = 0.0;
  for (int k = 0; k < N; ++k) {
    for (std::size_t j = 0; j < m; ++j) terms[j] = rule.weights[j] * rule.nodes[j] * cur[j] * cur[j];
    const double a_k = pairwise_sum(terms);
    for (std::size_t j = 0; j < m; ++j) {
      next[j] = (rule.nodes[j] - a_k) * cur[j] - b_k * prev[j];
      terms[j] = rule.weights[j] * next[j] * next[j];
    }
    const double b_next = std::sqrt(pairwise_sum(terms));
    if (!(b_next > 0.0)) {
      throw ConvergenceError("stieltjes: recurrence broke down (discrete measure too small)", b_k,
                             b_next);
    }
    out.a[static_cast<std::size_t>(k)] = a_k;
    out.b[static_cast<std::size_t>(k)] = b_next;
    for (std::size_t j = 0; j < m; ++j) next[j] /= b_next;
    std::swap(prev, cur);
    std::swap(cur, next);
    b_k = b_next;
  }
  return out;
}

double max_abs_diff(const std::vector<double>& x, const std::vector<double>& y, std::size_t count) {
  double d = 0.0;
  for (std::size_t i = 0; i < count; ++i) d = std::max(d, std::abs(x[i] - y[i]));
  return d;
}

struct ConvergedStieltjes {
  StieltjesRun run;
  measures::MeasureRule rule;
};

ConvergedStieltjes converged_stieltjes(const measures::WeightSpec& weight, int N,
                                       std::size_t quad_points) {
  constexpr int kMaxLevel = 6;
  const std::size_t min_nodes =
      std::max<std::size_t>({quad_points, 2 * static_cast<std::size_t>(N) + 2, 32});
  const double scale = std::max(1.0, weight.hull().width());
  measures::MeasureRule rule = measures::discretize(weight, 0, min_nodes);
  StieltjesRun previous = stieltjes(rule, N);
  double change = INFINITY;
  for (int level = 1; level <= kMaxLevel; ++level) {
    measures::MeasureRule finer = measures::discretize(weight, level, min_nodes);
    StieltjesRun next = stieltjes(finer, N);
    const std::size_t n = static_cast<std::size_t>(N);
    change = std::max({max_abs_diff(previous.a, next.a, n), max_abs_diff(previous.b, next.b, n),
                       std::abs(previous.p0 - next.p0)});
    previous = std::move(next);
    rule = std::move(finer);
    if (change <= 1e-12 * scale) return {std::move(previous), std::move(rule)};
  }
  RecurrenceTable partial(previous.a, previous.b, previous.p0, weight.label(), weight.hull());
  const double defect = orthonormality_defect(partial, rule, std::min(N, kCheckedDegree));
  std::ostringstream msg;
  msg << "recurrence_from_weight: quadrature did not converge under doubling (last change "
      << change << ", orthonormality defect " << defect << ")";
  throw ConvergenceError(msg.str(), change, defect);
}

}  // namespace

RecurrenceTable::RecurrenceTable(std::vector<double> a, std::vector<double> b, double p0,
                                 std::string weight_id, Interval support)
    : a_(std::move(a)), b_(std::move(b)), p0_(p0), weight_id_(std::move(weight_id)),
      support_(support) {
  if (a_.size() != b_.size()) {
    throw InvalidArgument("RecurrenceTable: need N centers a_0..a_{N-1} and N off-diagonals b_1..b_N");
  }
  if (!(p0_ > 0.0) || !std::isfinite(p0_)) throw InvalidArgument("RecurrenceTable: p0 must be positive");
  for (std::size_t k = 0; k < b_.size(); ++k) {
    if (!(b_[k] > 0.0) || !std::isfinite(b_[k]) || !std::isfinite(a_[k])) {
      std::ostringstream msg;
      msg << "RecurrenceTable: b_" << (k + 1) << " must be positive and finite";
      throw InvalidArgument(msg.str());
    }
  }
  inv_b_.resize(b_.size());
  for (std::size_t k = 0; k < b_.size(); ++k) inv_b_[k] = 1.0 / b_[k];
  if (b_.size() >= 2) {
    b_ratio_.resize(b_.size() - 1);
    for (std::size_t k = 0; k + 1 < b_.size(); ++k) b_ratio_[k] = b_[k] / b_[k + 1];
  }
}

void jacobi_coefficients(double beta, double gamma, int N, std::vector<double>& a,
                         std::vector<double>& b) {
  if (!(beta > -1.0) || !(gamma > -1.0)) {
    std::ostringstream msg;
    msg << "jacobi_recurrence: exponents must exceed -1 (got beta=" << beta << ", gamma=" << gamma
        << ")";
    throw InvalidArgument(msg.str());
  }
  if (N < 0) throw InvalidArgument("jacobi_recurrence: N must be >= 0");
  // Classical (alpha, beta) = (exponent of 1-x, exponent of 1+x).
  const double al = beta;
  const double be = gamma;
  const double s = al + be;
  a.assign(static_cast<std::size_t>(N), 0.0);
  b.assign(static_cast<std::size_t>(N), 0.0);
  for (int k = 0; k < N; ++k) {
    const double kd = k;
    if (k == 0) {
      a[0] = (be - al) / (s + 2.0);
    } else if (be * be - al * al != 0.0) {
      a[static_cast<std::size_t>(k)] = (be * be - al * al) / ((2.0 * kd + s) * (2.0 * kd + s + 2.0));
    }
    const double j = kd + 1.0;  // b_j
    double b2;
    if (j == 1.0) {
      b2 = 4.0 * (1.0 + al) * (1.0 + be) / ((2.0 + s) * (2.0 + s) * (3.0 + s));
    } else {
      const double t = 2.0 * j + s;
      b2 = 4.0 * j * (j + al) * (j + be) * (j + s) / (t * t * (t + 1.0) * (t - 1.0));
    }
    b[static_cast<std::size_t>(k)] = std::sqrt(b2);
  }
}

RecurrenceTable jacobi_recurrence(double beta, double gamma, int N) {
  std::vector<double> a, b;
  jacobi_coefficients(beta, gamma, N, a, b);
  const auto weight = measures::WeightSpec::jacobi(beta, gamma);

  const int checked = std::min(N, kCheckedDegree);
  auto reference = converged_stieltjes(weight, checked, 0);
  const auto n = static_cast<std::size_t>(checked);
  const double gap = std::max({max_abs_diff(a, reference.run.a, n), max_abs_diff(b, reference.run.b, n)});
  if (!(gap <= kClosedFormAgreement)) {
    std::ostringstream msg;
    msg << "jacobi_recurrence: closed form disagrees with Stieltjes reference by " << gap;
    throw Error(msg.str());
  }
  // Mass from the same converged rule: p0 = 1/sqrt(mu(-1,1)).
  const double p0 = reference.run.p0;
  RecurrenceTable table(std::move(a), std::move(b), p0, weight.label(), weight.hull());
  table.set_defect(orthonormality_defect(table, reference.rule, checked), checked);
  return table;
}

RecurrenceTable recurrence_from_weight(const measures::WeightSpec& weight, int N,
                                       std::size_t quad_points) {
  if (N < 0) throw InvalidArgument("recurrence_from_weight: N must be >= 0");
  auto converged = converged_stieltjes(weight, N, quad_points);
  RecurrenceTable table(std::move(converged.run.a), std::move(converged.run.b), converged.run.p0,
                        weight.label(), weight.hull());
  const int checked = std::min(N, kCheckedDegree);
  table.set_defect(orthonormality_defect(table, converged.rule, checked), checked);
  return table;
}

RecurrenceTable table_for_weight(const measures::WeightSpec& weight, int N) {
  if (const auto& j = weight.jacobi_params()) return jacobi_recurrence(j->beta, j->gamma, N);
  return recurrence_from_weight(weight, N);
}

double orthonormality_defect(const RecurrenceTable& table, const measures::MeasureRule& rule,
                             int degree) {
  require_degree(table, degree, "orthonormality_defect");
  const std::size_t m = rule.nodes.size();
  const auto d = static_cast<std::size_t>(degree);
  // values[i][j] = p_i(x_j) * sqrt(w_j)
  std::vector<std::vector<double>> values(d + 1, std::vector<double>(m));
  for (std::size_t j = 0; j < m; ++j) {
    const auto e = eval_basis(table, rule.nodes[j], degree, 0);
    const double sw = std::sqrt(rule.weights[j]);
    for (std::size_t i = 0; i <= d; ++i) values[i][j] = e.values[i] * sw;
  }
  double defect = 0.0;
  std::vector<double> terms(m);
  for (std::size_t i = 0; i <= d; ++i) {
    for (std::size_t k = i; k <= d; ++k) {
      for (std::size_t j = 0; j < m; ++j) terms[j] = values[i][j] * values[k][j];
      const double g = pairwise_sum(terms) - (i == k ? 1.0 : 0.0);
      defect = std::max(defect, std::abs(g));
    }
  }
  return defect;
}

BasisEval eval_basis(const RecurrenceTable& table, double x, int n, int order) {
  require_degree(table, n, "eval_basis");
  if (order < 0 || order > 2) throw InvalidArgument("eval_basis: order must be 0, 1 or 2");
  BasisEval e;
  e.x = x;
  e.n = n;
  const auto len = static_cast<std::size_t>(n) + 1;
  e.values.resize(len);
  e.values[0] = table.p0();
  if (order >= 1) e.d1.assign(len, 0.0);
  if (order >= 2) e.d2.assign(len, 0.0);
  const auto& inv_b = table.inv_b();
  for (int k = 0; k < n; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    const double shift = x - table.a(k);
    const double back = k > 0 ? table.b(k) : 0.0;
    const double pm = k > 0 ? e.values[ku - 1] : 0.0;
    e.values[ku + 1] = (shift * e.values[ku] - back * pm) * inv_b[ku];
    if (order >= 1) {
      const double dm = k > 0 ? e.d1[ku - 1] : 0.0;
      e.d1[ku + 1] = (shift * e.d1[ku] + e.values[ku] - back * dm) * inv_b[ku];
    }
    if (order >= 2) {
      const double sm = k > 0 ? e.d2[ku - 1] : 0.0;
      e.d2[ku + 1] = (shift * e.d2[ku] + 2.0 * e.d1[ku] - back * sm) * inv_b[ku];
    }
  }
  return e;
}

std::vector<std::complex<double>> eval_basis(const RecurrenceTable& table, std::complex<double> z,
                                             int n) {
  require_degree(table, n, "eval_basis");
  std::vector<std::complex<double>> v(static_cast<std::size_t>(n) + 1);
  v[0] = table.p0();
  for (int k = 0; k < n; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    const std::complex<double> pm = k > 0 ? v[ku - 1] : 0.0;
    const double back = k > 0 ? table.b(k) : 0.0;
    v[ku + 1] = ((z - table.a(k)) * v[ku] - back * pm) * table.inv_b()[ku];
  }
  return v;
}

double eval_combo(const RecurrenceTable& table, std::span<const double> coeffs, double x) {
  double out = 0.0;
  eval_combo(table, coeffs, std::span<const double>(&x, 1), std::span<double>(&out, 1));
  return out;
}

void eval_combo(const RecurrenceTable& table, std::span<const double> coeffs,
                std::span<const double> xs, std::span<double> out) {
  if (coeffs.empty()) throw InvalidArgument("eval_combo: empty coefficient vector");
  if (coeffs.size() > static_cast<std::size_t>(table.degree()) + 1) {
    std::ostringstream msg;
    msg << "eval_combo: " << coeffs.size() << " coefficients exceed table degree " << table.degree();
    throw InvalidArgument(msg.str());
  }
  if (out.size() != xs.size()) throw InvalidArgument("eval_combo: output size mismatch");
  const int n = static_cast<int>(coeffs.size()) - 1;
  const double* a = table.a_coeffs().data();
  const double* inv_b = table.inv_b().data();
  const double* ratio = table.b_ratio().data();
  const double p0 = table.p0();

  // Clenshaw, vectorized across a block of points:
  //   y_k = c_k + (x - a_k)/b_{k+1} y_{k+1} - b_{k+1}/b_{k+2} y_{k+2}.
  constexpr std::size_t kBlock = 128;
  std::array<double, kBlock> y1, y2;
  for (std::size_t start = 0; start < xs.size(); start += kBlock) {
    const std::size_t len = std::min(kBlock, xs.size() - start);
    const double* x = xs.data() + start;
    const double cn = coeffs[static_cast<std::size_t>(n)];
    for (std::size_t j = 0; j < len; ++j) {
      y1[j] = cn;
      y2[j] = 0.0;
    }
    for (int k = n - 1; k >= 0; --k) {
      const auto ku = static_cast<std::size_t>(k);
      const double c = coeffs[ku];
      const double ak = a[ku];
      const double ib = inv_b[ku];
      const double r = k + 1 < n ? ratio[ku] : 0.0;
      for (std::size_t j = 0; j < len; ++j) {
        const double y = c + (x[j] - ak) * ib * y1[j] - r * y2[j];
        y2[j] = y1[j];
        y1[j] = y;
      }
    }
    for (std::size_t j = 0; j < len; ++j) out[start + j] = p0 * y1[j];
  }
}

KernelValues kernels(const RecurrenceTable& table, double x, int n) {
  require_degree(table, n, "kernels");
  const auto& inv_b = table.inv_b();
  double pm = 0.0, p = table.p0();
  double dm = 0.0, d = 0.0;
  KernelValues kv;
  kv.A = p * p;
  for (int k = 0; k < n; ++k) {
    const double shift = x - table.a(k);
    const double back = k > 0 ? table.b(k) : 0.0;
    const double pn = (shift * p - back * pm) * inv_b[static_cast<std::size_t>(k)];
    const double dn = (shift * d + p - back * dm) * inv_b[static_cast<std::size_t>(k)];
    pm = p;
    p = pn;
    dm = d;
    d = dn;
    kv.A += p * p;
    kv.B += p * d;
    kv.C += d * d;
  }
  return kv;
}

}  // namespace orthoroots::basis
