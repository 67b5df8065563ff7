#include "orthoroots/ensembles.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "orthoroots/common.hpp"

namespace orthoroots::ensembles {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
}

CounterStream::CounterStream(SeedPath path)
    : key_(mix64(mix64(path.master + kGolden) ^ (path.trial * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL))) {}

std::uint64_t CounterStream::next_u64() {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

double CounterStream::next_open01() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterStream::next_gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // Box-Muller; libm log/sin/cos keep the stream reproducible on a given platform.
  const double u1 = next_open01();
  const double u2 = next_open01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

CoefficientDistribution::CoefficientDistribution(DistKind kind, double alpha, double eps)
    : kind_(kind), alpha_(alpha), eps_(eps), moment_2pe_(0.0) {
  const double p = 2.0 + eps_;
  switch (kind_) {
    case DistKind::Gaussian:
      moment_2pe_ = std::pow(2.0, 0.5 * p) * std::tgamma(0.5 * (p + 1.0)) / std::sqrt(std::numbers::pi);
      break;
    case DistKind::Rademacher:
      moment_2pe_ = 1.0;
      break;
    case DistKind::UniformSym:
      moment_2pe_ = std::pow(3.0, 0.5 * p) / (p + 1.0);
      break;
    case DistKind::ParetoSym: {
      const double var = alpha_ / (alpha_ - 2.0);
      pareto_scale_ = 1.0 / std::sqrt(var);
      moment_2pe_ = (alpha_ / (alpha_ - p)) / std::pow(var, 0.5 * p);
      break;
    }
  }
}

CoefficientDistribution CoefficientDistribution::gaussian() { return {DistKind::Gaussian, 0.0, 1.0}; }
CoefficientDistribution CoefficientDistribution::rademacher() { return {DistKind::Rademacher, 0.0, 1.0}; }
CoefficientDistribution CoefficientDistribution::uniform_sym() { return {DistKind::UniformSym, 0.0, 1.0}; }

CoefficientDistribution CoefficientDistribution::pareto_sym(double alpha, double eps) {
  if (!(alpha > 2.0 && alpha < 3.0)) {
    std::ostringstream msg;
    msg << "pareto alpha must lie in (2, 3), got " << alpha;
    throw InvalidArgument(msg.str());
  }
  if (eps < 0.0) eps = 0.5 * (alpha - 2.0);
  if (!(eps > 0.0 && 2.0 + eps < alpha)) {
    throw InvalidArgument("pareto eps must satisfy 0 < eps and 2 + eps < alpha");
  }
  return {DistKind::ParetoSym, alpha, eps};
}

CoefficientDistribution CoefficientDistribution::from_name(const std::string& name, double alpha) {
  if (name == "gaussian") return gaussian();
  if (name == "rademacher") return rademacher();
  if (name == "uniform" || name == "uniform_sym") return uniform_sym();
  if (name == "pareto" || name == "pareto_sym") return pareto_sym(alpha);
  throw InvalidArgument("unknown distribution '" + name +
                        "' (expected gaussian, rademacher, uniform, pareto)");
}

std::string CoefficientDistribution::name() const {
  switch (kind_) {
    case DistKind::Gaussian: return "gaussian";
    case DistKind::Rademacher: return "rademacher";
    case DistKind::UniformSym: return "uniform";
    case DistKind::ParetoSym: {
      std::ostringstream s;
      s << "pareto(" << alpha_ << ")";
      return s.str();
    }
  }
  return "?";
}

double CoefficientDistribution::draw(CounterStream& stream) const {
  switch (kind_) {
    case DistKind::Gaussian:
      return stream.next_gaussian();
    case DistKind::Rademacher:
      return (stream.next_u64() >> 63) ? 1.0 : -1.0;
    case DistKind::UniformSym:
      return std::sqrt(3.0) * (2.0 * stream.next_open01() - 1.0);
    case DistKind::ParetoSym: {
      const std::uint64_t bits = stream.next_u64();
      const double u = (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
      const double magnitude = std::pow(u, -1.0 / alpha_) * pareto_scale_;
      // Sign from a separate draw so it is independent of the magnitude.
      return (stream.next_u64() >> 63) ? magnitude : -magnitude;
    }
  }
  return 0.0;
}

SampleVector sample_coeffs(const CoefficientDistribution& dist, int n, SeedPath path) {
  if (n < 0) throw InvalidArgument("sample_coeffs: n must be >= 0");
  SampleVector s;
  s.seed_path = path;
  s.coeffs.resize(static_cast<std::size_t>(n) + 1);
  sample_coeffs_into(dist, path, s.coeffs);
  return s;
}

void sample_coeffs_into(const CoefficientDistribution& dist, SeedPath path, std::vector<double>& out) {
  CounterStream stream(path);
  for (double& c : out) c = dist.draw(stream);
}

MomentReport moment_report(const CoefficientDistribution& dist, std::size_t m, std::uint64_t seed) {
  if (m < 10000) throw InvalidArgument("moment_report: need at least 1e4 draws");
  CounterStream stream({seed, 0});
  std::vector<double> xs(m);
  for (double& x : xs) x = dist.draw(stream);
  std::vector<double> t(m);
  MomentReport r;
  r.samples = m;
  r.mean = pairwise_sum(xs) / static_cast<double>(m);
  for (std::size_t i = 0; i < m; ++i) t[i] = (xs[i] - r.mean) * (xs[i] - r.mean);
  r.var = pairwise_sum(t) / static_cast<double>(m - 1);
  for (std::size_t i = 0; i < m; ++i) t[i] = std::pow(std::abs(xs[i]), 2.0 + dist.epsilon());
  r.abs_moment_2pe = pairwise_sum(t) / static_cast<double>(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double d = xs[i] - r.mean;
    t[i] = d * d * d;
  }
  r.skewness = (pairwise_sum(t) / static_cast<double>(m)) / std::pow(r.var, 1.5);
  r.skewness_stderr = std::sqrt(6.0 / static_cast<double>(m));
  return r;
}

std::vector<MomentMatchRow> match_table(const CoefficientDistribution& a,
                                        const CoefficientDistribution& b, std::size_t m,
                                        std::uint64_t seed) {
  const auto ra = moment_report(a, m, seed);
  const auto rb = moment_report(b, m, seed + 1);
  const double second_a = ra.var * static_cast<double>(m - 1) / static_cast<double>(m) + ra.mean * ra.mean;
  const double second_b = rb.var * static_cast<double>(m - 1) / static_cast<double>(m) + rb.mean * rb.mean;
  return {{1, ra.mean, rb.mean, ra.mean - rb.mean}, {2, second_a, second_b, second_a - second_b}};
}

}  // namespace orthoroots::ensembles
