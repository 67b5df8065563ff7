#include "orthoroots/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "orthoroots/basis.hpp"
#include "orthoroots/config.hpp"

namespace orthoroots::experiments {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// Runs body(trial, worker) for every trial. Each trial writes only its own
// slot, so the results do not depend on the worker count. The exception of
// the lowest failing trial is rethrown.
template <class Body>
void parallel_trials(std::size_t trials, unsigned workers, Body&& body) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(trials, 1))));
  std::atomic<std::size_t> next{0};
  std::mutex guard;
  std::exception_ptr first_error;
  std::size_t first_trial = trials;
  constexpr std::size_t chunk = 8;

  auto run = [&](unsigned worker) {
    while (true) {
      const std::size_t begin = next.fetch_add(chunk);
      if (begin >= trials) return;
      const std::size_t end = std::min(trials, begin + chunk);
      for (std::size_t t = begin; t < end; ++t) {
        try {
          body(t, worker);
        } catch (...) {
          std::lock_guard lock(guard);
          if (t < first_trial) {
            first_trial = t;
            first_error = std::current_exception();
          }
          return;
        }
      }
    }
  };

  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);
}

struct Stats {
  double mean = 0.0;
  double std_error = 0.0;
};

Stats mean_and_stderr(std::span<const double> v) {
  Stats s;
  if (v.empty()) return s;
  const double T = static_cast<double>(v.size());
  s.mean = pairwise_sum(v) / T;
  if (v.size() > 1) {
    std::vector<double> sq(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) sq[i] = (v[i] - s.mean) * (v[i] - s.mean);
    s.std_error = std::sqrt(pairwise_sum(sq) / (T - 1.0) / T);
  }
  return s;
}

// Ratio of pooled sums sum(y) / sum(x) with a delta-method standard error.
Stats pooled_ratio(std::span<const double> y, std::span<const double> x) {
  Stats s;
  const double sx = pairwise_sum(x);
  if (!(sx > 0.0)) return s;
  s.mean = pairwise_sum(y) / sx;
  const double T = static_cast<double>(x.size());
  if (x.size() > 1) {
    const double xbar = sx / T;
    std::vector<double> r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = y[i] - s.mean * x[i];
    const double rbar = pairwise_sum(r) / T;
    for (auto& v : r) v = (v - rbar) * (v - rbar);
    s.std_error = std::sqrt(pairwise_sum(r) / (T - 1.0) / T) / xbar;
  }
  return s;
}

void validate(const ExperimentConfig& c) {
  if (c.n < 0) throw InvalidArgument("n must be >= 0");
  if (c.trials < 1) throw InvalidArgument("trials must be >= 1");
  if (!c.damping.empty() && c.damping.size() != static_cast<std::size_t>(c.n) + 1) {
    throw InvalidArgument("damping must have n + 1 entries");
  }
  for (const auto& iv : c.intervals) {
    if (!(iv.lo <= iv.hi)) throw InvalidArgument("intervals must satisfy lo <= hi");
  }
}

Interval search_window(const ExperimentConfig& c, double pad) {
  const auto hull = c.weight.hull();
  return {hull.lo - pad, hull.hi + pad};
}

// Support ends, plus any extra points, as grid breakpoints.
roots::GridPolicy policy_with_breaks(const ExperimentConfig& c, std::vector<double> extra) {
  roots::GridPolicy p = c.grid;
  for (const auto& piece : c.weight.support()) {
    p.breakpoints.push_back(piece.lo);
    p.breakpoints.push_back(piece.hi);
  }
  p.breakpoints.insert(p.breakpoints.end(), extra.begin(), extra.end());
  return p;
}

// Degree hint for a window: the full degree on the whole support, scaled
// down for short windows.
int local_hint(int n, Interval window, Interval hull) {
  const double frac = window.width() / std::max(hull.width(), 1e-300);
  if (frac >= 0.5) return n;
  return std::max(1, static_cast<int>(std::ceil(2.0 * n * frac)));
}

class TrialContext {
 public:
  explicit TrialContext(const ExperimentConfig& c) : config_(c), table_(basis::table_for_weight(c.weight, c.n)) {}

  const basis::RecurrenceTable& table() const { return table_; }

  void coefficients(std::size_t trial, std::vector<double>& out) const {
    out.resize(static_cast<std::size_t>(config_.n) + 1);
    ensembles::sample_coeffs_into(config_.dist, {config_.seed, trial}, out);
    if (!config_.damping.empty()) {
      for (std::size_t j = 0; j < out.size(); ++j) out[j] *= config_.damping[j];
    }
  }

 private:
  const ExperimentConfig& config_;
  basis::RecurrenceTable table_;
};

ResultRecord base_record(const ExperimentConfig& c, const std::string& experiment, Interval interval,
                         const nlohmann::json& params) {
  ResultRecord r;
  r.experiment = experiment;
  r.interval = interval;
  if (const auto& jp = c.weight.jacobi_params()) {
    r.weight_kind = "jacobi";
    r.beta = jp->beta;
    r.gamma = jp->gamma;
  } else {
    r.weight_kind = "custom";
    r.beta = std::numeric_limits<double>::quiet_NaN();
    r.gamma = std::numeric_limits<double>::quiet_NaN();
  }
  r.dist = c.dist.name();
  r.n = c.n;
  r.seed = c.seed;
  nlohmann::json fp = {{"experiment", experiment},
                       {"config", config::experiment_to_json(c, false)},
                       {"params", params},
                       {"schema_version", kSchemaVersion}};
  r.fingerprint = config::fingerprint(fp);
  return r;
}

void check_budget(std::size_t nonconverged, std::size_t trials, const char* experiment) {
  if (nonconverged * 1000 > trials) {
    std::ostringstream msg;
    msg << experiment << ": " << nonconverged << " of " << trials
        << " trials did not converge (budget 0.1%); increase grid.max_points or grid.points_per_degree";
    throw ConvergenceError(msg.str(), static_cast<double>(nonconverged), static_cast<double>(trials));
  }
}

// Per-trial piece counts on `window`, split at the given breakpoints.
struct PieceTally {
  std::vector<Interval> pieces;
  std::vector<std::vector<double>> counts;  // [trial][piece]
  std::vector<char> converged;
  std::size_t nonconverged = 0;
};

PieceTally tally_pieces(const ExperimentConfig& c, Interval window, const roots::GridPolicy& policy, int hint) {
  TrialContext ctx(c);
  const unsigned workers = resolve_workers(c.workers);
  PieceTally tally;
  tally.counts.resize(c.trials);
  tally.converged.assign(c.trials, 0);
  std::vector<std::vector<double>> buffers(workers);
  std::vector<std::vector<Interval>> piece_sets(c.trials);

  parallel_trials(c.trials, workers, [&](std::size_t t, unsigned w) {
    auto& coeffs = buffers[w];
    ctx.coefficients(t, coeffs);
    const auto f = roots::combo_function(ctx.table(), coeffs);
    auto pc = roots::count_sign_changes(f, hint, window, policy);
    tally.converged[t] = pc.total.converged ? 1 : 0;
    tally.counts[t].assign(pc.piece_counts.begin(), pc.piece_counts.end());
    if (t == 0) piece_sets[0] = pc.pieces;
  });
  tally.pieces = piece_sets[0];
  for (char ok : tally.converged) tally.nonconverged += ok ? 0 : 1;
  return tally;
}

// Trials that entered the estimate, and the per-trial number of roots in
// the union of pieces contained in `iv`.
std::vector<double> counts_in(const PieceTally& tally, Interval iv) {
  std::vector<double> out;
  out.reserve(tally.counts.size());
  for (std::size_t t = 0; t < tally.counts.size(); ++t) {
    if (!tally.converged[t]) continue;
    double s = 0.0;
    for (std::size_t p = 0; p < tally.pieces.size(); ++p) {
      const auto& piece = tally.pieces[p];
      if (piece.lo >= iv.lo && piece.hi <= iv.hi) s += tally.counts[t][p];
    }
    out.push_back(s);
  }
  return out;
}

void fill(ResultRecord& r, const std::vector<double>& per_trial, Stats s, std::size_t nonconverged) {
  r.estimate = s.mean;
  r.std_error = s.std_error;
  r.trials = per_trial.size();
  r.nonconverged = nonconverged;
  r.per_trial = per_trial;
}

void require_window(const ExperimentConfig& c, Interval iv, const char* what) {
  const auto win = search_window(c, 0.1);
  if (iv.lo < win.lo || iv.hi > win.hi) {
    std::ostringstream msg;
    msg << what << ": interval [" << iv.lo << ", " << iv.hi << "] lies outside [" << win.lo << ", " << win.hi
        << "], the support inflated by 0.1";
    throw InvalidArgument(msg.str());
  }
}

}  // namespace

unsigned resolve_workers(unsigned requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

std::vector<ResultRecord> run_interval_counts(const ExperimentConfig& config) {
  validate(config);
  const auto start = Clock::now();
  const Interval window = search_window(config, 0.1);
  std::vector<double> extra;
  for (const auto& iv : config.intervals) {
    require_window(config, iv, "run_interval_counts");
    extra.push_back(iv.lo);
    extra.push_back(iv.hi);
  }
  const auto policy = policy_with_breaks(config, extra);
  auto tally = tally_pieces(config, window, policy, config.n);
  check_budget(tally.nonconverged, config.trials, "run_global_count");

  std::vector<ResultRecord> out;
  auto global = base_record(config, "global", window, nlohmann::json::object());
  const auto g = counts_in(tally, window);
  fill(global, g, mean_and_stderr(g), tally.nonconverged);
  out.push_back(std::move(global));
  for (const auto& iv : config.intervals) {
    auto r = base_record(config, "interval", iv, {{"lo", iv.lo}, {"hi", iv.hi}});
    const auto v = iv.degenerate() ? std::vector<double>(g.size(), 0.0) : counts_in(tally, iv);
    fill(r, v, mean_and_stderr(v), tally.nonconverged);
    out.push_back(std::move(r));
  }
  const double ms = elapsed_ms(start);
  for (auto& r : out) r.wall_ms = ms;
  return out;
}

ResultRecord run_global_count(const ExperimentConfig& config) {
  auto c = config;
  c.intervals.clear();
  return run_interval_counts(c).front();
}

ResultRecord run_local_count(const ExperimentConfig& config, Interval interval) {
  validate(config);
  require_window(config, interval, "run_local_count");
  const auto start = Clock::now();
  auto r = base_record(config, "local", interval, {{"lo", interval.lo}, {"hi", interval.hi}});
  if (interval.degenerate()) {
    std::vector<double> zeros(config.trials, 0.0);
    fill(r, zeros, {}, 0);
    r.wall_ms = elapsed_ms(start);
    return r;
  }
  const int hint = local_hint(config.n, interval, config.weight.hull());
  auto tally = tally_pieces(config, interval, config.grid, hint);
  check_budget(tally.nonconverged, config.trials, "run_local_count");
  const auto v = counts_in(tally, interval);
  fill(r, v, mean_and_stderr(v), tally.nonconverged);
  r.wall_ms = elapsed_ms(start);
  return r;
}

UniversalityReport compare_records(ResultRecord a, ResultRecord b, double z) {
  if (!(z > 0.0)) throw InvalidArgument("universality: z must be positive");
  UniversalityReport rep;
  rep.gap = a.estimate - b.estimate;
  rep.pooled_stderr = std::hypot(a.std_error, b.std_error);
  rep.z = z;
  rep.pass = std::abs(rep.gap) <= z * rep.pooled_stderr;
  rep.record_a = std::move(a);
  rep.record_b = std::move(b);
  return rep;
}

UniversalityReport universality_gap(const ExperimentConfig& a, const ExperimentConfig& b, CountScope scope,
                                    double z) {
  const auto wa = config::weight_to_json(a.weight);
  const auto wb = config::weight_to_json(b.weight);
  if (a.n != b.n) throw InvalidArgument("universality: configs differ in n");
  if (wa != wb) throw InvalidArgument("universality: configs differ in weight");
  if (a.intervals != b.intervals) throw InvalidArgument("universality: configs differ in intervals");
  if (a.damping != b.damping) throw InvalidArgument("universality: configs differ in damping");
  if (scope == CountScope::Global) return compare_records(run_global_count(a), run_global_count(b), z);
  if (a.intervals.empty()) throw InvalidArgument("universality: local scope needs an interval");
  return compare_records(run_local_count(a, a.intervals.front()), run_local_count(b, b.intervals.front()), z);
}

EdgeReport edge_profile(const ExperimentConfig& config, std::vector<double> eps, double margin) {
  validate(config);
  if (eps.empty()) throw InvalidArgument("edge: need at least one eps");
  if (!config.weight.single_interval()) throw InvalidArgument("edge: weight must have a single support interval");
  const auto hull = config.weight.hull();
  for (double e : eps) {
    if (!(e > 0.0) || !(2.0 * e < hull.width())) {
      throw InvalidArgument("edge: eps must be positive and smaller than half the support width");
    }
  }
  if (!(margin >= 0.0 && margin < 0.5)) throw InvalidArgument("edge: margin must lie in [0, 0.5)");
  const auto start = Clock::now();
  const Interval window = search_window(config, 0.5);
  std::vector<double> extra{hull.lo - margin, hull.hi + margin};
  for (double e : eps) {
    extra.push_back(hull.lo + e);
    extra.push_back(hull.hi - e);
  }
  const auto policy = policy_with_breaks(config, extra);
  auto tally = tally_pieces(config, window, policy, config.n);
  check_budget(tally.nonconverged, config.trials, "edge");

  const auto total = counts_in(tally, window);
  EdgeReport rep;
  rep.eps = eps;
  rep.total = base_record(config, "edge_total", window, {{"eps", eps}, {"margin", margin}});
  fill(rep.total, total, mean_and_stderr(total), tally.nonconverged);

  auto fraction = [&](const std::string& name, Interval inner, const nlohmann::json& params) {
    const auto kept = counts_in(tally, inner);
    std::vector<double> out(kept.size());
    for (std::size_t i = 0; i < kept.size(); ++i) out[i] = total[i] - kept[i];
    auto r = base_record(config, name, inner, params);
    fill(r, out, pooled_ratio(out, total), tally.nonconverged);
    return r;
  };
  for (double e : eps) {
    rep.band.push_back(fraction("edge_band", {hull.lo + e, hull.hi - e}, {{"eps", e}}));
  }
  rep.outside = fraction("edge_outside", {hull.lo - margin, hull.hi + margin}, {{"margin", margin}});
  const double ms = elapsed_ms(start);
  rep.total.wall_ms = ms;
  rep.outside.wall_ms = ms;
  for (auto& r : rep.band) r.wall_ms = ms;
  return rep;
}

ResultRecord edge_mass(const ExperimentConfig& config, double eps) {
  return edge_profile(config, {eps}).band.front();
}

PairCorrelationReport pair_correlation(const ExperimentConfig& config, double x0, double c) {
  validate(config);
  if (config.n < 1) throw InvalidArgument("paircorr: n must be >= 1");
  if (!(c > 0.0)) throw InvalidArgument("paircorr: width factor must be positive");
  const auto start = Clock::now();
  const double half = c / config.n;
  const Interval window{x0 - half, x0 + half};
  require_window(config, window, "paircorr");
  const int hint = local_hint(config.n, window, config.weight.hull());
  auto tally = tally_pieces(config, window, config.grid, hint);
  check_budget(tally.nonconverged, config.trials, "paircorr");
  const auto N = counts_in(tally, window);
  std::vector<double> fact(N.size()), two(N.size()), one(N.size());
  for (std::size_t i = 0; i < N.size(); ++i) {
    fact[i] = N[i] * (N[i] - 1.0);
    two[i] = N[i] >= 2.0 ? 1.0 : 0.0;
    one[i] = N[i] >= 1.0 ? 1.0 : 0.0;
  }
  const nlohmann::json params = {{"x0", x0}, {"c", c}};
  PairCorrelationReport rep;
  rep.factorial_moment = base_record(config, "paircorr_factorial", window, params);
  fill(rep.factorial_moment, fact, mean_and_stderr(fact), tally.nonconverged);
  rep.at_least_two = base_record(config, "paircorr_ge2", window, params);
  fill(rep.at_least_two, two, mean_and_stderr(two), tally.nonconverged);
  rep.at_least_one = base_record(config, "paircorr_ge1", window, params);
  fill(rep.at_least_one, one, mean_and_stderr(one), tally.nonconverged);
  const double ms = elapsed_ms(start);
  rep.factorial_moment.wall_ms = rep.at_least_two.wall_ms = rep.at_least_one.wall_ms = ms;
  return rep;
}

ResultRecord anticoncentration_check(const ExperimentConfig& config, double x0, double c, double threshold) {
  validate(config);
  if (config.n < 1) throw InvalidArgument("anticonc: n must be >= 1");
  if (!(c > 0.0)) throw InvalidArgument("anticonc: width factor must be positive");
  if (!(threshold >= 0.0)) throw InvalidArgument("anticonc: threshold must be >= 0");
  const auto start = Clock::now();
  const double half = c / config.n;
  const Interval window{x0 - half, x0 + half};
  require_window(config, window, "anticonc");
  constexpr std::size_t kPoints = 64;
  std::vector<double> xs(kPoints);
  for (std::size_t i = 0; i < kPoints; ++i) {
    xs[i] = window.lo + window.width() * static_cast<double>(i) / static_cast<double>(kPoints - 1);
  }

  TrialContext ctx(config);
  const unsigned workers = resolve_workers(config.workers);
  std::vector<std::vector<double>> buffers(workers), values(workers, std::vector<double>(kPoints));
  std::vector<double> hit(config.trials, 0.0);
  parallel_trials(config.trials, workers, [&](std::size_t t, unsigned w) {
    ctx.coefficients(t, buffers[w]);
    basis::eval_combo(ctx.table(), buffers[w], xs, values[w]);
    double m = 0.0;
    for (double v : values[w]) m = std::max(m, std::abs(v));
    hit[t] = m > threshold ? 1.0 : 0.0;
  });

  auto r = base_record(config, "anticonc", window, {{"x0", x0}, {"c", c}, {"threshold", threshold}});
  Stats s = mean_and_stderr(hit);
  // Frequency standard error sqrt(p(1-p)/T).
  s.std_error = std::sqrt(s.mean * (1.0 - s.mean) / static_cast<double>(hit.size()));
  fill(r, hit, s, 0);
  r.wall_ms = elapsed_ms(start);
  return r;
}

ResultRecord trig_baseline(int n, std::size_t trials, std::uint64_t seed, unsigned workers,
                           const roots::GridPolicy& grid) {
  if (n < 1) throw InvalidArgument("trig: n must be >= 1");
  if (trials < 1) throw InvalidArgument("trig: trials must be >= 1");
  const auto start = Clock::now();
  const auto dist = ensembles::CoefficientDistribution::gaussian();
  const unsigned nworkers = resolve_workers(workers);
  const Interval window{-std::numbers::pi, std::numbers::pi};
  std::vector<std::vector<double>> buffers(nworkers);
  std::vector<double> counts(trials, 0.0);
  std::vector<char> converged(trials, 0);

  parallel_trials(trials, nworkers, [&](std::size_t t, unsigned w) {
    auto& c = buffers[w];
    c.resize(2 * static_cast<std::size_t>(n));
    ensembles::sample_coeffs_into(dist, {seed, t}, c);
    // c[2k-2] multiplies cos kt, c[2k-1] multiplies sin kt, k = 1..n.
    roots::BatchFunction f = [&c, n](std::span<const double> xs, std::span<double> out) {
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const double ct = std::cos(xs[i]);
        const double two_c = 2.0 * ct;
        double y1 = 0.0, y2 = 0.0, z1 = 0.0, z2 = 0.0;
        for (int k = n; k >= 1; --k) {
          const double y = c[2 * k - 2] + two_c * y1 - y2;
          const double z = c[2 * k - 1] + two_c * z1 - z2;
          y2 = y1;
          y1 = y;
          z2 = z1;
          z1 = z;
        }
        out[i] = (y1 * ct - y2) + z1 * std::sin(xs[i]);
      }
    };
    auto rep = roots::count_real_roots(f, 2 * n, window, grid);
    converged[t] = rep.converged ? 1 : 0;
    counts[t] = static_cast<double>(rep.count);
  });

  std::size_t nonconverged = 0;
  std::vector<double> kept;
  kept.reserve(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    if (converged[t]) {
      kept.push_back(counts[t]);
    } else {
      ++nonconverged;
    }
  }
  check_budget(nonconverged, trials, "trig");

  ResultRecord r;
  r.experiment = "trig";
  r.interval = window;
  r.weight_kind = "trig";
  r.beta = std::numeric_limits<double>::quiet_NaN();
  r.gamma = std::numeric_limits<double>::quiet_NaN();
  r.dist = dist.name();
  r.n = n;
  r.seed = seed;
  r.fingerprint = config::fingerprint({{"experiment", "trig"},
                                       {"n", n},
                                       {"trials", trials},
                                       {"seed", seed},
                                       {"grid",
                                        {{"min_points", grid.min_points},
                                         {"points_per_degree", grid.points_per_degree},
                                         {"max_points", grid.max_points}}},
                                       {"schema_version", kSchemaVersion}});
  fill(r, kept, mean_and_stderr(kept), nonconverged);
  r.wall_ms = elapsed_ms(start);
  return r;
}

std::string csv_header() {
  return "experiment,weight,beta,gamma,dist,n,trials,interval_lo,interval_hi,estimate,stderr,seed,wall_ms,"
         "schema_version";
}

namespace {
std::string field(double v) { return std::isnan(v) ? std::string() : format_double(v); }
}  // namespace

std::string csv_row(const ResultRecord& r) {
  std::ostringstream os;
  os << r.experiment << ',' << r.weight_kind << ',' << field(r.beta) << ',' << field(r.gamma) << ',' << r.dist
     << ',' << r.n << ',' << r.trials << ',' << field(r.interval.lo) << ',' << field(r.interval.hi) << ','
     << field(r.estimate) << ',' << field(r.std_error) << ',' << r.seed << ',' << field(r.wall_ms) << ','
     << kSchemaVersion;
  return os.str();
}

void append_csv(const std::string& path, const std::vector<ResultRecord>& records) {
  std::error_code ec;
  const bool fresh = !std::filesystem::exists(path, ec) || std::filesystem::file_size(path, ec) == 0;
  std::ofstream out(path, std::ios::app | std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  if (fresh) out << csv_header() << '\n';
  for (const auto& r : records) out << csv_row(r) << '\n';
  if (!out) throw Error("failed writing " + path);
}

}  // namespace orthoroots::experiments
