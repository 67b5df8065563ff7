#include "orthoroots/orthoroots.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "orthoroots/basis.hpp"
#include "orthoroots/config.hpp"
#include "orthoroots/ensembles.hpp"
#include "orthoroots/experiments.hpp"
#include "orthoroots/kacrice.hpp"
#include "orthoroots/measures.hpp"
#include "orthoroots/roots.hpp"
#include "orthoroots/selftest.hpp"

using namespace orthoroots;
using nlohmann::json;

struct ortho_table {
  basis::RecurrenceTable table;
  json weight;
};

struct ortho_results {
  std::vector<experiments::ResultRecord> records;
  json summary = json::object();
};

namespace {

thread_local std::string last_error;

ortho_status fail(ortho_status s, const std::string& msg) {
  last_error = msg;
  return s;
}

template <class F>
ortho_status guarded(F&& f) {
  try {
    f();
    return ORTHO_OK;
  } catch (const ConvergenceError& e) {
    return fail(ORTHO_NOT_CONVERGED, e.what());
  } catch (const InvalidArgument& e) {
    return fail(ORTHO_INVALID_ARGUMENT, e.what());
  } catch (const json::exception& e) {
    return fail(ORTHO_INVALID_ARGUMENT, std::string("JSON: ") + e.what());
  } catch (const std::bad_alloc&) {
    return fail(ORTHO_INTERNAL_ERROR, "out of memory");
  } catch (const Error& e) {
    return fail(ORTHO_INTERNAL_ERROR, e.what());
  } catch (const std::exception& e) {
    return fail(ORTHO_INTERNAL_ERROR, e.what());
  }
}

void need(const void* p, const char* what) {
  if (!p) throw InvalidArgument(std::string(what) + " must not be NULL");
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

json parse(const char* text, const char* what) {
  need(text, what);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string(what) + " is not valid JSON: " + e.what());
  }
}

std::span<const double> coeff_span(const double* c, std::size_t n) {
  need(c, "coeffs");
  if (n == 0) throw InvalidArgument("coefficient vector is empty");
  return {c, n};
}

roots::GridPolicy grid_from(const char* grid_json) {
  if (!grid_json) return {};
  json wrapped = {{"grid", parse(grid_json, "grid_json")}};
  return config::experiment_from_json(wrapped).grid;
}

json record_to_json(const experiments::ResultRecord& r) {
  auto num = [](double v) { return std::isnan(v) ? json(nullptr) : json(v); };
  return {{"experiment", r.experiment},
          {"interval", {r.interval.lo, r.interval.hi}},
          {"estimate", r.estimate},
          {"stderr", r.std_error},
          {"trials", r.trials},
          {"nonconverged", r.nonconverged},
          {"fingerprint", r.fingerprint},
          {"wall_ms", r.wall_ms},
          {"weight", r.weight_kind},
          {"beta", num(r.beta)},
          {"gamma", num(r.gamma)},
          {"dist", r.dist},
          {"n", r.n},
          {"seed", r.seed},
          {"schema_version", experiments::kSchemaVersion}};
}

double param(const json& p, const char* key, double fallback) {
  return p.contains(key) ? p.at(key).get<double>() : fallback;
}

}  // namespace

extern "C" {

const char* ortho_version(void) { return "0.1.0"; }

const char* ortho_last_error(void) { return last_error.c_str(); }

void ortho_string_free(char* s) { std::free(s); }

ortho_status ortho_table_create(const char* weight_json, int degree, ortho_table** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    if (degree < 0) throw InvalidArgument("degree must be >= 0");
    const auto wj = parse(weight_json, "weight_json");
    const auto weight = config::weight_from_json(wj);
    *out = new ortho_table{basis::table_for_weight(weight, degree), config::weight_to_json(weight)};
  });
}

void ortho_table_free(ortho_table* t) { delete t; }

int ortho_table_degree(const ortho_table* t) { return t ? t->table.degree() : -1; }

ortho_status ortho_table_to_json(const ortho_table* t, char** out_json) {
  return guarded([&] {
    need(t, "table");
    need(out_json, "out_json");
    *out_json = dup(config::table_to_json(t->table, t->weight).dump());
  });
}

ortho_status ortho_eval_basis(const ortho_table* t, double x, int n, double* values, double* d1) {
  return guarded([&] {
    need(t, "table");
    need(values, "values");
    const auto ev = basis::eval_basis(t->table, x, n, d1 ? 1 : 0);
    std::copy(ev.values.begin(), ev.values.end(), values);
    if (d1) std::copy(ev.d1.begin(), ev.d1.end(), d1);
  });
}

ortho_status ortho_eval_combo(const ortho_table* t, const double* coeffs, size_t ncoeffs, const double* xs,
                              size_t npoints, double* out) {
  return guarded([&] {
    need(t, "table");
    need(out, "out");
    if (npoints > 0) need(xs, "xs");
    basis::eval_combo(t->table, coeff_span(coeffs, ncoeffs), {xs, npoints}, {out, npoints});
  });
}

ortho_status ortho_kernels(const ortho_table* t, double x, int n, double* A, double* B, double* C) {
  return guarded([&] {
    need(t, "table");
    need(A, "A");
    need(B, "B");
    need(C, "C");
    const auto kv = basis::kernels(t->table, x, n);
    *A = kv.A;
    *B = kv.B;
    *C = kv.C;
  });
}

ortho_status ortho_intensity(const ortho_table* t, int n, double x, double* rho) {
  return guarded([&] {
    need(t, "table");
    need(rho, "rho");
    *rho = kacrice::gaussian_intensity(t->table, n, x);
  });
}

ortho_status ortho_intensity_curve(const ortho_table* t, int n, double lo, double hi, size_t points,
                                   char** out_json) {
  return guarded([&] {
    need(t, "table");
    need(out_json, "out_json");
    const auto c = kacrice::intensity_curve(t->table, n, {lo, hi}, points);
    *out_json = dup(json{{"n", c.n}, {"x", c.xs}, {"rho", c.rho}}.dump());
  });
}

ortho_status ortho_expected_count(const ortho_table* t, int n, double lo, double hi, double tol, double* out) {
  return guarded([&] {
    need(t, "table");
    need(out, "out");
    *out = kacrice::expected_count(t->table, n, {lo, hi}, tol);
  });
}

ortho_status ortho_qualls_exact(int n, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = kacrice::qualls_exact(n);
  });
}

ortho_status ortho_limit_density(double x, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = kacrice::limit_density(x);
  });
}

ortho_status ortho_equilibrium_mass(double a, double b, double* mass, int* clamped) {
  return guarded([&] {
    need(mass, "mass");
    const auto m = measures::equilibrium_mass(a, b);
    *mass = m.value;
    if (clamped) *clamped = m.clamped ? 1 : 0;
  });
}

ortho_status ortho_log_potential(double x, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = measures::log_potential(x);
  });
}

ortho_status ortho_count_roots(const ortho_table* t, const double* coeffs, size_t ncoeffs, double lo, double hi,
                               const char* grid_json, size_t* count, int* converged) {
  return guarded([&] {
    need(t, "table");
    need(count, "count");
    const auto c = coeff_span(coeffs, ncoeffs);
    const auto rep = roots::count_real_roots(roots::combo_function(t->table, c), static_cast<int>(ncoeffs - 1),
                                             {lo, hi}, grid_from(grid_json));
    *count = rep.count;
    if (converged) *converged = rep.converged ? 1 : 0;
  });
}

ortho_status ortho_locate_roots(const ortho_table* t, const double* coeffs, size_t ncoeffs, double lo, double hi,
                                double tol, char** out_json) {
  return guarded([&] {
    need(t, "table");
    need(out_json, "out_json");
    const auto c = coeff_span(coeffs, ncoeffs);
    auto f = [&](double x) { return basis::eval_combo(t->table, c, x); };
    const auto r = roots::locate_roots(f, static_cast<int>(ncoeffs - 1), {lo, hi}, tol > 0.0 ? tol : -1.0);
    *out_json = dup(json{{"roots", r.roots}, {"bracket_width", r.bracket_width}}.dump());
  });
}

ortho_status ortho_comrade_roots(const ortho_table* t, const double* coeffs, size_t ncoeffs, char** out_json) {
  return guarded([&] {
    need(t, "table");
    need(out_json, "out_json");
    const auto r = roots::comrade_roots(coeff_span(coeffs, ncoeffs), t->table);
    *out_json = dup(json{{"roots", r.roots}}.dump());
  });
}

ortho_status ortho_sample_coeffs(const char* dist_json, int n, uint64_t seed, uint64_t trial, double* out) {
  return guarded([&] {
    need(out, "out");
    if (n < 0) throw InvalidArgument("n must be >= 0");
    const auto dist = config::dist_from_json(parse(dist_json, "dist_json"));
    const auto s = ensembles::sample_coeffs(dist, n, {seed, trial});
    std::copy(s.coeffs.begin(), s.coeffs.end(), out);
  });
}

ortho_status ortho_moment_report(const char* dist_json, size_t m, uint64_t seed, char** out_json) {
  return guarded([&] {
    need(out_json, "out_json");
    const auto dist = config::dist_from_json(parse(dist_json, "dist_json"));
    const auto r = ensembles::moment_report(dist, m, seed);
    *out_json = dup(json{{"dist", dist.name()},
                         {"samples", r.samples},
                         {"mean", r.mean},
                         {"var", r.var},
                         {"abs_moment_2pe", r.abs_moment_2pe},
                         {"declared_moment_2pe", dist.moment_2pe()},
                         {"eps", dist.epsilon()},
                         {"skewness", r.skewness},
                         {"skewness_stderr", r.skewness_stderr}}
                        .dump());
  });
}

ortho_status ortho_run_experiment(const char* kind, const char* config_json, const char* params_json,
                                  ortho_results** out) {
  return guarded([&] {
    need(kind, "kind");
    need(out, "out");
    *out = nullptr;
    const auto cfg = config::experiment_from_json(parse(config_json, "config_json"));
    const json p = params_json ? parse(params_json, "params_json") : json::object();
    if (!p.is_object()) throw InvalidArgument("params_json must be an object");
    auto res = std::make_unique<ortho_results>();
    const std::string k = kind;
    if (k == "simulate") {
      res->records = experiments::run_interval_counts(cfg);
    } else if (k == "local") {
      if (cfg.intervals.empty()) throw InvalidArgument("local: config needs an interval");
      res->records.push_back(experiments::run_local_count(cfg, cfg.intervals.front()));
    } else if (k == "edge") {
      std::vector<double> eps = p.contains("eps") ? p["eps"].get<std::vector<double>>() : std::vector<double>{0.2, 0.1, 0.05};
      auto rep = experiments::edge_profile(cfg, eps, param(p, "margin", 0.05));
      res->records.push_back(rep.total);
      res->records.push_back(rep.outside);
      for (auto& r : rep.band) res->records.push_back(r);
      json bands = json::array();
      for (std::size_t i = 0; i < eps.size(); ++i) {
        bands.push_back({{"eps", eps[i]},
                         {"fraction", rep.band[i].estimate},
                         {"stderr", rep.band[i].std_error},
                         {"equilibrium", 1.0 - measures::equilibrium_mass(-1.0 + eps[i], 1.0 - eps[i]).value}});
      }
      res->summary = {{"bands", bands}, {"outside", rep.outside.estimate}};
    } else if (k == "paircorr") {
      auto rep = experiments::pair_correlation(cfg, param(p, "x0", 0.0), param(p, "c", 1.0));
      res->records = {rep.factorial_moment, rep.at_least_two, rep.at_least_one};
    } else if (k == "anticonc") {
      res->records.push_back(experiments::anticoncentration_check(cfg, param(p, "x0", 0.0), param(p, "c", 1.0),
                                                                  param(p, "threshold", 1e-9)));
    } else if (k == "trig") {
      res->records.push_back(experiments::trig_baseline(cfg.n, cfg.trials, cfg.seed, cfg.workers, cfg.grid));
      res->summary = {{"qualls_exact", kacrice::qualls_exact(cfg.n)}};
    } else {
      throw InvalidArgument("unknown experiment kind '" + k + "'");
    }
    *out = res.release();
  });
}

ortho_status ortho_run_universality(const char* config_a_json, const char* config_b_json, const char* scope,
                                    double z, ortho_results** out) {
  return guarded([&] {
    need(out, "out");
    need(scope, "scope");
    *out = nullptr;
    const auto a = config::experiment_from_json(parse(config_a_json, "config_a_json"));
    const auto b = config::experiment_from_json(parse(config_b_json, "config_b_json"));
    const std::string s = scope;
    if (s != "global" && s != "local") throw InvalidArgument("scope must be 'global' or 'local'");
    const auto rep = experiments::universality_gap(
        a, b, s == "global" ? experiments::CountScope::Global : experiments::CountScope::Local, z);
    auto res = std::make_unique<ortho_results>();
    res->records = {rep.record_a, rep.record_b};
    res->summary = {{"gap", rep.gap}, {"pooled_stderr", rep.pooled_stderr}, {"z", rep.z}, {"pass", rep.pass}};
    *out = res.release();
  });
}

void ortho_results_free(ortho_results* r) { delete r; }

size_t ortho_results_count(const ortho_results* r) { return r ? r->records.size() : 0; }

ortho_status ortho_results_get(const ortho_results* r, size_t i, double* estimate, double* std_error,
                               size_t* trials) {
  return guarded([&] {
    need(r, "results");
    if (i >= r->records.size()) throw InvalidArgument("record index out of range");
    const auto& rec = r->records[i];
    if (estimate) *estimate = rec.estimate;
    if (std_error) *std_error = rec.std_error;
    if (trials) *trials = rec.trials;
  });
}

ortho_status ortho_results_to_json(const ortho_results* r, char** out_json) {
  return guarded([&] {
    need(r, "results");
    need(out_json, "out_json");
    json recs = json::array();
    for (const auto& rec : r->records) recs.push_back(record_to_json(rec));
    *out_json = dup(json{{"records", recs}, {"summary", r->summary}}.dump());
  });
}

void ortho_results_clear_timing(ortho_results* r) {
  if (!r) return;
  for (auto& rec : r->records) rec.wall_ms = 0.0;
}

ortho_status ortho_results_write_csv(const ortho_results* r, const char* path) {
  try {
    need(r, "results");
    need(path, "path");
    experiments::append_csv(path, r->records);
    return ORTHO_OK;
  } catch (const InvalidArgument& e) {
    return fail(ORTHO_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(ORTHO_IO_ERROR, e.what());
  }
}

ortho_status ortho_results_to_csv(const ortho_results* r, int with_header, char** out_csv) {
  return guarded([&] {
    need(r, "results");
    need(out_csv, "out_csv");
    std::string text;
    if (with_header) text += experiments::csv_header() + "\n";
    for (const auto& rec : r->records) text += experiments::csv_row(rec) + "\n";
    *out_csv = dup(text);
  });
}

ortho_status ortho_resolve_config(const char* config_json, char** out_json) {
  return guarded([&] {
    need(out_json, "out_json");
    const auto cfg = config::experiment_from_json(parse(config_json, "config_json"));
    const auto canonical = config::experiment_to_json(cfg);
    *out_json =
        dup(json{{"config", canonical}, {"fingerprint", config::fingerprint(config::experiment_to_json(cfg, false))}}
                .dump());
  });
}

ortho_status ortho_check_weight(const char* weight_json, const char* params_json, char** out_json) {
  return guarded([&] {
    need(out_json, "out_json");
    const auto weight = config::weight_from_json(parse(weight_json, "weight_json"));
    const json p = params_json ? parse(params_json, "params_json") : json::object();
    Interval window{0.1, 3.0};
    if (p.contains("theta_window")) window = {p["theta_window"].at(0).get<double>(), p["theta_window"].at(1).get<double>()};
    std::vector<double> h = p.contains("h") ? p["h"].get<std::vector<double>>()
                                            : std::vector<double>{0.1, 0.05, 0.025, 0.0125, 0.00625};
    const auto rep = measures::check_weight_conditions(weight, window, h);
    auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
    json circle = json::array();
    for (double v : rep.circle_estimates) circle.push_back(num(v));
    json ratios = json::array();
    for (double v : rep.lipschitz_ratios) ratios.push_back(num(v));
    *out_json = dup(json{{"circle_integral", num(rep.circle_integral)},
                         {"circle_estimates", circle},
                         {"circle_finite", rep.circle_finite},
                         {"theta_window", {rep.theta_window.lo, rep.theta_window.hi}},
                         {"h", rep.h_values},
                         {"lipschitz_ratios", ratios},
                         {"lipschitz_bounded", rep.lipschitz_bounded}}
                        .dump());
  });
}

ortho_status ortho_selftest(char** out_json) {
  return guarded([&] {
    need(out_json, "out_json");
    json checks = json::array();
    bool all = true;
    for (const auto& c : selftest::run_all()) {
      checks.push_back({{"name", c.name}, {"value", c.value}, {"bound", c.bound}, {"upper", c.upper}, {"pass", c.pass}});
      all = all && c.pass;
    }
    *out_json = dup(json{{"checks", checks}, {"pass", all}}.dump());
  });
}

}  // extern "C"
