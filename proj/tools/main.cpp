// orthoroots command-line driver. Talks to the library only through the C API.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "orthoroots/orthoroots.h"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumeric = 2;

struct CliError {
  int code;
  std::string message;
};

[[noreturn]] void config_error(const std::string& msg) { throw CliError{kExitConfig, msg}; }

void check(ortho_status s, const std::string& context) {
  if (s == ORTHO_OK) return;
  const std::string msg = context + ": " + ortho_last_error();
  if (s == ORTHO_NOT_CONVERGED) throw CliError{kExitNumeric, msg};
  if (s == ORTHO_INVALID_ARGUMENT || s == ORTHO_IO_ERROR) throw CliError{kExitConfig, msg};
  throw CliError{kExitNumeric, msg};
}

std::string take(char* s) {
  std::string out = s ? s : "";
  ortho_string_free(s);
  return out;
}

struct TableDeleter {
  void operator()(ortho_table* t) const { ortho_table_free(t); }
};
struct ResultsDeleter {
  void operator()(ortho_results* r) const { ortho_results_free(r); }
};
using TablePtr = std::unique_ptr<ortho_table, TableDeleter>;
using ResultsPtr = std::unique_ptr<ortho_results, ResultsDeleter>;

json read_json_file(const std::string& path, const char* flag) {
  std::ifstream in(path);
  if (!in) config_error(std::string(flag) + ": cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    config_error(std::string(flag) + ": '" + path + "' is not valid JSON: " + e.what());
  }
}

// Two-column "x,w" text or a JSON [[x,w],...] array.
json read_weight_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) config_error("--weight-file: cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '[') {
    try {
      return json::parse(text);
    } catch (const json::parse_error& e) {
      config_error("--weight-file: " + std::string(e.what()));
    }
  }
  json table = json::array();
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    double x, w;
    char comma;
    std::istringstream row(line);
    if (!(row >> x >> comma >> w) || comma != ',') {
      if (table.empty()) continue;  // header line
      config_error("--weight-file: cannot parse line '" + line + "'");
    }
    table.push_back({x, w});
  }
  return table;
}

std::pair<double, double> parse_pair(const std::string& text, const char* flag) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) config_error(std::string(flag) + ": expected lo,hi but got '" + text + "'");
  try {
    std::size_t used = 0;
    const double lo = std::stod(text.substr(0, comma), &used);
    const double hi = std::stod(text.substr(comma + 1));
    return {lo, hi};
  } catch (const std::exception&) {
    config_error(std::string(flag) + ": expected two numbers in '" + text + "'");
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) config_error("--out: cannot open '" + path + "' for writing");
  out << text;
}

// Options shared by every subcommand. Values stay unset unless given, so
// that the precedence defaults < --config < ORTHO_WORKERS < flags can be
// applied afterwards.
struct Flags {
  std::string config_path;
  std::string out;
  bool timing = false;

  std::optional<std::string> weight;
  std::optional<double> beta, gamma;
  std::optional<std::string> weight_file;
  std::optional<std::string> dist;
  std::optional<double> alpha;
  std::optional<long long> n;
  std::optional<long long> trials;
  std::vector<std::string> intervals;
  std::optional<std::uint64_t> seed;
  std::optional<long long> workers;
  std::optional<long long> min_points, points_per_degree, max_points;

  json params = json::object();  // subcommand parameters given as flags
};

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config_path, "JSON config or a previous run's sidecar");
  app->add_option("--out", f.out, "output file (stdout when absent)");
  app->add_flag("--timing", f.timing, "record wall-clock time (otherwise wall_ms is 0)");
  app->add_option("--weight", f.weight, "jacobi or custom")->check(CLI::IsMember({"jacobi", "custom"}));
  app->add_option("--beta", f.beta, "Jacobi exponent of (1-x)");
  app->add_option("--gamma", f.gamma, "Jacobi exponent of (1+x)");
  app->add_option("--weight-file", f.weight_file, "x,w samples of a piecewise-linear custom weight");
  app->add_option("--n", f.n, "degree");
  app->add_option("--seed", f.seed, "master seed");
  app->add_option("--workers", f.workers, "worker threads (0 = all cores)");
}

void add_trials(CLI::App* app, Flags& f) {
  app->add_option("--trials", f.trials, "number of trials");
  app->add_option("--min-points", f.min_points, "smallest grid per piece");
  app->add_option("--points-per-degree", f.points_per_degree, "grid points per unit of degree");
  app->add_option("--max-points", f.max_points, "largest grid per piece");
}

void add_monte_carlo(CLI::App* app, Flags& f) {
  add_trials(app, f);
  app->add_option("--dist", f.dist, "gaussian, rademacher, uniform or pareto")
      ->check(CLI::IsMember({"gaussian", "rademacher", "uniform", "pareto"}));
  app->add_option("--alpha", f.alpha, "pareto tail index in (2, 3)");
  app->add_option("--interval", f.intervals, "lo,hi (repeatable)")->allow_extra_args(false);
}

// Resolves the experiment config. A sidecar passed as --config also
// supplies the subcommand parameters.
json resolve(const Flags& f, const std::string& subcommand, json& params) {
  json cfg = json::object();
  if (!f.config_path.empty()) {
    json file = read_json_file(f.config_path, "--config");
    if (!file.is_object()) config_error("--config: expected a JSON object");
    if (file.contains("config") && file["config"].is_object()) {
      if (file.contains("subcommand") && file["subcommand"] != subcommand) {
        config_error("--config: sidecar was written by '" + file["subcommand"].get<std::string>() + "', not '" +
                     subcommand + "'");
      }
      if (file.contains("params") && file["params"].is_object()) params = file["params"];
      cfg = file["config"];
    } else {
      cfg = file;
    }
  }
  if (const char* env = std::getenv("ORTHO_WORKERS"); env && *env) {
    char* end = nullptr;
    const long long w = std::strtoll(env, &end, 10);
    if (*end != '\0' || w < 0) config_error(std::string("ORTHO_WORKERS: expected a non-negative integer, got '") + env + "'");
    cfg["workers"] = w;
  }

  if (f.weight || f.beta || f.gamma || f.weight_file) {
    json w = cfg.contains("weight") ? cfg["weight"] : json::object();
    const std::string kind = f.weight ? *f.weight : (f.weight_file ? "custom" : w.value("kind", "jacobi"));
    if (kind == "jacobi") {
      if (f.weight_file) config_error("--weight-file: only valid with --weight custom");
      json j = {{"kind", "jacobi"}, {"beta", 0.0}, {"gamma", 0.0}};
      if (w.value("kind", "") == "jacobi") {
        if (w.contains("beta")) j["beta"] = w["beta"];
        if (w.contains("gamma")) j["gamma"] = w["gamma"];
      }
      if (f.beta) j["beta"] = *f.beta;
      if (f.gamma) j["gamma"] = *f.gamma;
      cfg["weight"] = j;
    } else {
      if (f.beta || f.gamma) config_error("--beta/--gamma: only valid with --weight jacobi");
      json j = {{"kind", "custom"}};
      if (f.weight_file) {
        j["table"] = read_weight_table(*f.weight_file);
      } else if (w.value("kind", "") == "custom" && w.contains("table")) {
        j["table"] = w["table"];
      } else {
        config_error("--weight custom: needs --weight-file or a table in --config");
      }
      cfg["weight"] = j;
    }
  }
  if (f.dist || f.alpha) {
    json d = cfg.contains("dist") ? cfg["dist"] : json{{"dist", "gaussian"}};
    if (f.dist) {
      const bool same = d.value("dist", "") == *f.dist;
      d = {{"dist", *f.dist}};
      if (same && cfg["dist"].contains("alpha")) d["alpha"] = cfg["dist"]["alpha"];
    }
    if (f.alpha) {
      if (d.value("dist", "") != "pareto") config_error("--alpha: only valid with --dist pareto");
      d["alpha"] = *f.alpha;
      d.erase("eps");
    }
    cfg["dist"] = d;
  }
  if (f.n) {
    if (*f.n < 0) config_error("--n: must be >= 0 (got " + std::to_string(*f.n) + ")");
    cfg["n"] = *f.n;
  }
  if (f.trials) {
    if (*f.trials < 1) config_error("--trials: must be >= 1 (got " + std::to_string(*f.trials) + ")");
    cfg["trials"] = *f.trials;
  }
  if (!f.intervals.empty()) {
    json ivs = json::array();
    for (const auto& s : f.intervals) {
      const auto [lo, hi] = parse_pair(s, "--interval");
      if (!(lo <= hi)) config_error("--interval: need lo <= hi in '" + s + "'");
      ivs.push_back({lo, hi});
    }
    cfg["intervals"] = ivs;
  }
  if (f.seed) cfg["seed"] = *f.seed;
  if (f.workers) {
    if (*f.workers < 0) config_error("--workers: must be >= 0");
    cfg["workers"] = *f.workers;
  }
  auto grid_flag = [&](const std::optional<long long>& v, const char* key, const char* flag) {
    if (!v) return;
    if (*v < 1) config_error(std::string(flag) + ": must be positive");
    cfg["grid"][key] = *v;
  };
  grid_flag(f.min_points, "min_points", "--min-points");
  grid_flag(f.points_per_degree, "points_per_degree", "--points-per-degree");
  grid_flag(f.max_points, "max_points", "--max-points");

  for (const auto& [k, v] : f.params.items()) params[k] = v;

  char* resolved = nullptr;
  check(ortho_resolve_config(cfg.dump().c_str(), &resolved), "--config");
  return json::parse(take(resolved));
}

// Writes CSV (append to --out, or stdout) plus the sidecar, and echoes
// the resolved configuration to stderr.
void emit(const Flags& f, const std::string& subcommand, const json& resolved, const json& params,
          ortho_results* results) {
  if (!f.timing) ortho_results_clear_timing(results);
  bool header = true;
  if (!f.out.empty()) {
    std::ifstream probe(f.out, std::ios::binary | std::ios::ate);
    header = !probe || probe.tellg() == 0;
  }
  char* csv = nullptr;
  check(ortho_results_to_csv(results, header ? 1 : 0, &csv), "csv");
  const std::string text = take(csv);
  char* rj = nullptr;
  check(ortho_results_to_json(results, &rj), "results");
  const json rec = json::parse(take(rj));

  json fingerprints = json::array();
  for (const auto& r : rec["records"]) {
    fingerprints.push_back({{"experiment", r["experiment"]}, {"interval", r["interval"]}, {"fingerprint", r["fingerprint"]}});
  }
  json sidecar = {{"subcommand", subcommand},
                  {"config", resolved["config"]},
                  {"config_fingerprint", resolved["fingerprint"]},
                  {"params", params},
                  {"timing", f.timing},
                  {"records", fingerprints},
                  {"summary", rec["summary"]},
                  {"library_version", ortho_version()}};
  std::cerr << sidecar.dump(2) << '\n';

  if (f.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(f.out, std::ios::binary | std::ios::app);
    if (!out) config_error("--out: cannot open '" + f.out + "' for writing");
    out << text;
    write_text(f.out + ".json", sidecar.dump(2) + "\n");
  }
}

TablePtr make_table(const json& weight, int degree) {
  ortho_table* t = nullptr;
  check(ortho_table_create(weight.dump().c_str(), degree, &t), "--weight");
  return TablePtr(t);
}

ResultsPtr run(const char* kind, const json& config, const json& params) {
  ortho_results* r = nullptr;
  check(ortho_run_experiment(kind, config.dump().c_str(), params.dump().c_str(), &r), kind);
  return ResultsPtr(r);
}

void write_output(const Flags& f, const std::string& text) {
  if (f.out.empty()) {
    std::cout << text;
  } else {
    write_text(f.out, text);
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random orthonormal polynomial root statistics"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ortho_version()));

  Flags f;
  std::vector<double> at;
  double lo = -1.0, hi = 1.0;
  std::size_t grid_points = 200;
  std::string scope = "global";
  std::optional<std::string> dist_b;
  std::optional<double> alpha_b;
  std::optional<std::uint64_t> seed_b;
  double z = 3.0;
  std::vector<double> eps;
  std::optional<double> margin, x0, width, threshold, theta_lo, theta_hi;
  std::vector<double> hs;

  auto* basis = app.add_subcommand("basis", "recurrence table, or basis values with --at");
  add_common(basis, f);
  basis->add_option("--at", at, "evaluate p_0..p_n and p_k' at these points");

  auto* density = app.add_subcommand("density", "Kac-Rice intensity curve");
  add_common(density, f);
  density->add_option("--grid", grid_points, "number of abscissae")->check(CLI::PositiveNumber);
  density->add_option("--lo", lo, "left end (default -1)");
  density->add_option("--hi", hi, "right end (default 1)");

  auto* simulate = app.add_subcommand("simulate", "global count plus per-interval counts");
  add_common(simulate, f);
  add_monte_carlo(simulate, f);
  bool local = false;
  simulate->add_flag("--local", local, "short-interval count on the first --interval only");

  auto* univ = app.add_subcommand("universality", "compare two coefficient distributions");
  add_common(univ, f);
  add_monte_carlo(univ, f);
  univ->add_option("--dist-b", dist_b, "second distribution")
      ->check(CLI::IsMember({"gaussian", "rademacher", "uniform", "pareto"}));
  univ->add_option("--alpha-b", alpha_b, "pareto tail index of the second distribution");
  univ->add_option("--seed-b", seed_b, "seed of the second run (default seed + 1)");
  univ->add_option("--scope", scope, "global or local")->check(CLI::IsMember({"global", "local"}));
  univ->add_option("--z", z, "verdict threshold in pooled standard errors")->check(CLI::PositiveNumber);

  auto* edge = app.add_subcommand("edge", "fraction of real roots near and beyond the support ends");
  add_common(edge, f);
  add_monte_carlo(edge, f);
  edge->add_option("--eps", eps, "edge band widths (repeatable)");
  edge->add_option("--margin", margin, "exterior margin (default 0.05)");

  auto* pair = app.add_subcommand("paircorr", "E[N(N-1)] and P(N>=2) on [x0-c/n, x0+c/n]");
  add_common(pair, f);
  add_monte_carlo(pair, f);
  pair->add_option("--x0", x0, "window centre");
  pair->add_option("--c", width, "window half-width times n");

  auto* anti = app.add_subcommand("anticonc", "frequency of max|F| above a threshold on a short window");
  add_common(anti, f);
  add_monte_carlo(anti, f);
  anti->add_option("--x0", x0, "window centre");
  anti->add_option("--c", width, "window half-width times n");
  anti->add_option("--threshold", threshold, "threshold (default 1e-9)");

  auto* trig = app.add_subcommand("trig", "zeros of a Gaussian trigonometric polynomial on [-pi, pi]");
  add_common(trig, f);
  add_trials(trig, f);

  auto* cw = app.add_subcommand("checkweight", "regularity conditions of a weight on [-1, 1]");
  add_common(cw, f);
  cw->add_option("--theta-lo", theta_lo, "theta window start (default 0.1)");
  cw->add_option("--theta-hi", theta_hi, "theta window end (default 3.0)");
  cw->add_option("--step", hs, "decreasing step sizes h (repeatable)");

  auto* st = app.add_subcommand("selftest", "run the invariant suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    json params = json::object();
    if (*st) {
      char* out = nullptr;
      check(ortho_selftest(&out), "selftest");
      const json rep = json::parse(take(out));
      for (const auto& c : rep["checks"]) {
        std::printf("%s  %s: %.6g (%s %.6g)\n", c["pass"].get<bool>() ? "PASS" : "FAIL",
                    c["name"].get<std::string>().c_str(), c["value"].get<double>(),
                    c["upper"].get<bool>() ? "<=" : ">=", c["bound"].get<double>());
      }
      return rep["pass"].get<bool>() ? kExitOk : kExitNumeric;
    }

    if (*basis) {
      const json cfg = resolve(f, "basis", params)["config"];
      const int n = cfg["n"].get<int>();
      auto table = make_table(cfg["weight"], n);
      std::ostringstream os;
      if (at.empty()) {
        char* tj = nullptr;
        check(ortho_table_to_json(table.get(), &tj), "basis");
        const json t = json::parse(take(tj));
        os << "k,a,b,p0\n";
        for (int k = 0; k < n; ++k) {
          os << k << ',' << fmt(t["a"][k].get<double>()) << ',' << fmt(t["b"][k].get<double>()) << ','
             << fmt(t["p0"].get<double>()) << '\n';
        }
        if (!f.out.empty()) write_text(f.out + ".json", t.dump(2) + "\n");
      } else {
        os << "x,k,p,dp\n";
        std::vector<double> v(static_cast<std::size_t>(n) + 1), d(static_cast<std::size_t>(n) + 1);
        for (double x : at) {
          check(ortho_eval_basis(table.get(), x, n, v.data(), d.data()), "--at");
          for (int k = 0; k <= n; ++k) os << fmt(x) << ',' << k << ',' << fmt(v[k]) << ',' << fmt(d[k]) << '\n';
        }
      }
      write_output(f, os.str());
      return kExitOk;
    }

    if (*density) {
      const json cfg = resolve(f, "density", params)["config"];
      const int n = cfg["n"].get<int>();
      if (n < 1) config_error("--n: density needs n >= 1");
      auto table = make_table(cfg["weight"], n);
      char* cj = nullptr;
      check(ortho_intensity_curve(table.get(), n, lo, hi, grid_points, &cj), "density");
      const json curve = json::parse(take(cj));
      std::ostringstream os;
      os << "x,rho,rho_over_n,limit_density\n";
      for (std::size_t i = 0; i < curve["x"].size(); ++i) {
        const double x = curve["x"][i].get<double>();
        const double rho = curve["rho"][i].get<double>();
        double lim = 0.0;
        check(ortho_limit_density(x, &lim), "density");
        os << fmt(x) << ',' << fmt(rho) << ',' << fmt(rho / n) << ',' << fmt(lim) << '\n';
      }
      write_output(f, os.str());
      return kExitOk;
    }

    if (*cw) {
      const json cfg = resolve(f, "checkweight", params)["config"];
      json p = json::object();
      if (theta_lo || theta_hi) p["theta_window"] = {theta_lo.value_or(0.1), theta_hi.value_or(3.0)};
      if (!hs.empty()) p["h"] = hs;
      char* out = nullptr;
      check(ortho_check_weight(cfg["weight"].dump().c_str(), p.dump().c_str(), &out), "checkweight");
      write_output(f, json::parse(take(out)).dump(2) + "\n");
      return kExitOk;
    }

    if (*simulate) {
      if (local) f.params["local"] = true;
      const json resolved = resolve(f, "simulate", params);
      const bool is_local = params.value("local", false);
      auto r = run(is_local ? "local" : "simulate", resolved["config"], json::object());
      emit(f, "simulate", resolved, params, r.get());
      return kExitOk;
    }

    if (*univ) {
      if (dist_b) f.params["dist_b"] = *dist_b;
      if (alpha_b) f.params["alpha_b"] = *alpha_b;
      if (seed_b) f.params["seed_b"] = *seed_b;
      if (univ->count("--scope")) f.params["scope"] = scope;
      if (univ->count("--z")) f.params["z"] = z;
      const json resolved = resolve(f, "universality", params);
      const json a = resolved["config"];
      json b = a;
      if (!params.contains("dist_b")) config_error("--dist-b: required");
      b["dist"] = {{"dist", params["dist_b"]}};
      if (params.contains("alpha_b")) {
        if (params["dist_b"] != "pareto") config_error("--alpha-b: only valid with --dist-b pareto");
        b["dist"]["alpha"] = params["alpha_b"];
      }
      b["seed"] = params.contains("seed_b") ? params["seed_b"].get<std::uint64_t>() : a["seed"].get<std::uint64_t>() + 1;
      const std::string sc = params.value("scope", "global");
      ortho_results* r = nullptr;
      check(ortho_run_universality(a.dump().c_str(), b.dump().c_str(), sc.c_str(), params.value("z", 3.0), &r),
            "universality");
      ResultsPtr results(r);
      emit(f, "universality", resolved, params, results.get());
      return kExitOk;
    }

    if (*edge) {
      if (!eps.empty()) f.params["eps"] = eps;
      if (margin) f.params["margin"] = *margin;
      const json resolved = resolve(f, "edge", params);
      auto r = run("edge", resolved["config"], params);
      emit(f, "edge", resolved, params, r.get());
      return kExitOk;
    }

    if (*pair || *anti) {
      if (x0) f.params["x0"] = *x0;
      if (width) f.params["c"] = *width;
      if (threshold) f.params["threshold"] = *threshold;
      const std::string name = *pair ? "paircorr" : "anticonc";
      const json resolved = resolve(f, name, params);
      auto r = run(name.c_str(), resolved["config"], params);
      emit(f, name, resolved, params, r.get());
      return kExitOk;
    }

    if (*trig) {
      const json resolved = resolve(f, "trig", params);
      auto r = run("trig", resolved["config"], params);
      emit(f, "trig", resolved, params, r.get());
      return kExitOk;
    }
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << '\n';
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}
