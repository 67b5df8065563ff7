#include "orthoroots/config.hpp"

#include <cstdio>
#include <initializer_list>
#include <set>

namespace orthoroots::config {

namespace {

void reject_unknown(const json& j, std::initializer_list<const char*> known, const char* where) {
  if (!j.is_object()) throw InvalidArgument(std::string(where) + ": expected a JSON object");
  std::set<std::string> allowed(known.begin(), known.end());
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key())) {
      throw InvalidArgument(std::string(where) + ": unknown key '" + item.key() + "'");
    }
  }
}

template <class T>
T get_as(const json& j, const char* key, const char* where) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InvalidArgument(std::string(where) + ": key '" + key + "' is missing or has the wrong type");
  }
}

Interval interval_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw InvalidArgument("interval must be a [lo, hi] pair of numbers");
  }
  Interval iv{j[0].get<double>(), j[1].get<double>()};
  if (iv.lo > iv.hi) throw InvalidArgument("interval must satisfy lo <= hi");
  return iv;
}

}  // namespace

measures::WeightSpec weight_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind")) throw InvalidArgument("weight: expected an object with 'kind'");
  const auto kind = get_as<std::string>(j, "kind", "weight");
  if (kind == "jacobi") {
    reject_unknown(j, {"kind", "beta", "gamma"}, "weight");
    const double beta = j.contains("beta") ? get_as<double>(j, "beta", "weight") : 0.0;
    const double gamma = j.contains("gamma") ? get_as<double>(j, "gamma", "weight") : 0.0;
    return measures::WeightSpec::jacobi(beta, gamma);
  }
  if (kind == "custom") {
    reject_unknown(j, {"kind", "table"}, "weight");
    if (!j.contains("table") || !j["table"].is_array()) {
      throw InvalidArgument("weight: custom weight needs a 'table' of [x, w] samples");
    }
    std::vector<std::pair<double, double>> samples;
    for (const auto& row : j["table"]) {
      if (!row.is_array() || row.size() != 2 || !row[0].is_number() || !row[1].is_number()) {
        throw InvalidArgument("weight: each table entry must be an [x, w] pair of numbers");
      }
      samples.emplace_back(row[0].get<double>(), row[1].get<double>());
    }
    return measures::WeightSpec::piecewise_linear(std::move(samples));
  }
  throw InvalidArgument("weight: unknown kind '" + kind + "' (expected jacobi or custom)");
}

json weight_to_json(const measures::WeightSpec& w) {
  if (const auto& jp = w.jacobi_params()) return {{"kind", "jacobi"}, {"beta", jp->beta}, {"gamma", jp->gamma}};
  json table = json::array();
  for (const auto& [x, v] : w.samples()) table.push_back({x, v});
  json out = {{"kind", "custom"}, {"table", table}};
  if (w.samples().empty()) out["label"] = w.label();
  return out;
}

ensembles::CoefficientDistribution dist_from_json(const json& j) {
  reject_unknown(j, {"dist", "alpha", "eps"}, "dist");
  const auto name = get_as<std::string>(j, "dist", "dist");
  if (name == "pareto" || name == "pareto_sym") {
    const double alpha = j.contains("alpha") ? get_as<double>(j, "alpha", "dist") : 2.5;
    const double eps = j.contains("eps") ? get_as<double>(j, "eps", "dist") : -1.0;
    return ensembles::CoefficientDistribution::pareto_sym(alpha, eps);
  }
  if (j.contains("alpha") || j.contains("eps")) {
    throw InvalidArgument("dist: 'alpha'/'eps' only apply to the pareto distribution");
  }
  return ensembles::CoefficientDistribution::from_name(name);
}

json dist_to_json(const ensembles::CoefficientDistribution& d) {
  switch (d.kind()) {
    case ensembles::DistKind::Gaussian: return {{"dist", "gaussian"}};
    case ensembles::DistKind::Rademacher: return {{"dist", "rademacher"}};
    case ensembles::DistKind::UniformSym: return {{"dist", "uniform"}};
    case ensembles::DistKind::ParetoSym: return {{"dist", "pareto"}, {"alpha", d.alpha()}, {"eps", d.epsilon()}};
  }
  return {};
}

experiments::ExperimentConfig experiment_from_json(const json& j) {
  reject_unknown(j, {"weight", "dist", "n", "trials", "intervals", "seed", "workers", "grid", "damping"},
                 "experiment");
  experiments::ExperimentConfig c;
  if (j.contains("weight")) c.weight = weight_from_json(j["weight"]);
  if (j.contains("dist")) c.dist = dist_from_json(j["dist"]);
  if (j.contains("n")) {
    const auto n = get_as<long long>(j, "n", "experiment");
    if (n < 0) throw InvalidArgument("experiment: n must be >= 0");
    c.n = static_cast<int>(n);
  }
  if (j.contains("trials")) {
    const auto t = get_as<long long>(j, "trials", "experiment");
    if (t < 1) throw InvalidArgument("experiment: trials must be >= 1");
    c.trials = static_cast<std::size_t>(t);
  }
  if (j.contains("intervals")) {
    if (!j["intervals"].is_array()) throw InvalidArgument("experiment: intervals must be an array");
    for (const auto& iv : j["intervals"]) c.intervals.push_back(interval_from_json(iv));
  }
  if (j.contains("seed")) c.seed = get_as<std::uint64_t>(j, "seed", "experiment");
  if (j.contains("workers")) {
    const auto w = get_as<long long>(j, "workers", "experiment");
    if (w < 0) throw InvalidArgument("experiment: workers must be >= 0");
    c.workers = static_cast<unsigned>(w);
  }
  if (j.contains("grid")) {
    const auto& g = j["grid"];
    reject_unknown(g, {"min_points", "points_per_degree", "max_points"}, "grid");
    if (g.contains("min_points")) c.grid.min_points = get_as<std::size_t>(g, "min_points", "grid");
    if (g.contains("points_per_degree")) c.grid.points_per_degree = get_as<std::size_t>(g, "points_per_degree", "grid");
    if (g.contains("max_points")) c.grid.max_points = get_as<std::size_t>(g, "max_points", "grid");
    if (c.grid.min_points < 2) throw InvalidArgument("grid: min_points must be >= 2");
  }
  if (j.contains("damping")) {
    c.damping = get_as<std::vector<double>>(j, "damping", "experiment");
  }
  if (!c.damping.empty() && c.damping.size() != static_cast<std::size_t>(c.n) + 1) {
    throw InvalidArgument("experiment: damping must have n + 1 entries");
  }
  return c;
}

json experiment_to_json(const experiments::ExperimentConfig& c, bool with_workers) {
  json intervals = json::array();
  for (const auto& iv : c.intervals) intervals.push_back({iv.lo, iv.hi});
  json j = {
      {"weight", weight_to_json(c.weight)},
      {"dist", dist_to_json(c.dist)},
      {"n", c.n},
      {"trials", c.trials},
      {"intervals", intervals},
      {"seed", c.seed},
      {"grid",
       {{"min_points", c.grid.min_points},
        {"points_per_degree", c.grid.points_per_degree},
        {"max_points", c.grid.max_points}}},
  };
  if (!c.damping.empty()) j["damping"] = c.damping;
  if (with_workers) j["workers"] = c.workers;
  return j;
}

json table_to_json(const basis::RecurrenceTable& t, const json& weight) {
  return {
      {"weight", weight},
      {"N", t.degree()},
      {"p0", t.p0()},
      {"a", t.a_coeffs()},
      {"b", t.b_coeffs()},
      {"orthonormality_defect", std::isnan(t.orthonormality_defect()) ? json(nullptr) : json(t.orthonormality_defect())},
      {"defect_degree", t.defect_degree()},
      {"support", {t.support().lo, t.support().hi}},
  };
}

basis::RecurrenceTable table_from_json(const json& j) {
  reject_unknown(j, {"weight", "N", "p0", "a", "b", "orthonormality_defect", "defect_degree", "support"}, "table");
  const auto N = get_as<int>(j, "N", "table");
  auto a = get_as<std::vector<double>>(j, "a", "table");
  auto b = get_as<std::vector<double>>(j, "b", "table");
  if (a.size() != static_cast<std::size_t>(N) || b.size() != static_cast<std::size_t>(N)) {
    throw InvalidArgument("table: a and b must each have N entries");
  }
  Interval support{-1.0, 1.0};
  if (j.contains("support")) support = interval_from_json(j["support"]);
  std::string id = "custom";
  if (j.contains("weight") && j["weight"].is_object()) {
    try {
      id = weight_from_json(j["weight"]).label();
    } catch (const InvalidArgument&) {
      id = j["weight"].dump();
    }
  }
  basis::RecurrenceTable t(std::move(a), std::move(b), get_as<double>(j, "p0", "table"), id, support);
  if (j.contains("orthonormality_defect") && j["orthonormality_defect"].is_number()) {
    t.set_defect(j["orthonormality_defect"].get<double>(),
                 j.contains("defect_degree") ? j["defect_degree"].get<int>() : N);
  }
  return t;
}

std::string fingerprint(const json& j) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : j.dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace orthoroots::config
