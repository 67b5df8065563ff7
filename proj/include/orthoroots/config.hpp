#pragma once

#include <string>

#include "json.hpp"
#include "orthoroots/basis.hpp"
#include "orthoroots/ensembles.hpp"
#include "orthoroots/experiments.hpp"
#include "orthoroots/measures.hpp"

// JSON forms of the configuration types. Every reader rejects unknown keys
// with InvalidArgument naming the key.
namespace orthoroots::config {

using nlohmann::json;

/// {"kind":"jacobi","beta":b,"gamma":g} or {"kind":"custom","table":[[x,w],...]}.
measures::WeightSpec weight_from_json(const json& j);
json weight_to_json(const measures::WeightSpec& w);

/// {"dist":"gaussian"|"rademacher"|"uniform"|"pareto", "alpha":2.5, "eps":0.25}.
ensembles::CoefficientDistribution dist_from_json(const json& j);
json dist_to_json(const ensembles::CoefficientDistribution& d);

/// {"weight":{...}, "dist":{...}, "n":..., "trials":..., "intervals":[[lo,hi],...],
///  "seed":..., "workers":..., "grid":{"min_points","points_per_degree","max_points"},
///  "damping":[...]}. Missing keys keep their defaults.
experiments::ExperimentConfig experiment_from_json(const json& j);
/// Canonical form; `with_workers` = false drops the worker count, which never
/// affects results.
json experiment_to_json(const experiments::ExperimentConfig& c, bool with_workers = true);

/// {weight, N, p0, a[], b[], orthonormality_defect, defect_degree, support}.
json table_to_json(const basis::RecurrenceTable& t, const json& weight);
basis::RecurrenceTable table_from_json(const json& j);

/// 16 hex digits of FNV-1a over the compact dump of `j`.
std::string fingerprint(const json& j);

}  // namespace orthoroots::config
