#pragma once

#include "qlow/experiments.hpp"
#include "qlow/laplacians.hpp"
#include "qlow/objectives.hpp"
#include "qlow/optimize.hpp"
#include "qlow/problems.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qlow {

/// Checks `doc` against a JSON Schema using the keywords type, enum,
/// properties, required, additionalProperties, items, minItems, maxItems,
/// minimum, maximum, exclusiveMinimum, exclusiveMaximum, minLength and local
/// $ref. Throws ConfigError naming the first failing path, e.g.
/// "$.solver.search.resolution: 1 is below the minimum 2".
void validate_against_schema(const nlohmann::json &doc, const nlohmann::json &schema);

/// The schema shipped in schemas/manifest.schema.json.
const nlohmann::json &manifest_schema();

/// Parses and validates manifest text; `origin` prefixes error messages.
nlohmann::json parse_manifest(std::string_view text, const std::string &origin);
nlohmann::json load_manifest(const std::filesystem::path &path);

/// Ids with a pinned default manifest, sorted.
std::vector<std::string> reproduce_ids();
/// Validated default manifest for a reproduce id; empty when unknown.
std::optional<nlohmann::json> default_manifest(std::string_view id);

/// Builders from manifest sections. `seed` feeds random problem families.
DiagonalProblem build_problem(const nlohmann::json &node, std::uint64_t seed);
/// Hypercube when `node` is null.
Laplacian build_laplacian(const nlohmann::json *node, int n);
/// Mean objective when `node` is null.
Objective build_objective(const nlohmann::json *node);
SearchConfig build_search(const nlohmann::json *node, std::uint64_t seed);
RoundingConfig build_rounding(const nlohmann::json *node, std::uint64_t seed);
/// |+>^{(x)n} when `node` is null.
Statevector build_initial_state(const nlohmann::json *node, int n);

/// Runs the experiment a reproduce-style manifest names.
ExperimentOutput run_manifest_experiment(const nlohmann::json &manifest, std::uint64_t seed,
                                         int jobs);

} // namespace qlow
