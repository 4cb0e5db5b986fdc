#pragma once

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace qlow {

/// One CSV row. Optional fields are written as empty cells.
struct ExperimentRecord {
    std::string experiment;
    std::string family;
    int n = 0;
    int p = 0;
    std::optional<double> j2;
    std::uint64_t seed = 0;
    std::string solver;
    std::string objective;
    double value = 0.0;
    double ground_prob = 0.0;
    /// Empty when the problem is constant and the ratio is undefined.
    std::optional<double> approx_ratio;
    double wall_ms = 0.0;
    /// Found parameters and extra diagnostics; goes to the JSON sidecar.
    nlohmann::json details = nlohmann::json::object();
};

struct ResultTable {
    std::string name;
    std::vector<ExperimentRecord> records;
};

struct ExperimentOutput {
    std::string id;
    std::vector<ResultTable> tables;
    nlohmann::json summary = nlohmann::json::object();
};

inline constexpr const char *kCsvHeader =
    "experiment,family,n,p,j2,seed,solver,objective,value,ground_prob,approx_ratio,wall_ms";

/// Shortest round-trip decimal form, locale independent.
std::string format_number(double v);

void write_csv(std::ostream &out, const std::vector<ExperimentRecord> &records);

/// Writes <dir>/<table>.csv for every table and <dir>/<id>.json holding
/// the manifest, the summary and each record's details.
void write_output(const std::filesystem::path &dir, const ExperimentOutput &output,
                  const nlohmann::json &manifest);

} // namespace qlow
