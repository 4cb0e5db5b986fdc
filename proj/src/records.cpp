#include "qlow/records.hpp"

#include "qlow/error.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>

namespace qlow {

namespace {

// Family and solver tags are generated internally, but quote anyway so a
// stray comma can never shift columns.
std::string csv_field(const std::string &s) {
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

} // namespace

std::string format_number(double v) {
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    if (v == 0.0)
        v = 0.0; // drop the sign of negative zero
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

void write_csv(std::ostream &out, const std::vector<ExperimentRecord> &records) {
    out << kCsvHeader << '\n';
    for (const auto &r : records) {
        out << csv_field(r.experiment) << ',' << csv_field(r.family) << ',' << r.n << ','
            << r.p << ',' << (r.j2 ? format_number(*r.j2) : "") << ',' << r.seed << ','
            << csv_field(r.solver) << ',' << csv_field(r.objective) << ','
            << format_number(r.value) << ',' << format_number(r.ground_prob) << ','
            << (r.approx_ratio ? format_number(*r.approx_ratio) : "") << ','
            << format_number(std::round(r.wall_ms * 1000.0) / 1000.0) << '\n';
    }
}

void write_output(const std::filesystem::path &dir, const ExperimentOutput &output,
                  const nlohmann::json &manifest) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw ConfigError("cannot create output directory " + dir.string() + ": " +
                          ec.message());
    nlohmann::json sidecar = {{"experiment", output.id},
                              {"manifest", manifest},
                              {"summary", output.summary},
                              {"tables", nlohmann::json::object()}};
    for (const auto &table : output.tables) {
        const auto path = dir / (table.name + ".csv");
        std::ofstream csv(path);
        if (!csv)
            throw ConfigError("cannot write " + path.string());
        write_csv(csv, table.records);
        nlohmann::json details = nlohmann::json::array();
        for (const auto &r : table.records)
            details.push_back(r.details);
        sidecar["tables"][table.name] = details;
    }
    const auto path = dir / (output.id + ".json");
    std::ofstream json(path);
    if (!json)
        throw ConfigError("cannot write " + path.string());
    json << sidecar.dump(2) << '\n';
}

} // namespace qlow
