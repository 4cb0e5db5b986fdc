#include "qlow/cli.hpp"
#include "qlow/statevector.hpp"

#include <catch_amalgamated.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace qlow;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace {

namespace fs = std::filesystem;

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

/// Scratch directory removed on scope exit.
class TempDir {
  public:
    TempDir() : path_(fs::temp_directory_path() / ("qlow_cli_" + std::to_string(counter_++))) {
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    TempDir(const TempDir &) = delete;
    TempDir &operator=(const TempDir &) = delete;

    std::string write(const std::string &name, const std::string &text) const {
        const auto file = path_ / name;
        std::ofstream(file) << text;
        return file.string();
    }
    const fs::path &path() const { return path_; }

  private:
    static inline int counter_ = 0;
    fs::path path_;
};

const char *kRampManifest = R"({
  "experiment": "solve",
  "problem": {"family": "hamming_ramp", "n": 4},
  "solver": {"p": 1, "search": {"resolution": 16, "top_k": 2}}
})";

} // namespace

TEST_CASE("solve reports the optimized schedule") {
    TempDir dir;
    const auto manifest = dir.write("ramp.json", kRampManifest);
    const auto r = run_cli({"solve", "--manifest", manifest, "--seed", "3"});
    REQUIRE(r.code == cli::kSuccess);
    const auto report = nlohmann::json::parse(r.out);
    CHECK(report.at("family") == "hamming_ramp");
    CHECK(report.at("n") == 4);
    CHECK(report.at("seed") == 3);
    CHECK(report.at("gammas").size() == 1);
    CHECK_THAT(report.at("ground_prob").get<double>(), WithinAbs(1.0, 1e-5));
    CHECK(report.at("approx_ratio_defined") == true);

    const auto again = run_cli({"solve", "--manifest", manifest, "--seed", "3"});
    CHECK(again.out == r.out);

    const auto out_dir = (dir.path() / "out").string();
    REQUIRE(run_cli({"solve", "--manifest", manifest, "--out", out_dir}).code == cli::kSuccess);
    CHECK(fs::exists(fs::path(out_dir) / "solve.csv"));
    CHECK(fs::exists(fs::path(out_dir) / "solve.json"));
}

TEST_CASE("constant objectives report an undefined ratio") {
    TempDir dir;
    const auto manifest = dir.write("flat.json", R"({
      "experiment": "solve",
      "problem": {"family": "terms", "n": 2, "terms": [{"qubits": [], "coeff": 2.0}]},
      "solver": {"p": 0}
    })");
    const auto r = run_cli({"solve", "--manifest", manifest});
    REQUIRE(r.code == cli::kSuccess);
    const auto report = nlohmann::json::parse(r.out);
    CHECK(report.at("approx_ratio").is_null());
    CHECK(report.at("approx_ratio_defined") == false);
    CHECK_THAT(report.at("value").get<double>(), WithinAbs(2.0, 1e-12));
}

TEST_CASE("sample prints bitstrings with their values") {
    TempDir dir;
    const auto manifest = dir.write("ramp.json", kRampManifest);
    const auto r = run_cli({"sample", "--manifest", manifest, "--shots", "25", "--seed", "8"});
    REQUIRE(r.code == cli::kSuccess);
    std::istringstream lines(r.out);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "bitstring,f");
    int rows = 0;
    while (std::getline(lines, line)) {
        ++rows;
        const auto comma = line.find(',');
        REQUIRE(comma == 4);
        const std::string bits = line.substr(0, comma);
        const double ones = static_cast<double>(std::count(bits.begin(), bits.end(), '1'));
        CHECK(std::stod(line.substr(comma + 1)) == ones);
    }
    CHECK(rows == 25);
    CHECK(run_cli({"sample", "--manifest", manifest, "--shots", "25", "--seed", "8"}).out == r.out);
    CHECK(run_cli({"sample", "--manifest", manifest, "--shots", "0"}).out.empty());
}

TEST_CASE("configuration errors exit with code 2") {
    TempDir dir;
    CHECK(run_cli({"solve", "--manifest", (dir.path() / "missing.json").string()}).code ==
          cli::kConfigError);
    CHECK(run_cli({"solve", "--manifest", dir.write("bad.json", "{oops")}).code ==
          cli::kConfigError);
    const auto bad_schema = run_cli(
        {"solve", "--manifest",
         dir.write("schema.json", R"({"experiment": "solve", "problem": {"family": "spike"},
                                      "solver": {"p": -1}})")});
    CHECK(bad_schema.code == cli::kConfigError);
    CHECK_THAT(bad_schema.err, ContainsSubstring("$.solver.p"));
    CHECK(run_cli({"frobnicate"}).code == cli::kConfigError);
    CHECK(run_cli({"solve"}).code == cli::kConfigError);
    CHECK(run_cli({"--help"}).code == cli::kSuccess);

    const auto unknown = run_cli({"reproduce", "fig7"});
    CHECK(unknown.code == cli::kConfigError);
    CHECK_THAT(unknown.err, ContainsSubstring("fig2"));

    const auto manifest = dir.write("ramp.json", kRampManifest);
    CHECK(run_cli({"reproduce", "--manifest", manifest}).code == cli::kConfigError);
    CHECK(run_cli({"reproduce", "shadow", "--manifest", dir.write("p.json", R"({
      "experiment": "proxy", "parameters": {"sizes": [4]}})")})
              .code == cli::kConfigError);
}

TEST_CASE("qubit cap from the environment exits with code 3") {
    TempDir dir;
    const auto manifest = dir.write("ramp.json", kRampManifest);
    const int saved = max_qubits();
    ::setenv("QLOW_MAX_QUBITS", "3", 1);
    const auto capped = run_cli({"solve", "--manifest", manifest});
    ::setenv("QLOW_MAX_QUBITS", "many", 1);
    const auto garbled = run_cli({"solve", "--manifest", manifest});
    ::unsetenv("QLOW_MAX_QUBITS");
    set_max_qubits(saved);
    CHECK(capped.code == cli::kResourceCap);
    CHECK(garbled.code == cli::kConfigError);
}

TEST_CASE("reproduce writes tables and the sidecar") {
    TempDir dir;
    const auto manifest = dir.write("shadow.json", R"({
      "experiment": "shadow",
      "parameters": {"variant": "flat", "flat_sizes": [3], "flat_resolution": 4}
    })");
    const auto out_dir = (dir.path() / "res").string();
    const auto r = run_cli({"reproduce", "--manifest", manifest, "--out", out_dir, "--seed", "5"});
    REQUIRE(r.code == cli::kSuccess);
    CHECK_THAT(r.out, ContainsSubstring("shadow.json"));
    CHECK(fs::exists(fs::path(out_dir) / "shadow.json"));
    std::ifstream sidecar(fs::path(out_dir) / "shadow.json");
    const auto j = nlohmann::json::parse(sidecar);
    CHECK(j.at("manifest").at("seed") == 5);
}
