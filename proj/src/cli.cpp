#include "qlow/cli.hpp"

#include "qlow/ansatz.hpp"
#include "qlow/error.hpp"
#include "qlow/manifest.hpp"
#include "qlow/random.hpp"
#include "qlow/records.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <optional>

namespace qlow::cli {

namespace {

using nlohmann::json;

struct Options {
    std::string manifest;
    std::string experiment;
    std::optional<std::uint64_t> seed;
    std::optional<int> jobs;
    std::optional<std::size_t> shots;
    std::string out;
};

std::uint64_t resolve_seed(const Options &opts, const json &manifest) {
    if (opts.seed)
        return *opts.seed;
    return manifest.value("seed", kDefaultSeed);
}

int resolve_jobs(const Options &opts, const json &manifest) {
    return opts.jobs ? *opts.jobs : manifest.value("jobs", 1);
}

std::string resolve_out(const Options &opts, const json &manifest) {
    return opts.out.empty() ? manifest.value("output", std::string()) : opts.out;
}

void apply_qubit_cap_from_env() {
    const char *raw = std::getenv("QLOW_MAX_QUBITS");
    if (!raw || !*raw)
        return;
    const std::string_view text(raw);
    int cap = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), cap);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw ConfigError("QLOW_MAX_QUBITS: not an integer: '" + std::string(text) + "'");
    try {
        set_max_qubits(cap);
    } catch (const DomainError &e) {
        throw ConfigError(std::string("QLOW_MAX_QUBITS: ") + e.what());
    }
}

/// Bitstring with qubit 0 first.
std::string render_bits(Bitstring z, int n) {
    std::string s(static_cast<std::size_t>(n), '0');
    for (int i = 0; i < n; ++i)
        if ((z >> i) & 1U)
            s[static_cast<std::size_t>(i)] = '1';
    return s;
}

struct Solved {
    DiagonalProblem problem;
    std::optional<Schedule> schedule;
    Statevector state;
    Objective objective;
    double value;
    std::string solver;
    int p;
    double wall_ms;
};

Solved solve_manifest(const json &manifest, std::uint64_t seed) {
    const auto id = manifest.at("experiment").get<std::string>();
    if (id != "solve" && id != "sample")
        throw ConfigError("$.experiment: '" + id + "' is run by the reproduce command");
    if (!manifest.contains("problem"))
        throw ConfigError("$: missing required property 'problem'");
    for (const char *key : {"parameters", "rounding", "seeds"})
        if (manifest.contains(key))
            throw ConfigError(std::string("$.") + key + ": not used by experiment '" + id + "'");

    const auto start = std::chrono::steady_clock::now();
    const json empty = json::object();
    const json &solver = manifest.contains("solver") ? manifest.at("solver") : empty;
    auto section = [&](const char *key) { return solver.contains(key) ? &solver.at(key) : nullptr; };

    DiagonalProblem problem = build_problem(manifest.at("problem"), derive_seed(seed, 0));
    const int n = problem.qubits();
    const Laplacian lap = build_laplacian(section("laplacian"), n);
    const Statevector initial = build_initial_state(section("initial_state"), n);
    const Objective objective =
        build_objective(manifest.contains("objective") ? &manifest.at("objective") : nullptr);
    const SearchConfig search = build_search(section("search"), seed);
    const int p = solver.value("p", 1);
    const std::string relax = solver.value("relax", std::string("none"));
    if (p == 0 && relax != "none")
        throw ConfigError("$.solver.relax: needs p >= 1");

    if (p == 0) {
        const double value = evaluate(objective, initial, problem, &lap);
        Statevector state = initial;
        const auto ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - start)
                            .count();
        return {std::move(problem), std::nullopt, std::move(state), objective, value,
                "initial_state", 0, ms};
    }
    OptimizeResult res = optimize_schedule(problem, lap, p, objective, search, initial);
    if (relax != "none") {
        const bool rg = relax == "gamma" || relax == "both";
        const bool rb = relax == "beta" || relax == "both";
        SearchConfig refine = search;
        refine.seed = derive_seed(seed, 1);
        res = refine_schedule(problem, lap,
                              res.schedule.relaxed(rg, problem.terms().size(), rb,
                                                   static_cast<std::size_t>(n)),
                              objective, refine, initial);
    }
    Statevector state = qaoa_state(problem, lap, res.schedule, initial);
    const auto ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    return {std::move(problem), res.schedule, std::move(state), objective, res.value,
            relax == "none" ? "qaoa" : "qaoa/relax=" + relax, p, ms};
}

ExperimentRecord solve_record(const Solved &s, std::uint64_t seed) {
    ExperimentRecord r;
    r.experiment = "solve";
    r.family = s.problem.meta().family;
    r.n = s.problem.qubits();
    r.p = s.p;
    if (s.problem.meta().params.contains("j2"))
        r.j2 = s.problem.meta().params.at("j2").get<double>();
    r.seed = seed;
    r.solver = s.solver;
    r.objective = describe(s.objective);
    r.value = s.value;
    r.ground_prob = ground_state_mass(s.state, s.problem.table());
    r.approx_ratio = approximation_ratio(s.problem, mean_energy(s.state, s.problem));
    r.wall_ms = s.wall_ms;
    if (s.schedule)
        r.details = {{"gammas", s.schedule->all_gammas()}, {"betas", s.schedule->all_betas()}};
    return r;
}

int cmd_solve(const Options &opts, std::ostream &out) {
    const json manifest = load_manifest(opts.manifest);
    const std::uint64_t seed = resolve_seed(opts, manifest);
    const Solved solved = solve_manifest(manifest, seed);
    const ExperimentRecord r = solve_record(solved, seed);
    json report = {{"family", r.family},
                   {"n", r.n},
                   {"p", r.p},
                   {"seed", seed},
                   {"solver", r.solver},
                   {"objective", r.objective},
                   {"gammas", r.details.value("gammas", json::array())},
                   {"betas", r.details.value("betas", json::array())},
                   {"value", r.value},
                   {"ground_prob", r.ground_prob},
                   {"approx_ratio", r.approx_ratio ? json(*r.approx_ratio) : json(nullptr)},
                   {"approx_ratio_defined", r.approx_ratio.has_value()}};
    out << report.dump(2) << '\n';
    if (const auto dir = resolve_out(opts, manifest); !dir.empty()) {
        ExperimentOutput output{"solve", {{"solve", {r}}}, json::object()};
        write_output(dir, output, manifest);
    }
    return kSuccess;
}

int cmd_sample(const Options &opts, std::ostream &out) {
    const json manifest = load_manifest(opts.manifest);
    const std::uint64_t seed = resolve_seed(opts, manifest);
    const std::size_t shots = opts.shots ? *opts.shots : manifest.value("shots", std::size_t{1000});
    const Solved solved = solve_manifest(manifest, seed);
    Rng rng = make_rng(seed, 2);
    const auto draws = sample_basis_states(solved.state, shots, rng);
    std::ostringstream csv;
    if (!draws.empty()) {
        csv << "bitstring,f\n";
        for (Bitstring z : draws)
            csv << render_bits(z, solved.problem.qubits()) << ','
                << format_number(solved.problem.table().values[z]) << '\n';
    }
    out << csv.str();
    if (const auto dir = resolve_out(opts, manifest); !dir.empty()) {
        std::filesystem::create_directories(dir);
        const auto path = std::filesystem::path(dir) / "samples.csv";
        std::ofstream file(path);
        if (!file)
            throw ConfigError("cannot write " + path.string());
        file << csv.str();
    }
    return kSuccess;
}

int cmd_reproduce(const Options &opts, std::ostream &out, std::ostream &err) {
    json manifest;
    if (!opts.manifest.empty()) {
        manifest = load_manifest(opts.manifest);
        if (!opts.experiment.empty() && manifest.at("experiment") != opts.experiment)
            throw ConfigError("$.experiment: manifest runs '" +
                              manifest.at("experiment").get<std::string>() + "', not '" +
                              opts.experiment + "'");
    } else {
        if (opts.experiment.empty())
            throw ConfigError("reproduce needs an experiment id or --manifest");
        auto pinned = default_manifest(opts.experiment);
        if (!pinned) {
            std::string known;
            for (const auto &id : reproduce_ids())
                known += (known.empty() ? "" : ", ") + id;
            throw ConfigError("unknown experiment '" + opts.experiment + "' (known: " + known +
                              ")");
        }
        manifest = std::move(*pinned);
    }
    const std::uint64_t seed = resolve_seed(opts, manifest);
    const int jobs = resolve_jobs(opts, manifest);
    const auto id = manifest.at("experiment").get<std::string>();
    std::string dir = resolve_out(opts, manifest);
    if (dir.empty())
        dir = "results/" + id;
    manifest["seed"] = seed;

    const ExperimentOutput output = run_manifest_experiment(manifest, seed, jobs);
    write_output(dir, output, manifest);
    for (const auto &table : output.tables)
        out << (std::filesystem::path(dir) / (table.name + ".csv")).string() << '\n';
    out << (std::filesystem::path(dir) / (output.id + ".json")).string() << '\n';
    err << "reproduced " << id << " with seed " << seed << '\n';
    return kSuccess;
}

} // namespace

int run(std::span<const std::string> args, std::ostream &out, std::ostream &err) {
    CLI::App app{"QAOA statevector experiments"};
    app.require_subcommand(1);
    Options opts;

    auto add_common = [&opts](CLI::App *cmd) {
        cmd->add_option("--seed", opts.seed, "Master seed for every random choice");
        cmd->add_option("--jobs", opts.jobs, "Worker threads")->check(CLI::PositiveNumber);
        cmd->add_option("--out", opts.out, "Output directory");
    };
    CLI::App *solve = app.add_subcommand("solve", "Optimize one problem and report the result");
    solve->add_option("--manifest", opts.manifest, "Manifest path")->required();
    add_common(solve);
    CLI::App *sample = app.add_subcommand("sample", "Sample bitstrings from the optimized state");
    sample->add_option("--manifest", opts.manifest, "Manifest path")->required();
    sample->add_option("--shots", opts.shots, "Number of samples");
    add_common(sample);
    CLI::App *reproduce = app.add_subcommand("reproduce", "Run a pinned experiment");
    reproduce->add_option("experiment", opts.experiment, "Experiment id");
    reproduce->add_option("--manifest", opts.manifest, "Manifest overriding the pinned one");
    add_common(reproduce);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kConfigError;
    }

    try {
        apply_qubit_cap_from_env();
        if (solve->parsed())
            return cmd_solve(opts, out);
        if (sample->parsed())
            return cmd_sample(opts, out);
        return cmd_reproduce(opts, out, err);
    } catch (const ResourceError &e) {
        err << "error: " << e.what() << '\n';
        return kResourceCap;
    } catch (const NumericError &e) {
        err << "error: " << e.what() << '\n';
        return kNumericFailure;
    } catch (const Error &e) {
        // config, domain, shape and mode errors all stem from the request
        err << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception &e) {
        err << "internal error: " << e.what() << '\n';
        return kInternalError;
    }
}

} // namespace qlow::cli
