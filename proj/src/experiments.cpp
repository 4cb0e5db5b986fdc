#include "qlow/experiments.hpp"

#include "qlow/analytic.hpp"
#include "qlow/ansatz.hpp"
#include "qlow/error.hpp"
#include "qlow/laplacians.hpp"
#include "qlow/objectives.hpp"
#include "qlow/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <tuple>

namespace qlow {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
    return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

struct MeanAndError {
    double mean = 0.0;
    double standard_error = 0.0;
};

MeanAndError mean_and_error(const std::vector<double> &xs) {
    MeanAndError out;
    if (xs.empty())
        return out;
    double sum = 0.0;
    for (double x : xs)
        sum += x;
    out.mean = sum / static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double sq = 0.0;
        for (double x : xs)
            sq += (x - out.mean) * (x - out.mean);
        out.standard_error =
            std::sqrt(sq / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
    }
    return out;
}

nlohmann::json schedule_json(const Schedule &s) {
    return {{"rounds", s.rounds()},
            {"gamma_relaxed", s.gamma_relaxed()},
            {"beta_relaxed", s.beta_relaxed()},
            {"gammas", s.all_gammas()},
            {"betas", s.all_betas()}};
}

ExperimentRecord base_record(const std::string &experiment, const DiagonalProblem &problem,
                             int p, std::optional<double> j2, std::uint64_t seed) {
    ExperimentRecord r;
    r.experiment = experiment;
    r.family = problem.meta().family;
    r.n = problem.qubits();
    r.p = p;
    r.j2 = j2;
    r.seed = seed;
    return r;
}

void fill_outcome(ExperimentRecord &r, const DiagonalProblem &problem, const Statevector &state,
                  double value) {
    r.value = value;
    r.ground_prob = ground_state_mass(state, problem.table());
    r.approx_ratio = approximation_ratio(problem, mean_energy(state, problem));
}

double median(std::vector<double> xs) {
    if (xs.empty())
        return std::nan("");
    std::sort(xs.begin(), xs.end());
    const std::size_t m = xs.size();
    return m % 2 ? xs[m / 2] : 0.5 * (xs[m / 2 - 1] + xs[m / 2]);
}

std::string table_suffix(double j2) { return "j2_" + format_number(j2); }

} // namespace

ExperimentOutput run_fig2_table(const Fig2Config &config) {
    if (config.sim_instances < 2)
        throw DomainError("fig2 simulation needs at least two instances");
    const double beta = std::numbers::pi / 4.0;
    const std::array<SpinDistribution, 3> dists{SpinDistribution::binary,
                                                SpinDistribution::uniform,
                                                SpinDistribution::gaussian};
    ExperimentOutput out;
    out.id = "fig2";
    ResultTable table{"fig2", {}};
    const int n = config.sim_qubits;
    const Laplacian lap = Laplacian::hypercube(n);

    for (std::size_t k = 0; k < dists.size(); ++k) {
        const auto start = Clock::now();
        const SpinDistribution dist = dists[k];
        const double gamma = dist == SpinDistribution::binary ? -std::numbers::pi / 4.0
                                                              : optimal_gamma(dist, beta);
        const DistributionQaoa analytic = distribution_qaoa(dist, gamma, beta);
        const std::uint64_t stream = derive_seed(config.seed, k);
        const Schedule schedule({gamma}, {beta});
        const auto sims = parallel_map(
            config.jobs, static_cast<std::size_t>(config.sim_instances), [&](std::size_t i) {
                const auto problem = uncoupled_spins(n, dist, derive_seed(stream, i));
                const Statevector s = qaoa_state(problem, lap, schedule);
                return std::make_pair(mean_energy(s, problem) / n,
                                      ground_state_mass(s, problem.table()));
            });
        std::vector<double> energies;
        std::vector<double> grounds;
        for (const auto &[e, g] : sims) {
            energies.push_back(e);
            grounds.push_back(g);
        }
        const auto energy = mean_and_error(energies);
        const auto ground = mean_and_error(grounds);

        ExperimentRecord r;
        r.experiment = "fig2";
        r.family = "uncoupled_" + to_string(dist);
        r.n = 1;
        r.p = 1;
        r.seed = config.seed;
        r.solver = "analytic";
        r.objective = "mean";
        r.value = analytic.energy;
        r.ground_prob = analytic.overlap;
        r.approx_ratio = analytic.ratio;
        nlohmann::json decay = nlohmann::json::object();
        for (int m : config.decay_sizes)
            decay[std::to_string(m)] = std::pow(analytic.overlap, m);
        r.details = {{"gamma_star", gamma},
                     {"beta_star", beta},
                     {"optimum_per_spin", analytic.optimum},
                     {"overlap_decay", decay},
                     {"sim_qubits", n},
                     {"sim_instances", config.sim_instances},
                     {"sim_energy_per_spin", energy.mean},
                     {"sim_energy_se", energy.standard_error},
                     {"sim_ground_prob", ground.mean},
                     {"sim_ground_prob_se", ground.standard_error},
                     {"predicted_ground_prob", std::pow(analytic.overlap, n)}};
        r.wall_ms = elapsed_ms(start);
        table.records.push_back(std::move(r));
    }

    const auto start = Clock::now();
    const LandauZener lz = landau_zener(1.0);
    ExperimentRecord anneal;
    anneal.experiment = "fig2";
    anneal.family = "uncoupled_gaussian";
    anneal.n = 1;
    anneal.p = 0;
    anneal.seed = config.seed;
    anneal.solver = "anneal";
    anneal.objective = "mean";
    anneal.value = lz.energy;
    anneal.ground_prob = lz.overlap;
    anneal.approx_ratio = lz.ratio;
    anneal.details = {{"rate", 1.0}, {"overlap_quadrature", landau_zener_overlap_quadrature(1.0)}};
    anneal.wall_ms = elapsed_ms(start);
    table.records.push_back(std::move(anneal));

    out.summary = {{"sk_reference_energy", -1.0 / std::sqrt(4.0 * std::numbers::e)}};
    out.tables.push_back(std::move(table));
    return out;
}

ScaleFamily parse_scale_family(const std::string &name) {
    if (name == "chain")
        return ScaleFamily::chain;
    if (name == "grid")
        return ScaleFamily::grid;
    if (name == "maxcut")
        return ScaleFamily::maxcut;
    throw DomainError("unknown scale family '" + name + "'");
}

std::string to_string(ScaleFamily family) {
    switch (family) {
    case ScaleFamily::chain:
        return "chain";
    case ScaleFamily::grid:
        return "grid";
    case ScaleFamily::maxcut:
        return "maxcut";
    }
    return "unknown";
}

DiagonalProblem make_scale_instance(const ScaleInstance &inst, double j2, std::uint64_t seed) {
    switch (inst.family) {
    case ScaleFamily::chain:
        return chain_detuned(inst.chain_qubits, j2);
    case ScaleFamily::grid:
        return grid_ferromagnet_2d(inst.grid_rows, inst.grid_cols, j2);
    case ScaleFamily::maxcut:
        return maxcut_3regular(inst.maxcut_qubits, inst.maxcut_j2_fraction, j2, seed);
    }
    throw DomainError("unknown scale family");
}

ExperimentOutput run_scale_sweep(const ScaleConfig &config) {
    const std::size_t nj = config.j2_values.size();
    const std::size_t tasks = nj * static_cast<std::size_t>(config.seeds);
    auto per_task = parallel_map(config.jobs, tasks, [&](std::size_t t) {
        const std::size_t s = t / nj;
        const double j2 = config.j2_values[t % nj];
        const std::uint64_t seed = derive_seed(config.seed, s);
        const auto problem = make_scale_instance(config.instance, j2, seed);
        const Laplacian lap = Laplacian::hypercube(problem.qubits());
        SearchConfig search = config.search;
        search.seed = seed;
        const auto start = Clock::now();
        const auto results =
            optimize_schedules(problem, lap, config.depths, MeanObjective{}, search);
        const double ms = elapsed_ms(start);
        std::vector<ExperimentRecord> records;
        for (const auto &res : results) {
            auto r = base_record("scale", problem, res.schedule.rounds(), j2, seed);
            r.solver = "qaoa";
            r.objective = "mean";
            fill_outcome(r, problem, qaoa_state(problem, lap, res.schedule), res.value);
            r.wall_ms = ms / static_cast<double>(results.size());
            r.details = {{"schedule", schedule_json(res.schedule)},
                         {"evaluations", res.evaluations}};
            records.push_back(std::move(r));
        }
        return records;
    });
    ResultTable table{"scale_" + to_string(config.instance.family), {}};
    for (auto &rs : per_task)
        for (auto &r : rs)
            table.records.push_back(std::move(r));
    std::stable_sort(table.records.begin(), table.records.end(),
                     [](const ExperimentRecord &a, const ExperimentRecord &b) {
                         return std::tie(a.p, *a.j2) < std::tie(b.p, *b.j2);
                     });
    ExperimentOutput out;
    out.id = "scale";
    out.tables.push_back(std::move(table));
    return out;
}

ExperimentOutput run_ce_baseline(const CeConfig &config) {
    const std::size_t nj = config.j2_values.size();
    const std::size_t tasks = nj * static_cast<std::size_t>(config.seeds);
    auto per_task = parallel_map(config.jobs, tasks, [&](std::size_t t) {
        const std::size_t s = t / nj;
        const double j2 = config.j2_values[t % nj];
        const std::uint64_t seed = derive_seed(config.seed, s);
        const auto problem = make_scale_instance(config.instance, j2, seed);
        const Laplacian lap = Laplacian::hypercube(problem.qubits());
        std::vector<ExperimentRecord> records;

        auto start = Clock::now();
        const double baseline =
            classical_restart_baseline(problem, config.baseline_restarts, derive_seed(seed, 1));
        auto base = base_record("ce", problem, 0, j2, seed);
        base.solver = "product_restart";
        base.objective = "mean";
        base.value = baseline;
        base.ground_prob = baseline;
        base.wall_ms = elapsed_ms(start);
        base.details = {{"restarts", config.baseline_restarts}};
        records.push_back(std::move(base));

        SearchConfig search = config.search;
        search.seed = seed;
        start = Clock::now();
        const auto results =
            optimize_schedules(problem, lap, config.depths, MeanObjective{}, search);
        const double ms = elapsed_ms(start);
        std::optional<int> crossing;
        for (const auto &res : results) {
            auto r = base_record("ce", problem, res.schedule.rounds(), j2, seed);
            r.solver = "qaoa";
            r.objective = "mean";
            fill_outcome(r, problem, qaoa_state(problem, lap, res.schedule), res.value);
            r.wall_ms = ms / static_cast<double>(results.size());
            r.details = {{"schedule", schedule_json(res.schedule)}};
            if (!crossing && r.ground_prob >= baseline)
                crossing = r.p;
            records.push_back(std::move(r));
        }
        nlohmann::json cross = {{"j2", j2},
                                {"seed", seed},
                                {"baseline", baseline},
                                {"crossing_p", crossing ? nlohmann::json(*crossing)
                                                        : nlohmann::json(nullptr)}};
        return std::make_pair(std::move(records), std::move(cross));
    });
    ResultTable table{"ce_" + to_string(config.instance.family), {}};
    nlohmann::json crossings = nlohmann::json::array();
    for (auto &[rs, cross] : per_task) {
        for (auto &r : rs)
            table.records.push_back(std::move(r));
        crossings.push_back(std::move(cross));
    }
    ExperimentOutput out;
    out.id = "ce";
    out.summary = {{"crossings", crossings}};
    out.tables.push_back(std::move(table));
    return out;
}

ExperimentOutput run_relaxation_compare(const RelaxationConfig &config) {
    const std::size_t seeds = static_cast<std::size_t>(config.seeds);
    const std::size_t tasks = config.j2_values.size() * seeds;
    auto per_task = parallel_map(config.jobs, tasks, [&](std::size_t t) {
        const double j2 = config.j2_values[t / seeds];
        const std::uint64_t seed = derive_seed(config.seed, t % seeds);
        const auto problem = grid_ferromagnet_2d(config.grid_rows, config.grid_cols, j2);
        const Laplacian lap = Laplacian::hypercube(problem.qubits());
        const std::size_t terms = problem.terms().size();
        const std::size_t n = static_cast<std::size_t>(problem.qubits());
        std::vector<ExperimentRecord> records;
        auto emit = [&](const std::string &solver, const OptimizeResult &res, double ms) {
            auto r = base_record("freedom", problem, 1, j2, seed);
            r.solver = solver;
            r.objective = "mean";
            fill_outcome(r, problem, qaoa_state(problem, lap, res.schedule), res.value);
            r.wall_ms = ms;
            r.details = {{"schedule", schedule_json(res.schedule)},
                         {"evaluations", res.evaluations}};
            records.push_back(std::move(r));
        };
        SearchConfig search = config.search;
        search.seed = seed;
        auto start = Clock::now();
        const auto standard = optimize_schedule(problem, lap, 1, MeanObjective{}, search);
        emit("standard", standard, elapsed_ms(start));

        search.seed = derive_seed(seed, 1);
        start = Clock::now();
        const auto gamma = refine_schedule(problem, lap,
                                           standard.schedule.relaxed(true, terms, false, n),
                                           MeanObjective{}, search);
        emit("gamma_relaxed", gamma, elapsed_ms(start));

        search.seed = derive_seed(seed, 2);
        start = Clock::now();
        const auto beta = refine_schedule(problem, lap,
                                          standard.schedule.relaxed(false, terms, true, n),
                                          MeanObjective{}, search);
        emit("beta_relaxed", beta, elapsed_ms(start));

        search.seed = derive_seed(seed, 3);
        start = Clock::now();
        const auto both = refine_schedule(problem, lap,
                                          gamma.schedule.relaxed(false, terms, true, n),
                                          MeanObjective{}, search);
        emit("both_relaxed", both, elapsed_ms(start));
        return records;
    });
    ResultTable table{"freedom", {}};
    for (auto &rs : per_task)
        for (auto &r : rs)
            table.records.push_back(std::move(r));

    nlohmann::json medians = nlohmann::json::array();
    for (double j2 : config.j2_values) {
        nlohmann::json row = {{"j2", j2}};
        for (const std::string solver :
             {"standard", "gamma_relaxed", "beta_relaxed", "both_relaxed"}) {
            std::vector<double> probs;
            for (const auto &r : table.records)
                if (r.solver == solver && *r.j2 == j2)
                    probs.push_back(r.ground_prob);
            row[solver] = median(probs);
        }
        medians.push_back(std::move(row));
    }
    ExperimentOutput out;
    out.id = "freedom";
    out.summary = {{"median_ground_prob", medians}};
    out.tables.push_back(std::move(table));
    return out;
}

ShadowVariant parse_shadow_variant(const std::string &name) {
    if (name == "flat")
        return ShadowVariant::flat;
    if (name == "spike_cut")
        return ShadowVariant::spike_cut;
    throw DomainError("unknown shadow variant '" + name + "'");
}

Statevector boosted_ball_state(int n, int radius, double boost) {
    if (!(boost > 0.0) || !std::isfinite(boost))
        throw DomainError("target boost must be positive");
    Statevector s = ball_uniform_state(n, 0, radius);
    s[0] *= boost;
    const double scale = 1.0 / std::sqrt(s.norm_squared());
    for (auto &a : s.amps())
        a *= scale;
    return s;
}

namespace {

ExperimentOutput run_shadow_flat(const ShadowConfig &config) {
    ResultTable table{"shadow_flat", {}};
    const double pi = std::numbers::pi;
    for (int n : config.flat_sizes) {
        const auto start = Clock::now();
        const auto problem = hamming_ramp(n);
        const Laplacian lap = Laplacian::hypercube(n);
        const Statevector init = hamming_shell_state(n, n / 2);
        const double base = mean_energy(init, problem);
        const int res = config.flat_resolution;
        double deviation = 0.0;
        double lowest = base;
        // spread over gamma at fixed beta
        double gamma_spread = 0.0;
        for (int j = 0; j < res; ++j) {
            const double b = pi * j / (res - 1);
            double lo = INFINITY;
            double hi = -INFINITY;
            for (int i = 0; i < res; ++i) {
                const double g = -pi + 2.0 * pi * i / (res - 1);
                Statevector s = init;
                apply_phase(s, problem.table(), g);
                evolve(s, lap, b);
                const double e = mean_energy(s, problem);
                deviation = std::max(deviation, std::abs(e - base));
                lowest = std::min(lowest, e);
                lo = std::min(lo, e);
                hi = std::max(hi, e);
            }
            gamma_spread = std::max(gamma_spread, hi - lo);
        }
        auto r = base_record("shadow", problem, 1, std::nullopt, config.seed);
        r.solver = "landscape_scan";
        r.objective = "mean";
        r.value = deviation;
        r.ground_prob = ground_state_mass(init, problem.table());
        r.approx_ratio = approximation_ratio(problem, base);
        r.wall_ms = elapsed_ms(start);
        r.details = {{"shell_weight", n / 2},
                     {"resolution", res},
                     {"max_deviation", deviation},
                     {"max_gamma_spread", gamma_spread},
                     {"best_descent", base - lowest}};
        table.records.push_back(std::move(r));
    }
    ExperimentOutput out;
    out.id = "shadow";
    out.tables.push_back(std::move(table));
    return out;
}

ExperimentOutput run_shadow_spike_cut(const ShadowConfig &config) {
    const int n = config.qubits;
    const double center = config.spike_center < 0.0 ? 0.75 * n : config.spike_center;
    const auto ramp = hamming_ramp(n);
    const auto spiked = spike_centered(n, config.spike_width_exponent,
                                       config.spike_height_exponent, center);
    const Laplacian cube = Laplacian::hypercube(n);
    const Laplacian cut = Laplacian::ball_cut(cube, 0, config.radius);
    const Statevector init = boosted_ball_state(n, config.radius, config.target_boost);

    struct Run {
        const DiagonalProblem *problem;
        std::string family;
        const Laplacian *lap;
        std::string solver;
        Objective objective;
    };
    const Objective gibbs = GibbsObjective{config.gibbs_eta};
    const std::vector<Run> runs{
        {&ramp, "ramp", &cube, "uncut", MeanObjective{}},
        {&ramp, "ramp", &cube, "uncut", gibbs},
        {&ramp, "ramp", &cut, "cut", MeanObjective{}},
        {&spiked, "ramp_spike", &cube, "uncut", MeanObjective{}},
        {&spiked, "ramp_spike", &cube, "uncut", gibbs},
        {&spiked, "ramp_spike", &cut, "cut", MeanObjective{}},
    };
    auto records = parallel_map(config.jobs, runs.size(), [&](std::size_t i) {
        const Run &run = runs[i];
        const auto start = Clock::now();
        SearchConfig search = config.search;
        search.seed = derive_seed(config.seed, i);
        const auto res = optimize_schedule(*run.problem, *run.lap, 1, run.objective, search, init);
        const Statevector final_state = qaoa_state(*run.problem, *run.lap, res.schedule, init);
        auto r = base_record("shadow", *run.problem, 1, std::nullopt, config.seed);
        r.family = run.family;
        r.solver = run.solver;
        r.objective = describe(run.objective);
        r.value = res.value;
        r.ground_prob = overlap_probability(final_state, 0);
        r.approx_ratio = approximation_ratio(*run.problem, mean_energy(final_state, *run.problem));
        r.wall_ms = elapsed_ms(start);
        r.details = {{"schedule", schedule_json(res.schedule)},
                     {"initial_overlap", overlap_probability(init, 0)},
                     {"radius", config.radius},
                     {"target_boost", config.target_boost},
                     {"spike_center", center}};
        return r;
    });
    ExperimentOutput out;
    out.id = "shadow";
    out.tables.push_back({"shadow_spike_cut", std::move(records)});
    return out;
}

} // namespace

ExperimentOutput run_shadow_defect(const ShadowConfig &config) {
    return config.variant == ShadowVariant::flat ? run_shadow_flat(config)
                                                 : run_shadow_spike_cut(config);
}

ExperimentOutput run_improvement_proxy(const ProxyConfig &config) {
    for (const auto &kind : config.kinds)
        if (kind != "uniform" && kind != "ball" && kind != "ball_rand" && kind != "ball_cut" &&
            kind != "ball_rand_cut")
            throw DomainError("unknown proxy state kind '" + kind + "'");
    const std::size_t nk = config.kinds.size();
    const std::size_t tasks = config.sizes.size() * nk;
    auto records = parallel_map(config.jobs, tasks, [&](std::size_t t) {
        const int n = config.sizes[t / nk];
        const std::string &kind = config.kinds[t % nk];
        const auto start = Clock::now();
        const auto problem = hamming_ramp(n);
        const int radius = n / 2;
        const Laplacian cube = Laplacian::hypercube(n);
        const bool cut = kind.ends_with("_cut");
        const bool random_phase = kind.starts_with("ball_rand");
        const Laplacian lap = cut ? Laplacian::ball_cut(cube, 0, radius) : cube;
        Statevector init = kind == "uniform" ? plus_state(n) : ball_uniform_state(n, 0, radius);
        if (random_phase)
            init = randomize_phases(init, derive_seed(config.seed, static_cast<std::uint64_t>(n)));

        const SearchConfig &search = config.search;
        const AngleSearch angles = [&search](const std::function<double(double, double)> &f) {
            double best = INFINITY;
            std::vector<double> x{0.0, 0.0};
            const int res = search.resolution;
            for (int i = 0; i < res; ++i) {
                const double g = search.gamma_min + (search.gamma_max - search.gamma_min) * i / (res - 1);
                for (int j = 0; j < res; ++j) {
                    const double b = search.beta_min + (search.beta_max - search.beta_min) * j / (res - 1);
                    const double v = f(g, b);
                    if (v < best) {
                        best = v;
                        x = {g, b};
                    }
                }
            }
            const auto local = local_minimize(
                [&f](std::span<const double> p) { return f(p[0], p[1]); }, x, search);
            return std::make_pair(local.x[0], local.x[1]);
        };
        const ImprovementResult res = improvement_proxy(init, problem, lap, angles);
        auto r = base_record("proxy", problem, 1, std::nullopt, config.seed);
        r.family = "ramp/" + kind;
        r.solver = cut ? "cut" : "uncut";
        r.objective = "mean";
        r.value = res.improvement;
        r.ground_prob = res.final_overlap;
        r.wall_ms = elapsed_ms(start);
        r.details = {{"kind", kind},
                     {"initial_overlap", res.initial_overlap},
                     {"final_overlap", res.final_overlap},
                     {"gamma", res.gamma},
                     {"beta", res.beta},
                     {"degenerate_target", res.degenerate_target}};
        return r;
    });
    ExperimentOutput out;
    out.id = "proxy";
    out.tables.push_back({"proxy", std::move(records)});
    return out;
}

std::vector<double> median_curve(const std::vector<std::vector<double>> &curves) {
    if (curves.empty())
        return {};
    const std::size_t len = curves.front().size();
    for (const auto &c : curves)
        if (c.size() != len)
            throw ShapeError("median of curves with different lengths");
    std::vector<double> out(len);
    std::vector<double> column(curves.size());
    for (std::size_t k = 0; k < len; ++k) {
        for (std::size_t i = 0; i < curves.size(); ++i)
            column[i] = curves[i][k];
        out[k] = median(column);
    }
    return out;
}

ExperimentOutput run_rounding_curves(const RoundingExperimentConfig &config) {
    const std::size_t seeds = static_cast<std::size_t>(config.seeds);
    const std::size_t tasks = config.j2_values.size() * seeds;
    auto results = parallel_map(config.jobs, tasks, [&](std::size_t t) {
        const double j2 = config.j2_values[t / seeds];
        const std::uint64_t seed = derive_seed(config.seed, t % seeds);
        const auto problem = grid_ferromagnet_2d(config.grid_rows, config.grid_cols, j2);
        SearchConfig search = config.search;
        search.seed = seed;
        RoundingConfig rounding = config.rounding;
        rounding.seed = seed;
        const auto start = Clock::now();
        const auto res =
            iterated_rounding(problem, qaoa_solver(config.depth, MeanObjective{}, search), rounding);
        const double ms = elapsed_ms(start);
        std::vector<ExperimentRecord> records;
        for (std::size_t k = 0; k < res.success_curve.size(); ++k) {
            auto r = base_record("rounding", problem, config.depth, j2, seed);
            r.solver = "rounding/frozen=" + std::to_string(k);
            r.objective = "mean";
            r.value = res.energy_curve[k];
            r.ground_prob = res.success_curve[k];
            r.approx_ratio = approximation_ratio(problem, res.energy_curve[k]);
            r.wall_ms = k == 0 ? ms : 0.0;
            nlohmann::json step = nlohmann::json::object();
            if (k < res.trace.size())
                step = {{"marginals", res.trace[k].marginals},
                        {"chosen", res.trace[k].chosen},
                        {"value", res.trace[k].value}};
            r.details = {{"frozen", k}, {"step", step}, {"assignment", res.assignment},
                         {"optimal", res.optimal}};
            records.push_back(std::move(r));
        }
        return std::make_pair(res.success_curve, std::move(records));
    });

    ExperimentOutput out;
    out.id = "rounding";
    nlohmann::json medians = nlohmann::json::object();
    for (std::size_t j = 0; j < config.j2_values.size(); ++j) {
        ResultTable table{"rounding_" + table_suffix(config.j2_values[j]), {}};
        std::vector<std::vector<double>> curves;
        for (std::size_t s = 0; s < seeds; ++s) {
            auto &[curve, records] = results[j * seeds + s];
            curves.push_back(curve);
            for (auto &r : records)
                table.records.push_back(std::move(r));
        }
        medians[format_number(config.j2_values[j])] = median_curve(curves);
        out.tables.push_back(std::move(table));
    }
    out.summary = {{"median_success_curve", medians}};
    return out;
}

} // namespace qlow
