#include "qlow/optimize.hpp"

#include "qlow/error.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>

namespace qlow {

namespace {

constexpr double kImprovement = 1e-15;

struct GslMinimizerDeleter {
    void operator()(gsl_multimin_fminimizer *m) const { gsl_multimin_fminimizer_free(m); }
};

struct GslVectorDeleter {
    void operator()(gsl_vector *v) const { gsl_vector_free(v); }
};

using GslVector = std::unique_ptr<gsl_vector, GslVectorDeleter>;

GslVector make_vector(std::span<const double> values) {
    GslVector v(gsl_vector_alloc(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i)
        gsl_vector_set(v.get(), i, values[i]);
    return v;
}

struct GslCallback {
    const ScalarFunction *f;
    int evaluations = 0;
};

double gsl_trampoline(const gsl_vector *x, void *params) {
    auto *cb = static_cast<GslCallback *>(params);
    ++cb->evaluations;
    return (*cb->f)(std::span<const double>(x->data, x->size));
}

double grid_point(double lo, double hi, int i, int resolution) {
    return lo + (hi - lo) * i / (resolution - 1);
}

} // namespace

LocalMethod parse_local_method(const std::string &name) {
    if (name == "compass")
        return LocalMethod::compass;
    if (name == "simplex")
        return LocalMethod::simplex;
    throw DomainError("unknown local method '" + name + "'");
}

std::string to_string(LocalMethod method) {
    return method == LocalMethod::compass ? "compass" : "simplex";
}

void SearchConfig::validate() const {
    if (resolution < 2)
        throw DomainError("grid resolution must be at least 2");
    for (double v : {gamma_min, gamma_max, beta_min, beta_max, initial_step, tolerance})
        if (!std::isfinite(v))
            throw DomainError("search ranges and steps must be finite");
    if (gamma_min > gamma_max || beta_min > beta_max)
        throw DomainError("search range lower bound exceeds upper bound");
    if (top_k < 1)
        throw DomainError("top_k must be at least 1");
    if (!(initial_step > 0.0) || !(tolerance > 0.0))
        throw DomainError("local search steps must be positive");
    if (max_iterations < 0 || restarts < 0)
        throw DomainError("iteration and restart counts must be non-negative");
}

LocalResult compass_search(const ScalarFunction &f, std::vector<double> x0, double step,
                           double tolerance, int max_iterations) {
    LocalResult out{std::move(x0), 0.0, 0, 0};
    out.value = f(out.x);
    out.evaluations = 1;
    std::vector<double> trial = out.x;
    while (step >= tolerance && out.iterations < max_iterations) {
        ++out.iterations;
        bool moved = false;
        for (std::size_t i = 0; i < out.x.size(); ++i) {
            for (double delta : {step, -step}) {
                trial[i] = out.x[i] + delta;
                const double v = f(trial);
                ++out.evaluations;
                if (v < out.value - kImprovement) {
                    out.x[i] = trial[i];
                    out.value = v;
                    moved = true;
                    break;
                }
            }
            trial[i] = out.x[i];
        }
        if (!moved)
            step *= 0.5;
    }
    return out;
}

LocalResult simplex_search(const ScalarFunction &f, std::vector<double> x0, double step,
                           double tolerance, int max_iterations) {
    const std::size_t dim = x0.size();
    if (dim == 0) {
        LocalResult out{std::move(x0), 0.0, 0, 1};
        out.value = f(out.x);
        return out;
    }
    GslCallback cb{&f};
    gsl_multimin_function fn{&gsl_trampoline, dim, &cb};
    GslVector x = make_vector(x0);
    GslVector steps(gsl_vector_alloc(dim));
    gsl_vector_set_all(steps.get(), step);
    std::unique_ptr<gsl_multimin_fminimizer, GslMinimizerDeleter> m(
        gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, dim));
    if (gsl_multimin_fminimizer_set(m.get(), &fn, x.get(), steps.get()) != GSL_SUCCESS)
        throw NumericError("simplex initialization failed");
    int iterations = 0;
    while (iterations < max_iterations) {
        ++iterations;
        if (gsl_multimin_fminimizer_iterate(m.get()) != GSL_SUCCESS)
            break;
        if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(m.get()), tolerance) ==
            GSL_SUCCESS)
            break;
    }
    LocalResult out;
    out.x.assign(m->x->data, m->x->data + dim);
    out.value = m->fval;
    out.iterations = iterations;
    out.evaluations = cb.evaluations;
    return out;
}

LocalResult local_minimize(const ScalarFunction &f, std::vector<double> x0,
                           const SearchConfig &config) {
    if (config.method == LocalMethod::simplex)
        return simplex_search(f, std::move(x0), config.initial_step, config.tolerance,
                              config.max_iterations);
    return compass_search(f, std::move(x0), config.initial_step, config.tolerance,
                          config.max_iterations);
}

double schedule_objective(const DiagonalProblem &problem, const Laplacian &lap,
                          const Schedule &schedule, const Objective &objective,
                          const Statevector &initial) {
    return evaluate(objective, qaoa_state(problem, lap, schedule, initial), problem, &lap);
}

Schedule ramp_schedule(int p, double gamma1, double beta1) {
    if (p < 1)
        throw DomainError("schedule needs at least one round");
    std::vector<double> g(static_cast<std::size_t>(p));
    std::vector<double> b(static_cast<std::size_t>(p));
    for (int k = 1; k <= p; ++k) {
        g[static_cast<std::size_t>(k - 1)] = gamma1 * k / p;
        b[static_cast<std::size_t>(k - 1)] = beta1 * (1.0 - static_cast<double>(k - 1) / p);
    }
    return Schedule(std::move(g), std::move(b));
}

OptimizeResult refine_schedule(const DiagonalProblem &problem, const Laplacian &lap,
                               const Schedule &start, const Objective &objective,
                               const SearchConfig &config,
                               const std::optional<Statevector> &initial) {
    config.validate();
    const Statevector init = initial ? *initial : plus_state(problem.qubits());
    int evaluations = 0;
    const ScalarFunction f = [&](std::span<const double> x) {
        return schedule_objective(problem, lap, start.with_parameters(x), objective, init);
    };
    LocalResult best = local_minimize(f, start.pack(), config);
    evaluations += best.evaluations;
    Rng rng = make_rng(config.seed, 1);
    std::normal_distribution<double> jitter(0.0, config.restart_spread);
    for (int r = 0; r < config.restarts; ++r) {
        std::vector<double> x0 = start.pack();
        for (auto &v : x0)
            v += jitter(rng);
        LocalResult trial = local_minimize(f, std::move(x0), config);
        evaluations += trial.evaluations;
        if (trial.value < best.value - kImprovement)
            best = std::move(trial);
    }
    return OptimizeResult{start.with_parameters(best.x), best.value, evaluations};
}

std::vector<OptimizeResult> optimize_schedules(const DiagonalProblem &problem,
                                               const Laplacian &lap, std::span<const int> depths,
                                               const Objective &objective,
                                               const SearchConfig &config,
                                               const std::optional<Statevector> &initial) {
    config.validate();
    validate(objective);
    for (int p : depths)
        if (p < 1)
            throw DomainError("schedule needs at least one round");
    const Statevector init = initial ? *initial : plus_state(problem.qubits());

    struct Cell {
        double value;
        double gamma;
        double beta;
    };
    std::vector<Cell> cells;
    const int res = config.resolution;
    cells.reserve(static_cast<std::size_t>(res) * static_cast<std::size_t>(res));
    for (int i = 0; i < res; ++i) {
        const double g = grid_point(config.gamma_min, config.gamma_max, i, res);
        for (int j = 0; j < res; ++j) {
            const double b = grid_point(config.beta_min, config.beta_max, j, res);
            const Schedule s({g}, {b});
            cells.push_back({schedule_objective(problem, lap, s, objective, init), g, b});
        }
    }
    const int grid_evaluations = static_cast<int>(cells.size());
    const std::size_t k =
        std::min<std::size_t>(static_cast<std::size_t>(config.top_k), cells.size());
    std::stable_sort(cells.begin(), cells.end(),
                     [](const Cell &a, const Cell &b) { return a.value < b.value; });

    std::vector<OptimizeResult> results;
    for (int p : depths) {
        int evaluations = grid_evaluations;
        std::optional<OptimizeResult> best;
        for (std::size_t c = 0; c < k; ++c) {
            const Schedule start = ramp_schedule(p, cells[c].gamma, cells[c].beta);
            SearchConfig local = config;
            local.restarts = 0;
            OptimizeResult r = refine_schedule(problem, lap, start, objective, local, init);
            evaluations += r.evaluations;
            if (!best || r.value < best->value - kImprovement)
                best = std::move(r);
        }
        if (config.restarts > 0) {
            OptimizeResult r =
                refine_schedule(problem, lap, best->schedule, objective, config, init);
            evaluations += r.evaluations;
            if (r.value < best->value - kImprovement)
                best = std::move(r);
        }
        // local search never accepts a worse point, but p > 1 starts off-grid
        if (p == 1 && cells.front().value < best->value)
            best = OptimizeResult{Schedule({cells.front().gamma}, {cells.front().beta}),
                                  cells.front().value, 0};
        best->evaluations = evaluations;
        results.push_back(std::move(*best));
    }
    return results;
}

OptimizeResult optimize_schedule(const DiagonalProblem &problem, const Laplacian &lap, int p,
                                 const Objective &objective, const SearchConfig &config,
                                 const std::optional<Statevector> &initial) {
    const int depth[] = {p};
    return optimize_schedules(problem, lap, depth, objective, config, initial).front();
}

BranchResult greedy_beta_branch(const DiagonalProblem &problem, int p,
                                const Objective &objective, const SearchConfig &config,
                                int passes) {
    config.validate();
    if (p < 1)
        throw DomainError("schedule needs at least one round");
    const int n = problem.qubits();
    const double low = std::numbers::pi / 4.0;
    const double high = 3.0 * std::numbers::pi / 4.0;
    const Laplacian cube = Laplacian::hypercube(n);
    const Statevector init = plus_state(n);

    auto score = [&](const std::vector<double> &betas) {
        std::vector<double> beta_rows;
        for (int k = 0; k < p; ++k)
            beta_rows.insert(beta_rows.end(), betas.begin(), betas.end());
        auto schedule_for = [&](std::span<const double> gammas) {
            return Schedule(p, 1, std::vector<double>(gammas.begin(), gammas.end()),
                            static_cast<std::size_t>(n), beta_rows, false, true);
        };
        double best_gamma = config.gamma_min;
        double best_value = std::numeric_limits<double>::infinity();
        for (int i = 0; i < config.resolution; ++i) {
            const double g = grid_point(config.gamma_min, config.gamma_max, i, config.resolution);
            const std::vector<double> gs(static_cast<std::size_t>(p), g);
            const double v = schedule_objective(problem, cube, schedule_for(gs), objective, init);
            if (v < best_value) {
                best_value = v;
                best_gamma = g;
            }
        }
        const Schedule start = ramp_schedule(p, best_gamma, 0.0);
        const ScalarFunction f = [&](std::span<const double> gs) {
            return schedule_objective(problem, cube, schedule_for(gs), objective, init);
        };
        const LocalResult r = local_minimize(f, start.all_gammas(), config);
        return std::make_pair(r.value, r.x);
    };

    BranchResult out;
    out.betas.assign(static_cast<std::size_t>(n), low);
    std::tie(out.value, out.gammas) = score(out.betas);
    for (int pass = 0; pass < passes; ++pass) {
        bool changed = false;
        for (int q = 0; q < n; ++q) {
            std::vector<double> trial = out.betas;
            trial[static_cast<std::size_t>(q)] = trial[static_cast<std::size_t>(q)] == low ? high : low;
            auto [value, gammas] = score(trial);
            if (value < out.value - 1e-12) {
                out.betas = std::move(trial);
                out.value = value;
                out.gammas = std::move(gammas);
                changed = true;
            }
        }
        if (!changed)
            break;
    }
    return out;
}

StateSolver qaoa_solver(int p, Objective objective, SearchConfig config) {
    return [p, objective = std::move(objective), config](const DiagonalProblem &sub,
                                                         std::optional<Schedule> &warm) {
        const Laplacian lap = Laplacian::hypercube(sub.qubits());
        if (!warm)
            warm = optimize_schedule(sub, lap, p, objective, config).schedule;
        return qaoa_state(sub, lap, *warm);
    };
}

RoundingResult iterated_rounding(const DiagonalProblem &problem, const StateSolver &solver,
                                 const RoundingConfig &config) {
    const int n = problem.qubits();
    if (config.beta_r < 0.0 || !std::isfinite(config.beta_r))
        throw DomainError("rounding inverse temperature must be finite and >= 0");
    if (config.max_frozen > n)
        throw DomainError("cannot freeze more variables than the problem has");
    const int target = config.max_frozen < 0 ? n : config.max_frozen;

    Rng rng = make_rng(config.seed, 2);
    std::bernoulli_distribution coin(0.5);
    std::vector<int> remaining(static_cast<std::size_t>(n));
    std::iota(remaining.begin(), remaining.end(), 0);
    std::vector<double> fixed_value(static_cast<std::size_t>(n), std::nan(""));
    Bitstring assignment = 0;
    DiagonalProblem sub = problem;
    std::optional<Schedule> warm;
    RoundingResult out;

    auto expand = [&](Bitstring z_sub) {
        Bitstring z = assignment;
        for (std::size_t j = 0; j < remaining.size(); ++j)
            if ((z_sub >> j) & 1U)
                z |= Bitstring{1} << remaining[j];
        return z;
    };

    int frozen = 0;
    while (!remaining.empty()) {
        if (config.reoptimize)
            warm.reset();
        const Statevector state = solver(sub, warm);
        if (state.qubits() != sub.qubits())
            throw ShapeError("solver returned a state of the wrong size");
        const auto probs = state.probabilities();
        double success = 0.0;
        double energy = 0.0;
        for (std::size_t z = 0; z < probs.size(); ++z) {
            const Bitstring full = expand(z);
            energy += probs[z] * problem.table().values[full];
            if (problem.is_optimal(full))
                success += probs[z];
        }
        out.success_curve.push_back(success);
        out.energy_curve.push_back(energy);

        if (frozen >= target) {
            const auto best = std::max_element(probs.begin(), probs.end()) - probs.begin();
            assignment = expand(static_cast<Bitstring>(best));
            remaining.clear();
            break;
        }

        std::vector<double> marginal(remaining.size(), 0.0);
        for (std::size_t z = 0; z < probs.size(); ++z)
            for (std::size_t j = 0; j < remaining.size(); ++j)
                if ((z >> j) & 1U)
                    marginal[j] += probs[z];

        std::vector<double> polar(remaining.size());
        for (std::size_t j = 0; j < remaining.size(); ++j)
            polar[j] = config.beta_r * std::abs(marginal[j] - 0.5);
        const double top = *std::max_element(polar.begin(), polar.end());
        std::vector<double> weights(remaining.size());
        for (std::size_t j = 0; j < remaining.size(); ++j)
            weights[j] = std::exp(polar[j] - top);
        std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
        const std::size_t j = pick(rng);

        int value = 0;
        if (std::abs(marginal[j] - 0.5) < 1e-12)
            value = coin(rng) ? 1 : 0;
        else
            value = marginal[j] > 0.5 ? 1 : 0;

        RoundingStep step;
        step.marginals = fixed_value;
        for (std::size_t i = 0; i < remaining.size(); ++i)
            step.marginals[static_cast<std::size_t>(remaining[i])] = marginal[i];
        step.chosen = remaining[j];
        step.value = value;
        step.success_probability = success;
        out.trace.push_back(std::move(step));

        fixed_value[static_cast<std::size_t>(remaining[j])] = value;
        if (value)
            assignment |= Bitstring{1} << remaining[j];
        if (remaining.size() > 1)
            sub = sub.fix(static_cast<int>(j), value);
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(j));
        ++frozen;
    }
    if (out.success_curve.size() < static_cast<std::size_t>(frozen) + 1) {
        out.success_curve.push_back(problem.is_optimal(assignment) ? 1.0 : 0.0);
        out.energy_curve.push_back(problem.table().values[assignment]);
    }
    out.assignment = assignment;
    out.optimal = problem.is_optimal(assignment);
    return out;
}

double classical_restart_baseline(const DiagonalProblem &problem, int restarts,
                                  std::uint64_t seed) {
    if (restarts < 1)
        throw DomainError("baseline needs at least one restart");
    const std::size_t n = static_cast<std::size_t>(problem.qubits());
    const ScalarFunction f = [&](std::span<const double> thetas) {
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double s = std::sin(thetas[i]);
            x[i] = std::clamp(s * s, 0.0, 1.0);
        }
        return multilinear_value(problem, x);
    };
    double total = 0.0;
    for (int r = 0; r < restarts; ++r) {
        Rng rng = make_rng(seed, static_cast<std::uint64_t>(r));
        std::uniform_real_distribution<double> angle(0.0, std::numbers::pi);
        std::vector<double> theta(n);
        for (auto &t : theta)
            t = angle(rng);
        const LocalResult res = compass_search(f, std::move(theta), 0.2, 1e-6, 2000);
        double mass = 0.0;
        for (Bitstring z : problem.argmin()) {
            double p = 1.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double s = std::sin(res.x[i]);
                const double x1 = s * s;
                p *= ((z >> i) & 1U) ? x1 : 1.0 - x1;
            }
            mass += p;
        }
        total += mass;
    }
    return total / restarts;
}

} // namespace qlow
