#include "qlow/objectives.hpp"

#include "qlow/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

namespace qlow {

namespace {

void check_sizes(const Statevector &state, const DiagonalProblem &problem) {
    if (state.qubits() != problem.qubits())
        throw ShapeError("state and problem disagree on qubit count");
}

double gibbs(const Statevector &state, const DiagonalProblem &problem, double eta) {
    const auto &f = problem.table().values;
    // shift by the smallest supported value so every exponent is <= 0
    double shift = INFINITY;
    for (std::size_t z = 0; z < f.size(); ++z)
        if (std::norm(state[z]) > 0.0)
            shift = std::min(shift, f[z]);
    if (!std::isfinite(shift))
        throw NumericError("Gibbs objective of a state with empty support");
    double acc = 0.0;
    for (std::size_t z = 0; z < f.size(); ++z) {
        const double p = std::norm(state[z]);
        if (p > 0.0)
            acc += p * std::exp(-eta * (f[z] - shift));
    }
    const double value = shift - std::log(acc) / eta;
    if (!std::isfinite(value) || acc <= 0.0)
        throw NumericError("Gibbs objective overflowed");
    return value;
}

double cvar(const Statevector &state, const DiagonalProblem &problem, double alpha) {
    const auto &f = problem.table().values;
    std::vector<std::size_t> order(f.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&f](std::size_t a, std::size_t b) { return f[a] < f[b]; });
    const double total = state.norm_squared();
    const double budget = alpha * total;
    double taken = 0.0;
    double acc = 0.0;
    for (std::size_t z : order) {
        if (taken >= budget)
            break;
        const double p = std::min(std::norm(state[z]), budget - taken);
        acc += p * f[z];
        taken += p;
    }
    return acc / taken;
}

} // namespace

Objective make_combined(double k1, double k2, Objective inner) {
    return std::make_shared<const CombinedObjective>(CombinedObjective{k1, k2, std::move(inner)});
}

void validate(const Objective &obj) {
    std::visit(
        [](const auto &o) {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, GibbsObjective>) {
                if (!(o.eta > 0.0) || !std::isfinite(o.eta))
                    throw DomainError("Gibbs inverse temperature must be positive");
            } else if constexpr (std::is_same_v<T, CvarObjective>) {
                if (!(o.alpha > 0.0 && o.alpha <= 1.0))
                    throw DomainError("CVaR alpha must lie in (0, 1]");
            } else if constexpr (std::is_same_v<T, std::shared_ptr<const CombinedObjective>>) {
                if (!o)
                    throw DomainError("combined objective without an inner objective");
                if (!std::isfinite(o->k1) || !std::isfinite(o->k2))
                    throw DomainError("combined objective weights must be finite");
                validate(o->inner);
            }
        },
        obj);
}

std::string describe(const Objective &obj) {
    return std::visit(
        [](const auto &o) -> std::string {
            using T = std::decay_t<decltype(o)>;
            std::ostringstream out;
            if constexpr (std::is_same_v<T, MeanObjective>)
                out << "mean";
            else if constexpr (std::is_same_v<T, GibbsObjective>)
                out << "gibbs(" << o.eta << ")";
            else if constexpr (std::is_same_v<T, CvarObjective>)
                out << "cvar(" << o.alpha << ")";
            else
                out << "combined(" << o->k1 << ";" << o->k2 << ";" << describe(o->inner) << ")";
            return out.str();
        },
        obj);
}

double mean_energy(const Statevector &state, const DiagonalProblem &problem) {
    check_sizes(state, problem);
    const auto &f = problem.table().values;
    double acc = 0.0;
    for (std::size_t z = 0; z < f.size(); ++z)
        acc += std::norm(state[z]) * f[z];
    return acc;
}

double mean_energy_termwise(const Statevector &state, const DiagonalProblem &problem) {
    check_sizes(state, problem);
    const auto probs = state.probabilities();
    double acc = 0.0;
    for (const auto &t : problem.terms()) {
        const Bitstring m = t.mask();
        double expect = 0.0;
        for (std::size_t z = 0; z < probs.size(); ++z)
            expect += (std::popcount(z & m) & 1) ? -probs[z] : probs[z];
        acc += t.coeff * expect;
    }
    return acc;
}

double evaluate(const Objective &obj, const Statevector &state, const DiagonalProblem &problem,
                const Laplacian *lap) {
    check_sizes(state, problem);
    validate(obj);
    return std::visit(
        [&](const auto &o) -> double {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, MeanObjective>) {
                return mean_energy(state, problem);
            } else if constexpr (std::is_same_v<T, GibbsObjective>) {
                return gibbs(state, problem, o.eta);
            } else if constexpr (std::is_same_v<T, CvarObjective>) {
                if (o.alpha >= 1.0)
                    return mean_energy(state, problem);
                return cvar(state, problem, o.alpha);
            } else {
                if (lap == nullptr)
                    throw DomainError("combined objective needs a Laplacian");
                return o->k1 * evaluate(o->inner, state, problem, lap) +
                       o->k2 * kinetic_energy(state, *lap);
            }
        },
        obj);
}

std::optional<double> approximation_ratio(const DiagonalProblem &problem, double mean_value) {
    const double span = problem.f_max() - problem.f_min();
    if (!(span > 1e-12))
        return std::nullopt;
    return (problem.f_max() - mean_value) / span;
}

ImprovementResult improvement_proxy(const Statevector &initial, const DiagonalProblem &problem,
                                    const Laplacian &lap, const AngleSearch &search) {
    check_sizes(initial, problem);
    ImprovementResult out;
    out.degenerate_target = problem.argmin().size() > 1;
    auto overlap = [&](const Statevector &s) {
        return out.degenerate_target ? ground_state_mass(s, problem.table())
                                     : overlap_probability(s, problem.argmin().front());
    };
    auto run = [&](double gamma, double beta) {
        Statevector s = initial;
        apply_phase(s, problem.table(), gamma);
        evolve(s, lap, beta);
        return s;
    };
    const auto [gamma, beta] =
        search([&](double g, double b) { return mean_energy(run(g, b), problem); });
    out.gamma = gamma;
    out.beta = beta;
    out.initial_overlap = overlap(initial);
    out.final_overlap = overlap(run(gamma, beta));
    const double dim = static_cast<double>(initial.dim());
    out.improvement = (out.final_overlap - out.initial_overlap) / (1.0 - 1.0 / dim);
    return out;
}

} // namespace qlow
