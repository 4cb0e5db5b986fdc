#include "qlow/ansatz.hpp"

#include "qlow/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace qlow {

Schedule::Schedule(std::vector<double> gammas, std::vector<double> betas)
    : rounds_(static_cast<int>(gammas.size())), gamma_width_(1), beta_width_(1),
      gammas_(std::move(gammas)), betas_(std::move(betas)), gamma_relaxed_(false),
      beta_relaxed_(false) {
    validate();
}

Schedule::Schedule(int rounds, std::size_t gamma_width, std::vector<double> gammas,
                   std::size_t beta_width, std::vector<double> betas, bool gamma_relaxed,
                   bool beta_relaxed)
    : rounds_(rounds), gamma_width_(gamma_width), beta_width_(beta_width),
      gammas_(std::move(gammas)), betas_(std::move(betas)), gamma_relaxed_(gamma_relaxed),
      beta_relaxed_(beta_relaxed) {
    validate();
}

void Schedule::validate() const {
    if (rounds_ < 1)
        throw DomainError("schedule needs at least one round");
    if (gamma_width_ < 1 || beta_width_ < 1)
        throw ShapeError("schedule widths must be positive");
    if (!gamma_relaxed_ && gamma_width_ != 1)
        throw ShapeError("standard gamma schedule must have one angle per round");
    if (!beta_relaxed_ && beta_width_ != 1)
        throw ShapeError("standard beta schedule must have one angle per round");
    if (gammas_.size() != static_cast<std::size_t>(rounds_) * gamma_width_)
        throw ShapeError("gamma schedule has " + std::to_string(gammas_.size()) +
                         " entries, expected " +
                         std::to_string(static_cast<std::size_t>(rounds_) * gamma_width_));
    if (betas_.size() != static_cast<std::size_t>(rounds_) * beta_width_)
        throw ShapeError("beta schedule has " + std::to_string(betas_.size()) +
                         " entries, expected " +
                         std::to_string(static_cast<std::size_t>(rounds_) * beta_width_));
    for (double v : gammas_)
        if (!std::isfinite(v))
            throw DomainError("schedule angles must be finite");
    for (double v : betas_)
        if (!std::isfinite(v))
            throw DomainError("schedule angles must be finite");
}

Schedule Schedule::relaxed(bool relax_gamma, std::size_t term_count, bool relax_beta,
                           std::size_t qubit_count) const {
    auto widen = [this](const std::vector<double> &src, std::size_t width, std::size_t target) {
        if (width == target)
            return src;
        if (width != 1)
            throw ShapeError("cannot re-broadcast an already relaxed schedule");
        std::vector<double> out;
        out.reserve(static_cast<std::size_t>(rounds_) * target);
        for (int k = 0; k < rounds_; ++k)
            out.insert(out.end(), target, src[static_cast<std::size_t>(k)]);
        return out;
    };
    const std::size_t gw = relax_gamma ? term_count : gamma_width_;
    const std::size_t bw = relax_beta ? qubit_count : beta_width_;
    return Schedule(rounds_, gw, relax_gamma ? widen(gammas_, gamma_width_, gw) : gammas_, bw,
                    relax_beta ? widen(betas_, beta_width_, bw) : betas_,
                    gamma_relaxed_ || relax_gamma, beta_relaxed_ || relax_beta);
}

std::span<const double> Schedule::gammas(int round) const {
    return std::span<const double>(gammas_).subspan(static_cast<std::size_t>(round) * gamma_width_,
                                                    gamma_width_);
}

std::span<const double> Schedule::betas(int round) const {
    return std::span<const double>(betas_).subspan(static_cast<std::size_t>(round) * beta_width_,
                                                   beta_width_);
}

std::vector<double> Schedule::pack() const {
    std::vector<double> out = gammas_;
    out.insert(out.end(), betas_.begin(), betas_.end());
    return out;
}

Schedule Schedule::with_parameters(std::span<const double> params) const {
    if (params.size() != parameter_count())
        throw ShapeError("parameter vector does not match the schedule shape");
    const auto split = params.begin() + static_cast<std::ptrdiff_t>(gammas_.size());
    return Schedule(rounds_, gamma_width_, std::vector<double>(params.begin(), split),
                    beta_width_, std::vector<double>(split, params.end()), gamma_relaxed_,
                    beta_relaxed_);
}

Statevector qaoa_state(const DiagonalProblem &problem, const Laplacian &lap,
                       const Schedule &schedule) {
    return qaoa_state(problem, lap, schedule, plus_state(problem.qubits()));
}

Statevector qaoa_state(const DiagonalProblem &problem, const Laplacian &lap,
                       const Schedule &schedule, Statevector state) {
    const int n = problem.qubits();
    if (state.qubits() != n || lap.qubits() != n)
        throw ShapeError("problem, Laplacian and initial state disagree on qubit count");
    const auto &terms = problem.terms();
    if (schedule.gamma_relaxed() && schedule.gamma_width() != terms.size())
        throw ShapeError("relaxed gamma schedule needs one angle per problem term");
    const WeightedHypercube *cube = lap.as_hypercube();
    if (schedule.beta_relaxed()) {
        if (cube == nullptr)
            throw ModeError("per-qubit mixer angles need a hypercube Laplacian");
        if (schedule.beta_width() != static_cast<std::size_t>(n))
            throw ShapeError("relaxed beta schedule needs one angle per qubit");
    }

    PhaseTable combined{std::vector<double>(state.dim())};
    for (int k = 0; k < schedule.rounds(); ++k) {
        const auto g = schedule.gammas(k);
        if (schedule.gamma_relaxed()) {
            std::fill(combined.values.begin(), combined.values.end(), 0.0);
            for (std::size_t t = 0; t < terms.size(); ++t) {
                const double weight = g[t] * terms[t].coeff;
                const Bitstring m = terms[t].mask();
                for (std::size_t z = 0; z < combined.size(); ++z)
                    combined.values[z] += (std::popcount(z & m) & 1) ? -weight : weight;
            }
            apply_phase(state, combined, 1.0);
        } else {
            apply_phase(state, problem.table(), g[0]);
        }
        state.check_norm();

        const auto b = schedule.betas(k);
        if (schedule.beta_relaxed()) {
            std::vector<double> w(static_cast<std::size_t>(n));
            for (std::size_t q = 0; q < w.size(); ++q)
                w[q] = cube->weights[q] * b[q];
            rotate_x(state, w);
        } else {
            evolve(state, lap, b[0]);
        }
    }
    return state;
}

Statevector product_state(const ProductAngles &angles) {
    const int n = static_cast<int>(angles.thetas.size());
    check_qubit_count(n);
    Statevector s(n);
    for (std::size_t z = 0; z < s.dim(); ++z) {
        double a = 1.0;
        for (int j = 0; j < n; ++j) {
            const double th = angles.thetas[static_cast<std::size_t>(j)];
            a *= ((z >> j) & 1U) ? std::sin(th) : std::cos(th);
        }
        s[z] = a;
    }
    return s;
}

double multilinear_value(const DiagonalProblem &problem, std::span<const double> x) {
    if (x.size() != static_cast<std::size_t>(problem.qubits()))
        throw ShapeError("multilinear extension needs one coordinate per qubit");
    for (double v : x)
        if (!(v >= 0.0 && v <= 1.0))
            throw DomainError("multilinear extension is defined on [0, 1]^n");
    double acc = 0.0;
    for (const auto &t : problem.terms()) {
        double prod = t.coeff;
        for (int q : t.qubits)
            prod *= 1.0 - 2.0 * x[static_cast<std::size_t>(q)];
        acc += prod;
    }
    return acc;
}

ProductState plus_product(int n) {
    check_qubit_count(n);
    const double a = 1.0 / std::sqrt(2.0);
    return ProductState(static_cast<std::size_t>(n), QubitState{complex{a, 0.0}, complex{a, 0.0}});
}

ProductState basis_product(int n, Bitstring z) {
    check_qubit_count(n);
    ProductState out(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
        out[static_cast<std::size_t>(j)] =
            ((z >> j) & 1U) ? QubitState{0.0, 1.0} : QubitState{1.0, 0.0};
    return out;
}

std::vector<double> z_expectations(const ProductState &state) {
    std::vector<double> out;
    out.reserve(state.size());
    for (const auto &q : state) {
        const double nrm = std::norm(q[0]) + std::norm(q[1]);
        if (!(nrm > 0.0))
            throw DomainError("product state has a zero qubit factor");
        out.push_back((std::norm(q[0]) - std::norm(q[1])) / nrm);
    }
    return out;
}

std::vector<double> meanfield_fields(const DiagonalProblem &problem, const ProductState &state) {
    if (state.size() != static_cast<std::size_t>(problem.qubits()))
        throw ShapeError("product state and problem disagree on qubit count");
    const auto z = z_expectations(state);
    std::vector<double> fields(state.size(), 0.0);
    for (const auto &t : problem.terms()) {
        for (int j : t.qubits) {
            double c = t.coeff;
            for (int i : t.qubits)
                if (i != j)
                    c *= z[static_cast<std::size_t>(i)];
            fields[static_cast<std::size_t>(j)] += c;
        }
    }
    return fields;
}

ProductState meanfield_step(const DiagonalProblem &problem, const Laplacian &lap,
                            const ProductState &state, double gamma, double beta) {
    const WeightedHypercube *cube = lap.as_hypercube();
    if (cube == nullptr)
        throw ModeError("mean-field evolution is implemented for hypercube mixers only");
    if (lap.qubits() != problem.qubits())
        throw ShapeError("Laplacian and problem disagree on qubit count");
    const auto fields = meanfield_fields(problem, state);
    ProductState out = state;
    const complex minus_i{0.0, -1.0};
    for (std::size_t j = 0; j < out.size(); ++j) {
        auto &q = out[j];
        const double phi = gamma * fields[j];
        q[0] *= std::polar(1.0, -phi);
        q[1] *= std::polar(1.0, phi);
        const double angle = beta * cube->weights[j];
        const double c = std::cos(angle);
        const complex s = minus_i * std::sin(angle);
        const complex a0 = q[0];
        const complex a1 = q[1];
        q[0] = c * a0 + s * a1;
        q[1] = s * a0 + c * a1;
    }
    return out;
}

ProductState meanfield_state(const DiagonalProblem &problem, const Laplacian &lap,
                             const Schedule &schedule, ProductState state) {
    if (schedule.gamma_relaxed() || schedule.beta_relaxed())
        throw ModeError("mean-field evolution takes a standard schedule");
    for (int k = 0; k < schedule.rounds(); ++k)
        state = meanfield_step(problem, lap, state, schedule.gammas(k)[0], schedule.betas(k)[0]);
    return state;
}

Statevector to_statevector(const ProductState &state) {
    const int n = static_cast<int>(state.size());
    check_qubit_count(n);
    Statevector s(n);
    for (std::size_t z = 0; z < s.dim(); ++z) {
        complex a{1.0, 0.0};
        for (int j = 0; j < n; ++j)
            a *= state[static_cast<std::size_t>(j)][(z >> j) & 1U];
        s[z] = a;
    }
    return s;
}

double product_overlap(const ProductState &state, Bitstring z) {
    double p = 1.0;
    for (std::size_t j = 0; j < state.size(); ++j) {
        const auto &q = state[j];
        p *= std::norm(q[(z >> j) & 1U]) / (std::norm(q[0]) + std::norm(q[1]));
    }
    return p;
}

} // namespace qlow
