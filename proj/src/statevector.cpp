#include "qlow/statevector.hpp"

#include "qlow/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>

namespace qlow {

namespace {

std::atomic<int> g_max_qubits{kAbsoluteMaxQubits};
std::atomic<std::uint64_t> g_renormalizations{0};

constexpr double kNormTolerance = 1e-10;

} // namespace

int max_qubits() { return g_max_qubits.load(); }

void set_max_qubits(int n) {
    if (n < 1 || n > kAbsoluteMaxQubits)
        throw DomainError("qubit cap must lie in [1, " +
                          std::to_string(kAbsoluteMaxQubits) + "]");
    g_max_qubits.store(n);
}

void check_qubit_count(int n) {
    if (n < 1)
        throw DomainError("qubit count must be >= 1, got " + std::to_string(n));
    if (n > max_qubits())
        throw ResourceError("qubit count " + std::to_string(n) +
                            " exceeds cap " + std::to_string(max_qubits()));
}

Statevector::Statevector(int n) : n_(n) {
    check_qubit_count(n);
    amps_.assign(std::size_t{1} << n, complex{0.0, 0.0});
    amps_[0] = 1.0;
}

Statevector::Statevector(int n, std::vector<complex> amps)
    : n_(n), amps_(std::move(amps)) {
    check_qubit_count(n);
    if (amps_.size() != (std::size_t{1} << n))
        throw ShapeError("statevector of " + std::to_string(n) +
                         " qubits needs 2^n amplitudes, got " +
                         std::to_string(amps_.size()));
}

Statevector Statevector::basis(int n, Bitstring z) {
    Statevector s(n);
    if (z >= s.dim())
        throw DomainError("basis index out of range");
    s.amps_[0] = 0.0;
    s.amps_[z] = 1.0;
    return s;
}

double Statevector::norm_squared() const {
    double acc = 0.0;
    for (const auto &a : amps_)
        acc += std::norm(a);
    return acc;
}

std::vector<double> Statevector::probabilities() const {
    std::vector<double> p(amps_.size());
    std::transform(amps_.begin(), amps_.end(), p.begin(),
                   [](const complex &a) { return std::norm(a); });
    return p;
}

void Statevector::check_norm() {
    const double nrm = norm_squared();
    if (!std::isfinite(nrm) || nrm == 0.0)
        throw NumericError("statevector norm is not finite or vanished");
    if (std::abs(nrm - 1.0) > kNormTolerance) {
        const double s = 1.0 / std::sqrt(nrm);
        for (auto &a : amps_)
            a *= s;
        g_renormalizations.fetch_add(1);
    }
}

std::uint64_t renormalization_events() { return g_renormalizations.load(); }

Statevector plus_state(int n) {
    check_qubit_count(n);
    const std::size_t dim = std::size_t{1} << n;
    const double a = 1.0 / std::sqrt(static_cast<double>(dim));
    return Statevector(n, std::vector<complex>(dim, complex{a, 0.0}));
}

void apply_phase(Statevector &state, const PhaseTable &table, double gamma) {
    if (table.size() != state.dim())
        throw ShapeError("phase table length " + std::to_string(table.size()) +
                         " does not match statevector dimension " +
                         std::to_string(state.dim()));
    if (gamma == 0.0)
        return;
    auto amps = state.amps();
    for (std::size_t z = 0; z < amps.size(); ++z) {
        const double phi = -gamma * table.values[z];
        const double c = std::cos(phi);
        const double s = std::sin(phi);
        const double re = amps[z].real();
        const double im = amps[z].imag();
        amps[z] = complex{c * re - s * im, c * im + s * re};
    }
}

void fwht(std::span<complex> data) {
    const std::size_t dim = data.size();
    if (dim == 0 || (dim & (dim - 1)) != 0)
        throw ShapeError("Walsh-Hadamard transform needs a power-of-two length");
    for (std::size_t h = 1; h < dim; h <<= 1) {
        for (std::size_t block = 0; block < dim; block += 2 * h) {
            for (std::size_t k = block; k < block + h; ++k) {
                const complex a = data[k];
                const complex b = data[k + h];
                data[k] = a + b;
                data[k + h] = a - b;
            }
        }
    }
    const double s = 1.0 / std::sqrt(static_cast<double>(dim));
    for (auto &a : data)
        a *= s;
}

void fwht(Statevector &state) { fwht(state.amps()); }

double overlap_probability(const Statevector &state, Bitstring target) {
    if (target >= state.dim())
        throw DomainError("target bitstring out of range");
    return std::norm(state[target]);
}

double ground_state_mass(const Statevector &state, const PhaseTable &table) {
    if (table.size() != state.dim())
        throw ShapeError("phase table does not match statevector dimension");
    const double fmin = *std::min_element(table.values.begin(), table.values.end());
    double mass = 0.0;
    for (std::size_t z = 0; z < table.size(); ++z)
        if (table.values[z] <= fmin + 1e-9)
            mass += std::norm(state[z]);
    return mass;
}

complex inner_product(const Statevector &a, const Statevector &b) {
    if (a.dim() != b.dim())
        throw ShapeError("inner product of statevectors with different sizes");
    complex acc{0.0, 0.0};
    for (std::size_t z = 0; z < a.dim(); ++z)
        acc += std::conj(a[z]) * b[z];
    return acc;
}

std::vector<Bitstring> sample_basis_states(const Statevector &state, std::size_t shots,
                                           std::mt19937_64 &rng) {
    std::vector<Bitstring> out;
    if (shots == 0)
        return out;
    const auto probs = state.probabilities();
    std::discrete_distribution<Bitstring> pick(probs.begin(), probs.end());
    out.reserve(shots);
    for (std::size_t i = 0; i < shots; ++i)
        out.push_back(pick(rng));
    return out;
}

} // namespace qlow
