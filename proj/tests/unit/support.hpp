#pragma once

#include "qlow/problems.hpp"
#include "qlow/random.hpp"
#include "qlow/statevector.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace qlow::testing {

/// Normalized state with i.i.d. Gaussian real and imaginary parts.
inline Statevector random_state(int n, std::uint64_t seed) {
    Rng rng = make_rng(seed, 99);
    std::normal_distribution<double> g;
    std::vector<complex> amps(std::size_t{1} << n);
    double norm = 0.0;
    for (auto &a : amps) {
        a = {g(rng), g(rng)};
        norm += std::norm(a);
    }
    for (auto &a : amps)
        a /= std::sqrt(norm);
    return Statevector(n, std::move(amps));
}

/// Random sparse problem with up to `terms` Z-terms of weight <= 3.
inline DiagonalProblem random_problem(int n, int terms, std::uint64_t seed) {
    Rng rng = make_rng(seed, 7);
    std::uniform_int_distribution<int> weight(0, std::min(3, n));
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    std::vector<ZTerm> out;
    for (int t = 0; t < terms; ++t) {
        std::vector<int> qubits(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            qubits[static_cast<std::size_t>(i)] = i;
        std::shuffle(qubits.begin(), qubits.end(), rng);
        qubits.resize(static_cast<std::size_t>(weight(rng)));
        std::sort(qubits.begin(), qubits.end());
        out.push_back({qubits, coeff(rng)});
    }
    return DiagonalProblem(n, std::move(out), ProblemMeta{"random", {}, seed});
}

inline double max_abs_diff(const Statevector &a, const Statevector &b) {
    double d = 0.0;
    for (std::size_t z = 0; z < a.dim(); ++z)
        d = std::max(d, std::abs(a[z] - b[z]));
    return d;
}

/// max |a - c b| with the global phase c fitted on the largest entry of b.
inline double diff_up_to_phase(const Statevector &a, const Statevector &b) {
    std::size_t k = 0;
    for (std::size_t z = 0; z < b.dim(); ++z)
        if (std::abs(b[z]) > std::abs(b[k]))
            k = z;
    const complex phase = a[k] / b[k];
    double d = 0.0;
    for (std::size_t z = 0; z < a.dim(); ++z)
        d = std::max(d, std::abs(a[z] - phase * b[z]));
    return d;
}

} // namespace qlow::testing
