#pragma once

#include "qlow/problems.hpp"

namespace qlow {

/// Probability that p = 1 QAOA on a single spin f = alpha Z lands on the
/// minimizer: (1 - sin(2 beta) sin(2 |alpha| gamma)) / 2.
double single_spin_overlap(double alpha, double gamma, double beta);

/// Expected energy alpha <Z> of the same single-spin state:
/// alpha sin(2 beta) sin(2 alpha gamma).
double single_spin_energy(double alpha, double gamma, double beta);

struct DistributionQaoa {
    /// Per-spin expected energy.
    double energy = 0.0;
    /// Per-spin probability of the exact solution.
    double overlap = 0.0;
    /// Per-spin optimal value E[-|alpha|].
    double optimum = 0.0;
    /// (f_max - energy) / (f_max - optimum) with f_max = -optimum.
    double ratio = 0.0;
};

/// Uncoupled spins with coefficients drawn from `dist` (binary +-1,
/// uniform on [-1, 1], Gaussian with density exp(-a^2)/sqrt(pi)).
/// Energies use closed forms; overlaps use adaptive Gauss-Kronrod.
DistributionQaoa distribution_qaoa(SpinDistribution dist, double gamma, double beta);

/// Energy-minimizing gamma at fixed beta by Brent's method on [-2, 0].
double optimal_gamma(SpinDistribution dist, double beta);

struct LandauZener {
    double overlap = 0.0;
    double energy = 0.0;
    double ratio = 0.0;
};

/// Adiabatic success probability 1 - exp(-pi alpha^2 / rate) for one spin.
double landau_zener_probability(double alpha, double rate);

/// Gaussian-averaged linear-ramp annealing figures in closed form:
/// overlap 1 - sqrt(rate / (rate + pi)), energy -sqrt(pi) / (pi + rate),
/// ratio (2 pi + rate) / (2 (pi + rate)).
LandauZener landau_zener(double rate);

/// Gaussian average of landau_zener_probability by quadrature.
double landau_zener_overlap_quadrature(double rate);

/// Integrates i d/dt psi = (alpha Z + rate t X) psi from -half_time to
/// +half_time with fixed-step RK4, starting and scoring in the
/// instantaneous ground state.
double simulate_landau_zener(double alpha, double rate, double half_time, double dt);

/// (1 - 2c)^2 for a disagreement fraction 0 <= c < 1/2.
double measure_vote_bound(double disagreement);

/// Fraction of bitstrings on which two problems of equal size differ.
double disagreement_fraction(const DiagonalProblem &a, const DiagonalProblem &b,
                             double tolerance = 1e-9);

struct RateBound {
    /// Largest ramp rate with overlap^n >= q, i.e. the root of
    /// (1 - sqrt(rate / (rate + pi)))^n = q.
    double exact = 0.0;
    /// Leading behaviour pi (1 - q^{1/n})^2 for large n.
    double approximation = 0.0;
};

RateBound gamma_success_bound(double q, int n);

} // namespace qlow
