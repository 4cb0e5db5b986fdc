#include "qlow/analytic.hpp"

#include "qlow/error.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/numeric/odeint.hpp>

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

namespace qlow {

namespace {

constexpr double kGaussianCutoff = 8.0;
constexpr double kQuadratureTolerance = 1e-12;

template <class F>
double integrate(F f, double lo, double hi) {
    double error = 0.0;
    const double value =
        boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, lo, hi, 15,
                                                                      kQuadratureTolerance,
                                                                      &error);
    if (!std::isfinite(value) || error > 1e-8 * std::max(1.0, std::abs(value)))
        throw NumericError("quadrature did not converge");
    return value;
}

double gaussian_density(double a) {
    return std::exp(-a * a) / std::sqrt(std::numbers::pi);
}

} // namespace

double single_spin_overlap(double alpha, double gamma, double beta) {
    return 0.5 * (1.0 - std::sin(2.0 * beta) * std::sin(2.0 * std::abs(alpha) * gamma));
}

double single_spin_energy(double alpha, double gamma, double beta) {
    return alpha * std::sin(2.0 * beta) * std::sin(2.0 * alpha * gamma);
}

DistributionQaoa distribution_qaoa(SpinDistribution dist, double gamma, double beta) {
    DistributionQaoa out;
    const double s2b = std::sin(2.0 * beta);
    switch (dist) {
    case SpinDistribution::binary:
        out.energy = s2b * std::sin(2.0 * gamma);
        out.overlap = single_spin_overlap(1.0, gamma, beta);
        out.optimum = -1.0;
        break;
    case SpinDistribution::uniform:
        if (std::abs(gamma) < 1e-6) {
            // series of (sin 2g - 2g cos 2g) / (4 g^2) around 0
            out.energy = s2b * (2.0 * gamma / 3.0);
        } else {
            out.energy = s2b * (std::sin(2.0 * gamma) - 2.0 * gamma * std::cos(2.0 * gamma)) /
                         (4.0 * gamma * gamma);
        }
        out.overlap =
            integrate([&](double a) { return single_spin_overlap(a, gamma, beta); }, 0.0, 1.0);
        out.optimum = -0.5;
        break;
    case SpinDistribution::gaussian:
        out.energy = std::exp(-gamma * gamma) * gamma * s2b;
        out.overlap = 2.0 * integrate(
                                [&](double a) {
                                    return gaussian_density(a) *
                                           single_spin_overlap(a, gamma, beta);
                                },
                                0.0, kGaussianCutoff);
        out.optimum = -1.0 / std::sqrt(std::numbers::pi);
        break;
    }
    out.ratio = (-out.optimum - out.energy) / (-2.0 * out.optimum);
    return out;
}

double optimal_gamma(SpinDistribution dist, double beta) {
    const auto result = boost::math::tools::brent_find_minima(
        [&](double g) { return distribution_qaoa(dist, g, beta).energy; }, -2.0, 0.0, 40);
    return result.first;
}

double landau_zener_probability(double alpha, double rate) {
    if (!(rate > 0.0))
        throw DomainError("annealing rate must be positive");
    return 1.0 - std::exp(-std::numbers::pi * alpha * alpha / rate);
}

LandauZener landau_zener(double rate) {
    if (!(rate > 0.0))
        throw DomainError("annealing rate must be positive");
    const double pi = std::numbers::pi;
    LandauZener out;
    out.overlap = 1.0 - std::sqrt(rate / (rate + pi));
    out.energy = -std::sqrt(pi) / (pi + rate);
    out.ratio = (2.0 * pi + rate) / (2.0 * (pi + rate));
    return out;
}

double landau_zener_overlap_quadrature(double rate) {
    if (!(rate > 0.0))
        throw DomainError("annealing rate must be positive");
    return 2.0 * integrate(
                     [&](double a) {
                         return gaussian_density(a) * landau_zener_probability(a, rate);
                     },
                     0.0, kGaussianCutoff);
}

double simulate_landau_zener(double alpha, double rate, double half_time, double dt) {
    if (!(rate > 0.0) || !(half_time > 0.0) || !(dt > 0.0))
        throw DomainError("annealing simulation needs positive rate, time and step");
    using State = std::array<complex, 2>;
    const complex minus_i{0.0, -1.0};

    // ground state of a Z + x X
    auto ground = [alpha](double x) {
        const double e = std::hypot(alpha, x);
        // eigenvector of eigenvalue -e: (x, -(alpha + e)) up to normalization
        State v{complex{x, 0.0}, complex{-(alpha + e), 0.0}};
        double nrm = std::sqrt(std::norm(v[0]) + std::norm(v[1]));
        if (nrm < 1e-300) {
            v = State{complex{-(e - alpha), 0.0}, complex{x, 0.0}};
            nrm = std::sqrt(std::norm(v[0]) + std::norm(v[1]));
        }
        v[0] /= nrm;
        v[1] /= nrm;
        return v;
    };

    State psi = ground(-rate * half_time);
    auto rhs = [&](const State &x, State &dxdt, double t) {
        const double field = rate * t;
        dxdt[0] = minus_i * (alpha * x[0] + field * x[1]);
        dxdt[1] = minus_i * (field * x[0] - alpha * x[1]);
    };
    boost::numeric::odeint::runge_kutta4<State, double, State, double,
                                         boost::numeric::odeint::array_algebra>
        stepper;
    const auto steps = static_cast<long>(std::llround(2.0 * half_time / dt));
    const double h = 2.0 * half_time / static_cast<double>(steps);
    double t = -half_time;
    for (long k = 0; k < steps; ++k, t = -half_time + k * h)
        stepper.do_step(rhs, psi, t, h);
    const State g = ground(rate * half_time);
    const complex amp = std::conj(g[0]) * psi[0] + std::conj(g[1]) * psi[1];
    return std::norm(amp);
}

double measure_vote_bound(double disagreement) {
    if (!(disagreement >= 0.0 && disagreement < 0.5))
        throw DomainError("disagreement fraction must lie in [0, 1/2)");
    const double d = 1.0 - 2.0 * disagreement;
    return d * d;
}

double disagreement_fraction(const DiagonalProblem &a, const DiagonalProblem &b,
                             double tolerance) {
    if (a.qubits() != b.qubits())
        throw ShapeError("problems disagree on qubit count");
    const auto &fa = a.table().values;
    const auto &fb = b.table().values;
    std::size_t differ = 0;
    for (std::size_t z = 0; z < fa.size(); ++z)
        if (std::abs(fa[z] - fb[z]) > tolerance)
            ++differ;
    return static_cast<double>(differ) / static_cast<double>(fa.size());
}

RateBound gamma_success_bound(double q, int n) {
    if (!(q > 0.0 && q < 1.0))
        throw DomainError("target probability must lie in (0, 1)");
    if (n < 1)
        throw DomainError("qubit count must be positive");
    const double s = std::pow(q, 1.0 / n);
    const double pi = std::numbers::pi;
    return RateBound{pi * (1.0 - s) * (1.0 - s) / ((2.0 - s) * s), pi * (1.0 - s) * (1.0 - s)};
}

} // namespace qlow
