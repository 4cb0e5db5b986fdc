#include "support.hpp"

#include "qlow/analytic.hpp"
#include "qlow/ansatz.hpp"
#include "qlow/error.hpp"
#include "qlow/objectives.hpp"

#include <catch_amalgamated.hpp>

#include <numbers>

using namespace qlow;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double kPi = std::numbers::pi;

/// Composite Simpson rule on [a, b] with 2m panels.
template <typename F>
double simpson(F f, double a, double b, int m = 20000) {
    const double h = (b - a) / (2 * m);
    double acc = f(a) + f(b);
    for (int i = 1; i < 2 * m; ++i)
        acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

/// E[g(a)] for the coefficient law of `dist`.
template <typename G>
double average(SpinDistribution dist, G g) {
    switch (dist) {
    case SpinDistribution::binary:
        return 0.5 * (g(1.0) + g(-1.0));
    case SpinDistribution::uniform:
        return 0.5 * simpson(g, -1.0, 1.0);
    case SpinDistribution::gaussian:
        return simpson([&](double a) { return g(a) * std::exp(-a * a) / std::sqrt(kPi); }, -9.0,
                       9.0);
    }
    return NAN;
}

} // namespace

TEST_CASE("single-spin closed forms match the simulator") {
    Rng rng = make_rng(77);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    for (int trial = 0; trial < 100; ++trial) {
        const double alpha = coeff(rng);
        const double gamma = angle(rng);
        const double beta = angle(rng);
        const DiagonalProblem p(1, {{{0}, alpha}}, ProblemMeta{"spin", {}, 0});
        const Statevector s = qaoa_state(p, Laplacian::hypercube(1), Schedule({gamma}, {beta}));
        CHECK_THAT(single_spin_overlap(alpha, gamma, beta),
                   WithinAbs(overlap_probability(s, p.argmin().front()), 1e-12));
        CHECK_THAT(single_spin_energy(alpha, gamma, beta), WithinAbs(mean_energy(s, p), 1e-12));
    }
}

TEST_CASE("distribution averages against direct quadrature") {
    for (auto dist : {SpinDistribution::binary, SpinDistribution::uniform,
                      SpinDistribution::gaussian})
        for (auto [gamma, beta] : {std::pair{-0.7, 0.5}, std::pair{-1.3, kPi / 4},
                                   std::pair{0.4, 1.1}}) {
            const auto d = distribution_qaoa(dist, gamma, beta);
            const double energy =
                average(dist, [&](double a) { return single_spin_energy(a, gamma, beta); });
            const double overlap =
                average(dist, [&](double a) { return single_spin_overlap(a, gamma, beta); });
            const double optimum = average(dist, [](double a) { return -std::abs(a); });
            CHECK_THAT(d.energy, WithinAbs(energy, 1e-8));
            CHECK_THAT(d.overlap, WithinAbs(overlap, 1e-8));
            CHECK_THAT(d.optimum, WithinAbs(optimum, 1e-8));
            CHECK_THAT(d.ratio, WithinAbs((-optimum - energy) / (-2.0 * optimum), 1e-8));
        }
    CHECK_THAT(distribution_qaoa(SpinDistribution::gaussian, 0.0, 0.0).optimum,
               WithinAbs(-1.0 / std::sqrt(kPi), 1e-12));
    CHECK_THAT(distribution_qaoa(SpinDistribution::uniform, 0.0, 0.0).optimum,
               WithinAbs(-0.5, 1e-12));
}

TEST_CASE("binary spins are solved exactly at the optimal angles") {
    const double gamma = optimal_gamma(SpinDistribution::binary, kPi / 4);
    CHECK_THAT(gamma, WithinAbs(-kPi / 4, 1e-6));
    const auto d = distribution_qaoa(SpinDistribution::binary, gamma, kPi / 4);
    CHECK_THAT(d.energy, WithinAbs(-1.0, 1e-10));
    CHECK_THAT(d.overlap, WithinAbs(1.0, 1e-10));
    CHECK_THAT(d.ratio, WithinAbs(1.0, 1e-10));
}

TEST_CASE("optimal gamma is a stationary minimum") {
    for (auto dist : {SpinDistribution::uniform, SpinDistribution::gaussian}) {
        const double g = optimal_gamma(dist, kPi / 4);
        CHECK(g > -2.0);
        CHECK(g < 0.0);
        const double e = distribution_qaoa(dist, g, kPi / 4).energy;
        for (double dg : {-1e-3, 1e-3, -0.1, 0.1})
            CHECK(distribution_qaoa(dist, g + dg, kPi / 4).energy >= e - 1e-12);
    }
}

TEST_CASE("annealing of Gaussian spins") {
    for (double rate : {0.01, 0.3, 1.0, 7.0}) {
        const auto lz = landau_zener(rate);
        CHECK_THAT(lz.overlap, WithinAbs(1.0 - std::sqrt(rate / (rate + kPi)), 1e-14));
        CHECK_THAT(lz.overlap, WithinAbs(landau_zener_overlap_quadrature(rate), 1e-8));
        CHECK_THAT(lz.overlap,
                   WithinAbs(average(SpinDistribution::gaussian,
                                     [&](double a) { return landau_zener_probability(a, rate); }),
                             1e-8));
        CHECK_THAT(lz.energy, WithinAbs(-std::sqrt(kPi) / (kPi + rate), 1e-14));
        CHECK_THAT(lz.ratio, WithinAbs((2 * kPi + rate) / (2 * (kPi + rate)), 1e-14));
    }
    CHECK_THAT(landau_zener_probability(1.0, kPi), WithinAbs(1.0 - std::exp(-1.0), 1e-15));
}

TEST_CASE("Landau-Zener simulation approaches the asymptotic formula") {
    for (double alpha : {0.3, 0.7}) {
        const double rate = 1.0;
        const double p = simulate_landau_zener(alpha, rate, 60.0, 1e-3);
        CHECK_THAT(p, WithinAbs(landau_zener_probability(alpha, rate), 1e-2));
    }
    // slow sweeps are adiabatic
    CHECK(simulate_landau_zener(1.0, 0.05, 400.0, 2e-3) > 0.999);
}

TEST_CASE("measure-vote bound and disagreement") {
    CHECK(measure_vote_bound(0.0) == 1.0);
    CHECK_THAT(measure_vote_bound(0.25), WithinAbs(0.25, 1e-15));
    CHECK_THROWS_AS(measure_vote_bound(0.5), DomainError);
    CHECK_THROWS_AS(measure_vote_bound(-0.1), DomainError);

    CHECK_THAT(disagreement_fraction(spike(8, 0.0, 1.0), hamming_ramp(8)),
               WithinAbs(28.0 / 256.0, 1e-15));
    CHECK(disagreement_fraction(hamming_ramp(4), hamming_ramp(4)) == 0.0);
    CHECK_THROWS_AS(disagreement_fraction(hamming_ramp(4), hamming_ramp(5)), ShapeError);
}

TEST_CASE("ramp-rate bound") {
    for (int n : {1, 10, 1000}) {
        for (double q : {0.1, 0.5, 0.9}) {
            const auto b = gamma_success_bound(q, n);
            const double overlap = 1.0 - std::sqrt(b.exact / (b.exact + kPi));
            CHECK_THAT(std::pow(overlap, n), WithinRel(q, 1e-8));
            CHECK_THAT(b.approximation, WithinAbs(kPi * std::pow(1.0 - std::pow(q, 1.0 / n), 2), 1e-15));
        }
    }
    const auto big = gamma_success_bound(0.5, 1000000);
    CHECK_THAT(big.approximation / big.exact, WithinAbs(1.0, 1e-3));
    CHECK_THROWS_AS(gamma_success_bound(1.5, 3), DomainError);
    CHECK_THROWS_AS(gamma_success_bound(0.5, 0), DomainError);
}
