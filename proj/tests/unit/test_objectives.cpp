#include "support.hpp"

#include "qlow/ansatz.hpp"
#include "qlow/error.hpp"
#include "qlow/objectives.hpp"

#include <catch_amalgamated.hpp>

#include <numbers>

using namespace qlow;
using Catch::Matchers::WithinAbs;

namespace {

constexpr double kPi = std::numbers::pi;

AngleSearch fixed(double gamma, double beta) {
    return [=](const std::function<double(double, double)> &) { return std::pair{gamma, beta}; };
}

} // namespace

TEST_CASE("mean energy two ways") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto p = testing::random_problem(7, 15, seed);
        const auto s = testing::random_state(7, seed + 100);
        CHECK_THAT(mean_energy(s, p), WithinAbs(mean_energy_termwise(s, p), 1e-12));
        CHECK_THAT(evaluate(MeanObjective{}, s, p), WithinAbs(mean_energy(s, p), 1e-15));
    }
    const auto ramp = hamming_ramp(4);
    CHECK_THAT(mean_energy(plus_state(4), ramp), WithinAbs(2.0, 1e-14));
    CHECK_THAT(mean_energy(Statevector::basis(4, 0b1011), ramp), WithinAbs(3.0, 1e-14));
}

TEST_CASE("Gibbs objective") {
    const auto p = testing::random_problem(6, 12, 4);
    SECTION("equals f on a basis state") {
        for (Bitstring z : {Bitstring{0}, Bitstring{17}, Bitstring{63}})
            for (double eta : {0.1, 5.0, 300.0})
                CHECK_THAT(evaluate(GibbsObjective{eta}, Statevector::basis(6, z), p),
                           WithinAbs(p.table().values[z], 1e-12));
    }
    SECTION("never exceeds the mean") {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const auto s = testing::random_state(6, seed);
            for (double eta : {0.01, 1.0, 20.0})
                CHECK(evaluate(GibbsObjective{eta}, s, p) <= mean_energy(s, p) + 1e-12);
        }
    }
    SECTION("small eta approaches the mean") {
        const auto s = testing::random_state(6, 2);
        CHECK_THAT(evaluate(GibbsObjective{1e-6}, s, p), WithinAbs(mean_energy(s, p), 1e-5));
    }
    SECTION("large eta approaches the supported minimum") {
        const auto s = plus_state(6);
        const double value = evaluate(GibbsObjective{1e3}, s, p);
        // -log(2^-6) / 1e3 above f_min at most
        CHECK(value >= p.f_min() - 1e-12);
        CHECK(value <= p.f_min() + 6.0 * std::log(2.0) / 1e3 + 1e-12);
    }
    SECTION("written out for two outcomes") {
        const auto ramp = hamming_ramp(1);
        const double eta = 2.0;
        const double expected = -std::log(0.5 + 0.5 * std::exp(-eta)) / eta;
        CHECK_THAT(evaluate(GibbsObjective{eta}, plus_state(1), ramp), WithinAbs(expected, 1e-15));
    }
    SECTION("huge eta stays finite") {
        const auto s = testing::random_state(6, 8);
        CHECK(std::isfinite(evaluate(GibbsObjective{1e8}, s, p)));
    }
}

TEST_CASE("CVaR objective") {
    const auto ramp = hamming_ramp(3);
    const auto plus = plus_state(3);
    CHECK_THAT(evaluate(CvarObjective{1.0}, plus, ramp), WithinAbs(1.5, 1e-14));
    // lowest eighth is the single z = 0
    CHECK_THAT(evaluate(CvarObjective{0.125}, plus, ramp), WithinAbs(0.0, 1e-14));
    // lowest half: 1/8 at 0, 3/8 at 1
    CHECK_THAT(evaluate(CvarObjective{0.5}, plus, ramp), WithinAbs(0.75, 1e-14));
    // partial outcome: 1/8 at 0 and 1/8 of the weight-one mass
    CHECK_THAT(evaluate(CvarObjective{0.25}, plus, ramp), WithinAbs(0.5, 1e-14));
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto p = testing::random_problem(6, 10, seed);
        const auto s = testing::random_state(6, seed);
        CHECK_THAT(evaluate(CvarObjective{1.0}, s, p), WithinAbs(mean_energy(s, p), 1e-12));
        double last = -INFINITY;
        for (double alpha : {0.05, 0.2, 0.5, 0.9, 1.0}) {
            const double v = evaluate(CvarObjective{alpha}, s, p);
            CHECK(v >= last - 1e-12);
            CHECK(v >= p.f_min() - 1e-12);
            last = v;
        }
    }
    CHECK_THROWS_AS(evaluate(CvarObjective{0.0}, plus, ramp), DomainError);
    CHECK_THROWS_AS(evaluate(CvarObjective{1.5}, plus, ramp), DomainError);
}

TEST_CASE("combined objective") {
    const auto ramp = hamming_ramp(3);
    const auto lap = Laplacian::hypercube(3);
    const auto s = testing::random_state(3, 6);
    const Objective combined = make_combined(2.0, 0.5, MeanObjective{});
    CHECK_THAT(evaluate(combined, s, ramp, &lap),
               WithinAbs(2.0 * mean_energy(s, ramp) + 0.5 * kinetic_energy(s, lap), 1e-13));
    CHECK_THROWS(evaluate(combined, s, ramp));
    CHECK_THROWS_AS(validate(GibbsObjective{-1.0}), DomainError);
    CHECK_THROWS_AS(validate(make_combined(1.0, 1.0, CvarObjective{2.0})), DomainError);
    CHECK(describe(MeanObjective{}) == "mean");
    CHECK(!describe(combined).empty());
}

TEST_CASE("approximation ratio") {
    const auto ramp = hamming_ramp(4);
    CHECK_THAT(*approximation_ratio(ramp, 0.0), WithinAbs(1.0, 1e-15));
    CHECK_THAT(*approximation_ratio(ramp, 4.0), WithinAbs(0.0, 1e-15));
    CHECK_THAT(*approximation_ratio(ramp, 1.0), WithinAbs(0.75, 1e-15));
    const DiagonalProblem flat(2, {{{}, 3.0}}, ProblemMeta{"constant", {}, 0});
    CHECK_FALSE(approximation_ratio(flat, 3.0).has_value());
}

TEST_CASE("improvement proxy") {
    SECTION("exact ramp round gives improvement one") {
        const int n = 5;
        const auto r = improvement_proxy(plus_state(n), hamming_ramp(n), Laplacian::hypercube(n),
                                         fixed(-kPi / 2, kPi / 4));
        CHECK_THAT(r.initial_overlap, WithinAbs(1.0 / 32, 1e-15));
        CHECK_THAT(r.final_overlap, WithinAbs(1.0, 1e-12));
        CHECK_THAT(r.improvement, WithinAbs(1.0, 1e-12));
        CHECK_FALSE(r.degenerate_target);
        CHECK(r.gamma == -kPi / 2);
    }
    SECTION("zero angles give zero") {
        const auto r = improvement_proxy(testing::random_state(4, 1), hamming_ramp(4),
                                         Laplacian::hypercube(4), fixed(0.0, 0.0));
        CHECK_THAT(r.improvement, WithinAbs(0.0, 1e-15));
    }
    SECTION("the search sees the mean energy") {
        const auto ramp = hamming_ramp(3);
        const auto lap = Laplacian::hypercube(3);
        double seen = 0.0;
        AngleSearch probe = [&](const std::function<double(double, double)> &f) {
            seen = f(-kPi / 2, kPi / 4);
            return std::pair{0.0, 0.0};
        };
        improvement_proxy(plus_state(3), ramp, lap, probe);
        CHECK_THAT(seen, WithinAbs(0.0, 1e-12));
    }
    SECTION("degenerate minimizers use total ground-state mass") {
        const DiagonalProblem pair(2, {{{0, 1}, -1.0}}, ProblemMeta{"pair", {}, 0});
        const auto r = improvement_proxy(plus_state(2), pair, Laplacian::hypercube(2),
                                         fixed(-kPi / 4, kPi / 8));
        CHECK(r.degenerate_target);
        CHECK_THAT(r.initial_overlap, WithinAbs(0.5, 1e-15));
        CHECK_THAT(r.final_overlap, WithinAbs(1.0, 1e-12));
        CHECK_THAT(r.improvement, WithinAbs(0.5 / 0.75, 1e-12));
    }
}
