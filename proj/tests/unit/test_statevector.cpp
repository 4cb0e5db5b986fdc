#include "support.hpp"

#include "qlow/error.hpp"
#include "qlow/statevector.hpp"

#include <catch_amalgamated.hpp>

#include <bit>
#include <numbers>

using namespace qlow;
using Catch::Matchers::WithinAbs;

TEST_CASE("plus state has uniform amplitudes") {
    const Statevector one = plus_state(1);
    CHECK_THAT(one[0].real(), WithinAbs(std::sqrt(0.5), 1e-15));
    CHECK_THAT(one[1].real(), WithinAbs(std::sqrt(0.5), 1e-15));
    const Statevector two = plus_state(2);
    for (std::size_t z = 0; z < 4; ++z) {
        CHECK_THAT(two[z].real(), WithinAbs(0.5, 1e-15));
        CHECK(two[z].imag() == 0.0);
    }
}

TEST_CASE("qubit count limits") {
    CHECK_THROWS_AS(Statevector(0), DomainError);
    CHECK_THROWS_AS(Statevector(kAbsoluteMaxQubits + 1), ResourceError);
    CHECK_THROWS_AS(Statevector(2, std::vector<complex>(3)), ShapeError);
    CHECK_THROWS_AS(set_max_qubits(kAbsoluteMaxQubits + 1), DomainError);

    const int saved = max_qubits();
    set_max_qubits(4);
    CHECK_THROWS_AS(plus_state(5), ResourceError);
    CHECK_NOTHROW(plus_state(4));
    set_max_qubits(saved);
}

TEST_CASE("apply_phase arithmetic") {
    SECTION("gamma = 0 is the identity") {
        Statevector s = testing::random_state(4, 1);
        const Statevector before = s;
        PhaseTable t{std::vector<double>(16, 3.7)};
        apply_phase(s, t, 0.0);
        CHECK(testing::max_abs_diff(s, before) == 0.0);
    }
    SECTION("single qubit, f = Z, gamma = pi/2") {
        Statevector s = plus_state(1);
        apply_phase(s, PhaseTable{{1.0, -1.0}}, std::numbers::pi / 2);
        const double r = std::sqrt(0.5);
        CHECK_THAT(std::abs(s[0] - complex(0, -r)), WithinAbs(0.0, 1e-15));
        CHECK_THAT(std::abs(s[1] - complex(0, r)), WithinAbs(0.0, 1e-15));
    }
    SECTION("Hamming weight at gamma = pi alternates sign by parity") {
        Statevector s = plus_state(3);
        PhaseTable w{std::vector<double>(8)};
        for (std::size_t z = 0; z < 8; ++z)
            w.values[z] = std::popcount(z);
        apply_phase(s, w, std::numbers::pi);
        for (std::size_t z = 0; z < 8; ++z) {
            const double sign = (std::popcount(z) % 2) ? -1.0 : 1.0;
            CHECK_THAT(std::abs(s[z] - complex(sign / std::sqrt(8.0), 0.0)),
                       WithinAbs(0.0, 1e-15));
        }
    }
    SECTION("length mismatch") {
        Statevector s = plus_state(2);
        CHECK_THROWS_AS(apply_phase(s, PhaseTable{{0.0, 1.0}}, 1.0), ShapeError);
    }
    SECTION("measurement probabilities are unchanged") {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            Statevector s = testing::random_state(6, seed);
            const auto before = s.probabilities();
            PhaseTable t{std::vector<double>(64)};
            for (std::size_t z = 0; z < 64; ++z)
                t.values[z] = std::sin(1.3 * static_cast<double>(z) + static_cast<double>(seed));
            apply_phase(s, t, 0.77 * static_cast<double>(seed + 1));
            const auto after = s.probabilities();
            for (std::size_t z = 0; z < 64; ++z)
                CHECK_THAT(after[z], WithinAbs(before[z], 1e-15));
            CHECK_THAT(s.norm_squared(), WithinAbs(1.0, 1e-12));
        }
    }
}

TEST_CASE("fwht") {
    SECTION("basis zero maps to plus and back") {
        for (int n = 1; n <= 6; ++n) {
            Statevector s(n);
            fwht(s);
            CHECK(testing::max_abs_diff(s, plus_state(n)) < 1e-14);
            fwht(s);
            CHECK(testing::max_abs_diff(s, Statevector(n)) < 1e-14);
        }
    }
    SECTION("involution on random states up to 12 qubits") {
        for (int n = 1; n <= 12; ++n) {
            Statevector s = testing::random_state(n, static_cast<std::uint64_t>(n));
            const Statevector before = s;
            fwht(s);
            fwht(s);
            CHECK(testing::max_abs_diff(s, before) < 1e-12);
        }
    }
    SECTION("matches the explicit Hadamard sum") {
        const int n = 4;
        const Statevector s = testing::random_state(n, 42);
        Statevector t = s;
        fwht(t);
        for (std::size_t x = 0; x < 16; ++x) {
            complex acc = 0.0;
            for (std::size_t y = 0; y < 16; ++y)
                acc += ((std::popcount(x & y) & 1) ? -1.0 : 1.0) * s[y];
            CHECK(std::abs(acc / 4.0 - t[x]) < 1e-14);
        }
    }
}

TEST_CASE("overlap and ground-state mass") {
    const Statevector plus = plus_state(5);
    CHECK_THAT(overlap_probability(plus, 17), WithinAbs(1.0 / 32, 1e-15));
    CHECK(overlap_probability(Statevector::basis(5, 9), 9) == 1.0);
    CHECK_THROWS(overlap_probability(plus, 32));

    PhaseTable unique{{0.5, -1.0, 2.0, 3.0}};
    CHECK_THAT(ground_state_mass(plus_state(2), unique), WithinAbs(0.25, 1e-15));

    // f = -Z1 Z2: both 00 and 11 are optimal
    PhaseTable ferro{{-1.0, 1.0, 1.0, -1.0}};
    Statevector bell(2, {std::sqrt(0.5), 0.0, 0.0, std::sqrt(0.5)});
    CHECK_THAT(ground_state_mass(bell, ferro), WithinAbs(1.0, 1e-15));
    CHECK_THAT(ground_state_mass(plus_state(2), ferro), WithinAbs(0.5, 1e-15));

    // values within 1e-9 of the minimum all count
    PhaseTable near{{0.0, 5e-10, 1.0, 1.0}};
    CHECK_THAT(ground_state_mass(plus_state(2), near), WithinAbs(0.5, 1e-15));
}

TEST_CASE("check_norm renormalizes only real drift") {
    Statevector s = plus_state(3);
    const auto events = renormalization_events();
    s.check_norm();
    CHECK(renormalization_events() == events);
    s[0] *= 1.01;
    s.check_norm();
    CHECK(renormalization_events() == events + 1);
    CHECK_THAT(s.norm_squared(), WithinAbs(1.0, 1e-14));
}

TEST_CASE("inner product") {
    const Statevector a = testing::random_state(5, 3);
    CHECK_THAT(std::abs(inner_product(a, a) - 1.0), WithinAbs(0.0, 1e-14));
    CHECK_THROWS_AS(inner_product(a, plus_state(4)), ShapeError);
}

TEST_CASE("basis sampling") {
    Rng rng = make_rng(5);
    CHECK(sample_basis_states(plus_state(3), 0, rng).empty());

    const auto same = sample_basis_states(Statevector::basis(4, 11), 200, rng);
    REQUIRE(same.size() == 200);
    for (Bitstring z : same)
        CHECK(z == 11);

    SECTION("uniform state passes a chi-squared check over 1e4 shots") {
        const int n = 4;
        const std::size_t shots = 10000;
        Rng r = make_rng(17);
        const auto draws = sample_basis_states(plus_state(n), shots, r);
        std::vector<double> counts(16, 0.0);
        for (Bitstring z : draws)
            counts[z] += 1.0;
        const double expected = static_cast<double>(shots) / 16.0;
        double chi2 = 0.0;
        for (double c : counts)
            chi2 += (c - expected) * (c - expected) / expected;
        // 15 degrees of freedom; 37.7 is the 0.999 quantile
        CHECK(chi2 < 37.7);
    }
    SECTION("seeded sampling is reproducible") {
        Rng a = make_rng(3);
        Rng b = make_rng(3);
        const Statevector s = testing::random_state(5, 8);
        CHECK(sample_basis_states(s, 100, a) == sample_basis_states(s, 100, b));
    }
}
