#include "support.hpp"

#include "qlow/error.hpp"
#include "qlow/problems.hpp"

#include <catch_amalgamated.hpp>

#include <bit>
#include <cmath>
#include <map>
#include <numbers>

using namespace qlow;
using Catch::Matchers::WithinAbs;

namespace {

int bit(Bitstring z, int i) { return static_cast<int>((z >> i) & 1U); }
double spin(Bitstring z, int i) { return 1.0 - 2.0 * bit(z, i); }

/// Term list and dense table agree, and the recorded extrema match a scan.
void check_consistent(const DiagonalProblem &p) {
    const auto dense = dense_from_terms(p.qubits(), p.terms());
    const auto &table = p.table().values;
    REQUIRE(dense.values.size() == table.size());
    double mn = INFINITY;
    double mx = -INFINITY;
    for (std::size_t z = 0; z < table.size(); ++z) {
        CHECK_THAT(dense.values[z], WithinAbs(table[z], 1e-9));
        CHECK_THAT(p.evaluate(z), WithinAbs(table[z], 1e-9));
        mn = std::min(mn, table[z]);
        mx = std::max(mx, table[z]);
    }
    CHECK(p.f_min() == mn);
    CHECK(p.f_max() == mx);
    std::vector<Bitstring> argmin;
    for (std::size_t z = 0; z < table.size(); ++z)
        if (table[z] <= mn + 1e-9)
            argmin.push_back(z);
    CHECK(p.argmin() == argmin);
}

} // namespace

TEST_CASE("uncoupled spins") {
    const auto binary = uncoupled_spins(3, SpinDistribution::binary, 11);
    REQUIRE(binary.terms().size() == 3);
    for (const auto &t : binary.terms()) {
        CHECK(t.qubits.size() == 1);
        CHECK(std::abs(t.coeff) == 1.0);
    }
    for (auto dist : {SpinDistribution::binary, SpinDistribution::uniform,
                      SpinDistribution::gaussian}) {
        const auto p = uncoupled_spins(8, dist, 5);
        check_consistent(p);
        Bitstring expected = 0;
        for (const auto &t : p.terms())
            if (t.coeff > 0)
                expected |= Bitstring{1} << t.qubits[0];
        REQUIRE(p.argmin().size() == 1);
        CHECK(p.argmin()[0] == expected);
    }
    CHECK_THROWS_AS(parse_distribution("cauchy"), DomainError);
    for (auto dist : {SpinDistribution::binary, SpinDistribution::uniform,
                      SpinDistribution::gaussian})
        CHECK(parse_distribution(to_string(dist)) == dist);
}

TEST_CASE("gaussian spins have E[f(z*)]/n = -1/sqrt(pi) and variance 1/2") {
    double sum_opt = 0.0;
    double sum_sq = 0.0;
    int count = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const auto p = uncoupled_spins(10, SpinDistribution::gaussian, seed);
        sum_opt += p.f_min() / 10.0;
        for (const auto &t : p.terms()) {
            sum_sq += t.coeff * t.coeff;
            ++count;
        }
    }
    CHECK_THAT(sum_opt / 1000.0, WithinAbs(-1.0 / std::sqrt(std::numbers::pi), 2e-2));
    CHECK_THAT(sum_sq / count, WithinAbs(0.5, 2e-2));
}

TEST_CASE("hamming ramp") {
    const auto p = hamming_ramp(6);
    check_consistent(p);
    CHECK(p.table().values[0] == 0.0);
    CHECK(p.table().values[63] == 6.0);
    CHECK(hamming_ramp(4).table().values[0b0101] == 2.0);
    for (std::size_t z = 0; z < 64; ++z)
        CHECK(p.table().values[z] == std::popcount(z));
}

TEST_CASE("spike") {
    const auto p = spike(8, 0.0, 1.0);
    check_consistent(p);
    CHECK(p.table().values[0] == 0.0);
    for (std::size_t z = 0; z < 256; ++z) {
        const int w = std::popcount(z);
        CHECK_THAT(p.table().values[z], WithinAbs(w == 2 ? 10.0 : w, 1e-9));
    }
    // wider band: n = 16, a = 0.5 gives n^a / 2 = 2, band [2, 6]
    const auto wide = spike(16, 0.5, 1.0);
    for (Bitstring z : {Bitstring{0}, Bitstring{0b1}, Bitstring{0b11}, Bitstring{0x3F},
                        Bitstring{0x7F}}) {
        const int w = std::popcount(z);
        const bool in_band = w >= 2 && w <= 6;
        CHECK_THAT(wide.table().values[z], WithinAbs(w + (in_band ? 16.0 : 0.0), 1e-9));
    }
    CHECK_THROWS_AS(spike(6, 0.0, 1.0), DomainError);

    const auto mirrored = spike_centered(8, 0.0, 2.0, 6.0);
    CHECK_THAT(mirrored.table().values[0x3F], WithinAbs(6.0 + 64.0, 1e-9));
    CHECK_THAT(mirrored.table().values[0x03], WithinAbs(2.0, 1e-9));
}

TEST_CASE("bush") {
    const auto p = bush(3);
    check_consistent(p);
    const std::vector<double> expected{1, 1, 1, 2, 1, 2, 1, 3};
    for (std::size_t z = 0; z < 8; ++z)
        CHECK_THAT(p.table().values[z], WithinAbs(expected[z], 1e-12));
    CHECK_THAT(bush(1).table().values[1], WithinAbs(1.0, 1e-12));
}

TEST_CASE("k-spin ferromagnet") {
    const auto p = kspin_ferromagnet(3, 3);
    check_consistent(p);
    // -(Z1 + Z2 + Z3)^3 = -7 (Z1 + Z2 + Z3) - 6 Z1 Z2 Z3
    std::map<std::vector<int>, double> coeffs;
    for (const auto &t : p.terms())
        coeffs[t.qubits] += t.coeff;
    for (const auto &[qubits, c] : coeffs) {
        if (qubits.size() == 1)
            CHECK_THAT(c, WithinAbs(-7.0, 1e-12));
        else if (qubits.size() == 3)
            CHECK_THAT(c, WithinAbs(-6.0, 1e-12));
        else
            CHECK_THAT(c, WithinAbs(0.0, 1e-12));
    }
    for (int n : {3, 5, 7}) {
        const auto q = kspin_ferromagnet(n, 3);
        CHECK(q.table().values[0] == -std::pow(n, 3));
        REQUIRE(q.argmin().size() == 1);
        CHECK(q.argmin()[0] == 0);
    }
}

TEST_CASE("conflicted pairs") {
    const double eps = 0.1;
    const double delta = 3.0;
    const auto p = conflicted_pairs(2, eps, delta);
    check_consistent(p);
    const auto &v = p.table().values;
    CHECK_THAT(v[0b00], WithinAbs(delta - 2.0 - eps, 1e-12));
    CHECK_THAT(v[0b10], WithinAbs(-delta - eps, 1e-12)); // z0 = 0, z1 = 1
    CHECK_THAT(v[0b01], WithinAbs(-delta + eps, 1e-12)); // z0 = 1, z1 = 0
    CHECK_THAT(v[0b11], WithinAbs(delta + 2.0 + eps, 1e-12));
    REQUIRE(p.argmin().size() == 1);
    CHECK(p.argmin()[0] == 0b10);

    const auto four = conflicted_pairs(6, eps, delta);
    int one_body = 0;
    int two_body = 0;
    for (const auto &t : four.terms())
        (t.qubits.size() == 1 ? one_body : two_body) += 1;
    CHECK(one_body == 6);
    CHECK(two_body == 3);
    CHECK_THROWS_AS(conflicted_pairs(2, eps, 2.0 + eps), DomainError);
    CHECK_THROWS_AS(conflicted_pairs(3, eps, delta), DomainError);
}

TEST_CASE("fisher chain") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto p = fisher_chain(6, seed);
        check_consistent(p);
        for (double v : p.table().values)
            CHECK(v >= -1e-12);
        CHECK(p.argmin() == std::vector<Bitstring>{0, 63});
        CHECK_THAT(p.f_min(), WithinAbs(0.0, 1e-12));
        for (const auto &t : p.terms())
            if (t.qubits.size() == 2) {
                const double j = -2.0 * t.coeff;
                CHECK((j == 1.0 || j == 2.0));
            }
    }
    // brute force against the definition for a fixed seed
    const auto p = fisher_chain(4, 9);
    std::vector<double> js;
    for (const auto &t : p.terms())
        if (t.qubits.size() == 2)
            js.push_back(-2.0 * t.coeff);
    REQUIRE(js.size() == 3);
    for (Bitstring z = 0; z < 16; ++z) {
        double f = 0.0;
        for (int i = 0; i < 3; ++i)
            f += js[static_cast<std::size_t>(i)] / 2.0 * (1.0 - spin(z, i) * spin(z, i + 1));
        CHECK_THAT(p.table().values[z], WithinAbs(f, 1e-12));
    }
}

TEST_CASE("grid and chain ferromagnets") {
    const auto square = grid_ferromagnet_2d(2, 2, 1.0);
    check_consistent(square);
    int edges = 0;
    for (const auto &t : square.terms())
        if (t.qubits.size() == 2) {
            ++edges;
            CHECK(t.coeff == -1.0);
        }
    CHECK(edges == 4);

    const auto grid = grid_ferromagnet_2d(3, 4, 0.3);
    check_consistent(grid);
    int grid_edges = 0;
    int detuned = 0;
    for (const auto &t : grid.terms())
        if (t.qubits.size() == 2) {
            ++grid_edges;
            if (t.coeff == -0.3)
                ++detuned;
            // columns 0 and 1 form the first block
            const int c0 = t.qubits[0] % 4;
            const int c1 = t.qubits[1] % 4;
            const bool inside_first = c0 < 2 && c1 < 2;
            CHECK(t.coeff == (inside_first ? -1.0 : -0.3));
        }
    CHECK(grid_edges == 17);
    CHECK(detuned == 10);
    CHECK(grid.argmin() == std::vector<Bitstring>{0, 4095});

    const auto chain = chain_detuned(6, 0.5);
    check_consistent(chain);
    std::vector<double> couplings;
    for (const auto &t : chain.terms())
        if (t.qubits.size() == 2)
            couplings.push_back(-t.coeff);
    CHECK(couplings == std::vector<double>{1.0, 1.0, 1.0, 0.5, 0.5});
    CHECK(chain.argmin() == std::vector<Bitstring>{0, 63});
}

TEST_CASE("3-regular max-cut instances") {
    const auto k4 = maxcut_3regular(4, 0.5, 1.0, 1);
    check_consistent(k4);
    int edges = 0;
    for (const auto &t : k4.terms())
        edges += t.qubits.size() == 2;
    CHECK(edges == 6);
    // K4: the best cut has 4 edges, leaving 2 uncut, so f_min = 2 - 4
    CHECK_THAT(k4.f_min(), WithinAbs(-2.0, 1e-12));

    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        Rng rng = make_rng(seed);
        const auto graph = random_3regular_graph(12, rng);
        std::vector<int> degree(12, 0);
        std::set<std::pair<int, int>> unique;
        for (auto [u, v] : graph) {
            CHECK(u != v);
            ++degree[static_cast<std::size_t>(u)];
            ++degree[static_cast<std::size_t>(v)];
            unique.insert({std::min(u, v), std::max(u, v)});
        }
        CHECK(unique.size() == 18);
        for (int d : degree)
            CHECK(d == 3);
    }

    const auto all_one = maxcut_3regular(10, 0.0, 0.2, 3);
    for (const auto &t : all_one.terms())
        if (t.qubits.size() == 2)
            CHECK(t.coeff == 1.0);
    const auto half = maxcut_3regular(10, 0.5, 0.2, 3);
    int j2_edges = 0;
    for (const auto &t : half.terms())
        j2_edges += t.qubits.size() == 2 && t.coeff == 0.2;
    CHECK(j2_edges == 8); // round(15 * 0.5)
    CHECK_THROWS_AS(maxcut_3regular(5, 0.5, 1.0, 0), DomainError);
}

TEST_CASE("generators are deterministic under their seed") {
    CHECK(uncoupled_spins(6, SpinDistribution::gaussian, 4).to_json() ==
          uncoupled_spins(6, SpinDistribution::gaussian, 4).to_json());
    CHECK(maxcut_3regular(10, 0.5, 0.3, 8).to_json() ==
          maxcut_3regular(10, 0.5, 0.3, 8).to_json());
    CHECK(fisher_chain(8, 2).to_json() == fisher_chain(8, 2).to_json());
    CHECK(random_uniform_potential(5, 2).table().values ==
          random_uniform_potential(5, 2).table().values);
    CHECK(uncoupled_spins(6, SpinDistribution::gaussian, 4).to_json() !=
          uncoupled_spins(6, SpinDistribution::gaussian, 5).to_json());
}

TEST_CASE("dense tables match term lists for every generator") {
    for (int n = 4; n <= 12; n += 4) {
        check_consistent(uncoupled_spins(n, SpinDistribution::uniform, 1));
        check_consistent(hamming_ramp(n));
        check_consistent(spike(n, 0.0, 2.0));
        check_consistent(bush(n));
        check_consistent(kspin_ferromagnet(n, 2));
        check_consistent(conflicted_pairs(n, 0.2, 3.0));
        check_consistent(fisher_chain(n, 1));
        check_consistent(chain_detuned(n, 0.4));
        check_consistent(maxcut_3regular(n, 0.5, 0.4, 2));
        check_consistent(random_uniform_potential(n, 3));
    }
    check_consistent(grid_ferromagnet_2d(3, 4, 0.6));
}

TEST_CASE("from_table recovers the Z expansion") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto p = testing::random_problem(7, 12, seed);
        const auto q = DiagonalProblem::from_table(7, p.table().values);
        check_consistent(q);
        for (std::size_t z = 0; z < 128; ++z)
            CHECK_THAT(q.evaluate(z), WithinAbs(p.table().values[z], 1e-12));
    }
    CHECK_THROWS_AS(DiagonalProblem::from_table(2, {1.0, 2.0}), ShapeError);
    CHECK_THROWS_AS(DiagonalProblem(2, {{{0, 0}, 1.0}}), DomainError);
    CHECK_THROWS_AS(DiagonalProblem(2, {{{2}, 1.0}}), DomainError);
}

TEST_CASE("fixing a variable folds it into the remaining terms") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const int n = 8;
        const auto p = testing::random_problem(n, 20, seed);
        const int q = static_cast<int>(seed % n);
        for (int value : {0, 1}) {
            const auto sub = p.fix(q, value);
            REQUIRE(sub.qubits() == n - 1);
            check_consistent(sub);
            for (Bitstring rest = 0; rest < (Bitstring{1} << (n - 1)); ++rest) {
                const Bitstring low = rest & ((Bitstring{1} << q) - 1);
                const Bitstring high = (rest >> q) << (q + 1);
                const Bitstring full = low | high | (Bitstring(value) << q);
                CHECK_THAT(sub.table().values[rest], WithinAbs(p.table().values[full], 1e-12));
            }
        }
    }
    CHECK_THROWS_AS(hamming_ramp(3).fix(3, 0), DomainError);
    CHECK_THROWS_AS(hamming_ramp(3).fix(0, 2), DomainError);
}

TEST_CASE("problem JSON round trip") {
    const auto p = maxcut_3regular(8, 0.5, 0.3, 4);
    const auto j = p.to_json();
    CHECK(j.contains("n"));
    CHECK(j.contains("terms"));
    CHECK(j.contains("meta"));
    const auto q = DiagonalProblem::from_json(j);
    CHECK(q.to_json() == j);
    CHECK(q.table().values == p.table().values);
    CHECK_THROWS_AS(DiagonalProblem::from_json(nlohmann::json{{"terms", 3}}), ConfigError);
}
