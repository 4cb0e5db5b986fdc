#pragma once

#include "qlow/optimize.hpp"
#include "qlow/problems.hpp"
#include "qlow/random.hpp"
#include "qlow/records.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qlow {

struct Fig2Config {
    int sim_qubits = 8;
    int sim_instances = 10000;
    std::vector<int> decay_sizes{4, 8};
    std::uint64_t seed = kDefaultSeed;
    int jobs = 1;
};

/// Per-spin table for binary, uniform and Gaussian uncoupled spins at their
/// optimal angles plus the Gaussian annealing row, with simulated
/// confirmations in each record's details.
ExperimentOutput run_fig2_table(const Fig2Config &config);

enum class ScaleFamily { chain, grid, maxcut };

ScaleFamily parse_scale_family(const std::string &name);
std::string to_string(ScaleFamily family);

struct ScaleInstance {
    ScaleFamily family = ScaleFamily::grid;
    int chain_qubits = 12;
    int grid_rows = 3;
    int grid_cols = 4;
    int maxcut_qubits = 14;
    double maxcut_j2_fraction = 0.5;
};

/// Instance for coupling j2; only maxcut graphs depend on `seed`.
DiagonalProblem make_scale_instance(const ScaleInstance &inst, double j2, std::uint64_t seed);

struct ScaleConfig {
    ScaleInstance instance;
    std::vector<int> depths{1, 2, 3};
    std::vector<double> j2_values{0.2, 0.4, 0.6, 0.8, 1.0};
    int seeds = 1;
    SearchConfig search;
    std::uint64_t seed = kDefaultSeed;
    int jobs = 1;
};

ExperimentOutput run_scale_sweep(const ScaleConfig &config);

struct CeConfig {
    ScaleInstance instance;
    std::vector<int> depths{1, 2, 3, 4, 5, 6};
    std::vector<double> j2_values{0.2, 1.0};
    int seeds = 1;
    int baseline_restarts = 200;
    SearchConfig search;
    std::uint64_t seed = kDefaultSeed;
    int jobs = 1;
};

/// Product-ansatz restart baseline against QAOA per depth; the summary
/// lists the smallest depth at which QAOA matches the baseline.
ExperimentOutput run_ce_baseline(const CeConfig &config);

struct RelaxationConfig {
    int grid_rows = 3;
    int grid_cols = 4;
    std::vector<double> j2_values{0.2, 0.4, 0.6, 0.8, 1.0};
    int seeds = 20;
    SearchConfig search;
    std::uint64_t seed = kDefaultSeed;
    int jobs = 1;
};

/// p = 1 standard, gamma-relaxed, beta-relaxed and fully relaxed QAOA.
/// Relaxed variants start from the standard optimum (the fully relaxed one
/// from the gamma-relaxed optimum); the per-seed RNG drives the perturbed
/// restarts of every local search.
ExperimentOutput run_relaxation_compare(const RelaxationConfig &config);

enum class ShadowVariant { flat, spike_cut };

struct ShadowConfig {
    ShadowVariant variant = ShadowVariant::flat;
    /// flat variant
    std::vector<int> flat_sizes{5, 7, 9};
    int flat_resolution = 32;
    /// spike_cut variant
    int qubits = 8;
    int radius = 5;
    double spike_width_exponent = 0.0;
    double spike_height_exponent = 2.0;
    /// Hamming weight the spike band is centred on; negative means 3n/4.
    double spike_center = -1.0;
    /// Amplitude multiplier on the target inside the initial ball state.
    double target_boost = 3.0;
    double gibbs_eta = 20.0;
    SearchConfig search;
    std::uint64_t seed = kDefaultSeed;
    int jobs = 1;
};

ShadowVariant parse_shadow_variant(const std::string &name);

/// Ball state around z = 0 with the amplitude of z = 0 multiplied by boost.
Statevector boosted_ball_state(int n, int radius, double boost);

ExperimentOutput run_shadow_defect(const ShadowConfig &config);

struct ProxyConfig {
    std::vector<int> sizes{4, 6, 8, 10};
    /// Any of uniform, ball, ball_rand, ball_cut, ball_rand_cut.
    std::vector<std::string> kinds{"uniform", "ball", "ball_rand", "ball_cut", "ball_rand_cut"};
    SearchConfig search;
    std::uint64_t seed = kDefaultSeed;
    int jobs = 1;
};

/// Improvement proxy on the Hamming ramp for uniform, localized-ball and
/// phase-randomized starting states, with and without the ball cut.
ExperimentOutput run_improvement_proxy(const ProxyConfig &config);

struct RoundingExperimentConfig {
    int grid_rows = 3;
    int grid_cols = 4;
    std::vector<double> j2_values{0.2, 1.0};
    int seeds = 20;
    int depth = 1;
    RoundingConfig rounding;
    SearchConfig search;
    std::uint64_t seed = kDefaultSeed;
    int jobs = 1;
};

/// Success probability against frozen-variable count, one table per J2.
ExperimentOutput run_rounding_curves(const RoundingExperimentConfig &config);

/// Element-wise median of equal-length curves.
std::vector<double> median_curve(const std::vector<std::vector<double>> &curves);

} // namespace qlow
