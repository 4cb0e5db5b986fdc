#pragma once

#include "qlow/ansatz.hpp"
#include "qlow/laplacians.hpp"
#include "qlow/objectives.hpp"
#include "qlow/problems.hpp"
#include "qlow/random.hpp"

#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qlow {

enum class LocalMethod { compass, simplex };

LocalMethod parse_local_method(const std::string &name);
std::string to_string(LocalMethod method);

struct SearchConfig {
    double gamma_min = -std::numbers::pi;
    double gamma_max = std::numbers::pi;
    double beta_min = 0.0;
    double beta_max = std::numbers::pi;
    int resolution = 64;
    /// Local refinement starts from this many of the best grid points.
    int top_k = 5;
    LocalMethod method = LocalMethod::compass;
    double initial_step = 0.1;
    double tolerance = 1e-6;
    int max_iterations = 500;
    /// Extra local runs from randomly perturbed starting points.
    int restarts = 0;
    double restart_spread = 0.3;
    std::uint64_t seed = kDefaultSeed;

    void validate() const;
};

using ScalarFunction = std::function<double(std::span<const double>)>;

struct LocalResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
    int evaluations = 0;
};

/// Coordinate pattern search: sweeps the axes polling +-step, moves as soon
/// as a poll improves, and halves the step after a sweep without a move.
LocalResult compass_search(const ScalarFunction &f, std::vector<double> x0, double step,
                           double tolerance, int max_iterations);

/// Nelder-Mead simplex (GSL nmsimplex2); stops when the simplex size drops
/// below tolerance.
LocalResult simplex_search(const ScalarFunction &f, std::vector<double> x0, double step,
                           double tolerance, int max_iterations);

LocalResult local_minimize(const ScalarFunction &f, std::vector<double> x0,
                           const SearchConfig &config);

struct OptimizeResult {
    Schedule schedule;
    double value;
    int evaluations = 0;
};

/// Objective of the ansatz state for a given schedule.
double schedule_objective(const DiagonalProblem &problem, const Laplacian &lap,
                          const Schedule &schedule, const Objective &objective,
                          const Statevector &initial);

/// p = 1: grid scan then local refinement from the top_k grid points.
/// p > 1: linear ramp scaled from the best p = 1 point, then refinement.
/// The initial state defaults to |+>^{(x)n}.
OptimizeResult optimize_schedule(const DiagonalProblem &problem, const Laplacian &lap, int p,
                                 const Objective &objective, const SearchConfig &config,
                                 const std::optional<Statevector> &initial = std::nullopt);

/// optimize_schedule for several depths sharing one p = 1 grid scan.
std::vector<OptimizeResult> optimize_schedules(const DiagonalProblem &problem,
                                               const Laplacian &lap, std::span<const int> depths,
                                               const Objective &objective,
                                               const SearchConfig &config,
                                               const std::optional<Statevector> &initial =
                                                   std::nullopt);

/// Local refinement of every entry of `start` (which fixes the shape,
/// including relaxation), plus config.restarts perturbed restarts.
OptimizeResult refine_schedule(const DiagonalProblem &problem, const Laplacian &lap,
                               const Schedule &start, const Objective &objective,
                               const SearchConfig &config,
                               const std::optional<Statevector> &initial = std::nullopt);

/// gamma_k = (k/p) gamma1, beta_k = (1 - (k-1)/p) beta1 for k = 1..p.
Schedule ramp_schedule(int p, double gamma1, double beta1);

struct BranchResult {
    /// Per-qubit mixer angle, each pi/4 or 3pi/4.
    std::vector<double> betas;
    std::vector<double> gammas;
    double value = 0.0;
};

/// Greedy sweep over per-qubit mixer angles in {pi/4, 3pi/4} starting from
/// all pi/4. Every candidate is scored after optimizing the p phase angles.
BranchResult greedy_beta_branch(const DiagonalProblem &problem, int p,
                                const Objective &objective, const SearchConfig &config,
                                int passes = 1);

struct RoundingConfig {
    /// Inverse temperature of the variable-selection softmax.
    double beta_r = 10.0;
    /// Maximum number of frozen variables; negative means all n.
    int max_frozen = -1;
    /// Re-optimize on every sub-problem, or reuse the first angles found.
    bool reoptimize = true;
    std::uint64_t seed = kDefaultSeed;
};

/// Produces the state for a (sub-)problem. Uses `warm` unchanged when it
/// holds a schedule; otherwise optimizes one and stores it there.
using StateSolver =
    std::function<Statevector(const DiagonalProblem &, std::optional<Schedule> &warm)>;

/// QAOA on the unit hypercube with optimize_schedule.
StateSolver qaoa_solver(int p, Objective objective, SearchConfig config);

struct RoundingStep {
    /// Marginals <z_i> in original indexing; a frozen variable reports its
    /// assigned value.
    std::vector<double> marginals;
    int chosen = -1;
    int value = 0;
    /// Mass of the solver state on completions that minimize the original f.
    double success_probability = 0.0;
};

struct RoundingResult {
    Bitstring assignment = 0;
    bool optimal = false;
    std::vector<RoundingStep> trace;
    /// success_probability before freezing 0, 1, ..., k variables; the last
    /// entry describes the final readout state.
    std::vector<double> success_curve;
    /// Expected original objective of the same states.
    std::vector<double> energy_curve;
};

RoundingResult iterated_rounding(const DiagonalProblem &problem, const StateSolver &solver,
                                 const RoundingConfig &config);

/// Average ground-state mass of product states found by local search on the
/// multilinear extension from uniformly random angles in [0, pi)^n.
double classical_restart_baseline(const DiagonalProblem &problem, int restarts,
                                  std::uint64_t seed);

} // namespace qlow
