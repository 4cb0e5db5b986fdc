#pragma once

#include "qlow/laplacians.hpp"
#include "qlow/problems.hpp"
#include "qlow/statevector.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>

namespace qlow {

struct MeanObjective {};

/// -log <exp(-eta f)>.
struct GibbsObjective {
    double eta = 20.0;
};

/// Mean of the lowest alpha fraction of the outcome distribution.
struct CvarObjective {
    double alpha = 1.0;
};

struct CombinedObjective;

using Objective = std::variant<MeanObjective, GibbsObjective, CvarObjective,
                               std::shared_ptr<const CombinedObjective>>;

/// k1 * inner + k2 * kinetic energy.
struct CombinedObjective {
    double k1 = 1.0;
    double k2 = 0.0;
    Objective inner;
};

Objective make_combined(double k1, double k2, Objective inner);

/// Throws DomainError for out-of-range parameters.
void validate(const Objective &obj);
std::string describe(const Objective &obj);

/// Objective value of the measurement distribution of `state`. Combined
/// objectives need `lap`.
double evaluate(const Objective &obj, const Statevector &state, const DiagonalProblem &problem,
                const Laplacian *lap = nullptr);

/// sum_z p_z f(z) from the dense table.
double mean_energy(const Statevector &state, const DiagonalProblem &problem);

/// sum_t coeff_t <prod_{i in t} Z_i>, computed from the Z-term list.
double mean_energy_termwise(const Statevector &state, const DiagonalProblem &problem);

/// (f_max - mean) / (f_max - f_min); empty when f is constant.
std::optional<double> approximation_ratio(const DiagonalProblem &problem, double mean_value);

/// Single-round angles chosen by an outer optimizer for the improvement
/// proxy: receives the objective of (gamma, beta) and returns the pair.
using AngleSearch =
    std::function<std::pair<double, double>(const std::function<double(double, double)> &)>;

struct ImprovementResult {
    double improvement = 0.0;
    double initial_overlap = 0.0;
    double final_overlap = 0.0;
    double gamma = 0.0;
    double beta = 0.0;
    /// True when f has several minimizers and total ground-state mass was used.
    bool degenerate_target = false;
};

/// Normalized single-round gain (|c_f|^2 - |c_0|^2) / (1 - 2^-n) in the
/// solution overlap after one phase + mixer round, with angles minimizing
/// the mean energy.
ImprovementResult improvement_proxy(const Statevector &initial, const DiagonalProblem &problem,
                                    const Laplacian &lap, const AngleSearch &search);

} // namespace qlow
