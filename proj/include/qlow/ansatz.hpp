#pragma once

#include "qlow/laplacians.hpp"
#include "qlow/problems.hpp"
#include "qlow/statevector.hpp"

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace qlow {

/// Angles of a p-round alternating ansatz. Round k applies the phase
/// exp(-i gamma f) and then the mixer exp(-i beta Lbar). With gamma
/// relaxation every Z term carries its own angle; with beta relaxation every
/// qubit does (hypercube mixers only).
class Schedule {
  public:
    /// Standard schedule with one gamma and one beta per round.
    Schedule(std::vector<double> gammas, std::vector<double> betas);
    /// gammas is rounds x gamma_width, betas rounds x beta_width, row major.
    Schedule(int rounds, std::size_t gamma_width, std::vector<double> gammas,
             std::size_t beta_width, std::vector<double> betas, bool gamma_relaxed,
             bool beta_relaxed);

    /// Relaxed copy: the per-round gamma (beta) is broadcast to term_count
    /// (qubit_count) entries when the matching flag is set.
    Schedule relaxed(bool relax_gamma, std::size_t term_count, bool relax_beta,
                     std::size_t qubit_count) const;

    int rounds() const { return rounds_; }
    bool gamma_relaxed() const { return gamma_relaxed_; }
    bool beta_relaxed() const { return beta_relaxed_; }
    std::size_t gamma_width() const { return gamma_width_; }
    std::size_t beta_width() const { return beta_width_; }

    std::span<const double> gammas(int round) const;
    std::span<const double> betas(int round) const;
    const std::vector<double> &all_gammas() const { return gammas_; }
    const std::vector<double> &all_betas() const { return betas_; }

    /// Flat parameter vector: all gammas then all betas.
    std::vector<double> pack() const;
    /// Same shape as *this with the values taken from params.
    Schedule with_parameters(std::span<const double> params) const;
    std::size_t parameter_count() const { return gammas_.size() + betas_.size(); }

  private:
    void validate() const;

    int rounds_;
    std::size_t gamma_width_;
    std::size_t beta_width_;
    std::vector<double> gammas_;
    std::vector<double> betas_;
    bool gamma_relaxed_;
    bool beta_relaxed_;
};

/// Internal mixer angle for an angle quoted against the transverse-field
/// driver -sum_i X_i, i.e. exp(-i beta (-sum X)) = exp(-i (-beta) sum X).
inline constexpr double mixer_angle_from_transverse_field(double beta) { return -beta; }

/// Runs the ansatz on `initial` (|+>^{(x)n} when omitted).
Statevector qaoa_state(const DiagonalProblem &problem, const Laplacian &lap,
                       const Schedule &schedule);
Statevector qaoa_state(const DiagonalProblem &problem, const Laplacian &lap,
                       const Schedule &schedule, Statevector initial);

/// Per-qubit Y rotation angles: qubit j is cos(theta_j)|0> + sin(theta_j)|1>.
struct ProductAngles {
    std::vector<double> thetas;
};

Statevector product_state(const ProductAngles &angles);

/// Multilinear extension of f at x in [0, 1]^n, x_i the probability of
/// z_i = 1, evaluated term-wise with <Z_i> = 1 - 2 x_i.
double multilinear_value(const DiagonalProblem &problem, std::span<const double> x);

/// Explicit product state: one normalized 2-vector (amplitudes of |0>, |1>)
/// per qubit.
using QubitState = std::array<complex, 2>;
using ProductState = std::vector<QubitState>;

ProductState plus_product(int n);
ProductState basis_product(int n, Bitstring z);

/// <Z_j> for each qubit.
std::vector<double> z_expectations(const ProductState &state);

/// Mean-field one-body field on each qubit: the Z_j coefficient of f traced
/// against the other qubits' marginals. Constant parts are dropped.
std::vector<double> meanfield_fields(const DiagonalProblem &problem, const ProductState &state);

/// One synchronous mean-field round: every qubit j gets exp(-i gamma h_j Z_j)
/// with fields from the incoming state, then exp(-i beta b_j X_j).
/// Requires a hypercube Laplacian.
ProductState meanfield_step(const DiagonalProblem &problem, const Laplacian &lap,
                            const ProductState &state, double gamma, double beta);

/// Applies every round of a standard schedule with meanfield_step.
ProductState meanfield_state(const DiagonalProblem &problem, const Laplacian &lap,
                             const Schedule &schedule, ProductState initial);

Statevector to_statevector(const ProductState &state);

/// Probability that measuring the product state yields z.
double product_overlap(const ProductState &state, Bitstring z);

} // namespace qlow
