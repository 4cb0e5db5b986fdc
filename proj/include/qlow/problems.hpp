#pragma once

#include "qlow/random.hpp"
#include "qlow/statevector.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace qlow {

/// coeff * prod_{i in qubits} Z_i. An empty qubit set is a constant shift.
struct ZTerm {
    std::vector<int> qubits;
    double coeff = 0.0;

    Bitstring mask() const;
    /// Value of the Pauli product on basis state z, +1 or -1.
    int sign(Bitstring z) const;
};

struct ProblemMeta {
    std::string family;
    nlohmann::json params = nlohmann::json::object();
    std::optional<std::uint64_t> seed;
};

/// Classical cost function f(z) over n-bit strings, held both as a Z-term
/// expansion and as a dense value table.
class DiagonalProblem {
  public:
    DiagonalProblem(int n, std::vector<ZTerm> terms, ProblemMeta meta = {});

    /// Builds the Z-term expansion of a dense table by Walsh transform.
    /// Coefficients with magnitude below drop_tol are discarded.
    static DiagonalProblem from_table(int n, std::vector<double> values,
                                      ProblemMeta meta = {},
                                      double drop_tol = 1e-12);

    int qubits() const { return n_; }
    const std::vector<ZTerm> &terms() const { return terms_; }
    const ProblemMeta &meta() const { return meta_; }
    const PhaseTable &table() const { return table_; }

    double f_min() const { return f_min_; }
    double f_max() const { return f_max_; }
    /// All z with f(z) within 1e-9 of the minimum, ascending.
    const std::vector<Bitstring> &argmin() const { return argmin_; }
    bool is_optimal(Bitstring z) const;

    /// Term-wise evaluation, independent of the dense table.
    double evaluate(Bitstring z) const;

    /// Substitutes z_qubit = value and removes the qubit; qubits above it
    /// shift down by one. Terms that become identical are merged.
    DiagonalProblem fix(int qubit, int value) const;

    nlohmann::json to_json() const;
    static DiagonalProblem from_json(const nlohmann::json &j);

  private:
    void finalize_extrema();

    int n_;
    std::vector<ZTerm> terms_;
    ProblemMeta meta_;
    PhaseTable table_;
    double f_min_ = 0.0;
    double f_max_ = 0.0;
    std::vector<Bitstring> argmin_;
};

/// Dense table from a term list, computed term by term.
PhaseTable dense_from_terms(int n, std::span<const ZTerm> terms);

enum class SpinDistribution { binary, uniform, gaussian };

SpinDistribution parse_distribution(const std::string &name);
std::string to_string(SpinDistribution dist);

/// f = sum_i alpha_i Z_i with i.i.d. alpha_i. The Gaussian measure has
/// density exp(-alpha^2)/sqrt(pi), i.e. variance 1/2.
DiagonalProblem uncoupled_spins(int n, SpinDistribution dist, std::uint64_t seed);

/// f = w = popcount(z) = (1/2) sum_i (I - Z_i).
DiagonalProblem hamming_ramp(int n);

/// f = w + s(w) with s = n^b on the integer weights h satisfying
/// |h - n/4| <= n^a / 2. Requires 4 | n.
DiagonalProblem spike(int n, double a, double b);

/// Same spike shape with the band centred on an arbitrary weight.
DiagonalProblem spike_centered(int n, double a, double b, double center);

/// H = P_0 + (I - P_0) w with P_0 projecting qubit 0 onto |0>.
DiagonalProblem bush(int n);

/// f = -(sum_i Z_i)^k.
DiagonalProblem kspin_ferromagnet(int n, int k);

/// f = sum_i -(1+eps) Z_{2i} - Z_{2i+1} + delta Z_{2i} Z_{2i+1}.
DiagonalProblem conflicted_pairs(int n, double epsilon, double delta);

/// Open chain sum_i (J_i/2)(1 - Z_i Z_{i+1}) with J_i drawn from {1, 2}.
DiagonalProblem fisher_chain(int n, std::uint64_t seed);

/// Ferromagnetic -J Z_i Z_j couplings on a rows x cols grid (qubit r*cols+c).
/// Columns below ceil(cols/2) form block one with J = 1; the remaining
/// columns and the seam between the blocks use J = j2.
DiagonalProblem grid_ferromagnet_2d(int rows, int cols, double j2);

/// Open chain: the first n/2 bonds have J = 1, the rest J = j2.
DiagonalProblem chain_detuned(int n, double j2);

/// sum_{(i,j) in E} J_ij Z_i Z_j on a random simple 3-regular graph;
/// round(|E| * j2_fraction) uniformly chosen edges get J = j2, others 1.
DiagonalProblem maxcut_3regular(int n, double j2_fraction, double j2,
                                std::uint64_t seed);

/// Random simple 3-regular graph by the pairing model with rejection.
std::vector<std::pair<int, int>> random_3regular_graph(int n, Rng &rng);

/// Dense table of i.i.d. uniform [0, 1) values.
DiagonalProblem random_uniform_potential(int n, std::uint64_t seed);

} // namespace qlow
