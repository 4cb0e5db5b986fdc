#pragma once

#include "qlow/statevector.hpp"

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <variant>
#include <vector>

namespace qlow {

namespace detail {
class SparseOperator;
}

/// Undirected weighted edge between two bitstring vertices.
struct Edge {
    Bitstring u = 0;
    Bitstring v = 0;
    double weight = 1.0;
};

/// Mixer sum_i b_i X_i. Kinetic energy is sum_i b_i (I - X_i).
struct WeightedHypercube {
    std::vector<double> weights;
};

/// Mixer |+><+|^{(x)n}. Kinetic energy is I - |+><+|.
struct CompleteGraph {
    int n = 1;
};

/// Arbitrary graph on the 2^n bitstrings with Laplacian D - A.
struct CustomSparse {
    int n = 1;
    std::vector<Edge> edges;
    std::shared_ptr<const detail::SparseOperator> op;
};

class Laplacian;

/// Laplacian of the subgraph of `inner` induced on the Hamming ball of the
/// given radius around `center`. Amplitude never crosses the ball boundary.
struct BallCut {
    std::shared_ptr<const Laplacian> inner;
    Bitstring center = 0;
    int radius = 0;
    /// Ball members in ascending order; row k of the operator is vertices[k].
    std::vector<Bitstring> vertices;
    std::shared_ptr<const detail::SparseOperator> op;
};

/// Default vertex count up to which graph exponentials use a cached dense
/// eigendecomposition; larger graphs use a Lanczos exponential.
inline constexpr std::size_t kDenseEigenThreshold = std::size_t{1} << 8;

class Laplacian {
  public:
    using Variant = std::variant<WeightedHypercube, CompleteGraph, CustomSparse, BallCut>;

    static Laplacian hypercube(int n);
    static Laplacian weighted_hypercube(std::vector<double> weights);
    static Laplacian complete_graph(int n);
    /// Throws DomainError on self loops, out-of-range or repeated edges and
    /// ResourceError above 16 qubits.
    static Laplacian custom(int n, std::vector<Edge> edges,
                            std::size_t dense_threshold = kDenseEigenThreshold);
    /// Edge list JSON: {"n": int, "edges": [[u, v] or [u, v, w], ...]}.
    static Laplacian custom_from_json(const nlohmann::json &j,
                                      std::size_t dense_threshold = kDenseEigenThreshold);
    /// Inner must be a hypercube or custom graph.
    static Laplacian ball_cut(const Laplacian &inner, Bitstring center, int radius,
                              std::size_t dense_threshold = kDenseEigenThreshold);

    int qubits() const;
    const Variant &variant() const { return v_; }
    const WeightedHypercube *as_hypercube() const { return std::get_if<WeightedHypercube>(&v_); }

  private:
    explicit Laplacian(Variant v) : v_(std::move(v)) {}
    Variant v_;
};

/// Applies exp(-i beta Lbar) with Lbar = -(D - A). For the hypercube this
/// is the product of cos(beta b_i) I - i sin(beta b_i) X_i; the constant
/// degree term is dropped there as a global phase.
void evolve(Statevector &state, const Laplacian &lap, double beta);

/// Per-qubit cos(a_i) I - i sin(a_i) X_i with signed angles. Relaxed
/// mixers need this since their per-qubit angles may differ in sign.
void rotate_x(Statevector &state, std::span<const double> angles);

/// <psi| D - A |psi>, always >= 0.
double kinetic_energy(const Statevector &state, const Laplacian &lap);

/// Vertices within Hamming distance `radius` of `center`, ascending.
std::vector<Bitstring> hamming_ball(int n, Bitstring center, int radius);

Statevector ball_uniform_state(int n, Bitstring center, int radius);
Statevector hamming_shell_state(int n, int weight);

/// Multiplies each nonzero amplitude by an independent uniform random phase.
Statevector randomize_phases(const Statevector &state, std::uint64_t seed);

} // namespace qlow
