#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace qlow {

using complex = std::complex<double>;
using Bitstring = std::uint64_t;

/// Hard upper bound on dense statevectors. The effective cap can be lowered
/// (or raised up to this value) with set_max_qubits().
inline constexpr int kAbsoluteMaxQubits = 24;

int max_qubits();
void set_max_qubits(int n);

/// Throws ResourceError when n exceeds the cap and DomainError when n < 1.
void check_qubit_count(int n);

/// Diagonal potential: values[z] = f(z) for every basis index z.
struct PhaseTable {
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
};

/// Dense n-qubit statevector. Basis index z is little-endian: bit i of z is
/// qubit i, and Z_i|z> = (1 - 2 z_i)|z>.
class Statevector {
  public:
    explicit Statevector(int n);
    Statevector(int n, std::vector<complex> amps);

    static Statevector basis(int n, Bitstring z);

    int qubits() const { return n_; }
    std::size_t dim() const { return amps_.size(); }

    std::span<complex> amps() { return amps_; }
    std::span<const complex> amps() const { return amps_; }
    complex &operator[](std::size_t z) { return amps_[z]; }
    const complex &operator[](std::size_t z) const { return amps_[z]; }

    double norm_squared() const;
    std::vector<double> probabilities() const;

    /// Renormalizes when the norm drifted by more than 1e-10 and records the
    /// event in renormalization_events(). Call after every evolution step.
    void check_norm();

  private:
    int n_;
    std::vector<complex> amps_;
};

/// Number of times check_norm() had to renormalize, process wide.
std::uint64_t renormalization_events();

Statevector plus_state(int n);

/// amps[z] <- exp(-i gamma values[z]) amps[z].
void apply_phase(Statevector &state, const PhaseTable &table, double gamma);

/// Normalized Walsh-Hadamard transform H^{(x)n}, in place.
void fwht(std::span<complex> data);
void fwht(Statevector &state);

double overlap_probability(const Statevector &state, Bitstring target);

/// Total probability on the indices attaining min(values) (within 1e-9).
double ground_state_mass(const Statevector &state, const PhaseTable &table);

complex inner_product(const Statevector &a, const Statevector &b);

/// Draws `shots` basis states independently from |amps|^2.
std::vector<Bitstring> sample_basis_states(const Statevector &state, std::size_t shots,
                                           std::mt19937_64 &rng);

} // namespace qlow
