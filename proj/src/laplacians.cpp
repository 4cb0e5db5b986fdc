#include "qlow/laplacians.hpp"

#include "qlow/error.hpp"
#include "qlow/random.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>
#include <numbers>
#include <set>
#include <string>
#include <utility>

namespace qlow {

namespace detail {

/// Real symmetric graph Laplacian D - A in CSR form, with exp(i t L) by a
/// cached dense eigendecomposition or a Lanczos exponential.
class SparseOperator {
  public:
    SparseOperator(std::size_t dim, const std::vector<std::pair<std::size_t, std::size_t>> &pairs,
                   const std::vector<double> &weights, std::size_t dense_threshold)
        : dim_(dim), degree_(dim, 0.0), dense_threshold_(dense_threshold) {
        std::vector<std::vector<std::pair<std::size_t, double>>> rows(dim);
        for (std::size_t e = 0; e < pairs.size(); ++e) {
            const auto [u, v] = pairs[e];
            rows[u].emplace_back(v, weights[e]);
            rows[v].emplace_back(u, weights[e]);
            degree_[u] += weights[e];
            degree_[v] += weights[e];
        }
        row_ptr_.reserve(dim + 1);
        row_ptr_.push_back(0);
        for (auto &r : rows) {
            std::sort(r.begin(), r.end());
            for (const auto &[c, w] : r) {
                cols_.push_back(c);
                vals_.push_back(w);
            }
            row_ptr_.push_back(cols_.size());
        }
        max_degree_ = dim ? *std::max_element(degree_.begin(), degree_.end()) : 0.0;
    }

    std::size_t dim() const { return dim_; }

    // out = (D - A) in
    void apply(std::span<const complex> in, std::span<complex> out) const {
        for (std::size_t r = 0; r < dim_; ++r) {
            complex acc = degree_[r] * in[r];
            for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
                acc -= vals_[k] * in[cols_[k]];
            out[r] = acc;
        }
    }

    double expectation(std::span<const complex> x) const {
        std::vector<complex> y(dim_);
        apply(x, y);
        complex acc{0.0, 0.0};
        for (std::size_t r = 0; r < dim_; ++r)
            acc += std::conj(x[r]) * y[r];
        return acc.real();
    }

    // x <- exp(i t L) x
    void exp_i(std::span<complex> x, double t) const {
        if (t == 0.0 || dim_ == 0)
            return;
        if (dim_ <= dense_threshold_)
            exp_dense(x, t);
        else
            exp_krylov(x, t);
    }

  private:
    void ensure_dense() const {
        std::call_once(dense_once_, [this] {
            Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim_),
                                                      static_cast<Eigen::Index>(dim_));
            for (std::size_t r = 0; r < dim_; ++r) {
                m(r, r) = degree_[r];
                for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
                    m(r, cols_[k]) -= vals_[k];
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
            if (eig.info() != Eigen::Success)
                throw NumericError("Laplacian eigendecomposition failed");
            eigenvalues_ = eig.eigenvalues();
            eigenvectors_ = eig.eigenvectors();
        });
    }

    void exp_dense(std::span<complex> x, double t) const {
        ensure_dense();
        const auto d = static_cast<Eigen::Index>(dim_);
        // real and imaginary parts as two real columns: one GEMM each way
        Eigen::MatrixX2d parts(d, 2);
        for (Eigen::Index k = 0; k < d; ++k)
            parts.row(k) << x[k].real(), x[k].imag();
        Eigen::MatrixX2d coeffs = eigenvectors_.transpose() * parts;
        for (Eigen::Index k = 0; k < d; ++k) {
            const double c = std::cos(t * eigenvalues_[k]);
            const double s = std::sin(t * eigenvalues_[k]);
            const double re = coeffs(k, 0);
            const double im = coeffs(k, 1);
            coeffs(k, 0) = c * re - s * im;
            coeffs(k, 1) = s * re + c * im;
        }
        parts.noalias() = eigenvectors_ * coeffs;
        for (Eigen::Index k = 0; k < d; ++k)
            x[k] = complex(parts(k, 0), parts(k, 1));
    }

    void exp_krylov(std::span<complex> x, double t) const {
        // Gershgorin: spectrum of D - A lies in [0, 2 max degree]
        const double spread = 2.0 * max_degree_;
        const int substeps = std::max(1, static_cast<int>(std::ceil(std::abs(t) * spread / 4.0)));
        const double h = t / substeps;
        for (int s = 0; s < substeps; ++s)
            lanczos_step(x, h);
    }

    void lanczos_step(std::span<complex> x, double h) const {
        constexpr int kMaxDim = 40;
        constexpr double kTolerance = 1e-10;
        const auto d = static_cast<Eigen::Index>(dim_);
        Eigen::Map<Eigen::VectorXcd> v0(x.data(), d);
        const double nrm = v0.norm();
        if (nrm == 0.0)
            return;
        const int m_max = static_cast<int>(std::min<std::size_t>(kMaxDim, dim_));
        Eigen::MatrixXcd basis(d, m_max);
        std::vector<double> alpha;
        std::vector<double> beta;
        basis.col(0) = v0 / nrm;
        Eigen::VectorXcd w(d);

        // exp(i h T) e_1 for the leading m x m block of the tridiagonal T
        auto small_exponential = [&](int m) {
            Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(alpha.data(), m);
            Eigen::VectorXd sub = Eigen::Map<const Eigen::VectorXd>(beta.data(), m - 1);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
            eig.computeFromTridiagonal(diag, sub);
            const Eigen::MatrixXd &q = eig.eigenvectors();
            Eigen::VectorXcd y = Eigen::VectorXcd::Zero(m);
            for (int k = 0; k < m; ++k)
                y += q.col(k) * (q(0, k) * std::polar(1.0, h * eig.eigenvalues()[k]));
            return y;
        };

        Eigen::VectorXcd y;
        for (int j = 0; j < m_max; ++j) {
            apply(std::span<const complex>(basis.col(j).data(), dim_),
                  std::span<complex>(w.data(), dim_));
            alpha.push_back(basis.col(j).dot(w).real());
            // full reorthogonalization keeps the basis clean at these sizes
            for (int k = 0; k <= j; ++k)
                w -= basis.col(k) * basis.col(k).dot(w);
            const int m = j + 1;
            const double b = w.norm();
            if (b < 1e-13) {
                y = small_exponential(m);
                break;
            }
            if (m == m_max) {
                y = small_exponential(m);
                if (m < d && std::abs(y[m - 1]) * b > kTolerance)
                    throw NumericError("Lanczos exponential did not converge");
                break;
            }
            // the residual of the Krylov approximation is b |y_m|
            if (m >= 4 && m % 2 == 0) {
                y = small_exponential(m);
                if (std::abs(y[m - 1]) * b < 0.1 * kTolerance)
                    break;
            }
            beta.push_back(b);
            basis.col(j + 1) = w / b;
        }
        v0 = nrm * (basis.leftCols(y.size()) * y);
    }

    std::size_t dim_;
    std::vector<std::size_t> row_ptr_;
    std::vector<std::size_t> cols_;
    std::vector<double> vals_;
    std::vector<double> degree_;
    double max_degree_ = 0.0;
    std::size_t dense_threshold_;

    mutable std::once_flag dense_once_;
    mutable Eigen::VectorXd eigenvalues_;
    mutable Eigen::MatrixXd eigenvectors_;
};

} // namespace detail

namespace {

constexpr int kMaxGraphQubits = 16;

void check_state(const Statevector &state, const Laplacian &lap) {
    if (state.qubits() != lap.qubits())
        throw ShapeError("Laplacian on " + std::to_string(lap.qubits()) +
                         " qubits applied to a " + std::to_string(state.qubits()) +
                         "-qubit state");
}

// per qubit: cos(beta b) a0 - i sin(beta b) a1, written out in real
// arithmetic to keep the inner loop free of complex-multiply NaN handling
template <typename AngleOf>
void rotate_qubits(std::span<complex> amps, std::size_t qubits, AngleOf angle_of) {
    auto *raw = reinterpret_cast<double *>(amps.data());
    for (std::size_t q = 0; q < qubits; ++q) {
        const double angle = angle_of(q);
        if (angle == 0.0)
            continue;
        const double c = std::cos(angle);
        const double s = std::sin(angle);
        const std::size_t bit = std::size_t{1} << q;
        for (std::size_t block = 0; block < amps.size(); block += 2 * bit) {
            for (std::size_t z = block; z < block + bit; ++z) {
                double *a0 = raw + 2 * z;
                double *a1 = raw + 2 * (z | bit);
                const double r0 = a0[0], i0 = a0[1], r1 = a1[0], i1 = a1[1];
                a0[0] = c * r0 + s * i1;
                a0[1] = c * i0 - s * r1;
                a1[0] = c * r1 + s * i0;
                a1[1] = c * i1 - s * r0;
            }
        }
    }
}

void evolve_hypercube(std::span<complex> amps, const WeightedHypercube &h, double beta) {
    rotate_qubits(amps, h.weights.size(), [&](std::size_t q) { return beta * h.weights[q]; });
}

complex plus_overlap(std::span<const complex> amps) {
    complex acc{0.0, 0.0};
    for (const auto &a : amps)
        acc += a;
    return acc / std::sqrt(static_cast<double>(amps.size()));
}

} // namespace

Laplacian Laplacian::hypercube(int n) {
    check_qubit_count(n);
    return Laplacian(WeightedHypercube{std::vector<double>(static_cast<std::size_t>(n), 1.0)});
}

Laplacian Laplacian::weighted_hypercube(std::vector<double> weights) {
    check_qubit_count(static_cast<int>(weights.size()));
    for (double b : weights)
        if (!std::isfinite(b) || b < 0.0)
            throw DomainError("hypercube weights must be finite and non-negative");
    return Laplacian(WeightedHypercube{std::move(weights)});
}

Laplacian Laplacian::complete_graph(int n) {
    check_qubit_count(n);
    return Laplacian(CompleteGraph{n});
}

Laplacian Laplacian::custom(int n, std::vector<Edge> edges, std::size_t dense_threshold) {
    check_qubit_count(n);
    if (n > kMaxGraphQubits)
        throw ResourceError("custom graph Laplacians are limited to " +
                            std::to_string(kMaxGraphQubits) + " qubits");
    const Bitstring dim = Bitstring{1} << n;
    std::set<std::pair<Bitstring, Bitstring>> seen;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::vector<double> weights;
    for (const auto &e : edges) {
        if (e.u >= dim || e.v >= dim)
            throw DomainError("edge endpoint out of range");
        if (e.u == e.v)
            throw DomainError("self loops are not allowed in a graph Laplacian");
        if (!std::isfinite(e.weight) || e.weight < 0.0)
            throw DomainError("edge weights must be finite and non-negative");
        if (!seen.emplace(std::min(e.u, e.v), std::max(e.u, e.v)).second)
            throw DomainError("repeated edge in graph Laplacian");
        pairs.emplace_back(e.u, e.v);
        weights.push_back(e.weight);
    }
    auto op = std::make_shared<const detail::SparseOperator>(dim, pairs, weights, dense_threshold);
    return Laplacian(CustomSparse{n, std::move(edges), std::move(op)});
}

Laplacian Laplacian::custom_from_json(const nlohmann::json &j, std::size_t dense_threshold) {
    try {
        const int n = j.at("n").get<int>();
        std::vector<Edge> edges;
        for (const auto &e : j.at("edges")) {
            if (!e.is_array() || e.size() < 2 || e.size() > 3)
                throw ConfigError("edge entries must be [u, v] or [u, v, weight]");
            Edge edge{e[0].get<Bitstring>(), e[1].get<Bitstring>(), 1.0};
            if (e.size() == 3)
                edge.weight = e[2].get<double>();
            edges.push_back(edge);
        }
        return custom(n, std::move(edges), dense_threshold);
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError(std::string("malformed edge list: ") + e.what());
    }
}

Laplacian Laplacian::ball_cut(const Laplacian &inner, Bitstring center, int radius,
                              std::size_t dense_threshold) {
    const int n = inner.qubits();
    if (n > kMaxGraphQubits)
        throw ResourceError("ball cuts are limited to " + std::to_string(kMaxGraphQubits) +
                            " qubits");
    if (center >= (Bitstring{1} << n))
        throw DomainError("ball center out of range");
    auto vertices = hamming_ball(n, center, radius);
    auto index_of = [&vertices](Bitstring z) -> std::ptrdiff_t {
        const auto it = std::lower_bound(vertices.begin(), vertices.end(), z);
        return (it != vertices.end() && *it == z) ? it - vertices.begin() : -1;
    };

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::vector<double> weights;
    if (const auto *h = std::get_if<WeightedHypercube>(&inner.variant())) {
        for (std::size_t k = 0; k < vertices.size(); ++k)
            for (int q = 0; q < n; ++q) {
                const Bitstring other = vertices[k] ^ (Bitstring{1} << q);
                if (other < vertices[k])
                    continue;
                const auto j = index_of(other);
                if (j >= 0 && h->weights[q] != 0.0) {
                    pairs.emplace_back(k, static_cast<std::size_t>(j));
                    weights.push_back(h->weights[q]);
                }
            }
    } else if (const auto *c = std::get_if<CustomSparse>(&inner.variant())) {
        for (const auto &e : c->edges) {
            const auto a = index_of(e.u);
            const auto b = index_of(e.v);
            if (a >= 0 && b >= 0) {
                pairs.emplace_back(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
                weights.push_back(e.weight);
            }
        }
    } else {
        throw DomainError("ball cuts need a hypercube or custom inner Laplacian");
    }
    auto op = std::make_shared<const detail::SparseOperator>(vertices.size(), pairs, weights,
                                                             dense_threshold);
    return Laplacian(BallCut{std::make_shared<const Laplacian>(inner), center, radius,
                             std::move(vertices), std::move(op)});
}

int Laplacian::qubits() const {
    return std::visit(
        [](const auto &l) -> int {
            using T = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<T, WeightedHypercube>)
                return static_cast<int>(l.weights.size());
            else if constexpr (std::is_same_v<T, BallCut>)
                return l.inner->qubits();
            else
                return l.n;
        },
        v_);
}

void rotate_x(Statevector &state, std::span<const double> angles) {
    if (angles.size() != static_cast<std::size_t>(state.qubits()))
        throw ShapeError("rotate_x: " + std::to_string(angles.size()) + " angles for a " +
                         std::to_string(state.qubits()) + "-qubit state");
    for (double a : angles)
        if (!std::isfinite(a))
            throw DomainError("rotate_x: angles must be finite");
    rotate_qubits(state.amps(), angles.size(), [&](std::size_t q) { return angles[q]; });
}

void evolve(Statevector &state, const Laplacian &lap, double beta) {
    check_state(state, lap);
    if (!std::isfinite(beta))
        throw DomainError("mixer angle must be finite");
    if (beta == 0.0)
        return;
    auto amps = state.amps();
    std::visit(
        [&](const auto &l) {
            using T = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<T, WeightedHypercube>) {
                evolve_hypercube(amps, l, beta);
            } else if constexpr (std::is_same_v<T, CompleteGraph>) {
                // exp(-i beta P) = I + (exp(-i beta) - 1) P
                const complex shift = (std::polar(1.0, -beta) - 1.0) * plus_overlap(amps) /
                                      std::sqrt(static_cast<double>(amps.size()));
                for (auto &a : amps)
                    a += shift;
            } else if constexpr (std::is_same_v<T, CustomSparse>) {
                l.op->exp_i(amps, beta);
            } else {
                std::vector<complex> sub(l.vertices.size());
                for (std::size_t k = 0; k < sub.size(); ++k)
                    sub[k] = amps[l.vertices[k]];
                l.op->exp_i(sub, beta);
                for (std::size_t k = 0; k < sub.size(); ++k)
                    amps[l.vertices[k]] = sub[k];
            }
        },
        lap.variant());
    state.check_norm();
}

double kinetic_energy(const Statevector &state, const Laplacian &lap) {
    check_state(state, lap);
    const auto amps = state.amps();
    return std::visit(
        [&](const auto &l) -> double {
            using T = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<T, WeightedHypercube>) {
                double acc = 0.0;
                for (std::size_t q = 0; q < l.weights.size(); ++q) {
                    const std::size_t bit = std::size_t{1} << q;
                    double x_expect = 0.0;
                    for (std::size_t z = 0; z < amps.size(); ++z)
                        x_expect += (std::conj(amps[z]) * amps[z ^ bit]).real();
                    acc += l.weights[q] * (state.norm_squared() - x_expect);
                }
                return std::max(acc, 0.0);
            } else if constexpr (std::is_same_v<T, CompleteGraph>) {
                return std::max(state.norm_squared() - std::norm(plus_overlap(amps)), 0.0);
            } else if constexpr (std::is_same_v<T, CustomSparse>) {
                return std::max(l.op->expectation(amps), 0.0);
            } else {
                std::vector<complex> sub(l.vertices.size());
                for (std::size_t k = 0; k < sub.size(); ++k)
                    sub[k] = amps[l.vertices[k]];
                return std::max(l.op->expectation(sub), 0.0);
            }
        },
        lap.variant());
}

std::vector<Bitstring> hamming_ball(int n, Bitstring center, int radius) {
    check_qubit_count(n);
    if (radius < 0 || radius > n)
        throw DomainError("ball radius must lie in [0, n]");
    const Bitstring dim = Bitstring{1} << n;
    if (center >= dim)
        throw DomainError("ball center out of range");
    std::vector<Bitstring> out;
    for (Bitstring z = 0; z < dim; ++z)
        if (std::popcount(z ^ center) <= radius)
            out.push_back(z);
    return out;
}

Statevector ball_uniform_state(int n, Bitstring center, int radius) {
    const auto members = hamming_ball(n, center, radius);
    Statevector s(n);
    s[0] = 0.0;
    const double a = 1.0 / std::sqrt(static_cast<double>(members.size()));
    for (Bitstring z : members)
        s[z] = a;
    return s;
}

Statevector hamming_shell_state(int n, int weight) {
    check_qubit_count(n);
    if (weight < 0 || weight > n)
        throw DomainError("shell weight must lie in [0, n]");
    Statevector s(n);
    s[0] = 0.0;
    std::vector<Bitstring> members;
    for (Bitstring z = 0; z < s.dim(); ++z)
        if (std::popcount(z) == weight)
            members.push_back(z);
    const double a = 1.0 / std::sqrt(static_cast<double>(members.size()));
    for (Bitstring z : members)
        s[z] = a;
    return s;
}

Statevector randomize_phases(const Statevector &state, std::uint64_t seed) {
    Rng rng = make_rng(seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    Statevector out = state;
    for (auto &a : out.amps())
        if (a != 0.0)
            a *= std::polar(1.0, angle(rng));
    return out;
}

} // namespace qlow
