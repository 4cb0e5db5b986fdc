#include "qlow/problems.hpp"

#include "qlow/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <set>
#include <string>

namespace qlow {

namespace {

// Unnormalized Walsh transform of a real table, in place.
void walsh_transform(std::span<double> data) {
    const std::size_t dim = data.size();
    for (std::size_t h = 1; h < dim; h <<= 1)
        for (std::size_t block = 0; block < dim; block += 2 * h)
            for (std::size_t k = block; k < block + h; ++k) {
                const double a = data[k];
                const double b = data[k + h];
                data[k] = a + b;
                data[k + h] = a - b;
            }
}

std::vector<int> mask_to_qubits(Bitstring mask) {
    std::vector<int> out;
    for (int i = 0; mask != 0; ++i, mask >>= 1)
        if (mask & 1U)
            out.push_back(i);
    return out;
}

ZTerm make_term(std::vector<int> qubits, double coeff) {
    std::sort(qubits.begin(), qubits.end());
    return ZTerm{std::move(qubits), coeff};
}

ProblemMeta meta_of(std::string family, nlohmann::json params,
                    std::optional<std::uint64_t> seed = std::nullopt) {
    return ProblemMeta{std::move(family), std::move(params), seed};
}

} // namespace

Bitstring ZTerm::mask() const {
    Bitstring m = 0;
    for (int q : qubits)
        m |= Bitstring{1} << q;
    return m;
}

int ZTerm::sign(Bitstring z) const {
    return (std::popcount(z & mask()) & 1) ? -1 : 1;
}

PhaseTable dense_from_terms(int n, std::span<const ZTerm> terms) {
    const std::size_t dim = std::size_t{1} << n;
    PhaseTable table{std::vector<double>(dim, 0.0)};
    for (const auto &t : terms) {
        const Bitstring m = t.mask();
        for (std::size_t z = 0; z < dim; ++z)
            table.values[z] += (std::popcount(z & m) & 1) ? -t.coeff : t.coeff;
    }
    return table;
}

DiagonalProblem::DiagonalProblem(int n, std::vector<ZTerm> terms, ProblemMeta meta)
    : n_(n), terms_(std::move(terms)), meta_(std::move(meta)) {
    check_qubit_count(n);
    for (auto &t : terms_) {
        std::sort(t.qubits.begin(), t.qubits.end());
        if (std::adjacent_find(t.qubits.begin(), t.qubits.end()) != t.qubits.end())
            throw DomainError("Z term repeats a qubit index");
        for (int q : t.qubits)
            if (q < 0 || q >= n)
                throw DomainError("Z term qubit index " + std::to_string(q) +
                                  " out of range for n = " + std::to_string(n));
        if (!std::isfinite(t.coeff))
            throw DomainError("Z term coefficient is not finite");
    }
    table_ = dense_from_terms(n_, terms_);
    finalize_extrema();
}

DiagonalProblem DiagonalProblem::from_table(int n, std::vector<double> values,
                                            ProblemMeta meta, double drop_tol) {
    check_qubit_count(n);
    const std::size_t dim = std::size_t{1} << n;
    if (values.size() != dim)
        throw ShapeError("dense table needs 2^n entries");
    for (double v : values)
        if (!std::isfinite(v))
            throw DomainError("dense table entries must be finite");

    std::vector<double> coeffs = values;
    walsh_transform(coeffs);
    const double scale = 1.0 / static_cast<double>(dim);
    std::vector<ZTerm> terms;
    for (std::size_t s = 0; s < dim; ++s) {
        const double c = coeffs[s] * scale;
        if (std::abs(c) > drop_tol)
            terms.push_back(ZTerm{mask_to_qubits(s), c});
    }

    DiagonalProblem p(n, std::vector<ZTerm>{}, std::move(meta));
    p.terms_ = std::move(terms);
    if (n <= 16) {
        // the expansion must reproduce the table it came from
        std::vector<double> back(dim, 0.0);
        for (const auto &t : p.terms_)
            back[t.mask()] = t.coeff;
        walsh_transform(back);
        double scale_ref = 1.0;
        for (double v : values)
            scale_ref = std::max(scale_ref, std::abs(v));
        for (std::size_t z = 0; z < dim; ++z)
            if (std::abs(back[z] - values[z]) > 1e-9 * scale_ref)
                throw NumericError("Z-term expansion does not reproduce the table");
    }
    p.table_ = PhaseTable{std::move(values)};
    p.finalize_extrema();
    return p;
}

void DiagonalProblem::finalize_extrema() {
    const auto &v = table_.values;
    const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
    f_min_ = *mn;
    f_max_ = *mx;
    argmin_.clear();
    for (std::size_t z = 0; z < v.size(); ++z)
        if (v[z] <= f_min_ + 1e-9)
            argmin_.push_back(z);
}

bool DiagonalProblem::is_optimal(Bitstring z) const {
    return z < table_.size() && table_.values[z] <= f_min_ + 1e-9;
}

double DiagonalProblem::evaluate(Bitstring z) const {
    double acc = 0.0;
    for (const auto &t : terms_)
        acc += t.sign(z) * t.coeff;
    return acc;
}

DiagonalProblem DiagonalProblem::fix(int qubit, int value) const {
    if (qubit < 0 || qubit >= n_)
        throw DomainError("fixed qubit out of range");
    if (value != 0 && value != 1)
        throw DomainError("fixed value must be 0 or 1");
    if (n_ == 1)
        throw DomainError("cannot remove the last qubit of a problem");
    const double z_value = value == 0 ? 1.0 : -1.0;
    std::map<std::vector<int>, double> merged;
    for (const auto &t : terms_) {
        double c = t.coeff;
        std::vector<int> q;
        q.reserve(t.qubits.size());
        for (int i : t.qubits) {
            if (i == qubit)
                c *= z_value;
            else
                q.push_back(i > qubit ? i - 1 : i);
        }
        merged[q] += c;
    }
    std::vector<ZTerm> terms;
    for (auto &[q, c] : merged)
        if (c != 0.0)
            terms.push_back(ZTerm{q, c});
    ProblemMeta meta = meta_;
    meta.params["fixed"].push_back({{"qubit", qubit}, {"value", value}});
    return DiagonalProblem(n_ - 1, std::move(terms), std::move(meta));
}

nlohmann::json DiagonalProblem::to_json() const {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto &t : terms_)
        terms.push_back({{"qubits", t.qubits}, {"coeff", t.coeff}});
    nlohmann::json meta = {{"family", meta_.family}, {"params", meta_.params}};
    if (meta_.seed)
        meta["seed"] = *meta_.seed;
    return {{"n", n_}, {"terms", terms}, {"meta", meta}};
}

DiagonalProblem DiagonalProblem::from_json(const nlohmann::json &j) {
    try {
        const int n = j.at("n").get<int>();
        std::vector<ZTerm> terms;
        for (const auto &t : j.at("terms"))
            terms.push_back(make_term(t.at("qubits").get<std::vector<int>>(),
                                      t.at("coeff").get<double>()));
        ProblemMeta meta;
        if (j.contains("meta")) {
            const auto &m = j.at("meta");
            meta.family = m.value("family", "");
            meta.params = m.value("params", nlohmann::json::object());
            if (m.contains("seed"))
                meta.seed = m.at("seed").get<std::uint64_t>();
        }
        return DiagonalProblem(n, std::move(terms), std::move(meta));
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError(std::string("malformed problem JSON: ") + e.what());
    }
}

SpinDistribution parse_distribution(const std::string &name) {
    if (name == "binary")
        return SpinDistribution::binary;
    if (name == "uniform")
        return SpinDistribution::uniform;
    if (name == "gaussian")
        return SpinDistribution::gaussian;
    throw DomainError("unknown distribution '" + name + "'");
}

std::string to_string(SpinDistribution dist) {
    switch (dist) {
    case SpinDistribution::binary:
        return "binary";
    case SpinDistribution::uniform:
        return "uniform";
    case SpinDistribution::gaussian:
        return "gaussian";
    }
    return "unknown";
}

DiagonalProblem uncoupled_spins(int n, SpinDistribution dist, std::uint64_t seed) {
    check_qubit_count(n);
    Rng rng = make_rng(seed);
    std::vector<ZTerm> terms;
    std::bernoulli_distribution coin(0.5);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0 / std::numbers::sqrt2);
    for (int i = 0; i < n; ++i) {
        double alpha = 0.0;
        switch (dist) {
        case SpinDistribution::binary:
            alpha = coin(rng) ? 1.0 : -1.0;
            break;
        case SpinDistribution::uniform:
            alpha = unif(rng);
            break;
        case SpinDistribution::gaussian:
            alpha = normal(rng);
            break;
        }
        terms.push_back(ZTerm{{i}, alpha});
    }
    return DiagonalProblem(n, std::move(terms),
                           meta_of("uncoupled", {{"n", n}, {"dist", to_string(dist)}},
                                   seed));
}

DiagonalProblem hamming_ramp(int n) {
    check_qubit_count(n);
    std::vector<ZTerm> terms{ZTerm{{}, 0.5 * n}};
    for (int i = 0; i < n; ++i)
        terms.push_back(ZTerm{{i}, -0.5});
    return DiagonalProblem(n, std::move(terms), meta_of("hamming_ramp", {{"n", n}}));
}

DiagonalProblem spike_centered(int n, double a, double b, double center) {
    check_qubit_count(n);
    const double half_width = std::pow(static_cast<double>(n), a) / 2.0;
    const double height = std::pow(static_cast<double>(n), b);
    std::vector<double> values(std::size_t{1} << n);
    for (std::size_t z = 0; z < values.size(); ++z) {
        const int w = std::popcount(z);
        const bool in_band = std::abs(w - center) <= half_width + 1e-12;
        values[z] = w + (in_band ? height : 0.0);
    }
    return DiagonalProblem::from_table(
        n, std::move(values),
        meta_of("spike", {{"n", n}, {"a", a}, {"b", b}, {"center", center}}));
}

DiagonalProblem spike(int n, double a, double b) {
    if (n % 4 != 0)
        throw DomainError("spike problem needs n divisible by 4");
    return spike_centered(n, a, b, n / 4.0);
}

DiagonalProblem bush(int n) {
    check_qubit_count(n);
    std::vector<double> values(std::size_t{1} << n);
    for (std::size_t z = 0; z < values.size(); ++z)
        values[z] = (z & 1U) == 0 ? 1.0 : static_cast<double>(std::popcount(z));
    return DiagonalProblem::from_table(n, std::move(values), meta_of("bush", {{"n", n}}));
}

DiagonalProblem kspin_ferromagnet(int n, int k) {
    check_qubit_count(n);
    if (k < 1)
        throw DomainError("k-spin ferromagnet needs k >= 1");
    std::vector<double> values(std::size_t{1} << n);
    for (std::size_t z = 0; z < values.size(); ++z)
        values[z] = -std::pow(static_cast<double>(n - 2 * std::popcount(z)), k);
    return DiagonalProblem::from_table(n, std::move(values),
                                      meta_of("kspin", {{"n", n}, {"k", k}}));
}

DiagonalProblem conflicted_pairs(int n, double epsilon, double delta) {
    if (n % 2 != 0)
        throw DomainError("conflicted pairs need an even qubit count");
    if (!(epsilon > 0.0))
        throw DomainError("conflicted pairs need epsilon > 0");
    if (!(delta > 2.0 + epsilon))
        throw DomainError("conflicted pairs need delta > 2 + epsilon");
    check_qubit_count(n);
    std::vector<ZTerm> terms;
    for (int i = 0; i < n / 2; ++i) {
        terms.push_back(ZTerm{{2 * i}, -(1.0 + epsilon)});
        terms.push_back(ZTerm{{2 * i + 1}, -1.0});
        terms.push_back(ZTerm{{2 * i, 2 * i + 1}, delta});
    }
    return DiagonalProblem(
        n, std::move(terms),
        meta_of("conflicted_pairs", {{"n", n}, {"epsilon", epsilon}, {"delta", delta}}));
}

DiagonalProblem fisher_chain(int n, std::uint64_t seed) {
    check_qubit_count(n);
    if (n < 2)
        throw DomainError("Fisher chain needs at least two spins");
    Rng rng = make_rng(seed);
    std::bernoulli_distribution coin(0.5);
    std::vector<ZTerm> terms;
    double shift = 0.0;
    std::vector<double> couplings;
    for (int i = 0; i + 1 < n; ++i) {
        const double j = coin(rng) ? 2.0 : 1.0;
        couplings.push_back(j);
        shift += j / 2.0;
        terms.push_back(ZTerm{{i, i + 1}, -j / 2.0});
    }
    terms.insert(terms.begin(), ZTerm{{}, shift});
    return DiagonalProblem(
        n, std::move(terms),
        meta_of("fisher_chain", {{"n", n}, {"couplings", couplings}}, seed));
}

DiagonalProblem grid_ferromagnet_2d(int rows, int cols, double j2) {
    if (rows < 1 || cols < 1)
        throw DomainError("grid needs positive dimensions");
    const int n = rows * cols;
    check_qubit_count(n);
    const int split = (cols + 1) / 2;
    auto idx = [cols](int r, int c) { return r * cols + c; };
    std::vector<ZTerm> terms;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols)
                terms.push_back(ZTerm{{idx(r, c), idx(r, c + 1)},
                                      -(c + 1 < split ? 1.0 : j2)});
            if (r + 1 < rows)
                terms.push_back(ZTerm{{idx(r, c), idx(r + 1, c)}, -(c < split ? 1.0 : j2)});
        }
    return DiagonalProblem(
        n, std::move(terms),
        meta_of("grid", {{"rows", rows}, {"cols", cols}, {"n", n}, {"j2", j2}}));
}

DiagonalProblem chain_detuned(int n, double j2) {
    check_qubit_count(n);
    if (n < 2)
        throw DomainError("chain needs at least two spins");
    std::vector<ZTerm> terms;
    for (int i = 0; i + 1 < n; ++i)
        terms.push_back(ZTerm{{i, i + 1}, -(i < n / 2 ? 1.0 : j2)});
    return DiagonalProblem(n, std::move(terms), meta_of("chain", {{"n", n}, {"j2", j2}}));
}

std::vector<std::pair<int, int>> random_3regular_graph(int n, Rng &rng) {
    if (n < 4 || n % 2 != 0)
        throw DomainError("3-regular graphs need an even n >= 4");
    std::vector<int> stubs(3 * n);
    for (int i = 0; i < 3 * n; ++i)
        stubs[i] = i / 3;
    for (int attempt = 0; attempt < 100000; ++attempt) {
        std::shuffle(stubs.begin(), stubs.end(), rng);
        std::set<std::pair<int, int>> edges;
        bool simple = true;
        for (int i = 0; i < 3 * n && simple; i += 2) {
            int u = stubs[i];
            int v = stubs[i + 1];
            if (u == v) {
                simple = false;
                break;
            }
            if (u > v)
                std::swap(u, v);
            simple = edges.emplace(u, v).second;
        }
        if (simple)
            return {edges.begin(), edges.end()};
    }
    throw NumericError("pairing model failed to produce a simple 3-regular graph");
}

DiagonalProblem maxcut_3regular(int n, double j2_fraction, double j2, std::uint64_t seed) {
    if (j2_fraction < 0.0 || j2_fraction > 1.0)
        throw DomainError("j2_fraction must lie in [0, 1]");
    check_qubit_count(n);
    Rng rng = make_rng(seed);
    const auto edges = random_3regular_graph(n, rng);
    const auto detuned =
        static_cast<std::size_t>(std::lround(static_cast<double>(edges.size()) * j2_fraction));
    std::vector<std::size_t> order(edges.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<double> couplings(edges.size(), 1.0);
    for (std::size_t k = 0; k < detuned; ++k)
        couplings[order[k]] = j2;

    std::vector<ZTerm> terms;
    nlohmann::json edge_json = nlohmann::json::array();
    for (std::size_t e = 0; e < edges.size(); ++e) {
        terms.push_back(ZTerm{{edges[e].first, edges[e].second}, couplings[e]});
        edge_json.push_back({edges[e].first, edges[e].second, couplings[e]});
    }
    return DiagonalProblem(n, std::move(terms),
                           meta_of("maxcut",
                                   {{"n", n},
                                    {"j2_fraction", j2_fraction},
                                    {"j2", j2},
                                    {"edges", edge_json}},
                                   seed));
}

DiagonalProblem random_uniform_potential(int n, std::uint64_t seed) {
    check_qubit_count(n);
    Rng rng = make_rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> values(std::size_t{1} << n);
    for (auto &v : values)
        v = unif(rng);
    return DiagonalProblem::from_table(n, std::move(values),
                                      meta_of("random_uniform", {{"n", n}}, seed));
}

} // namespace qlow
