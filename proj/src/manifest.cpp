#include "qlow/manifest.hpp"

#include "qlow/error.hpp"

#include <qlow/embedded.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace qlow {

namespace {

using nlohmann::json;

std::string brief(const json &v) {
    std::string s = v.dump();
    return s.size() > 40 ? s.substr(0, 37) + "..." : s;
}

bool has_type(const json &v, const std::string &type) {
    if (type == "object")
        return v.is_object();
    if (type == "array")
        return v.is_array();
    if (type == "string")
        return v.is_string();
    if (type == "boolean")
        return v.is_boolean();
    if (type == "null")
        return v.is_null();
    if (type == "number")
        return v.is_number();
    if (type == "integer") {
        if (v.is_number_integer())
            return true;
        if (!v.is_number_float())
            return false;
        const double d = v.get<double>();
        return std::isfinite(d) && d == std::trunc(d);
    }
    throw ConfigError("schema: unknown type '" + type + "'");
}

std::string kind_of(const json &v) {
    if (v.is_number_integer())
        return "integer";
    if (v.is_number())
        return "number";
    return v.type_name();
}

class SchemaValidator {
  public:
    explicit SchemaValidator(const json &root) : root_(root) {}

    void check(const json &doc, const json &schema, const std::string &path) const {
        const json &s = resolve(schema);
        for (const auto &[key, _] : s.items())
            if (!kKnown.contains(key))
                throw ConfigError("schema: unsupported keyword '" + key + "'");
        if (auto it = s.find("type"); it != s.end()) {
            bool ok = false;
            if (it->is_array()) {
                for (const auto &t : *it)
                    ok = ok || has_type(doc, t.get<std::string>());
            } else {
                ok = has_type(doc, it->get<std::string>());
            }
            if (!ok)
                fail(path, "expected " + it->dump() + ", got " + kind_of(doc));
        }
        if (auto it = s.find("enum"); it != s.end()) {
            if (std::find(it->begin(), it->end(), doc) == it->end())
                fail(path, brief(doc) + " is not one of " + it->dump());
        }
        if (doc.is_number())
            check_bounds(doc.get<double>(), s, path);
        if (doc.is_string()) {
            if (auto it = s.find("minLength"); it != s.end() && doc.get<std::string>().size() <
                                                                 it->get<std::size_t>())
                fail(path, "string shorter than " + it->dump());
        }
        if (doc.is_array())
            check_array(doc, s, path);
        if (doc.is_object())
            check_object(doc, s, path);
    }

  private:
    static inline const std::set<std::string> kKnown{
        "$schema", "$ref", "title", "description", "definitions", "type", "enum",
        "properties", "required", "additionalProperties", "items", "minItems", "maxItems",
        "minimum", "maximum", "exclusiveMinimum", "exclusiveMaximum", "minLength"};

    [[noreturn]] static void fail(const std::string &path, const std::string &what) {
        throw ConfigError(path + ": " + what);
    }

    const json &resolve(const json &schema) const {
        const json *s = &schema;
        for (int depth = 0; s->contains("$ref"); ++depth) {
            if (depth > 32)
                throw ConfigError("schema: $ref chain too deep");
            const std::string ref = s->at("$ref").get<std::string>();
            if (!ref.starts_with("#/"))
                throw ConfigError("schema: only local references are supported, got " + ref);
            s = &root_.at(json::json_pointer(ref.substr(1)));
        }
        return *s;
    }

    static void check_bounds(double x, const json &s, const std::string &path) {
        if (auto it = s.find("minimum"); it != s.end() && x < it->get<double>())
            fail(path, format_number(x) + " is below the minimum " + it->dump());
        if (auto it = s.find("maximum"); it != s.end() && x > it->get<double>())
            fail(path, format_number(x) + " is above the maximum " + it->dump());
        if (auto it = s.find("exclusiveMinimum"); it != s.end() && x <= it->get<double>())
            fail(path, format_number(x) + " must be greater than " + it->dump());
        if (auto it = s.find("exclusiveMaximum"); it != s.end() && x >= it->get<double>())
            fail(path, format_number(x) + " must be less than " + it->dump());
    }

    void check_array(const json &doc, const json &s, const std::string &path) const {
        if (auto it = s.find("minItems"); it != s.end() && doc.size() < it->get<std::size_t>())
            fail(path, "needs at least " + it->dump() + " items");
        if (auto it = s.find("maxItems"); it != s.end() && doc.size() > it->get<std::size_t>())
            fail(path, "allows at most " + it->dump() + " items");
        if (auto it = s.find("items"); it != s.end())
            for (std::size_t i = 0; i < doc.size(); ++i)
                check(doc[i], *it, path + "[" + std::to_string(i) + "]");
    }

    void check_object(const json &doc, const json &s, const std::string &path) const {
        if (auto it = s.find("required"); it != s.end())
            for (const auto &key : *it)
                if (!doc.contains(key.get<std::string>()))
                    fail(path, "missing required property '" + key.get<std::string>() + "'");
        const json empty = json::object();
        const json &props = s.contains("properties") ? s.at("properties") : empty;
        for (const auto &[key, value] : doc.items()) {
            const std::string sub = path + "." + key;
            if (auto p = props.find(key); p != props.end()) {
                check(value, *p, sub);
                continue;
            }
            auto extra = s.find("additionalProperties");
            if (extra == s.end())
                continue;
            if (extra->is_boolean()) {
                if (!extra->get<bool>())
                    fail(sub, "unknown property");
            } else {
                check(value, *extra, sub);
            }
        }
    }

    const json &root_;
};

/// Read access to one manifest object that remembers where it sits.
class Section {
  public:
    Section(const json *j, std::string path) : j_(j), path_(std::move(path)) {}

    bool present() const { return j_ != nullptr; }
    bool has(const std::string &key) const { return j_ && j_->contains(key); }
    const std::string &path() const { return path_; }

    template <class T> T get(const std::string &key, T fallback) const {
        return has(key) ? read<T>(key) : fallback;
    }

    template <class T> T need(const std::string &key) const {
        if (!has(key))
            throw ConfigError(path_ + ": missing '" + key + "'");
        return read<T>(key);
    }

    Section child(const std::string &key) const {
        return Section(has(key) ? &j_->at(key) : nullptr, path_ + "." + key);
    }

    const json *raw() const { return j_; }

    /// Rejects keys outside `allowed`, naming the first offender.
    void restrict_to(const std::set<std::string> &allowed, const std::string &why) const {
        if (!j_)
            return;
        for (const auto &[key, _] : j_->items())
            if (!allowed.contains(key))
                throw ConfigError(path_ + "." + key + ": not used " + why);
    }

  private:
    template <class T> T read(const std::string &key) const {
        try {
            return j_->at(key).get<T>();
        } catch (const json::exception &e) {
            throw ConfigError(path_ + "." + key + ": " + e.what());
        }
    }

    const json *j_;
    std::string path_;
};

template <class Fn> auto with_path(const std::string &path, Fn fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const DomainError &e) {
        throw ConfigError(path + ": " + e.what());
    } catch (const ShapeError &e) {
        throw ConfigError(path + ": " + e.what());
    }
}

const std::map<std::string, std::set<std::string>> kFamilyKeys{
    {"uncoupled", {"n", "distribution"}},
    {"hamming_ramp", {"n"}},
    {"spike", {"n", "a", "b", "center"}},
    {"bush", {"n"}},
    {"kspin", {"n", "k"}},
    {"conflicted_pairs", {"n", "epsilon", "delta"}},
    {"fisher_chain", {"n"}},
    {"grid", {"rows", "cols", "j2"}},
    {"chain", {"n", "j2"}},
    {"maxcut", {"n", "j2_fraction", "j2"}},
    {"random_potential", {"n"}},
    {"terms", {"n", "terms"}},
};

DiagonalProblem problem_from(const Section &s, std::uint64_t seed) {
    const auto family = s.need<std::string>("family");
    auto keys = kFamilyKeys.at(family);
    keys.insert("family");
    s.restrict_to(keys, "by family '" + family + "'");
    const auto n = [&] { return s.need<int>("n"); };
    if (family == "uncoupled")
        return uncoupled_spins(n(), parse_distribution(s.get<std::string>("distribution", "gaussian")),
                               seed);
    if (family == "hamming_ramp")
        return hamming_ramp(n());
    if (family == "spike") {
        const double a = s.need<double>("a");
        const double b = s.need<double>("b");
        return s.has("center") ? spike_centered(n(), a, b, s.need<double>("center"))
                               : spike(n(), a, b);
    }
    if (family == "bush")
        return bush(n());
    if (family == "kspin")
        return kspin_ferromagnet(n(), s.need<int>("k"));
    if (family == "conflicted_pairs")
        return conflicted_pairs(n(), s.need<double>("epsilon"), s.need<double>("delta"));
    if (family == "fisher_chain")
        return fisher_chain(n(), seed);
    if (family == "grid")
        return grid_ferromagnet_2d(s.need<int>("rows"), s.need<int>("cols"),
                                   s.get<double>("j2", 1.0));
    if (family == "chain")
        return chain_detuned(n(), s.get<double>("j2", 1.0));
    if (family == "maxcut")
        return maxcut_3regular(n(), s.get<double>("j2_fraction", 0.5), s.get<double>("j2", 1.0),
                               seed);
    if (family == "random_potential")
        return random_uniform_potential(n(), seed);
    std::vector<ZTerm> terms;
    for (const auto &t : s.raw()->value("terms", json::array()))
        terms.push_back({t.at("qubits").get<std::vector<int>>(), t.at("coeff").get<double>()});
    return DiagonalProblem(n(), std::move(terms), ProblemMeta{"terms", {}, std::nullopt});
}

std::vector<double> doubles(const Section &s, const std::string &key, std::vector<double> fallback) {
    return s.get<std::vector<double>>(key, std::move(fallback));
}

std::vector<int> ints(const Section &s, const std::string &key, std::vector<int> fallback) {
    return s.get<std::vector<int>>(key, std::move(fallback));
}

ScaleInstance scale_instance_from(const Section &params) {
    ScaleInstance inst;
    inst.family = parse_scale_family(params.get<std::string>("family", to_string(inst.family)));
    inst.chain_qubits = params.get("chain_qubits", inst.chain_qubits);
    inst.grid_rows = params.get("grid_rows", inst.grid_rows);
    inst.grid_cols = params.get("grid_cols", inst.grid_cols);
    inst.maxcut_qubits = params.get("maxcut_qubits", inst.maxcut_qubits);
    inst.maxcut_j2_fraction = params.get("maxcut_j2_fraction", inst.maxcut_j2_fraction);
    return inst;
}

const std::map<std::string, std::set<std::string>> kParameterKeys{
    {"fig2", {"sim_qubits", "sim_instances", "decay_sizes"}},
    {"scale",
     {"family", "chain_qubits", "grid_rows", "grid_cols", "maxcut_qubits", "maxcut_j2_fraction",
      "depths", "j2_values"}},
    {"ce",
     {"family", "chain_qubits", "grid_rows", "grid_cols", "maxcut_qubits", "maxcut_j2_fraction",
      "depths", "j2_values", "baseline_restarts"}},
    {"freedom", {"grid_rows", "grid_cols", "j2_values"}},
    {"shadow",
     {"variant", "flat_sizes", "flat_resolution", "qubits", "radius", "spike_width_exponent",
      "spike_height_exponent", "spike_center", "target_boost", "gibbs_eta"}},
    {"proxy", {"sizes", "kinds"}},
    {"rounding", {"grid_rows", "grid_cols", "j2_values"}},
};

ExperimentOutput merge(ExperimentOutput a, ExperimentOutput b) {
    for (auto &t : b.tables)
        a.tables.push_back(std::move(t));
    for (auto &[key, value] : b.summary.items())
        a.summary[key] = value;
    return a;
}

} // namespace

void validate_against_schema(const json &doc, const json &schema) {
    SchemaValidator(schema).check(doc, schema, "$");
}

const json &manifest_schema() {
    static const json schema = json::parse(embedded::kManifestSchema);
    return schema;
}

json parse_manifest(std::string_view text, const std::string &origin) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error &e) {
        throw ConfigError(origin + ": invalid JSON: " + e.what());
    }
    try {
        validate_against_schema(doc, manifest_schema());
    } catch (const ConfigError &e) {
        throw ConfigError(origin + ": " + e.what());
    }
    return doc;
}

json load_manifest(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read manifest " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_manifest(text.str(), path.string());
}

std::vector<std::string> reproduce_ids() {
    std::vector<std::string> ids;
    for (const auto &[name, _] : embedded::kManifests)
        ids.emplace_back(name);
    std::sort(ids.begin(), ids.end());
    return ids;
}

std::optional<json> default_manifest(std::string_view id) {
    for (const auto &[name, text] : embedded::kManifests)
        if (name == id)
            return parse_manifest(text, "manifests/" + std::string(name) + ".json");
    return std::nullopt;
}

DiagonalProblem build_problem(const json &node, std::uint64_t seed) {
    const Section s(&node, "$.problem");
    return with_path(s.path(), [&] { return problem_from(s, seed); });
}

Laplacian build_laplacian(const json *node, int n) {
    if (!node)
        return Laplacian::hypercube(n);
    const Section s(node, "$.solver.laplacian");
    return with_path(s.path(), [&] {
        const auto kind = s.need<std::string>("kind");
        if (kind == "hypercube") {
            s.restrict_to({"kind"}, "by a hypercube");
            return Laplacian::hypercube(n);
        }
        if (kind == "weighted_hypercube") {
            s.restrict_to({"kind", "weights"}, "by a weighted hypercube");
            auto weights = s.need<std::vector<double>>("weights");
            if (static_cast<int>(weights.size()) != n)
                throw ConfigError(s.path() + ".weights: needs one weight per qubit (" +
                                  std::to_string(n) + ")");
            return Laplacian::weighted_hypercube(std::move(weights));
        }
        if (kind == "complete") {
            s.restrict_to({"kind"}, "by the complete graph");
            return Laplacian::complete_graph(n);
        }
        if (kind == "custom") {
            s.restrict_to({"kind", "edges"}, "by a custom graph");
            return Laplacian::custom_from_json({{"n", n}, {"edges", s.need<json>("edges")}});
        }
        s.restrict_to({"kind", "center", "radius"}, "by a ball cut");
        return Laplacian::ball_cut(Laplacian::hypercube(n), s.get<Bitstring>("center", 0),
                                   s.need<int>("radius"));
    });
}

Objective build_objective(const json *node) {
    if (!node)
        return MeanObjective{};
    const Section s(node, "$.objective");
    return with_path(s.path(), [&]() -> Objective {
        const auto kind = s.need<std::string>("kind");
        Objective obj;
        if (kind == "mean") {
            s.restrict_to({"kind"}, "by the mean objective");
            obj = MeanObjective{};
        } else if (kind == "gibbs") {
            s.restrict_to({"kind", "eta"}, "by the Gibbs objective");
            obj = GibbsObjective{s.get("eta", GibbsObjective{}.eta)};
        } else if (kind == "cvar") {
            s.restrict_to({"kind", "alpha"}, "by CVaR");
            obj = CvarObjective{s.need<double>("alpha")};
        } else {
            s.restrict_to({"kind", "k1", "k2", "inner"}, "by the combined objective");
            const json *inner = s.has("inner") ? &node->at("inner") : nullptr;
            obj = make_combined(s.get("k1", 1.0), s.get("k2", 0.0), build_objective(inner));
        }
        validate(obj);
        return obj;
    });
}

SearchConfig build_search(const json *node, std::uint64_t seed) {
    SearchConfig c;
    c.seed = seed;
    if (!node)
        return c;
    const Section s(node, "$.solver.search");
    c.gamma_min = s.get("gamma_min", c.gamma_min);
    c.gamma_max = s.get("gamma_max", c.gamma_max);
    c.beta_min = s.get("beta_min", c.beta_min);
    c.beta_max = s.get("beta_max", c.beta_max);
    c.resolution = s.get("resolution", c.resolution);
    c.top_k = s.get("top_k", c.top_k);
    if (s.has("method"))
        c.method = with_path(s.path() + ".method",
                             [&] { return parse_local_method(s.need<std::string>("method")); });
    c.initial_step = s.get("initial_step", c.initial_step);
    c.tolerance = s.get("tolerance", c.tolerance);
    c.max_iterations = s.get("max_iterations", c.max_iterations);
    c.restarts = s.get("restarts", c.restarts);
    c.restart_spread = s.get("restart_spread", c.restart_spread);
    with_path(s.path(), [&] { c.validate(); });
    return c;
}

RoundingConfig build_rounding(const json *node, std::uint64_t seed) {
    RoundingConfig c;
    c.seed = seed;
    if (!node)
        return c;
    const Section s(node, "$.rounding");
    c.beta_r = s.get("beta_r", c.beta_r);
    c.max_frozen = s.get("max_frozen", c.max_frozen);
    c.reoptimize = s.get("reoptimize", c.reoptimize);
    return c;
}

Statevector build_initial_state(const json *node, int n) {
    if (!node)
        return plus_state(n);
    const Section s(node, "$.solver.initial_state");
    return with_path(s.path(), [&] {
        const auto kind = s.need<std::string>("kind");
        if (kind == "plus") {
            s.restrict_to({"kind"}, "by the plus state");
            return plus_state(n);
        }
        if (kind == "basis") {
            s.restrict_to({"kind", "z"}, "by a basis state");
            return Statevector::basis(n, s.need<Bitstring>("z"));
        }
        if (kind == "ball") {
            s.restrict_to({"kind", "z", "radius"}, "by a ball state");
            return ball_uniform_state(n, s.get<Bitstring>("z", 0), s.need<int>("radius"));
        }
        s.restrict_to({"kind", "weight"}, "by a shell state");
        return hamming_shell_state(n, s.need<int>("weight"));
    });
}

ExperimentOutput run_manifest_experiment(const json &manifest, std::uint64_t seed, int jobs) {
    const Section top(&manifest, "$");
    const auto id = top.need<std::string>("experiment");
    if (!kParameterKeys.contains(id))
        throw ConfigError("$.experiment: '" + id + "' is not a reproducible experiment");
    std::set<std::string> sections{"experiment", "description", "seed", "jobs", "output",
                                   "parameters"};
    if (id != "fig2")
        sections.insert({"solver", "seeds"});
    if (id == "rounding")
        sections.insert("rounding");
    top.restrict_to(sections, "by experiment '" + id + "'");

    const Section params = top.child("parameters");
    params.restrict_to(kParameterKeys.at(id), "by experiment '" + id + "'");
    const Section solver = top.child("solver");
    std::set<std::string> solver_keys{"search"};
    if (id == "rounding")
        solver_keys.insert("p");
    solver.restrict_to(solver_keys, "by experiment '" + id + "'");
    const SearchConfig search = build_search(solver.child("search").raw(), seed);
    const json *seeds_raw = top.child("seeds").raw();

    return with_path("$", [&]() -> ExperimentOutput {
        if (id == "fig2") {
            Fig2Config c;
            c.sim_qubits = params.get("sim_qubits", c.sim_qubits);
            c.sim_instances = params.get("sim_instances", c.sim_instances);
            c.decay_sizes = ints(params, "decay_sizes", c.decay_sizes);
            c.seed = seed;
            c.jobs = jobs;
            return run_fig2_table(c);
        }
        if (id == "scale") {
            ScaleConfig c;
            c.instance = scale_instance_from(params);
            c.depths = ints(params, "depths", c.depths);
            c.j2_values = doubles(params, "j2_values", c.j2_values);
            c.seeds = seeds_raw ? seeds_raw->get<int>() : c.seeds;
            c.search = search;
            c.seed = seed;
            c.jobs = jobs;
            return run_scale_sweep(c);
        }
        if (id == "ce") {
            CeConfig c;
            c.instance = scale_instance_from(params);
            c.depths = ints(params, "depths", c.depths);
            c.j2_values = doubles(params, "j2_values", c.j2_values);
            c.baseline_restarts = params.get("baseline_restarts", c.baseline_restarts);
            c.seeds = seeds_raw ? seeds_raw->get<int>() : c.seeds;
            c.search = search;
            c.seed = seed;
            c.jobs = jobs;
            return run_ce_baseline(c);
        }
        if (id == "freedom") {
            RelaxationConfig c;
            c.grid_rows = params.get("grid_rows", c.grid_rows);
            c.grid_cols = params.get("grid_cols", c.grid_cols);
            c.j2_values = doubles(params, "j2_values", c.j2_values);
            c.seeds = seeds_raw ? seeds_raw->get<int>() : c.seeds;
            c.search = search;
            c.seed = seed;
            c.jobs = jobs;
            return run_relaxation_compare(c);
        }
        if (id == "shadow") {
            ShadowConfig c;
            c.flat_sizes = ints(params, "flat_sizes", c.flat_sizes);
            c.flat_resolution = params.get("flat_resolution", c.flat_resolution);
            c.qubits = params.get("qubits", c.qubits);
            c.radius = params.get("radius", c.radius);
            c.spike_width_exponent = params.get("spike_width_exponent", c.spike_width_exponent);
            c.spike_height_exponent = params.get("spike_height_exponent", c.spike_height_exponent);
            c.spike_center = params.get("spike_center", c.spike_center);
            c.target_boost = params.get("target_boost", c.target_boost);
            c.gibbs_eta = params.get("gibbs_eta", c.gibbs_eta);
            c.search = search;
            c.seed = seed;
            c.jobs = jobs;
            const auto variant = params.get<std::string>("variant", "both");
            if (variant != "both") {
                c.variant = parse_shadow_variant(variant);
                return run_shadow_defect(c);
            }
            c.variant = ShadowVariant::flat;
            ExperimentOutput flat = run_shadow_defect(c);
            c.variant = ShadowVariant::spike_cut;
            return merge(std::move(flat), run_shadow_defect(c));
        }
        if (id == "proxy") {
            ProxyConfig c;
            c.sizes = ints(params, "sizes", c.sizes);
            c.kinds = params.get("kinds", c.kinds);
            c.search = search;
            c.seed = seed;
            c.jobs = jobs;
            return run_improvement_proxy(c);
        }
        RoundingExperimentConfig c;
        c.grid_rows = params.get("grid_rows", c.grid_rows);
        c.grid_cols = params.get("grid_cols", c.grid_cols);
        c.j2_values = doubles(params, "j2_values", c.j2_values);
        c.seeds = seeds_raw ? seeds_raw->get<int>() : c.seeds;
        c.depth = solver.get("p", c.depth);
        c.rounding = build_rounding(top.child("rounding").raw(), seed);
        c.search = search;
        c.seed = seed;
        c.jobs = jobs;
        return run_rounding_curves(c);
    });
}

} // namespace qlow
