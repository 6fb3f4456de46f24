#pragma once

#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mixrisk/error.hpp"
#include "mixrisk/solver.hpp"

namespace mixrisk {

// Scenario documents: strict-schema JSON in, canonical JSON out. Unknown keys
// are rejected, defaults are materialized, and every error carries the key
// path it refers to.

struct ScenarioDocument {
    SavingScenario scenario;
    std::vector<std::string> report_kinds = {"table"};  // "table" and/or "csv"
    std::optional<std::string> csv_path;
};

// Defaults filled in when the document omits the corresponding keys.
struct ParseDefaults {
    int quadrature_nodes = 64;
};

class ParseError : public Error {
public:
    explicit ParseError(std::string message)
        : Error(ErrorCategory::Parse, std::move(message)) {}
};

class SchemaError : public Error {
public:
    explicit SchemaError(std::string message)
        : Error(ErrorCategory::Schema, std::move(message)) {}
};

class SemanticError : public Error {
public:
    explicit SemanticError(std::string message)
        : Error(ErrorCategory::Semantic, std::move(message)) {}
};

namespace ioschema {

using nlohmann::ordered_json;

inline std::pair<int, int> line_column(const std::string& text, std::size_t byte) {
    int line = 1, column = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

inline void require_object(const ordered_json& j, const std::string& path) {
    if (!j.is_object()) throw SchemaError(path + " must be an object");
}

inline void reject_unknown_keys(const ordered_json& j, const std::string& path,
                                std::initializer_list<const char*> allowed) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : allowed) {
            if (it.key() == k) {
                known = true;
                break;
            }
        }
        if (!known) throw SchemaError(path + ": unknown key '" + it.key() + "'");
    }
}

inline const ordered_json* find(const ordered_json& j, const char* key) {
    auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

inline const ordered_json& require(const ordered_json& j, const char* key,
                                   const std::string& path) {
    const ordered_json* p = find(j, key);
    if (!p) throw SchemaError(path + ": missing required key '" + key + "'");
    return *p;
}

inline double as_number(const ordered_json& j, const std::string& path) {
    if (!j.is_number()) throw SchemaError(path + " must be a number");
    return j.get<double>();
}

inline double as_number_or(const ordered_json& parent, const char* key,
                           const std::string& path, double fallback) {
    const ordered_json* p = find(parent, key);
    return p ? as_number(*p, path + "." + key) : fallback;
}

inline bool as_bool_or(const ordered_json& parent, const char* key,
                       const std::string& path, bool fallback) {
    const ordered_json* p = find(parent, key);
    if (!p) return fallback;
    if (!p->is_boolean()) throw SchemaError(path + "." + key + " must be a boolean");
    return p->get<bool>();
}

inline std::string as_string(const ordered_json& j, const std::string& path) {
    if (!j.is_string()) throw SchemaError(path + " must be a string");
    return j.get<std::string>();
}

inline std::vector<double> as_number_array(const ordered_json& j,
                                           const std::string& path) {
    if (!j.is_array()) throw SchemaError(path + " must be an array of numbers");
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& e : j) {
        if (!e.is_number()) throw SchemaError(path + " must contain only numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

// A [lo, hi] pair where null stands for an unbounded side.
inline std::pair<double, double> as_range(const ordered_json& j,
                                          const std::string& path) {
    if (!j.is_array() || j.size() != 2) {
        throw SchemaError(path + " must be a [lo, hi] pair");
    }
    auto side = [&](const ordered_json& e, double unbounded) {
        if (e.is_null()) return unbounded;
        if (!e.is_number()) throw SchemaError(path + " entries must be numbers or null");
        return e.get<double>();
    };
    const double inf = std::numeric_limits<double>::infinity();
    return {side(j[0], -inf), side(j[1], inf)};
}

inline BiUtility parse_utility(const ordered_json& j, const std::string& path) {
    require_object(j, path);
    const std::string family = as_string(require(j, "family", path), path + ".family");
    if (family == "log_additive") {
        reject_unknown_keys(j, path, {"family", "scale", "domain", "monotonicity_override"});
    } else if (family == "cara_crra_product") {
        reject_unknown_keys(
            j, path, {"family", "alpha", "gamma_c", "scale", "domain",
                      "monotonicity_override"});
    } else if (family == "cara_additive") {
        reject_unknown_keys(
            j, path, {"family", "alpha", "beta", "scale", "domain",
                      "monotonicity_override"});
    } else if (family == "quadratic") {
        reject_unknown_keys(
            j, path, {"family", "q_y", "q_x", "scale", "domain",
                      "monotonicity_override"});
    } else {
        throw SchemaError(path + ".family: unknown family '" + family + "'");
    }
    const double scale = as_number_or(j, "scale", path, 1.0);

    try {
        BiUtility v = [&] {
            if (family == "log_additive") return BiUtility::log_additive(scale);
            if (family == "cara_crra_product") {
                return BiUtility::cara_crra_product(
                    as_number(require(j, "alpha", path), path + ".alpha"),
                    as_number(require(j, "gamma_c", path), path + ".gamma_c"), scale);
            }
            if (family == "cara_additive") {
                return BiUtility::cara_additive(
                    as_number(require(j, "alpha", path), path + ".alpha"),
                    as_number(require(j, "beta", path), path + ".beta"), scale);
            }
            return BiUtility::quadratic(
                as_number(require(j, "q_y", path), path + ".q_y"),
                as_number(require(j, "q_x", path), path + ".q_x"), scale);
        }();

        if (const ordered_json* dom = find(j, "domain")) {
            require_object(*dom, path + ".domain");
            reject_unknown_keys(*dom, path + ".domain", {"y", "x"});
            DomainBox box = v.domain();
            if (const ordered_json* y = find(*dom, "y")) {
                auto [lo, hi] = as_range(*y, path + ".domain.y");
                box.y_lo = lo;
                box.y_hi = hi;
            }
            if (const ordered_json* x = find(*dom, "x")) {
                auto [lo, hi] = as_range(*x, path + ".domain.x");
                box.x_lo = lo;
                box.x_hi = hi;
            }
            v = v.with_domain(box);
        }
        return v;
    } catch (const ConfigError& e) {
        throw SemanticError(path + ": " + e.what());
    }
}

inline FuzzyNumber parse_fuzzy(const ordered_json& j, const std::string& path) {
    require_object(j, path);
    reject_unknown_keys(j, path,
                        {"shape", "support", "center", "left_width", "right_width",
                         "core", "value", "gammas", "lower", "upper"});
    const std::string shape = as_string(require(j, "shape", path), path + ".shape");
    try {
        if (shape == "rectangular") {
            auto s = as_number_array(require(j, "support", path), path + ".support");
            if (s.size() != 2) throw SchemaError(path + ".support must be [c, d]");
            return FuzzyNumber::rectangular(s[0], s[1]);
        }
        if (shape == "triangular") {
            return FuzzyNumber::triangular(
                as_number(require(j, "center", path), path + ".center"),
                as_number(require(j, "left_width", path), path + ".left_width"),
                as_number(require(j, "right_width", path), path + ".right_width"));
        }
        if (shape == "trapezoidal") {
            auto core = as_number_array(require(j, "core", path), path + ".core");
            if (core.size() != 2) throw SchemaError(path + ".core must be [m1, m2]");
            return FuzzyNumber::trapezoidal(
                core[0], core[1],
                as_number(require(j, "left_width", path), path + ".left_width"),
                as_number(require(j, "right_width", path), path + ".right_width"));
        }
        if (shape == "constant") {
            return FuzzyNumber::constant(
                as_number(require(j, "value", path), path + ".value"));
        }
        if (shape == "sampled") {
            return FuzzyNumber::sampled(
                as_number_array(require(j, "gammas", path), path + ".gammas"),
                as_number_array(require(j, "lower", path), path + ".lower"),
                as_number_array(require(j, "upper", path), path + ".upper"));
        }
        throw SchemaError(path + ".shape: unknown shape '" + shape + "'");
    } catch (const ConfigError& e) {
        throw SemanticError(path + ": " + e.what());
    }
}

inline RandomVariable parse_random(const ordered_json& j, const std::string& path) {
    require_object(j, path);
    reject_unknown_keys(j, path,
                        {"distribution", "support", "value", "points", "probabilities"});
    const std::string dist =
        as_string(require(j, "distribution", path), path + ".distribution");
    try {
        if (dist == "uniform") {
            auto s = as_number_array(require(j, "support", path), path + ".support");
            if (s.size() != 2) throw SchemaError(path + ".support must be [c, d]");
            return RandomVariable::uniform(s[0], s[1]);
        }
        if (dist == "degenerate") {
            return RandomVariable::degenerate(
                as_number(require(j, "value", path), path + ".value"));
        }
        if (dist == "discrete") {
            return RandomVariable::discrete(
                as_number_array(require(j, "points", path), path + ".points"),
                as_number_array(require(j, "probabilities", path),
                                path + ".probabilities"));
        }
        throw SchemaError(path + ".distribution: unknown distribution '" + dist + "'");
    } catch (const ConfigError& e) {
        throw SemanticError(path + ": " + e.what());
    }
}

struct RiskSpec {
    std::optional<FuzzyNumber> fuzzy;
    std::optional<RandomVariable> random;
};

inline RiskSpec parse_risk(const ordered_json& j, const std::string& path) {
    require_object(j, path);
    reject_unknown_keys(j, path, {"fuzzy", "random"});
    const ordered_json* fz = find(j, "fuzzy");
    const ordered_json* rd = find(j, "random");
    if ((fz == nullptr) == (rd == nullptr)) {
        throw SchemaError(path + " must contain exactly one of 'fuzzy' or 'random'");
    }
    RiskSpec spec;
    if (fz) spec.fuzzy = parse_fuzzy(*fz, path + ".fuzzy");
    if (rd) spec.random = parse_random(*rd, path + ".random");
    return spec;
}

}  // namespace ioschema

inline ScenarioDocument parse_scenario_text(const std::string& text,
                                            const ParseDefaults& defaults = {}) {
    using ioschema::ordered_json;
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        auto [line, column] = ioschema::line_column(text, e.byte > 0 ? e.byte - 1 : 0);
        throw ParseError("line " + std::to_string(line) + ", column " +
                         std::to_string(column) + ": " + e.what());
    }
    ioschema::require_object(j, "document");
    ioschema::reject_unknown_keys(
        j, "document",
        {"format_version", "model", "weighting", "endowment", "utility_u", "utility_v",
         "income_risk", "background_risk", "solver", "outputs"});

    if (const ordered_json* ver = ioschema::find(j, "format_version")) {
        if (!ver->is_number_integer() || ver->get<int>() != 1) {
            throw SchemaError("format_version: only version 1 is supported");
        }
    }

    ScenarioDocument doc;
    SavingScenario& scn = doc.scenario;
    scn.solver.quadrature_nodes = defaults.quadrature_nodes;

    const std::string model =
        ioschema::as_string(ioschema::require(j, "model", "document"), "model");
    if (model == "probabilistic") {
        scn.model = ModelKind::Probabilistic;
    } else if (model == "mixed-I") {
        scn.model = ModelKind::MixedI;
    } else if (model == "mixed-II") {
        scn.model = ModelKind::MixedII;
    } else {
        throw SchemaError("model: must be 'probabilistic', 'mixed-I' or 'mixed-II'");
    }

    if (const ordered_json* w = ioschema::find(j, "weighting")) {
        ioschema::require_object(*w, "weighting");
        ioschema::reject_unknown_keys(*w, "weighting", {"exponent"});
        double n = ioschema::as_number_or(*w, "exponent", "weighting", 1.0);
        try {
            scn.weighting = WeightingFunction::power(n);
        } catch (const ConfigError& e) {
            throw SemanticError(std::string("weighting: ") + e.what());
        }
    }

    const ordered_json& endow = ioschema::require(j, "endowment", "document");
    ioschema::require_object(endow, "endowment");
    ioschema::reject_unknown_keys(endow, "endowment", {"y0", "x0"});
    scn.y0 = ioschema::as_number(ioschema::require(endow, "y0", "endowment"),
                                 "endowment.y0");
    scn.x0 = ioschema::as_number(ioschema::require(endow, "x0", "endowment"),
                                 "endowment.x0");

    scn.first_period = ioschema::parse_utility(
        ioschema::require(j, "utility_u", "document"), "utility_u");
    const ordered_json& vj = ioschema::require(j, "utility_v", "document");
    scn.second_period = ioschema::parse_utility(vj, "utility_v");
    scn.shape_override =
        ioschema::as_bool_or(vj, "monotonicity_override", "utility_v", false);

    auto income = ioschema::parse_risk(ioschema::require(j, "income_risk", "document"),
                                       "income_risk");
    auto background = ioschema::parse_risk(
        ioschema::require(j, "background_risk", "document"), "background_risk");

    switch (scn.model) {
        case ModelKind::MixedI:
            if (!income.fuzzy) {
                throw SemanticError("income_risk: mixed-I requires a fuzzy income risk");
            }
            if (!background.random) {
                throw SemanticError(
                    "background_risk: mixed-I requires a random background risk");
            }
            break;
        case ModelKind::MixedII:
            if (!income.random) {
                throw SemanticError(
                    "income_risk: mixed-II requires a random income risk");
            }
            if (!background.fuzzy) {
                throw SemanticError(
                    "background_risk: mixed-II requires a fuzzy background risk");
            }
            break;
        case ModelKind::Probabilistic:
            if (!income.random) {
                throw SemanticError(
                    "income_risk: the probabilistic model requires a random income risk");
            }
            if (!background.random) {
                throw SemanticError(
                    "background_risk: the probabilistic model requires a random "
                    "background risk");
            }
            break;
    }
    scn.income_fuzzy = std::move(income.fuzzy);
    scn.income_random = std::move(income.random);
    scn.background_fuzzy = std::move(background.fuzzy);
    scn.background_random = std::move(background.random);

    if (const ordered_json* s = ioschema::find(j, "solver")) {
        ioschema::require_object(*s, "solver");
        ioschema::reject_unknown_keys(*s, "solver",
                                      {"tolerance", "bounds", "quadrature_nodes"});
        scn.solver.tolerance = ioschema::as_number_or(*s, "tolerance", "solver", 1e-10);
        if (!(scn.solver.tolerance > 0.0)) {
            throw SemanticError("solver.tolerance must be positive");
        }
        if (const ordered_json* b = ioschema::find(*s, "bounds")) {
            auto bounds = ioschema::as_number_array(*b, "solver.bounds");
            if (bounds.size() != 2) {
                throw SchemaError("solver.bounds must be [s_lo, s_hi]");
            }
            if (!(bounds[0] < bounds[1])) {
                throw SemanticError("solver.bounds needs s_lo < s_hi");
            }
            scn.solver.bounds = {bounds[0], bounds[1]};
        }
        double nodes = ioschema::as_number_or(
            *s, "quadrature_nodes", "solver",
            static_cast<double>(defaults.quadrature_nodes));
        if (nodes < 1.0 || nodes != std::floor(nodes)) {
            throw SemanticError("solver.quadrature_nodes must be a positive integer");
        }
        scn.solver.quadrature_nodes = static_cast<int>(nodes);
    }

    if (const ordered_json* o = ioschema::find(j, "outputs")) {
        ioschema::require_object(*o, "outputs");
        ioschema::reject_unknown_keys(*o, "outputs", {"report", "csv_path"});
        if (const ordered_json* r = ioschema::find(*o, "report")) {
            if (!r->is_array()) throw SchemaError("outputs.report must be an array");
            doc.report_kinds.clear();
            for (const auto& e : *r) {
                std::string kind = ioschema::as_string(e, "outputs.report[]");
                if (kind != "table" && kind != "csv") {
                    throw SchemaError("outputs.report entries must be 'table' or 'csv'");
                }
                doc.report_kinds.push_back(kind);
            }
            if (doc.report_kinds.empty()) {
                throw SemanticError("outputs.report must not be empty");
            }
        }
        if (const ordered_json* p = ioschema::find(*o, "csv_path")) {
            doc.csv_path = ioschema::as_string(*p, "outputs.csv_path");
        }
    }

    try {
        scn.validate();
    } catch (const Error& e) {
        throw SemanticError(std::string("scenario: ") + e.what());
    }
    return doc;
}

inline ScenarioDocument load_scenario_file(const std::string& path,
                                           const ParseDefaults& defaults = {}) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open scenario file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario_text(buffer.str(), defaults);
}

// ---------------------------------------------------------------------------
// Canonical serialization: fixed key order, defaults materialized, shapes
// written under their minimal parametric name.
// ---------------------------------------------------------------------------

namespace ioschema {

inline ordered_json range_json(double lo, double hi) {
    ordered_json arr = ordered_json::array();
    if (std::isfinite(lo)) {
        arr.push_back(lo);
    } else {
        arr.push_back(nullptr);
    }
    if (std::isfinite(hi)) {
        arr.push_back(hi);
    } else {
        arr.push_back(nullptr);
    }
    return arr;
}

inline ordered_json utility_json(const BiUtility& v, bool override_flag) {
    ordered_json j;
    j["family"] = to_string(v.family());
    switch (v.family()) {
        case UtilityFamily::CaraCrraProduct:
            j["alpha"] = v.alpha();
            j["gamma_c"] = v.gamma_c();
            break;
        case UtilityFamily::CaraAdditive:
            j["alpha"] = v.alpha();
            j["beta"] = v.beta();
            break;
        case UtilityFamily::Quadratic:
            j["q_y"] = v.q_y();
            j["q_x"] = v.q_x();
            break;
        case UtilityFamily::LogAdditive:
            break;
        case UtilityFamily::UserTabulated:
            throw ConfigError("user-tabulated utilities have no file representation");
    }
    j["scale"] = v.scale();
    ordered_json dom;
    dom["y"] = range_json(v.domain().y_lo, v.domain().y_hi);
    dom["x"] = range_json(v.domain().x_lo, v.domain().x_hi);
    j["domain"] = dom;
    j["monotonicity_override"] = override_flag;
    return j;
}

inline ordered_json fuzzy_json(const FuzzyNumber& a) {
    ordered_json j;
    if (a.is_sampled()) {
        j["shape"] = "sampled";
        j["gammas"] = a.sample_gammas();
        j["lower"] = a.sample_lower();
        j["upper"] = a.sample_upper();
        return j;
    }
    const auto& t = a.trapezoid();
    if (t.left_width == 0.0 && t.right_width == 0.0) {
        if (t.core_lo == t.core_hi) {
            j["shape"] = "constant";
            j["value"] = t.core_lo;
        } else {
            j["shape"] = "rectangular";
            j["support"] = ordered_json::array({t.core_lo, t.core_hi});
        }
    } else if (t.core_lo == t.core_hi) {
        j["shape"] = "triangular";
        j["center"] = t.core_lo;
        j["left_width"] = t.left_width;
        j["right_width"] = t.right_width;
    } else {
        j["shape"] = "trapezoidal";
        j["core"] = ordered_json::array({t.core_lo, t.core_hi});
        j["left_width"] = t.left_width;
        j["right_width"] = t.right_width;
    }
    return j;
}

inline ordered_json random_json(const RandomVariable& x) {
    ordered_json j;
    switch (x.kind()) {
        case RandomVariable::Kind::Uniform: {
            Interval s = x.support();
            j["distribution"] = "uniform";
            j["support"] = ordered_json::array({s.lo, s.hi});
            break;
        }
        case RandomVariable::Kind::Degenerate:
            j["distribution"] = "degenerate";
            j["value"] = x.degenerate_value();
            break;
        case RandomVariable::Kind::Discrete:
            j["distribution"] = "discrete";
            j["points"] = x.points();
            j["probabilities"] = x.probabilities();
            break;
    }
    return j;
}

inline ordered_json risk_json(const std::optional<FuzzyNumber>& fuzzy,
                              const std::optional<RandomVariable>& random) {
    ordered_json j;
    if (fuzzy) {
        j["fuzzy"] = fuzzy_json(*fuzzy);
    } else {
        j["random"] = random_json(*random);
    }
    return j;
}

}  // namespace ioschema

inline std::string serialize_scenario(const ScenarioDocument& doc) {
    using ioschema::ordered_json;
    const SavingScenario& scn = doc.scenario;
    ordered_json j;
    j["format_version"] = 1;
    j["model"] = to_string(scn.model);
    if (!scn.weighting.is_power()) {
        throw ConfigError("tabulated weightings have no file representation");
    }
    j["weighting"] = ordered_json{{"exponent", scn.weighting.exponent()}};
    j["endowment"] = ordered_json{{"y0", scn.y0}, {"x0", scn.x0}};
    j["utility_u"] = ioschema::utility_json(scn.first_period, false);
    j["utility_v"] = ioschema::utility_json(scn.second_period, scn.shape_override);
    j["income_risk"] = ioschema::risk_json(scn.income_fuzzy, scn.income_random);
    j["background_risk"] =
        ioschema::risk_json(scn.background_fuzzy, scn.background_random);
    ordered_json solver;
    solver["tolerance"] = scn.solver.tolerance;
    if (scn.solver.bounds) {
        solver["bounds"] =
            ordered_json::array({scn.solver.bounds->first, scn.solver.bounds->second});
    }
    solver["quadrature_nodes"] = scn.solver.quadrature_nodes;
    j["solver"] = solver;
    ordered_json outputs;
    outputs["report"] = doc.report_kinds;
    if (doc.csv_path) outputs["csv_path"] = *doc.csv_path;
    j["outputs"] = outputs;
    return j.dump(2) + "\n";
}

}  // namespace mixrisk
