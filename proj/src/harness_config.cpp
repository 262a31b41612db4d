#include "trotter/harness.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace trotter::harness {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) {
    throw Error(Errc::ConfigParse, what);
}

void require_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    if (!obj.is_object()) {
        bad(where + " must be a JSON object");
    }
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.contains(key)) {
            bad("unknown key '" + key + "' in " + where);
        }
    }
}

double get_number(const json& obj, const char* key, double fallback, const std::string& where) {
    if (!obj.contains(key)) {
        return fallback;
    }
    if (!obj.at(key).is_number()) {
        bad(where + "." + key + " must be a number");
    }
    return obj.at(key).get<double>();
}

long get_integer(const json& obj, const char* key, long fallback, const std::string& where) {
    if (!obj.contains(key)) {
        return fallback;
    }
    if (!obj.at(key).is_number_integer()) {
        bad(where + "." + key + " must be an integer");
    }
    return obj.at(key).get<long>();
}

std::string get_string(const json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key) || !obj.at(key).is_string()) {
        bad(where + "." + key + " must be a string");
    }
    return obj.at(key).get<std::string>();
}

ProfileSpec parse_profile(const json& obj) {
    const std::string where = "family.profile";
    require_keys(obj, {"type", "c", "beta", "K"}, where);
    const std::string type = get_string(obj, "type", where);
    ProfileSpec spec;
    spec.coefficient = get_number(obj, "c", 1.0, where);
    if (type == "power") {
        spec.kind = ProfileKind::power;
        spec.beta = get_number(obj, "beta", 0.5, where);
    } else if (type == "linear") {
        spec.kind = ProfileKind::linear;
    } else if (type == "weierstrass") {
        spec.kind = ProfileKind::weierstrass;
        spec.beta = get_number(obj, "beta", 0.5, where);
        spec.terms = static_cast<int>(get_integer(obj, "K", 12, where));
    } else if (type == "zero") {
        spec.kind = ProfileKind::linear;
        spec.coefficient = 0.0;
    } else {
        bad("family.profile.type must be power, linear, weierstrass or zero");
    }
    return spec;
}

Matrix parse_matrix(const json& value, const std::string& where) {
    if (!value.is_array() || value.empty()) {
        bad(where + " must be a non-empty array of rows");
    }
    const auto n = static_cast<Index>(value.size());
    Matrix m(n, n);
    for (Index i = 0; i < n; ++i) {
        const json& row = value.at(i);
        if (!row.is_array() || static_cast<Index>(row.size()) != n) {
            bad(where + " must be square");
        }
        for (Index j = 0; j < n; ++j) {
            if (!row.at(j).is_number()) {
                bad(where + " entries must be numbers");
            }
            m(i, j) = row.at(j).get<double>();
        }
    }
    return m;
}

Potential parse_potential(const json& obj) {
    const std::string where = "family.potential";
    require_keys(obj, {"type", "value"}, where);
    const std::string type = get_string(obj, "type", where);
    if (type == "zero") {
        return Potential::zero();
    }
    if (type == "constant") {
        return Potential::constant(get_number(obj, "value", 1.0, where));
    }
    if (type == "sin2") {
        return Potential::sin_squared();
    }
    if (type == "tent") {
        return Potential::tent();
    }
    bad("family.potential.type must be zero, constant, sin2 or tent");
}

SpectralOperator parse_a(const json& family, Index dim) {
    if (!family.contains("A_diag")) {
        return SpectralOperator::from_diagonal(Vector::Ones(dim), Role::a_role);
    }
    const json& diag = family.at("A_diag");
    if (!diag.is_array() || static_cast<Index>(diag.size()) != dim) {
        bad("family.A_diag must be an array of length dim");
    }
    Vector v(dim);
    for (Index i = 0; i < dim; ++i) {
        if (!diag.at(i).is_number()) {
            bad("family.A_diag entries must be numbers");
        }
        v(i) = diag.at(i).get<double>();
    }
    return SpectralOperator::from_diagonal(v, Role::a_role);
}

Index resolve_dim(const ExperimentConfig& config, std::optional<Index> implied, Index fallback) {
    if (config.dim && implied && *config.dim != *implied) {
        bad("dim disagrees with the family definition");
    }
    if (config.dim) {
        return *config.dim;
    }
    return implied.value_or(fallback);
}

} // namespace

ExperimentConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        bad(std::string("malformed JSON: ") + e.what());
    }
    require_keys(root, {"family", "dim", "T", "alpha", "n_list", "grid_n", "tol", "command_options"}, "config");

    ExperimentConfig config;
    if (root.contains("family")) {
        if (!root.at("family").is_object()) {
            bad("family must be an object");
        }
        config.family = root.at("family");
    }
    if (root.contains("dim")) {
        config.dim = get_integer(root, "dim", 1, "config");
        if (*config.dim < 1) {
            bad("dim must be >= 1");
        }
    }
    config.horizon = get_number(root, "T", 1.0, "config");
    if (!(config.horizon > 0.0)) {
        bad("T must be > 0");
    }
    config.alpha = get_number(root, "alpha", 0.0, "config");
    if (!(config.alpha >= 0.0 && config.alpha < 1.0)) {
        bad("alpha must lie in [0, 1)");
    }
    if (root.contains("n_list")) {
        const json& list = root.at("n_list");
        if (!list.is_array() || list.empty()) {
            bad("n_list must be a non-empty array of integers");
        }
        config.n_list.clear();
        for (const json& v : list) {
            if (!v.is_number_integer() || v.get<long>() < 1) {
                bad("n_list entries must be positive integers");
            }
            if (!config.n_list.empty() && v.get<long>() <= config.n_list.back()) {
                bad("n_list must be strictly increasing");
            }
            config.n_list.push_back(v.get<long>());
        }
    }
    if (root.contains("grid_n")) {
        config.grid_n = static_cast<int>(get_integer(root, "grid_n", 8, "config"));
        if (*config.grid_n < 2) {
            bad("grid_n must be >= 2");
        }
    }
    config.tol = get_number(root, "tol", 1e-10, "config");
    if (!(config.tol >= 1e-12 && config.tol <= 1e-6)) {
        bad("tol must lie in [1e-12, 1e-6]");
    }
    if (root.contains("command_options")) {
        if (!root.at("command_options").is_object()) {
            bad("command_options must be an object");
        }
        config.command_options = root.at("command_options");
    }
    return config;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        bad("cannot open config file " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

Problem build_problem(const ExperimentConfig& config) {
    if (!config.family) {
        bad("this command needs a family");
    }
    const json& fam = *config.family;
    const std::string kind = get_string(fam, "kind", "family");

    if (kind == "scalar") {
        require_keys(fam, {"kind", "profile", "A_diag"}, "family");
        std::optional<Index> implied;
        if (fam.contains("A_diag") && fam.at("A_diag").is_array()) {
            implied = static_cast<Index>(fam.at("A_diag").size());
        }
        const Index dim = resolve_dim(config, implied, 1);
        const ProfileSpec profile = parse_profile(fam.contains("profile") ? fam.at("profile") : json{{"type", "zero"}});
        return Problem{parse_a(fam, dim),
                       make_scalar_family(profile, config.horizon, dim).with_declared_alpha(config.alpha)};
    }
    if (kind == "synthetic") {
        require_keys(fam, {"kind", "profile", "A_diag", "B0", "B1"}, "family");
        if (!fam.contains("B0") || !fam.contains("B1")) {
            bad("synthetic family needs B0 and B1");
        }
        const Matrix b0 = parse_matrix(fam.at("B0"), "family.B0");
        const Matrix b1 = parse_matrix(fam.at("B1"), "family.B1");
        const Index dim = resolve_dim(config, b0.rows(), b0.rows());
        const ProfileSpec profile = parse_profile(fam.contains("profile") ? fam.at("profile") : json{{"type", "zero"}});
        return Problem{parse_a(fam, dim),
                       make_synthetic_matrix_family(SymmetricMatrix(b0), SymmetricMatrix(b1), profile,
                                                    config.horizon)
                           .with_declared_alpha(config.alpha)};
    }
    if (kind == "heat1d") {
        require_keys(fam, {"kind", "profile", "potential", "modes"}, "family");
        std::optional<Index> implied;
        if (fam.contains("modes")) {
            implied = get_integer(fam, "modes", 16, "family");
        }
        const Index modes = resolve_dim(config, implied, 16);
        if (modes < 1) {
            bad("heat1d needs modes >= 1");
        }
        const Potential potential =
            fam.contains("potential") ? parse_potential(fam.at("potential")) : Potential::sin_squared();
        const ProfileSpec profile = parse_profile(fam.contains("profile") ? fam.at("profile") : json{{"type", "zero"}});
        Heat1d heat = make_heat1d_family(modes, potential, profile, config.horizon);
        return Problem{std::move(heat.a), heat.family.with_declared_alpha(config.alpha)};
    }
    bad("family.kind must be scalar, synthetic or heat1d");
}

} // namespace trotter::harness
