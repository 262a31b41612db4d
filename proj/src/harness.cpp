#include "trotter/harness.hpp"

#include "trotter/bounds_and_rates.hpp"
#include "trotter/evolution_semigroup.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace trotter::harness {

using nlohmann::json;

std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

int exit_code_for(const Error& e) {
    switch (e.code()) {
        case Errc::ConfigParse: return kExitConfig;
        case Errc::IndivisibleGrid: return kExitIndivisible;
        default: return kExitNumeric;
    }
}

namespace {

[[noreturn]] void bad(const std::string& what) {
    throw Error(Errc::ConfigParse, what);
}

const json& options_for(const ExperimentConfig& config, const std::set<std::string>& allowed,
                        const char* command) {
    for (const auto& [key, value] : config.command_options.items()) {
        if (!allowed.contains(key)) {
            bad("unknown command option '" + key + "' for " + command);
        }
    }
    return config.command_options;
}

double number_opt(const json& obj, const char* key, double fallback) {
    if (!obj.contains(key)) {
        return fallback;
    }
    if (!obj.at(key).is_number()) {
        bad(std::string("command option ") + key + " must be a number");
    }
    return obj.at(key).get<double>();
}

int int_opt(const json& obj, const char* key, int fallback) {
    if (!obj.contains(key)) {
        return fallback;
    }
    if (!obj.at(key).is_number_integer()) {
        bad(std::string("command option ") + key + " must be an integer");
    }
    return obj.at(key).get<int>();
}

std::vector<double> list_opt(const json& obj, const char* key, std::vector<double> fallback) {
    if (!obj.contains(key)) {
        return fallback;
    }
    const json& v = obj.at(key);
    if (!v.is_array() || v.empty()) {
        bad(std::string("command option ") + key + " must be a non-empty array");
    }
    std::vector<double> out;
    for (const json& x : v) {
        if (!x.is_number()) {
            bad(std::string("command option ") + key + " must hold numbers");
        }
        out.push_back(x.get<double>());
    }
    return out;
}

std::vector<double> scaled(std::vector<double> fractions, double horizon) {
    for (double& f : fractions) {
        f *= horizon;
    }
    return fractions;
}

std::vector<double> powers_of_two(int from, int to) {
    std::vector<double> out;
    for (int j = from; j <= to; ++j) {
        out.push_back(std::ldexp(1.0, -j));
    }
    return out;
}

} // namespace

// --------------------------------------------------------------------------
// check

RunResult run_check(const ExperimentConfig& config, unsigned) {
    options_for(config, {}, "check");
    const Problem p = build_problem(config);
    const int grid = config.grid_n.value_or(64);
    const AssumptionReport rep = estimate_holder(p.family, p.a, config.alpha, grid);

    const bool gt_alpha = rep.beta_defined && rep.holder_beta_hat > config.alpha;
    const bool gt_2alpha = rep.beta_defined && rep.holder_beta_hat > 2.0 * config.alpha - 1.0;

    RunResult out;
    out.exit_code = gt_2alpha ? kExitOk : kExitCheckFailed;
    out.report = {
        {"command", "check"},
        {"family", p.family.label()},
        {"alpha", config.alpha},
        {"grid_n", grid},
        {"c_alpha_hat", rep.c_alpha_hat},
        {"holder",
         {{"L", rep.holder_L_hat},
          {"beta", rep.holder_beta_hat},
          {"beta_raw", rep.holder_beta_raw},
          {"r2", rep.fit_r2},
          {"clipped", rep.beta_clipped},
          {"defined", rep.beta_defined}}},
        {"flags", {{"beta_gt_alpha", gt_alpha}, {"beta_gt_2alpha_minus_1", gt_2alpha}}},
    };
    std::ostringstream csv;
    csv << "gap,dt,max_difference\n";
    const double h = config.horizon / grid;
    for (std::size_t g = 0; g < rep.gap_envelope.size(); ++g) {
        csv << g + 1 << ',' << format_real(static_cast<double>(g + 1) * h) << ','
            << format_real(rep.gap_envelope[g]) << '\n';
    }
    out.csv = csv.str();
    std::ostringstream sum;
    sum << "check: C_alpha = " << rep.c_alpha_hat << ", L = " << rep.holder_L_hat
        << ", beta = " << rep.holder_beta_hat << (gt_2alpha ? " > " : " <= ") << "2 alpha - 1 = "
        << 2.0 * config.alpha - 1.0;
    out.summary = sum.str();
    return out;
}

// --------------------------------------------------------------------------
// converge

namespace {

struct FitOutcome {
    std::optional<ConvergenceReport> fit;
    std::string degenerate; // error code name when no fit was possible
};

FitOutcome try_fit(const std::vector<SupErrorRow>& rows, bool left, double beta, double alpha) {
    std::vector<std::pair<long, double>> entries;
    for (const auto& r : rows) {
        entries.emplace_back(r.n, left ? r.left : r.right);
    }
    try {
        return {rate_fit(entries, beta, alpha), ""};
    } catch (const Error& e) {
        if (e.code() == Errc::AllBelowFloor || e.code() == Errc::TooFewPoints) {
            return {std::nullopt, std::string(to_string(e.code()))};
        }
        throw;
    }
}

json fit_json(const FitOutcome& f) {
    if (!f.fit) {
        return {{"degenerate", f.degenerate}};
    }
    return {{"slope", f.fit->fitted_slope},
            {"log_constant", f.fit->fitted_log_constant},
            {"r2", f.fit->r2},
            {"points_used", f.fit->points_used}};
}

} // namespace

RunResult run_converge(const ExperimentConfig& config, unsigned threads) {
    const json& opts = options_for(config, {"slope_tolerance"}, "converge");
    if (config.n_list.size() < 4) {
        bad("converge needs at least four entries in n_list");
    }
    const double slope_tol = number_opt(opts, "slope_tolerance", 0.2);
    const Problem p = build_problem(config);
    const int grid = config.grid_n.value_or(8);
    const auto rows = sup_error_sweep(p.a, p.family, config.n_list, grid, config.tol, threads);

    const double beta = p.family.declared_beta();
    const FitOutcome left = try_fit(rows, true, beta, config.alpha);
    const FitOutcome right = try_fit(rows, false, beta, config.alpha);
    auto slope_ok = [&](const FitOutcome& f) { return !f.fit || f.fit->fitted_slope >= beta - slope_tol; };
    const bool passed = slope_ok(left) && slope_ok(right);

    RunResult out;
    out.exit_code = passed ? kExitOk : kExitSlopeFailed;
    json entries = json::array();
    for (const auto& r : rows) {
        entries.push_back({{"n", r.n}, {"sup_error_left", r.left}, {"sup_error_right", r.right}});
    }
    out.report = {
        {"command", "converge"},
        {"family", p.family.label()},
        {"alpha", config.alpha},
        {"grid_n", grid},
        {"tol", config.tol},
        {"predicted_beta", beta},
        {"condition_ok", beta > 2.0 * config.alpha - 1.0},
        {"slope_tolerance", slope_tol},
        {"left", fit_json(left)},
        {"right", fit_json(right)},
        {"passed", passed},
        {"entries", entries},
    };
    if (left.fit && right.fit) {
        out.report["slope_left"] = left.fit->fitted_slope;
        out.report["slope_right"] = right.fit->fitted_slope;
        out.report["r2"] = std::min(left.fit->r2, right.fit->r2);
    }
    std::ostringstream csv;
    csv << "n,sup_error_left,sup_error_right\n";
    for (const auto& r : rows) {
        csv << r.n << ',' << format_real(r.left) << ',' << format_real(r.right) << '\n';
    }
    out.csv = csv.str();
    std::ostringstream sum;
    sum << "converge: ";
    if (left.fit && right.fit) {
        sum << "slope_left = " << left.fit->fitted_slope << ", slope_right = " << right.fit->fitted_slope;
    } else {
        sum << "degenerate fit (" << (left.fit ? right.degenerate : left.degenerate) << ")";
    }
    sum << ", predicted beta = " << beta << (passed ? ", pass" : ", FAIL");
    out.summary = sum.str();
    return out;
}

// --------------------------------------------------------------------------
// semigroup

RunResult run_semigroup(const ExperimentConfig& config, unsigned threads) {
    const json& opts = options_for(config,
                                   {"N", "gamma", "beta", "onestep_taus", "onestep_grid", "sandwich_N",
                                    "sandwich_taus", "smoothing_N", "smoothing_taus", "stability_n", "stability_N",
                                    "rate_N"},
                                   "semigroup");
    const Problem p = build_problem(config);
    const double horizon = config.horizon;
    const int slots = int_opt(opts, "N", 16);
    const double gamma = number_opt(opts, "gamma", 0.5 * (1.0 + config.alpha));
    const double beta = number_opt(opts, "beta", p.family.declared_beta());
    if (!(gamma >= config.alpha && gamma < 1.0 && gamma > 0.0)) {
        bad("gamma must lie in [alpha, 1) and be positive");
    }

    json report = {{"command", "semigroup"}, {"family", p.family.label()}, {"alpha", config.alpha},
                   {"N", slots},           {"gamma", gamma},              {"beta", beta}};
    std::ostringstream csv;
    csv << "n,variant,semigroup_error,propagator_error,gap\n";

    // correspondence: one row per (n, variant)
    double max_gap = 0.0;
    json corr = json::array();
    ReferenceTable table(p.a, p.family, slots, config.tol, ReferenceMode::chained);
    for (long n : config.n_list) {
        for (Variant v : {Variant::left, Variant::right}) {
            const auto r = correspondence_check(table, static_cast<int>(n), v, threads);
            const char* name = v == Variant::left ? "left" : "right";
            max_gap = std::max(max_gap, r.gap);
            corr.push_back({{"n", n},
                            {"variant", name},
                            {"semigroup_error", r.semigroup_error},
                            {"propagator_error", r.propagator_error},
                            {"gap", r.gap}});
            csv << n << ',' << name << ',' << format_real(r.semigroup_error) << ','
                << format_real(r.propagator_error) << ',' << format_real(r.gap) << '\n';
        }
    }
    report["correspondence"] = corr;
    report["max_gap"] = max_gap;

    const auto smooth = check_smoothing_33(p.a, p.family, gamma, int_opt(opts, "smoothing_N", 64),
                                           scaled(list_opt(opts, "smoothing_taus", powers_of_two(1, 6)), horizon),
                                           config.tol, threads);
    report["smoothing"] = {{"lambda_left", smooth.lambda_left},
                           {"lambda_right", smooth.lambda_right},
                           {"lambda_left_doubled", smooth.lambda_left_doubled},
                           {"lambda_right_doubled", smooth.lambda_right_doubled},
                           {"stable", smooth.stable}};

    const auto onestep = check_onestep_36(p.a, p.family, gamma,
                                          scaled(list_opt(opts, "onestep_taus", {1e-1, 1e-2, 1e-3, 1e-4}), horizon),
                                          int_opt(opts, "onestep_grid", 16), config.tol);
    report["onestep"] = {{"c_gamma", onestep.c_gamma}, {"max_ratio", onestep.max_ratio}, {"passed", onestep.passed}};

    const auto sandwich = check_sandwich_37(p.a, p.family, gamma, beta, int_opt(opts, "sandwich_N", 256),
                                            scaled(list_opt(opts, "sandwich_taus", powers_of_two(2, 8)), horizon),
                                            config.tol, threads);
    json sandwich_rows = json::array();
    for (const auto& r : sandwich.rows) {
        sandwich_rows.push_back({{"tau", r.tau}, {"lhs", r.lhs}, {"bound", r.bound}, {"ratio", r.ratio}});
    }
    report["sandwich"] = {{"z", sandwich.z},
                          {"c_gamma", sandwich.c_gamma},
                          {"holder_L", sandwich.holder_l},
                          {"kappa", sandwich.kappa},
                          {"max_ratio", sandwich.max_ratio},
                          {"passed", sandwich.passed},
                          {"rows", sandwich_rows}};

    if (gamma > config.alpha) {
        const auto stab = check_stability_53(p.a, p.family, gamma, int_opt(opts, "stability_n", 16),
                                             int_opt(opts, "stability_N", 64), smooth.lambda());
        report["stability"] = {{"m_gamma", stab.m_gamma},
                               {"m_gamma_doubled", stab.m_gamma_doubled},
                               {"relative_change", stab.relative_change},
                               {"stable", stab.stable},
                               {"sigma", stab.sigma},
                               {"interpolation_max_ratio", stab.interpolation_max_ratio},
                               {"interpolation_ok", stab.interpolation_ok},
                               {"lambda_used", stab.lambda_used},
                               {"n0", stab.n0},
                               {"n_at_least_n0", stab.n_at_least_n0},
                               {"m_gamma_bound", stab.m_gamma_bound ? json(*stab.m_gamma_bound) : json(nullptr)}};
    }

    if (const int rate_n = int_opt(opts, "rate_N", 0); rate_n > 0) {
        const auto rows = semigroup_rate_sweep(p.a, p.family, rate_n, config.n_list, config.tol, threads);
        json rate = json::array();
        for (const auto& r : rows) {
            rate.push_back({{"n", r.n}, {"left", r.left}, {"right", r.right}});
        }
        report["rate"] = {{"entries", rate},
                          {"left", fit_json(try_fit(rows, true, beta, config.alpha))},
                          {"right", fit_json(try_fit(rows, false, beta, config.alpha))}};
    }

    const bool passed = max_gap <= 1e-10 && onestep.passed && sandwich.passed;
    report["passed"] = passed;

    RunResult out;
    out.exit_code = passed ? kExitOk : kExitSemigroupFailed;
    out.report = std::move(report);
    out.csv = csv.str();
    std::ostringstream sum;
    sum << "semigroup: max gap = " << max_gap << ", one-step ratio = " << onestep.max_ratio
        << ", sandwich ratio = " << sandwich.max_ratio << (passed ? ", pass" : ", FAIL");
    out.summary = sum.str();
    return out;
}

// --------------------------------------------------------------------------
// bounds

RunResult run_bounds(const ExperimentConfig& config, unsigned) {
    const json& opts = options_for(config, {"n_max", "grid", "z", "n0", "m_gamma"}, "bounds");
    const long n_max = int_opt(opts, "n_max", 2000);
    std::vector<double> grid;
    for (int i = 0; i < 10; ++i) {
        grid.push_back(i / 10.0);
    }
    grid = list_opt(opts, "grid", grid);

    const auto rows = beta_sum_scan(n_max, grid);
    bool all_hold = true;
    std::ostringstream csv;
    csv << "n,alpha,gamma,lhs,rhs,holds\n";
    for (const auto& r : rows) {
        all_hold = all_hold && r.holds;
        csv << r.n << ',' << format_real(r.alpha) << ',' << format_real(r.gamma) << ',' << format_real(r.lhs)
            << ',' << format_real(r.rhs) << ',' << (r.holds ? "true" : "false") << '\n';
    }

    auto sub = [&](const char* key) { return opts.contains(key) ? opts.at(key) : json::object(); };
    const json zo = sub("z");
    const double z = z_constant(number_opt(zo, "gamma", 0.5), number_opt(zo, "beta", 0.5), number_opt(zo, "C", 1.0),
                                number_opt(zo, "L", 0.0), number_opt(zo, "T", 1.0));
    const json no = sub("n0");
    const long n0 = n0_threshold(number_opt(no, "gamma", 0.5), number_opt(no, "C", 0.5), number_opt(no, "T", 1.0),
                                 number_opt(no, "lambda", 1.0));
    const json mo = sub("m_gamma");
    const auto m = m_gamma_solve(number_opt(mo, "c0", 5.0), number_opt(mo, "c1", 0.0), number_opt(mo, "c2", 0.5),
                                 number_opt(mo, "n", 100.0), number_opt(mo, "gamma", 0.5),
                                 number_opt(mo, "alpha", 0.25));

    RunResult out;
    out.exit_code = all_hold ? kExitOk : kExitBoundsFailed;
    out.report = {{"command", "bounds"},
                  {"n_max", n_max},
                  {"rows", rows.size()},
                  {"all_hold", all_hold},
                  {"z_constant", z},
                  {"n0_threshold", n0},
                  {"m_gamma", m ? json(*m) : json("infeasible")}};
    out.csv = csv.str();
    std::ostringstream sum;
    sum << "bounds: " << rows.size() << " rows, " << (all_hold ? "all hold" : "VIOLATION") << ", Z = " << z
        << ", n0 = " << n0;
    out.summary = sum.str();
    return out;
}

RunResult run_command(const std::string& command, const ExperimentConfig& config, unsigned threads) {
    if (command == "check") {
        return run_check(config, threads);
    }
    if (command == "converge") {
        return run_converge(config, threads);
    }
    if (command == "semigroup") {
        return run_semigroup(config, threads);
    }
    if (command == "bounds") {
        return run_bounds(config, threads);
    }
    bad("unknown command " + command);
}

void write_outputs(const RunResult& result, const std::string& dir) {
    std::filesystem::create_directories(dir);
    const std::filesystem::path base(dir);
    {
        std::ofstream json_out(base / "report.json", std::ios::binary);
        json_out << result.report.dump(2) << '\n';
        if (!json_out) {
            throw std::runtime_error("cannot write " + (base / "report.json").string());
        }
    }
    std::ofstream csv_out(base / "table.csv", std::ios::binary);
    csv_out << result.csv;
    if (!csv_out) {
        throw std::runtime_error("cannot write " + (base / "table.csv").string());
    }
}

} // namespace trotter::harness
