#include "trotter/harness.hpp"

#include <doctest.h>

using namespace trotter;
using namespace trotter::harness;

namespace {

Errc parse_error_code(const std::string& text) {
    try {
        (void)parse_config(text);
    } catch (const Error& e) {
        return e.code();
    }
    return Errc::NonFinite; // sentinel: parsed fine
}

} // namespace

TEST_CASE("config parsing") {
    const auto c = parse_config(R"({"T": 2.0, "alpha": 0.3, "n_list": [2, 8], "tol": 1e-9})");
    CHECK(c.horizon == 2.0);
    CHECK(c.alpha == 0.3);
    CHECK(c.n_list == std::vector<long>{2, 8});
    CHECK(c.tol == 1e-9);
    CHECK_FALSE(c.family.has_value());

    const auto d = parse_config("{}");
    CHECK(d.n_list == std::vector<long>{2, 4, 8, 16, 32, 64, 128, 256});
    CHECK(d.tol == 1e-10);

    CHECK(parse_error_code(R"({"T": 1, "mystery": 3})") == Errc::ConfigParse);
    CHECK(parse_error_code(R"({"n_list": [4, 2]})") == Errc::ConfigParse);
    CHECK(parse_error_code(R"({"n_list": [2, 2]})") == Errc::ConfigParse);
    CHECK(parse_error_code(R"({"tol": 1e-13})") == Errc::ConfigParse);
    CHECK(parse_error_code(R"({"tol": 1e-5})") == Errc::ConfigParse);
    CHECK(parse_error_code(R"({"alpha": 1.0})") == Errc::ConfigParse);
    CHECK(parse_error_code(R"({"T": 1)") == Errc::ConfigParse);
}

TEST_CASE("family construction") {
    const auto heat = build_problem(parse_config(
        R"({"family": {"kind": "heat1d", "modes": 4, "potential": {"type": "sin2"}, "profile": {"type": "linear"}}, "alpha": 0.5})"));
    CHECK(heat.a.dim() == 4);
    CHECK(heat.family.declared_alpha() == 0.5);
    CHECK(heat.a.eigenvalues()(3) == 16.0);

    const auto scalar = build_problem(parse_config(R"({"family": {"kind": "scalar", "profile": {"type": "weierstrass", "beta": 0.5, "K": 3}}})"));
    CHECK(scalar.family.scalar_profile().has_value());

    try {
        (void)build_problem(parse_config(R"({"family": {"kind": "heat1d", "modes": 4}, "dim": 5})"));
        FAIL("expected ConfigParse");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::ConfigParse);
    }
    try {
        (void)build_problem(parse_config(R"({"family": {"kind": "scalar", "wat": 1}})"));
        FAIL("expected ConfigParse");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::ConfigParse);
    }
}

TEST_CASE("bounds command") {
    const auto r = run_bounds(parse_config(R"({"command_options": {"n_max": 2, "grid": [0.0]}})"));
    CHECK(r.exit_code == kExitOk);
    CHECK(r.csv == "n,alpha,gamma,lhs,rhs,holds\n2,0,0,1,2,true\n");
    CHECK(r.report.at("z_constant").get<double>() == doctest::Approx(5.2));
    CHECK(r.report.at("n0_threshold").get<long>() == 10);
}

TEST_CASE("check command flags") {
    const auto zero = run_check(parse_config(R"({"family": {"kind": "scalar", "profile": {"type": "zero"}}})"));
    CHECK(zero.exit_code == kExitOk);
    CHECK(zero.report.at("c_alpha_hat").get<double>() == 0.0);

    const auto sqrt_ok = run_check(parse_config(
        R"({"family": {"kind": "scalar", "profile": {"type": "power", "beta": 0.5}}, "alpha": 0.0, "grid_n": 64})"));
    CHECK(sqrt_ok.exit_code == kExitOk);
    const auto sqrt_bad = run_check(parse_config(
        R"({"family": {"kind": "scalar", "profile": {"type": "power", "beta": 0.5}}, "alpha": 0.9, "grid_n": 64})"));
    CHECK(sqrt_bad.exit_code == kExitCheckFailed);
}

TEST_CASE("converge on the zero family is all below the floor") {
    const auto r = run_converge(parse_config(R"({"family": {"kind": "scalar", "profile": {"type": "zero"}}, "n_list": [2, 4, 8, 16]})"));
    CHECK(r.exit_code == kExitOk);
    CHECK(r.csv.rfind("n,sup_error_left,sup_error_right\n", 0) == 0);
}

TEST_CASE("exit codes and number formatting") {
    CHECK(exit_code_for(Error(Errc::ConfigParse, "x")) == kExitConfig);
    CHECK(exit_code_for(Error(Errc::IndivisibleGrid, "x")) == kExitIndivisible);
    CHECK(exit_code_for(Error(Errc::CapExceeded, "x")) == kExitNumeric);
    CHECK(format_real(0.0) == "0");
    CHECK(format_real(2.0) == "2");
    CHECK(std::stod(format_real(0.1)) == 0.1);
}
