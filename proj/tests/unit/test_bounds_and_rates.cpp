#include "trotter/bounds_and_rates.hpp"
#include "trotter/error.hpp"
#include "trotter/numeric.hpp"
#include "trotter/reference_oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace trotter;

TEST_CASE("fit_line") {
    const std::vector<double> x{0, 1, 2, 3};
    const std::vector<double> y{1, 3, 5, 7};
    const LinearFit f = fit_line(x, y);
    CHECK(f.slope == doctest::Approx(2.0));
    CHECK(f.intercept == doctest::Approx(1.0));
    CHECK(f.r2 == doctest::Approx(1.0));
    const std::vector<double> same{2, 2, 2};
    try {
        (void)fit_line(same, same);
        FAIL("expected DegenerateGrid");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::DegenerateGrid);
    }
}

TEST_CASE("adaptive Simpson") {
    CHECK(integrate_adaptive_simpson([](double t) { return t; }, 0.0, 1.0, 1e-12) == doctest::Approx(0.5));
    CHECK(integrate_adaptive_simpson([](double t) { return std::sqrt(t); }, 0.0, 1.0, 1e-12) ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-11));
    CHECK(integrate_adaptive_simpson([](double t) { return std::cos(t); }, 0.0, std::numbers::pi, 1e-12, 7) ==
          doctest::Approx(0.0).epsilon(1e-11));
}

TEST_CASE("beta_function") {
    CHECK(beta_function(1.0, 1.0) == doctest::Approx(1.0));
    CHECK(beta_function(0.5, 0.5) == doctest::Approx(std::numbers::pi).epsilon(1e-14));
    CHECK(beta_function(2.0, 3.0) == doctest::Approx(1.0 / 12.0));
}

TEST_CASE("beta sum bound") {
    const auto r00 = beta_sum_bound(2, 0.0, 0.0);
    CHECK(r00.lhs == 1.0);
    CHECK(r00.rhs == doctest::Approx(2.0));
    CHECK(r00.holds);
    const auto rhalf = beta_sum_bound(2, 0.5, 0.5);
    CHECK(rhalf.lhs == 1.0);
    CHECK(rhalf.rhs == doctest::Approx(std::numbers::pi));
    const auto r10 = beta_sum_bound(10, 0.3, 0.4);
    double lhs = 0.0;
    for (int k = 1; k <= 9; ++k) {
        lhs += std::pow(10.0 - k, -0.4) * std::pow(k, -0.3);
    }
    CHECK(r10.lhs == doctest::Approx(lhs).epsilon(1e-14));
    CHECK(r10.rhs == doctest::Approx(std::exp(std::lgamma(0.7) + std::lgamma(0.6) - std::lgamma(1.3)) *
                                     std::pow(10.0, 0.3)));
    CHECK(r10.holds);

    const std::vector<double> grid{0.0, 0.3, 0.6};
    const auto scan = beta_sum_scan(50, grid);
    CHECK(scan.size() == 6u * 49u);
    for (const auto& row : scan) {
        const auto direct = beta_sum_bound(row.n, row.alpha, row.gamma);
        CHECK(row.lhs == doctest::Approx(direct.lhs).epsilon(1e-12));
        CHECK(row.rhs == doctest::Approx(direct.rhs).epsilon(1e-12));
        CHECK(row.gamma >= row.alpha);
    }
}

TEST_CASE("z_constant") {
    CHECK(z_constant(0.5, 0.5, 0.0, 0.0, 1.0) == 0.0);
    CHECK(z_constant(0.5, 0.5, 1.0, 0.0, 1.0) == doctest::Approx(5.2).epsilon(1e-14));
    const double base = z_constant(0.6, 0.4, 1.0, 1.0, 1.0);
    CHECK(z_constant(0.6, 0.4, 2.0, 1.0, 1.0) >= base);
    CHECK(z_constant(0.6, 0.4, 1.0, 2.0, 1.0) >= base);
    CHECK(z_constant(0.6, 0.4, 1.0, 1.0, 2.0) >= base);
    CHECK(z_constant(0.4, 0.6, 1.0, 1.0, 1.0) > 0.0);
    for (double g : {0.0, 1.0}) {
        try {
            (void)z_constant(g, 0.5, 1.0, 1.0, 1.0);
            FAIL("expected DomainError");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::DomainError);
        }
    }
}

TEST_CASE("n0_threshold") {
    CHECK(n0_threshold(0.5, 0.0, 1.0) == 1);
    CHECK(n0_threshold(0.5, 0.5, 1.0) == 10);
    CHECK(n0_threshold(0.5, 0.5, 1.0, 0.2) == 10);
    CHECK(n0_threshold(0.5, 0.6, 1.0) >= 10);
    CHECK(n0_threshold(0.5, 0.5, 2.0) >= 10);
}

TEST_CASE("m_gamma_solve") {
    CHECK(*m_gamma_solve(5.0, 0.0, 0.0, 100.0, 0.5, 0.25) == doctest::Approx(5.0));
    // sqrt(M) = (0.5 + sqrt(0.25 + 20)) / 2 = 2.5
    const double expected = std::pow((0.5 + std::sqrt(0.25 + 20.0)) / 2.0, 2.0);
    CHECK(expected == 6.25);
    CHECK(*m_gamma_solve(5.0, 0.0, 0.5, 100.0, 0.5, 0.25) == doctest::Approx(expected).epsilon(1e-7));

    double previous = std::numeric_limits<double>::infinity();
    for (double n : {50.0, 100.0, 1000.0, 1e5, 1e8}) {
        const auto m = m_gamma_solve(5.0, 1.0, 0.5, n, 0.5, 0.25);
        REQUIRE(m.has_value());
        CHECK(*m <= previous);
        CHECK(*m >= expected * (1.0 - 1e-7));
        previous = *m;
    }
    try {
        (void)m_gamma_solve(5.0, 2.0, 0.0, 3.0, 0.5, 0.25);
        FAIL("expected FeasibilityViolated");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::FeasibilityViolated);
    }
}

TEST_CASE("sup_error") {
    const auto a = SpectralOperator::from_diagonal(Vector::Ones(1), Role::a_role);
    const auto lin = make_scalar_family({ProfileKind::linear, 1.0, 1.0, 0}, 1.0);
    const auto zero = make_scalar_family({ProfileKind::linear, 0.0, 1.0, 0}, 1.0);
    for (long n : {1L, 4L}) {
        CHECK(sup_error(a, zero, n, 4, 1e-10, Variant::left) <= 1e-15);
    }
    // grid {0, 1/2, 1}: candidates (1/2,0), (1,0), (1,1/2)
    double expected = 0.0;
    for (auto [s, t] : {std::pair{0.0, 0.5}, std::pair{0.0, 1.0}, std::pair{0.5, 1.0}}) {
        const double u = std::exp(-(t - s) - 0.5 * (t * t - s * s));
        const double tau = (t - s) / 2.0;
        const double v = std::exp(-(t - s) - tau * (s + (s + tau)));
        expected = std::max(expected, std::abs(v - u));
    }
    CHECK(expected == doctest::Approx(std::exp(-1.25) - std::exp(-1.5)));
    CHECK(sup_error(a, lin, 2, 2, 1e-10, Variant::left) == doctest::Approx(expected).epsilon(1e-9));
    const auto sweep = sup_error_sweep(a, lin, {2, 4}, 2, 1e-10);
    CHECK(sweep.at(0).left == doctest::Approx(expected).epsilon(1e-9));
    CHECK(sweep.at(0).right == doctest::Approx(sup_error(a, lin, 2, 2, 1e-10, Variant::right)).epsilon(1e-12));
}

TEST_CASE("rate_fit") {
    std::vector<std::pair<long, double>> half;
    std::vector<std::pair<long, double>> inv;
    for (long n = 2; n <= 256; n *= 2) {
        half.emplace_back(n, std::pow(n, -0.5));
        inv.emplace_back(n, 3.0 / n);
    }
    const auto r = rate_fit(half, 0.5, 0.0);
    CHECK(r.fitted_slope == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.r2 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.points_used == 8);
    CHECK(r.condition_ok);
    const auto r1 = rate_fit(inv, 1.0, 0.0);
    CHECK(r1.fitted_slope == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r1.fitted_log_constant == doctest::Approx(std::log(3.0)).epsilon(1e-12));

    CHECK_FALSE(rate_fit(half, 0.5, 0.8).condition_ok);

    std::vector<std::pair<long, double>> floor_only{{2, 0.0}, {4, 1e-14}, {8, 0.0}, {16, 0.0}};
    try {
        (void)rate_fit(floor_only, 1.0, 0.0);
        FAIL("expected AllBelowFloor");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::AllBelowFloor);
    }
    std::vector<std::pair<long, double>> three{{2, 0.5}, {4, 0.25}, {8, 0.125}, {16, 0.0}};
    try {
        (void)rate_fit(three, 1.0, 0.0);
        FAIL("expected TooFewPoints");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::TooFewPoints);
    }
}

TEST_CASE("property: rate fit is invariant under scaling the errors") {
    std::vector<std::pair<long, double>> base{{2, 0.3}, {4, 0.2}, {8, 0.09}, {16, 0.07}, {32, 0.03}};
    const auto r = rate_fit(base, 0.5, 0.0);
    for (double scale : {1e-6, 0.1, 7.0, 1e4}) {
        auto scaled = base;
        for (auto& e : scaled) {
            e.second *= scale;
        }
        const auto rs = rate_fit(scaled, 0.5, 0.0);
        CHECK(rs.fitted_slope == doctest::Approx(r.fitted_slope).epsilon(1e-10));
        CHECK(rs.r2 == doctest::Approx(r.r2).epsilon(1e-10));
        CHECK(rs.fitted_log_constant == doctest::Approx(r.fitted_log_constant + std::log(scale)).epsilon(1e-10));
    }
}

TEST_CASE("property: raising the smoothness parameter only shrinks the assumption constants") {
    // ||B A^-a|| and the Holder seminorm shrink with a, so any (C, L) pair
    // that works at a works at every a' > a.
    const Heat1d h = make_heat1d_family(6, Potential::sin_squared(), {ProfileKind::power, 1.0, 0.5, 0}, 1.0);
    double c_prev = estimate_c_alpha(h.family, h.a, 0.0, 32);
    for (double alpha : {0.25, 0.5, 0.75}) {
        const double c = estimate_c_alpha(h.family, h.a, alpha, 32);
        CHECK(c <= c_prev * (1.0 + 1e-12));
        c_prev = c;
    }
}
