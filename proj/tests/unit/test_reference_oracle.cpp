#include "trotter/error.hpp"
#include "trotter/reference_oracle.hpp"

#include <doctest.h>

#include <cmath>

using namespace trotter;

namespace {

SpectralOperator scalar_a() { return SpectralOperator::from_diagonal(Vector::Ones(1), Role::a_role); }

TimeDependentFamily scalar(ProfileSpec spec) { return make_scalar_family(spec, 1.0); }

const ProfileSpec kLinear{ProfileKind::linear, 1.0, 1.0, 0};
const ProfileSpec kZero{ProfileKind::linear, 0.0, 1.0, 0};

} // namespace

TEST_CASE("analytic_commuting") {
    const auto a = scalar_a();
    const auto u = analytic_commuting(a, scalar(kLinear), 0.0, 1.0);
    CHECK(u.matrix(0, 0) == doctest::Approx(std::exp(-1.5)).epsilon(1e-14));
    CHECK(u.matrix(0, 0) == doctest::Approx(0.22313).epsilon(1e-4));
    CHECK(u.method == Method::analytic);
    CHECK(analytic_commuting(a, scalar(kLinear), 0.4, 0.4).matrix == Matrix::Identity(1, 1));
    CHECK(analytic_commuting(a, scalar(kZero), 0.2, 0.9).matrix(0, 0) == doctest::Approx(std::exp(-0.7)));

    const Heat1d h = make_heat1d_family(3, Potential::sin_squared(), kLinear, 1.0);
    try {
        (void)analytic_commuting(h.a, h.family, 0.0, 1.0);
        FAIL("expected NonCommutingFamily");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::NonCommutingFamily);
    }
}

TEST_CASE("midpoint_exponential") {
    const auto a = scalar_a();
    CHECK(midpoint_exponential(a, scalar(kLinear), 0.0, 1.0, 1).matrix(0, 0) ==
          doctest::Approx(std::exp(-1.5)).epsilon(1e-15));
    Vector v(3);
    v << 1, 4, 9;
    const auto a3 = SpectralOperator::from_diagonal(v, Role::a_role);
    const auto zero3 = make_scalar_family(kZero, 1.0, 3);
    for (long m : {1L, 4L, 33L}) {
        CHECK((midpoint_exponential(a3, zero3, 0.0, 0.5, m).matrix - semigroup(a3, 0.5).matrix())
                  .cwiseAbs()
                  .maxCoeff() <= 1e-12);
    }
}

TEST_CASE("refine_to_tol") {
    const auto a = scalar_a();
    SUBCASE("zero family converges immediately") {
        const auto u = refine_to_tol(a, scalar(kZero), 0.0, 1.0);
        CHECK(u.matrix(0, 0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
        CHECK(u.steps == 32);
        CHECK(u.method == Method::reference);
    }
    SUBCASE("s == t") {
        CHECK((refine_to_tol(a, scalar(kLinear), 0.3, 0.3).matrix - Matrix::Identity(1, 1)).norm() == 0.0);
    }
    SUBCASE("tolerance floor") {
        try {
            (void)refine_to_tol(a, scalar(kLinear), 0.0, 1.0, 1e-13);
            FAIL("expected DomainError");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::DomainError);
        }
    }
    SUBCASE("cap") {
        // Structure at T/2^21 forces a start above 2^20 steps.
        const auto fine = scalar({ProfileKind::weierstrass, 1.0, 0.5, 20});
        try {
            (void)refine_to_tol(a, fine, 0.0, 1.0);
            FAIL("expected CapExceeded");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::CapExceeded);
        }
    }
}

TEST_CASE("oracles agree on scalar families") {
    const auto a = scalar_a();
    for (const ProfileSpec& spec :
         {kLinear, kZero, ProfileSpec{ProfileKind::power, 1.0, 0.5, 0}, ProfileSpec{ProfileKind::weierstrass, 1.0, 0.5, 6}}) {
        const auto fam = scalar(spec);
        for (auto [s, t] : {std::pair{0.0, 1.0}, std::pair{0.25, 0.75}}) {
            const double tol = 1e-10;
            const double diff = op_norm(refine_to_tol(a, fam, s, t, tol).matrix - analytic_commuting(a, fam, s, t).matrix);
            CHECK(diff <= tol);
        }
    }
}

TEST_CASE("property: cocycle on a matrix family") {
    const Heat1d h = make_heat1d_family(6, Potential::tent(), kLinear, 1.0);
    const double tol = 1e-10;
    for (auto [s, t] : {std::pair{0.0, 1.0}, std::pair{0.2, 0.6}}) {
        const double r = 0.5 * (s + t);
        const Matrix lhs = refine_to_tol(h.a, h.family, r, t, tol).matrix * refine_to_tol(h.a, h.family, s, r, tol).matrix;
        CHECK(op_norm(lhs - refine_to_tol(h.a, h.family, s, t, tol).matrix) <= 3.0 * tol);
    }
}

TEST_CASE("midpoint rule is second order on heat1d") {
    const Heat1d h = make_heat1d_family(8, Potential::sin_squared(), kLinear, 1.0);
    const Matrix ref = refine_to_tol(h.a, h.family, 0.0, 1.0, 1e-10).matrix;
    const double e8 = op_norm(midpoint_exponential(h.a, h.family, 0.0, 1.0, 8).matrix - ref);
    const double e16 = op_norm(midpoint_exponential(h.a, h.family, 0.0, 1.0, 16).matrix - ref);
    const double ratio = e8 / e16;
    CHECK(ratio >= 3.0);
    CHECK(ratio <= 5.0);
}
