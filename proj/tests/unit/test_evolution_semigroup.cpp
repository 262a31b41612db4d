#include "trotter/error.hpp"
#include "trotter/evolution_semigroup.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace trotter;

namespace {

const ProfileSpec kLinear{ProfileKind::linear, 1.0, 1.0, 0};
const ProfileSpec kZero{ProfileKind::linear, 0.0, 1.0, 0};

SpectralOperator scalar_a() { return SpectralOperator::from_diagonal(Vector::Ones(1), Role::a_role); }

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

} // namespace

TEST_CASE("slotted function norm") {
    std::vector<Vector> slots(4, Vector::Ones(2));
    const SlottedFunction f(1.0, slots);
    // sqrt(0.25 * 4 * 2)
    CHECK(f.norm() == doctest::Approx(std::sqrt(2.0)));
    CHECK(SlottedFunction::zero(1.0, 3, 2).norm() == 0.0);
}

TEST_CASE("block_norm") {
    CHECK(block_norm(BlockShiftOperator::identity(1.0, 4, 3)) == doctest::Approx(1.0));
    CHECK(block_norm(BlockShiftOperator::zero(1.0, 4, 3)) == 0.0);
    const BlockShiftOperator g(1.0, 0, {Matrix::Constant(1, 1, 0.3), Matrix::Constant(1, 1, -0.7)});
    CHECK(block_norm(g) == doctest::Approx(0.7));
}

TEST_CASE("build_U0") {
    Vector v(2);
    v << 1, 4;
    const auto a = SpectralOperator::from_diagonal(v, Role::a_role);
    const auto id = build_U0(a, 5, 0, 1.0);
    CHECK(max_abs(id.assemble() - Matrix::Identity(10, 10)) == 0.0);
    CHECK(block_norm(build_U0(a, 5, 5, 1.0)) == 0.0);
    const auto u1 = build_U0(scalar_a(), 4, 1, 1.0);
    CHECK(u1.block(0)(0, 0) == 0.0);
    for (int i = 1; i < 4; ++i) {
        CHECK(u1.block(i)(0, 0) == doctest::Approx(std::exp(-0.25)).epsilon(1e-15));
    }
}

TEST_CASE("build_expB") {
    const auto fam = make_scalar_family(kLinear, 1.0);
    CHECK(max_abs(build_expB(fam, 4, 0.0).assemble() - Matrix::Identity(4, 4)) == 0.0);
    CHECK(max_abs(build_expB(make_scalar_family(kZero, 1.0), 4, 0.3).assemble() - Matrix::Identity(4, 4)) == 0.0);
    const auto e = build_expB(fam, 2, 0.5);
    CHECK(e.block(0)(0, 0) == 1.0);
    CHECK(e.block(1)(0, 0) == doctest::Approx(std::exp(-0.25)).epsilon(1e-15));
}

TEST_CASE("build_T") {
    const Heat1d h = make_heat1d_family(3, Potential::tent(), ProfileSpec{ProfileKind::power, 1.0, 0.5, 0}, 1.0);
    CHECK(max_abs(build_T(h.a, h.family, 8, 0).assemble() - Matrix::Identity(24, 24)) <= 1e-15);

    const Heat1d z = make_heat1d_family(3, Potential::zero(), kLinear, 1.0);
    CHECK(max_abs(build_T(z.a, z.family, 8, 2).assemble() - build_U0(z.a, 8, 2, 1.0).assemble()) <= 1e-15);

    SUBCASE("powers unroll into step_G chains") {
        const int slots = 16;
        const int k = 2;
        const int n = 3;
        const double tau = k * (1.0 / slots);
        const auto tn = build_T(h.a, h.family, slots, k).power(n);
        CHECK(tn.shift() == n * k);
        for (int i = n * k; i < slots; ++i) {
            Matrix chain = Matrix::Identity(3, 3);
            for (int j = 1; j <= n; ++j) {
                chain *= step_G(h.a, h.family, tau, (i - j * k) * (1.0 / slots));
            }
            CHECK(max_abs(tn.block(i) - chain) <= 1e-14);
            const Propagator v = trotter_left(h.a, h.family, (i - n * k) / 16.0, i / 16.0, n);
            CHECK(max_abs(tn.block(i) - v.matrix) <= 1e-14);

            const auto tr = build_T_reversed(h.a, h.family, slots, k).power(n);
            const Propagator w = trotter_right(h.a, h.family, (i - n * k) / 16.0, i / 16.0, n);
            CHECK(max_abs(tr.block(i) - w.matrix) <= 1e-14);
        }
    }
}

TEST_CASE("build_U_evo") {
    const Heat1d h = make_heat1d_family(4, Potential::sin_squared(), kLinear, 1.0);
    const double tol = 1e-10;
    CHECK(max_abs(build_U_evo(h.a, h.family, 8, 0, tol).assemble() - Matrix::Identity(32, 32)) <= 1e-15);

    const Heat1d z = make_heat1d_family(4, Potential::zero(), kLinear, 1.0);
    CHECK(max_abs(build_U_evo(z.a, z.family, 8, 3, tol).assemble() - build_U0(z.a, 8, 3, 1.0).assemble()) <= 1e-12);

    SUBCASE("semigroup law") {
        const auto u2 = build_U_evo(h.a, h.family, 8, 2, tol);
        const auto u3 = build_U_evo(h.a, h.family, 8, 3, tol);
        const auto u5 = build_U_evo(h.a, h.family, 8, 5, tol);
        CHECK(block_norm(compose(u2, u3) - u5) <= 3.0 * tol);
        CHECK(block_norm(compose(u3, u2) - u5) <= 3.0 * tol);
    }
    SUBCASE("table and unit chain agree with direct blocks") {
        ReferenceTable table(h.a, h.family, 8, tol);
        const UnitChain chain(h.a, h.family, 8, tol);
        const auto direct = build_U_evo(h.a, h.family, 8, 4, tol);
        CHECK(block_norm(table.evolution(4) - direct) <= 1e-15);
        CHECK(block_norm(chain.evolution(4) - direct) <= 4.0 * tol);
        CHECK(op_norm(chain.between(2, 2) - Matrix::Identity(4, 4)) == 0.0);
        ReferenceTable chained(h.a, h.family, 8, tol, ReferenceMode::chained);
        CHECK(block_norm(chained.evolution(4) - chain.evolution(4)) <= 1e-15);
        CHECK(op_norm(chained.get(1, 7) - table.get(1, 7)) <= 6.0 * tol);
    }
}

TEST_CASE("property: block_norm equals the assembled operator norm") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    for (auto [slots, dim, shift] : {std::tuple{8, 4, 0}, std::tuple{16, 8, 3}, std::tuple{64, 8, 5}, std::tuple{32, 16, 31}}) {
        std::vector<Matrix> blocks;
        for (int i = 0; i < slots; ++i) {
            Matrix m(dim, dim);
            for (Index r = 0; r < dim; ++r) {
                for (Index c = 0; c < dim; ++c) {
                    m(r, c) = i < shift ? 0.0 : g(rng);
                }
            }
            blocks.push_back(m);
        }
        const BlockShiftOperator op(1.0, shift, blocks);
        const Matrix dense = op.assemble();
        const double svd = Eigen::JacobiSVD<Matrix>(dense).singularValues()(0);
        CHECK(std::abs(block_norm(op) - svd) <= 1e-10 * std::max(1.0, svd));

        // apply agrees with the dense matrix
        std::vector<Vector> fs;
        for (int i = 0; i < slots; ++i) {
            fs.push_back(Vector::NullaryExpr(dim, [&](Index) { return g(rng); }));
        }
        const SlottedFunction f(1.0, fs);
        Vector flat(slots * dim);
        for (int i = 0; i < slots; ++i) {
            flat.segment(i * dim, dim) = fs[i];
        }
        const Vector dense_out = dense * flat;
        const SlottedFunction out = op.apply(f);
        for (int i = 0; i < slots; ++i) {
            CHECK((out.slot(i) - dense_out.segment(i * dim, dim)).cwiseAbs().maxCoeff() <= 1e-12);
        }
    }
}

TEST_CASE("property: shifts compose and the operators are nilpotent") {
    const Heat1d h = make_heat1d_family(2, Potential::tent(), kLinear, 1.0);
    const auto t3 = build_T(h.a, h.family, 8, 3);
    CHECK(t3.power(2).shift() == 6);
    CHECK(block_norm(t3.power(3)) == 0.0);
    CHECK(block_norm(build_U_evo(h.a, h.family, 8, 8, 1e-10)) == 0.0);
    try {
        (void)(build_T(h.a, h.family, 8, 2) - build_T(h.a, h.family, 8, 3));
        FAIL("expected DimensionMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::DimensionMismatch);
    }
}

TEST_CASE("property: U and T are contractions on the slotted space") {
    const Heat1d h = make_heat1d_family(6, Potential::sin_squared(), ProfileSpec{ProfileKind::weierstrass, 1.0, 0.5, 5}, 1.0);
    for (int k : {1, 3, 7}) {
        CHECK(block_norm(build_T(h.a, h.family, 16, k)) <= 1.0 + 1e-12);
        CHECK(block_norm(build_T_reversed(h.a, h.family, 16, k)) <= 1.0 + 1e-12);
        CHECK(block_norm(build_U_evo(h.a, h.family, 16, k, 1e-10)) <= 1.0 + 1e-12);
    }
}

TEST_CASE("correspondence") {
    SUBCASE("zero family") {
        const auto fam = make_scalar_family(kZero, 1.0);
        const auto r = correspondence_check(scalar_a(), fam, 8, 2, 1e-10);
        CHECK(r.semigroup_error <= 1e-15);
        CHECK(r.propagator_error <= 1e-15);
        CHECK(r.gap <= 1e-15);
    }
    SUBCASE("constant commuting family, n = 1") {
        const auto fam = make_synthetic_matrix_family(SymmetricMatrix(Matrix::Constant(1, 1, 0.7)),
                                                      SymmetricMatrix::zero(1), kZero, 1.0);
        const auto r = correspondence_check(scalar_a(), fam, 8, 1, 1e-10);
        CHECK(r.semigroup_error <= 1e-10);
        CHECK(r.propagator_error <= 1e-10);
    }
    SUBCASE("scalar linear, N = 8, n = 2") {
        const auto fam = make_scalar_family(kLinear, 1.0);
        for (Variant v : {Variant::left, Variant::right}) {
            const auto r = correspondence_check(scalar_a(), fam, 8, 2, 1e-10, v);
            CHECK(r.gap <= 1e-10);
            CHECK(r.taus_tested == 4);
        }
        // The widest tested spans are k = 6 slots ending at slots 6 and 7.
        const auto r = correspondence_check(scalar_a(), fam, 8, 2, 1e-10);
        double pair = 0.0;
        for (auto [s, t] : {std::pair{0.0, 0.75}, std::pair{0.125, 0.875}}) {
            pair = std::max(pair, std::abs(trotter_left(scalar_a(), fam, s, t, 2).matrix(0, 0) -
                                           analytic_commuting(scalar_a(), fam, s, t).matrix(0, 0)));
        }
        CHECK(r.propagator_error >= pair - 1e-10);
    }
    SUBCASE("indivisible grid") {
        try {
            (void)correspondence_check(scalar_a(), make_scalar_family(kLinear, 1.0), 8, 3, 1e-10);
            FAIL("expected IndivisibleGrid");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::IndivisibleGrid);
        }
    }
}

TEST_CASE("one-step lemma") {
    SUBCASE("zero family") {
        const auto r = check_onestep_36(scalar_a(), make_scalar_family(kZero, 1.0), 0.5, {1e-1, 1e-2});
        CHECK(r.max_ratio == 0.0);
        CHECK(r.passed);
    }
    SUBCASE("scalar linear, gamma = 0") {
        const auto fam = make_scalar_family(kLinear, 1.0);
        const double lhs_t0 = std::exp(-0.1) * (1.0 - std::exp(-0.005));
        CHECK(lhs_t0 == doctest::Approx(0.004514).epsilon(1e-3));
        const auto r = check_onestep_36(scalar_a(), fam, 0.0, {1e-1, 1e-2, 1e-3, 1e-4});
        CHECK(r.c_gamma == doctest::Approx(1.0));
        CHECK(r.passed);
        // the t = 0 row alone gives lhs_t0 / 0.2
        CHECK(r.rows.front().ratio_left >= lhs_t0 / 0.2 - 1e-9);
        for (const auto& row : r.rows) {
            CHECK(row.ratio_left <= 1.0);
        }
    }
}

TEST_CASE("lemma overloads agree with the single-shot forms") {
    const Heat1d h = make_heat1d_family(4, Potential::tent(), ProfileSpec{ProfileKind::power, 1.0, 0.5, 0}, 1.0);
    const std::vector<double> taus{1e-1, 1e-2};
    const auto many = check_onestep_36(h.a, h.family, std::vector<double>{0.2, 0.7}, taus);
    REQUIRE(many.size() == 2);
    const auto one = check_onestep_36(h.a, h.family, 0.7, taus);
    CHECK(many[1].max_ratio == one.max_ratio);
    CHECK(many[1].c_gamma == one.c_gamma);

    const UnitChain chain(h.a, h.family, 32, 1e-10);
    const auto s1 = check_sandwich_37(h.a, h.family, 0.5, 0.5, chain, {0.25, 0.125});
    const auto s2 = check_sandwich_37(h.a, h.family, 0.5, 0.5, 32, {0.25, 0.125});
    CHECK(s1.max_ratio == s2.max_ratio);
}

TEST_CASE("sandwich lemma on heat1d") {
    const Heat1d h = make_heat1d_family(6, Potential::sin_squared(), kLinear, 1.0);
    const std::vector<double> taus{0.25, 0.125, 0.0625};
    SUBCASE("gamma = beta") {
        const auto r = check_sandwich_37(h.a, h.family, 0.5, 0.5, 64, taus);
        CHECK(r.passed);
        CHECK(r.max_ratio <= 1.0 + kLemmaSlack);
        CHECK(r.z > 0.0);
    }
    SUBCASE("beta < gamma") {
        const auto r = check_sandwich_37(h.a, h.family, 0.75, 0.5, 64, taus);
        CHECK(r.passed);
        CHECK(r.kappa == doctest::Approx(0.5));
    }
}

TEST_CASE("smoothing and stability") {
    SUBCASE("zero family: S(m) <= 1") {
        Vector v(3);
        v << 1, 4, 9;
        const auto a = SpectralOperator::from_diagonal(v, Role::a_role);
        const auto r = check_stability_53(a, make_scalar_family(kZero, 1.0, 3), 0.5, 8, 32);
        for (double s : r.s_values) {
            CHECK(s <= 1.0 + 1e-12);
        }
    }
    SUBCASE("heat1d d = 8") {
        const Heat1d h = make_heat1d_family(8, Potential::sin_squared(), kLinear, 1.0);
        const auto sm = check_smoothing_33(h.a, h.family, 0.8, 32, {0.5, 0.25, 0.125});
        CHECK(sm.stable);
        CHECK(std::isfinite(sm.lambda()));
        const auto st = check_stability_53(h.a, h.family, 0.8, 16, 32, sm.lambda());
        CHECK(st.s_values.front() <= 1.0 + 1e-12);
        CHECK(std::isfinite(st.m_gamma));
        CHECK(st.stable);
        CHECK(st.interpolation_ok);
    }
}
