#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dwhj/eikonal.hpp"
#include "dwhj/errors.hpp"

using namespace dwhj;

namespace {

struct Sampler {
    std::mt19937_64 gen;
    explicit Sampler(std::uint64_t seed) : gen(seed) {}
    double operator()(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); }
    Vec4 A() { return {(*this)(-1, 1), (*this)(-1, 1), (*this)(-1, 1), (*this)(-1, 1)}; }
    Point x() { return {(*this)(-2, 2), (*this)(-2, 2), (*this)(-2, 2), (*this)(-2, 2)}; }
};

std::vector<SpacetimeSolution> references() {
    return {zero_solution(4),         constant_electric(4, 0.5), constant_electric(4, 1.0),
            constant_electric(4, 2.0), plane_wave(4, 0.1, 1, 1.6), plane_wave(4, 0.1, 2, 1.6),
            plane_wave(4, 0.1, 1, 1.6, 2), plane_wave(3, 0.2, 1, 1.0), constant_electric(2, 1.0)};
}

}  // namespace

TEST_CASE("eval_S") {
    Sampler u(1);
    for (const double v : zero_ansatz(4).eval_S(u.A(), u.x())) CHECK(v == 0.0);

    const double E = 1.3, a1 = 0.7, t = 0.4;
    const EikonalAnsatz ce = build_linear_solution(constant_electric(4, E));
    const Vec4 S = ce.eval_S({0.0, a1, 0.0, 0.0}, {t, 0.2, 0.3, 0.1});
    CHECK(S[0] == doctest::Approx(-E * a1 - 0.5 * E * E * t).epsilon(1e-15));

    ExprVector g;
    g[0] = ScalarExpr::coord(1);
    g[2] = ScalarExpr::cos({0, 1, 0, 0});
    const EikonalAnsatz pure(4, g, {});
    const Point x{0.1, 0.5, 0.0, 0.0};
    const Vec4 s1 = pure.eval_S({1, 2, 3, 4}, x);
    const Vec4 s2 = pure.eval_S({-4, 0, 1, 9}, x);
    CHECK(s1 == s2);
    CHECK(s1[0] == 0.5);
    CHECK(s1[2] == std::cos(0.5));
}

TEST_CASE("dS_dA") {
    Sampler u(2);
    CHECK(zero_ansatz(4).dS_dA(u.A(), u.x()).max_abs() == 0.0);
    const EikonalAnsatz ans = build_linear_solution(plane_wave(4, 0.1, 1, 1.6));
    const Point x = u.x();
    const Rank2 T1 = ans.dS_dA(u.A(), x);
    CHECK(T1 == ans.dS_dA(u.A(), x));
    for (int mu = 0; mu < 4; ++mu)
        for (int nu = 0; nu < 4; ++nu) CHECK(T1(mu, nu) == ans.f()[mu][nu].eval(x));
}

TEST_CASE("ddw residual of the exact families") {
    Sampler u(3);
    CHECK(ddw_residual(zero_ansatz(4), u.A(), u.x()) == 0.0);

    const double E = 2.0;
    const EikonalAnsatz ce = build_linear_solution(constant_electric(4, E));
    const Vec4 A = u.A();
    const Point x = u.x();
    CHECK(ce.explicit_divergence(A, x) == doctest::Approx(-0.5 * E * E));
    CHECK(0.25 * minkowski_square(ce.dS_dA(A, x)) == doctest::Approx(-0.5 * E * E));

    for (const auto& sol : references()) {
        const EikonalAnsatz ans = build_linear_solution(sol);
        double worst = 0.0;
        for (int n = 0; n < 100; ++n) worst = std::max(worst, std::abs(ddw_residual(ans, u.A(), u.x())));
        CHECK(worst <= 1e-12);
    }
}

TEST_CASE("constraint residual") {
    Sampler u(4);
    for (const auto& sol : references()) {
        const EikonalAnsatz ans = build_linear_solution(sol);
        for (int n = 0; n < 20; ++n) CHECK(constraint_residual(ans, u.A(), u.x()).max_abs() == 0.0);
        CHECK(ans.is_admissible());
    }
    ExprMatrix f;
    for (int mu = 0; mu < 4; ++mu) f[mu][mu] = ScalarExpr::constant(1.0);
    const EikonalAnsatz id(4, {}, f);
    CHECK(constraint_residual(id, u.A(), u.x()) == Rank2::identity(4));
    CHECK_FALSE(id.is_admissible());

    const EikonalAnsatz ce = build_linear_solution(constant_electric(4, 1.0));
    CHECK(ce.dS_dA(u.A(), u.x())(0, 0) == 0.0);
}

TEST_CASE("quadratic coefficients") {
    ExprCube Q;
    Q[0][1][2] = ScalarExpr::constant(1.0);
    CHECK_THROWS_AS(EikonalAnsatz(4, {}, {}, Q), std::invalid_argument);
    Q[0][2][1] = ScalarExpr::constant(1.0);
    const EikonalAnsatz q(4, {}, {}, Q);
    // T^{0 nu} = Q^{0, nu rho} A_rho, so T^{01} = A_2 and T^{02} = A_1.
    const Rank2 T = q.dS_dA({0, 0.3, 0.5, 0}, {});
    CHECK(T(0, 1) == 0.5);
    CHECK(T(0, 2) == 0.3);
    CHECK(q.eval_S({0, 0.3, 0.5, 0}, {})[0] == doctest::Approx(0.15));
    CHECK_FALSE(q.is_admissible());

    // Antisymmetric in (mu, nu) and symmetric in (nu, rho) forces Q = 0, so
    // cancelling one pair breaks another.
    ExprCube P;
    P[0][1][2] = P[0][2][1] = ScalarExpr::constant(1.0);
    P[1][0][2] = P[1][2][0] = ScalarExpr::constant(-1.0);
    CHECK_FALSE(EikonalAnsatz(4, {}, {}, P).is_admissible());
}

TEST_CASE("embedding round trip") {
    Sampler u(5);
    CHECK(embed_field_strength(zero_ansatz(4), u.A(), u.x()).max_abs() == 0.0);
    const Rank2 F = embed_field_strength(build_linear_solution(constant_electric(4, 1.5)), u.A(), u.x());
    CHECK(F(0, 1) == 1.5);

    for (const auto& sol : references()) {
        const EikonalAnsatz ans = build_linear_solution(sol);
        for (int n = 0; n < 50; ++n) {
            const Point x = u.x();
            const Rank2 expected = raise_lower(field_strength_analytic(sol, x), {0, 1});
            const Rank2 got = embed_field_strength(ans, u.A(), x);
            CHECK((got - expected).max_abs() <= 1e-14);
        }
    }
}

TEST_CASE("build_linear_solution") {
    const EikonalAnsatz z = build_linear_solution(zero_solution(4));
    for (int mu = 0; mu < 4; ++mu) {
        CHECK(z.g()[mu].is_zero());
        for (int nu = 0; nu < 4; ++nu) CHECK(z.f()[mu][nu].is_zero());
    }

    const double E = 0.8;
    const EikonalAnsatz ce = build_linear_solution(constant_electric(4, E));
    CHECK(ce.f()[0][1] == ScalarExpr::constant(-E));
    CHECK(ce.f()[1][0] == ScalarExpr::constant(E));
    CHECK(ce.g()[0] == (-0.5 * E * E) * ScalarExpr::coord(0));

    const EikonalAnsatz pw = build_linear_solution(plane_wave(4, 0.1, 1, 1.6, 1));
    for (int mu = 0; mu < 4; ++mu) CHECK(pw.g()[mu].is_zero());

    SpacetimeSolution bad(4);
    bad.A[1] = ScalarExpr::coord(0, 2);
    CHECK_THROWS_AS(build_linear_solution(bad), NotAMaxwellSolution);

    // Standing wave: a Maxwell solution whose invariant oscillates in time
    // through a product of two x0-dependent factors.
    const double k = 2.0;
    SpacetimeSolution standing(4);
    standing.A[2] = ScalarExpr::cos({0, k, 0, 0}) * ScalarExpr::cos({k, 0, 0, 0});
    CHECK_THROWS_AS(build_linear_solution(standing), UnsupportedIntegrand);
}

TEST_CASE("scaled g0 breaks the DDW equation linearly") {
    const EikonalAnsatz ce = build_linear_solution(constant_electric(4, 1.0)).with_scaled_g0(1.1);
    Sampler u(6);
    CHECK(ddw_residual(ce, u.A(), u.x()) == doctest::Approx(-0.05));
}

TEST_CASE("characteristics evolution") {
    const Lattice lat(4, 4, 0.25);
    const auto zero = characteristics_evolve(zero_ansatz(4), FieldConfiguration(lat, 0.0), {}, 0.05, 5);
    CHECK(zero.size() == 6);
    for (const auto& c : zero)
        for (const auto& A : c.A) CHECK(A == Vec4{});

    const double E = 1.5;
    const auto ce = characteristics_evolve(build_linear_solution(constant_electric(4, E)), FieldConfiguration(lat, 0.0),
                                           {}, 0.1, 10);
    for (std::size_t n = 0; n < ce.size(); ++n) {
        CHECK(ce[n].t == doctest::Approx(0.1 * n));
        for (const auto& A : ce[n].A) CHECK(A[1] == doctest::Approx(-E * 0.1 * n).epsilon(1e-14));
    }

    std::vector<double> errs;
    for (int level = 0; level < 3; ++level) {
        const Lattice l(4, 8, 0.2);
        const SpacetimeSolution wave = plane_wave(4, 0.1, 1, l.length(), 1);
        const int steps = 10 << level;
        const double dt = 0.5 / steps;
        const auto traj = characteristics_evolve(build_linear_solution(wave), sample(wave, l, 0.0), {}, dt, steps);
        const FieldConfiguration exact = sample(wave, l, 0.5);
        double e = 0.0;
        for (std::size_t s = 0; s < l.sites(); ++s)
            for (int i = 1; i < 4; ++i) e = std::max(e, std::abs(traj.back().A[s][i] - exact.A[s][i]));
        errs.push_back(e);
    }
    CHECK(std::log2(errs[0] / errs[1]) >= 1.8);
    CHECK(std::log2(errs[1] / errs[2]) >= 1.8);

    ExprMatrix f;
    f[0][1] = ScalarExpr::constant(1.0);
    f[1][0] = ScalarExpr::constant(1.0);
    CHECK_THROWS_AS(characteristics_evolve(EikonalAnsatz(4, {}, f), FieldConfiguration(lat, 0.0), {}, 0.1, 1),
                    InadmissibleAnsatz);
}

TEST_CASE("validation points are fixed") {
    const auto a = validation_points(4, 2.0);
    const auto b = validation_points(4, 2.0);
    CHECK(a.size() == 64);
    CHECK(a == b);
    for (const auto& p : a)
        for (double c : p) CHECK(std::abs(c) <= 2.0);
}
