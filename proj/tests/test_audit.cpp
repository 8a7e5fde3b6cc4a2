#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dwhj/audit.hpp"
#include "dwhj/convergence.hpp"

using namespace dwhj;
using namespace dwhj::audit;

namespace {

constexpr double kPi = std::numbers::pi;

double detail(const Record& r, const std::string& name) {
    for (const auto& [k, v] : r.details)
        if (k == name) return v;
    FAIL("missing detail " << name);
    return 0.0;
}

FieldConfiguration random_config(const Lattice& lat, double t, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(-1, 1);
    FieldConfiguration c(lat, t);
    for (auto& a : c.A)
        for (int mu = 0; mu < lat.dim(); ++mu) a[mu] = u(gen);
    return c;
}

void add_magnetic_bump(FieldConfiguration& c, double eps) {
    const double k = 2 * kPi / c.lattice.length();
    for (std::size_t s = 0; s < c.lattice.sites(); ++s) c.A[s][2] += eps * std::sin(k * c.lattice.point(s, c.t)[1]);
}

EikonalAnsatz symmetric_f() {
    ExprMatrix f;
    f[0][1] = f[1][0] = ScalarExpr::constant(1.0);
    return EikonalAnsatz(4, {}, f);
}

}  // namespace

TEST_CASE("constant-E embedded slice passes every step") {
    const Lattice lat(4, 16, 0.1);
    const EikonalAnsatz ans = build_linear_solution(constant_electric(4, 1.0));
    const Report rep = run(ans, sample(constant_electric(4, 1.0), lat, 0.3));
    CHECK(rep.all_pass());
    CHECK(rep.records.size() == 10);
    CHECK(rep.flags.ddw_ok);
    CHECK(rep.flags.constraints_ok);
    CHECK(rep.flags.embedding_ok);
    CHECK(rep.flags.gauss_ok);
    for (const auto& r : rep.records) {
        INFO(r.step_id);
        CHECK(r.abs_err <= 1e-12 * lat.volume());
    }
}

TEST_CASE("zero ansatz on a zero slice") {
    const Lattice lat(4, 6, 0.2);
    const Report rep = run(zero_ansatz(4), FieldConfiguration(lat, 0.0));
    CHECK(rep.all_pass());
    for (const auto& r : rep.records) CHECK(r.abs_err == 0.0);
}

TEST_CASE("time derivative step") {
    const Lattice lat(4, 8, 0.2);
    const double E = 1.5;
    const EikonalAnsatz ans = build_linear_solution(constant_electric(4, E));
    const FieldConfiguration any = random_config(lat, 0.2, 1);
    const Record ok = check_time_derivative(ans, any, evaluate_flags(ans, any));
    CHECK(ok.status == Status::pass);
    CHECK(ok.abs_err <= 1e-12 * lat.volume());

    const EikonalAnsatz broken = ans.with_scaled_g0(1.1);
    const Flags f = evaluate_flags(broken, any);
    CHECK_FALSE(f.ddw_ok);
    const Record r = check_time_derivative(broken, any, f);
    CHECK(r.abs_err == doctest::Approx(0.1 * 0.5 * E * E * lat.volume()).epsilon(1e-12));
    CHECK(r.status == Status::fail);
    CHECK_FALSE(r.flags.ddw_ok);
}

TEST_CASE("total divergence step") {
    const Lattice lat(4, 8, 0.2);
    const EikonalAnsatz pw = build_linear_solution(plane_wave(4, 0.1, 1, lat.length(), 1));
    const FieldConfiguration any = random_config(lat, 0.1, 2);
    const auto recs = check_total_divergence(pw, any, evaluate_flags(pw, any));
    REQUIRE(recs.size() == 2);
    CHECK(recs[0].step_id == "total_divergence.telescoping");
    CHECK(recs[0].status == Status::pass);

    ExprMatrix f;
    f[1][2] = ScalarExpr::constant(0.4);
    f[2][1] = ScalarExpr::constant(-0.4);
    const EikonalAnsatz cf(4, {}, f);
    FieldConfiguration flat(lat, 0.0);
    for (auto& a : flat.A) a = {0.2, 0.1, -0.3, 0.7};
    for (const auto& r : check_total_divergence(cf, flat, evaluate_flags(cf, flat))) {
        CHECK(r.lhs == 0.0);
        CHECK(r.rhs == 0.0);
    }
}

TEST_CASE("constraint split step") {
    const Lattice lat(4, 6, 0.2);
    const FieldConfiguration any = random_config(lat, 0.0, 3);
    const EikonalAnsatz ce = build_linear_solution(constant_electric(4, 1.0));
    CHECK(check_constraint_split(ce, any, evaluate_flags(ce, any)).status == Status::pass);
    CHECK(check_constraint_split(zero_ansatz(4), any, evaluate_flags(zero_ansatz(4), any)).abs_err == 0.0);

    const EikonalAnsatz bad = symmetric_f();
    const Flags f = evaluate_flags(bad, any);
    CHECK_FALSE(f.constraints_ok);
    const Record r = check_constraint_split(bad, any, f);
    CHECK(r.status == Status::skip);
    CHECK_FALSE(r.flags.constraints_ok);
}

TEST_CASE("parts and embedding step measures 1/2 int Fbar (Fbar - F)") {
    const Lattice lat(4, 8, 0.2);
    const double t = 0.25;
    const SpacetimeSolution wave = plane_wave(4, 0.1, 1, lat.length(), 1);
    const EikonalAnsatz pw = build_linear_solution(wave);

    const EikonalAnsatz ce = build_linear_solution(constant_electric(4, 1.0));
    FieldConfiguration flat(lat, t);
    CHECK(check_parts_and_embedding(ce, flat, evaluate_flags(ce, flat)).abs_err == 0.0);

    for (double eps : {0.0, 0.05, 0.3}) {
        FieldConfiguration c = sample(wave, lat, t);
        add_magnetic_bump(c, eps);
        const auto Fc = spatial_F(c);
        double acc = 0.0;
        for (std::size_t s = 0; s < lat.sites(); ++s) {
            const Rank2 Fbar = field_strength_analytic(wave, lat.point(s, t));
            for (int i = 1; i < 4; ++i)
                for (int j = 1; j < 4; ++j) acc += 0.5 * Fbar(i, j) * (Fbar(i, j) - Fc[s](i, j));
        }
        const Record r = check_parts_and_embedding(pw, c, evaluate_flags(pw, c));
        CHECK(detail(r, "embedding_mismatch") == doctest::Approx(std::abs(acc * lat.cell_volume())).epsilon(1e-10));
        CHECK(detail(r, "summation_by_parts_mismatch") <= 1e-13 * lat.volume());
    }
}

TEST_CASE("time and space blocks, pointwise") {
    const double E = 1.2;
    const EikonalAnsatz ce = build_linear_solution(constant_electric(4, E));
    const Record tb = check_time_block(ce, {0, 0.3, 0, 0}, {0.1, 0.2, 0.3, 0.4});
    CHECK(tb.lhs == doctest::Approx(-0.25 * E * E));
    CHECK(tb.status == Status::pass);
    CHECK(check_time_block(zero_ansatz(4), {}, {}).abs_err == 0.0);
    CHECK(check_time_block(symmetric_f(), {}, {}).status == Status::skip);

    const double b = 0.6;
    const SpacetimeSolution mag = constant_magnetic(4, b);
    const EikonalAnsatz ma = build_linear_solution(mag);
    const Point x{0.0, 0.5, 0.1, 0.2};
    const Record sb = check_space_block(ma, {}, x, field_strength_analytic(mag, x));
    CHECK(sb.rhs == doctest::Approx(0.25 * 2 * b * b));
    CHECK(sb.status == Status::pass);
    const Record se = check_space_block(ce, {}, x, Rank2(4));
    CHECK(se.rhs == doctest::Approx(-0.25 * E * E));
    CHECK(se.status == Status::pass);
}

TEST_CASE("canonical assembly") {
    const Lattice lat(4, 8, 0.2);
    const double t = 0.3;
    const EikonalAnsatz ce = build_linear_solution(constant_electric(4, 1.0));
    FieldConfiguration embedded = sample(constant_electric(4, 1.0), lat, t);
    for (const auto& r : check_canonical_assembly(ce, embedded, evaluate_flags(ce, embedded))) {
        INFO(r.step_id);
        CHECK(r.status == Status::pass);
        CHECK(r.abs_err <= 1e-12 * lat.volume());
    }

    std::mt19937_64 gen(9);
    std::uniform_real_distribution<double> amp(0.01, 0.5);
    for (int n = 0; n < 10; ++n) {
        FieldConfiguration p = embedded;
        add_magnetic_bump(p, amp(gen));
        const Flags f = evaluate_flags(ce, p);
        const auto recs = check_canonical_assembly(ce, p, f);
        CHECK(recs[0].lhs - recs[0].rhs == doctest::Approx(detail(recs[0], "field_strength_mismatch")).epsilon(1e-10));
        CHECK(recs[2].status == Status::pass);
    }

    // The embedding flag tolerates O(h^2); a bump with |F_12| ~ 2 is well outside it.
    FieldConfiguration far = embedded;
    add_magnetic_bump(far, 0.5);
    CHECK_FALSE(evaluate_flags(ce, far).embedding_ok);
    CHECK(evaluate_flags(ce, embedded).embedding_ok);
}

TEST_CASE("plane wave lattice steps converge at second order") {
    const ScenarioFactory make = [](const Lattice& lat) {
        const SpacetimeSolution wave = plane_wave(3, 0.1, 1, lat.length(), 2);
        return std::pair{build_linear_solution(wave), sample(wave, lat, 0.3)};
    };
    const auto results = refinement_study(make, Lattice(3, 16, 0.1), 3);
    REQUIRE(results.size() == 5);
    for (const auto& c : results) {
        INFO(c.check);
        CHECK(c.pass);
        CHECK_FALSE(c.below_floor);
    }
    CHECK_THROWS_AS(refinement_study(make, Lattice(3, 16, 0.1), 2), std::invalid_argument);
}

TEST_CASE("convergence assessment") {
    const auto second = assess_convergence("x", {{8, 0.1, 0, 4e-2}, {16, 0.05, 0, 1e-2}, {32, 0.025, 0, 2.5e-3}}, 1e-10);
    CHECK(second.pass);
    REQUIRE(second.orders.size() == 2);
    CHECK(second.orders[0] == doctest::Approx(2.0));

    CHECK_FALSE(assess_convergence("x", {{8, 0.1, 0, 4e-2}, {16, 0.05, 0, 2e-2}, {32, 0.025, 0, 1e-2}}, 1e-10).pass);
    CHECK_FALSE(assess_convergence("x", {{8, 0.1, 0, 4e-2}, {16, 0.05, 0, 5e-3}, {32, 0.025, 0, 6e-4}}, 1e-10).pass);

    const auto flat = assess_convergence("x", {{8, 0.1, 0, 1e-16}, {16, 0.05, 0, 0}, {32, 0.025, 0, 3e-16}}, 1e-10);
    CHECK(flat.pass);
    CHECK(flat.below_floor);

    const double inf = std::numeric_limits<double>::infinity();
    CHECK(assess_convergence("x", {{8, 0.1, 0, 4e-2}, {16, 0.05, 0, 5e-3}, {32, 0.025, 0, 6e-4}}, 1e-10, 1.8, inf).pass);
}
