#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "dwhj/errors.hpp"
#include "dwhj/scenario.hpp"

using namespace dwhj;

namespace {

Scenario parse(const std::string& text) {
    std::istringstream in(text);
    return parse_scenario(in, DWHJ_DATA);
}

}  // namespace

TEST_CASE("defaults") {
    const Scenario sc = parse("");
    CHECK(sc.D == 4);
    CHECK(sc.N == 16);
    CHECK(sc.ansatz == AnsatzKind::zero);
    CHECK(sc.config == ConfigKind::embedded);
    CHECK(sc.time_step() == doctest::Approx(0.02));
}

TEST_CASE("keys, comments and ansatz specs") {
    const Scenario sc = parse(
        "# header\n"
        "D = 3   # trailing comment\n"
        "N=8\n"
        "h = 0.25\n"
        "ansatz = plane-wave a=0.2 m=2 m2=1\n"
        "seed = 18446744073709551615\n"
        "a0_term = false\n"
        "param k = 2.5\n");
    CHECK(sc.D == 3);
    CHECK(sc.N == 8);
    CHECK(sc.h == 0.25);
    CHECK(sc.ansatz == AnsatzKind::plane_wave);
    CHECK(sc.amplitude == 0.2);
    CHECK(sc.m1 == 2);
    CHECK(sc.m2 == 1);
    CHECK(sc.seed == 18446744073709551615ull);
    CHECK_FALSE(sc.a0_term);
    CHECK(sc.params.at("k") == 2.5);
    CHECK(sc.ansatz_label() == "plane-wave a=0.2 m=2 m2=1");
    CHECK(sc.expression_params().at("L") == 2.0);
}

TEST_CASE("inline blocks") {
    const Scenario sc = parse(
        "ansatz = inline\n"
        "config = inline\n"
        "param E = 2\n"
        "[g]\n0 = (* -0.5 E E x0)\n"
        "[f]\n0 1 = (neg E)\n1 0 = E\n"
        "[config]\n1 = (* (neg E) x0)\n");
    const EikonalAnsatz ans = make_ansatz(sc);
    CHECK(ans.f()[0][1] == ScalarExpr::constant(-2.0));
    CHECK(ans.is_admissible());
    const FieldConfiguration c = make_configuration(sc, ans);
    CHECK(c.A[5][1] == doctest::Approx(-2.0 * sc.t));
    CHECK(ddw_residual(ans, {0, 0.3, 0, 0}, {0.4, 0.1, 0.2, 0.3}) == doctest::Approx(0.0));
}

TEST_CASE("Q block is symmetrised in its last two labels") {
    const Scenario sc = parse("ansatz = inline\n[Q]\n0 1 2 = 0.5\n");
    const EikonalAnsatz ans = make_ansatz(sc);
    REQUIRE(ans.Q());
    CHECK((*ans.Q())[0][2][1] == ScalarExpr::constant(0.5));
}

TEST_CASE("builtin configurations") {
    Scenario sc = parse("ansatz = constant-e E=1.5\nN = 4\nh = 0.25\nt = 2\n");
    const EikonalAnsatz ans = make_ansatz(sc);
    FieldConfiguration c = make_configuration(sc, ans);
    for (const auto& A : c.A) CHECK(A[1] == -3.0);

    sc.a0 = "(cos (* (/ (* 2 pi) L) x2))";
    sc.perturb = 0.1;
    c = make_configuration(sc, ans);
    CHECK(c.A[0][0] == doctest::Approx(1.0));
    CHECK(c.periodic);
    CHECK(c.A[sc.N * sc.N][2] == doctest::Approx(0.1));  // x1 = L / 4

    sc.a0 = "x1";
    CHECK_FALSE(make_configuration(sc, ans).periodic);

    sc = parse("config = csv:flat_d3.csv\nD = 3\nN = 4\nh = 0.25\n");
    c = make_configuration(sc, make_ansatz(sc));
    CHECK(c.A[3][2] == -0.5);
    CHECK(sc.config_label() == "csv:flat_d3.csv");
}

TEST_CASE("refinement") {
    const Scenario sc = parse("N = 8\nh = 0.2\nsteps = 10\n");
    const Scenario r = sc.refined(2);
    CHECK(r.N == 32);
    CHECK(r.h == 0.05);
    CHECK(r.steps == 40);
    CHECK(r.time_step() == doctest::Approx(0.01));
    CHECK(r.expression_params().at("L") == doctest::Approx(1.6));
}

TEST_CASE("errors carry line numbers") {
    auto message = [](const std::string& text) {
        try {
            parse(text);
        } catch (const ParseError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(message("N = 8\nbogus = 1\n").find("line 2") != std::string::npos);
    CHECK(message("h = abc\n").find("line 1") != std::string::npos);
    CHECK(message("h = inf\n").find("finite") != std::string::npos);
    CHECK(message("[f]\n0 = 1\n").find("two indices") != std::string::npos);
    CHECK(message("[z]\n").find("unknown section") != std::string::npos);
    CHECK(message("N = 3\n").find("N must be") != std::string::npos);
    CHECK(message("ansatz = helix\n").find("unknown ansatz") != std::string::npos);
    CHECK(message("N = 8\nD = 5\n").find("line 2: D must be") != std::string::npos);
    CHECK_THROWS_AS(make_configuration(parse("ansatz = inline\n"), EikonalAnsatz(4)), ParseError);
    CHECK_THROWS_AS(load_scenario("/nonexistent/file.scn"), ParseError);
}
