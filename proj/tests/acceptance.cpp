// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>

#include "dwhj/commands.hpp"
#include "dwhj/errors.hpp"
#include "dwhj/splitting.hpp"

using namespace dwhj;

namespace {

constexpr double kPi = std::numbers::pi;

// Pinned tolerances.
constexpr double kDdwTol = 1e-12;
constexpr double kEmbeddingTol = 1e-13;
constexpr double kHjTol = 1e-12;          // times lattice volume
constexpr double kMismatchRelTol = 1e-10;
constexpr double kGaussTol = 1e-13;
constexpr double kA0DecouplingTol = 1e-12;  // times lattice volume
constexpr double kGaussOrderLo = 1.8, kGaussOrderHi = 2.2;
constexpr double kEvolveOrderLo = 1.8;
constexpr double kEvolveSeconds = 60.0;
constexpr double kHamiltonianTol = 1e-12;

struct Random {
    std::mt19937_64 gen;
    explicit Random(std::uint64_t seed) : gen(seed) {}
    double operator()(double lo, double hi) { return lo + (hi - lo) * uniform01(gen()); }
    Vec4 A() { return {(*this)(-1, 1), (*this)(-1, 1), (*this)(-1, 1), (*this)(-1, 1)}; }
    Point x(double L) { return {(*this)(-1, 1), (*this)(0, L), (*this)(0, L), (*this)(0, L)}; }
};

std::vector<SpacetimeSolution> families(double L) {
    return {constant_electric(4, 0.5), constant_electric(4, 1.0), constant_electric(4, 2.0),
            plane_wave(4, 0.1, 1, L), plane_wave(4, 0.1, 2, L)};
}

Scenario constant_e_scenario() {
    Scenario sc;
    sc.D = 4;
    sc.N = 16;
    sc.h = 0.1;
    sc.ansatz = AnsatzKind::constant_e;
    sc.E = 1.0;
    return sc;
}

FieldConfiguration bumped(const FieldConfiguration& base, double eps) {
    const Lattice& lat = base.lattice;
    const double kappa = 2 * kPi / lat.length();
    FieldConfiguration p = base;
    for (std::size_t s = 0; s < lat.sites(); ++s) p.A[s][2] += eps * std::sin(kappa * lat.point(s, base.t)[1]);
    return p;
}

double magnetic_energy(const FieldConfiguration& c) {
    double acc = 0.0;
    for (const Rank2& F : spatial_F(c))
        for (int i = 1; i < c.lattice.dim(); ++i)
            for (int j = i + 1; j < c.lattice.dim(); ++j) acc += 2.0 * F(i, j) * F(i, j);
    return 0.25 * c.lattice.cell_volume() * acc;
}

// 1: DDW equation and constraints on the reference families.
std::string criterion1() {
    Random r(101);
    double worst = 0.0, constraint = 0.0;
    for (const auto& sol : families(1.6)) {
        const EikonalAnsatz ans = build_linear_solution(sol);
        for (int n = 0; n < 100; ++n) {
            const Vec4 A = r.A();
            const Point x = r.x(1.6);
            worst = std::max(worst, std::abs(ddw_residual(ans, A, x)));
            constraint = std::max(constraint, constraint_residual(ans, A, x).max_abs());
        }
    }
    if (worst > kDdwTol || constraint != 0.0)
        throw std::runtime_error("max ddw " + std::to_string(worst) + ", constraint " + std::to_string(constraint));
    char buf[96];
    std::snprintf(buf, sizeof buf, "max ddw %.2e, constraints 0", worst);
    return buf;
}

// 2: F^{mu nu} embedding reproduces the source field.
std::string criterion2() {
    Random r(202);
    double worst = 0.0;
    for (const auto& sol : families(1.6)) {
        const EikonalAnsatz ans = build_linear_solution(sol);
        for (int n = 0; n < 100; ++n) {
            const Point x = r.x(1.6);
            const Rank2 expected = raise_lower(field_strength_analytic(sol, x), {0, 1});
            worst = std::max(worst, (embed_field_strength(ans, r.A(), x) - expected).max_abs());
        }
    }
    if (worst > kEmbeddingTol) throw std::runtime_error("max error " + std::to_string(worst));
    char buf[64];
    std::snprintf(buf, sizeof buf, "max error %.2e", worst);
    return buf;
}

// 3: full audit of the constant-E slice.
std::string criterion3() {
    const CommandResult res = cmd_audit(constant_e_scenario());
    int rows = 0;
    for (const auto& s : res.json["steps"]) {
        ++rows;
        if (s["status"] != "PASS") throw std::runtime_error(s["step"].get<std::string>() + " " + s["status"].get<std::string>());
    }
    for (const auto& c : res.json["refinement"])
        if (c["status"] != "PASS") throw std::runtime_error("refinement " + c["check"].get<std::string>());
    if (res.json["result"] != "PASS" || rows == 0) throw std::runtime_error("audit result FAIL");
    return std::to_string(rows) + " rows, refinement PASS";
}

// 4: canonical HJ residual vanishes on the embedded slice and equals the magnetic mismatch off it.
std::string criterion4() {
    const Lattice lat(4, 8, 0.2);
    const double t = 0.3;
    const SplitFunctional Sf{build_linear_solution(constant_electric(4, 1.0)), lat, t};
    const FieldConfiguration embedded = sample(constant_electric(4, 1.0), lat, t);
    const double R0 = std::abs(canonical_hj_residual(Sf, embedded, true).residual);
    if (R0 > kHjTol * lat.volume()) throw std::runtime_error("embedded residual " + std::to_string(R0));
    Random r(404);
    double worst = 0.0;
    for (int n = 0; n < 10; ++n) {
        const FieldConfiguration p = bumped(embedded, r(0.01, 0.5));
        const double R = canonical_hj_residual(Sf, p, true).residual;
        const double M = magnetic_energy(p);
        worst = std::max(worst, std::abs(R - M) / M);
    }
    if (worst > kMismatchRelTol) throw std::runtime_error("mismatch rel error " + std::to_string(worst));
    char buf[96];
    std::snprintf(buf, sizeof buf, "embedded %.2e, mismatch rel error %.2e", R0, worst);
    return buf;
}

// 5: Gauss law exact for constant E, second order for a plane wave, A_0 decouples.
std::string criterion5() {
    const Scenario ce = constant_e_scenario();
    const EikonalAnsatz ans = make_ansatz(ce);
    const FieldConfiguration cfg = make_configuration(ce, ans);
    const double g = gauss_residual({ans, cfg.lattice, cfg.t}, cfg).max_abs;
    if (g > kGaussTol) throw std::runtime_error("constant-E gauss " + std::to_string(g));

    Scenario pw = ce;
    pw.ansatz = AnsatzKind::plane_wave;
    pw.amplitude = 0.1;
    pw.m1 = 1;
    pw.m2 = 2;
    pw.check = "gauss";
    const Json conv = cmd_convergence(pw).json["results"][0];
    for (const auto& o : conv["orders"])
        if (o.get<double>() < kGaussOrderLo || o.get<double>() > kGaussOrderHi)
            throw std::runtime_error("plane-wave gauss order " + std::to_string(o.get<double>()));

    const Lattice& lat = cfg.lattice;
    FieldConfiguration shifted = cfg;
    const double kappa = 2 * kPi / lat.length();
    for (std::size_t s = 0; s < lat.sites(); ++s) shifted.A[s][0] += 0.5 + std::cos(kappa * lat.point(s, cfg.t)[2]);
    const SplitFunctional Sf{ans, lat, cfg.t};
    const CanonicalHJResidual with = canonical_hj_residual(Sf, shifted, true);
    const CanonicalHJResidual base = canonical_hj_residual(Sf, cfg, true);
    const double d = std::abs(with.residual - base.residual);
    if (d > kA0DecouplingTol * lat.volume()) throw std::runtime_error("A_0 decoupling " + std::to_string(d));

    char buf[128];
    std::snprintf(buf, sizeof buf, "gauss %.2e, orders %.3f %.3f, A_0 shift %.2e", g, conv["orders"][0].get<double>(),
                  conv["orders"][1].get<double>(), d);
    return buf;
}

// 6: characteristics evolution converges to FDTD at second order.
std::string criterion6() {
    Scenario sc;
    sc.D = 4;
    sc.N = 8;
    sc.h = 0.125;
    sc.t = 0.0;
    sc.ansatz = AnsatzKind::plane_wave;
    sc.amplitude = 0.1;
    sc.m1 = 1;
    sc.dt = 0.2 * sc.h;
    sc.steps = 50;
    sc.check = "evolve";
    const auto start = std::chrono::steady_clock::now();
    const Json results = cmd_convergence(sc).json["results"];
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string out;
    for (const auto& c : results) {
        for (const auto& o : c["orders"])
            if (o.get<double>() < kEvolveOrderLo)
                throw std::runtime_error(c["check"].get<std::string>() + " order " + std::to_string(o.get<double>()));
        char buf[96];
        std::snprintf(buf, sizeof buf, "%s %.3f %.3f, ", c["check"].get<std::string>().c_str(),
                      c["orders"][0].get<double>(), c["orders"][1].get<double>());
        out += buf;
    }
    if (results.size() != 2) throw std::runtime_error("expected two convergence results");
    if (seconds > kEvolveSeconds) throw std::runtime_error("took " + std::to_string(seconds) + " s");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f s", seconds);
    return out + buf;
}

// 7: the two forms of the canonical Hamiltonian agree.
std::string criterion7() {
    Random r(707);
    double worst = 0.0;
    for (int n = 0; n < 20; ++n) {
        const int D = 2 + n % 3;
        const Lattice lat(D, 6, 0.15);
        MaxwellState s(lat, 0.0);
        std::vector<double> A0(lat.sites());
        for (std::size_t i = 0; i < lat.sites(); ++i) {
            A0[i] = r(-1, 1);
            for (int j = 1; j < D; ++j) {
                s.A[i][j] = r(-1, 1);
                s.E[i][j] = r(-1, 1);
            }
        }
        const CanonicalHamiltonian H = canonical_hamiltonian(s, A0);
        worst = std::max(worst, std::abs(H.direct() - H.by_parts()));
    }
    if (worst > kHamiltonianTol) throw std::runtime_error("max difference " + std::to_string(worst));
    char buf[64];
    std::snprintf(buf, sizeof buf, "max difference %.2e", worst);
    return buf;
}

std::string run_cli(const std::string& args) {
    const std::string cmd = std::string(DWHJ_CLI) + " " + args;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) throw std::runtime_error("cannot run " + cmd);
    std::string out;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
    pclose(p);
    return out;
}

// 8: same seed, byte-identical output.
std::string criterion8() {
    Scenario sc = constant_e_scenario();
    sc.ansatz = AnsatzKind::plane_wave;
    sc.N = 8;
    sc.h = 0.2;
    sc.seed = 77;
    if (cmd_verify_ddw(sc).json.dump(2) != cmd_verify_ddw(sc).json.dump(2))
        throw std::runtime_error("verify-ddw differs between runs");
    if (cmd_audit(sc).json.dump(2) != cmd_audit(sc).json.dump(2))
        throw std::runtime_error("audit differs between runs");
    const std::string args = "verify-ddw --ansatz plane-wave --a 0.1 --m 1 --N 8 --h 0.2 --seed 77";
    const std::string a = run_cli(args), b = run_cli(args);
    if (a.empty() || a != b) throw std::runtime_error("CLI output differs between runs");
    if (a != cmd_verify_ddw(sc).json.dump(2) + "\n") throw std::runtime_error("CLI and library output differ");
    return "library and CLI output identical";
}

}  // namespace

int main() {
    const std::vector<std::function<std::string()>> criteria = {criterion1, criterion2, criterion3, criterion4,
                                                                criterion5, criterion6, criterion7, criterion8};
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        std::string detail;
        bool ok = true;
        try {
            detail = criteria[i]();
        } catch (const std::exception& e) {
            ok = false;
            detail = e.what();
        }
        if (!ok) ++failed;
        std::printf("criterion %zu: %s (%s)\n", i + 1, ok ? "PASS" : "FAIL", detail.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
