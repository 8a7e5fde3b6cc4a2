#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>

#include <CLI11.hpp>

#include "dwhj/commands.hpp"
#include "dwhj/errors.hpp"

namespace {

struct Overrides {
    std::string scenario;
    std::optional<std::string> ansatz;
    std::optional<double> E, a, h, t, dt, perturb;
    std::optional<int> m, m2, D, N, steps, levels, samples;
    std::optional<std::string> check, config, gauge, a0;
    std::optional<std::uint64_t> seed;
    bool no_a0_term = false;
};

dwhj::Scenario resolve(const Overrides& o) {
    dwhj::Scenario sc = o.scenario.empty() ? dwhj::Scenario{} : dwhj::load_scenario(o.scenario);
    if (o.ansatz) dwhj::apply_ansatz_spec(sc, *o.ansatz);
    if (o.E) sc.E = *o.E;
    if (o.a) sc.amplitude = *o.a;
    if (o.m) sc.m1 = *o.m;
    if (o.m2) sc.m2 = *o.m2;
    if (o.D) sc.D = *o.D;
    if (o.N) sc.N = *o.N;
    if (o.h) sc.h = *o.h;
    if (o.t) sc.t = *o.t;
    if (o.dt) sc.dt = *o.dt;
    if (o.steps) sc.steps = *o.steps;
    if (o.levels) sc.levels = *o.levels;
    if (o.samples) sc.samples = *o.samples;
    if (o.perturb) sc.perturb = *o.perturb;
    if (o.check) sc.check = *o.check;
    if (o.gauge) sc.gauge = *o.gauge;
    if (o.a0) sc.a0 = *o.a0;
    if (o.seed) sc.seed = *o.seed;
    if (o.no_a0_term) sc.a0_term = false;
    if (o.config) {
        std::istringstream line("config = " + *o.config);
        const dwhj::Scenario parsed = dwhj::parse_scenario(line);
        sc.config = parsed.config;
        sc.csv_path = parsed.csv_path;
    }
    dwhj::check_dimension(sc.D);
    if (sc.N < 4) throw dwhj::ParseError("N must be >= 4");
    if (!(sc.h > 0.0)) throw dwhj::ParseError("h must be positive");
    return sc;
}

void add_scenario_options(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--scenario", o.scenario, "Scenario file");
    cmd->add_option("--seed", o.seed, "Seed for random sampling");
    cmd->add_option("--ansatz", o.ansatz, "zero | constant-e | plane-wave | inline");
    cmd->add_option("--E", o.E, "Field strength for constant-e");
    cmd->add_option("--a", o.a, "Plane-wave amplitude");
    cmd->add_option("--m", o.m, "Plane-wave mode number along x1");
    cmd->add_option("--m2", o.m2, "Plane-wave mode number along x2");
    cmd->add_option("--D", o.D, "Spacetime dimension (2..4)");
    cmd->add_option("--N", o.N, "Lattice points per axis");
    cmd->add_option("--h", o.h, "Lattice spacing");
    cmd->add_option("--t", o.t, "Time slice");
    cmd->add_option("--dt", o.dt, "Time step");
    cmd->add_option("--steps", o.steps, "Evolution steps");
    cmd->add_option("--levels", o.levels, "Refinement levels (>= 3)");
    cmd->add_option("--samples", o.samples, "Random (A, x) samples");
    cmd->add_option("--perturb", o.perturb, "Magnetic perturbation amplitude");
    cmd->add_option("--check", o.check, "Convergence check");
    cmd->add_option("--config", o.config, "embedded | zero | inline | csv:<path>");
    cmd->add_option("--gauge", o.gauge, "A_0 expression for evolve");
    cmd->add_option("--a0", o.a0, "Expression added to the configuration's A_0");
    cmd->add_flag("--no-a0-term", o.no_a0_term, "Drop the A_0 term from the canonical HJ row");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hamilton-Jacobi verification for Maxwell fields"};
    app.require_subcommand(1);

    Overrides o;
    std::string out;
    bool json = false;
    bool table = false;
    std::string trajectory;
    int stride = 1;

    std::vector<CLI::App*> cmds;
    const std::pair<const char*, const char*> verbs[] = {
        {"verify-ddw", "Check the DDW equation and constraints at sampled points"},
        {"audit", "Audit every step of the canonical Hamilton-Jacobi derivation"},
        {"evolve", "Evolve along characteristics and compare with FDTD"},
        {"convergence", "Measure convergence orders under lattice refinement"},
        {"report", "Run all of the above"}};
    for (const auto& [verb, description] : verbs) {
        CLI::App* cmd = app.add_subcommand(verb, description);
        cmd->set_help_flag("--help", "Print this help message and exit");
        add_scenario_options(cmd, o);
        cmd->add_option("--out", out, "Write output to this file");
        auto* j = cmd->add_flag("--json", json, "JSON output (default)");
        auto* t = cmd->add_flag("--table", table, "Table output");
        j->excludes(t);
        cmds.push_back(cmd);
    }
    cmds[2]->add_option("--trajectory", trajectory, "Directory for per-step configuration CSVs");
    cmds[2]->add_option("--stride", stride, "Write every stride-th step")->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    try {
        const dwhj::Scenario sc = resolve(o);
        dwhj::CommandResult res;
        if (cmds[0]->parsed()) res = dwhj::cmd_verify_ddw(sc);
        else if (cmds[1]->parsed()) res = dwhj::cmd_audit(sc);
        else if (cmds[2]->parsed()) res = dwhj::cmd_evolve(sc, {trajectory, stride});
        else if (cmds[3]->parsed()) res = dwhj::cmd_convergence(sc);
        else res = dwhj::cmd_report(sc);

        const std::string text = table ? res.table : res.json.dump(2) + "\n";
        if (out.empty()) {
            std::cout << text;
        } else {
            std::ofstream f(out, std::ios::binary);
            if (!f) throw std::runtime_error("cannot write " + out);
            f << text;
        }
        return res.exit_code;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
