#include "dwhj/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "dwhj/audit.hpp"
#include "dwhj/convergence.hpp"
#include "dwhj/errors.hpp"
#include "dwhj/splitting.hpp"

namespace dwhj {

namespace {

constexpr double kDdwTol = 1e-12;
constexpr double kGaussFloor = 1e-10;
constexpr double kEvolveFloor = 1e-12;
constexpr double kEvolveConstant = 10.0;

const char* verdict(bool ok) { return ok ? "PASS" : "FAIL"; }

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

std::string pad(std::string s, std::size_t width) {
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
}

Json lattice_json(const Lattice& lat) {
    return {{"D", lat.dim()}, {"N", lat.points_per_axis()}, {"h", lat.spacing()}};
}

Json scenario_json(const Scenario& sc) {
    return {{"D", sc.D},           {"N", sc.N},
            {"h", sc.h},           {"t", sc.t},
            {"ansatz", sc.ansatz_label()}, {"config", sc.config_label()},
            {"dt", sc.time_step()}, {"steps", sc.steps},
            {"gauge", sc.gauge},   {"a0_term", sc.a0_term},
            {"levels", sc.levels}, {"check", sc.check},
            {"samples", sc.samples}};
}

Json header(const char* command, const Scenario& sc) {
    return {{"schema", kSchemaVersion}, {"command", command}, {"seed", sc.seed}, {"scenario", scenario_json(sc)}};
}

std::string flag_string(const audit::Flags& f) {
    std::string s;
    s += f.ddw_ok ? 'D' : '-';
    s += f.constraints_ok ? 'C' : '-';
    s += f.embedding_ok ? 'E' : '-';
    s += f.gauss_ok ? 'G' : '-';
    return s;
}

Json flags_json(const audit::Flags& f) {
    return {{"ddw_ok", f.ddw_ok}, {"constraints_ok", f.constraints_ok}, {"embedding_ok", f.embedding_ok},
            {"gauss_ok", f.gauss_ok}};
}

Json audit_record_json(const audit::Record& r, const Lattice& lat, double t) {
    Json details = Json::object();
    for (const auto& [k, v] : r.details) details[k] = v;
    Json j = {{"step", r.step_id},
              {"equation", r.equation},
              {"lhs", r.lhs},
              {"rhs", r.rhs},
              {"abs_err", r.abs_err},
              {"rel_err", r.rel_err},
              {"tolerance", r.tolerance},
              {"floor", r.floor},
              {"class", audit::to_string(r.tolerance_class)},
              {"status", audit::to_string(r.status)},
              {"preconditions", flags_json(r.flags)},
              {"lattice", lattice_json(lat)},
              {"t", t}};
    if (!r.note.empty()) j["note"] = r.note;
    if (!details.empty()) j["details"] = details;
    return j;
}

Json convergence_json(const ConvergenceResult& c) {
    Json levels = Json::array();
    for (const auto& l : c.levels) levels.push_back({{"N", l.N}, {"h", l.h}, {"dt", l.dt}, {"error", l.error}});
    Json j = {{"check", c.check},
              {"floor", c.floor},
              {"min_order", c.min_order},
              {"max_order", std::isfinite(c.max_order) ? Json(c.max_order) : Json(nullptr)},
              {"levels", levels},
              {"orders", c.orders},
              {"below_floor", c.below_floor},
              {"status", verdict(c.pass)}};
    return j;
}

std::string convergence_table(const std::vector<ConvergenceResult>& results) {
    std::ostringstream os;
    for (const auto& c : results) {
        os << c.check << "  (floor " << sci(c.floor) << ", order in [" << c.min_order << ", "
           << (std::isfinite(c.max_order) ? std::to_string(c.max_order).substr(0, 3) : std::string("inf")) << "])\n";
        os << "  " << pad("N", 8) << pad("h", 12) << pad("dt", 12) << pad("error", 12) << "order\n";
        for (std::size_t k = 0; k < c.levels.size(); ++k) {
            const auto& l = c.levels[k];
            os << "  " << pad(std::to_string(l.N), 8) << pad(sci(l.h), 12) << pad(sci(l.dt), 12)
               << pad(sci(l.error), 12);
            if (k > 0 && k - 1 < c.orders.size() && !c.below_floor) {
                char buf[16];
                std::snprintf(buf, sizeof buf, "%.3f", c.orders[k - 1]);
                os << buf;
            }
            os << '\n';
        }
        os << "  " << (c.below_floor ? "below floor at every level: " : "") << verdict(c.pass) << "\n";
    }
    return os.str();
}

std::pair<EikonalAnsatz, FieldConfiguration> build(const Scenario& sc) {
    EikonalAnsatz ans = make_ansatz(sc);
    FieldConfiguration config = make_configuration(sc, ans);
    return {std::move(ans), std::move(config)};
}

Scenario on_lattice(const Scenario& sc, const Lattice& lat) {
    Scenario s = sc;
    s.N = lat.points_per_axis();
    s.h = lat.spacing();
    return s;
}

struct EvolveRun {
    std::vector<double> divergence;  // per step, including step 0
    std::array<double, kMaxDim> maxwell{};
    double energy_initial = 0.0;
    double energy_final = 0.0;
    double e_scale = 0.0;
    std::vector<FieldConfiguration> trajectory;
};

EvolveRun run_evolution(const Scenario& sc) {
    const auto [ans, config0] = build(sc);
    const Lattice& lat = config0.lattice;
    const double dt = sc.time_step();
    const ScalarExpr gauge = parse_expr(sc.gauge, sc.expression_params());
    if (!gauge.is_spatially_periodic(sc.D, lat.length()))
        throw NonPeriodicInput("evolve: gauge expression is not periodic on the lattice");

    EvolveRun out;
    out.trajectory = characteristics_evolve(ans, config0, gauge, dt, sc.steps);

    MaxwellState state(lat, config0.t);
    for (std::size_t s = 0; s < lat.sites(); ++s) {
        const Rank2 F = embed_field_strength(ans, config0.A[s], lat.point(s, config0.t));
        for (int i = 1; i < sc.D; ++i) {
            state.A[s][i] = config0.A[s][i];
            state.E[s][i] = F(i, 0);
            out.e_scale = std::max(out.e_scale, std::abs(F(i, 0)));
        }
    }
    out.energy_initial = fdtd_energy(state);

    // The characteristics run carries A_0 = gauge; its A_i differ from the
    // temporal-gauge reference by d_i of the time integral of the gauge.
    const ScalarExpr G = gauge.time_antiderivative();
    std::array<ScalarExpr, kMaxDim> dG;
    for (int i = 1; i < sc.D; ++i) dG[i] = G.partial(i);

    for (int n = 0; n <= sc.steps; ++n) {
        if (n > 0) state = fdtd_step(state, dt);
        const FieldConfiguration& c = out.trajectory[n];
        double worst = 0.0;
        for (std::size_t s = 0; s < lat.sites(); ++s) {
            const Point x = lat.point(s, c.t);
            const Point x0 = lat.point(s, config0.t);
            for (int i = 1; i < sc.D; ++i) {
                const double shift = gauge.is_zero() ? 0.0 : dG[i].eval(x) - dG[i].eval(x0);
                worst = std::max(worst, std::abs(c.A[s][i] - shift - state.A[s][i]));
            }
        }
        out.divergence.push_back(worst);
    }
    out.energy_final = fdtd_energy(state);
    if (out.trajectory.size() >= 3) out.maxwell = discrete_maxwell_residual(out.trajectory, dt);
    return out;
}

double max_of(const std::array<double, kMaxDim>& a) { return *std::max_element(a.begin(), a.end()); }

double evolve_bound(const Scenario& sc, double e_scale) {
    const double dt = sc.time_step();
    return kEvolveConstant * (dt * dt + sc.h * sc.h) * std::max(1.0, e_scale);
}

std::vector<ConvergenceResult> run_convergence(const Scenario& sc) {
    if (sc.levels < 3) throw std::invalid_argument("convergence needs at least three levels");
    std::vector<ConvergenceResult> out;

    if (sc.check == "gauss") {
        std::vector<ConvergenceLevel> lv;
        for (int k = 0; k < sc.levels; ++k) {
            const Scenario s = sc.refined(k);
            const auto [ans, config] = build(s);
            const double err = gauss_residual(SplitFunctional{ans, config.lattice, config.t}, config).max_abs;
            lv.push_back({s.N, s.h, 0.0, err});
        }
        out.push_back(assess_convergence("gauss_law", std::move(lv), kGaussFloor));
        return out;
    }

    if (sc.check == "evolve") {
        std::vector<ConvergenceLevel> div, res;
        for (int k = 0; k < sc.levels; ++k) {
            const Scenario s = sc.refined(k);
            const EvolveRun r = run_evolution(s);
            div.push_back({s.N, s.h, s.time_step(), *std::max_element(r.divergence.begin(), r.divergence.end())});
            res.push_back({s.N, s.h, s.time_step(), max_of(r.maxwell)});
        }
        const double inf = std::numeric_limits<double>::infinity();
        out.push_back(assess_convergence("evolve.divergence", std::move(div), kEvolveFloor, 1.8, inf));
        out.push_back(assess_convergence("evolve.maxwell_residual", std::move(res), kEvolveFloor, 1.8, inf));
        return out;
    }

    // Audit steps, by id or alias.
    std::string id = sc.check;
    if (id == "telescoping" || id == "chain_rule") id = "total_divergence." + id;
    if (id == "hj") id = "canonical_hj";

    std::vector<audit::Report> reports;
    std::vector<Scenario> scenarios;
    for (int k = 0; k < sc.levels; ++k) {
        scenarios.push_back(sc.refined(k));
        const auto [ans, config] = build(scenarios.back());
        reports.push_back(audit::run(ans, config));
    }
    std::vector<std::string> ids;
    for (const auto& r : reports.front().records) {
        const bool wanted = id == "audit" ? r.tolerance_class == audit::ToleranceClass::lattice : r.step_id == id;
        if (wanted) ids.push_back(r.step_id);
    }
    if (ids.empty()) throw ParseError("convergence: unknown check '" + sc.check + "'");
    for (const auto& step : ids) {
        std::vector<ConvergenceLevel> lv;
        double floor = 0.0;
        for (std::size_t k = 0; k < reports.size(); ++k) {
            const audit::Record* r = reports[k].find(step);
            lv.push_back({scenarios[k].N, scenarios[k].h, 0.0, r->abs_err});
            floor = std::max(floor, r->floor);
        }
        out.push_back(assess_convergence(step, std::move(lv), floor));
    }
    return out;
}

}  // namespace

double uniform01(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

Json residual_record(const std::string& equation, double lhs, double rhs, const Lattice& lat, double t) {
    const double abs_err = std::abs(lhs - rhs);
    const double scale = std::max(std::abs(lhs), std::abs(rhs));
    return {{"equation", equation},
            {"lhs", lhs},
            {"rhs", rhs},
            {"abs_err", abs_err},
            {"rel_err", scale > 0.0 ? abs_err / scale : 0.0},
            {"lattice", lattice_json(lat)},
            {"t", t}};
}

CommandResult cmd_verify_ddw(const Scenario& sc) {
    const EikonalAnsatz ans = make_ansatz(sc);
    const Lattice lat = sc.lattice();
    std::mt19937_64 gen(sc.seed);
    auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * uniform01(gen()); };

    struct Worst {
        double err = -1.0;
        double lhs = 0.0;
        double rhs = 0.0;
        Point x{};
    } ddw;
    double constraint = 0.0;
    double scale = 1.0;
    std::size_t count = 0;

    auto probe = [&](const Point& x) {
        Vec4 A{};
        for (int mu = 0; mu < sc.D; ++mu) A[mu] = uniform(-1.0, 1.0);
        const double lhs = ans.explicit_divergence(A, x);
        const double rhs = 0.25 * minkowski_square(ans.dS_dA(A, x));
        const double err = std::abs(lhs - rhs);
        scale = std::max({scale, std::abs(lhs), std::abs(rhs)});
        if (err > ddw.err) ddw = {err, lhs, rhs, x};
        constraint = std::max(constraint, constraint_residual(ans, A, x).max_abs());
        ++count;
    };
    for (std::size_t s = 0; s < lat.sites(); ++s) probe(lat.point(s, sc.t));
    for (int n = 0; n < sc.samples; ++n) {
        Point x{};
        x[0] = uniform(sc.t - 1.0, sc.t + 1.0);
        for (int i = 1; i < sc.D; ++i) x[i] = uniform(0.0, lat.length());
        probe(x);
    }

    const double tol = kDdwTol * scale;
    const bool ddw_ok = ddw.err <= tol;
    const bool constraint_ok = constraint == 0.0;
    const bool pass = ddw_ok && constraint_ok;

    CommandResult res;
    res.json = header("verify-ddw", sc);
    Json rec = residual_record("d_mu S^mu = 1/4 T^{mu nu} T_{mu nu}", ddw.lhs, ddw.rhs, lat, ddw.x[0]);
    rec["tolerance"] = tol;
    rec["status"] = verdict(ddw_ok);
    Json crec = residual_record("sym(dS/dA) = 0", constraint, 0.0, lat, sc.t);
    crec["tolerance"] = 0.0;
    crec["status"] = verdict(constraint_ok);
    res.json["samples"] = count;
    res.json["admissible"] = ans.is_admissible();
    res.json["records"] = Json::array({rec, crec});
    res.json["result"] = verdict(pass);
    res.exit_code = pass ? 0 : 1;

    std::ostringstream os;
    os << "verify-ddw  ansatz: " << sc.ansatz_label() << "  samples: " << count << "  seed: " << sc.seed << "\n";
    os << "  " << pad("check", 14) << pad("max abs", 12) << pad("tolerance", 12) << "status\n";
    os << "  " << pad("ddw", 14) << pad(sci(ddw.err), 12) << pad(sci(tol), 12) << verdict(ddw_ok) << "\n";
    os << "  " << pad("constraints", 14) << pad(sci(constraint), 12) << pad(sci(0.0), 12) << verdict(constraint_ok)
       << "\n";
    os << verdict(pass) << "\n";
    res.table = os.str();
    return res;
}

CommandResult cmd_audit(const Scenario& sc) {
    const auto [ans, config] = build(sc);
    audit::Report report = audit::run(ans, config);

    if (!sc.a0_term) {
        for (auto& r : report.records) {
            if (r.step_id != "canonical_hj") continue;
            const auto hj =
                canonical_hj_residual(SplitFunctional{ans, config.lattice, config.t}, config, false);
            r.rhs = -(hj.kinetic + hj.magnetic);
            r.abs_err = std::abs(r.lhs - r.rhs);
            const double s = std::max(std::abs(r.lhs), std::abs(r.rhs));
            r.rel_err = s > 0.0 ? r.abs_err / s : 0.0;
            r.status = r.abs_err <= r.tolerance ? audit::Status::pass : audit::Status::fail;
            r.note = "A_0 term omitted";
        }
    }

    std::vector<ConvergenceResult> study;
    const bool refinable = sc.config != ConfigKind::csv;
    if (refinable) {
        const audit::ScenarioFactory make = [&](const Lattice& lat) { return build(on_lattice(sc, lat)); };
        study = audit::refinement_study(make, config.lattice, sc.levels);
        // A lattice-class row is judged by its convergence, not by one level.
        for (auto& r : report.records) {
            if (r.tolerance_class != audit::ToleranceClass::lattice || r.status == audit::Status::skip) continue;
            for (const auto& c : study) {
                if (c.check != r.step_id) continue;
                r.status = c.pass ? audit::Status::pass : audit::Status::fail;
                r.details.emplace_back("refinement_below_floor", c.below_floor ? 1.0 : 0.0);
                if (!c.orders.empty()) r.details.emplace_back("refinement_min_order",
                                                              *std::min_element(c.orders.begin(), c.orders.end()));
            }
        }
    }

    bool pass = std::all_of(report.records.begin(), report.records.end(),
                            [](const audit::Record& r) { return r.status == audit::Status::pass; });
    for (const auto& c : study) pass = pass && c.pass;

    CommandResult res;
    res.json = header("audit", sc);
    res.json["preconditions"] = flags_json(report.flags);
    Json steps = Json::array();
    for (const auto& r : report.records) steps.push_back(audit_record_json(r, config.lattice, config.t));
    res.json["steps"] = steps;
    Json conv = Json::array();
    for (const auto& c : study) conv.push_back(convergence_json(c));
    res.json["refinement"] = conv;
    res.json["result"] = verdict(pass);
    res.exit_code = pass ? 0 : 1;

    std::ostringstream os;
    os << "audit  ansatz: " << sc.ansatz_label() << "  config: " << sc.config_label() << "  D=" << sc.D
       << " N=" << sc.N << " h=" << sc.h << " t=" << sc.t << "\n";
    os << pad("step", 32) << pad("class", 11) << pad("abs_err", 12) << pad("tolerance", 12) << pad("status", 8)
       << "flags\n";
    for (const auto& r : report.records) {
        os << pad(r.step_id, 32) << pad(audit::to_string(r.tolerance_class), 11) << pad(sci(r.abs_err), 12)
           << pad(sci(r.tolerance), 12) << pad(r.status == audit::Status::pass   ? "PASS"
                                               : r.status == audit::Status::fail ? "FAIL"
                                                                                 : "SKIP",
                                               8)
           << flag_string(r.flags) << "\n";
    }
    if (!study.empty()) os << "\nrefinement of lattice steps\n" << convergence_table(study);
    os << verdict(pass) << "\n";
    res.table = os.str();
    return res;
}

CommandResult cmd_evolve(const Scenario& sc, const EvolveOptions& opts) {
    if (sc.steps < 2) throw std::invalid_argument("evolve needs at least two steps");
    const EvolveRun run = run_evolution(sc);
    const double bound = evolve_bound(sc, run.e_scale);
    const double worst = *std::max_element(run.divergence.begin(), run.divergence.end());
    const bool pass = worst <= bound;

    if (!opts.trajectory_dir.empty()) {
        std::filesystem::create_directories(opts.trajectory_dir);
        const int stride = std::max(1, opts.stride);
        for (int n = 0; n <= sc.steps; ++n) {
            if (n % stride != 0 && n != sc.steps) continue;
            char name[32];
            std::snprintf(name, sizeof name, "step_%06d.csv", n);
            std::ofstream f(opts.trajectory_dir / name);
            if (!f) throw std::runtime_error("cannot write trajectory file in " + opts.trajectory_dir.string());
            write_csv(f, run.trajectory[n]);
        }
    }

    CommandResult res;
    res.json = header("evolve", sc);
    Json per_step = Json::array();
    const double dt = sc.time_step();
    for (std::size_t n = 0; n < run.divergence.size(); ++n)
        per_step.push_back({{"step", n}, {"t", sc.t + static_cast<double>(n) * dt}, {"max_divergence", run.divergence[n]}});
    res.json["divergence"] = per_step;
    res.json["max_divergence"] = worst;
    res.json["bound"] = bound;
    res.json["maxwell_residual"] = std::vector<double>(run.maxwell.begin(), run.maxwell.begin() + sc.D);
    res.json["fdtd_energy"] = {{"initial", run.energy_initial}, {"final", run.energy_final}};
    res.json["result"] = verdict(pass);
    res.exit_code = pass ? 0 : 1;

    std::ostringstream os;
    os << "evolve  ansatz: " << sc.ansatz_label() << "  dt=" << dt << " steps=" << sc.steps << " N=" << sc.N
       << " h=" << sc.h << "\n";
    const int stride = std::max(1, sc.steps / 10);
    os << "  " << pad("step", 8) << "max |A_char - A_fdtd|\n";
    for (int n = 0; n <= sc.steps; ++n)
        if (n % stride == 0 || n == sc.steps) os << "  " << pad(std::to_string(n), 8) << sci(run.divergence[n]) << "\n";
    os << "  max divergence " << sci(worst) << "  bound " << sci(bound) << "\n";
    os << "  maxwell residual of characteristics trajectory " << sci(max_of(run.maxwell)) << "\n";
    os << "  fdtd energy " << sci(run.energy_initial) << " -> " << sci(run.energy_final) << "\n";
    os << verdict(pass) << "\n";
    res.table = os.str();
    return res;
}

CommandResult cmd_convergence(const Scenario& sc) {
    const auto results = run_convergence(sc);
    const bool pass = std::all_of(results.begin(), results.end(), [](const ConvergenceResult& c) { return c.pass; });
    CommandResult res;
    res.json = header("convergence", sc);
    Json arr = Json::array();
    for (const auto& c : results) arr.push_back(convergence_json(c));
    res.json["results"] = arr;
    res.json["result"] = verdict(pass);
    res.exit_code = pass ? 0 : 1;
    res.table = "convergence  ansatz: " + sc.ansatz_label() + "  check: " + sc.check + "\n" +
                convergence_table(results) + verdict(pass) + "\n";
    return res;
}

CommandResult cmd_report(const Scenario& sc) {
    CommandResult res;
    res.json = header("report", sc);
    Json sections = Json::object();
    bool pass = true;
    std::string table;

    auto add = [&](const char* name, const CommandResult& r) {
        Json body = r.json;
        for (const char* k : {"schema", "command", "seed", "scenario"}) body.erase(k);
        sections[name] = body;
        pass = pass && r.exit_code == 0;
        table += r.table + "\n";
    };
    add("verify_ddw", cmd_verify_ddw(sc));
    add("audit", cmd_audit(sc));
    if (sc.steps >= 2) {
        try {
            add("evolve", cmd_evolve(sc));
        } catch (const Error& e) {
            sections["evolve"] = {{"result", "SKIP"}, {"reason", e.what()}};
            table += std::string("evolve skipped: ") + e.what() + "\n\n";
        }
    }
    add("convergence", cmd_convergence(sc));

    res.json["sections"] = sections;
    res.json["result"] = verdict(pass);
    res.exit_code = pass ? 0 : 1;
    res.table = table + "report " + verdict(pass) + "\n";
    return res;
}

}  // namespace dwhj
