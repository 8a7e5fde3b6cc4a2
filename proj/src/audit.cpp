#include "dwhj/audit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "dwhj/splitting.hpp"

namespace dwhj::audit {

const char* to_string(ToleranceClass c) {
    switch (c) {
        case ToleranceClass::pointwise: return "pointwise";
        case ToleranceClass::algebraic: return "algebraic";
        case ToleranceClass::lattice: return "lattice";
    }
    return "?";
}

const char* to_string(Status s) {
    switch (s) {
        case Status::pass: return "PASS";
        case Status::fail: return "FAIL";
        case Status::skip: return "SKIP";
    }
    return "?";
}

bool Report::all_pass() const {
    return std::all_of(records.begin(), records.end(), [](const Record& r) { return r.status == Status::pass; });
}

const Record* Report::find(const std::string& step_id) const {
    for (const auto& r : records)
        if (r.step_id == step_id) return &r;
    return nullptr;
}

namespace {

constexpr double kAlgebraicTol = 1e-12;
constexpr double kPointwiseTol = 1e-14;
constexpr double kTelescopeTol = 1e-13;
constexpr double kLatticeFloor = 1e-10;
constexpr double kFlagLatticeConstant = 10.0;

// Per-site quantities of the ansatz restricted to the slice.
struct Slice {
    const Lattice* lat = nullptr;
    int D = 0;
    std::size_t n = 0;
    double dv = 0.0;
    std::vector<Point> x;
    std::vector<Rank2> T;
    std::vector<Vec4> S;
    std::vector<std::vector<double>> A;   // A[mu][site]
    std::vector<std::vector<double>> T0;  // T^{0i}[i][site]
    std::vector<std::vector<double>> Si;  // S^i[i][site]

    double d(const std::vector<double>& f, std::size_t s, int axis) const { return central_difference(f, *lat, s, axis); }
};

Slice make_slice(const EikonalAnsatz& ans, const FieldConfiguration& config) {
    if (ans.dim() != config.lattice.dim()) throw std::invalid_argument("audit: ansatz and lattice dimensions differ");
    Slice sl;
    sl.lat = &config.lattice;
    sl.D = config.lattice.dim();
    sl.n = config.lattice.sites();
    sl.dv = config.lattice.cell_volume();
    sl.x.resize(sl.n);
    sl.T.assign(sl.n, Rank2(sl.D));
    sl.S.resize(sl.n);
    sl.A.assign(static_cast<std::size_t>(sl.D), std::vector<double>(sl.n));
    sl.T0.assign(static_cast<std::size_t>(sl.D), std::vector<double>(sl.n));
    sl.Si.assign(static_cast<std::size_t>(sl.D), std::vector<double>(sl.n));
    for (std::size_t s = 0; s < sl.n; ++s) {
        sl.x[s] = config.lattice.point(s, config.t);
        sl.T[s] = ans.dS_dA(config.A[s], sl.x[s]);
        sl.S[s] = ans.eval_S(config.A[s], sl.x[s]);
        for (int mu = 0; mu < sl.D; ++mu) {
            sl.A[mu][s] = config.A[s][mu];
            sl.T0[mu][s] = sl.T[s](0, mu);
            sl.Si[mu][s] = sl.S[s][mu];
        }
    }
    return sl;
}

double volume_of(const FieldConfiguration& c) { return c.lattice.volume(); }

double lattice_tolerance(const FieldConfiguration& c) {
    const double h = c.lattice.spacing();
    return std::max(kLatticeFloor * volume_of(c), h * h * volume_of(c));
}

void finish(Record& r) {
    r.abs_err = std::abs(r.lhs - r.rhs);
    const double scale = std::max(std::abs(r.lhs), std::abs(r.rhs));
    r.rel_err = scale > 0.0 ? r.abs_err / scale : 0.0;
    r.status = r.abs_err <= r.tolerance ? Status::pass : Status::fail;
}

// eta_mu eta_nu (T^{mu nu})^2 summed over nu for a fixed first index
double row_square(const Rank2& T, int mu) {
    double acc = 0.0;
    for (int nu = 0; nu < T.dim(); ++nu) acc += metric(mu) * metric(nu) * T(mu, nu) * T(mu, nu);
    return acc;
}

double sum(const std::vector<double>& v) { return pairwise_sum(v); }

}  // namespace

Flags evaluate_flags(const EikonalAnsatz& ans, const FieldConfiguration& config) {
    Flags f;
    const Lattice& lat = config.lattice;
    double ddw = 0.0;
    double fbar_max = 0.0;
    double t0_max = 0.0;
    for (std::size_t s = 0; s < lat.sites(); ++s) {
        const Point x = lat.point(s, config.t);
        ddw = std::max(ddw, std::abs(ddw_residual(ans, config.A[s], x)));
        fbar_max = std::max(fbar_max, embed_field_strength(ans, config.A[s], x).max_abs());
        const Rank2 T = ans.dS_dA(config.A[s], x);
        for (int i = 1; i < lat.dim(); ++i) t0_max = std::max(t0_max, std::abs(T(0, i)));
    }
    f.ddw_ok = ddw <= 1e-10;
    f.constraints_ok = ans.is_admissible();

    const double h2 = lat.spacing() * lat.spacing();
    if (config.periodic) {
        const auto Fc = spatial_F(config);
        double mismatch = 0.0;
        for (std::size_t s = 0; s < lat.sites(); ++s) {
            const Rank2 Fbar = embed_field_strength(ans, config.A[s], lat.point(s, config.t));
            for (int i = 1; i < lat.dim(); ++i)
                for (int j = i + 1; j < lat.dim(); ++j) mismatch = std::max(mismatch, std::abs(Fc[s](i, j) - Fbar(i, j)));
        }
        f.embedding_ok = mismatch <= kLatticeFloor + kFlagLatticeConstant * h2 * std::max(1.0, fbar_max);
        if (ans.is_spatially_periodic(lat.length())) {
            const SplitFunctional Sf{ans, lat, config.t};
            const double gauss = gauss_residual(Sf, config).max_abs;
            f.gauss_ok = gauss <= kLatticeFloor + kFlagLatticeConstant * h2 * std::max(1.0, t0_max);
        }
    }
    return f;
}

Record check_time_derivative(const EikonalAnsatz& ans, const FieldConfiguration& config, const Flags& flags) {
    const Slice sl = make_slice(ans, config);
    std::vector<double> lhs(sl.n), rhs(sl.n);
    double scale = 0.0;
    for (std::size_t s = 0; s < sl.n; ++s) {
        const Vec4& A = config.A[s];
        lhs[s] = ans.explicit_time_derivative_S0(A, sl.x[s]);
        double space_rows = 0.0;
        for (int i = 1; i < sl.D; ++i) space_rows += row_square(sl.T[s], i);
        const double div = ans.explicit_spatial_divergence(A, sl.x[s]);
        rhs[s] = -div + 0.25 * row_square(sl.T[s], 0) + 0.25 * space_rows;
        scale = std::max({scale, std::abs(lhs[s]), std::abs(div), 0.25 * std::abs(space_rows)});
    }
    Record r;
    r.step_id = "ddw_time_derivative";
    r.equation = "d_t S = int(-d_i S^i + 1/4 T^{0nu}T_{0nu} + 1/4 T^{inu}T_{inu})";
    r.lhs = sl.dv * sum(lhs);
    r.rhs = sl.dv * sum(rhs);
    r.tolerance = kAlgebraicTol * volume_of(config) * std::max(1.0, scale);
    r.floor = r.tolerance;
    r.tolerance_class = ToleranceClass::algebraic;
    r.flags = flags;
    if (!flags.ddw_ok) r.note = "DDW residual does not vanish on this slice";
    finish(r);
    return r;
}

std::vector<Record> check_total_divergence(const EikonalAnsatz& ans, const FieldConfiguration& config,
                                           const Flags& flags) {
    config.require_periodic("total divergence check");
    const Slice sl = make_slice(ans, config);
    std::vector<double> telescoped(sl.n), explicit_part(sl.n), chain(sl.n);
    double scale = 0.0;
    for (std::size_t s = 0; s < sl.n; ++s) {
        double total = 0.0;
        double ch = 0.0;
        for (int i = 1; i < sl.D; ++i) {
            total += sl.d(sl.Si[i], s, i);
            for (int mu = 0; mu < sl.D; ++mu) ch += sl.d(sl.A[mu], s, i) * sl.T[s](i, mu);
            scale = std::max(scale, std::abs(sl.Si[i][s]) / sl.lat->spacing());
        }
        telescoped[s] = total;
        explicit_part[s] = ans.explicit_spatial_divergence(config.A[s], sl.x[s]);
        chain[s] = ch;
    }

    Record a;
    a.step_id = "total_divergence.telescoping";
    a.equation = "int d/dx^i S^i = 0";
    a.lhs = sl.dv * sum(telescoped);
    a.rhs = 0.0;
    a.tolerance = kTelescopeTol * volume_of(config) * std::max(1.0, scale);
    a.floor = a.tolerance;
    a.tolerance_class = ToleranceClass::algebraic;
    a.flags = flags;
    finish(a);

    Record b;
    b.step_id = "total_divergence.chain_rule";
    b.equation = "int d_i S^i = -int (d_i A_mu) dS^i/dA_mu";
    b.lhs = sl.dv * sum(explicit_part);
    b.rhs = -sl.dv * sum(chain);
    b.tolerance = lattice_tolerance(config);
    b.floor = kLatticeFloor * volume_of(config);
    b.tolerance_class = ToleranceClass::lattice;
    b.flags = flags;
    finish(b);
    return {a, b};
}

Record check_constraint_split(const EikonalAnsatz& ans, const FieldConfiguration& config, const Flags& flags) {
    Record r;
    r.step_id = "constraint_split";
    r.equation = "(d_i A_mu) T^{imu} = -(d_i A_0) T^{0i} + (d_i A_j) T^{[ij]}";
    r.tolerance_class = ToleranceClass::pointwise;
    r.flags = flags;
    if (!flags.constraints_ok) {
        r.status = Status::skip;
        r.note = "constraints sym(dS/dA) = 0 do not hold; step skipped";
        return r;
    }
    config.require_periodic("constraint split check");
    const Slice sl = make_slice(ans, config);
    std::vector<double> lhs(sl.n), rhs(sl.n);
    double worst = 0.0;
    double scale = 0.0;
    for (std::size_t s = 0; s < sl.n; ++s) {
        const Rank2 anti = antisym(sl.T[s]);
        double l = 0.0, q = 0.0;
        for (int i = 1; i < sl.D; ++i) {
            const double dA0 = sl.d(sl.A[0], s, i);
            for (int mu = 0; mu < sl.D; ++mu) l += sl.d(sl.A[mu], s, i) * sl.T[s](i, mu);
            q -= dA0 * sl.T[s](0, i);
            for (int j = 1; j < sl.D; ++j) q += sl.d(sl.A[j], s, i) * anti(i, j);
        }
        lhs[s] = l;
        rhs[s] = q;
        worst = std::max(worst, std::abs(l - q));
        scale = std::max({scale, std::abs(l), std::abs(q)});
    }
    r.lhs = sl.dv * sum(lhs);
    r.rhs = sl.dv * sum(rhs);
    r.tolerance = kAlgebraicTol * std::max(1.0, scale);
    r.floor = r.tolerance;
    r.abs_err = worst;
    const double mag = std::max(std::abs(r.lhs), std::abs(r.rhs));
    r.rel_err = mag > 0.0 ? std::abs(r.lhs - r.rhs) / mag : 0.0;
    r.status = worst <= r.tolerance ? Status::pass : Status::fail;
    // The split expression equals +int (d_i A_mu) T^{imu} = -int d_i S^i;
    // compared against +int d_i S^i instead it is off by an overall sign.
    const double literal = std::abs(-r.lhs - r.rhs);
    r.details.emplace_back("max_site_mismatch", worst);
    r.details.emplace_back("opposite_orientation_mismatch", literal);
    r.note = "orientation: equals -int d_i S^i (the form entering d_t S)";
    return r;
}

Record check_parts_and_embedding(const EikonalAnsatz& ans, const FieldConfiguration& config, const Flags& flags) {
    Record r;
    r.step_id = "parts_and_embedding";
    r.equation = "int(-(d_i A_0)T^{0i} + (d_i A_j)T^{[ij]}) = int(A_0 d/dx^i T^{0i} - 1/2 F_ij F^ij)";
    r.tolerance_class = ToleranceClass::lattice;
    r.flags = flags;
    if (!flags.constraints_ok) {
        r.status = Status::skip;
        r.note = "constraints sym(dS/dA) = 0 do not hold; step skipped";
        return r;
    }
    config.require_periodic("integration by parts check");
    const Slice sl = make_slice(ans, config);
    std::vector<double> gauge_l(sl.n), gauge_r(sl.n), mag_l(sl.n), mag_r(sl.n);
    for (std::size_t s = 0; s < sl.n; ++s) {
        const Rank2 anti = antisym(sl.T[s]);
        const Rank2 Fbar = -anti;  // embedded F^{mu nu}
        double gl = 0.0, gr = 0.0, ml = 0.0, mr = 0.0;
        for (int i = 1; i < sl.D; ++i) {
            gl -= sl.d(sl.A[0], s, i) * sl.T[s](0, i);
            gr += sl.A[0][s] * sl.d(sl.T0[i], s, i);
            for (int j = 1; j < sl.D; ++j) {
                ml += sl.d(sl.A[j], s, i) * anti(i, j);
                mr -= 0.5 * Fbar(i, j) * Fbar(i, j);  // F_ij F^ij = (F^ij)^2 for spatial pairs
            }
        }
        gauge_l[s] = gl;
        gauge_r[s] = gr;
        mag_l[s] = ml;
        mag_r[s] = mr;
    }
    const double gl = sl.dv * sum(gauge_l), gr = sl.dv * sum(gauge_r);
    const double ml = sl.dv * sum(mag_l), mr = sl.dv * sum(mag_r);
    r.lhs = gl + ml;
    r.rhs = gr + mr;
    r.tolerance = lattice_tolerance(config);
    r.floor = kLatticeFloor * volume_of(config);
    r.details.emplace_back("summation_by_parts_mismatch", std::abs(gl - gr));
    r.details.emplace_back("embedding_mismatch", std::abs(ml - mr));
    if (!flags.embedding_ok) r.note = "configuration is not embedded; mismatch measures 1/2 int Fbar (Fbar - F)";
    finish(r);
    return r;
}

Record check_time_block(const EikonalAnsatz& ans, const Vec4& A, const Point& x) {
    Record r;
    r.step_id = "time_block";
    r.equation = "1/4 T^{0nu}T_{0nu} = -1/4 sum_i (T^{0i})^2";
    r.tolerance_class = ToleranceClass::pointwise;
    r.flags.constraints_ok = ans.is_admissible();
    if (!r.flags.constraints_ok) {
        r.status = Status::skip;
        r.note = "constraints do not hold; step skipped";
        return r;
    }
    const Rank2 T = ans.dS_dA(A, x);
    double rhs = 0.0;
    for (int i = 1; i < T.dim(); ++i) rhs -= 0.25 * T(0, i) * T(0, i);
    r.lhs = 0.25 * row_square(T, 0);
    r.rhs = rhs;
    r.tolerance = kPointwiseTol * std::max(1.0, std::abs(rhs));
    r.floor = r.tolerance;
    r.details.emplace_back("T00", T(0, 0));
    finish(r);
    return r;
}

Record check_time_block(const EikonalAnsatz& ans, const FieldConfiguration& config, const Flags& flags) {
    Record r;
    r.step_id = "time_block";
    r.equation = "int 1/4 T^{0nu}T_{0nu} = -int 1/4 sum_i (T^{0i})^2";
    r.tolerance_class = ToleranceClass::algebraic;
    r.flags = flags;
    if (!flags.constraints_ok) {
        r.status = Status::skip;
        r.note = "constraints do not hold; step skipped";
        return r;
    }
    const Lattice& lat = config.lattice;
    std::vector<double> lhs(lat.sites()), rhs(lat.sites());
    double scale = 0.0, t00 = 0.0;
    for (std::size_t s = 0; s < lat.sites(); ++s) {
        const Record p = check_time_block(ans, config.A[s], lat.point(s, config.t));
        lhs[s] = p.lhs;
        rhs[s] = p.rhs;
        scale = std::max(scale, std::abs(p.rhs));
        t00 = std::max(t00, std::abs(p.details.front().second));
    }
    r.lhs = lat.cell_volume() * sum(lhs);
    r.rhs = lat.cell_volume() * sum(rhs);
    r.tolerance = kAlgebraicTol * lat.volume() * std::max(1.0, scale);
    r.floor = r.tolerance;
    r.details.emplace_back("max_abs_T00", t00);
    finish(r);
    return r;
}

Record check_space_block(const EikonalAnsatz& ans, const Vec4& A, const Point& x, const Rank2& Fbar) {
    Record r;
    r.step_id = "space_block";
    r.equation = "1/4 T^{inu}T_{inu} = -1/4 sum_i (T^{0i})^2 + 1/4 F^{ij}F_{ij}";
    r.tolerance_class = ToleranceClass::pointwise;
    r.flags.constraints_ok = ans.is_admissible();
    if (!r.flags.constraints_ok) {
        r.status = Status::skip;
        r.note = "constraints do not hold; step skipped";
        return r;
    }
    const Rank2 T = ans.dS_dA(A, x);
    const int D = T.dim();
    double lhs = 0.0, rhs = 0.0;
    for (int i = 1; i < D; ++i) {
        lhs += 0.25 * row_square(T, i);
        rhs -= 0.25 * T(0, i) * T(0, i);
        for (int j = 1; j < D; ++j) rhs += 0.25 * metric(i) * metric(j) * Fbar(i, j) * Fbar(i, j);
    }
    r.lhs = lhs;
    r.rhs = rhs;
    r.tolerance = kAlgebraicTol * std::max({1.0, std::abs(lhs), std::abs(rhs)});
    r.floor = r.tolerance;
    finish(r);
    return r;
}

Record check_space_block(const EikonalAnsatz& ans, const FieldConfiguration& config, const Flags& flags) {
    Record r;
    r.step_id = "space_block";
    r.equation = "int 1/4 T^{inu}T_{inu} = int(-1/4 sum_i (T^{0i})^2 + 1/4 F_ij F^ij)";
    r.tolerance_class = ToleranceClass::lattice;
    r.flags = flags;
    if (!flags.constraints_ok) {
        r.status = Status::skip;
        r.note = "constraints do not hold; step skipped";
        return r;
    }
    const Lattice& lat = config.lattice;
    const auto Fc = spatial_F(config);
    std::vector<double> lhs(lat.sites()), rhs(lat.sites());
    for (std::size_t s = 0; s < lat.sites(); ++s) {
        const Record p = check_space_block(ans, config.A[s], lat.point(s, config.t), Fc[s]);
        lhs[s] = p.lhs;
        rhs[s] = p.rhs;
    }
    r.lhs = lat.cell_volume() * sum(lhs);
    r.rhs = lat.cell_volume() * sum(rhs);
    r.tolerance = lattice_tolerance(config);
    r.floor = kLatticeFloor * lat.volume();
    if (!flags.embedding_ok) r.note = "configuration is not embedded";
    finish(r);
    return r;
}

std::vector<Record> check_canonical_assembly(const EikonalAnsatz& ans, const FieldConfiguration& config,
                                             const Flags& flags) {
    const Lattice& lat = config.lattice;
    const SplitFunctional Sf{ans, lat, config.t};
    const CanonicalHJResidual hj = canonical_hj_residual(Sf, config, true);

    Record a;
    a.step_id = "canonical_hj";
    a.equation = "d_t S = -int(1/2 (dS/dA_i)^2 + 1/4 F_ij F^ij - A_0 d/dx^i dS/dA_i)";
    a.lhs = hj.time_derivative;
    a.rhs = -(hj.kinetic + hj.magnetic - hj.gauss_term);
    a.tolerance = lattice_tolerance(config);
    a.floor = kLatticeFloor * lat.volume();
    a.tolerance_class = ToleranceClass::lattice;
    a.flags = flags;
    a.details.emplace_back("kinetic", hj.kinetic);
    a.details.emplace_back("magnetic", hj.magnetic);
    a.details.emplace_back("gauss_term", hj.gauss_term);
    a.details.emplace_back("residual_opposite_sign_convention", hj.residual_alt_sign);
    {
        // 1/4 h^(D-1) sum_x sum_{i<j} 2 (F_ij - Fbar_ij)^2, evaluated independently of the residual.
        const auto Fc = spatial_F(config);
        std::vector<double> site(lat.sites());
        for (std::size_t s = 0; s < lat.sites(); ++s) {
            const Rank2 Fbar = embed_field_strength(ans, config.A[s], lat.point(s, config.t));
            double acc = 0.0;
            for (int i = 1; i < lat.dim(); ++i)
                for (int j = i + 1; j < lat.dim(); ++j) {
                    const double d = Fc[s](i, j) - Fbar(i, j);
                    acc += 2.0 * d * d;
                }
            site[s] = 0.25 * acc;
        }
        a.details.emplace_back("field_strength_mismatch", lat.cell_volume() * pairwise_sum(site));
    }
    finish(a);

    const GaussResidual g = gauss_residual(Sf, config);
    Record b;
    b.step_id = "gauss_law";
    b.equation = "d/dx^i dS/dA_i = 0";
    b.lhs = g.max_abs;
    b.rhs = 0.0;
    b.tolerance = std::max(kLatticeFloor, lat.spacing() * lat.spacing());
    b.floor = kLatticeFloor;
    b.tolerance_class = ToleranceClass::lattice;
    b.flags = flags;
    finish(b);

    // Shift A_0 by a smooth periodic profile; only the Gauss term may respond.
    FieldConfiguration shifted = config;
    const double kappa = 2.0 * std::numbers::pi / lat.length();
    for (std::size_t s = 0; s < lat.sites(); ++s) {
        const Point x = lat.point(s, config.t);
        double bump = 0.25;
        for (int i = 1; i < lat.dim(); ++i) bump += 0.5 * std::cos(kappa * x[i] + 0.3 * i);
        shifted.A[s][0] += bump;
    }
    const CanonicalHJResidual hj2 = canonical_hj_residual(Sf, shifted, true);
    const double rhs1 = -(hj.kinetic + hj.magnetic - hj.gauss_term);
    const double rhs2 = -(hj2.kinetic + hj2.magnetic - hj2.gauss_term);
    Record c;
    c.step_id = "a0_decoupling";
    c.equation = "delta_{A_0} rhs = delta_{A_0} int A_0 d/dx^i dS/dA_i";
    c.lhs = rhs2 - rhs1;
    c.rhs = hj2.gauss_term - hj.gauss_term;
    const double V = lat.volume();
    c.tolerance = kAlgebraicTol * V * std::max({1.0, std::abs(rhs1) / V, std::abs(rhs2) / V});
    c.floor = c.tolerance;
    c.tolerance_class = ToleranceClass::algebraic;
    c.flags = flags;
    c.details.emplace_back("time_derivative_change", hj2.time_derivative - hj.time_derivative);
    finish(c);
    return {a, b, c};
}

Report run(const EikonalAnsatz& ans, const FieldConfiguration& config) {
    Report rep;
    rep.D = config.lattice.dim();
    rep.N = config.lattice.points_per_axis();
    rep.h = config.lattice.spacing();
    rep.t = config.t;
    rep.flags = evaluate_flags(ans, config);
    const Flags& f = rep.flags;

    rep.records.push_back(check_time_derivative(ans, config, f));
    for (auto& r : check_total_divergence(ans, config, f)) rep.records.push_back(std::move(r));
    rep.records.push_back(check_constraint_split(ans, config, f));
    rep.records.push_back(check_parts_and_embedding(ans, config, f));
    rep.records.push_back(check_time_block(ans, config, f));
    rep.records.push_back(check_space_block(ans, config, f));
    for (auto& r : check_canonical_assembly(ans, config, f)) rep.records.push_back(std::move(r));
    return rep;
}

std::vector<ConvergenceResult> refinement_study(const ScenarioFactory& make, const Lattice& coarse, int levels) {
    if (levels < 3) throw std::invalid_argument("refinement_study needs at least three levels");
    std::vector<Report> reports;
    std::vector<Lattice> lattices;
    for (int k = 0; k < levels; ++k) {
        const int scale = 1 << k;
        Lattice lat(coarse.dim(), coarse.points_per_axis() * scale, coarse.spacing() / scale);
        auto [ans, config] = make(lat);
        reports.push_back(run(ans, config));
        lattices.push_back(lat);
    }
    std::vector<ConvergenceResult> out;
    for (const auto& rec : reports.front().records) {
        if (rec.tolerance_class != ToleranceClass::lattice) continue;
        std::vector<ConvergenceLevel> lv;
        double floor = 0.0;
        for (std::size_t k = 0; k < reports.size(); ++k) {
            const Record* r = reports[k].find(rec.step_id);
            lv.push_back({lattices[k].points_per_axis(), lattices[k].spacing(), 0.0, r->abs_err});
            floor = std::max(floor, r->floor);
        }
        out.push_back(assess_convergence(rec.step_id, std::move(lv), floor));
    }
    return out;
}

}  // namespace dwhj::audit
