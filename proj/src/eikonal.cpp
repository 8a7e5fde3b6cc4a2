#include "dwhj/eikonal.hpp"

#include <cmath>
#include <stdexcept>

#include "dwhj/errors.hpp"

namespace dwhj {

double QuadraticForm::eval(int D, const Vec4& A, const Point& x) const {
    double v = constant.eval(x);
    for (int nu = 0; nu < D; ++nu) {
        if (!linear[nu].is_zero()) v += linear[nu].eval(x) * A[nu];
        for (int rho = 0; rho < D; ++rho)
            if (!quadratic[nu][rho].is_zero()) v += 0.5 * quadratic[nu][rho].eval(x) * A[nu] * A[rho];
    }
    return v;
}

QuadraticForm QuadraticForm::partial(int mu) const {
    QuadraticForm d;
    d.constant = constant.partial(mu);
    for (int nu = 0; nu < kMaxDim; ++nu) {
        d.linear[nu] = linear[nu].partial(mu);
        for (int rho = 0; rho < kMaxDim; ++rho) d.quadratic[nu][rho] = quadratic[nu][rho].partial(mu);
    }
    return d;
}

QuadraticForm& QuadraticForm::operator+=(const QuadraticForm& other) {
    constant += other.constant;
    for (int nu = 0; nu < kMaxDim; ++nu) {
        linear[nu] += other.linear[nu];
        for (int rho = 0; rho < kMaxDim; ++rho) quadratic[nu][rho] += other.quadratic[nu][rho];
    }
    return *this;
}

EikonalAnsatz::EikonalAnsatz(int D) : EikonalAnsatz(D, ExprVector{}, ExprMatrix{}) {}

EikonalAnsatz::EikonalAnsatz(int D, ExprVector g, ExprMatrix f, std::optional<ExprCube> Q)
    : D_(D), g_(std::move(g)), f_(std::move(f)), Q_(std::move(Q)) {
    check_dimension(D);
    if (Q_) {
        for (int mu = 0; mu < D; ++mu)
            for (int nu = 0; nu < D; ++nu)
                for (int rho = nu + 1; rho < D; ++rho)
                    if (!((*Q_)[mu][nu][rho] == (*Q_)[mu][rho][nu]))
                        throw std::invalid_argument("quadratic coefficients Q^{mu,nu rho} must be symmetric in nu, rho");
    }

    auto derived = std::make_shared<Derived>();
    for (int mu = 0; mu < D; ++mu) {
        auto& S = derived->S[mu];
        S.constant = g_[mu];
        for (int nu = 0; nu < D; ++nu) {
            S.linear[nu] = f_[mu][nu];
            if (Q_)
                for (int rho = 0; rho < D; ++rho) S.quadratic[nu][rho] = (*Q_)[mu][nu][rho];
        }
    }
    for (int mu = 0; mu < D; ++mu) {
        const QuadraticForm d = derived->S[mu].partial(mu);
        derived->divergence += d;
        if (mu > 0) derived->spatial_divergence += d;
    }
    derived->time_derivative_S0 = derived->S[0].partial(0);
    derived_ = std::move(derived);
}

Vec4 EikonalAnsatz::eval_S(const Vec4& A, const Point& x) const {
    Vec4 out{};
    for (int mu = 0; mu < D_; ++mu) out[mu] = derived_->S[mu].eval(D_, A, x);
    return out;
}

Rank2 EikonalAnsatz::dS_dA(const Vec4& A, const Point& x) const {
    Rank2 T(D_);
    for (int mu = 0; mu < D_; ++mu) {
        const auto& S = derived_->S[mu];
        for (int nu = 0; nu < D_; ++nu) {
            double v = S.linear[nu].is_zero() ? 0.0 : S.linear[nu].eval(x);
            for (int rho = 0; rho < D_; ++rho)
                if (!S.quadratic[nu][rho].is_zero()) v += S.quadratic[nu][rho].eval(x) * A[rho];
            T(mu, nu) = v;
        }
    }
    return T;
}

double EikonalAnsatz::explicit_divergence(const Vec4& A, const Point& x) const {
    return derived_->divergence.eval(D_, A, x);
}

double EikonalAnsatz::explicit_spatial_divergence(const Vec4& A, const Point& x) const {
    return derived_->spatial_divergence.eval(D_, A, x);
}

double EikonalAnsatz::explicit_time_derivative_S0(const Vec4& A, const Point& x) const {
    return derived_->time_derivative_S0.eval(D_, A, x);
}

bool EikonalAnsatz::is_admissible() const {
    for (int mu = 0; mu < D_; ++mu) {
        for (int nu = mu; nu < D_; ++nu) {
            if (!(f_[mu][nu] + f_[nu][mu]).is_zero()) return false;
            if (Q_)
                for (int rho = 0; rho < D_; ++rho)
                    if (!((*Q_)[mu][nu][rho] + (*Q_)[nu][mu][rho]).is_zero()) return false;
        }
    }
    return true;
}

bool EikonalAnsatz::is_spatially_periodic(double length) const {
    for (int mu = 0; mu < D_; ++mu) {
        if (!g_[mu].is_spatially_periodic(D_, length)) return false;
        for (int nu = 0; nu < D_; ++nu) {
            if (!f_[mu][nu].is_spatially_periodic(D_, length)) return false;
            if (Q_)
                for (int rho = 0; rho < D_; ++rho)
                    if (!(*Q_)[mu][nu][rho].is_spatially_periodic(D_, length)) return false;
        }
    }
    return true;
}

EikonalAnsatz EikonalAnsatz::with_scaled_g0(double factor) const {
    ExprVector g = g_;
    g[0] *= factor;
    return EikonalAnsatz(D_, g, f_, Q_);
}

EikonalAnsatz zero_ansatz(int D) { return EikonalAnsatz(D); }

double ddw_residual(const EikonalAnsatz& ans, const Vec4& A, const Point& x) {
    return ans.explicit_divergence(A, x) - 0.25 * minkowski_square(ans.dS_dA(A, x));
}

Rank2 constraint_residual(const EikonalAnsatz& ans, const Vec4& A, const Point& x) { return sym(ans.dS_dA(A, x)); }

Rank2 embed_field_strength(const EikonalAnsatz& ans, const Vec4& A, const Point& x) {
    return -antisym(ans.dS_dA(A, x));
}

std::vector<Point> validation_points(int D, double extent) {
    // Deterministic low-discrepancy points (golden-ratio sequence) in [0, extent]^D.
    constexpr int count = 64;
    const double alpha[kMaxDim] = {0.6180339887498949, 0.7548776662466927, 0.5698402909980532, 0.4655712318767680};
    std::vector<Point> pts;
    pts.reserve(count);
    for (int n = 1; n <= count; ++n) {
        Point x{};
        for (int mu = 0; mu < D; ++mu) {
            const double frac = n * alpha[mu] - std::floor(n * alpha[mu]);
            x[mu] = extent * frac;
        }
        pts.push_back(x);
    }
    return pts;
}

EikonalAnsatz build_linear_solution(const SpacetimeSolution& Fbar) {
    const int D = Fbar.D;
    const auto points = validation_points(D, 2.0);
    const auto residual = maxwell_residual(Fbar, points);
    for (int nu = 0; nu < D; ++nu) {
        if (residual[nu] > 1e-12) {
            throw NotAMaxwellSolution("build_linear_solution: |d_mu F^{mu " + std::to_string(nu) +
                                      "}| reaches " + std::to_string(residual[nu]));
        }
    }

    const auto F_lower = Fbar.field_strength_exprs();
    ExprMatrix f;
    ScalarExpr invariant;  // 1/4 Fbar^{mu nu} Fbar_{mu nu}
    for (int mu = 0; mu < D; ++mu) {
        for (int nu = 0; nu < D; ++nu) {
            const double raise = metric(mu) * metric(nu);
            f[mu][nu] = (-raise) * F_lower[mu][nu];
            invariant += (0.25 * raise) * (F_lower[mu][nu] * F_lower[mu][nu]);
        }
    }
    ExprVector g;
    g[0] = invariant.time_antiderivative();
    return EikonalAnsatz(D, g, f);
}

std::vector<FieldConfiguration> characteristics_evolve(const EikonalAnsatz& ans, const FieldConfiguration& initial,
                                                       const ScalarExpr& gauge_A0, double dt, int steps) {
    if (!ans.is_admissible()) throw InadmissibleAnsatz("characteristics_evolve: sym(dS/dA) does not vanish");
    if (steps < 0) throw std::invalid_argument("characteristics_evolve: negative step count");
    const Lattice& lat = initial.lattice;
    const int D = lat.dim();
    if (ans.dim() != D) throw std::invalid_argument("characteristics_evolve: ansatz and lattice dimensions differ");

    std::array<ScalarExpr, kMaxDim> gauge_grad;
    for (int i = 1; i < D; ++i) gauge_grad[i] = gauge_A0.partial(i);

    // dA_i/dt = F_{0i} + d_i A_0, F_{0i} = -F^{0i} (one time and one space lowering)
    auto velocity = [&](const Vec4& A, const Point& x) {
        const Rank2 F = embed_field_strength(ans, A, x);
        Vec4 v{};
        for (int i = 1; i < D; ++i) v[i] = -F(0, i) + gauge_grad[i].eval(x);
        return v;
    };

    std::vector<FieldConfiguration> out;
    out.reserve(static_cast<std::size_t>(steps) + 1);
    FieldConfiguration cur = initial;
    for (std::size_t s = 0; s < lat.sites(); ++s) cur.A[s][0] = gauge_A0.eval(lat.point(s, cur.t));
    out.push_back(cur);

    for (int n = 0; n < steps; ++n) {
        FieldConfiguration next = cur;
        next.t = cur.t + dt;
        for (std::size_t s = 0; s < lat.sites(); ++s) {
            const Point x = lat.point(s, cur.t);
            const Vec4 k1 = velocity(cur.A[s], x);
            Vec4 mid = cur.A[s];
            for (int i = 1; i < D; ++i) mid[i] += 0.5 * dt * k1[i];
            Point xm = x;
            xm[0] = cur.t + 0.5 * dt;
            mid[0] = gauge_A0.eval(xm);
            const Vec4 k2 = velocity(mid, xm);
            for (int i = 1; i < D; ++i) next.A[s][i] = cur.A[s][i] + dt * k2[i];
            Point xn = x;
            xn[0] = next.t;
            next.A[s][0] = gauge_A0.eval(xn);
        }
        out.push_back(next);
        cur = std::move(next);
    }
    return out;
}

}  // namespace dwhj
