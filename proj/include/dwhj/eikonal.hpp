#pragma once

#include <array>
#include <memory>
#include <optional>
#include <vector>

#include "dwhj/expr.hpp"
#include "dwhj/fields.hpp"
#include "dwhj/minkowski.hpp"

namespace dwhj {

using ExprVector = std::array<ScalarExpr, kMaxDim>;
using ExprMatrix = std::array<ExprVector, kMaxDim>;
using ExprCube = std::array<ExprMatrix, kMaxDim>;

/// c(x) + l^nu(x) A_nu + 1/2 q^{nu rho}(x) A_nu A_rho with ScalarExpr coefficients.
struct QuadraticForm {
    ScalarExpr constant;
    ExprVector linear;
    ExprMatrix quadratic;

    double eval(int D, const Vec4& A, const Point& x) const;
    /// Derivative with respect to x^mu at fixed A.
    QuadraticForm partial(int mu) const;
    QuadraticForm& operator+=(const QuadraticForm& other);
};

/// DDW Hamilton-Jacobi functions
///   S^mu(A, x) = g^mu(x) + f^{mu nu}(x) A_nu + 1/2 Q^{mu, nu rho}(x) A_nu A_rho
/// with Q symmetric in its last two labels.
class EikonalAnsatz {
public:
    /// Zero ansatz.
    explicit EikonalAnsatz(int D = kMaxDim);
    /// Throws std::invalid_argument if Q is not exactly symmetric in (nu, rho).
    EikonalAnsatz(int D, ExprVector g, ExprMatrix f, std::optional<ExprCube> Q = std::nullopt);

    int dim() const noexcept { return D_; }
    const ExprVector& g() const noexcept { return g_; }
    const ExprMatrix& f() const noexcept { return f_; }
    const std::optional<ExprCube>& Q() const noexcept { return Q_; }

    /// S^mu(A, x)
    Vec4 eval_S(const Vec4& A, const Point& x) const;
    /// T^{mu nu} = dS^mu / dA_nu
    Rank2 dS_dA(const Vec4& A, const Point& x) const;

    /// d_mu S^mu at fixed A (explicit x-dependence only).
    double explicit_divergence(const Vec4& A, const Point& x) const;
    /// d_i S^i at fixed A, spatial i only.
    double explicit_spatial_divergence(const Vec4& A, const Point& x) const;
    /// d_t S^0 at fixed A.
    double explicit_time_derivative_S0(const Vec4& A, const Point& x) const;

    /// sym(dS/dA) vanishes for every A: sym(f) == 0 and
    /// Q^{mu,nu rho} + Q^{nu,mu rho} == 0, checked on the normal forms.
    bool is_admissible() const;

    /// True if every coefficient is periodic on a lattice of this length.
    bool is_spatially_periodic(double length) const;

    /// Copy with g^0 multiplied by `factor` (used for perturbation checks).
    EikonalAnsatz with_scaled_g0(double factor) const;

private:
    struct Derived {
        std::array<QuadraticForm, kMaxDim> S;
        QuadraticForm divergence;
        QuadraticForm spatial_divergence;
        QuadraticForm time_derivative_S0;
    };

    int D_;
    ExprVector g_;
    ExprMatrix f_;
    std::optional<ExprCube> Q_;
    std::shared_ptr<const Derived> derived_;
};

EikonalAnsatz zero_ansatz(int D);

/// ddw residual: d_mu S^mu - 1/4 eta eta T T
double ddw_residual(const EikonalAnsatz& ans, const Vec4& A, const Point& x);
/// sym(dS/dA)
Rank2 constraint_residual(const EikonalAnsatz& ans, const Vec4& A, const Point& x);
/// F^{mu nu} = -antisym(dS/dA)
Rank2 embed_field_strength(const EikonalAnsatz& ans, const Vec4& A, const Point& x);

/// Exact linear solution generated by a Maxwell solution Fbar:
/// f^{mu nu} = -Fbar^{mu nu}, Q absent, g^i = 0,
/// g^0 = int_0^t 1/4 Fbar^{mu nu} Fbar_{mu nu} dx^0.
/// With a linear ansatz the DDW equation splits into d_mu f^{mu nu} = 0
/// and d_mu g^mu = 1/4 f^{mu nu} f_{mu nu}.
/// Throws NotAMaxwellSolution or UnsupportedIntegrand.
EikonalAnsatz build_linear_solution(const SpacetimeSolution& Fbar);

/// Fixed deterministic spacetime points used to validate Maxwell sources.
std::vector<Point> validation_points(int D, double extent);

/// Explicit-midpoint evolution of A_i using the embedded field strength:
///   dA_i/dt = F_{0i}(A, t, x) + d_i A0_gauge,   A_0 = A0_gauge.
/// Returns steps+1 configurations (including the initial one).
/// Throws InadmissibleAnsatz.
std::vector<FieldConfiguration> characteristics_evolve(const EikonalAnsatz& ans, const FieldConfiguration& initial,
                                                       const ScalarExpr& gauge_A0, double dt, int steps);

}  // namespace dwhj
