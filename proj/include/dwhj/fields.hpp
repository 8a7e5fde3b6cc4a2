#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "dwhj/expr.hpp"
#include "dwhj/minkowski.hpp"

namespace dwhj {

/// Periodic cubic lattice on the spatial slice: N points per axis, spacing h,
/// D-1 spatial axes. Site indices are lexicographic with i1 slowest.
class Lattice {
public:
    Lattice(int D, int N, double h);

    int dim() const noexcept { return D_; }
    int points_per_axis() const noexcept { return N_; }
    double spacing() const noexcept { return h_; }
    int spatial_axes() const noexcept { return D_ - 1; }

    std::size_t sites() const noexcept { return sites_; }
    /// Physical length N*h of one axis.
    double length() const noexcept { return N_ * h_; }
    /// Spatial volume (N*h)^(D-1).
    double volume() const noexcept;
    /// Cell measure h^(D-1).
    double cell_volume() const noexcept;

    std::array<int, 3> indices(std::size_t site) const noexcept;
    std::size_t site(const std::array<int, 3>& idx) const noexcept;
    /// Neighbouring site along spatial axis (1..D-1), wrapping periodically.
    std::size_t neighbor(std::size_t site, int axis, int step) const noexcept;
    /// Spacetime point of a site at time t.
    Point point(std::size_t site, double t) const noexcept;

    bool operator==(const Lattice&) const = default;

private:
    int D_;
    int N_;
    double h_;
    std::size_t sites_;
    std::array<std::size_t, 3> stride_{};
};

/// Second-order periodic central difference of a site field along axis i.
double central_difference(std::span<const double> field, const Lattice& lat, std::size_t site, int axis);

/// Analytic potentials A_mu(x) (covariant components).
struct SpacetimeSolution {
    int D = 4;
    std::vector<ScalarExpr> A;

    explicit SpacetimeSolution(int D_ = 4);
    SpacetimeSolution(int D_, std::vector<ScalarExpr> components);

    /// F_{mu nu} = d_mu A_nu - d_nu A_mu as expressions.
    std::array<std::array<ScalarExpr, kMaxDim>, kMaxDim> field_strength_exprs() const;
    bool is_spatially_periodic(double length) const;
};

SpacetimeSolution zero_solution(int D);
/// A_1 = -E x^0, so F_{01} = -E.
SpacetimeSolution constant_electric(int D, double E);
/// A_2 = B x^1. Not lattice periodic: analytic checks only.
SpacetimeSolution constant_magnetic(int D, double B);
/// Lattice-periodic null plane wave with wave numbers kappa_i = 2 pi m_i / L
/// (m2 = 0: propagation along x^1, polarization along x^2). Polarization is
/// transverse in the (x^1, x^2) plane; omega = |kappa|.
///   A_j = a eps_j cos(kappa . x - omega x^0)
SpacetimeSolution plane_wave(int D, double amplitude, int m1, double length, int m2 = 0);

/// F_{mu nu}(x), both indices covariant.
Rank2 field_strength_analytic(const SpacetimeSolution& sol, const Point& x);

/// Per-nu maximum over sample points of |d_mu F^{mu nu}|.
std::array<double, kMaxDim> maxwell_residual(const SpacetimeSolution& sol, std::span<const Point> points);

/// Lattice sample of A_mu at one time slice.
struct FieldConfiguration {
    Lattice lattice;
    double t = 0.0;
    std::vector<Vec4> A;
    /// False when sampled from an expression that does not wrap on the lattice.
    bool periodic = true;

    FieldConfiguration(const Lattice& lat, double time);

    /// Values of component mu at every site.
    std::vector<double> component(int mu) const;
    void require_periodic(const char* operation) const;
};

FieldConfiguration sample(const SpacetimeSolution& sol, const Lattice& lat, double t);

/// F_ij per site from central differences, covariant, zero time row/column.
std::vector<Rank2> spatial_F(const FieldConfiguration& config);

/// CSV: header `i1,...,i(D-1),A_0,...,A_(D-1)`, lexicographic site order.
void write_csv(std::ostream& os, const FieldConfiguration& config);
FieldConfiguration read_csv(std::istream& is, const Lattice& lat, double t);

/// Temporal-gauge state for the reference evolver: A_i and E_i = F_{0i}.
struct MaxwellState {
    Lattice lattice;
    double t = 0.0;
    std::vector<Vec4> A;  // A_0 slot unused (zero)
    std::vector<Vec4> E;  // E_0 slot unused (zero)

    MaxwellState(const Lattice& lat, double time);

    FieldConfiguration configuration() const;
};

/// Samples A_i and E_i = F_{0i} of an analytic solution.
MaxwellState sample_state(const SpacetimeSolution& sol, const Lattice& lat, double t);

/// Kick-drift-kick leapfrog for dA_i/dt = E_i, dE_i/dt = D_j F_{ji}.
/// Throws StabilityViolation if dt > h / sqrt(D-1).
MaxwellState fdtd_step(const MaxwellState& state, double dt);

/// h^(D-1) sum (E^2/2 + sum_{i<j} F_ij^2 / 2)
double fdtd_energy(const MaxwellState& state);
/// D_i E_i per site.
std::vector<double> discrete_divergence_E(const MaxwellState& state);

/// Per-nu max over interior time levels of the discrete Maxwell residual
/// d_mu F^{mu nu} of a trajectory of configurations spaced by dt, using
/// centred differences in space and time.
std::array<double, kMaxDim> discrete_maxwell_residual(std::span<const FieldConfiguration> trajectory, double dt);

/// Fixed-order pairwise sum; reproducible regardless of threading.
double pairwise_sum(std::span<const double> values);

}  // namespace dwhj
