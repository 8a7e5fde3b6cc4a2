#pragma once

#include <vector>

#include "dwhj/eikonal.hpp"
#include "dwhj/fields.hpp"

namespace dwhj {

/// S[A(x), t] = h^(D-1) sum_x S^0(A(x), x, t): the canonical functional
/// obtained by restricting the DDW functions to a time slice.
struct SplitFunctional {
    EikonalAnsatz ansatz;
    Lattice lattice;
    double t = 0.0;
};

double functional_value(const SplitFunctional& Sf, const FieldConfiguration& config);

/// delta S / delta A_i(x) = dS^0/dA_i (A(x), x, t); i spatial.
double variational_derivative(const SplitFunctional& Sf, const FieldConfiguration& config, std::size_t site, int i);

struct CanonicalMomenta {
    std::vector<Vec4> p_A;  // p_{A_i} = -F^{0i} = E_i; slot 0 unused
    std::vector<double> p_A0;  // identically zero
};

CanonicalMomenta canonical_momenta(const MaxwellState& state);

/// The two lattice forms of the canonical Hamiltonian. They differ only in
/// how the A_0 coupling is written; on a periodic lattice they agree to
/// rounding because central differences sum by parts exactly.
struct CanonicalHamiltonian {
    double electric = 0.0;           // h^(D-1) sum 1/2 (F^{0i})^2
    double magnetic = 0.0;           // h^(D-1) sum 1/4 F^{ij} F_{ij}
    double gauge_direct = 0.0;       // h^(D-1) sum F^{0i} D_i A_0
    double gauge_by_parts = 0.0;     // -h^(D-1) sum A_0 D_i F^{0i}

    double direct() const noexcept { return electric + magnetic + gauge_direct; }
    double by_parts() const noexcept { return electric + magnetic + gauge_by_parts; }
};

/// A0 holds A_0 per site (same lattice as the state).
CanonicalHamiltonian canonical_hamiltonian(const MaxwellState& state, const std::vector<double>& A0);

struct GaussResidual {
    std::vector<double> per_site;  // d/dx^i (delta S / delta A_i)
    double max_abs = 0.0;
};

/// Central difference of the composite site field x -> dS^0/dA_i(A(x), x).
GaussResidual gauss_residual(const SplitFunctional& Sf, const FieldConfiguration& config);

struct CanonicalHJResidual {
    double time_derivative = 0.0;  // d_t S, analytic
    double kinetic = 0.0;          // h^(D-1) sum 1/2 sum_i (delta S / delta A_i)^2
    double magnetic = 0.0;         // h^(D-1) sum 1/4 F_ij F^ij
    double gauss_term = 0.0;       // h^(D-1) sum A_0 d/dx^i delta S / delta A_i
    bool includes_gauss_term = false;

    /// d_t S + int(...) [- int A_0 d/dx^i ...]: the sign of the final
    /// canonical HJ equation.
    double residual = 0.0;
    /// d_t S - int(...): the alternative sign convention, diagnostic only.
    double residual_alt_sign = 0.0;
};

CanonicalHJResidual canonical_hj_residual(const SplitFunctional& Sf, const FieldConfiguration& config,
                                          bool include_A0_term);

/// d_t S by a centred difference in t at fixed configuration (diagnostic).
double time_derivative_fd(const SplitFunctional& Sf, const FieldConfiguration& config, double dt);

/// max over sites and i of |delta S / delta A_i - F^{i0}|, F^{i0} = E_i.
double embedding_check_canonical(const SplitFunctional& Sf, const MaxwellState& state);

}  // namespace dwhj
