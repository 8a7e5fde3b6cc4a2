#include "dwhj/splitting.hpp"

#include <cmath>
#include <stdexcept>

#include "dwhj/errors.hpp"

namespace dwhj {

namespace {

void require_same_slice(const SplitFunctional& Sf, const FieldConfiguration& config, const char* op) {
    if (config.t != Sf.t) {
        throw TimeMismatch(std::string(op) + ": configuration time " + std::to_string(config.t) +
                           " differs from functional time " + std::to_string(Sf.t));
    }
    if (!(config.lattice == Sf.lattice)) throw std::invalid_argument(std::string(op) + ": lattice mismatch");
    if (Sf.ansatz.dim() != Sf.lattice.dim()) throw std::invalid_argument(std::string(op) + ": dimension mismatch");
}

}  // namespace

double functional_value(const SplitFunctional& Sf, const FieldConfiguration& config) {
    require_same_slice(Sf, config, "functional_value");
    const Lattice& lat = Sf.lattice;
    std::vector<double> density(lat.sites());
    for (std::size_t s = 0; s < lat.sites(); ++s) density[s] = Sf.ansatz.eval_S(config.A[s], lat.point(s, Sf.t))[0];
    return lat.cell_volume() * pairwise_sum(density);
}

double variational_derivative(const SplitFunctional& Sf, const FieldConfiguration& config, std::size_t site, int i) {
    require_same_slice(Sf, config, "variational_derivative");
    if (i < 1 || i >= Sf.lattice.dim()) throw std::out_of_range("variational_derivative: index must be spatial");
    return Sf.ansatz.dS_dA(config.A[site], Sf.lattice.point(site, Sf.t))(0, i);
}

CanonicalMomenta canonical_momenta(const MaxwellState& state) {
    CanonicalMomenta p;
    p.p_A = state.E;
    for (auto& v : p.p_A) v[0] = 0.0;
    p.p_A0.assign(state.lattice.sites(), 0.0);
    return p;
}

CanonicalHamiltonian canonical_hamiltonian(const MaxwellState& state, const std::vector<double>& A0) {
    const Lattice& lat = state.lattice;
    const int D = lat.dim();
    const std::size_t n = lat.sites();
    if (A0.size() != n) throw std::invalid_argument("canonical_hamiltonian: A_0 field has wrong size");

    const auto F = spatial_F(state.configuration());
    // F^{0i} = -E_i
    std::vector<std::vector<double>> F0i(static_cast<std::size_t>(D), std::vector<double>(n));
    for (std::size_t s = 0; s < n; ++s)
        for (int i = 1; i < D; ++i) F0i[i][s] = -state.E[s][i];

    std::vector<double> electric(n), magnetic(n), direct(n), by_parts(n);
    for (std::size_t s = 0; s < n; ++s) {
        double e = 0.0, b = 0.0, g1 = 0.0, g2 = 0.0;
        for (int i = 1; i < D; ++i) {
            e += 0.5 * F0i[i][s] * F0i[i][s];
            for (int j = i + 1; j < D; ++j) b += 0.5 * F[s](i, j) * F[s](i, j);
            g1 += F0i[i][s] * central_difference(A0, lat, s, i);
            g2 -= A0[s] * central_difference(F0i[i], lat, s, i);
        }
        electric[s] = e;
        magnetic[s] = b;
        direct[s] = g1;
        by_parts[s] = g2;
    }
    const double dv = lat.cell_volume();
    return {dv * pairwise_sum(electric), dv * pairwise_sum(magnetic), dv * pairwise_sum(direct),
            dv * pairwise_sum(by_parts)};
}

GaussResidual gauss_residual(const SplitFunctional& Sf, const FieldConfiguration& config) {
    require_same_slice(Sf, config, "gauss_residual");
    config.require_periodic("gauss_residual");
    const Lattice& lat = Sf.lattice;
    if (!Sf.ansatz.is_spatially_periodic(lat.length()))
        throw NonPeriodicInput("gauss_residual: ansatz coefficients do not wrap on the lattice");
    const int D = lat.dim();
    const std::size_t n = lat.sites();

    std::vector<std::vector<double>> momentum(static_cast<std::size_t>(D), std::vector<double>(n));
    for (std::size_t s = 0; s < n; ++s) {
        const Rank2 T = Sf.ansatz.dS_dA(config.A[s], lat.point(s, Sf.t));
        for (int i = 1; i < D; ++i) momentum[i][s] = T(0, i);
    }
    GaussResidual out;
    out.per_site.assign(n, 0.0);
    for (std::size_t s = 0; s < n; ++s) {
        double d = 0.0;
        for (int i = 1; i < D; ++i) d += central_difference(momentum[i], lat, s, i);
        out.per_site[s] = d;
        out.max_abs = std::max(out.max_abs, std::abs(d));
    }
    return out;
}

CanonicalHJResidual canonical_hj_residual(const SplitFunctional& Sf, const FieldConfiguration& config,
                                          bool include_A0_term) {
    require_same_slice(Sf, config, "canonical_hj_residual");
    const Lattice& lat = Sf.lattice;
    const int D = lat.dim();
    const std::size_t n = lat.sites();
    const auto F = spatial_F(config);
    const GaussResidual gauss = include_A0_term ? gauss_residual(Sf, config) : GaussResidual{};

    std::vector<double> dt(n), kinetic(n), magnetic(n), gterm(n, 0.0);
    for (std::size_t s = 0; s < n; ++s) {
        const Point x = lat.point(s, Sf.t);
        dt[s] = Sf.ansatz.explicit_time_derivative_S0(config.A[s], x);
        const Rank2 T = Sf.ansatz.dS_dA(config.A[s], x);
        double k = 0.0, b = 0.0;
        for (int i = 1; i < D; ++i) {
            k += 0.5 * T(0, i) * T(0, i);
            for (int j = i + 1; j < D; ++j) b += 0.5 * F[s](i, j) * F[s](i, j);
        }
        kinetic[s] = k;
        magnetic[s] = b;
        if (include_A0_term) gterm[s] = config.A[s][0] * gauss.per_site[s];
    }
    const double dv = lat.cell_volume();
    CanonicalHJResidual r;
    r.time_derivative = dv * pairwise_sum(dt);
    r.kinetic = dv * pairwise_sum(kinetic);
    r.magnetic = dv * pairwise_sum(magnetic);
    r.gauss_term = dv * pairwise_sum(gterm);
    r.includes_gauss_term = include_A0_term;
    r.residual = r.time_derivative + r.kinetic + r.magnetic - (include_A0_term ? r.gauss_term : 0.0);
    r.residual_alt_sign = r.time_derivative - (r.kinetic + r.magnetic);
    return r;
}

double time_derivative_fd(const SplitFunctional& Sf, const FieldConfiguration& config, double dt) {
    require_same_slice(Sf, config, "time_derivative_fd");
    auto value_at = [&](double t) {
        SplitFunctional shifted{Sf.ansatz, Sf.lattice, t};
        FieldConfiguration c = config;
        c.t = t;
        return functional_value(shifted, c);
    };
    return (value_at(Sf.t + dt) - value_at(Sf.t - dt)) / (2.0 * dt);
}

double embedding_check_canonical(const SplitFunctional& Sf, const MaxwellState& state) {
    const FieldConfiguration config = state.configuration();
    require_same_slice(Sf, config, "embedding_check_canonical");
    const Lattice& lat = Sf.lattice;
    double worst = 0.0;
    for (std::size_t s = 0; s < lat.sites(); ++s) {
        const Rank2 T = Sf.ansatz.dS_dA(config.A[s], lat.point(s, Sf.t));
        for (int i = 1; i < lat.dim(); ++i) worst = std::max(worst, std::abs(T(0, i) - state.E[s][i]));
    }
    return worst;
}

}  // namespace dwhj
