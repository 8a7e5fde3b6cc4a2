#include "dwhj/fields.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "dwhj/errors.hpp"

namespace dwhj {

// ---------------------------------------------------------------------------
// Lattice

Lattice::Lattice(int D, int N, double h) : D_(D), N_(N), h_(h) {
    check_dimension(D);
    if (N < 4) throw std::invalid_argument("lattice needs N >= 4 points per axis");
    if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("lattice spacing must be positive and finite");
    sites_ = 1;
    for (int a = 0; a < D - 1; ++a) sites_ *= static_cast<std::size_t>(N);
    // i1 slowest
    std::size_t s = 1;
    for (int a = D - 2; a >= 0; --a) {
        stride_[a] = s;
        s *= static_cast<std::size_t>(N);
    }
}

double Lattice::volume() const noexcept { return std::pow(length(), D_ - 1); }

double Lattice::cell_volume() const noexcept { return std::pow(h_, D_ - 1); }

std::array<int, 3> Lattice::indices(std::size_t site) const noexcept {
    std::array<int, 3> idx{};
    for (int a = 0; a < D_ - 1; ++a) idx[a] = static_cast<int>((site / stride_[a]) % static_cast<std::size_t>(N_));
    return idx;
}

std::size_t Lattice::site(const std::array<int, 3>& idx) const noexcept {
    std::size_t s = 0;
    for (int a = 0; a < D_ - 1; ++a) s += static_cast<std::size_t>(((idx[a] % N_) + N_) % N_) * stride_[a];
    return s;
}

std::size_t Lattice::neighbor(std::size_t site, int axis, int step) const noexcept {
    const int a = axis - 1;
    const int i = static_cast<int>((site / stride_[a]) % static_cast<std::size_t>(N_));
    const int j = ((i + step) % N_ + N_) % N_;
    return site + (static_cast<std::size_t>(j) - static_cast<std::size_t>(i)) * stride_[a];
}

Point Lattice::point(std::size_t site, double t) const noexcept {
    Point x{};
    x[0] = t;
    const auto idx = indices(site);
    for (int a = 0; a < D_ - 1; ++a) x[a + 1] = idx[a] * h_;
    return x;
}

double central_difference(std::span<const double> field, const Lattice& lat, std::size_t site, int axis) {
    return (field[lat.neighbor(site, axis, +1)] - field[lat.neighbor(site, axis, -1)]) / (2.0 * lat.spacing());
}

double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 8) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

// ---------------------------------------------------------------------------
// Analytic solutions

SpacetimeSolution::SpacetimeSolution(int D_) : D(D_), A(static_cast<std::size_t>(D_)) { check_dimension(D_); }

SpacetimeSolution::SpacetimeSolution(int D_, std::vector<ScalarExpr> components) : D(D_), A(std::move(components)) {
    check_dimension(D_);
    if (A.size() != static_cast<std::size_t>(D)) throw std::invalid_argument("solution needs exactly D potential components");
}

std::array<std::array<ScalarExpr, kMaxDim>, kMaxDim> SpacetimeSolution::field_strength_exprs() const {
    std::array<std::array<ScalarExpr, kMaxDim>, kMaxDim> F;
    for (int mu = 0; mu < D; ++mu) {
        for (int nu = mu + 1; nu < D; ++nu) {
            F[mu][nu] = A[nu].partial(mu) - A[mu].partial(nu);
            F[nu][mu] = -F[mu][nu];
        }
    }
    return F;
}

bool SpacetimeSolution::is_spatially_periodic(double length) const {
    for (const auto& a : A)
        if (!a.is_spatially_periodic(D, length)) return false;
    return true;
}

SpacetimeSolution zero_solution(int D) { return SpacetimeSolution(D); }

SpacetimeSolution constant_electric(int D, double E) {
    SpacetimeSolution sol(D);
    sol.A[1] = -E * ScalarExpr::coord(0);
    return sol;
}

SpacetimeSolution constant_magnetic(int D, double B) {
    if (D < 3) throw std::invalid_argument("constant magnetic field needs D >= 3");
    SpacetimeSolution sol(D);
    sol.A[2] = B * ScalarExpr::coord(1);
    return sol;
}

SpacetimeSolution plane_wave(int D, double amplitude, int m1, double length, int m2) {
    if (D < 3) throw std::invalid_argument("a transverse plane wave needs D >= 3");
    if (m1 == 0 && m2 == 0) throw std::invalid_argument("plane wave needs a nonzero mode number");
    const double norm = std::hypot(static_cast<double>(m1), static_cast<double>(m2));
    const double unit = 2.0 * std::numbers::pi / length;
    std::array<double, kMaxDim> k{};
    k[1] = unit * m1;
    k[2] = unit * m2;
    k[0] = -std::hypot(k[1], k[2]);
    const double eps1 = -m2 / norm;
    const double eps2 = m1 / norm;

    SpacetimeSolution sol(D);
    const ScalarExpr phase = ScalarExpr::cos(k);
    if (eps1 != 0.0) sol.A[1] = (amplitude * eps1) * phase;
    if (eps2 != 0.0) sol.A[2] = (amplitude * eps2) * phase;
    return sol;
}

Rank2 field_strength_analytic(const SpacetimeSolution& sol, const Point& x) {
    const auto F = sol.field_strength_exprs();
    Rank2 out(sol.D);
    for (int mu = 0; mu < sol.D; ++mu)
        for (int nu = 0; nu < sol.D; ++nu) out(mu, nu) = F[mu][nu].eval(x);
    return out;
}

std::array<double, kMaxDim> maxwell_residual(const SpacetimeSolution& sol, std::span<const Point> points) {
    const int D = sol.D;
    const auto F = sol.field_strength_exprs();
    // d_mu F^{mu nu} with F^{mu nu} = eta_mu eta_nu F_{mu nu}
    std::array<ScalarExpr, kMaxDim> divergence;
    for (int nu = 0; nu < D; ++nu) {
        for (int mu = 0; mu < D; ++mu) divergence[nu] += (metric(mu) * metric(nu)) * F[mu][nu].partial(mu);
    }
    std::array<double, kMaxDim> worst{};
    for (const auto& x : points)
        for (int nu = 0; nu < D; ++nu) worst[nu] = std::max(worst[nu], std::abs(divergence[nu].eval(x)));
    return worst;
}

// ---------------------------------------------------------------------------
// Configurations

FieldConfiguration::FieldConfiguration(const Lattice& lat, double time)
    : lattice(lat), t(time), A(lat.sites(), Vec4{}) {}

std::vector<double> FieldConfiguration::component(int mu) const {
    std::vector<double> out(A.size());
    for (std::size_t s = 0; s < A.size(); ++s) out[s] = A[s][mu];
    return out;
}

void FieldConfiguration::require_periodic(const char* operation) const {
    if (!periodic) {
        throw NonPeriodicInput(std::string(operation) +
                               ": configuration was sampled from an expression that does not wrap on the lattice");
    }
}

FieldConfiguration sample(const SpacetimeSolution& sol, const Lattice& lat, double t) {
    if (sol.D != lat.dim()) throw std::invalid_argument("sample: solution and lattice dimensions differ");
    FieldConfiguration config(lat, t);
    for (std::size_t s = 0; s < lat.sites(); ++s) {
        const Point x = lat.point(s, t);
        for (int mu = 0; mu < sol.D; ++mu) config.A[s][mu] = sol.A[mu].eval(x);
    }
    config.periodic = sol.is_spatially_periodic(lat.length());
    return config;
}

std::vector<Rank2> spatial_F(const FieldConfiguration& config) {
    config.require_periodic("spatial_F");
    const Lattice& lat = config.lattice;
    const int D = lat.dim();
    std::vector<std::vector<double>> comp(static_cast<std::size_t>(D));
    for (int mu = 1; mu < D; ++mu) comp[mu] = config.component(mu);

    std::vector<Rank2> out(lat.sites(), Rank2(D));
    for (std::size_t s = 0; s < lat.sites(); ++s) {
        for (int i = 1; i < D; ++i) {
            for (int j = i + 1; j < D; ++j) {
                const double f = central_difference(comp[j], lat, s, i) - central_difference(comp[i], lat, s, j);
                out[s](i, j) = f;
                out[s](j, i) = -f;
            }
        }
    }
    return out;
}

void write_csv(std::ostream& os, const FieldConfiguration& config) {
    const Lattice& lat = config.lattice;
    const int D = lat.dim();
    for (int a = 1; a < D; ++a) os << 'i' << a << ',';
    for (int mu = 0; mu < D; ++mu) os << "A_" << mu << (mu + 1 < D ? "," : "\n");
    char buf[32];
    for (std::size_t s = 0; s < lat.sites(); ++s) {
        const auto idx = lat.indices(s);
        for (int a = 0; a < D - 1; ++a) os << idx[a] << ',';
        for (int mu = 0; mu < D; ++mu) {
            std::snprintf(buf, sizeof buf, "%.17g", config.A[s][mu]);
            os << buf << (mu + 1 < D ? "," : "\n");
        }
    }
}

namespace {

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
        while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
        out.push_back(cell);
    }
    return out;
}

}  // namespace

FieldConfiguration read_csv(std::istream& is, const Lattice& lat, double t) {
    const int D = lat.dim();
    const std::size_t columns = static_cast<std::size_t>(2 * D - 1);
    std::string line;
    if (!std::getline(is, line)) throw ParseError("configuration CSV: missing header row");
    const auto header = split_commas(line);
    if (header.size() != columns) throw ParseError("configuration CSV: expected " + std::to_string(columns) + " columns");
    for (int a = 1; a < D; ++a)
        if (header[a - 1] != "i" + std::to_string(a)) throw ParseError("configuration CSV: bad header '" + line + "'");
    for (int mu = 0; mu < D; ++mu)
        if (header[D - 1 + mu] != "A_" + std::to_string(mu))
            throw ParseError("configuration CSV: bad header '" + line + "'");

    FieldConfiguration config(lat, t);
    std::size_t row = 0;
    while (std::getline(is, line)) {
        if (line.empty() || line == "\r") continue;
        const auto cells = split_commas(line);
        if (cells.size() != columns) throw ParseError("configuration CSV: row " + std::to_string(row + 1) + " has wrong arity");
        if (row >= lat.sites()) throw ParseError("configuration CSV: more rows than lattice sites");
        std::array<int, 3> idx{};
        try {
            for (int a = 0; a < D - 1; ++a) {
                std::size_t used = 0;
                idx[a] = std::stoi(cells[a], &used);
                if (used != cells[a].size() || idx[a] < 0 || idx[a] >= lat.points_per_axis())
                    throw ParseError("site index out of range");
            }
            if (lat.site(idx) != row) throw ParseError("rows must be in lexicographic site order");
            for (int mu = 0; mu < D; ++mu) {
                std::size_t used = 0;
                const double v = std::stod(cells[D - 1 + mu], &used);
                if (used != cells[D - 1 + mu].size() || !std::isfinite(v)) throw ParseError("non-finite value");
                config.A[row][mu] = v;
            }
        } catch (const ParseError& e) {
            throw ParseError("configuration CSV: row " + std::to_string(row + 1) + ": " + e.what());
        } catch (const std::exception&) {
            throw ParseError("configuration CSV: row " + std::to_string(row + 1) + ": malformed number");
        }
        ++row;
    }
    if (row != lat.sites()) throw ParseError("configuration CSV: expected " + std::to_string(lat.sites()) + " rows");
    return config;
}

// ---------------------------------------------------------------------------
// Reference evolver

MaxwellState::MaxwellState(const Lattice& lat, double time)
    : lattice(lat), t(time), A(lat.sites(), Vec4{}), E(lat.sites(), Vec4{}) {}

FieldConfiguration MaxwellState::configuration() const {
    FieldConfiguration config(lattice, t);
    config.A = A;
    for (auto& a : config.A) a[0] = 0.0;
    return config;
}

MaxwellState sample_state(const SpacetimeSolution& sol, const Lattice& lat, double t) {
    if (sol.D != lat.dim()) throw std::invalid_argument("sample_state: solution and lattice dimensions differ");
    if (!sol.is_spatially_periodic(lat.length()))
        throw NonPeriodicInput("sample_state: solution does not wrap on the lattice");
    const auto F = sol.field_strength_exprs();
    MaxwellState state(lat, t);
    for (std::size_t s = 0; s < lat.sites(); ++s) {
        const Point x = lat.point(s, t);
        for (int i = 1; i < sol.D; ++i) {
            state.A[s][i] = sol.A[i].eval(x);
            state.E[s][i] = F[0][i].eval(x);
        }
    }
    return state;
}

namespace {

// D_j F_{ji} per site and component, F_{ji} = D_j A_i - D_i A_j
std::vector<Vec4> curl_curl_force(const Lattice& lat, const std::vector<Vec4>& A) {
    const int D = lat.dim();
    const std::size_t n = lat.sites();
    std::vector<std::vector<double>> comp(static_cast<std::size_t>(D), std::vector<double>(n));
    for (std::size_t s = 0; s < n; ++s)
        for (int i = 1; i < D; ++i) comp[i][s] = A[s][i];

    // F_{ji} stored per pair (j, i), j < i
    std::vector<std::vector<double>> F(static_cast<std::size_t>(D * D));
    for (int j = 1; j < D; ++j) {
        for (int i = j + 1; i < D; ++i) {
            auto& f = F[j * D + i];
            f.resize(n);
            for (std::size_t s = 0; s < n; ++s)
                f[s] = central_difference(comp[i], lat, s, j) - central_difference(comp[j], lat, s, i);
        }
    }
    std::vector<Vec4> force(n, Vec4{});
    for (std::size_t s = 0; s < n; ++s) {
        for (int i = 1; i < D; ++i) {
            double acc = 0.0;
            for (int j = 1; j < D; ++j) {
                if (j == i) continue;
                const double sign = j < i ? 1.0 : -1.0;
                const auto& f = j < i ? F[j * D + i] : F[i * D + j];
                acc += sign * central_difference(f, lat, s, j);
            }
            force[s][i] = acc;
        }
    }
    return force;
}

}  // namespace

MaxwellState fdtd_step(const MaxwellState& state, double dt) {
    const Lattice& lat = state.lattice;
    const int D = lat.dim();
    const double limit = lat.spacing() / std::sqrt(static_cast<double>(D - 1));
    if (!(dt > 0.0) || dt > limit * (1.0 + 1e-12)) {
        throw StabilityViolation("fdtd_step: dt must lie in (0, h/sqrt(D-1)] = (0, " + std::to_string(limit) + "]");
    }
    MaxwellState next = state;
    auto force = curl_curl_force(lat, next.A);
    for (std::size_t s = 0; s < lat.sites(); ++s)
        for (int i = 1; i < D; ++i) next.E[s][i] += 0.5 * dt * force[s][i];
    for (std::size_t s = 0; s < lat.sites(); ++s)
        for (int i = 1; i < D; ++i) next.A[s][i] += dt * next.E[s][i];
    force = curl_curl_force(lat, next.A);
    for (std::size_t s = 0; s < lat.sites(); ++s)
        for (int i = 1; i < D; ++i) next.E[s][i] += 0.5 * dt * force[s][i];
    next.t = state.t + dt;
    return next;
}

double fdtd_energy(const MaxwellState& state) {
    const Lattice& lat = state.lattice;
    const int D = lat.dim();
    const auto F = spatial_F(state.configuration());
    std::vector<double> density(lat.sites());
    for (std::size_t s = 0; s < lat.sites(); ++s) {
        double e = 0.0;
        for (int i = 1; i < D; ++i) {
            e += 0.5 * state.E[s][i] * state.E[s][i];
            for (int j = i + 1; j < D; ++j) e += 0.5 * F[s](i, j) * F[s](i, j);
        }
        density[s] = e;
    }
    return lat.cell_volume() * pairwise_sum(density);
}

std::vector<double> discrete_divergence_E(const MaxwellState& state) {
    const Lattice& lat = state.lattice;
    const int D = lat.dim();
    std::vector<double> out(lat.sites(), 0.0);
    for (int i = 1; i < D; ++i) {
        std::vector<double> e(lat.sites());
        for (std::size_t s = 0; s < lat.sites(); ++s) e[s] = state.E[s][i];
        for (std::size_t s = 0; s < lat.sites(); ++s) out[s] += central_difference(e, lat, s, i);
    }
    return out;
}

std::array<double, kMaxDim> discrete_maxwell_residual(std::span<const FieldConfiguration> trajectory, double dt) {
    if (trajectory.size() < 3) throw std::invalid_argument("discrete_maxwell_residual needs at least three time levels");
    const Lattice& lat = trajectory.front().lattice;
    const int D = lat.dim();
    const std::size_t n = lat.sites();
    for (const auto& c : trajectory) c.require_periodic("discrete_maxwell_residual");

    std::array<double, kMaxDim> worst{};
    for (std::size_t level = 1; level + 1 < trajectory.size(); ++level) {
        const auto& prev = trajectory[level - 1];
        const auto& cur = trajectory[level];
        const auto& next = trajectory[level + 1];
        std::vector<std::vector<double>> comp(static_cast<std::size_t>(D));
        for (int mu = 0; mu < D; ++mu) comp[mu] = cur.component(mu);
        const auto a0_prev = prev.component(0);
        const auto a0_next = next.component(0);

        // F_{0i} at the current level
        std::vector<std::vector<double>> E(static_cast<std::size_t>(D), std::vector<double>(n));
        for (std::size_t s = 0; s < n; ++s)
            for (int i = 1; i < D; ++i)
                E[i][s] = (next.A[s][i] - prev.A[s][i]) / (2.0 * dt) - central_difference(comp[0], lat, s, i);
        const auto F = spatial_F(cur);
        std::vector<std::vector<double>> Fji(static_cast<std::size_t>(D * D), std::vector<double>(n));
        for (std::size_t s = 0; s < n; ++s)
            for (int i = 1; i < D; ++i)
                for (int j = 1; j < D; ++j) Fji[j * D + i][s] = F[s](j, i);

        for (std::size_t s = 0; s < n; ++s) {
            double gauss = 0.0;
            for (int i = 1; i < D; ++i) gauss += central_difference(E[i], lat, s, i);
            worst[0] = std::max(worst[0], std::abs(gauss));
            for (int i = 1; i < D; ++i) {
                const double a_tt = (next.A[s][i] - 2.0 * cur.A[s][i] + prev.A[s][i]) / (dt * dt);
                const double d_a0_t = (central_difference(a0_next, lat, s, i) - central_difference(a0_prev, lat, s, i)) / (2.0 * dt);
                double r = -(a_tt - d_a0_t);
                for (int j = 1; j < D; ++j) r += central_difference(Fji[j * D + i], lat, s, j);
                worst[i] = std::max(worst[i], std::abs(r));
            }
        }
    }
    return worst;
}

}  // namespace dwhj
