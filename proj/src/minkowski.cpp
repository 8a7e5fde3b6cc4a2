#include "dwhj/minkowski.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dwhj {

void check_dimension(int D) {
    if (D < 2 || D > kMaxDim) {
        throw std::invalid_argument("spacetime dimension must be in [2, 4], got " + std::to_string(D));
    }
}

Rank2::Rank2(int D) : dim_(D) { check_dimension(D); }

Rank2 Rank2::identity(int D) {
    Rank2 T(D);
    for (int mu = 0; mu < D; ++mu) T(mu, mu) = 1.0;
    return T;
}

double Rank2::max_abs() const noexcept {
    double m = 0.0;
    for (int mu = 0; mu < dim_; ++mu)
        for (int nu = 0; nu < dim_; ++nu) m = std::max(m, std::abs(c_[mu][nu]));
    return m;
}

Rank2& Rank2::operator+=(const Rank2& other) {
    for (int mu = 0; mu < dim_; ++mu)
        for (int nu = 0; nu < dim_; ++nu) c_[mu][nu] += other.c_[mu][nu];
    return *this;
}

Rank2& Rank2::operator-=(const Rank2& other) {
    for (int mu = 0; mu < dim_; ++mu)
        for (int nu = 0; nu < dim_; ++nu) c_[mu][nu] -= other.c_[mu][nu];
    return *this;
}

Rank2& Rank2::operator*=(double s) {
    for (int mu = 0; mu < dim_; ++mu)
        for (int nu = 0; nu < dim_; ++nu) c_[mu][nu] *= s;
    return *this;
}

Rank2 raise_lower(const Rank2& T, std::initializer_list<int> slots) {
    bool first = false;
    bool second = false;
    for (int s : slots) {
        if (s == 0) {
            first = !first;
        } else if (s == 1) {
            second = !second;
        } else {
            throw std::out_of_range("Rank2 slot must be 0 or 1, got " + std::to_string(s));
        }
    }
    const int D = T.dim();
    Rank2 out(D);
    for (int mu = 0; mu < D; ++mu) {
        for (int nu = 0; nu < D; ++nu) {
            double v = T(mu, nu);
            if (first) v *= metric(mu);
            if (second) v *= metric(nu);
            out(mu, nu) = v;
        }
    }
    return out;
}

Rank2 antisym(const Rank2& T) {
    const int D = T.dim();
    Rank2 out(D);
    for (int mu = 0; mu < D; ++mu)
        for (int nu = 0; nu < D; ++nu) out(mu, nu) = 0.5 * (T(mu, nu) - T(nu, mu));
    return out;
}

Rank2 sym(const Rank2& T) {
    const int D = T.dim();
    Rank2 out(D);
    for (int mu = 0; mu < D; ++mu)
        for (int nu = 0; nu < D; ++nu) out(mu, nu) = 0.5 * (T(mu, nu) + T(nu, mu));
    return out;
}

double minkowski_square(const Rank2& T) {
    const int D = T.dim();
    double time_time = T(0, 0) * T(0, 0);
    double mixed = 0.0;
    double space_space = 0.0;
    for (int i = 1; i < D; ++i) {
        mixed += T(0, i) * T(0, i) + T(i, 0) * T(i, 0);
        for (int j = 1; j < D; ++j) space_space += T(i, j) * T(i, j);
    }
    return time_time - mixed + space_space;
}

}  // namespace dwhj
