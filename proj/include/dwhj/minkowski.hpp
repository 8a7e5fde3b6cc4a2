#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>

namespace dwhj {

inline constexpr int kMaxDim = 4;

/// Spacetime point (x^0 = t, x^1, ..., x^{D-1}); unused trailing entries are ignored.
using Point = std::array<double, kMaxDim>;
/// Per-site potential components A_0 ... A_{D-1}.
using Vec4 = std::array<double, kMaxDim>;

/// Throws std::invalid_argument unless 2 <= D <= 4.
void check_dimension(int D);

/// Diagonal of the (+,-,...,-) Minkowski metric. Its own inverse.
constexpr double metric(int mu) noexcept { return mu == 0 ? 1.0 : -1.0; }

/// D x D array of reals. The first slot is a contravariant spacetime index;
/// the second either labels the potential component A_nu or is a tensor
/// index, depending on context.
class Rank2 {
public:
    explicit Rank2(int D = kMaxDim);

    static Rank2 identity(int D);

    int dim() const noexcept { return dim_; }

    double& operator()(int mu, int nu) { return c_[mu][nu]; }
    double operator()(int mu, int nu) const { return c_[mu][nu]; }

    /// Largest absolute component.
    double max_abs() const noexcept;

    Rank2& operator+=(const Rank2& other);
    Rank2& operator-=(const Rank2& other);
    Rank2& operator*=(double s);

    friend Rank2 operator+(Rank2 a, const Rank2& b) { return a += b; }
    friend Rank2 operator-(Rank2 a, const Rank2& b) { return a -= b; }
    friend Rank2 operator*(double s, Rank2 a) { return a *= s; }
    friend Rank2 operator-(Rank2 a) { return a *= -1.0; }

    bool operator==(const Rank2& other) const = default;

private:
    int dim_;
    std::array<std::array<double, kMaxDim>, kMaxDim> c_{};
};

/// Multiplies each requested slot (0 or 1) by the diagonal metric entry.
/// Raising and lowering are the same operation for a diagonal +-1 metric.
/// Throws std::out_of_range for a slot outside {0, 1}.
Rank2 raise_lower(const Rank2& T, std::initializer_list<int> slots);

/// X^{[mu nu]} = (X^{mu nu} - X^{nu mu}) / 2
Rank2 antisym(const Rank2& T);
/// X^{(mu nu)} = (X^{mu nu} + X^{nu mu}) / 2
Rank2 sym(const Rank2& T);

/// eta_{mu rho} eta_{nu sigma} T^{mu nu} T^{rho sigma}, evaluated with the
/// time/space split: (T^00)^2 - sum (T^0i)^2 - sum (T^i0)^2 + sum (T^ij)^2.
double minkowski_square(const Rank2& T);

}  // namespace dwhj
