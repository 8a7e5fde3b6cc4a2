#pragma once

#include <array>
#include <compare>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "dwhj/minkowski.hpp"

namespace dwhj {

/// sin or cos of an affine phase k_mu x^mu + phase.
struct Sinusoid {
    enum class Kind { sin, cos };
    Kind kind = Kind::sin;
    std::array<double, kMaxDim> k{};
    double phase = 0.0;

    double argument(const Point& x) const noexcept;
    bool depends_on(int mu) const noexcept { return k[mu] != 0.0; }

    auto operator<=>(const Sinusoid&) const = default;
    bool operator==(const Sinusoid&) const = default;
};

/// coeff * prod_mu (x^mu)^powers[mu] * prod waves.
struct Term {
    double coeff = 0.0;
    std::array<int, kMaxDim> powers{};
    std::vector<Sinusoid> waves;  // sorted

    bool same_factors(const Term& other) const { return powers == other.powers && waves == other.waves; }
};

/// Closed-form scalar field on spacetime: finite sums of products of real
/// constants, coordinate monomials and sinusoids with constant wave covector.
///
/// Values are kept in expanded normal form: a sorted list of terms with
/// like factors merged. The algebra is closed under +, *, and partial
/// differentiation, and every derivative is exact.
class ScalarExpr {
public:
    ScalarExpr() = default;  // zero

    static ScalarExpr constant(double c);
    /// (x^mu)^power
    static ScalarExpr coord(int mu, int power = 1);
    static ScalarExpr sin(const std::array<double, kMaxDim>& k, double phase = 0.0);
    static ScalarExpr cos(const std::array<double, kMaxDim>& k, double phase = 0.0);

    double eval(const Point& x) const noexcept;

    ScalarExpr partial(int mu) const;

    /// G with partial(G, 0) == *this and G(x^0 = 0) == 0. Supported
    /// integrands: terms polynomial in x^0 times x^0-independent factors, or
    /// a single x^0-dependent sinusoid (k_0 != 0) times x^0-independent
    /// factors. Throws UnsupportedIntegrand otherwise.
    ScalarExpr time_antiderivative() const;

    bool is_zero() const noexcept { return terms_.empty(); }
    bool is_constant() const noexcept;
    bool depends_on(int mu) const noexcept;

    /// True if the expression is periodic with period `length` along every
    /// spatial axis 1..D-1 (no spatial monomials, every spatial wave number
    /// an integer multiple of 2*pi/length).
    bool is_spatially_periodic(int D, double length) const;

    const std::vector<Term>& terms() const noexcept { return terms_; }

    /// Prefix-notation text, readable back by parse_expr.
    std::string to_string() const;

    ScalarExpr& operator+=(const ScalarExpr& other);
    ScalarExpr& operator-=(const ScalarExpr& other);
    ScalarExpr& operator*=(double s);

    friend ScalarExpr operator+(ScalarExpr a, const ScalarExpr& b) { return a += b; }
    friend ScalarExpr operator-(ScalarExpr a, const ScalarExpr& b) { return a -= b; }
    friend ScalarExpr operator-(ScalarExpr a) { return a *= -1.0; }
    friend ScalarExpr operator*(double s, ScalarExpr a) { return a *= s; }
    friend ScalarExpr operator*(ScalarExpr a, double s) { return a *= s; }
    friend ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b);

    bool operator==(const ScalarExpr& other) const;

private:
    explicit ScalarExpr(std::vector<Term> terms);
    void normalize();

    std::vector<Term> terms_;
};

/// Named constants available to the parser (e.g. `k`, `E`).
using ParamMap = std::map<std::string, double, std::less<>>;

/// Parses prefix notation:
///   number | pi | x0..x3 | t | <param>
///   (+ e...) (* e...) (- e) (- a b...) (neg e) (/ e c) (pow e n)  n in 0..3
///   (sin e) (cos e)   e affine in the coordinates
/// Throws ParseError.
ScalarExpr parse_expr(std::string_view text, const ParamMap& params = {});

}  // namespace dwhj
