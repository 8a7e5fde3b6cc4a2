#include "dwhj/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "dwhj/errors.hpp"

namespace dwhj {

namespace {

bool term_less(const Term& a, const Term& b) {
    if (a.powers != b.powers) return a.powers < b.powers;
    return std::lexicographical_compare(a.waves.begin(), a.waves.end(), b.waves.begin(), b.waves.end());
}

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double integer_power(double base, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= base;
    return r;
}

}  // namespace

double Sinusoid::argument(const Point& x) const noexcept {
    double arg = phase;
    for (int mu = 0; mu < kMaxDim; ++mu) arg += k[mu] * x[mu];
    return arg;
}

ScalarExpr::ScalarExpr(std::vector<Term> terms) : terms_(std::move(terms)) { normalize(); }

void ScalarExpr::normalize() {
    for (auto& t : terms_) std::sort(t.waves.begin(), t.waves.end());
    std::stable_sort(terms_.begin(), terms_.end(), term_less);

    std::vector<Term> merged;
    merged.reserve(terms_.size());
    std::size_t i = 0;
    while (i < terms_.size()) {
        Term acc = terms_[i];
        double magnitude = std::abs(acc.coeff);
        std::size_t group = 1;
        std::size_t j = i + 1;
        for (; j < terms_.size() && terms_[j].same_factors(acc); ++j) {
            acc.coeff += terms_[j].coeff;
            magnitude += std::abs(terms_[j].coeff);
            ++group;
        }
        // Cancellation down to rounding level counts as an exact zero.
        const double noise = group > 1 ? 8.0 * std::numeric_limits<double>::epsilon() * magnitude : 0.0;
        if (acc.coeff != 0.0 && std::abs(acc.coeff) > noise) merged.push_back(std::move(acc));
        i = j;
    }
    terms_ = std::move(merged);
}

ScalarExpr ScalarExpr::constant(double c) {
    if (c == 0.0) return {};
    Term t;
    t.coeff = c;
    return ScalarExpr({t});
}

ScalarExpr ScalarExpr::coord(int mu, int power) {
    if (mu < 0 || mu >= kMaxDim || power < 0) throw std::out_of_range("coordinate index or power out of range");
    Term t;
    t.coeff = 1.0;
    t.powers[mu] = power;
    return ScalarExpr({t});
}

ScalarExpr ScalarExpr::sin(const std::array<double, kMaxDim>& k, double phase) {
    Term t;
    t.coeff = 1.0;
    t.waves.push_back({Sinusoid::Kind::sin, k, phase});
    return ScalarExpr({t});
}

ScalarExpr ScalarExpr::cos(const std::array<double, kMaxDim>& k, double phase) {
    Term t;
    t.coeff = 1.0;
    t.waves.push_back({Sinusoid::Kind::cos, k, phase});
    return ScalarExpr({t});
}

double ScalarExpr::eval(const Point& x) const noexcept {
    double sum = 0.0;
    for (const auto& t : terms_) {
        double v = t.coeff;
        for (int mu = 0; mu < kMaxDim; ++mu) v *= integer_power(x[mu], t.powers[mu]);
        for (const auto& w : t.waves) {
            const double arg = w.argument(x);
            v *= w.kind == Sinusoid::Kind::sin ? std::sin(arg) : std::cos(arg);
        }
        sum += v;
    }
    return sum;
}

ScalarExpr ScalarExpr::partial(int mu) const {
    if (mu < 0 || mu >= kMaxDim) throw std::out_of_range("partial: index out of range");
    std::vector<Term> out;
    for (const auto& t : terms_) {
        if (t.powers[mu] > 0) {
            Term d = t;
            d.coeff *= t.powers[mu];
            d.powers[mu] -= 1;
            out.push_back(std::move(d));
        }
        for (std::size_t w = 0; w < t.waves.size(); ++w) {
            const auto& wave = t.waves[w];
            if (!wave.depends_on(mu)) continue;
            Term d = t;
            if (wave.kind == Sinusoid::Kind::sin) {
                d.coeff *= wave.k[mu];
                d.waves[w].kind = Sinusoid::Kind::cos;
            } else {
                d.coeff *= -wave.k[mu];
                d.waves[w].kind = Sinusoid::Kind::sin;
            }
            out.push_back(std::move(d));
        }
    }
    return ScalarExpr(std::move(out));
}

ScalarExpr ScalarExpr::time_antiderivative() const {
    std::vector<Term> out;
    for (const auto& t : terms_) {
        std::vector<std::size_t> timelike;
        for (std::size_t w = 0; w < t.waves.size(); ++w)
            if (t.waves[w].depends_on(0)) timelike.push_back(w);

        if (timelike.empty()) {
            if (t.powers[0] > 3) throw UnsupportedIntegrand("time_antiderivative: x0 degree above 3");
            Term g = t;
            g.powers[0] += 1;
            g.coeff /= g.powers[0];
            out.push_back(std::move(g));
            continue;
        }
        if (timelike.size() > 1 || t.powers[0] != 0) {
            throw UnsupportedIntegrand("time_antiderivative: integrand " + ScalarExpr({t}).to_string() +
                                       " is outside the supported grammar");
        }
        // int sin(k0 x0 + r) = (cos(r) - cos(k0 x0 + r)) / k0
        // int cos(k0 x0 + r) = (sin(k0 x0 + r) - sin(r)) / k0
        const Sinusoid wave = t.waves[timelike.front()];
        const double k0 = wave.k[0];
        Sinusoid at_origin = wave;
        at_origin.k[0] = 0.0;
        const bool is_sin = wave.kind == Sinusoid::Kind::sin;
        const auto swapped = is_sin ? Sinusoid::Kind::cos : Sinusoid::Kind::sin;

        Term moving = t;
        moving.waves[timelike.front()].kind = swapped;
        moving.coeff = (is_sin ? -t.coeff : t.coeff) / k0;
        Term fixed = t;
        fixed.waves[timelike.front()] = at_origin;
        fixed.waves[timelike.front()].kind = swapped;
        fixed.coeff = -moving.coeff;
        out.push_back(std::move(moving));
        out.push_back(std::move(fixed));
    }
    return ScalarExpr(std::move(out));
}

bool ScalarExpr::is_constant() const noexcept {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].waves.empty() && terms_[0].powers == std::array<int, kMaxDim>{});
}

bool ScalarExpr::depends_on(int mu) const noexcept {
    for (const auto& t : terms_) {
        if (t.powers[mu] > 0) return true;
        for (const auto& w : t.waves)
            if (w.depends_on(mu)) return true;
    }
    return false;
}

bool ScalarExpr::is_spatially_periodic(int D, double length) const {
    for (const auto& t : terms_) {
        for (int i = 1; i < D; ++i) {
            if (t.powers[i] != 0) return false;
            for (const auto& w : t.waves) {
                const double cycles = w.k[i] * length / (2.0 * std::numbers::pi);
                if (std::abs(cycles - std::round(cycles)) > 1e-9) return false;
            }
        }
    }
    return true;
}

std::string ScalarExpr::to_string() const {
    if (terms_.empty()) return "0";
    auto wave_text = [](const Sinusoid& w) {
        std::vector<std::string> parts;
        for (int mu = 0; mu < kMaxDim; ++mu) {
            if (w.k[mu] == 0.0) continue;
            parts.push_back("(* " + format_number(w.k[mu]) + " x" + std::to_string(mu) + ")");
        }
        if (w.phase != 0.0 || parts.empty()) parts.push_back(format_number(w.phase));
        std::string arg;
        if (parts.size() == 1) {
            arg = parts.front();
        } else {
            arg = "(+";
            for (const auto& p : parts) arg += " " + p;
            arg += ")";
        }
        return std::string(w.kind == Sinusoid::Kind::sin ? "(sin " : "(cos ") + arg + ")";
    };
    auto term_text = [&](const Term& t) {
        std::vector<std::string> factors;
        for (int mu = 0; mu < kMaxDim; ++mu) {
            // pow is limited to exponent 3 in the text grammar; higher degrees are split
            for (int left = t.powers[mu]; left > 0; left -= 3) {
                const int n = std::min(left, 3);
                const std::string x = "x" + std::to_string(mu);
                factors.push_back(n == 1 ? x : "(pow " + x + " " + std::to_string(n) + ")");
            }
        }
        for (const auto& w : t.waves) factors.push_back(wave_text(w));
        if (factors.empty()) return format_number(t.coeff);
        if (t.coeff != 1.0) factors.insert(factors.begin(), format_number(t.coeff));
        if (factors.size() == 1) return factors.front();
        std::string s = "(*";
        for (const auto& f : factors) s += " " + f;
        return s + ")";
    };
    if (terms_.size() == 1) return term_text(terms_.front());
    std::string s = "(+";
    for (const auto& t : terms_) s += " " + term_text(t);
    return s + ")";
}

ScalarExpr& ScalarExpr::operator+=(const ScalarExpr& other) {
    terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
    normalize();
    return *this;
}

ScalarExpr& ScalarExpr::operator-=(const ScalarExpr& other) { return *this += -other; }

ScalarExpr& ScalarExpr::operator*=(double s) {
    if (s == 0.0) {
        terms_.clear();
        return *this;
    }
    for (auto& t : terms_) t.coeff *= s;
    return *this;
}

ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b) {
    std::vector<Term> out;
    out.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& ta : a.terms_) {
        for (const auto& tb : b.terms_) {
            Term t;
            t.coeff = ta.coeff * tb.coeff;
            for (int mu = 0; mu < kMaxDim; ++mu) t.powers[mu] = ta.powers[mu] + tb.powers[mu];
            t.waves = ta.waves;
            t.waves.insert(t.waves.end(), tb.waves.begin(), tb.waves.end());
            out.push_back(std::move(t));
        }
    }
    return ScalarExpr(std::move(out));
}

bool ScalarExpr::operator==(const ScalarExpr& other) const {
    if (terms_.size() != other.terms_.size()) return false;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (terms_[i].coeff != other.terms_[i].coeff || !terms_[i].same_factors(other.terms_[i])) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// parser

namespace {

class Parser {
public:
    Parser(std::string_view text, const ParamMap& params) : text_(text), params_(params) {}

    ScalarExpr parse_all() {
        ScalarExpr e = parse();
        skip_space();
        if (pos_ != text_.size()) fail("trailing characters");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("expression parse error at offset " + std::to_string(pos_) + ": " + msg + " in '" +
                         std::string(text_) + "'");
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    std::string atom() {
        skip_space();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) && text_[pos_] != '(' &&
               text_[pos_] != ')')
            ++pos_;
        if (start == pos_) fail("expected a token");
        return std::string(text_.substr(start, pos_ - start));
    }

    ScalarExpr parse() {
        skip_space();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        if (text_[pos_] == ')') fail("unexpected ')'");
        if (text_[pos_] != '(') return leaf(atom());

        ++pos_;
        const std::string op = atom();
        std::vector<ScalarExpr> args;
        for (;;) {
            skip_space();
            if (pos_ >= text_.size()) fail("missing ')'");
            if (text_[pos_] == ')') {
                ++pos_;
                break;
            }
            args.push_back(parse());
        }
        return apply(op, std::move(args));
    }

    ScalarExpr leaf(const std::string& tok) {
        if (tok == "t") return ScalarExpr::coord(0);
        if (tok.size() == 2 && tok[0] == 'x' && tok[1] >= '0' && tok[1] <= '3') return ScalarExpr::coord(tok[1] - '0');
        if (tok == "pi") return ScalarExpr::constant(std::numbers::pi);
        if (auto it = params_.find(tok); it != params_.end()) return ScalarExpr::constant(it->second);
        char* end = nullptr;
        const double v = std::strtod(tok.c_str(), &end);
        if (end != tok.c_str() + tok.size() || !std::isfinite(v)) fail("unknown symbol '" + tok + "'");
        return ScalarExpr::constant(v);
    }

    double constant_of(const ScalarExpr& e, const std::string& what) const {
        if (!e.is_constant()) fail(what + " must be a constant");
        return e.is_zero() ? 0.0 : e.terms().front().coeff;
    }

    Sinusoid affine_wave(const ScalarExpr& arg, Sinusoid::Kind kind) const {
        Sinusoid w;
        w.kind = kind;
        for (const auto& t : arg.terms()) {
            int degree = 0;
            int axis = -1;
            for (int mu = 0; mu < kMaxDim; ++mu) {
                degree += t.powers[mu];
                if (t.powers[mu] == 1) axis = mu;
            }
            if (!t.waves.empty() || degree > 1) fail("sin/cos argument must be affine in the coordinates");
            if (degree == 0) {
                w.phase += t.coeff;
            } else {
                w.k[axis] += t.coeff;
            }
        }
        return w;
    }

    ScalarExpr apply(const std::string& op, std::vector<ScalarExpr> args) {
        auto need = [&](std::size_t lo, std::size_t hi) {
            if (args.size() < lo || args.size() > hi) fail("wrong number of arguments to '" + op + "'");
        };
        if (op == "+") {
            ScalarExpr sum;
            for (const auto& a : args) sum += a;
            return sum;
        }
        if (op == "*") {
            need(1, 64);
            ScalarExpr prod = args.front();
            for (std::size_t i = 1; i < args.size(); ++i) prod = prod * args[i];
            return prod;
        }
        if (op == "neg") {
            need(1, 1);
            return -args.front();
        }
        if (op == "-") {
            need(1, 64);
            if (args.size() == 1) return -args.front();
            ScalarExpr diff = args.front();
            for (std::size_t i = 1; i < args.size(); ++i) diff -= args[i];
            return diff;
        }
        if (op == "/") {
            need(2, 2);
            const double d = constant_of(args[1], "divisor");
            if (d == 0.0) fail("division by zero");
            return args[0] * (1.0 / d);
        }
        if (op == "pow") {
            need(2, 2);
            const double n = constant_of(args[1], "exponent");
            if (n != std::floor(n) || n < 0 || n > 3) fail("exponent must be an integer in [0, 3]");
            ScalarExpr r = ScalarExpr::constant(1.0);
            for (int i = 0; i < static_cast<int>(n); ++i) r = r * args[0];
            return r;
        }
        if (op == "sin" || op == "cos") {
            need(1, 1);
            const Sinusoid w = affine_wave(args.front(), op == "sin" ? Sinusoid::Kind::sin : Sinusoid::Kind::cos);
            return op == "sin" ? ScalarExpr::sin(w.k, w.phase) : ScalarExpr::cos(w.k, w.phase);
        }
        fail("unknown operator '" + op + "'");
    }

    std::string_view text_;
    const ParamMap& params_;
    std::size_t pos_ = 0;
};

}  // namespace

ScalarExpr parse_expr(std::string_view text, const ParamMap& params) { return Parser(text, params).parse_all(); }

}  // namespace dwhj
