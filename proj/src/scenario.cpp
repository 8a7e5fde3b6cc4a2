#include "dwhj/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "dwhj/errors.hpp"

namespace dwhj {

namespace {

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<int> parse_indices(const std::string& key, int line) {
    std::istringstream ss(key);
    std::vector<int> out;
    std::string tok;
    while (ss >> tok) {
        try {
            std::size_t used = 0;
            const int v = std::stoi(tok, &used);
            if (used != tok.size() || v < 0 || v >= kMaxDim) throw std::invalid_argument(tok);
            out.push_back(v);
        } catch (const std::exception&) {
            throw ParseError("scenario line " + std::to_string(line) + ": bad index '" + tok + "'");
        }
    }
    return out;
}

double to_double(const std::string& v, const std::string& what) {
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size() || !std::isfinite(d)) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ParseError("scenario: " + what + " must be a finite number, got '" + v + "'");
    }
}

long long to_integer(const std::string& v, const std::string& what) {
    try {
        std::size_t used = 0;
        const long long d = std::stoll(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ParseError("scenario: " + what + " must be an integer, got '" + v + "'");
    }
}

bool to_bool(const std::string& v, const std::string& what) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ParseError("scenario: " + what + " must be true/false, got '" + v + "'");
}

std::string format_g(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace

Scenario Scenario::refined(int level) const {
    Scenario s = *this;
    const int scale = 1 << level;
    s.N = N * scale;
    s.h = h / scale;
    s.dt = time_step() / scale;
    s.steps = steps * scale;
    return s;
}

ParamMap Scenario::expression_params() const {
    ParamMap p{{"L", N * h}, {"h", h}, {"N", static_cast<double>(N)}};
    for (const auto& [k, v] : params) p[k] = v;
    return p;
}

std::string Scenario::ansatz_label() const {
    switch (ansatz) {
        case AnsatzKind::zero: return "zero";
        case AnsatzKind::constant_e: return "constant-e E=" + format_g(E);
        case AnsatzKind::plane_wave:
            return "plane-wave a=" + format_g(amplitude) + " m=" + std::to_string(m1) +
                   (m2 != 0 ? " m2=" + std::to_string(m2) : std::string{});
        case AnsatzKind::inline_expr: return "inline";
    }
    return "?";
}

std::string Scenario::config_label() const {
    std::string s;
    switch (config) {
        case ConfigKind::embedded: s = "embedded"; break;
        case ConfigKind::zero: s = "zero"; break;
        case ConfigKind::csv: s = "csv:" + csv_path.filename().string(); break;
        case ConfigKind::inline_expr: s = "inline"; break;
    }
    if (perturb != 0.0) s += " perturb=" + format_g(perturb);
    if (a0 != "0") s += " a0=" + a0;
    return s;
}

void apply_ansatz_spec(Scenario& sc, const std::string& spec) {
    std::istringstream ss(spec);
    std::string name;
    ss >> name;
    if (name == "zero") {
        sc.ansatz = AnsatzKind::zero;
    } else if (name == "constant-e") {
        sc.ansatz = AnsatzKind::constant_e;
    } else if (name == "plane-wave") {
        sc.ansatz = AnsatzKind::plane_wave;
    } else if (name == "inline") {
        sc.ansatz = AnsatzKind::inline_expr;
    } else {
        throw ParseError("scenario: unknown ansatz '" + name + "' (zero | constant-e | plane-wave | inline)");
    }
    std::string kv;
    while (ss >> kv) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ParseError("scenario: ansatz option '" + kv + "' is not key=value");
        const std::string key = kv.substr(0, eq);
        const std::string value = kv.substr(eq + 1);
        if (key == "E") {
            sc.E = to_double(value, "E");
        } else if (key == "a") {
            sc.amplitude = to_double(value, "a");
        } else if (key == "m") {
            sc.m1 = static_cast<int>(to_integer(value, "m"));
        } else if (key == "m2") {
            sc.m2 = static_cast<int>(to_integer(value, "m2"));
        } else {
            throw ParseError("scenario: unknown ansatz option '" + key + "'");
        }
    }
}

Scenario parse_scenario(std::istream& is, const std::filesystem::path& base_dir) {
    Scenario sc;
    std::string section;
    std::string raw;
    int line_no = 0;
    while (std::getline(is, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        auto fail = [&](const std::string& msg) -> ParseError {
            return ParseError("scenario line " + std::to_string(line_no) + ": " + msg);
        };
        if (line.front() == '[') {
            if (line.back() != ']') throw fail("unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "g" && section != "f" && section != "Q" && section != "config")
                throw fail("unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw fail("expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (value.empty()) throw fail("empty value for '" + key + "'");

        if (!section.empty()) {
            const auto idx = parse_indices(key, line_no);
            if (section == "g" || section == "config") {
                if (idx.size() != 1) throw fail("[" + section + "] keys take one index");
                (section == "g" ? sc.g_text : sc.config_text)[idx[0]] = value;
            } else if (section == "f") {
                if (idx.size() != 2) throw fail("[f] keys take two indices");
                sc.f_text[{idx[0], idx[1]}] = value;
            } else {
                if (idx.size() != 3) throw fail("[Q] keys take three indices");
                sc.Q_text[{idx[0], idx[1], idx[2]}] = value;
            }
            continue;
        }

        try {
            if (key.rfind("param ", 0) == 0) {
                const std::string name = trim(key.substr(6));
                if (name.empty()) throw fail("param needs a name");
                sc.params[name] = to_double(value, "param " + name);
            } else if (key == "D") {
                sc.D = static_cast<int>(to_integer(value, key));
                if (sc.D < 2 || sc.D > kMaxDim) throw fail("D must be in [2, 4]");
            } else if (key == "N") {
                sc.N = static_cast<int>(to_integer(value, key));
            } else if (key == "h") {
                sc.h = to_double(value, key);
            } else if (key == "t") {
                sc.t = to_double(value, key);
            } else if (key == "seed") {
                sc.seed = static_cast<std::uint64_t>(std::stoull(value));
            } else if (key == "ansatz") {
                apply_ansatz_spec(sc, value);
            } else if (key == "config") {
                if (value == "embedded") {
                    sc.config = ConfigKind::embedded;
                } else if (value == "zero") {
                    sc.config = ConfigKind::zero;
                } else if (value == "inline") {
                    sc.config = ConfigKind::inline_expr;
                } else if (value.rfind("csv:", 0) == 0) {
                    sc.config = ConfigKind::csv;
                    std::filesystem::path p = trim(value.substr(4));
                    sc.csv_path = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
                } else {
                    throw fail("config must be embedded | zero | inline | csv:<path>");
                }
            } else if (key == "perturb") {
                sc.perturb = to_double(value, key);
            } else if (key == "a0") {
                sc.a0 = value;
            } else if (key == "dt") {
                sc.dt = to_double(value, key);
            } else if (key == "steps") {
                sc.steps = static_cast<int>(to_integer(value, key));
            } else if (key == "gauge") {
                sc.gauge = value;
            } else if (key == "a0_term") {
                sc.a0_term = to_bool(value, key);
            } else if (key == "levels") {
                sc.levels = static_cast<int>(to_integer(value, key));
            } else if (key == "check") {
                sc.check = value;
            } else if (key == "samples") {
                sc.samples = static_cast<int>(to_integer(value, key));
            } else {
                throw fail("unknown key '" + key + "'");
            }
        } catch (const ParseError& e) {
            const std::string what = e.what();
            if (what.rfind("scenario line", 0) == 0) throw;
            throw fail(what);
        } catch (const std::exception&) {
            throw fail("bad value for '" + key + "'");
        }
    }

    check_dimension(sc.D);
    if (sc.N < 4) throw ParseError("scenario: N must be >= 4");
    if (!(sc.h > 0.0)) throw ParseError("scenario: h must be positive");
    if (sc.steps < 0) throw ParseError("scenario: steps must be >= 0");
    if (sc.levels < 3) throw ParseError("scenario: levels must be >= 3");
    if (sc.samples < 1) throw ParseError("scenario: samples must be >= 1");
    return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open scenario file '" + path.string() + "'");
    return parse_scenario(in, path.parent_path());
}

std::optional<SpacetimeSolution> source_solution(const Scenario& sc) {
    switch (sc.ansatz) {
        case AnsatzKind::zero: return zero_solution(sc.D);
        case AnsatzKind::constant_e: return constant_electric(sc.D, sc.E);
        case AnsatzKind::plane_wave: return plane_wave(sc.D, sc.amplitude, sc.m1, sc.N * sc.h, sc.m2);
        case AnsatzKind::inline_expr: return std::nullopt;
    }
    return std::nullopt;
}

EikonalAnsatz make_ansatz(const Scenario& sc) {
    if (sc.ansatz == AnsatzKind::zero) return zero_ansatz(sc.D);
    if (auto src = source_solution(sc)) return build_linear_solution(*src);

    const ParamMap params = sc.expression_params();
    auto in_range = [&](int i) {
        if (i >= sc.D) throw ParseError("scenario: ansatz index " + std::to_string(i) + " out of range for D");
        return i;
    };
    ExprVector g;
    ExprMatrix f;
    for (const auto& [mu, text] : sc.g_text) g[in_range(mu)] = parse_expr(text, params);
    for (const auto& [key, text] : sc.f_text) f[in_range(key.first)][in_range(key.second)] = parse_expr(text, params);
    std::optional<ExprCube> Q;
    if (!sc.Q_text.empty()) {
        Q.emplace();
        for (const auto& [key, text] : sc.Q_text) {
            const ScalarExpr e = parse_expr(text, params);
            (*Q)[in_range(key[0])][in_range(key[1])][in_range(key[2])] = e;
            (*Q)[key[0]][key[2]][key[1]] = e;  // symmetric in the last two labels
        }
    }
    return EikonalAnsatz(sc.D, g, f, Q);
}

FieldConfiguration make_configuration(const Scenario& sc, const EikonalAnsatz& ans) {
    (void)ans;
    const Lattice lat = sc.lattice();
    const ParamMap params = sc.expression_params();
    FieldConfiguration config(lat, sc.t);
    switch (sc.config) {
        case ConfigKind::embedded: {
            const auto src = source_solution(sc);
            if (!src) throw ParseError("scenario: config = embedded needs a builtin ansatz; use [config] for inline");
            config = sample(*src, lat, sc.t);
            break;
        }
        case ConfigKind::zero: break;
        case ConfigKind::csv: {
            std::ifstream in(sc.csv_path);
            if (!in) throw ParseError("cannot open configuration CSV '" + sc.csv_path.string() + "'");
            config = read_csv(in, lat, sc.t);
            break;
        }
        case ConfigKind::inline_expr: {
            SpacetimeSolution sol(sc.D);
            for (const auto& [mu, text] : sc.config_text) {
                if (mu >= sc.D) throw ParseError("scenario: [config] index out of range for D");
                sol.A[mu] = parse_expr(text, params);
            }
            config = sample(sol, lat, sc.t);
            break;
        }
    }

    const ScalarExpr a0 = parse_expr(sc.a0, params);
    if (!a0.is_zero()) {
        for (std::size_t s = 0; s < lat.sites(); ++s) config.A[s][0] += a0.eval(lat.point(s, sc.t));
        if (!a0.is_spatially_periodic(sc.D, lat.length())) config.periodic = false;
    }
    if (sc.perturb != 0.0) {
        if (sc.D < 3) throw ParseError("scenario: a magnetic perturbation needs D >= 3");
        const double kappa = 2.0 * std::numbers::pi / lat.length();
        for (std::size_t s = 0; s < lat.sites(); ++s)
            config.A[s][2] += sc.perturb * std::sin(kappa * lat.point(s, sc.t)[1]);
    }
    return config;
}

}  // namespace dwhj
