#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dwhj/eikonal.hpp"
#include "dwhj/expr.hpp"
#include "dwhj/fields.hpp"

namespace dwhj {

enum class AnsatzKind { zero, constant_e, plane_wave, inline_expr };
enum class ConfigKind { embedded, zero, csv, inline_expr };

/// Everything a CLI run needs. Parsed from a key/value + block text file:
///
///     # comment
///     D = 4
///     N = 16
///     h = 0.1
///     ansatz = plane-wave a=0.1 m=1
///     config = embedded
///     param k = 2.5
///     [f]
///     0 1 = (neg k)
///
/// Blocks `[g]`, `[f]`, `[Q]` hold inline ansatz coefficients keyed by index
/// tuples; `[config]` holds inline A_mu expressions keyed by mu.
struct Scenario {
    int D = 4;
    int N = 16;
    double h = 0.1;
    double t = 0.3;
    std::uint64_t seed = 1;

    AnsatzKind ansatz = AnsatzKind::zero;
    double E = 1.0;
    double amplitude = 0.1;
    int m1 = 1;
    int m2 = 0;
    std::map<int, std::string> g_text;
    std::map<std::pair<int, int>, std::string> f_text;
    std::map<std::array<int, 3>, std::string> Q_text;

    ConfigKind config = ConfigKind::embedded;
    std::filesystem::path csv_path;
    std::map<int, std::string> config_text;
    double perturb = 0.0;
    std::string a0 = "0";

    double dt = 0.0;  // 0: derived as 0.2 h
    int steps = 20;
    std::string gauge = "0";
    bool a0_term = true;
    int levels = 3;
    std::string check = "gauss";
    int samples = 100;

    ParamMap params;

    Lattice lattice() const { return Lattice(D, N, h); }
    double time_step() const { return dt > 0.0 ? dt : 0.2 * h; }
    /// Copy refined by 2^level: N * 2^k, h / 2^k, dt / 2^k, steps * 2^k.
    Scenario refined(int level) const;
    /// Parameters visible to expressions: user params plus L, h, N.
    ParamMap expression_params() const;
    std::string ansatz_label() const;
    std::string config_label() const;
};

/// Throws ParseError with a line number on malformed input.
Scenario parse_scenario(std::istream& is, const std::filesystem::path& base_dir = {});
Scenario load_scenario(const std::filesystem::path& path);

/// Parses `constant-e E=1`, `plane-wave a=0.1 m=1`, `zero`, `inline`.
void apply_ansatz_spec(Scenario& sc, const std::string& spec);

/// Analytic source for builtin ansatze (nullopt for inline).
std::optional<SpacetimeSolution> source_solution(const Scenario& sc);
EikonalAnsatz make_ansatz(const Scenario& sc);
FieldConfiguration make_configuration(const Scenario& sc, const EikonalAnsatz& ans);

}  // namespace dwhj
