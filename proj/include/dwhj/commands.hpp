#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "dwhj/scenario.hpp"

namespace dwhj {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

struct CommandResult {
    int exit_code = 0;
    Json json;
    std::string table;
};

struct EvolveOptions {
    /// Directory for per-step configuration CSVs; empty disables output.
    std::filesystem::path trajectory_dir;
    int stride = 1;
};

/// Samples ddw_residual and constraint_residual at every lattice site and at
/// `samples` random (A, x), all with seeded random A.
CommandResult cmd_verify_ddw(const Scenario& sc);
/// Full audit on the scenario slice, plus a refinement study of the
/// lattice-class steps when the configuration can be rebuilt on finer lattices.
CommandResult cmd_audit(const Scenario& sc);
/// Characteristics evolution against the FDTD reference from the same data.
CommandResult cmd_evolve(const Scenario& sc, const EvolveOptions& opts = {});
/// Order study of `sc.check` over `sc.levels` halvings.
CommandResult cmd_convergence(const Scenario& sc);
/// verify-ddw, audit, evolve (when applicable) and convergence in one report.
CommandResult cmd_report(const Scenario& sc);

/// `{equation, lhs, rhs, abs_err, rel_err, lattice:{D,N,h}, t}`
Json residual_record(const std::string& equation, double lhs, double rhs, const Lattice& lat, double t);

/// Uniform in [0, 1) from the top 53 bits; identical on every platform.
double uniform01(std::uint64_t bits);

}  // namespace dwhj
