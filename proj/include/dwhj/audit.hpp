#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "dwhj/convergence.hpp"
#include "dwhj/eikonal.hpp"
#include "dwhj/fields.hpp"
#include "dwhj/minkowski.hpp"

namespace dwhj {

/// Step-by-step numerical check of the passage from the DDW equation to the
/// canonical HJ equation and the Gauss law, on one ansatz + time slice.
namespace audit {

enum class ToleranceClass { pointwise, algebraic, lattice };
enum class Status { pass, fail, skip };

const char* to_string(ToleranceClass c);
const char* to_string(Status s);

struct Flags {
    bool ddw_ok = false;
    bool constraints_ok = false;
    bool embedding_ok = false;
    bool gauss_ok = false;
};

struct Record {
    std::string step_id;
    std::string equation;
    double lhs = 0.0;
    double rhs = 0.0;
    double abs_err = 0.0;
    double rel_err = 0.0;
    double tolerance = 0.0;
    /// Level below which a lattice-class error counts as exact.
    double floor = 0.0;
    ToleranceClass tolerance_class = ToleranceClass::algebraic;
    Status status = Status::fail;
    Flags flags;
    std::string note;
    std::vector<std::pair<std::string, double>> details;
};

struct Report {
    int D = 0;
    int N = 0;
    double h = 0.0;
    double t = 0.0;
    Flags flags;
    std::vector<Record> records;

    bool all_pass() const;
    const Record* find(const std::string& step_id) const;
};

/// Precondition flags for an ansatz on a configuration slice.
Flags evaluate_flags(const EikonalAnsatz& ans, const FieldConfiguration& config);

// Lattice-level checks. Each returns records carrying the flags passed in.

/// d_t S = h^(D-1) sum (-d_i S^i + 1/4 T^{0 nu} T_{0 nu} + 1/4 T^{i nu} T_{i nu}), all d at fixed A.
Record check_time_derivative(const EikonalAnsatz& ans, const FieldConfiguration& config, const Flags& flags);

/// Total divergence of S^i: (a) sum_x D_i[S^i(A(x), x)] telescopes to zero;
/// (b) sum_x (d_i S^i + (D_i A_mu) T^{i mu}) -> 0 at O(h^2).
std::vector<Record> check_total_divergence(const EikonalAnsatz& ans, const FieldConfiguration& config,
                                           const Flags& flags);

/// Per site: (D_i A_mu) T^{i mu} = -(D_i A_0) T^{0i} + (D_i A_j) T^{[ij]} under the constraints.
Record check_constraint_split(const EikonalAnsatz& ans, const FieldConfiguration& config, const Flags& flags);

/// sum (-(D_i A_0) T^{0i} + (D_i A_j) T^{[ij]}) = sum (A_0 D_i T^{0i} - 1/2 Fbar_ij Fbar^ij)
/// by periodic summation by parts and the embedding.
Record check_parts_and_embedding(const EikonalAnsatz& ans, const FieldConfiguration& config, const Flags& flags);

/// Pointwise: 1/4 T^{0 nu} T_{0 nu} = -1/4 sum_i (T^{0i})^2 given T^{00} = 0.
Record check_time_block(const EikonalAnsatz& ans, const Vec4& A, const Point& x);
/// Lattice sum of check_time_block.
Record check_time_block(const EikonalAnsatz& ans, const FieldConfiguration& config, const Flags& flags);

/// Pointwise: 1/4 T^{i nu} T_{i nu} = -1/4 sum (T^{0i})^2 + 1/4 Fbar^{ij} Fbar_{ij}
/// with Fbar the (spatial) field strength at x.
Record check_space_block(const EikonalAnsatz& ans, const Vec4& A, const Point& x, const Rank2& Fbar);
/// Lattice sum of check_space_block using the configuration's lattice F_ij.
Record check_space_block(const EikonalAnsatz& ans, const FieldConfiguration& config, const Flags& flags);

/// Final assembly: canonical HJ residual (with the A_0 term), the Gauss law
/// in HJ form, and the A_0 decoupling check.
std::vector<Record> check_canonical_assembly(const EikonalAnsatz& ans, const FieldConfiguration& config,
                                             const Flags& flags);

/// Every step on one slice.
Report run(const EikonalAnsatz& ans, const FieldConfiguration& config);

/// Lattice-class steps repeated on a refinement sequence (N, 2N, 4N, ...
/// with fixed physical length). `make` builds the ansatz and configuration
/// for each lattice.
using ScenarioFactory = std::function<std::pair<EikonalAnsatz, FieldConfiguration>(const Lattice&)>;
std::vector<ConvergenceResult> refinement_study(const ScenarioFactory& make, const Lattice& coarse, int levels);

}  // namespace audit
}  // namespace dwhj
