#pragma once

#include <span>
#include <string>
#include <vector>

namespace dwhj {

struct ConvergenceLevel {
    int N = 0;
    double h = 0.0;
    double dt = 0.0;
    double error = 0.0;
};

struct ConvergenceResult {
    std::string check;
    std::vector<ConvergenceLevel> levels;
    /// log2(e_k / e_{k+1}) between consecutive levels that are both above the floor.
    std::vector<double> orders;
    double floor = 0.0;
    double min_order = 2.0 - 0.2;
    double max_order = 2.0 + 0.2;
    bool below_floor = false;
    bool pass = false;
};

/// Measured orders for a halving sequence. Passes when every level is below
/// the floor, or when every measured order lies in [min_order, max_order].
/// With max_order infinite this is a lower-bound test.
ConvergenceResult assess_convergence(std::string check, std::vector<ConvergenceLevel> levels, double floor,
                                     double min_order = 1.8, double max_order = 2.2);

}  // namespace dwhj
