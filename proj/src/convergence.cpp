#include "dwhj/convergence.hpp"

#include <cmath>

namespace dwhj {

ConvergenceResult assess_convergence(std::string check, std::vector<ConvergenceLevel> levels, double floor,
                                     double min_order, double max_order) {
    ConvergenceResult r;
    r.check = std::move(check);
    r.levels = std::move(levels);
    r.floor = floor;
    r.min_order = min_order;
    r.max_order = max_order;

    r.below_floor = true;
    for (const auto& l : r.levels)
        if (l.error > floor) r.below_floor = false;
    if (r.below_floor) {
        r.pass = true;
        return r;
    }
    for (std::size_t k = 0; k + 1 < r.levels.size(); ++k) {
        const double a = r.levels[k].error;
        const double b = r.levels[k + 1].error;
        if (a > floor && b > floor) r.orders.push_back(std::log2(a / b));
    }
    r.pass = !r.orders.empty();
    for (double p : r.orders)
        if (!(p >= min_order && p <= max_order)) r.pass = false;
    return r;
}

}  // namespace dwhj
