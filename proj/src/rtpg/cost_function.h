#pragma once

#include "model/problem.h"

#include <vector>

namespace mtplan {

// One breakpoint of a piecewise-constant, non-increasing cost estimate:
// "achievable with cost `cost` from time `time` on, via `supporter`".
struct CostPoint {
    double time = 0.0;
    double cost = INF;
    int supporter = -1; // achieving action id, -1 for the initial state
};

// Piecewise-constant cost-over-time curve. Breakpoints are kept sorted by
// time with strictly decreasing costs; the value before the first breakpoint
// is +inf. Updates are accepted only if they strictly improve the curve at
// their time, and they drop any later breakpoints they dominate.
class CostFunction {
public:
    // Returns true if the curve changed.
    bool update(double time, double cost, int supporter);

    // Value at `time` (+inf before the first breakpoint).
    double cost_at(double time) const;

    // Supporter of the breakpoint governing `time` (-1 if none).
    int supporter_at(double time) const;

    // Final (cheapest) cost, +inf if the curve is empty.
    double stable_cost() const;

    // Time of the first breakpoint, +inf if the curve is empty.
    double earliest() const;

    bool empty() const { return points_.empty(); }
    const std::vector<CostPoint> &breakpoints() const { return points_; }

private:
    std::vector<CostPoint> points_;
};

} // namespace mtplan
