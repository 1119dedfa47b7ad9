#include "rtpg/cost_function.h"

#include <algorithm>

using namespace std;

namespace mtplan {

bool CostFunction::update(double time, double cost, int supporter) {
    if (cost >= cost_at(time))
        return false;
    auto it = lower_bound(points_.begin(), points_.end(), time,
                          [](const CostPoint &p, double t) { return p.time < t; });
    if (it != points_.end() && it->time == time) {
        it->cost = cost;
        it->supporter = supporter;
    } else {
        it = points_.insert(it, {time, cost, supporter});
    }
    // drop later breakpoints this one dominates
    auto tail = it + 1;
    auto keep = tail;
    for (auto p = tail; p != points_.end(); ++p)
        if (p->cost < cost)
            *keep++ = *p;
    points_.erase(keep, points_.end());
    return true;
}

double CostFunction::cost_at(double time) const {
    auto it = upper_bound(points_.begin(), points_.end(), time,
                          [](double t, const CostPoint &p) { return t < p.time; });
    if (it == points_.begin())
        return INF;
    return prev(it)->cost;
}

int CostFunction::supporter_at(double time) const {
    auto it = upper_bound(points_.begin(), points_.end(), time,
                          [](double t, const CostPoint &p) { return t < p.time; });
    if (it == points_.begin())
        return -1;
    return prev(it)->supporter;
}

double CostFunction::stable_cost() const {
    return points_.empty() ? INF : points_.back().cost;
}

double CostFunction::earliest() const {
    return points_.empty() ? INF : points_.front().time;
}

} // namespace mtplan
