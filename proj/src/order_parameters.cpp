#include "swarmlead/order_parameters.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace swarmlead {

OrderParameters order_parameters(const SwarmSnapshot& snapshot) {
    OrderParameters op;
    op.step = snapshot.step;
    if (snapshot.agents.empty()) return op;

    const auto n = static_cast<double>(snapshot.size());
    Vec2 heading_sum;
    Vec2 centroid;
    for (const auto& a : snapshot.agents) {
        heading_sum += a.vel.normalized();
        centroid += a.pos;
    }
    centroid = centroid / n;

    op.polarization = std::min(1.0, heading_sum.norm() / n);
    op.heading = std::atan2(heading_sum.y, heading_sum.x);
    op.centroid = centroid;
    for (const auto& a : snapshot.agents)
        op.group_radius = std::max(op.group_radius, (a.pos - centroid).norm());
    return op;
}

double angle_between(double a, double b) {
    double d = std::fmod(std::abs(a - b), 2.0 * std::numbers::pi);
    return d > std::numbers::pi ? 2.0 * std::numbers::pi - d : d;
}

} // namespace swarmlead
