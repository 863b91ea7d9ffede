#pragma once

#include <vector>

#include "swarmlead/types.hpp"

namespace swarmlead {

struct OrderParameters {
    long step{0};
    double polarization{0.0};   // |sum_i v_i/|v_i|| / N
    double heading{0.0};        // angle of the summed unit headings, radians in (-pi, pi]
    double group_radius{0.0};   // max distance from the centroid
    Vec2 centroid;
};

OrderParameters order_parameters(const SwarmSnapshot& snapshot);

/// Smallest absolute angle between two headings, radians in [0, pi].
double angle_between(double a, double b);

} // namespace swarmlead
