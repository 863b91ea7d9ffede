#pragma once

#include <cstddef>

#include "swarmlead/types.hpp"

namespace swarmlead {

/// Blend coefficients of the covert-leader rule
///   v_ld = (1 - e^{-D/sigma}) v_lf + e^{-D/sigma} g
/// where D is the smoothed density at the leader's position.
struct LeaderBlend {
    double weight_goal{1.0};
    double weight_follow{0.0};
};

/// weight_goal = exp(-density / leader_decay), weight_follow = 1 - weight_goal.
LeaderBlend blend_for_density(double density, double leader_decay);

/// weight_follow * follow_velocity + weight_goal * goal.
Vec2 blend_velocity(const LeaderBlend& blend, Vec2 follow_velocity, Vec2 goal);

/// Throws RoleError if agent i is a follower, std::out_of_range on a bad index.
LeaderBlend leader_blend(std::size_t i, const SwarmSnapshot& snapshot, const SwarmParams& params);
Vec2 leader_desired_velocity(std::size_t i, const SwarmSnapshot& snapshot,
                             const SwarmParams& params);

} // namespace swarmlead
