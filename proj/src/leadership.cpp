#include "swarmlead/leadership.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "swarmlead/errors.hpp"
#include "swarmlead/kernels.hpp"

namespace swarmlead {

LeaderBlend blend_for_density(double density, double leader_decay) {
    LeaderBlend b;
    b.weight_goal = std::exp(-density / leader_decay);
    b.weight_follow = 1.0 - b.weight_goal;
    return b;
}

Vec2 blend_velocity(const LeaderBlend& blend, Vec2 follow_velocity, Vec2 goal) {
    return blend.weight_follow * follow_velocity + blend.weight_goal * goal;
}

namespace {

void require_leader(std::size_t i, const SwarmSnapshot& snapshot) {
    if (i >= snapshot.size())
        throw std::out_of_range("agent index " + std::to_string(i) + " out of range");
    if (snapshot.agents[i].role != Role::Leader)
        throw RoleError("agent " + std::to_string(i) + " is not a leader");
}

} // namespace

LeaderBlend leader_blend(std::size_t i, const SwarmSnapshot& snapshot, const SwarmParams& params) {
    require_leader(i, snapshot);
    const double density = smoothed_density(snapshot.agents[i].pos, snapshot, params);
    return blend_for_density(density, params.leader_decay);
}

Vec2 leader_desired_velocity(std::size_t i, const SwarmSnapshot& snapshot,
                             const SwarmParams& params) {
    const LeaderBlend blend = leader_blend(i, snapshot, params);
    return blend_velocity(blend, desired_velocity(i, snapshot, params), params.goal_dir);
}

} // namespace swarmlead
