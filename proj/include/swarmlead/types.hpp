#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "swarmlead/vec2.hpp"

namespace swarmlead {

enum class Role { Follower, Leader };

std::string_view to_string(Role role);
/// Parses "F"/"L" or "follower"/"leader"; throws ParseError otherwise.
Role parse_role(std::string_view text);

struct AgentState {
    std::size_t id{0};
    Vec2 pos;
    Vec2 vel;
    Role role{Role::Follower};

    bool operator==(const AgentState&) const = default;
};

/// Model constants. Lengths and times are dimensionless; the sigmas and dt
/// set the scales.
struct SwarmParams {
    double sigma1{0.5};         // repulsion zone width
    double sigma2{1.0};         // orientation zone width, also the density smoothing bandwidth
    double sigma3{2.0};         // attraction zone width
    double c_a{5.0};            // attraction weight
    double leader_decay{1.0};   // density scale over which the leader's goal weight decays
    Vec2 goal_dir{1.0, 0.0};    // unit preferred direction for leaders
    double dt{0.05};
    double relax_rate{2.0};     // gamma: relaxation rate toward the desired velocity
    double alpha{1.0};          // self-propulsion gain
    double beta{1.0};           // self-propulsion saturation
    double cutoff_radius{12.0}; // kernel truncation radius, 6 * sigma3 by default

    bool operator==(const SwarmParams&) const = default;

    /// Throws ConfigError if any invariant is violated.
    void validate() const;
};

struct SwarmSnapshot {
    long step{0};
    std::vector<AgentState> agents;

    std::size_t size() const noexcept { return agents.size(); }
    bool operator==(const SwarmSnapshot&) const = default;
};

/// Throws NumericalDivergence naming the first agent with a non-finite
/// position or velocity.
void check_finite(const SwarmSnapshot& snapshot);

} // namespace swarmlead
