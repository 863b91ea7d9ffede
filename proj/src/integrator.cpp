#include "swarmlead/integrator.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <utility>

#include "swarmlead/kernels.hpp"
#include "swarmlead/leadership.hpp"
#include "swarmlead/parallel.hpp"
#include "swarmlead/random.hpp"

namespace swarmlead {

SwarmSnapshot step(const SwarmSnapshot& snapshot, const SwarmParams& params, unsigned threads) {
    check_finite(snapshot);
    const InteractionField field(snapshot, params);
    const std::size_t n = snapshot.size();

    SwarmSnapshot next;
    next.step = snapshot.step + 1;
    next.agents.resize(n);

    parallel_for(n, threads, [&](std::size_t i) {
        const AgentState& a = snapshot.agents[i];
        const ZoneVelocities zones = field.evaluate(i);
        Vec2 desired = zones.desired(params.c_a);
        if (a.role == Role::Leader) {
            desired = blend_velocity(blend_for_density(zones.density, params.leader_decay), desired,
                                     params.goal_dir);
        }
        const double speed2 = a.vel.norm2();
        const Vec2 accel =
            params.relax_rate * (desired - a.vel) + (params.alpha - params.beta * speed2) * a.vel;

        AgentState& out = next.agents[i];
        out.id = a.id;
        out.role = a.role;
        out.vel = a.vel + params.dt * accel;
        out.pos = a.pos + params.dt * out.vel;
    });

    check_finite(next);
    return next;
}

SwarmSnapshot init_lattice(const LatticeParams& lattice, std::uint64_t seed) {
    if (lattice.n_side < 1) throw ConfigError("n_side must be >= 1");
    if (!(lattice.spacing > 0.0) || !std::isfinite(lattice.spacing))
        throw ConfigError("lattice spacing must be positive");
    if (!(lattice.speed > 0.0) || !std::isfinite(lattice.speed))
        throw ConfigError("initial speed must be positive");
    if (!(lattice.leader_fraction >= 0.0 && lattice.leader_fraction <= 1.0))
        throw ConfigError("leader_fraction must lie in [0, 1]");

    std::mt19937_64 rng(seed);
    const auto side = static_cast<std::size_t>(lattice.n_side);
    const std::size_t n = side * side;
    const double offset = 0.5 * static_cast<double>(side - 1);

    SwarmSnapshot snap;
    snap.step = 0;
    snap.agents.resize(n);
    for (std::size_t r = 0; r < side; ++r) {
        for (std::size_t c = 0; c < side; ++c) {
            const std::size_t id = r * side + c;
            const double heading = 2.0 * std::numbers::pi * uniform01(rng);
            AgentState& a = snap.agents[id];
            a.id = id;
            a.pos = {(static_cast<double>(c) - offset) * lattice.spacing,
                     (static_cast<double>(r) - offset) * lattice.spacing};
            a.vel = {lattice.speed * std::cos(heading), lattice.speed * std::sin(heading)};
        }
    }

    const auto n_leaders = static_cast<std::size_t>(std::lround(lattice.leader_fraction * static_cast<double>(n)));
    std::vector<std::size_t> ids(n);
    for (std::size_t i = 0; i < n; ++i) ids[i] = i;
    for (std::size_t i = 0; i < n_leaders; ++i) {
        std::swap(ids[i], ids[i + uniform_index(rng, n - i)]);
        snap.agents[ids[i]].role = Role::Leader;
    }
    return snap;
}

Trajectory run(const SwarmSnapshot& initial, const SwarmParams& params, long n_steps,
               std::uint64_t seed, unsigned threads) {
    if (n_steps < 0) throw ConfigError("n_steps must be >= 0");
    params.validate();

    Trajectory traj;
    traj.params = params;
    traj.seed = seed;
    traj.snapshots.reserve(static_cast<std::size_t>(n_steps) + 1);
    traj.snapshots.push_back(initial);
    for (long s = 0; s < n_steps; ++s) {
        try {
            traj.snapshots.push_back(step(traj.snapshots.back(), params, threads));
        } catch (const NumericalDivergence& e) {
            throw RunDiverged(e, std::move(traj));
        }
    }
    return traj;
}

Trajectory slice(const Trajectory& traj, long step_lo, long step_hi) {
    Trajectory out;
    out.params = traj.params;
    out.seed = traj.seed;
    for (const auto& s : traj.snapshots) {
        if (s.step < step_lo) continue;
        if (step_hi >= 0 && s.step > step_hi) break;
        out.snapshots.push_back(s);
    }
    return out;
}

} // namespace swarmlead
