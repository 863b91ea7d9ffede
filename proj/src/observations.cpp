#include "swarmlead/observations.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "swarmlead/neighbor_grid.hpp"

namespace swarmlead {

std::vector<Observation> extract_observations(const Trajectory& traj, int k,
                                              const PairSelector& selector) {
    if (k < 1) throw std::invalid_argument("history length k must be >= 1");
    if (!(selector.causal_radius > 0.0))
        throw std::invalid_argument("causal_radius must be positive");
    const std::size_t t_count = traj.snapshots.size();
    if (t_count < static_cast<std::size_t>(k) + 2)
        throw InsufficientHistory("trajectory has " + std::to_string(t_count) +
                                  " snapshots; k = " + std::to_string(k) + " needs at least " +
                                  std::to_string(k + 2));

    const std::size_t n_agents = traj.snapshots.front().size();
    for (const auto& s : traj.snapshots) {
        if (s.size() != n_agents)
            throw std::invalid_argument("agent count changes within the trajectory");
    }

    auto vel = [&](std::size_t t, std::size_t p) { return traj.snapshots[t].agents[p].vel; };

    std::vector<Observation> out;
    std::vector<Vec2> positions(n_agents);
    std::vector<std::size_t> sources;
    for (std::size_t t = static_cast<std::size_t>(k); t + 1 < t_count; ++t) {
        const SwarmSnapshot& snap = traj.snapshots[t];
        for (std::size_t p = 0; p < n_agents; ++p) positions[p] = snap.agents[p].pos;
        const NeighborGrid grid(positions, selector.causal_radius);

        for (std::size_t p = 0; p < n_agents; ++p) {
            const AgentState& dest = snap.agents[p];
            grid.query(dest.pos, selector.causal_radius, sources);

            Observation proto;
            proto.dest_id = dest.id;
            proto.step = snap.step;
            proto.dest_role = dest.role;
            proto.x_next = vel(t + 1, p) - vel(t, p);
            proto.x_hist.reserve(static_cast<std::size_t>(k));
            for (std::size_t h = 0; h < static_cast<std::size_t>(k); ++h)
                proto.x_hist.push_back(vel(t - h, p) - vel(t - h - 1, p));
            proto.w = dest.vel.norm();

            for (const std::size_t q : sources) {
                if (q == p) continue;
                const AgentState& src = snap.agents[q];
                Observation obs = proto;
                obs.src_id = src.id;
                const Vec2 ds = src.pos - dest.pos;
                const Vec2 dv = src.vel - dest.vel;
                obs.y = {ds.x, ds.y, dv.x, dv.y};
                out.push_back(std::move(obs));
            }
        }
    }
    return out;
}

void write_features(const Observation& obs, std::span<double> out) {
    if (out.size() != feature_count(obs.k()))
        throw std::invalid_argument("feature buffer has the wrong size");
    std::size_t d = 0;
    out[d++] = obs.x_next.x;
    out[d++] = obs.x_next.y;
    for (const Vec2& h : obs.x_hist) {
        out[d++] = h.x;
        out[d++] = h.y;
    }
    out[d++] = obs.w;
    for (const double v : obs.y) out[d++] = v;
}

} // namespace swarmlead
