#pragma once

#include <cstdint>
#include <vector>

#include "swarmlead/errors.hpp"
#include "swarmlead/types.hpp"

namespace swarmlead {

/// Time-ordered swarm snapshots with the parameters and seed that produced them.
struct Trajectory {
    SwarmParams params;
    std::uint64_t seed{0};
    std::vector<SwarmSnapshot> snapshots;

    std::size_t size() const noexcept { return snapshots.size(); }
    bool operator==(const Trajectory&) const = default;
};

/// Advances every agent by one forward-Euler step:
///   v' = v + dt [gamma (v_d - v) + (alpha - beta |v|^2) v],   s' = s + dt v'
/// All desired velocities are computed from the input snapshot before any
/// agent is updated. Leaders use the covert-leader blend, followers the
/// three-zone response. The result does not depend on `threads`.
///
/// Throws NumericalDivergence if the input or the output holds a non-finite value.
SwarmSnapshot step(const SwarmSnapshot& snapshot, const SwarmParams& params,
                   unsigned threads = 1);

struct LatticeParams {
    int n_side{10};
    double spacing{1.0};
    double leader_fraction{0.15};
    double speed{1.0};
};

/// n_side x n_side square lattice centred on the origin with i.i.d. uniform
/// headings and round(leader_fraction * N) leaders drawn without replacement.
/// Bit-for-bit reproducible for a given seed.
SwarmSnapshot init_lattice(const LatticeParams& lattice, std::uint64_t seed);

/// Thrown by `run` when a step diverges; carries the snapshots computed so far.
class RunDiverged : public NumericalDivergence {
public:
    RunDiverged(const NumericalDivergence& cause, Trajectory partial)
        : NumericalDivergence(cause), partial_(std::move(partial)) {}
    const Trajectory& partial() const noexcept { return partial_; }

private:
    Trajectory partial_;
};

/// Repeated `step`; returns n_steps + 1 snapshots starting with `initial`.
Trajectory run(const SwarmSnapshot& initial, const SwarmParams& params, long n_steps,
               std::uint64_t seed = 0, unsigned threads = 1);

} // namespace swarmlead

namespace swarmlead {

/// Snapshots with step indices in [step_lo, step_hi]; a negative step_hi
/// means "through the last snapshot".
Trajectory slice(const Trajectory& traj, long step_lo, long step_hi);

} // namespace swarmlead
