#pragma once

#include <cstddef>
#include <vector>

#include "swarmlead/neighbor_grid.hpp"
#include "swarmlead/types.hpp"

namespace swarmlead {

// Three-zone interaction kernels. With s_ij = s_j - s_i:
//
//   v_r = sum_j -1/(8 pi s1^4) s_ij exp(-|s_ij|^2 / 4 s1^2)
//   v_o = sum_j K2(|s_ij|) v_j / sum_j K2(|s_ij|),  K2(r) = exp(-r^2 / 4 s2^2) / (4 pi s2^2)
//   v_a = sum_j 1/(64 pi s3^6) s_ij |s_ij|^2 exp(-|s_ij|^2 / 4 s3^2)
//   v_d = v_r + v_o + c_a v_a
//
// Sums include j == i. The self term vanishes for repulsion and attraction and
// keeps the orientation denominator positive.

/// Per-pair kernel contributions for a displacement s = s_j - s_i.
Vec2 repulsion_term(Vec2 s, double sigma1);
Vec2 attraction_term(Vec2 s, double sigma3);
/// Normalized 2-D Gaussian with variance 2 sigma^2 evaluated at squared distance r2.
double smoothing_kernel(double r2, double sigma);

// Exact all-pairs evaluations. Throw std::out_of_range for a bad index.
Vec2 repulsion_velocity(std::size_t i, const SwarmSnapshot& snapshot, const SwarmParams& params);
Vec2 orientation_velocity(std::size_t i, const SwarmSnapshot& snapshot, const SwarmParams& params);
Vec2 attraction_velocity(std::size_t i, const SwarmSnapshot& snapshot, const SwarmParams& params);
Vec2 desired_velocity(std::size_t i, const SwarmSnapshot& snapshot, const SwarmParams& params);

/// Kernel-density estimate of all agents (self included) at `at`, smoothed
/// with bandwidth sigma2. Number density, not normalized by N.
double smoothed_density(Vec2 at, const SwarmSnapshot& snapshot, const SwarmParams& params);

struct ZoneVelocities {
    Vec2 repulsion;
    Vec2 orientation;
    Vec2 attraction;
    double density{0.0}; // smoothed density at the agent's own position

    Vec2 desired(double c_a) const { return repulsion + orientation + c_a * attraction; }
};

/// Truncated evaluation of the interaction kernels backed by a spatial hash.
/// Only agents within `params.cutoff_radius` contribute. Read-only after
/// construction; concurrent calls to `evaluate` are safe.
class InteractionField {
public:
    InteractionField(const SwarmSnapshot& snapshot, const SwarmParams& params);
    InteractionField(const SwarmSnapshot& snapshot, const SwarmParams& params, double cell_size);

    /// All three zone responses plus the local density, in one neighbor pass.
    ZoneVelocities evaluate(std::size_t i) const;
    /// Truncated smoothed density at an arbitrary point.
    double density_at(Vec2 at) const;

    const SwarmSnapshot& snapshot() const noexcept { return *snapshot_; }

private:
    const SwarmSnapshot* snapshot_;
    SwarmParams params_;
    std::vector<Vec2> positions_;
    NeighborGrid grid_;
};

} // namespace swarmlead
