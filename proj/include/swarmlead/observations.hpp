#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "swarmlead/integrator.hpp"

namespace swarmlead {

/// One source -> destination sample for conditional transfer entropy.
///
/// For destination p and source q at step n:
///   x_next = v_p^{n+1} - v_p^n
///   x_hist = {x_n, x_{n-1}, ..., x_{n-k+1}},  x_m = v_p^m - v_p^{m-1}
///   w      = |v_p^n|
///   y      = {s_q^n - s_p^n, v_q^n - v_p^n}   (source minus destination)
struct Observation {
    std::size_t dest_id{0};
    std::size_t src_id{0};
    long step{0};
    Vec2 x_next;
    std::vector<Vec2> x_hist;
    double w{0.0};
    std::array<double, 4> y{};
    Role dest_role{Role::Follower};

    int k() const noexcept { return static_cast<int>(x_hist.size()); }
    bool operator==(const Observation&) const = default;
};

/// Source q is causally connected to destination p at step n when
/// |s_q^n - s_p^n| <= causal_radius.
struct PairSelector {
    double causal_radius{4.0};
};

/// One observation per connected ordered pair (p != q) and step n with
/// k <= n - step0 <= T - 2, where step0 is the first snapshot's step and T
/// the number of snapshots. Observations are ordered by step, then
/// destination, then source.
///
/// Throws InsufficientHistory if the trajectory has fewer than k + 2
/// snapshots and std::invalid_argument for k < 1 or a non-positive radius.
std::vector<Observation> extract_observations(const Trajectory& traj, int k,
                                              const PairSelector& selector);

// Flat feature layout used by the estimators:
//   [x_next (2) | x_hist (2k) | w (1) | y (4)]
inline constexpr std::size_t feature_count(int k) { return 2 + 2 * static_cast<std::size_t>(k) + 1 + 4; }
void write_features(const Observation& obs, std::span<double> out);

} // namespace swarmlead
