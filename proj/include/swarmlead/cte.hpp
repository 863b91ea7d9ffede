#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "swarmlead/density.hpp"

namespace swarmlead {

/// Local conditional transfer entropy in bits,
///   log2 [C(x',x,w,y) C(x,w)] / [C(x,w,y) C(x',x,w)].
/// Empty when a neighborhood count is zero (the query point lies outside
/// the support of the fitted model). Throws std::invalid_argument if the
/// model was fitted for another role or history length.
std::optional<double> cte_local(const Observation& obs, const DensityModel& model);

struct CteStepRecord {
    long step{0}; // the step n+1 at which the destination's update is observed
    std::optional<double> follower;
    std::optional<double> leader;
    std::size_t n_follower_pairs{0};
    std::size_t n_leader_pairs{0};
    std::size_t n_follower_undefined{0};
    std::size_t n_leader_undefined{0};

    bool operator==(const CteStepRecord&) const = default;
};

struct CteReport {
    std::vector<CteStepRecord> per_step;
    int k{1};
    double causal_radius{0.0};
    EstimatorConfig estimator;

    /// Mean of the defined per-step averages for one role.
    std::optional<double> window_mean(Role role) const;
    bool has_role(Role role) const;

    bool operator==(const CteReport&) const = default;
};

/// Per-step role averages of the local CTE. Follower and leader densities are
/// fitted separately, each pooled over all agents and steps of `observations`.
/// A role with no observations yields an absent series. The result does not
/// depend on `threads`.
CteReport cte_report(std::span<const Observation> observations, int k, double causal_radius,
                     const EstimatorConfig& config, unsigned threads = 1);

/// Extracts observations from `traj` and reports on them.
CteReport cte_report(const Trajectory& traj, int k, const PairSelector& selector,
                     const EstimatorConfig& config, unsigned threads = 1);

/// Copy of `observations` where y is randomly permuted across time within
/// each (destination, source) pair. Marginals are kept and any directed
/// coupling from source to destination is destroyed.
std::vector<Observation> shuffle_sources(std::span<const Observation> observations,
                                         std::uint64_t seed);

/// Mean local CTE over all defined observations of `role`.
std::optional<double> mean_local_cte(std::span<const Observation> observations, Role role,
                                     const EstimatorConfig& config, unsigned threads = 1);

struct SurrogateTest {
    double observed{0.0};
    std::vector<double> surrogate_means;
    double threshold{0.0}; // `quantile` of |surrogate mean|
    bool within_band() const { return std::abs(observed) < threshold; }
};

/// Compares the observed mean local CTE of `role` with `n_surrogates`
/// source-shuffled surrogates.
SurrogateTest surrogate_test(std::span<const Observation> observations, Role role,
                             const EstimatorConfig& config, int n_surrogates, std::uint64_t seed,
                             double quantile = 0.95, unsigned threads = 1);

} // namespace swarmlead
