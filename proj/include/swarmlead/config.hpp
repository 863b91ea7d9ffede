#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "swarmlead/density.hpp"
#include "swarmlead/integrator.hpp"

namespace swarmlead {

struct AnalysisConfig {
    int k{1};
    double causal_radius{4.0}; // 2 * sigma3 by default
    EstimatorConfig estimator;
    long step_lo{0};
    long step_hi{-1}; // -1: through the end of the trajectory
};

struct ExperimentConfig {
    SwarmParams swarm;
    LatticeParams lattice;
    std::uint64_t seed{1};
    long n_steps{2000};
    AnalysisConfig analysis;
    double polarization_threshold{0.95};
    double heading_tolerance_deg{15.0};
    unsigned threads{1};
    std::filesystem::path output_dir{"."};
    std::string trajectory_file{"trajectory.csv"};
    std::string order_file{"order.csv"};
    std::string report_file{"cte_report.csv"};

    /// Throws ConfigError on any violated invariant.
    void validate() const;
};

/// Parses flat `key = value` text; `#` starts a comment. Keys left out keep
/// their defaults, except that cutoff_radius follows 6 * sigma3 and
/// causal_radius follows 2 * sigma3 unless set explicitly. goal_dir is
/// normalized. Throws ConfigError for unknown keys or bad values.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Renders every setting in the same key-value format, with units.
std::string format_config(const ExperimentConfig& config);

} // namespace swarmlead
