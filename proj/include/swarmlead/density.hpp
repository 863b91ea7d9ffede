#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>

#include "swarmlead/observations.hpp"

namespace swarmlead {

enum class EstimatorKind {
    BoxKernel, // fixed-radius max-norm counting in standardized coordinates
    PlugIn,    // exact counting of (optionally binned) values
};

std::string to_string(EstimatorKind kind);
EstimatorKind parse_estimator_kind(const std::string& text);

struct EstimatorConfig {
    EstimatorKind kind{EstimatorKind::BoxKernel};
    double radius{0.25};    // box kernel half-width, standardized units
    double bin_width{0.0};  // plug-in bin width in standardized units; 0 = match raw values exactly

    bool operator==(const EstimatorConfig&) const = default;
};

/// The four neighborhood counts entering the local CTE ratio
///   p(x'|x,w,y) / p(x'|x,w) = [C(x',x,w,y) C(x,w)] / [C(x,w,y) C(x',x,w)]
/// where x is the destination history and w the conditioning speed.
struct JointCounts {
    std::size_t next_past_cond_source{0};
    std::size_t past_cond_source{0};
    std::size_t next_past_cond{0};
    std::size_t past_cond{0};
};

/// Density model fitted on the observations of a single destination role.
class DensityModel {
public:
    virtual ~DensityModel() = default;

    virtual JointCounts counts(const Observation& obs) const = 0;

    Role role() const noexcept { return role_; }
    int k() const noexcept { return k_; }
    std::size_t sample_count() const noexcept { return samples_; }

protected:
    DensityModel(Role role, int k, std::size_t samples) : role_(role), k_(k), samples_(samples) {}

private:
    Role role_;
    int k_;
    std::size_t samples_;
};

/// Fits on the subset of `observations` whose destination has `role`.
/// Throws InsufficientData if that subset is empty and std::invalid_argument
/// if the subset mixes history lengths.
std::unique_ptr<DensityModel> fit_density(std::span<const Observation> observations, Role role,
                                          const EstimatorConfig& config);

} // namespace swarmlead
