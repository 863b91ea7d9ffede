#include "swarmlead/kernels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "swarmlead/errors.hpp"

namespace swarmlead {

namespace {

void check_index(std::size_t i, const SwarmSnapshot& snapshot) {
    if (i >= snapshot.size())
        throw std::out_of_range("agent index " + std::to_string(i) + " out of range for " +
                                std::to_string(snapshot.size()) + " agents");
}

} // namespace

std::string_view to_string(Role role) {
    return role == Role::Leader ? "L" : "F";
}

Role parse_role(std::string_view text) {
    if (text == "L" || text == "leader" || text == "Leader") return Role::Leader;
    if (text == "F" || text == "follower" || text == "Follower") return Role::Follower;
    throw ParseError("unknown role '" + std::string(text) + "'");
}

void SwarmParams::validate() const {
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    auto non_negative = [](double v) { return std::isfinite(v) && v >= 0.0; };
    if (!positive(sigma1) || !positive(sigma2) || !positive(sigma3))
        throw ConfigError("zone widths sigma1, sigma2, sigma3 must be positive");
    if (!(sigma1 < sigma2 && sigma2 < sigma3))
        throw ConfigError("zone widths must satisfy sigma1 < sigma2 < sigma3");
    if (!non_negative(c_a)) throw ConfigError("c_a must be >= 0");
    if (!positive(leader_decay)) throw ConfigError("leader_decay must be positive");
    if (!goal_dir.finite() || std::abs(goal_dir.norm() - 1.0) > 1e-12)
        throw ConfigError("goal_dir must be a unit vector");
    if (!positive(dt)) throw ConfigError("dt must be positive");
    if (!positive(relax_rate)) throw ConfigError("relax_rate must be positive");
    if (!non_negative(alpha) || !non_negative(beta))
        throw ConfigError("alpha and beta must be >= 0");
    if (!positive(cutoff_radius)) throw ConfigError("cutoff_radius must be positive");
}

void check_finite(const SwarmSnapshot& snapshot) {
    for (const auto& a : snapshot.agents) {
        if (!a.pos.finite() || !a.vel.finite()) throw NumericalDivergence(a.id, snapshot.step);
    }
}

Vec2 repulsion_term(Vec2 s, double sigma1) {
    const double s2 = sigma1 * sigma1;
    const double coeff = -1.0 / (8.0 * std::numbers::pi * s2 * s2);
    return coeff * std::exp(-s.norm2() / (4.0 * s2)) * s;
}

Vec2 attraction_term(Vec2 s, double sigma3) {
    const double s2 = sigma3 * sigma3;
    const double coeff = 1.0 / (64.0 * std::numbers::pi * s2 * s2 * s2);
    const double r2 = s.norm2();
    return coeff * r2 * std::exp(-r2 / (4.0 * s2)) * s;
}

double smoothing_kernel(double r2, double sigma) {
    const double s2 = sigma * sigma;
    return std::exp(-r2 / (4.0 * s2)) / (4.0 * std::numbers::pi * s2);
}

Vec2 repulsion_velocity(std::size_t i, const SwarmSnapshot& snapshot, const SwarmParams& params) {
    check_index(i, snapshot);
    const Vec2 si = snapshot.agents[i].pos;
    Vec2 sum;
    for (const auto& a : snapshot.agents) sum += repulsion_term(a.pos - si, params.sigma1);
    return sum;
}

Vec2 orientation_velocity(std::size_t i, const SwarmSnapshot& snapshot, const SwarmParams& params) {
    check_index(i, snapshot);
    const Vec2 si = snapshot.agents[i].pos;
    Vec2 num;
    double den = 0.0;
    for (const auto& a : snapshot.agents) {
        const double w = smoothing_kernel((a.pos - si).norm2(), params.sigma2);
        num += w * a.vel;
        den += w;
    }
    return num / den;
}

Vec2 attraction_velocity(std::size_t i, const SwarmSnapshot& snapshot, const SwarmParams& params) {
    check_index(i, snapshot);
    const Vec2 si = snapshot.agents[i].pos;
    Vec2 sum;
    for (const auto& a : snapshot.agents) sum += attraction_term(a.pos - si, params.sigma3);
    return sum;
}

Vec2 desired_velocity(std::size_t i, const SwarmSnapshot& snapshot, const SwarmParams& params) {
    return repulsion_velocity(i, snapshot, params) + orientation_velocity(i, snapshot, params) +
           params.c_a * attraction_velocity(i, snapshot, params);
}

double smoothed_density(Vec2 at, const SwarmSnapshot& snapshot, const SwarmParams& params) {
    double sum = 0.0;
    for (const auto& a : snapshot.agents) sum += smoothing_kernel((a.pos - at).norm2(), params.sigma2);
    return sum;
}

namespace {

std::vector<Vec2> positions_of(const SwarmSnapshot& snapshot) {
    std::vector<Vec2> out;
    out.reserve(snapshot.size());
    for (const auto& a : snapshot.agents) out.push_back(a.pos);
    return out;
}

} // namespace

InteractionField::InteractionField(const SwarmSnapshot& snapshot, const SwarmParams& params)
    : InteractionField(snapshot, params, params.cutoff_radius) {}

InteractionField::InteractionField(const SwarmSnapshot& snapshot, const SwarmParams& params,
                                   double cell_size)
    : snapshot_(&snapshot), params_(params), positions_(positions_of(snapshot)),
      grid_(positions_, cell_size) {}

ZoneVelocities InteractionField::evaluate(std::size_t i) const {
    check_index(i, *snapshot_);
    thread_local std::vector<std::size_t> neighbors;
    const Vec2 si = positions_[i];
    grid_.query(si, params_.cutoff_radius, neighbors);

    ZoneVelocities out;
    Vec2 num;
    double den = 0.0;
    for (const std::size_t j : neighbors) {
        const Vec2 s = positions_[j] - si;
        out.repulsion += repulsion_term(s, params_.sigma1);
        out.attraction += attraction_term(s, params_.sigma3);
        const double w = smoothing_kernel(s.norm2(), params_.sigma2);
        num += w * snapshot_->agents[j].vel;
        den += w;
    }
    out.orientation = num / den;
    out.density = den;
    return out;
}

double InteractionField::density_at(Vec2 at) const {
    thread_local std::vector<std::size_t> neighbors;
    grid_.query(at, params_.cutoff_radius, neighbors);
    double sum = 0.0;
    for (const std::size_t j : neighbors) sum += smoothing_kernel((positions_[j] - at).norm2(), params_.sigma2);
    return sum;
}

} // namespace swarmlead
