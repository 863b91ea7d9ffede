#include "swarmlead/cte.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

#include "swarmlead/parallel.hpp"
#include "swarmlead/random.hpp"

namespace swarmlead {

namespace {

// Neumaier compensated sum; fixed input order gives a fixed result.
class CompensatedSum {
public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
        ++n_;
    }
    double value() const { return sum_ + comp_; }
    std::size_t count() const { return n_; }

private:
    double sum_{0.0};
    double comp_{0.0};
    std::size_t n_{0};
};

bool has_role(std::span<const Observation> observations, Role role) {
    return std::any_of(observations.begin(), observations.end(),
                       [role](const Observation& o) { return o.dest_role == role; });
}

// Local CTE of every observation of `role` (empty slot for other roles and
// undefined values), evaluated against one model fitted on that role.
std::vector<std::optional<double>> role_locals(std::span<const Observation> observations, Role role,
                                               const EstimatorConfig& config, unsigned threads) {
    std::vector<std::optional<double>> out(observations.size());
    if (!has_role(observations, role)) return out;
    const auto model = fit_density(observations, role, config);
    parallel_for(observations.size(), threads, [&](std::size_t i) {
        if (observations[i].dest_role == role) out[i] = cte_local(observations[i], *model);
    });
    return out;
}

} // namespace

std::optional<double> cte_local(const Observation& obs, const DensityModel& model) {
    if (obs.dest_role != model.role())
        throw std::invalid_argument("observation role does not match the density model");
    if (obs.k() != model.k())
        throw std::invalid_argument("observation history length does not match the density model");
    const JointCounts c = model.counts(obs);
    // The full-space count is the smallest; if it is positive, so are the others.
    if (c.next_past_cond_source == 0) return std::nullopt;
    const double num = static_cast<double>(c.next_past_cond_source) * static_cast<double>(c.past_cond);
    const double den = static_cast<double>(c.past_cond_source) * static_cast<double>(c.next_past_cond);
    return std::log2(num / den);
}

std::optional<double> CteReport::window_mean(Role role) const {
    CompensatedSum sum;
    for (const auto& r : per_step) {
        const auto& v = role == Role::Leader ? r.leader : r.follower;
        if (v) sum.add(*v);
    }
    if (sum.count() == 0) return std::nullopt;
    return sum.value() / static_cast<double>(sum.count());
}

bool CteReport::has_role(Role role) const {
    return std::any_of(per_step.begin(), per_step.end(), [role](const CteStepRecord& r) {
        return (role == Role::Leader ? r.leader : r.follower).has_value();
    });
}

CteReport cte_report(std::span<const Observation> observations, int k, double causal_radius,
                     const EstimatorConfig& config, unsigned threads) {
    const auto follower = role_locals(observations, Role::Follower, config, threads);
    const auto leader = role_locals(observations, Role::Leader, config, threads);

    struct Accum {
        CompensatedSum follower, leader;
        CteStepRecord rec;
    };
    std::map<long, Accum> steps;
    for (std::size_t i = 0; i < observations.size(); ++i) {
        const Observation& obs = observations[i];
        Accum& a = steps[obs.step + 1];
        if (obs.dest_role == Role::Leader) {
            ++a.rec.n_leader_pairs;
            if (leader[i]) a.leader.add(*leader[i]);
            else ++a.rec.n_leader_undefined;
        } else {
            ++a.rec.n_follower_pairs;
            if (follower[i]) a.follower.add(*follower[i]);
            else ++a.rec.n_follower_undefined;
        }
    }

    CteReport report;
    report.k = k;
    report.causal_radius = causal_radius;
    report.estimator = config;
    report.per_step.reserve(steps.size());
    for (auto& [step, a] : steps) {
        a.rec.step = step;
        if (a.follower.count() > 0) a.rec.follower = a.follower.value() / static_cast<double>(a.follower.count());
        if (a.leader.count() > 0) a.rec.leader = a.leader.value() / static_cast<double>(a.leader.count());
        report.per_step.push_back(a.rec);
    }
    return report;
}

CteReport cte_report(const Trajectory& traj, int k, const PairSelector& selector,
                     const EstimatorConfig& config, unsigned threads) {
    const auto observations = extract_observations(traj, k, selector);
    return cte_report(observations, k, selector.causal_radius, config, threads);
}

std::vector<Observation> shuffle_sources(std::span<const Observation> observations,
                                         std::uint64_t seed) {
    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> pairs;
    for (std::size_t i = 0; i < observations.size(); ++i)
        pairs[{observations[i].dest_id, observations[i].src_id}].push_back(i);

    std::vector<Observation> out(observations.begin(), observations.end());
    std::mt19937_64 rng(seed);
    for (const auto& [key, idx] : pairs) {
        std::vector<std::size_t> perm = idx;
        for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[uniform_index(rng, i)]);
        for (std::size_t a = 0; a < idx.size(); ++a) out[idx[a]].y = observations[perm[a]].y;
    }
    return out;
}

std::optional<double> mean_local_cte(std::span<const Observation> observations, Role role,
                                     const EstimatorConfig& config, unsigned threads) {
    const auto locals = role_locals(observations, role, config, threads);
    CompensatedSum sum;
    for (const auto& v : locals)
        if (v) sum.add(*v);
    if (sum.count() == 0) return std::nullopt;
    return sum.value() / static_cast<double>(sum.count());
}

SurrogateTest surrogate_test(std::span<const Observation> observations, Role role,
                             const EstimatorConfig& config, int n_surrogates, std::uint64_t seed,
                             double quantile, unsigned threads) {
    if (n_surrogates < 1) throw std::invalid_argument("need at least one surrogate");
    if (!(quantile > 0.0 && quantile <= 1.0)) throw std::invalid_argument("quantile must lie in (0, 1]");

    SurrogateTest test;
    test.observed = mean_local_cte(observations, role, config, threads).value_or(0.0);
    std::vector<double> magnitudes;
    for (int s = 0; s < n_surrogates; ++s) {
        const auto shuffled = shuffle_sources(observations, seed + static_cast<std::uint64_t>(s));
        const double m = mean_local_cte(shuffled, role, config, threads).value_or(0.0);
        test.surrogate_means.push_back(m);
        magnitudes.push_back(std::abs(m));
    }
    std::sort(magnitudes.begin(), magnitudes.end());
    // Nearest-rank quantile.
    const auto rank = static_cast<std::size_t>(std::ceil(quantile * static_cast<double>(magnitudes.size())));
    test.threshold = magnitudes[std::max<std::size_t>(rank, 1) - 1];
    return test;
}

} // namespace swarmlead
