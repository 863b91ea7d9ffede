#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <tuple>

#include "swarmlead/cte.hpp"
#include "swarmlead/density.hpp"
#include "swarmlead/errors.hpp"
#include "swarmlead/integrator.hpp"
#include "swarmlead/observations.hpp"
#include "test_support.hpp"

using namespace swarmlead;
using namespace swarmlead::testing;

namespace {

Observation make_obs(std::size_t dest, std::size_t src, long step, Vec2 x_next, std::vector<Vec2> hist,
                     double w, std::array<double, 4> y, Role role = Role::Follower) {
    Observation o;
    o.dest_id = dest;
    o.src_id = src;
    o.step = step;
    o.x_next = x_next;
    o.x_hist = std::move(hist);
    o.w = w;
    o.y = y;
    o.dest_role = role;
    return o;
}

// Every combination of a binary history and a binary source, with the
// destination copying the source.
std::vector<Observation> binary_copy_process(int repeats = 1) {
    std::vector<Observation> out;
    long step = 0;
    for (int r = 0; r < repeats; ++r)
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y)
                out.push_back(make_obs(0, 1, step++, {double(y), 0.0}, {{double(x), 0.0}}, 1.0, {double(y), 0, 0, 0}));
    return out;
}

// Destination driven by its own history plus noise, source independent of both.
std::vector<Observation> independent_process(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<Observation> out;
    double x = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        const double next = 0.6 * x + g(rng);
        out.push_back(make_obs(0, 1, static_cast<long>(t), {next, 0.0}, {{x, 0.0}}, 1.0, {g(rng), g(rng), 0, 0}));
        x = next;
    }
    return out;
}

// Destination partly copies the source from the same step.
std::vector<Observation> coupled_process(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<Observation> out;
    double x = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        const double y = g(rng);
        const double next = 0.3 * x + y + 0.3 * g(rng);
        out.push_back(make_obs(0, 1, static_cast<long>(t), {next, 0.0}, {{x, 0.0}}, 1.0, {y, 0, 0, 0}));
        x = next;
    }
    return out;
}

double mean_local(std::span<const Observation> obs, const DensityModel& m) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& o : obs) {
        if (auto v = cte_local(o, m)) {
            sum += *v;
            ++n;
        }
    }
    return sum / static_cast<double>(n);
}

Trajectory hand_trajectory(std::size_t n_agents, int n_snapshots, double gap) {
    Trajectory t;
    for (int s = 0; s < n_snapshots; ++s) {
        SwarmSnapshot snap;
        snap.step = 10 + s;
        for (std::size_t i = 0; i < n_agents; ++i) {
            const double phase = 0.3 * s + static_cast<double>(i);
            snap.agents.push_back({i, {gap * static_cast<double>(i) + 0.1 * s, 0.05 * s * s},
                                   {std::cos(phase), std::sin(phase)}, i == 0 ? Role::Leader : Role::Follower});
        }
        t.snapshots.push_back(snap);
    }
    return t;
}

} // namespace

TEST_CASE("extract_observations") {
    SUBCASE("fields of a single observation") {
        const auto t = hand_trajectory(2, 3, 1.0);
        const auto obs = extract_observations(t, 1, {4.0});
        REQUIRE(obs.size() == 2);
        const auto& o = obs[0];
        const auto& s = t.snapshots;
        CHECK(o.step == 11);
        CHECK(o.dest_id == 0);
        CHECK(o.src_id == 1);
        CHECK(o.dest_role == Role::Leader);
        CHECK(obs[1].dest_role == Role::Follower);
        CHECK(o.x_next == s[2].agents[0].vel - s[1].agents[0].vel);
        REQUIRE(o.k() == 1);
        CHECK(o.x_hist[0] == s[1].agents[0].vel - s[0].agents[0].vel);
        CHECK(o.w == s[1].agents[0].vel.norm());
        const Vec2 dp = s[1].agents[1].pos - s[1].agents[0].pos;
        const Vec2 dv = s[1].agents[1].vel - s[1].agents[0].vel;
        CHECK(o.y == std::array<double, 4>{dp.x, dp.y, dv.x, dv.y});
    }
    SUBCASE("history order is most recent first") {
        const auto t = hand_trajectory(2, 5, 1.0);
        const auto obs = extract_observations(t, 3, {4.0});
        REQUIRE(obs.size() == 2);
        const auto& s = t.snapshots;
        CHECK(obs[0].step == 13);
        CHECK(obs[0].x_hist[0] == s[3].agents[0].vel - s[2].agents[0].vel);
        CHECK(obs[0].x_hist[2] == s[1].agents[0].vel - s[0].agents[0].vel);
    }
    SUBCASE("counts and ordering") {
        const auto obs = extract_observations(hand_trajectory(2, 11, 1.0), 1, {4.0});
        CHECK(obs.size() == 18);
        CHECK(std::is_sorted(obs.begin(), obs.end(), [](const Observation& a, const Observation& b) {
            return std::tie(a.step, a.dest_id, a.src_id) < std::tie(b.step, b.dest_id, b.src_id);
        }));
        for (const auto& o : obs) CHECK(o.dest_id != o.src_id);
    }
    SUBCASE("causal radius") {
        CHECK(extract_observations(hand_trajectory(3, 6, 10.0), 1, {4.0}).empty());
        // neighbours at distance 1 only: the chain 0-1-2 gives 4 ordered pairs
        CHECK(extract_observations(hand_trajectory(3, 3, 1.0), 1, {1.5}).size() == 4);
        CHECK(extract_observations(hand_trajectory(3, 3, 1.0), 1, {2.5}).size() == 6);
    }
    SUBCASE("windows shrink as k grows") {
        const auto t = run(init_lattice({4, 1.0, 0.25, 1.0}, 3), SwarmParams{}, 12);
        std::set<long> previous;
        for (int k = 1; k <= 5; ++k) {
            std::set<long> steps;
            for (const auto& o : extract_observations(t, k, {4.0})) steps.insert(o.step);
            CHECK(*steps.begin() == k);
            CHECK(*steps.rbegin() == 11);
            if (k > 1) CHECK(std::includes(previous.begin(), previous.end(), steps.begin(), steps.end()));
            previous = steps;
        }
    }
    SUBCASE("errors") {
        const auto t = hand_trajectory(2, 3, 1.0);
        CHECK_THROWS_AS(extract_observations(t, 0, {4.0}), std::invalid_argument);
        CHECK_THROWS_AS(extract_observations(t, 1, {0.0}), std::invalid_argument);
        CHECK_THROWS_AS(extract_observations(t, 2, {4.0}), InsufficientHistory);
    }
}

TEST_CASE("write_features layout") {
    const auto o = make_obs(0, 1, 0, {1, 2}, {{3, 4}, {5, 6}}, 7, {8, 9, 10, 11});
    std::vector<double> f(feature_count(2));
    write_features(o, f);
    CHECK(f == std::vector<double>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11});
}

TEST_CASE("box kernel counts match a brute-force table") {
    std::vector<Observation> obs = {
        make_obs(0, 1, 0, {0.0, 0.1}, {{0.2, 0.0}}, 1.0, {1.0, 0.0, 0.5, 0.5}),
        make_obs(0, 2, 0, {0.05, 0.1}, {{0.2, 0.05}}, 1.1, {1.1, 0.0, 0.5, 0.4}),
        make_obs(1, 0, 0, {0.9, -0.2}, {{0.2, 0.0}}, 1.0, {-1.0, 0.3, 0.0, 0.5}),
        make_obs(1, 2, 0, {0.0, 0.12}, {{0.25, 0.0}}, 0.9, {3.0, 2.0, 1.0, 0.0}),
        make_obs(2, 0, 0, {-0.8, 0.5}, {{-0.4, 0.3}}, 1.4, {1.0, 0.05, 0.45, 0.5}),
    };
    const std::size_t dims = feature_count(1);
    std::vector<std::vector<double>> z(obs.size(), std::vector<double>(dims));
    for (std::size_t i = 0; i < obs.size(); ++i) write_features(obs[i], z[i]);
    for (std::size_t d = 0; d < dims; ++d) {
        double mean = 0.0, var = 0.0;
        for (auto& row : z) mean += row[d];
        mean /= 5.0;
        for (auto& row : z) var += (row[d] - mean) * (row[d] - mean);
        const double sd = std::sqrt(var / 5.0);
        for (auto& row : z) row[d] = (row[d] - mean) / (sd > 0 ? sd : 1.0);
    }
    for (double radius : {0.25, 0.6, 1.2, 3.0}) {
        const auto model = fit_density(obs, Role::Follower, {EstimatorKind::BoxKernel, radius, 0.0});
        CHECK(model->sample_count() == 5);
        auto count = [&](std::size_t q, std::size_t lo, std::size_t hi) {
            std::size_t c = 0;
            for (const auto& row : z) {
                bool inside = true;
                for (std::size_t d = lo; d < hi; ++d) inside = inside && std::abs(row[d] - z[q][d]) <= radius;
                c += inside;
            }
            return c;
        };
        for (std::size_t q = 0; q < obs.size(); ++q) {
            const JointCounts c = model->counts(obs[q]);
            CHECK(c.next_past_cond_source == count(q, 0, dims));
            CHECK(c.past_cond_source == count(q, 2, dims));
            CHECK(c.next_past_cond == count(q, 0, 5));
            CHECK(c.past_cond == count(q, 2, 5));
        }
    }
}

TEST_CASE("plug-in estimator on the exhaustive binary copy process") {
    const auto obs = binary_copy_process();
    const auto model = fit_density(obs, Role::Follower, {EstimatorKind::PlugIn, 0.25, 0.0});
    for (const auto& o : obs) {
        const auto c = model->counts(o);
        CHECK(c.next_past_cond_source == 1);
        CHECK(c.past_cond_source == 1);
        CHECK(c.next_past_cond == 1);
        CHECK(c.past_cond == 2);
        CHECK(cte_local(o, *model) == 1.0);
    }
    CHECK(mean_local_cte(obs, Role::Follower, {EstimatorKind::PlugIn, 0.25, 0.0}) == 1.0);

    SUBCASE("box kernel resolves the same discrete support") {
        CHECK(mean_local_cte(binary_copy_process(3), Role::Follower, {}) == 1.0);
    }
    SUBCASE("binning keeps the answer") {
        CHECK(mean_local_cte(obs, Role::Follower, {EstimatorKind::PlugIn, 0.25, 0.5}) == 1.0);
    }
}

TEST_CASE("zero transfer cases are exactly zero") {
    SUBCASE("constant source") {
        auto obs = independent_process(300, 4);
        for (auto& o : obs) o.y = {2.0, -1.0, 0.5, 0.0};
        for (const EstimatorConfig cfg : {EstimatorConfig{}, EstimatorConfig{EstimatorKind::PlugIn, 0.25, 0.3}}) {
            const auto model = fit_density(obs, Role::Follower, cfg);
            for (const auto& o : obs) CHECK(cte_local(o, *model) == 0.0);
        }
    }
    SUBCASE("source that only repeats the conditioning speed") {
        std::vector<Observation> obs;
        std::mt19937_64 rng(2);
        for (long t = 0; t < 200; ++t) {
            const double w = static_cast<double>(rng() % 3);
            const double x = static_cast<double>(rng() % 2);
            const double next = static_cast<double>(rng() % 2) + w;
            obs.push_back(make_obs(0, 1, t, {next, 0}, {{x, 0}}, w, {w, 0, 0, 0}));
        }
        const auto model = fit_density(obs, Role::Follower, {EstimatorKind::PlugIn, 0.25, 0.0});
        for (const auto& o : obs) CHECK(cte_local(o, *model) == 0.0);
    }
}

TEST_CASE("source sign flip leaves every local value unchanged") {
    auto obs = coupled_process(400, 9);
    auto flipped = obs;
    for (auto& o : flipped)
        for (double& v : o.y) v = -v;
    const auto a = fit_density(obs, Role::Follower, {});
    const auto b = fit_density(flipped, Role::Follower, {});
    for (std::size_t i = 0; i < obs.size(); ++i) CHECK(cte_local(obs[i], *a) == cte_local(flipped[i], *b));
}

TEST_CASE("role separation") {
    const auto t = run(init_lattice({6, 1.0, 0.25, 1.0}, 2), SwarmParams{}, 30);
    const auto all = extract_observations(t, 1, {4.0});
    std::vector<Observation> followers;
    for (const auto& o : all)
        if (o.dest_role == Role::Follower) followers.push_back(o);
    REQUIRE(followers.size() < all.size());

    const auto m_all = fit_density(all, Role::Follower, {});
    const auto m_f = fit_density(followers, Role::Follower, {});
    CHECK(m_all->sample_count() == followers.size());
    for (std::size_t i = 0; i < followers.size(); i += 7) {
        const auto a = m_all->counts(followers[i]);
        const auto b = m_f->counts(followers[i]);
        CHECK(a.next_past_cond_source == b.next_past_cond_source);
        CHECK(a.past_cond == b.past_cond);
    }

    const auto leader_model = fit_density(all, Role::Leader, {});
    CHECK_THROWS_AS(cte_local(followers[0], *leader_model), std::invalid_argument);
    CHECK_THROWS_AS(fit_density(followers, Role::Leader, {}), InsufficientData);

    auto mixed = followers;
    mixed.push_back(make_obs(0, 1, 0, {}, {{0, 0}, {0, 0}}, 1.0, {}));
    CHECK_THROWS_AS(fit_density(mixed, Role::Follower, {}), std::invalid_argument);
}

TEST_CASE("cte_report") {
    const auto t = run(init_lattice({6, 1.0, 0.25, 1.0}, 5), SwarmParams{}, 40);
    const auto obs = extract_observations(t, 1, {4.0});
    const auto serial = cte_report(obs, 1, 4.0, {}, 1);
    const auto parallel = cte_report(obs, 1, 4.0, {}, 4);
    CHECK(serial == parallel);
    CHECK(serial == cte_report(t, 1, {4.0}, {}, 2));

    CHECK(serial.per_step.size() == 39);
    CHECK(serial.per_step.front().step == 2);
    CHECK(serial.per_step.back().step == 40);
    std::size_t pairs = 0;
    for (const auto& r : serial.per_step) {
        pairs += r.n_follower_pairs + r.n_leader_pairs;
        CHECK(r.n_follower_undefined == 0); // every query point is in the fitted set
        CHECK(r.follower.has_value());
        CHECK(r.leader.has_value());
    }
    CHECK(pairs == obs.size());
    CHECK(serial.has_role(Role::Leader));

    SUBCASE("window mean is the mean of per-step averages") {
        CteReport r;
        r.per_step = {{1, 1.0, std::nullopt, 3, 0, 0, 0}, {2, 2.0, 4.0, 1, 1, 0, 0}, {3, std::nullopt, 6.0, 0, 2, 0, 0}};
        CHECK(r.window_mean(Role::Follower) == 1.5);
        CHECK(r.window_mean(Role::Leader) == 5.0);
        r.per_step.clear();
        CHECK_FALSE(r.window_mean(Role::Leader).has_value());
    }
    SUBCASE("leaderless swarm reports an absent leader series") {
        const auto tl = run(init_lattice({5, 1.0, 0.0, 1.0}, 5), SwarmParams{}, 10);
        const auto rep = cte_report(tl, 1, {4.0}, {});
        CHECK_FALSE(rep.has_role(Role::Leader));
        CHECK_FALSE(rep.window_mean(Role::Leader).has_value());
        CHECK(rep.window_mean(Role::Follower).has_value());
    }
}

TEST_CASE("shuffle_sources") {
    auto obs = extract_observations(run(init_lattice({4, 1.0, 0.25, 1.0}, 1), SwarmParams{}, 20), 1, {4.0});
    const auto a = shuffle_sources(obs, 3);
    CHECK(a.size() == obs.size());
    CHECK(a == shuffle_sources(obs, 3));
    bool moved = false;
    std::map<std::pair<std::size_t, std::size_t>, std::multiset<std::array<double, 4>>> before, after;
    for (std::size_t i = 0; i < obs.size(); ++i) {
        CHECK(a[i].x_next == obs[i].x_next);
        CHECK(a[i].x_hist == obs[i].x_hist);
        CHECK(a[i].step == obs[i].step);
        moved = moved || a[i].y != obs[i].y;
        before[{obs[i].dest_id, obs[i].src_id}].insert(obs[i].y);
        after[{a[i].dest_id, a[i].src_id}].insert(a[i].y);
    }
    CHECK(moved);
    CHECK(before == after);
}

TEST_CASE("surrogate test separates coupled from independent sources") {
    const auto indep = independent_process(1500, 11);
    const auto s = surrogate_test(indep, Role::Follower, {}, 40, 100);
    CHECK(s.surrogate_means.size() == 40);
    CHECK(s.within_band());
    CHECK(surrogate_test(indep, Role::Follower, {}, 40, 100).surrogate_means == s.surrogate_means);

    const auto coupled = coupled_process(1500, 11);
    const auto c = surrogate_test(coupled, Role::Follower, {}, 40, 100);
    CHECK_FALSE(c.within_band());
    CHECK(c.observed > 0.5);
}

TEST_CASE("independent source bias shrinks with more data") {
    std::vector<double> bias;
    for (std::size_t n : {250u, 1000u, 4000u}) {
        double sum = 0.0;
        for (std::uint64_t seed = 1; seed <= 4; ++seed)
            sum += std::abs(*mean_local_cte(independent_process(n, seed), Role::Follower, {}));
        bias.push_back(sum / 4);
    }
    CHECK(bias[1] < bias[0]);
    CHECK(bias[2] < bias[1]);
}

TEST_CASE("box kernel and binned plug-in agree against their own surrogates") {
    for (const EstimatorConfig cfg : {EstimatorConfig{}, EstimatorConfig{EstimatorKind::PlugIn, 0.25, 0.5}}) {
        CAPTURE(to_string(cfg.kind));
        for (std::uint64_t seed = 1; seed <= 2; ++seed) {
            const auto c = surrogate_test(coupled_process(1500, seed), Role::Follower, cfg, 20, seed);
            const auto i = surrogate_test(independent_process(1500, seed), Role::Follower, cfg, 20, seed);
            CHECK_FALSE(c.within_band());
            CHECK(i.within_band());
        }
    }
}

TEST_CASE("box counts do not depend on query order or on other models") {
    const auto t = run(init_lattice({5, 1.0, 0.2, 1.0}, 8), SwarmParams{}, 25);
    const auto obs = extract_observations(t, 1, {4.0});
    const auto a = fit_density(obs, Role::Follower, {});
    const auto b = fit_density(obs, Role::Follower, {EstimatorKind::BoxKernel, 0.4, 0.0});
    std::vector<JointCounts> grouped;
    for (const auto& o : obs)
        if (o.dest_role == Role::Follower) grouped.push_back(a->counts(o));
    std::size_t j = grouped.size();
    for (auto it = obs.rbegin(); it != obs.rend(); ++it) {
        if (it->dest_role != Role::Follower) continue;
        (void)b->counts(*it); // interleave another model
        const auto c = a->counts(*it);
        --j;
        CHECK(c.next_past_cond == grouped[j].next_past_cond);
        CHECK(c.past_cond == grouped[j].past_cond);
        CHECK(c.past_cond_source == grouped[j].past_cond_source);
    }
}
