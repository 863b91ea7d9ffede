#include "swarmlead/commands.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>

#include "swarmlead/errors.hpp"
#include "swarmlead/trajectory_io.hpp"
#include "text_format.hpp"

namespace swarmlead {

namespace {

using detail::format_double;

double degrees(double rad) { return rad * 180.0 / std::numbers::pi; }

std::string cell(const std::optional<double>& v) { return v ? format_double(*v) : std::string("NA"); }

} // namespace

SimulateResult cmd_simulate(const ExperimentConfig& config, std::ostream& log) {
    SimulateResult result;
    try {
        config.validate();
    } catch (const ConfigError& e) {
        log << "error: " << e.what() << '\n';
        result.exit_code = kExitUsage;
        return result;
    }
    log << "# effective configuration\n" << format_config(config);

    std::error_code ec;
    std::filesystem::create_directories(config.output_dir, ec);
    result.trajectory_path = config.output_dir / config.trajectory_file;
    result.order_path = config.output_dir / config.order_file;

    const SwarmSnapshot initial = init_lattice(config.lattice, config.seed);
    Trajectory traj;
    try {
        traj = run(initial, config.swarm, config.n_steps, config.seed, config.threads);
    } catch (const RunDiverged& e) {
        log << "error: numerical divergence at step " << e.step() << " (agent " << e.agent_id() << ")\n";
        save_trajectory(result.trajectory_path, e.partial());
        result.exit_code = kExitDivergence;
        return result;
    }

    std::vector<OrderParameters> order;
    order.reserve(traj.size());
    for (const auto& s : traj.snapshots) order.push_back(order_parameters(s));

    save_trajectory(result.trajectory_path, traj);
    {
        std::ofstream out(result.order_path);
        if (!out) throw std::runtime_error("cannot write '" + result.order_path.string() + "'");
        write_order_parameters(out, order);
    }

    const OrderParameters& last = order.back();
    result.final_order = last;
    log << "final step " << last.step << ": polarization " << format_double(last.polarization)
        << ", heading " << format_double(degrees(last.heading)) << " deg, group radius "
        << format_double(last.group_radius) << '\n';
    log << "wrote " << result.trajectory_path.string() << " and " << result.order_path.string() << '\n';
    return result;
}

int cmd_analyze(const AnalyzeOptions& options, std::ostream& log) {
    Trajectory traj;
    try {
        traj = load_trajectory(options.trajectory);
    } catch (const ParseError& e) {
        log << "error: " << options.trajectory.string() << ": " << e.what() << '\n';
        return kExitUsage;
    }

    const AnalysisConfig& a = options.analysis;
    const Trajectory window = slice(traj, a.step_lo, a.step_hi);
    std::vector<Observation> observations;
    try {
        observations = extract_observations(window, a.k, PairSelector{a.causal_radius});
    } catch (const std::invalid_argument& e) {
        log << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    const CteReport report = cte_report(observations, a.k, a.causal_radius, a.estimator, options.threads);
    save_report(options.report, report);

    log << "analyzed steps " << window.snapshots.front().step << ".." << window.snapshots.back().step
        << ", " << observations.size() << " observations\n";
    for (const Role role : {Role::Follower, Role::Leader}) {
        const char* name = role == Role::Leader ? "leader" : "follower";
        const auto mean = report.window_mean(role);
        if (!mean) {
            log << "warning: no " << name << " destinations; " << name << " series absent\n";
            continue;
        }
        log << name << " window-mean CTE: " << format_double(*mean) << " bits\n";
        if (options.surrogates > 0) {
            const SurrogateTest test = surrogate_test(observations, role, a.estimator, options.surrogates,
                                                      options.surrogate_seed, 0.95, options.threads);
            log << name << " pooled mean " << format_double(test.observed) << " bits, surrogate 95% |mean| band "
                << format_double(test.threshold) << (test.within_band() ? " (within band)\n" : " (significant)\n");
        }
    }
    log << "wrote " << options.report.string() << '\n';
    return kExitOk;
}

int cmd_report(const ReportOptions& options, std::ostream& out, std::ostream& log) {
    if (options.reports.empty()) {
        log << "error: no report files given\n";
        return kExitUsage;
    }
    std::vector<CteReport> reports;
    std::vector<OrderParameters> order;
    try {
        for (const auto& p : options.reports) reports.push_back(load_report(p));
        if (options.order) {
            std::ifstream in(*options.order);
            if (!in) throw ParseError("cannot open '" + options.order->string() + "'");
            order = read_order_parameters(in);
        }
    } catch (const ParseError& e) {
        log << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    for (std::size_t i = 1; i < reports.size(); ++i) {
        if (reports[i].k != reports[0].k || !(reports[i].estimator == reports[0].estimator) ||
            reports[i].causal_radius != reports[0].causal_radius) {
            log << "error: " << options.reports[i].string() << " uses a different k/estimator/causal radius than "
                << options.reports[0].string() << '\n';
            return kExitUsage;
        }
    }

    std::map<long, double> polarization;
    for (const auto& o : order) polarization[o.step] = o.polarization;
    auto polar_cell = [&](long step) {
        const auto it = polarization.find(step);
        return it == polarization.end() ? std::string("NA") : format_double(it->second);
    };
    const char d = options.delimiter;

    if (reports.size() == 1) {
        out << "step" << d << "follower_cte" << d << "leader_cte" << d << "n_follower_pairs" << d
            << "n_leader_pairs";
        if (options.order) out << d << "polarization";
        out << '\n';
        for (const auto& r : reports[0].per_step) {
            out << r.step << d << cell(r.follower) << d << cell(r.leader) << d << r.n_follower_pairs << d
                << r.n_leader_pairs;
            if (options.order) out << d << polar_cell(r.step);
            out << '\n';
        }
        return kExitOk;
    }

    struct Samples {
        std::vector<double> follower, leader;
    };
    std::map<long, Samples> by_step;
    for (const auto& rep : reports) {
        for (const auto& r : rep.per_step) {
            Samples& s = by_step[r.step];
            if (r.follower) s.follower.push_back(*r.follower);
            if (r.leader) s.leader.push_back(*r.leader);
        }
    }
    auto stats = [](const std::vector<double>& v) {
        std::optional<double> mean, sd;
        if (!v.empty()) {
            double m = 0.0;
            for (double x : v) m += x;
            m /= static_cast<double>(v.size());
            mean = m;
            if (v.size() > 1) {
                double ss = 0.0;
                for (double x : v) ss += (x - m) * (x - m);
                sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
            }
        }
        return std::make_pair(mean, sd);
    };

    out << "step" << d << "follower_mean" << d << "follower_sd" << d << "follower_n" << d << "leader_mean" << d
        << "leader_sd" << d << "leader_n";
    if (options.order) out << d << "polarization";
    out << '\n';
    for (const auto& [step, s] : by_step) {
        const auto [fm, fs] = stats(s.follower);
        const auto [lm, ls] = stats(s.leader);
        out << step << d << cell(fm) << d << cell(fs) << d << s.follower.size() << d << cell(lm) << d << cell(ls)
            << d << s.leader.size();
        if (options.order) out << d << polar_cell(step);
        out << '\n';
    }
    return kExitOk;
}

} // namespace swarmlead
