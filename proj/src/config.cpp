#include "swarmlead/config.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "swarmlead/errors.hpp"
#include "text_format.hpp"

namespace swarmlead {

namespace {

double to_double(const std::string& key, const std::vector<std::string>& in) {
    if (in.size() != 1) throw ConfigError("'" + key + "' expects a single number");
    try {
        return detail::parse_double(in[0]);
    } catch (const ParseError&) {
        throw ConfigError("'" + key + "' is not a number: " + in[0]);
    }
}

template <class Int>
Int to_int(const std::string& key, const std::vector<std::string>& in) {
    if (in.size() != 1) throw ConfigError("'" + key + "' expects a single integer");
    try {
        return detail::parse_int<Int>(in[0]);
    } catch (const ParseError&) {
        throw ConfigError("'" + key + "' is not an integer: " + in[0]);
    }
}

std::string to_text(const std::string& key, const std::vector<std::string>& in) {
    if (in.size() != 1) throw ConfigError("'" + key + "' expects a single value");
    return in[0];
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::vector<std::string>&)>;

template <class Member>
Setter real(Member member) {
    return [member](ExperimentConfig& c, const std::string& k, const std::vector<std::string>& in) {
        std::invoke(member, c) = to_double(k, in);
    };
}

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"sigma1", real([](ExperimentConfig& c) -> double& { return c.swarm.sigma1; })},
        {"sigma2", real([](ExperimentConfig& c) -> double& { return c.swarm.sigma2; })},
        {"sigma3", real([](ExperimentConfig& c) -> double& { return c.swarm.sigma3; })},
        {"c_a", real([](ExperimentConfig& c) -> double& { return c.swarm.c_a; })},
        {"leader_decay", real([](ExperimentConfig& c) -> double& { return c.swarm.leader_decay; })},
        {"dt", real([](ExperimentConfig& c) -> double& { return c.swarm.dt; })},
        {"relax_rate", real([](ExperimentConfig& c) -> double& { return c.swarm.relax_rate; })},
        {"alpha", real([](ExperimentConfig& c) -> double& { return c.swarm.alpha; })},
        {"beta", real([](ExperimentConfig& c) -> double& { return c.swarm.beta; })},
        {"cutoff_radius", real([](ExperimentConfig& c) -> double& { return c.swarm.cutoff_radius; })},
        {"goal_dir",
         [](ExperimentConfig& c, const std::string& k, const std::vector<std::string>& in) {
             if (in.size() != 2) throw ConfigError("'goal_dir' expects [x, y]");
             c.swarm.goal_dir = {to_double(k, {in[0]}), to_double(k, {in[1]})};
         }},
        {"spacing", real([](ExperimentConfig& c) -> double& { return c.lattice.spacing; })},
        {"leader_fraction", real([](ExperimentConfig& c) -> double& { return c.lattice.leader_fraction; })},
        {"initial_speed", real([](ExperimentConfig& c) -> double& { return c.lattice.speed; })},
        {"n_side",
         [](ExperimentConfig& c, const std::string& k, const std::vector<std::string>& in) {
             c.lattice.n_side = to_int<int>(k, in);
         }},
        {"seed",
         [](ExperimentConfig& c, const std::string& k, const std::vector<std::string>& in) {
             c.seed = to_int<std::uint64_t>(k, in);
         }},
        {"n_steps",
         [](ExperimentConfig& c, const std::string& k, const std::vector<std::string>& in) {
             c.n_steps = to_int<long>(k, in);
         }},
        {"k",
         [](ExperimentConfig& c, const std::string& k, const std::vector<std::string>& in) {
             c.analysis.k = to_int<int>(k, in);
         }},
        {"causal_radius", real([](ExperimentConfig& c) -> double& { return c.analysis.causal_radius; })},
        {"estimator",
         [](ExperimentConfig& c, const std::string& k, const std::vector<std::string>& in) {
             c.analysis.estimator.kind = parse_estimator_kind(to_text(k, in));
         }},
        {"kernel_radius", real([](ExperimentConfig& c) -> double& { return c.analysis.estimator.radius; })},
        {"bin_width", real([](ExperimentConfig& c) -> double& { return c.analysis.estimator.bin_width; })},
        {"step_lo",
         [](ExperimentConfig& c, const std::string& k, const std::vector<std::string>& in) {
             c.analysis.step_lo = to_int<long>(k, in);
         }},
        {"step_hi",
         [](ExperimentConfig& c, const std::string& k, const std::vector<std::string>& in) {
             c.analysis.step_hi = to_int<long>(k, in);
         }},
        {"polarization_threshold",
         real([](ExperimentConfig& c) -> double& { return c.polarization_threshold; })},
        {"heading_tolerance_deg",
         real([](ExperimentConfig& c) -> double& { return c.heading_tolerance_deg; })},
        {"threads",
         [](ExperimentConfig& c, const std::string& k, const std::vector<std::string>& in) {
             c.threads = to_int<unsigned>(k, in);
         }},
        {"output_dir",
         [](ExperimentConfig& c, const std::string& k, const std::vector<std::string>& in) {
             c.output_dir = to_text(k, in);
         }},
        {"trajectory_file",
         [](ExperimentConfig& c, const std::string& k, const std::vector<std::string>& in) {
             c.trajectory_file = to_text(k, in);
         }},
        {"order_file",
         [](ExperimentConfig& c, const std::string& k, const std::vector<std::string>& in) {
             c.order_file = to_text(k, in);
         }},
        {"report_file",
         [](ExperimentConfig& c, const std::string& k, const std::vector<std::string>& in) {
             c.report_file = to_text(k, in);
         }},
    };
    return table;
}

} // namespace

void ExperimentConfig::validate() const {
    swarm.validate();
    if (lattice.n_side < 1) throw ConfigError("n_side must be >= 1");
    if (!(lattice.spacing > 0.0)) throw ConfigError("spacing must be positive");
    if (!(lattice.speed > 0.0)) throw ConfigError("initial_speed must be positive");
    if (!(lattice.leader_fraction >= 0.0 && lattice.leader_fraction <= 1.0))
        throw ConfigError("leader_fraction must lie in [0, 1]");
    if (n_steps < 0) throw ConfigError("n_steps must be >= 0");
    if (analysis.k < 1) throw ConfigError("k must be >= 1");
    if (!(analysis.causal_radius > 0.0)) throw ConfigError("causal_radius must be positive");
    if (!(analysis.estimator.radius > 0.0)) throw ConfigError("kernel_radius must be positive");
    if (!(analysis.estimator.bin_width >= 0.0)) throw ConfigError("bin_width must be >= 0");
    if (analysis.step_lo < 0) throw ConfigError("step_lo must be >= 0");
    if (analysis.step_hi >= 0 && analysis.step_hi < analysis.step_lo)
        throw ConfigError("step_hi must be >= step_lo");
    if (analysis.step_hi > n_steps) throw ConfigError("step_hi exceeds n_steps");
    if (!(polarization_threshold >= 0.0 && polarization_threshold <= 1.0))
        throw ConfigError("polarization_threshold must lie in [0, 1]");
    if (!(heading_tolerance_deg > 0.0)) throw ConfigError("heading_tolerance_deg must be positive");
}

ExperimentConfig parse_config(std::istream& in) {
    std::vector<CLI::ConfigItem> items;
    try {
        items = CLI::ConfigBase().from_config(in);
    } catch (const CLI::Error& e) {
        throw ConfigError(std::string("config syntax: ") + e.what());
    }

    ExperimentConfig cfg;
    bool cutoff_set = false;
    bool causal_set = false;
    for (const auto& item : items) {
        // Section markers emitted by the INI reader.
        if (item.name == "++" || item.name == "--") continue;
        const auto it = setters().find(item.name);
        if (it == setters().end()) throw ConfigError("unknown config key '" + item.fullname() + "'");
        it->second(cfg, item.name, item.inputs);
        cutoff_set |= item.name == "cutoff_radius";
        causal_set |= item.name == "causal_radius";
    }
    if (!cutoff_set) cfg.swarm.cutoff_radius = 6.0 * cfg.swarm.sigma3;
    if (!causal_set) cfg.analysis.causal_radius = 2.0 * cfg.swarm.sigma3;

    const double g = cfg.swarm.goal_dir.norm();
    if (!(g > 0.0) || !std::isfinite(g)) throw ConfigError("goal_dir must be a nonzero finite vector");
    cfg.swarm.goal_dir = cfg.swarm.goal_dir / g;

    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
    return parse_config(in);
}

std::string format_config(const ExperimentConfig& c) {
    using detail::format_double;
    std::ostringstream o;
    o << "# model (lengths and times are dimensionless)\n"
      << "sigma1 = " << format_double(c.swarm.sigma1) << "            # repulsion zone width [length]\n"
      << "sigma2 = " << format_double(c.swarm.sigma2) << "            # orientation zone width and density bandwidth [length]\n"
      << "sigma3 = " << format_double(c.swarm.sigma3) << "            # attraction zone width [length]\n"
      << "c_a = " << format_double(c.swarm.c_a) << "               # attraction weight [-]\n"
      << "leader_decay = " << format_double(c.swarm.leader_decay) << "      # leader goal-weight density scale [1/length^2]\n"
      << "goal_dir = [" << format_double(c.swarm.goal_dir.x) << ", " << format_double(c.swarm.goal_dir.y)
      << "]     # leader preferred direction [unit vector]\n"
      << "dt = " << format_double(c.swarm.dt) << "               # timestep [time]\n"
      << "relax_rate = " << format_double(c.swarm.relax_rate) << "        # relaxation rate toward desired velocity [1/time]\n"
      << "alpha = " << format_double(c.swarm.alpha) << "             # self-propulsion gain [1/time]\n"
      << "beta = " << format_double(c.swarm.beta) << "              # self-propulsion saturation [time/length^2]\n"
      << "cutoff_radius = " << format_double(c.swarm.cutoff_radius) << "    # kernel truncation radius [length]\n"
      << "# initial condition\n"
      << "n_side = " << c.lattice.n_side << "            # agents per lattice side\n"
      << "spacing = " << format_double(c.lattice.spacing) << "           # lattice spacing [length]\n"
      << "leader_fraction = " << format_double(c.lattice.leader_fraction) << "  # fraction of leaders [-]\n"
      << "initial_speed = " << format_double(c.lattice.speed) << "     # [length/time]\n"
      << "seed = " << c.seed << "\n"
      << "n_steps = " << c.n_steps << "\n"
      << "# analysis\n"
      << "k = " << c.analysis.k << "                 # history length [steps]\n"
      << "causal_radius = " << format_double(c.analysis.causal_radius) << "     # source-destination range [length]\n"
      << "estimator = \"" << to_string(c.analysis.estimator.kind) << "\"\n"
      << "kernel_radius = " << format_double(c.analysis.estimator.radius) << "  # box half-width [standardized units]\n"
      << "bin_width = " << format_double(c.analysis.estimator.bin_width) << "         # plug-in bins [standardized units], 0 = exact\n"
      << "step_lo = " << c.analysis.step_lo << "\n"
      << "step_hi = " << c.analysis.step_hi << "          # -1 = end of trajectory\n"
      << "# checks\n"
      << "polarization_threshold = " << format_double(c.polarization_threshold) << "\n"
      << "heading_tolerance_deg = " << format_double(c.heading_tolerance_deg) << "\n"
      << "# runtime\n"
      << "threads = " << c.threads << "           # 0 = all hardware threads\n"
      << "output_dir = \"" << c.output_dir.string() << "\"\n"
      << "trajectory_file = \"" << c.trajectory_file << "\"\n"
      << "order_file = \"" << c.order_file << "\"\n"
      << "report_file = \"" << c.report_file << "\"\n";
    return o.str();
}

} // namespace swarmlead
