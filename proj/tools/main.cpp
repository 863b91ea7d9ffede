#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

#include "swarmlead/commands.hpp"
#include "swarmlead/errors.hpp"

using namespace swarmlead;

int main(int argc, char** argv) {
    CLI::App app{"Covert-leader swarm simulation and conditional transfer entropy analysis"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    bool quiet = false;

    auto* sim = app.add_subcommand("simulate", "Run the lattice self-organization experiment");
    sim->add_option("-c,--config", config_path, "Key-value config file");
    sim->add_option("-s,--seed", seed, "Override the config seed");
    sim->add_option("-o,--out-dir", out_dir, "Output directory");
    sim->add_flag("-q,--quiet", quiet, "Only print errors");

    AnalyzeOptions analyze;
    std::string analyze_config;
    auto* ana = app.add_subcommand("analyze", "Per-role conditional transfer entropy of a trajectory");
    ana->add_option("trajectory", analyze.trajectory, "Trajectory file")->required();
    ana->add_option("-c,--config", analyze_config, "Config file supplying the analysis settings");
    ana->add_option("-r,--report", analyze.report, "Output report path")->default_val("cte_report.csv");
    ana->add_option("--surrogates", analyze.surrogates, "Source-shuffled surrogates for a zero band");
    ana->add_option("--surrogate-seed", analyze.surrogate_seed, "Seed for surrogate shuffles");
    ana->add_option("-j,--threads", analyze.threads, "Worker threads (0 = all)");
    ana->add_flag("-q,--quiet", quiet, "Only print errors");

    ReportOptions report;
    std::string order_path;
    std::string delimiter = ",";
    auto* rep = app.add_subcommand("report", "Plot-ready tables from one or more CTE reports");
    rep->add_option("reports", report.reports, "Report files (several = aggregate across seeds)")->required();
    rep->add_option("--order", order_path, "Order-parameter file to join as a polarization column");
    rep->add_option("-d,--delimiter", delimiter, "Column delimiter (\\t for tab)");
    rep->add_option("-o,--output", out_dir, "Write the table here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    std::ofstream null_stream;
    std::ostream& log = quiet ? static_cast<std::ostream&>(null_stream) : std::cerr;

    try {
        if (*sim) {
            ExperimentConfig config = config_path.empty() ? ExperimentConfig{} : load_config(config_path);
            if (seed) config.seed = *seed;
            if (!out_dir.empty()) config.output_dir = out_dir;
            const SimulateResult r = cmd_simulate(config, log);
            if (r.exit_code == kExitOk && r.final_order)
                std::cout << "polarization " << r.final_order->polarization << " heading_rad "
                          << r.final_order->heading << '\n';
            return r.exit_code;
        }
        if (*ana) {
            if (!analyze_config.empty()) analyze.analysis = load_config(analyze_config).analysis;
            return cmd_analyze(analyze, log);
        }
        if (*rep) {
            if (!order_path.empty()) report.order = order_path;
            report.delimiter = delimiter == "\\t" ? '\t' : delimiter.empty() ? ',' : delimiter[0];
            if (out_dir.empty()) return cmd_report(report, std::cout, std::cerr);
            std::ofstream out(out_dir);
            if (!out) {
                std::cerr << "error: cannot write " << out_dir << '\n';
                return kExitUsage;
            }
            return cmd_report(report, out, std::cerr);
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
