#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "swarmlead/config.hpp"
#include "swarmlead/order_parameters.hpp"

namespace swarmlead {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 2,
    kExitDivergence = 3,
};

struct SimulateResult {
    int exit_code{kExitOk};
    std::filesystem::path trajectory_path;
    std::filesystem::path order_path;
    std::optional<OrderParameters> final_order;
};

/// Runs the lattice experiment described by `config` and writes the
/// trajectory and per-step order parameters into config.output_dir.
SimulateResult cmd_simulate(const ExperimentConfig& config, std::ostream& log);

struct AnalyzeOptions {
    std::filesystem::path trajectory;
    std::filesystem::path report;
    AnalysisConfig analysis;
    int surrogates{0};          // number of source-shuffled surrogates for the zero band
    std::uint64_t surrogate_seed{1};
    unsigned threads{1};
};

int cmd_analyze(const AnalyzeOptions& options, std::ostream& log);

struct ReportOptions {
    std::vector<std::filesystem::path> reports;
    std::optional<std::filesystem::path> order; // joined as a polarization column
    char delimiter{','};
};

/// One table for a single report; per-step mean and standard deviation per
/// role across several reports.
int cmd_report(const ReportOptions& options, std::ostream& out, std::ostream& log);

} // namespace swarmlead
