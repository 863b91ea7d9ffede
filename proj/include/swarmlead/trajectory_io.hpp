#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>

#include "swarmlead/cte.hpp"
#include "swarmlead/integrator.hpp"
#include "swarmlead/order_parameters.hpp"

namespace swarmlead {

// All files are comma-separated text led by a format-version line. Doubles
// are written in shortest round-trip form, so write -> read is lossless.
// Readers throw ParseError on malformed input.

void write_trajectory(std::ostream& out, const Trajectory& traj);
Trajectory read_trajectory(std::istream& in);
void save_trajectory(const std::filesystem::path& path, const Trajectory& traj);
Trajectory load_trajectory(const std::filesystem::path& path);

void write_order_parameters(std::ostream& out, std::span<const OrderParameters> rows);
std::vector<OrderParameters> read_order_parameters(std::istream& in);

/// Absent role averages are written as "NA".
void write_report(std::ostream& out, const CteReport& report);
CteReport read_report(std::istream& in);
void save_report(const std::filesystem::path& path, const CteReport& report);
CteReport load_report(const std::filesystem::path& path);

} // namespace swarmlead
