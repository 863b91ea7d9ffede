#include "swarmlead/trajectory_io.hpp"

#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <string>

#include "swarmlead/errors.hpp"
#include "text_format.hpp"

namespace swarmlead {

namespace {

using detail::format_double;
using detail::parse_double;
using detail::parse_int;
using detail::split;
using detail::trim;

constexpr std::string_view kTrajectoryVersion = "# swarmlead trajectory v1";
constexpr std::string_view kOrderVersion = "# swarmlead order v1";
constexpr std::string_view kReportVersion = "# swarmlead cte-report v1";

constexpr std::string_view kTrajectoryHeader = "step,id,role,pos_x,pos_y,vel_x,vel_y";
constexpr std::string_view kOrderHeader = "step,polarization,heading,group_radius,centroid_x,centroid_y";
constexpr std::string_view kReportHeader =
    "step,follower_cte,leader_cte,n_follower_pairs,n_leader_pairs,n_follower_undefined,n_leader_undefined";

// Reads the version line, then "# key=value" metadata lines, then the column
// header. Returns the metadata.
std::map<std::string, std::string, std::less<>> read_preamble(std::istream& in, std::string_view version,
                                                              std::string_view header) {
    std::string line;
    if (!std::getline(in, line) || trim(line) != version)
        throw ParseError("expected '" + std::string(version) + "' as the first line");
    std::map<std::string, std::string, std::less<>> meta;
    while (std::getline(in, line)) {
        const auto t = trim(line);
        if (t.empty()) continue;
        if (t.front() != '#') {
            if (t != header) throw ParseError("unexpected column header '" + std::string(t) + "'");
            return meta;
        }
        const auto body = trim(t.substr(1));
        const auto eq = body.find('=');
        if (eq == std::string_view::npos) continue;
        meta.emplace(std::string(trim(body.substr(0, eq))), std::string(trim(body.substr(eq + 1))));
    }
    throw ParseError("missing column header");
}

const std::string& require(const std::map<std::string, std::string, std::less<>>& meta, std::string_view key) {
    const auto it = meta.find(key);
    if (it == meta.end()) throw ParseError("missing metadata '" + std::string(key) + "'");
    return it->second;
}

std::vector<std::string_view> row_fields(std::string_view line, std::size_t expected) {
    auto f = split(line, ',');
    if (f.size() != expected)
        throw ParseError("expected " + std::to_string(expected) + " fields in '" + std::string(line) + "'");
    return f;
}

std::string optional_field(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string("NA");
}

std::optional<double> parse_optional(std::string_view s) {
    if (trim(s) == "NA") return std::nullopt;
    return parse_double(s);
}

template <class Fn>
void write_file(const std::filesystem::path& path, Fn&& fn) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    fn(out);
    if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

template <class Fn>
auto read_file(const std::filesystem::path& path, Fn&& fn) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");
    return fn(in);
}

} // namespace

void write_trajectory(std::ostream& out, const Trajectory& traj) {
    const SwarmParams& p = traj.params;
    out << kTrajectoryVersion << '\n';
    out << "# seed=" << traj.seed << '\n';
    out << "# sigma1=" << format_double(p.sigma1) << '\n';
    out << "# sigma2=" << format_double(p.sigma2) << '\n';
    out << "# sigma3=" << format_double(p.sigma3) << '\n';
    out << "# c_a=" << format_double(p.c_a) << '\n';
    out << "# leader_decay=" << format_double(p.leader_decay) << '\n';
    out << "# goal_x=" << format_double(p.goal_dir.x) << '\n';
    out << "# goal_y=" << format_double(p.goal_dir.y) << '\n';
    out << "# dt=" << format_double(p.dt) << '\n';
    out << "# relax_rate=" << format_double(p.relax_rate) << '\n';
    out << "# alpha=" << format_double(p.alpha) << '\n';
    out << "# beta=" << format_double(p.beta) << '\n';
    out << "# cutoff_radius=" << format_double(p.cutoff_radius) << '\n';
    out << kTrajectoryHeader << '\n';
    for (const auto& snap : traj.snapshots) {
        for (const auto& a : snap.agents) {
            out << snap.step << ',' << a.id << ',' << to_string(a.role) << ',' << format_double(a.pos.x)
                << ',' << format_double(a.pos.y) << ',' << format_double(a.vel.x) << ','
                << format_double(a.vel.y) << '\n';
        }
    }
}

Trajectory read_trajectory(std::istream& in) {
    const auto meta = read_preamble(in, kTrajectoryVersion, kTrajectoryHeader);
    Trajectory traj;
    traj.seed = parse_int<std::uint64_t>(require(meta, "seed"));
    SwarmParams& p = traj.params;
    p.sigma1 = parse_double(require(meta, "sigma1"));
    p.sigma2 = parse_double(require(meta, "sigma2"));
    p.sigma3 = parse_double(require(meta, "sigma3"));
    p.c_a = parse_double(require(meta, "c_a"));
    p.leader_decay = parse_double(require(meta, "leader_decay"));
    p.goal_dir = {parse_double(require(meta, "goal_x")), parse_double(require(meta, "goal_y"))};
    p.dt = parse_double(require(meta, "dt"));
    p.relax_rate = parse_double(require(meta, "relax_rate"));
    p.alpha = parse_double(require(meta, "alpha"));
    p.beta = parse_double(require(meta, "beta"));
    p.cutoff_radius = parse_double(require(meta, "cutoff_radius"));

    std::string line;
    while (std::getline(in, line)) {
        const auto t = trim(line);
        if (t.empty()) continue;
        const auto f = row_fields(t, 7);
        const long step = parse_int<long>(f[0]);
        AgentState a;
        a.id = parse_int<std::size_t>(f[1]);
        a.role = parse_role(f[2]);
        a.pos = {parse_double(f[3]), parse_double(f[4])};
        a.vel = {parse_double(f[5]), parse_double(f[6])};

        if (traj.snapshots.empty() || traj.snapshots.back().step != step) {
            if (!traj.snapshots.empty() && step != traj.snapshots.back().step + 1)
                throw ParseError("non-consecutive step " + std::to_string(step));
            traj.snapshots.push_back(SwarmSnapshot{step, {}});
        }
        auto& agents = traj.snapshots.back().agents;
        if (a.id != agents.size()) throw ParseError("agent ids must be 0..N-1 in order at step " + std::to_string(step));
        agents.push_back(a);
    }
    if (traj.snapshots.empty()) throw ParseError("trajectory has no snapshots");
    const auto& first = traj.snapshots.front().agents;
    for (const auto& s : traj.snapshots) {
        if (s.agents.size() != first.size()) throw ParseError("agent count changes at step " + std::to_string(s.step));
        for (std::size_t i = 0; i < first.size(); ++i)
            if (s.agents[i].role != first[i].role)
                throw ParseError("role of agent " + std::to_string(i) + " changes at step " + std::to_string(s.step));
    }
    return traj;
}

void save_trajectory(const std::filesystem::path& path, const Trajectory& traj) {
    write_file(path, [&](std::ostream& out) { write_trajectory(out, traj); });
}

Trajectory load_trajectory(const std::filesystem::path& path) {
    return read_file(path, [](std::istream& in) { return read_trajectory(in); });
}

void write_order_parameters(std::ostream& out, std::span<const OrderParameters> rows) {
    out << kOrderVersion << '\n' << kOrderHeader << '\n';
    for (const auto& r : rows) {
        out << r.step << ',' << format_double(r.polarization) << ',' << format_double(r.heading) << ','
            << format_double(r.group_radius) << ',' << format_double(r.centroid.x) << ','
            << format_double(r.centroid.y) << '\n';
    }
}

std::vector<OrderParameters> read_order_parameters(std::istream& in) {
    read_preamble(in, kOrderVersion, kOrderHeader);
    std::vector<OrderParameters> rows;
    std::string line;
    while (std::getline(in, line)) {
        const auto t = trim(line);
        if (t.empty()) continue;
        const auto f = row_fields(t, 6);
        OrderParameters r;
        r.step = parse_int<long>(f[0]);
        r.polarization = parse_double(f[1]);
        r.heading = parse_double(f[2]);
        r.group_radius = parse_double(f[3]);
        r.centroid = {parse_double(f[4]), parse_double(f[5])};
        rows.push_back(r);
    }
    return rows;
}

void write_report(std::ostream& out, const CteReport& report) {
    out << kReportVersion << '\n';
    out << "# k=" << report.k << '\n';
    out << "# causal_radius=" << format_double(report.causal_radius) << '\n';
    out << "# estimator=" << to_string(report.estimator.kind) << '\n';
    out << "# radius=" << format_double(report.estimator.radius) << '\n';
    out << "# bin_width=" << format_double(report.estimator.bin_width) << '\n';
    out << kReportHeader << '\n';
    for (const auto& r : report.per_step) {
        out << r.step << ',' << optional_field(r.follower) << ',' << optional_field(r.leader) << ','
            << r.n_follower_pairs << ',' << r.n_leader_pairs << ',' << r.n_follower_undefined << ','
            << r.n_leader_undefined << '\n';
    }
}

CteReport read_report(std::istream& in) {
    const auto meta = read_preamble(in, kReportVersion, kReportHeader);
    CteReport report;
    report.k = parse_int<int>(require(meta, "k"));
    report.causal_radius = parse_double(require(meta, "causal_radius"));
    try {
        report.estimator.kind = parse_estimator_kind(require(meta, "estimator"));
    } catch (const ConfigError& e) {
        throw ParseError(e.what());
    }
    report.estimator.radius = parse_double(require(meta, "radius"));
    report.estimator.bin_width = parse_double(require(meta, "bin_width"));

    std::string line;
    while (std::getline(in, line)) {
        const auto t = trim(line);
        if (t.empty()) continue;
        const auto f = row_fields(t, 7);
        CteStepRecord r;
        r.step = parse_int<long>(f[0]);
        r.follower = parse_optional(f[1]);
        r.leader = parse_optional(f[2]);
        r.n_follower_pairs = parse_int<std::size_t>(f[3]);
        r.n_leader_pairs = parse_int<std::size_t>(f[4]);
        r.n_follower_undefined = parse_int<std::size_t>(f[5]);
        r.n_leader_undefined = parse_int<std::size_t>(f[6]);
        report.per_step.push_back(r);
    }
    return report;
}

void save_report(const std::filesystem::path& path, const CteReport& report) {
    write_file(path, [&](std::ostream& out) { write_report(out, report); });
}

CteReport load_report(const std::filesystem::path& path) {
    return read_file(path, [](std::istream& in) { return read_report(in); });
}

} // namespace swarmlead
