#include "swarmlead/density.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>

#include "swarmlead/errors.hpp"
#include "swarmlead/kd_tree.hpp"

namespace swarmlead {

std::string to_string(EstimatorKind kind) {
    return kind == EstimatorKind::PlugIn ? "plugin" : "box";
}

EstimatorKind parse_estimator_kind(const std::string& text) {
    if (text == "box" || text == "box_kernel") return EstimatorKind::BoxKernel;
    if (text == "plugin" || text == "plug_in") return EstimatorKind::PlugIn;
    throw ConfigError("unknown estimator '" + text + "' (expected box or plugin)");
}

namespace {

// Column ranges [first, last) of the four subspaces in the flat layout
// [x_next (2) | x_hist (2k) | w (1) | y (4)].
struct Subspace {
    std::size_t first;
    std::size_t last;
    std::size_t dims() const { return last - first; }
};

std::array<Subspace, 4> subspaces(int k) {
    const std::size_t hist_end = 2 + 2 * static_cast<std::size_t>(k) + 1; // through w
    const std::size_t all = feature_count(k);
    return {{
        {0, all},      // x_next, x_hist, w, y
        {2, all},      // x_hist, w, y
        {0, hist_end}, // x_next, x_hist, w
        {2, hist_end}, // x_hist, w
    }};
}

JointCounts to_counts(const std::array<std::size_t, 4>& c) {
    return {c[0], c[1], c[2], c[3]};
}

// Per-dimension affine map z = (v - mean) / sd, sd = 1 for constant columns.
struct Standardizer {
    std::vector<double> mean;
    std::vector<double> inv_sd;

    Standardizer(const std::vector<double>& rows, std::size_t dims) : mean(dims, 0.0), inv_sd(dims, 1.0) {
        const std::size_t n = rows.size() / dims;
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t d = 0; d < dims; ++d) mean[d] += rows[r * dims + d];
        for (double& m : mean) m /= static_cast<double>(n);
        std::vector<double> var(dims, 0.0);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t d = 0; d < dims; ++d) {
                const double e = rows[r * dims + d] - mean[d];
                var[d] += e * e;
            }
        for (std::size_t d = 0; d < dims; ++d) {
            const double sd = std::sqrt(var[d] / static_cast<double>(n));
            if (sd > 0.0 && std::isfinite(sd)) inv_sd[d] = 1.0 / sd;
        }
    }

    void apply(std::span<double> row) const {
        for (std::size_t d = 0; d < row.size(); ++d) row[d] = (row[d] - mean[d]) * inv_sd[d];
    }
};

struct RoleSubset {
    std::vector<double> rows;
    std::size_t dims{0};
    std::size_t count{0};
    int k{0};
};

RoleSubset collect(std::span<const Observation> observations, Role role) {
    RoleSubset s;
    for (const auto& obs : observations) {
        if (obs.dest_role != role) continue;
        if (s.count == 0) {
            s.k = obs.k();
            if (s.k < 1) throw std::invalid_argument("observation without history");
            s.dims = feature_count(s.k);
        } else if (obs.k() != s.k) {
            throw std::invalid_argument("observations mix history lengths");
        }
        const std::size_t off = s.rows.size();
        s.rows.resize(off + s.dims);
        write_features(obs, std::span<double>(s.rows).subspan(off, s.dims));
        ++s.count;
    }
    if (s.count == 0)
        throw InsufficientData("no observations with " + std::string(to_string(role)) +
                               " destinations");
    return s;
}

class BoxKernelDensity final : public DensityModel {
public:
    BoxKernelDensity(RoleSubset subset, Role role, double radius)
        : DensityModel(role, subset.k, subset.count), radius_(radius),
          scale_(subset.rows, subset.dims), spaces_(subspaces(subset.k)) {
        for (std::size_t r = 0; r < subset.count; ++r)
            scale_.apply(std::span<double>(subset.rows).subspan(r * subset.dims, subset.dims));
        for (const Subspace& sp : spaces_) {
            std::vector<double> cols;
            cols.reserve(subset.count * sp.dims());
            for (std::size_t r = 0; r < subset.count; ++r) {
                const double* row = subset.rows.data() + r * subset.dims;
                cols.insert(cols.end(), row + sp.first, row + sp.last);
            }
            trees_.emplace_back(std::move(cols), sp.dims());
        }
    }

    JointCounts counts(const Observation& obs) const override {
        thread_local std::vector<double> row;
        row.resize(feature_count(obs.k()));
        write_features(obs, row);
        scale_.apply(row);
        std::array<std::size_t, 4> c{};
        for (std::size_t s = 0; s < 2; ++s) c[s] = count(s, row);

        // Observations arrive grouped by (destination, step), and every source
        // of a group shares the y-free part, so the last result is reused.
        thread_local std::uint64_t memo_model = 0;
        thread_local std::vector<double> memo_key;
        thread_local std::array<std::size_t, 2> memo_counts{};
        const std::size_t key_len = spaces_[2].last;
        const std::span<const double> key(row.data(), key_len);
        if (memo_model == serial_ && std::equal(key.begin(), key.end(), memo_key.begin(), memo_key.end())) {
            c[2] = memo_counts[0];
            c[3] = memo_counts[1];
        } else {
            c[2] = count(2, row);
            c[3] = count(3, row);
            memo_model = serial_;
            memo_key.assign(key.begin(), key.end());
            memo_counts = {c[2], c[3]};
        }
        return to_counts(c);
    }

private:
    std::size_t count(std::size_t s, std::span<const double> row) const {
        const Subspace& sp = spaces_[s];
        return trees_[s].count_within(row.subspan(sp.first, sp.dims()), radius_);
    }

    static inline std::atomic<std::uint64_t> next_serial_{1};

    std::uint64_t serial_{next_serial_++};
    double radius_;
    Standardizer scale_;
    std::array<Subspace, 4> spaces_;
    std::vector<KdTree> trees_;
};

class PlugInDensity final : public DensityModel {
public:
    PlugInDensity(RoleSubset subset, Role role, double bin_width)
        : DensityModel(role, subset.k, subset.count), bin_width_(bin_width),
          scale_(subset.rows, subset.dims), spaces_(subspaces(subset.k)) {
        for (std::size_t r = 0; r < subset.count; ++r) {
            std::span<double> row(subset.rows.data() + r * subset.dims, subset.dims);
            discretize(row);
            for (std::size_t s = 0; s < 4; ++s)
                ++tables_[s][std::vector<double>(row.begin() + static_cast<std::ptrdiff_t>(spaces_[s].first),
                                                 row.begin() + static_cast<std::ptrdiff_t>(spaces_[s].last))];
        }
    }

    JointCounts counts(const Observation& obs) const override {
        std::vector<double> row(feature_count(obs.k()));
        write_features(obs, row);
        discretize(row);
        std::array<std::size_t, 4> c{};
        for (std::size_t s = 0; s < 4; ++s) {
            const auto it = tables_[s].find(std::vector<double>(
                row.begin() + static_cast<std::ptrdiff_t>(spaces_[s].first),
                row.begin() + static_cast<std::ptrdiff_t>(spaces_[s].last)));
            c[s] = it == tables_[s].end() ? 0 : it->second;
        }
        return to_counts(c);
    }

private:
    void discretize(std::span<double> row) const {
        if (bin_width_ <= 0.0) return;
        scale_.apply(row);
        for (double& v : row) v = std::floor(v / bin_width_);
    }

    double bin_width_;
    Standardizer scale_;
    std::array<Subspace, 4> spaces_;
    std::array<std::map<std::vector<double>, std::size_t>, 4> tables_;
};

} // namespace

std::unique_ptr<DensityModel> fit_density(std::span<const Observation> observations, Role role,
                                          const EstimatorConfig& config) {
    RoleSubset subset = collect(observations, role);
    switch (config.kind) {
    case EstimatorKind::BoxKernel:
        if (!(config.radius > 0.0)) throw ConfigError("box kernel radius must be positive");
        return std::make_unique<BoxKernelDensity>(std::move(subset), role, config.radius);
    case EstimatorKind::PlugIn:
        if (!(config.bin_width >= 0.0)) throw ConfigError("plug-in bin width must be >= 0");
        return std::make_unique<PlugInDensity>(std::move(subset), role, config.bin_width);
    }
    throw ConfigError("unknown estimator kind");
}

} // namespace swarmlead
