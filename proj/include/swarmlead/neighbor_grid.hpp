#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "swarmlead/vec2.hpp"

namespace swarmlead {

/// Uniform-grid spatial hash over a fixed set of points.
///
/// Points are bucketed into square cells of side `cell_size`. A radius query
/// visits only the cells overlapping the query disk and returns the matching
/// indices in ascending order, so callers summing over the result see the
/// same order as a plain all-pairs loop.
class NeighborGrid {
public:
    NeighborGrid(std::span<const Vec2> points, double cell_size);

    /// Indices j with |points[j] - center| <= radius, ascending.
    void query(Vec2 center, double radius, std::vector<std::size_t>& out) const;

    double cell_size() const noexcept { return cell_size_; }
    std::size_t occupied_cells() const noexcept { return cells_.size(); }

private:
    using CellKey = std::int64_t;

    std::int64_t coord(double v) const;
    static CellKey key(std::int64_t cx, std::int64_t cy);

    std::span<const Vec2> points_;
    double cell_size_;
    // Each cell maps to a contiguous range of `order_`.
    std::unordered_map<CellKey, std::pair<std::size_t, std::size_t>> cells_;
    std::vector<std::size_t> order_;
};

} // namespace swarmlead
