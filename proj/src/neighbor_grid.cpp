#include "swarmlead/neighbor_grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace swarmlead {

NeighborGrid::NeighborGrid(std::span<const Vec2> points, double cell_size)
    : points_(points), cell_size_(cell_size) {
    if (!(cell_size > 0.0) || !std::isfinite(cell_size))
        throw std::invalid_argument("NeighborGrid: cell size must be positive and finite");

    std::vector<std::pair<CellKey, std::size_t>> keyed;
    keyed.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!points[i].finite())
            throw std::invalid_argument("NeighborGrid: non-finite point " + std::to_string(i));
        keyed.emplace_back(key(coord(points[i].x), coord(points[i].y)), i);
    }
    std::sort(keyed.begin(), keyed.end());

    order_.reserve(keyed.size());
    for (std::size_t a = 0; a < keyed.size();) {
        std::size_t b = a;
        while (b < keyed.size() && keyed[b].first == keyed[a].first) {
            order_.push_back(keyed[b].second);
            ++b;
        }
        cells_.emplace(keyed[a].first, std::make_pair(a, b));
        a = b;
    }
}

std::int64_t NeighborGrid::coord(double v) const {
    return static_cast<std::int64_t>(std::floor(v / cell_size_));
}

NeighborGrid::CellKey NeighborGrid::key(std::int64_t cx, std::int64_t cy) {
    return (cx << 32) ^ (cy & 0xffffffffLL);
}

void NeighborGrid::query(Vec2 center, double radius, std::vector<std::size_t>& out) const {
    out.clear();
    const double r2 = radius * radius;
    const std::int64_t x0 = coord(center.x - radius);
    const std::int64_t x1 = coord(center.x + radius);
    const std::int64_t y0 = coord(center.y - radius);
    const std::int64_t y1 = coord(center.y + radius);

    // Sparse swarms: scanning occupied cells beats scanning a huge empty box.
    const auto box_cells = static_cast<double>(x1 - x0 + 1) * static_cast<double>(y1 - y0 + 1);
    if (box_cells > static_cast<double>(cells_.size())) {
        for (const auto& [k, range] : cells_) {
            for (std::size_t a = range.first; a < range.second; ++a) {
                const std::size_t j = order_[a];
                if ((points_[j] - center).norm2() <= r2) out.push_back(j);
            }
        }
    } else {
        for (std::int64_t cx = x0; cx <= x1; ++cx) {
            for (std::int64_t cy = y0; cy <= y1; ++cy) {
                const auto it = cells_.find(key(cx, cy));
                if (it == cells_.end()) continue;
                for (std::size_t a = it->second.first; a < it->second.second; ++a) {
                    const std::size_t j = order_[a];
                    if ((points_[j] - center).norm2() <= r2) out.push_back(j);
                }
            }
        }
    }
    std::sort(out.begin(), out.end());
}

} // namespace swarmlead
