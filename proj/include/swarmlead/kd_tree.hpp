#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace swarmlead {

/// Static k-d tree answering fixed-radius range counts under the max norm.
///
/// Each node keeps its bounding box, so subtrees that lie entirely inside
/// the query box are counted without being visited.
class KdTree {
public:
    /// `points` is row-major, `dims` values per point.
    KdTree(std::vector<double> points, std::size_t dims);

    /// Number of stored points p with max_d |p_d - center_d| <= radius.
    std::size_t count_within(std::span<const double> center, double radius) const;

    std::size_t size() const noexcept { return n_; }
    std::size_t dims() const noexcept { return dims_; }

private:
    struct Node {
        std::uint32_t begin;
        std::uint32_t end;
        std::int32_t left{-1};
        std::int32_t right{-1};
    };

    std::int32_t build(std::uint32_t begin, std::uint32_t end);
    std::size_t count(std::int32_t node, const double* lo, const double* hi) const;

    const double* point(std::size_t i) const { return points_.data() + i * dims_; }
    const double* box_lo(std::int32_t node) const { return bounds_.data() + 2 * dims_ * node; }
    const double* box_hi(std::int32_t node) const { return box_lo(node) + dims_; }

    std::size_t dims_;
    std::size_t n_;
    std::vector<double> points_;
    std::vector<Node> nodes_;
    std::vector<double> bounds_; // per node: lo[dims], hi[dims]
};

} // namespace swarmlead
