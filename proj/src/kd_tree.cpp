#include "swarmlead/kd_tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace swarmlead {

namespace {
constexpr std::uint32_t kLeafSize = 16;
}

KdTree::KdTree(std::vector<double> points, std::size_t dims)
    : dims_(dims), n_(dims == 0 ? 0 : points.size() / dims),
      points_(std::move(points)) {
    if (dims_ == 0) throw std::invalid_argument("KdTree: dims must be positive");
    if (points_.size() % dims_ != 0) throw std::invalid_argument("KdTree: ragged point buffer");
    if (n_ > std::numeric_limits<std::uint32_t>::max())
        throw std::length_error("KdTree: too many points");
    if (n_ > 0) build(0, static_cast<std::uint32_t>(n_));
}

std::int32_t KdTree::build(std::uint32_t begin, std::uint32_t end) {
    const auto id = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back({begin, end});
    bounds_.resize(bounds_.size() + 2 * dims_);

    double* lo = bounds_.data() + 2 * dims_ * id;
    double* hi = lo + dims_;
    std::fill(lo, lo + dims_, std::numeric_limits<double>::infinity());
    std::fill(hi, hi + dims_, -std::numeric_limits<double>::infinity());
    for (std::uint32_t i = begin; i < end; ++i) {
        const double* p = point(i);
        for (std::size_t d = 0; d < dims_; ++d) {
            lo[d] = std::min(lo[d], p[d]);
            hi[d] = std::max(hi[d], p[d]);
        }
    }
    if (end - begin <= kLeafSize) return id;

    std::size_t split = 0;
    double widest = -1.0;
    for (std::size_t d = 0; d < dims_; ++d) {
        if (hi[d] - lo[d] > widest) {
            widest = hi[d] - lo[d];
            split = d;
        }
    }
    if (widest <= 0.0) return id; // all points coincide

    // Partition the point rows by the median along `split` through an index permutation.
    std::vector<std::uint32_t> idx(end - begin);
    std::iota(idx.begin(), idx.end(), begin);
    const std::uint32_t mid = (end - begin) / 2;
    std::nth_element(idx.begin(), idx.begin() + mid, idx.end(), [&](std::uint32_t a, std::uint32_t b) {
        return point(a)[split] < point(b)[split];
    });
    std::vector<double> reordered(static_cast<std::size_t>(end - begin) * dims_);
    for (std::size_t r = 0; r < idx.size(); ++r)
        std::copy_n(point(idx[r]), dims_, reordered.data() + r * dims_);
    std::copy(reordered.begin(), reordered.end(), points_.begin() + static_cast<std::ptrdiff_t>(begin * dims_));

    const std::int32_t left = build(begin, begin + mid);
    const std::int32_t right = build(begin + mid, end);
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
}

std::size_t KdTree::count_within(std::span<const double> center, double radius) const {
    if (center.size() != dims_) throw std::invalid_argument("KdTree: query has the wrong dimension");
    if (n_ == 0) return 0;
    thread_local std::vector<double> box;
    box.resize(2 * dims_);
    for (std::size_t d = 0; d < dims_; ++d) {
        box[d] = center[d] - radius;
        box[dims_ + d] = center[d] + radius;
    }
    return count(0, box.data(), box.data() + dims_);
}

std::size_t KdTree::count(std::int32_t node, const double* lo, const double* hi) const {
    const double* nlo = box_lo(node);
    const double* nhi = box_hi(node);
    bool inside = true;
    for (std::size_t d = 0; d < dims_; ++d) {
        if (nhi[d] < lo[d] || nlo[d] > hi[d]) return 0;
        if (nlo[d] < lo[d] || nhi[d] > hi[d]) inside = false;
    }
    const Node& nd = nodes_[static_cast<std::size_t>(node)];
    if (inside) return nd.end - nd.begin;
    if (nd.left < 0) {
        std::size_t c = 0;
        for (std::uint32_t i = nd.begin; i < nd.end; ++i) {
            const double* p = point(i);
            std::size_t d = 0;
            while (d < dims_ && p[d] >= lo[d] && p[d] <= hi[d]) ++d;
            if (d == dims_) ++c;
        }
        return c;
    }
    return count(nd.left, lo, hi) + count(nd.right, lo, hi);
}

} // namespace swarmlead
