#pragma once

#include <cstddef>
#include <vector>

#include "rmpd/space.hpp"

namespace rmpd {

/// Growable point cloud stored one coordinate array per axis, so that nearest-neighbour and
/// radius queries run as a single batched distance kernel over all points.
///
/// Queries reuse an internal scratch buffer: one instance must not be queried concurrently.
class PointSet {
public:
    explicit PointSet(std::size_t dim);

    [[nodiscard]] std::size_t dim() const noexcept { return axes_.size(); }
    [[nodiscard]] std::size_t size() const noexcept { return axes_.empty() ? 0 : axes_[0].size(); }

    std::size_t push(const State& p);
    [[nodiscard]] State at(std::size_t i) const;

    /// Index of the closest point; ties resolve to the lowest index. Requires size() > 0.
    [[nodiscard]] std::size_t nearest(const State& q) const;
    /// Indices with squared distance <= radius^2, ascending.
    [[nodiscard]] std::vector<std::size_t> within(const State& q, double radius) const;
    /// Up to k closest indices ordered by (distance, index), skipping `exclude`.
    [[nodiscard]] std::vector<std::size_t> k_nearest(const State& q, std::size_t k,
                                                     std::size_t exclude = static_cast<std::size_t>(-1)) const;

    /// Squared distances from q to every point (kernel output, valid until the next query).
    [[nodiscard]] const std::vector<double>& squared_distances_to(const State& q) const;

private:
    std::vector<std::vector<double>> axes_;
    mutable std::vector<double> scratch_;
    mutable std::vector<const double*> pointers_;
};

}  // namespace rmpd
