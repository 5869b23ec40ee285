#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rmpd/space.hpp"
#include "rmpd/world.hpp"

namespace rmpd {

void* allocate_large_block(std::size_t bytes);
void free_large_block(void* p) noexcept;

/// Allocator for large lookup tables: 2 MiB aligned and, on Linux, advised for transparent
/// huge pages so random lookups miss the TLB less often.
template <class T>
struct LargePageAllocator {
    using value_type = T;
    LargePageAllocator() = default;
    template <class U>
    LargePageAllocator(const LargePageAllocator<U>&) noexcept {}
    [[nodiscard]] T* allocate(std::size_t n) { return static_cast<T*>(allocate_large_block(n * sizeof(T))); }
    void deallocate(T* p, std::size_t) noexcept { free_large_block(p); }
    template <class U>
    bool operator==(const LargePageAllocator<U>&) const noexcept { return true; }
};

/// Grid-sampled signed clearance over a world's bounds.
///
/// Cells are cubes of edge resolution() anchored at the bounds' lower corner; the last cell
/// on an axis may overhang the upper bound. A cell's value is positive when its center is
/// in collision, and its magnitude is the distance from that center to the nearest cell
/// center of opposite occupancy. If no opposite cell exists the magnitude is the distance
/// from the center to the nearest face of the world bounds.
class SignedDistanceField {
public:
    SignedDistanceField(State origin, double resolution, std::vector<std::size_t> shape,
                        std::vector<double> values);

    [[nodiscard]] std::size_t dim() const noexcept { return shape_.size(); }
    [[nodiscard]] double resolution() const noexcept { return resolution_; }
    [[nodiscard]] const State& origin() const noexcept { return origin_; }
    [[nodiscard]] std::span<const std::size_t> shape() const noexcept { return shape_; }
    [[nodiscard]] std::size_t cell_count() const noexcept { return values_.size(); }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }

    /// Row-major flat index with axis 0 varying fastest.
    [[nodiscard]] std::size_t flat_index(std::span<const std::size_t> cell) const noexcept;
    [[nodiscard]] std::vector<std::size_t> cell_of_flat(std::size_t flat) const;
    [[nodiscard]] double value(std::span<const std::size_t> cell) const noexcept {
        return values_[flat_index(cell)];
    }
    [[nodiscard]] State cell_center(std::span<const std::size_t> cell) const;
    /// Cell containing p, or nullopt outside the grid.
    [[nodiscard]] std::optional<std::size_t> locate(std::span<const double> p) const noexcept;
    /// Extent of the grid (may exceed the world bounds by less than one cell per axis).
    [[nodiscard]] SpaceBounds grid_bounds() const;

private:
    State origin_;
    double resolution_;
    std::vector<std::size_t> shape_;
    std::vector<double, LargePageAllocator<double>> values_;
    std::vector<double> upper_;          // grid extent per axis
    std::vector<std::size_t> strides_;
};

enum class SdfMethod {
    automatic,           ///< exhaustive for small grids, distance transform otherwise
    exhaustive,          ///< nearest opposite boundary cell by direct search (SIMD kernel)
    distance_transform,  ///< separable exact Euclidean transform, one pass per axis
};

/// Grid-cell occupancy as sampled at cell centers (row-major, axis 0 fastest). Uncounted.
struct OccupancyGrid {
    State origin;
    double resolution;
    std::vector<std::size_t> shape;
    std::vector<std::uint8_t> occupied;
};

[[nodiscard]] OccupancyGrid sample_occupancy(const World& world, double resolution);

/// Throws std::invalid_argument if resolution is not positive or any axis has fewer than 3 cells.
[[nodiscard]] SignedDistanceField build_sdf(const World& world, double resolution,
                                            SdfMethod method = SdfMethod::automatic);

/// Field value at the cell containing p. Outside the grid, returns the positive distance
/// from p to the grid box (outside counts as in collision).
[[nodiscard]] double clearance_cost(const SignedDistanceField& sdf, const State& p);

}  // namespace rmpd
