#pragma once

// Data-parallel inner loops shared by the planners and the distance field.
//
// Every kernel has a scalar reference implementation and, where the build
// target allows it, an AVX2 (x86-64) or NEON (aarch64) variant. The active
// variant is picked once at first use from the host CPU features; setting the
// environment variable RMPD_SIMD=scalar|avx2|neon overrides the choice.
//
// All variants perform the same IEEE operations in the same order per lane
// (no FMA contraction), so results are bitwise identical across variants.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace rmpd::simd {

enum class Isa { scalar, avx2, neon };

struct KernelTable {
    /// out[i] = sum over axes d, in order, of (axes[d][i] - query[d])^2 for i < count.
    void (*squared_distances_f64)(const double* const* axes, std::size_t dim, std::size_t count,
                                  const double* query, double* out);
    /// Minimum over i < count of sum_d (axes[d][i] - query[d])^2. Caller keeps every
    /// partial sum below 2^31. Returns INT64_MAX when count == 0.
    std::int64_t (*min_squared_distance_i32)(const std::int32_t* const* axes, std::size_t dim,
                                             std::size_t count, const std::int32_t* query);
};

[[nodiscard]] std::string_view isa_name(Isa isa) noexcept;

/// Kernel table for a specific variant, or nullptr when the build or CPU lacks it.
[[nodiscard]] const KernelTable* kernels_for(Isa isa) noexcept;
[[nodiscard]] std::vector<Isa> available_isas();

[[nodiscard]] Isa active_isa();
[[nodiscard]] const KernelTable& kernels();
/// Pins the active variant. Throws std::invalid_argument if unavailable.
void force_isa(Isa isa);

// Span conveniences over the active table.
void squared_distances(std::span<const double* const> axes, std::size_t count,
                       std::span<const double> query, std::span<double> out);
[[nodiscard]] std::int64_t min_squared_distance(std::span<const std::int32_t* const> axes,
                                                std::size_t count,
                                                std::span<const std::int32_t> query);

// Variant entry points; defined in the per-ISA translation units.
namespace scalar {
void squared_distances_f64(const double* const* axes, std::size_t dim, std::size_t count,
                           const double* query, double* out);
std::int64_t min_squared_distance_i32(const std::int32_t* const* axes, std::size_t dim,
                                      std::size_t count, const std::int32_t* query);
}  // namespace scalar
namespace avx2 {
void squared_distances_f64(const double* const* axes, std::size_t dim, std::size_t count,
                           const double* query, double* out);
std::int64_t min_squared_distance_i32(const std::int32_t* const* axes, std::size_t dim,
                                      std::size_t count, const std::int32_t* query);
}  // namespace avx2
namespace neon {
void squared_distances_f64(const double* const* axes, std::size_t dim, std::size_t count,
                           const double* query, double* out);
std::int64_t min_squared_distance_i32(const std::int32_t* const* axes, std::size_t dim,
                                      std::size_t count, const std::int32_t* query);
}  // namespace neon

}  // namespace rmpd::simd
