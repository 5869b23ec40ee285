#include "rmpd/simd/kernels.hpp"

#include <algorithm>
#include <limits>

namespace rmpd::simd::scalar {

void squared_distances_f64(const double* const* axes, std::size_t dim, std::size_t count,
                           const double* query, double* out) {
    for (std::size_t i = 0; i < count; ++i) {
        double sum = 0.0;
        for (std::size_t d = 0; d < dim; ++d) {
            const double diff = axes[d][i] - query[d];
            sum = sum + diff * diff;
        }
        out[i] = sum;
    }
}

std::int64_t min_squared_distance_i32(const std::int32_t* const* axes, std::size_t dim,
                                      std::size_t count, const std::int32_t* query) {
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    for (std::size_t i = 0; i < count; ++i) {
        std::int32_t sum = 0;
        for (std::size_t d = 0; d < dim; ++d) {
            const std::int32_t diff = axes[d][i] - query[d];
            sum += diff * diff;
        }
        best = std::min<std::int64_t>(best, sum);
    }
    return best;
}

}  // namespace rmpd::simd::scalar
