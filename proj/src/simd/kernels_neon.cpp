#include "rmpd/simd/kernels.hpp"

#include <arm_neon.h>

#include <algorithm>
#include <limits>

namespace rmpd::simd::neon {

void squared_distances_f64(const double* const* axes, std::size_t dim, std::size_t count,
                           const double* query, double* out) {
    std::size_t i = 0;
    for (; i + 2 <= count; i += 2) {
        float64x2_t sum = vdupq_n_f64(0.0);
        for (std::size_t d = 0; d < dim; ++d) {
            const float64x2_t diff = vsubq_f64(vld1q_f64(axes[d] + i), vdupq_n_f64(query[d]));
            // Separate multiply and add; vfmaq would round differently from the scalar path.
            sum = vaddq_f64(sum, vmulq_f64(diff, diff));
        }
        vst1q_f64(out + i, sum);
    }
    for (; i < count; ++i) {
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
    std::size_t i = 0;
    if (count >= 4) {
        int32x4_t best4 = vdupq_n_s32(std::numeric_limits<std::int32_t>::max());
        for (; i + 4 <= count; i += 4) {
            int32x4_t sum = vdupq_n_s32(0);
            for (std::size_t d = 0; d < dim; ++d) {
                const int32x4_t diff = vsubq_s32(vld1q_s32(axes[d] + i), vdupq_n_s32(query[d]));
                sum = vmlaq_s32(sum, diff, diff);
            }
            best4 = vminq_s32(best4, sum);
        }
        best = std::min<std::int64_t>(best, vminvq_s32(best4));
    }
    for (; i < count; ++i) {
        std::int32_t sum = 0;
        for (std::size_t d = 0; d < dim; ++d) {
            const std::int32_t diff = axes[d][i] - query[d];
            sum += diff * diff;
        }
        best = std::min<std::int64_t>(best, sum);
    }
    return best;
}

}  // namespace rmpd::simd::neon
