#include "rmpd/simd/kernels.hpp"

#include <immintrin.h>

#include <algorithm>
#include <limits>

namespace rmpd::simd::avx2 {

void squared_distances_f64(const double* const* axes, std::size_t dim, std::size_t count,
                           const double* query, double* out) {
    std::size_t i = 0;
    for (; i + 4 <= count; i += 4) {
        __m256d sum = _mm256_setzero_pd();
        for (std::size_t d = 0; d < dim; ++d) {
            const __m256d diff = _mm256_sub_pd(_mm256_loadu_pd(axes[d] + i), _mm256_set1_pd(query[d]));
            sum = _mm256_add_pd(sum, _mm256_mul_pd(diff, diff));
        }
        _mm256_storeu_pd(out + i, sum);
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
    if (count >= 8) {
        __m256i best8 = _mm256_set1_epi32(std::numeric_limits<std::int32_t>::max());
        for (; i + 8 <= count; i += 8) {
            __m256i sum = _mm256_setzero_si256();
            for (std::size_t d = 0; d < dim; ++d) {
                const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(axes[d] + i));
                const __m256i diff = _mm256_sub_epi32(v, _mm256_set1_epi32(query[d]));
                sum = _mm256_add_epi32(sum, _mm256_mullo_epi32(diff, diff));
            }
            best8 = _mm256_min_epi32(best8, sum);
        }
        alignas(32) std::int32_t lanes[8];
        _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), best8);
        for (std::int32_t lane : lanes) best = std::min<std::int64_t>(best, lane);
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

}  // namespace rmpd::simd::avx2
