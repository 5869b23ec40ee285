#include "rmpd/simd/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace rmpd::simd {

namespace {

constexpr KernelTable kScalarTable{&scalar::squared_distances_f64, &scalar::min_squared_distance_i32};
#if defined(RMPD_HAVE_AVX2_KERNELS)
constexpr KernelTable kAvx2Table{&avx2::squared_distances_f64, &avx2::min_squared_distance_i32};
#endif
#if defined(RMPD_HAVE_NEON_KERNELS)
constexpr KernelTable kNeonTable{&neon::squared_distances_f64, &neon::min_squared_distance_i32};
#endif

Isa detect_best() {
    if (const char* env = std::getenv("RMPD_SIMD")) {
        const std::string_view name(env);
        for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
            if (name == isa_name(isa) && kernels_for(isa) != nullptr) return isa;
        }
    }
    if (kernels_for(Isa::avx2) != nullptr) return Isa::avx2;
    if (kernels_for(Isa::neon) != nullptr) return Isa::neon;
    return Isa::scalar;
}

std::atomic<int>& active_slot() {
    static std::atomic<int> slot{static_cast<int>(detect_best())};
    return slot;
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
        case Isa::neon: return "neon";
    }
    return "unknown";
}

const KernelTable* kernels_for(Isa isa) noexcept {
    switch (isa) {
        case Isa::scalar: return &kScalarTable;
        case Isa::avx2:
#if defined(RMPD_HAVE_AVX2_KERNELS)
            if (__builtin_cpu_supports("avx2")) return &kAvx2Table;
#endif
            return nullptr;
        case Isa::neon:
#if defined(RMPD_HAVE_NEON_KERNELS)
            return &kNeonTable;
#else
            return nullptr;
#endif
    }
    return nullptr;
}

std::vector<Isa> available_isas() {
    std::vector<Isa> out;
    for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
        if (kernels_for(isa) != nullptr) out.push_back(isa);
    }
    return out;
}

Isa active_isa() { return static_cast<Isa>(active_slot().load(std::memory_order_relaxed)); }

const KernelTable& kernels() { return *kernels_for(active_isa()); }

void force_isa(Isa isa) {
    if (kernels_for(isa) == nullptr) {
        throw std::invalid_argument("SIMD variant '" + std::string(isa_name(isa)) + "' is unavailable");
    }
    active_slot().store(static_cast<int>(isa), std::memory_order_relaxed);
}

void squared_distances(std::span<const double* const> axes, std::size_t count,
                       std::span<const double> query, std::span<double> out) {
    if (query.size() != axes.size() || out.size() < count) {
        throw std::invalid_argument("squared_distances: size mismatch");
    }
    kernels().squared_distances_f64(axes.data(), axes.size(), count, query.data(), out.data());
}

std::int64_t min_squared_distance(std::span<const std::int32_t* const> axes, std::size_t count,
                                  std::span<const std::int32_t> query) {
    if (query.size() != axes.size()) throw std::invalid_argument("min_squared_distance: size mismatch");
    return kernels().min_squared_distance_i32(axes.data(), axes.size(), count, query.data());
}

}  // namespace rmpd::simd
