#include "rmpd/sdf.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <new>
#include <stdexcept>
#include <string>

#ifdef __linux__
#include <sys/mman.h>
#endif

#include "rmpd/simd/kernels.hpp"

namespace rmpd {

void* allocate_large_block(std::size_t bytes) {
    constexpr std::size_t kHugePage = std::size_t{2} << 20;
    if (bytes < kHugePage) {
        void* p = std::malloc(bytes == 0 ? 1 : bytes);
        if (p == nullptr) throw std::bad_alloc();
        return p;
    }
    const std::size_t rounded = (bytes + kHugePage - 1) / kHugePage * kHugePage;
    void* p = std::aligned_alloc(kHugePage, rounded);
    if (p == nullptr) throw std::bad_alloc();
#ifdef MADV_HUGEPAGE
    madvise(p, rounded, MADV_HUGEPAGE);  // advisory; failure just keeps small pages
#endif
    return p;
}

void free_large_block(void* p) noexcept { std::free(p); }

namespace {

constexpr std::size_t kMinCellsPerAxis = 3;
constexpr std::size_t kExhaustiveMaxAxis = 128;
constexpr std::size_t kExhaustiveMaxCells = 128 * 128;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::size_t> strides_of(std::span<const std::size_t> shape) {
    std::vector<std::size_t> strides(shape.size());
    std::size_t s = 1;
    for (std::size_t a = 0; a < shape.size(); ++a) {
        strides[a] = s;
        s *= shape[a];
    }
    return strides;
}

// Distance from a cell center to the nearest face of the world bounds.
double face_distance(const SpaceBounds& bounds, const State& center) {
    double best = kInf;
    for (std::size_t i = 0; i < bounds.dim(); ++i) {
        best = std::min({best, center[i] - bounds.lower()[i], bounds.upper()[i] - center[i]});
    }
    return std::abs(best);
}

// 1-D squared Euclidean transform of sampled function f (lower envelope of parabolas).
// Infinite entries are not sites; a line without sites stays infinite.
void transform_line(std::span<const double> f, std::span<double> out, std::vector<std::size_t>& v,
                    std::vector<double>& z) {
    const std::size_t n = f.size();
    v.resize(n);
    z.resize(n + 1);
    std::ptrdiff_t k = -1;
    for (std::size_t q = 0; q < n; ++q) {
        if (f[q] == kInf) continue;
        const double fq = f[q] + static_cast<double>(q) * static_cast<double>(q);
        double s = 0.0;
        while (k >= 0) {
            const double vk = static_cast<double>(v[k]);
            s = (fq - (f[v[k]] + vk * vk)) / (2.0 * static_cast<double>(q) - 2.0 * vk);
            if (s <= z[k]) {
                --k;
            } else {
                break;
            }
        }
        if (k < 0) {
            k = 0;
            v[0] = q;
            z[0] = -kInf;
        } else {
            ++k;
            v[k] = q;
            z[k] = s;
        }
        z[k + 1] = kInf;
    }
    if (k < 0) {
        std::fill(out.begin(), out.end(), kInf);
        return;
    }
    std::size_t j = 0;
    for (std::size_t q = 0; q < n; ++q) {
        while (z[j + 1] < static_cast<double>(q)) ++j;
        const double d = static_cast<double>(q) - static_cast<double>(v[j]);
        out[q] = d * d + f[v[j]];
    }
}

// Squared distance (in cell units) from every cell to the nearest cell where site[] is true.
std::vector<double> squared_transform(const OccupancyGrid& grid, bool site_value) {
    const std::size_t total = grid.occupied.size();
    std::vector<double> d2(total);
    for (std::size_t i = 0; i < total; ++i) d2[i] = (grid.occupied[i] != 0) == site_value ? 0.0 : kInf;

    const auto strides = strides_of(grid.shape);
    std::vector<double> line_in;
    std::vector<double> line_out;
    std::vector<std::size_t> v;
    std::vector<double> z;
    for (std::size_t axis = 0; axis < grid.shape.size(); ++axis) {
        const std::size_t n = grid.shape[axis];
        const std::size_t stride = strides[axis];
        line_in.resize(n);
        line_out.resize(n);
        for (std::size_t base = 0; base < total; ++base) {
            if ((base / stride) % n != 0) continue;
            for (std::size_t q = 0; q < n; ++q) line_in[q] = d2[base + q * stride];
            transform_line(line_in, line_out, v, z);
            for (std::size_t q = 0; q < n; ++q) d2[base + q * stride] = line_out[q];
        }
    }
    return d2;
}

// Exhaustive search restricted to cells that border the opposite set. The nearest cell of
// opposite occupancy always has an axis neighbor of the query's occupancy (stepping from it
// toward the query strictly shortens the distance), so nothing is lost.
std::vector<double> squared_exhaustive(const OccupancyGrid& grid) {
    const std::size_t dim = grid.shape.size();
    const std::size_t total = grid.occupied.size();
    const auto strides = strides_of(grid.shape);

    // Index 0 gathers free boundary cells, index 1 occupied boundary cells (SoA, int32).
    std::vector<std::vector<std::int32_t>> coords[2];
    coords[0].assign(dim, {});
    coords[1].assign(dim, {});
    std::vector<std::size_t> cell(dim);
    for (std::size_t flat = 0; flat < total; ++flat) {
        for (std::size_t a = 0; a < dim; ++a) cell[a] = (flat / strides[a]) % grid.shape[a];
        const std::uint8_t mine = grid.occupied[flat];
        bool border = false;
        for (std::size_t a = 0; a < dim && !border; ++a) {
            if (cell[a] > 0 && grid.occupied[flat - strides[a]] != mine) border = true;
            if (cell[a] + 1 < grid.shape[a] && grid.occupied[flat + strides[a]] != mine) border = true;
        }
        if (!border) continue;
        auto& set = coords[mine != 0 ? 1 : 0];
        for (std::size_t a = 0; a < dim; ++a) set[a].push_back(static_cast<std::int32_t>(cell[a]));
    }

    std::vector<const std::int32_t*> axes[2];
    for (int s = 0; s < 2; ++s) {
        for (const auto& column : coords[s]) axes[s].push_back(column.data());
    }
    const std::size_t counts[2] = {coords[0][0].size(), coords[1][0].size()};

    std::vector<double> d2(total);
    std::vector<std::int32_t> query(dim);
    for (std::size_t flat = 0; flat < total; ++flat) {
        for (std::size_t a = 0; a < dim; ++a) query[a] = static_cast<std::int32_t>((flat / strides[a]) % grid.shape[a]);
        const int opposite = grid.occupied[flat] != 0 ? 0 : 1;
        if (counts[opposite] == 0) {
            d2[flat] = kInf;
            continue;
        }
        d2[flat] = static_cast<double>(simd::min_squared_distance(axes[opposite], counts[opposite], query));
    }
    return d2;
}

}  // namespace

SignedDistanceField::SignedDistanceField(State origin, double resolution, std::vector<std::size_t> shape,
                                         std::vector<double> values)
    : origin_(std::move(origin)), resolution_(resolution), shape_(std::move(shape)), values_(values.begin(), values.end()) {
    if (!(resolution_ > 0.0)) throw std::invalid_argument("SDF resolution must be positive");
    if (shape_.size() != origin_.dim()) throw std::invalid_argument("SDF shape/origin dimension mismatch");
    std::size_t total = 1;
    for (std::size_t n : shape_) total *= n;
    if (total != values_.size()) throw std::invalid_argument("SDF value count does not match shape");
    std::size_t stride = 1;
    for (std::size_t a = 0; a < shape_.size(); ++a) {
        upper_.push_back(origin_[a] + static_cast<double>(shape_[a]) * resolution_);
        strides_.push_back(stride);
        stride *= shape_[a];
    }
}

std::size_t SignedDistanceField::flat_index(std::span<const std::size_t> cell) const noexcept {
    std::size_t flat = 0;
    std::size_t stride = 1;
    for (std::size_t a = 0; a < shape_.size(); ++a) {
        flat += cell[a] * stride;
        stride *= shape_[a];
    }
    return flat;
}

std::vector<std::size_t> SignedDistanceField::cell_of_flat(std::size_t flat) const {
    std::vector<std::size_t> cell(shape_.size());
    for (std::size_t a = 0; a < shape_.size(); ++a) {
        cell[a] = flat % shape_[a];
        flat /= shape_[a];
    }
    return cell;
}

State SignedDistanceField::cell_center(std::span<const std::size_t> cell) const {
    State c(dim());
    for (std::size_t a = 0; a < dim(); ++a) {
        c[a] = origin_[a] + (static_cast<double>(cell[a]) + 0.5) * resolution_;
    }
    return c;
}

std::optional<std::size_t> SignedDistanceField::locate(std::span<const double> p) const noexcept {
    if (p.size() != dim()) return std::nullopt;
    std::size_t flat = 0;
    for (std::size_t a = 0; a < dim(); ++a) {
        if (!(p[a] >= origin_[a] && p[a] <= upper_[a])) return std::nullopt;
        // Non-negative here, so truncation is floor.
        auto idx = static_cast<std::size_t>((p[a] - origin_[a]) / resolution_);
        idx = std::min(idx, shape_[a] - 1);
        flat += idx * strides_[a];
    }
    return flat;
}

SpaceBounds SignedDistanceField::grid_bounds() const {
    State upper = origin_;
    for (std::size_t a = 0; a < dim(); ++a) upper[a] += static_cast<double>(shape_[a]) * resolution_;
    return SpaceBounds(origin_, upper);
}

OccupancyGrid sample_occupancy(const World& world, double resolution) {
    if (!(resolution > 0.0) || !std::isfinite(resolution)) {
        throw std::invalid_argument("SDF resolution must be positive");
    }
    const SpaceBounds& bounds = world.bounds();
    OccupancyGrid grid{bounds.lower(), resolution, std::vector<std::size_t>(bounds.dim()), {}};
    std::size_t total = 1;
    for (std::size_t a = 0; a < bounds.dim(); ++a) {
        const double cells = std::ceil(bounds.extent(a) / resolution - 1e-9);
        if (cells < static_cast<double>(kMinCellsPerAxis)) {
            throw std::invalid_argument("SDF needs at least 3 cells per axis; axis " + std::to_string(a) +
                                        " has " + std::to_string(static_cast<long long>(cells)));
        }
        if (cells > 1.0e8) throw std::invalid_argument("SDF resolution too fine");
        grid.shape[a] = static_cast<std::size_t>(cells);
        total *= grid.shape[a];
        if (total > 200'000'000) throw std::invalid_argument("SDF grid exceeds 2e8 cells");
    }
    grid.occupied.resize(total);
    const auto strides = strides_of(grid.shape);
    State center(bounds.dim());
    for (std::size_t flat = 0; flat < total; ++flat) {
        for (std::size_t a = 0; a < bounds.dim(); ++a) {
            const std::size_t idx = (flat / strides[a]) % grid.shape[a];
            center[a] = grid.origin[a] + (static_cast<double>(idx) + 0.5) * resolution;
        }
        grid.occupied[flat] = world.in_collision(center.coords()) ? 1 : 0;
    }
    return grid;
}

SignedDistanceField build_sdf(const World& world, double resolution, SdfMethod method) {
    OccupancyGrid grid = sample_occupancy(world, resolution);
    if (method == SdfMethod::automatic) {
        const bool small = grid.occupied.size() <= kExhaustiveMaxCells &&
                           std::all_of(grid.shape.begin(), grid.shape.end(),
                                       [](std::size_t n) { return n <= kExhaustiveMaxAxis; });
        method = small ? SdfMethod::exhaustive : SdfMethod::distance_transform;
    }

    std::vector<double> values;
    if (method == SdfMethod::exhaustive) {
        if (std::any_of(grid.shape.begin(), grid.shape.end(), [](std::size_t n) { return n > 4096; })) {
            throw std::invalid_argument("exhaustive SDF limited to 4096 cells per axis");
        }
        values = squared_exhaustive(grid);
    } else {
        values.assign(grid.occupied.size(), 0.0);
        const auto to_occupied = squared_transform(grid, true);
        const auto to_free = squared_transform(grid, false);
        for (std::size_t i = 0; i < values.size(); ++i) values[i] = grid.occupied[i] != 0 ? to_free[i] : to_occupied[i];
    }

    const auto strides = strides_of(grid.shape);
    State center(grid.shape.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double sign = grid.occupied[i] != 0 ? 1.0 : -1.0;
        double magnitude;
        if (values[i] == kInf) {
            for (std::size_t a = 0; a < grid.shape.size(); ++a) {
                const std::size_t idx = (i / strides[a]) % grid.shape[a];
                center[a] = grid.origin[a] + (static_cast<double>(idx) + 0.5) * resolution;
            }
            magnitude = face_distance(world.bounds(), center);
        } else {
            magnitude = std::sqrt(values[i]) * resolution;
        }
        values[i] = sign * magnitude;
    }
    return SignedDistanceField(grid.origin, resolution, std::move(grid.shape), std::move(values));
}

double clearance_cost(const SignedDistanceField& sdf, const State& p) {
    if (p.dim() != sdf.dim()) throw std::invalid_argument("clearance_cost: dimension mismatch");
    if (auto flat = sdf.locate(p.coords())) return sdf.values()[*flat];
    return sdf.grid_bounds().distance_outside(p.coords());
}

}  // namespace rmpd
