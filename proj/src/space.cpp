#include "rmpd/space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace rmpd {

namespace {

void require_finite(std::span<const double> coords) {
    for (double c : coords) {
        if (!std::isfinite(c)) {
            throw std::invalid_argument("State coordinates must be finite");
        }
    }
}

void require_same_dim(const State& a, const State& b) {
    if (a.dim() != b.dim()) throw_dimension_mismatch(a.dim(), b.dim());
}

}  // namespace

void throw_dimension_mismatch(std::size_t a, std::size_t b) {
    throw std::invalid_argument("dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
}

State::State(std::size_t dim, double fill) : coords_(dim, fill) { require_finite(coords_); }

State::State(std::initializer_list<double> coords) : coords_(coords) { require_finite(coords_); }

State::State(std::vector<double> coords) : coords_(std::move(coords)) { require_finite(coords_); }

State::State(std::span<const double> coords) : coords_(coords.begin(), coords.end()) {
    require_finite(coords_);
}

State& State::operator+=(const State& other) {
    require_same_dim(*this, other);
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += other.coords_[i];
    return *this;
}

State& State::operator-=(const State& other) {
    require_same_dim(*this, other);
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= other.coords_[i];
    return *this;
}

State& State::operator*=(double s) noexcept {
    for (double& c : coords_) c *= s;
    return *this;
}

SpaceBounds::SpaceBounds(State lower, State upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
    if (lower_.dim() == 0) throw std::invalid_argument("bounds must have dimension >= 1");
    if (lower_.dim() != upper_.dim()) throw std::invalid_argument("bounds lower/upper dimension mismatch");
    for (std::size_t i = 0; i < lower_.dim(); ++i) {
        if (!(lower_[i] < upper_[i])) {
            throw std::invalid_argument("bounds require lower < upper on axis " + std::to_string(i));
        }
    }
}

double SpaceBounds::diagonal() const noexcept {
    double sum = 0.0;
    for (std::size_t i = 0; i < dim(); ++i) sum += extent(i) * extent(i);
    return std::sqrt(sum);
}

double SpaceBounds::volume() const noexcept {
    double v = 1.0;
    for (std::size_t i = 0; i < dim(); ++i) v *= extent(i);
    return v;
}

bool SpaceBounds::contains(std::span<const double> p) const noexcept {
    if (p.size() != dim()) return false;
    for (std::size_t i = 0; i < dim(); ++i) {
        if (p[i] < lower_[i] || p[i] > upper_[i]) return false;
    }
    return true;
}

State SpaceBounds::clamp(State p) const noexcept {
    for (std::size_t i = 0; i < dim() && i < p.dim(); ++i) p[i] = std::clamp(p[i], lower_[i], upper_[i]);
    return p;
}

double SpaceBounds::distance_outside(std::span<const double> p) const noexcept {
    double sum = 0.0;
    for (std::size_t i = 0; i < dim() && i < p.size(); ++i) {
        double d = 0.0;
        if (p[i] < lower_[i]) d = lower_[i] - p[i];
        else if (p[i] > upper_[i]) d = p[i] - upper_[i];
        sum += d * d;
    }
    return std::sqrt(sum);
}

double SeededRng::uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double SeededRng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

std::size_t SeededRng::uniform_index(std::size_t n) {
    if (n == 0) throw std::invalid_argument("uniform_index requires n > 0");
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return static_cast<std::size_t>(x % bound);
}

double SeededRng::standard_normal() { return normal_(engine_); }

std::uint64_t mix_seed(std::uint64_t seed) noexcept {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

State interpolate(const State& a, const State& b, double t) {
    require_same_dim(a, b);
    if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("interpolate requires t in [0, 1]");
    State out(a.dim());
    if (t == 0.5) {
        for (std::size_t i = 0; i < a.dim(); ++i) out[i] = 0.5 * (a[i] + b[i]);
    } else if (t < 0.5) {
        for (std::size_t i = 0; i < a.dim(); ++i) out[i] = a[i] + t * (b[i] - a[i]);
    } else {
        const double s = 1.0 - t;
        for (std::size_t i = 0; i < a.dim(); ++i) out[i] = b[i] + s * (a[i] - b[i]);
    }
    return out;
}

void gaussian_sample_into(SeededRng& rng, const State& mean, double sigma, const SpaceBounds& bounds, State& out) {
    if (mean.dim() != bounds.dim()) throw std::invalid_argument("gaussian_sample: dimension mismatch");
    if (!(sigma >= 0.0)) throw std::invalid_argument("gaussian_sample requires sigma >= 0");
    if (out.dim() != mean.dim()) out = State(mean.dim());
    for (std::size_t i = 0; i < mean.dim(); ++i) {
        const double x = sigma > 0.0 ? mean[i] + sigma * rng.standard_normal() : mean[i];
        out[i] = std::clamp(x, bounds.lower()[i], bounds.upper()[i]);
    }
}

State gaussian_sample(SeededRng& rng, const State& mean, double sigma, const SpaceBounds& bounds) {
    State out(mean.dim());
    gaussian_sample_into(rng, mean, sigma, bounds, out);
    return out;
}

State uniform_sample(SeededRng& rng, const SpaceBounds& bounds) {
    State out(bounds.dim());
    for (std::size_t i = 0; i < out.dim(); ++i) out[i] = rng.uniform(bounds.lower()[i], bounds.upper()[i]);
    return out;
}

}  // namespace rmpd
