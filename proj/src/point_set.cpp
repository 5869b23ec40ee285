#include "rmpd/point_set.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "rmpd/simd/kernels.hpp"

namespace rmpd {

PointSet::PointSet(std::size_t dim) : axes_(dim) {
    if (dim == 0) throw std::invalid_argument("PointSet dimension must be positive");
}

std::size_t PointSet::push(const State& p) {
    if (p.dim() != dim()) throw std::invalid_argument("PointSet::push dimension mismatch");
    for (std::size_t d = 0; d < dim(); ++d) axes_[d].push_back(p[d]);
    return size() - 1;
}

State PointSet::at(std::size_t i) const {
    State p(dim());
    for (std::size_t d = 0; d < dim(); ++d) p[d] = axes_[d][i];
    return p;
}

const std::vector<double>& PointSet::squared_distances_to(const State& q) const {
    if (q.dim() != dim()) throw std::invalid_argument("PointSet query dimension mismatch");
    pointers_.resize(dim());
    for (std::size_t d = 0; d < dim(); ++d) pointers_[d] = axes_[d].data();
    scratch_.resize(size());
    simd::squared_distances(pointers_, size(), q.coords(), scratch_);
    return scratch_;
}

std::size_t PointSet::nearest(const State& q) const {
    if (size() == 0) throw std::logic_error("PointSet::nearest on empty set");
    const auto& d2 = squared_distances_to(q);
    return static_cast<std::size_t>(std::min_element(d2.begin(), d2.end()) - d2.begin());
}

std::vector<std::size_t> PointSet::within(const State& q, double radius) const {
    std::vector<std::size_t> out;
    if (size() == 0) return out;
    const auto& d2 = squared_distances_to(q);
    const double r2 = radius * radius;
    for (std::size_t i = 0; i < d2.size(); ++i) {
        if (d2[i] <= r2) out.push_back(i);
    }
    return out;
}

std::vector<std::size_t> PointSet::k_nearest(const State& q, std::size_t k, std::size_t exclude) const {
    std::vector<std::size_t> order;
    if (size() == 0 || k == 0) return order;
    const auto& d2 = squared_distances_to(q);
    order.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) {
        if (i != exclude) order.push_back(i);
    }
    const std::size_t take = std::min(k, order.size());
    auto closer = [&](std::size_t a, std::size_t b) { return d2[a] < d2[b] || (d2[a] == d2[b] && a < b); };
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(), closer);
    order.resize(take);
    return order;
}

}  // namespace rmpd
