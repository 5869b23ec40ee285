#pragma once

#include <string>
#include <utility>
#include <vector>

#include "rmpd/planner.hpp"
#include "rmpd/sdf.hpp"
#include "rmpd/world.hpp"

namespace rmpd {

using LabeledPath = std::pair<std::string, Path>;

/// Standalone SVG of a 2-D world: one bounds rect, filled obstacles, an optional field
/// heatmap (one rect of class "sdf" per cell) and one polyline per path.
/// Throws std::invalid_argument for worlds that are not 2-D.
[[nodiscard]] std::string render_svg(const World& world, const SignedDistanceField* sdf,
                                     const std::vector<LabeledPath>& paths);

}  // namespace rmpd
