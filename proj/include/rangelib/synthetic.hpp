#pragma once

#include <cstdint>

#include "rangelib/grid.hpp"

namespace rangelib {

// Indoor-style benchmark map: one-pixel outer wall, a rectangular room with a
// door gap, and a 3x3 field of small pillars. All obstacle cells are edge
// cells; occupancy stays in the low single-digit percent range.
OccupancyGrid make_structured_map(int width, int height);

// Localization demo map: thick outer wall, a large central block and four
// corner pillars, leaving a clear ring at radius ~0.32*min(w, h) around the
// center for a loop trajectory.
OccupancyGrid make_loop_map(int width, int height);

// Independent per-cell occupancy with probability density.
OccupancyGrid make_random_map(int width, int height, double density, std::uint64_t seed);

}  // namespace rangelib
