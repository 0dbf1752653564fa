#include "rangelib/synthetic.hpp"

#include <algorithm>
#include <stdexcept>

#include "rangelib/rng.hpp"

namespace rangelib {

namespace {

void hline(OccupancyGrid& g, int x0, int x1, int y) {
  for (int x = std::max(x0, 0); x <= std::min(x1, g.width() - 1); x++) g.set(x, y, true);
}

void vline(OccupancyGrid& g, int x, int y0, int y1) {
  for (int y = std::max(y0, 0); y <= std::min(y1, g.height() - 1); y++) g.set(x, y, true);
}

void block(OccupancyGrid& g, int x0, int y0, int x1, int y1) {
  for (int y = std::max(y0, 0); y <= std::min(y1, g.height() - 1); y++)
    for (int x = std::max(x0, 0); x <= std::min(x1, g.width() - 1); x++) g.set(x, y, true);
}

}  // namespace

OccupancyGrid make_structured_map(int width, int height) {
  if (width < 16 || height < 16)
    throw std::invalid_argument("structured map needs at least 16x16");
  OccupancyGrid g(width, height);

  hline(g, 0, width - 1, 0);
  hline(g, 0, width - 1, height - 1);
  vline(g, 0, 0, height - 1);
  vline(g, width - 1, 0, height - 1);

  // room outline spanning the second quarter of the map, door on the right
  int rx0 = width / 4, ry0 = height / 4;
  int rx1 = rx0 + width / 4, ry1 = ry0 + height / 4;
  hline(g, rx0, rx1, ry0);
  hline(g, rx0, rx1, ry1);
  vline(g, rx0, ry0, ry1);
  int door0 = (ry0 + ry1) / 2 - height / 32;
  int door1 = (ry0 + ry1) / 2 + height / 32;
  for (int y = ry0; y <= ry1; y++)
    if (y < door0 || y > door1) g.set(rx1, y, true);

  // pillar field in the lower-right open area
  int px0 = width / 2 + width / 16, py0 = height / 2 + height / 16;
  int gap_x = width / 8, gap_y = height / 8;
  for (int j = 0; j < 3; j++)
    for (int i = 0; i < 3; i++) {
      int x = px0 + i * gap_x, y = py0 + j * gap_y;
      block(g, x, y, x + 1, y + 1);
    }
  return g;
}

OccupancyGrid make_loop_map(int width, int height) {
  if (width < 48 || height < 48)
    throw std::invalid_argument("loop map needs at least 48x48");
  OccupancyGrid g(width, height);

  block(g, 0, 0, width - 1, 1);
  block(g, 0, height - 2, width - 1, height - 1);
  block(g, 0, 0, 1, height - 1);
  block(g, width - 2, 0, width - 1, height - 1);

  // central block, well inside the loop trajectory radius
  int cx = width / 2, cy = height / 2;
  int half = int(0.17 * std::min(width, height));
  block(g, cx - half, cy - half, cx + half - 1, cy + half - 1);

  // corner pillars for bearing structure
  int off = std::max(8, std::min(width, height) / 8 + 1);
  int ps = 5;
  block(g, off, off, off + ps, off + ps);
  block(g, width - 1 - off - ps, off, width - 1 - off, off + ps);
  block(g, off, height - 1 - off - ps, off + ps, height - 1 - off);
  block(g, width - 1 - off - ps, height - 1 - off - ps, width - 1 - off, height - 1 - off);
  return g;
}

OccupancyGrid make_random_map(int width, int height, double density, std::uint64_t seed) {
  if (!(density >= 0.0 && density <= 1.0))
    throw std::invalid_argument("density must be in [0, 1]");
  OccupancyGrid g(width, height);
  SplitMix64 rng(seed);
  for (int y = 0; y < height; y++)
    for (int x = 0; x < width; x++)
      if (rng.uniform() < density) g.set(x, y, true);
  return g;
}

}  // namespace rangelib
