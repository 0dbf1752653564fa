#include "rangelib/raycast.hpp"

#include <algorithm>

#include "rangelib/detail/ray_walker.hpp"

namespace rangelib {

double oracle_cast(const OccupancyGrid& grid, const RayQuery& q, double max_range) {
  int cx = int(std::floor(q.x)), cy = int(std::floor(q.y));
  if (!grid.in_bounds(cx, cy)) return max_range;
  if (grid.at(cx, cy)) return 0.0;
  detail::RayWalker w(grid, q.x, q.y, std::cos(q.theta), std::sin(q.theta));
  double r = w.scan_to(max_range);
  return r >= 0.0 ? r : max_range;
}

double bresenham_cast(const OccupancyGrid& grid, const RayQuery& q, double max_range) {
  int cx = int(std::floor(q.x)), cy = int(std::floor(q.y));
  if (!grid.in_bounds(cx, cy)) return max_range;
  if (grid.at(cx, cy)) return 0.0;
  detail::RayWalker w(grid, q.x, q.y, std::cos(q.theta), std::sin(q.theta));
  // Overscan slightly: a cell entered just past max_range can still have its
  // integer coordinate within range, and clamping keeps the result bounded.
  double r = w.scan_to(max_range + 1.5);
  if (r < 0.0) return max_range;
  double d = std::hypot(double(w.cell_x()) - q.x, double(w.cell_y()) - q.y);
  return std::min(d, max_range);
}

double ray_march_cast(const OccupancyGrid& grid, const DistanceField& df, const RayQuery& q,
                      double max_range) {
  int cx = int(std::floor(q.x)), cy = int(std::floor(q.y));
  if (!grid.in_bounds(cx, cy)) return max_range;
  if (grid.at(cx, cy)) return 0.0;

  const double dirx = std::cos(q.theta), diry = std::sin(q.theta);
  detail::RayWalker w(grid, q.x, q.y, dirx, diry);
  // The distance field measures center to center, the ray position sits up to
  // sqrt(2)/2 off-center, and the nearest obstacle's region reaches up to
  // sqrt(2)/2 inside its center distance; the slack keeps jumps safe (with a
  // little headroom for float rounding of the field itself).
  const double kSlack = 0.7072;
  long cap = 4L * (grid.width() + grid.height()) + long(2.0 * max_range) + 64;

  while (cap-- > 0) {
    if (!grid.in_bounds(w.cell_x(), w.cell_y())) return max_range;
    if (grid.at(w.cell_x(), w.cell_y())) return std::min(w.position(), max_range);
    double t = w.position();
    if (t >= max_range) return max_range;
    double px = q.x + t * dirx, py = q.y + t * diry;
    double clearance = double(df.at(w.cell_x(), w.cell_y())) -
                       std::hypot(px - (w.cell_x() + 0.5), py - (w.cell_y() + 0.5)) - kSlack;
    if (clearance >= 0.5)
      w.seek(t + clearance);
    else
      w.advance_one();
  }
  return max_range;  // unreachable for sane inputs; the cap is paranoia
}

LookupTable lut_build(const OccupancyGrid& grid, const RangeMethodConfig& cfg, size_t max_bytes) {
  cfg.validate();
  const size_t bytes = lut_projected_bytes(grid.width(), grid.height(), cfg.theta_disc);
  if (bytes > max_bytes)
    throw std::length_error("lookup table would need " + std::to_string(bytes) +
                            " bytes, above the " + std::to_string(max_bytes) + " byte cap");

  LookupTable lut;
  lut.width = grid.width();
  lut.height = grid.height();
  lut.theta_disc = cfg.theta_disc;
  lut.max_range = cfg.resolved_max_range(grid);
  lut.entries.resize(size_t(lut.width) * lut.height * lut.theta_disc);

  size_t i = 0;
  for (int ti = 0; ti < lut.theta_disc; ti++) {
    double theta = double(ti) * kTwoPi / double(lut.theta_disc);
    for (int y = 0; y < lut.height; y++)
      for (int x = 0; x < lut.width; x++) {
        double d = oracle_cast(grid, RayQuery(x + 0.5, y + 0.5, theta), lut.max_range);
        long v = std::llround(d);
        lut.entries[i++] = std::uint16_t(std::clamp(v, 0L, 65535L));
      }
  }
  return lut;
}

double lut_cast(const LookupTable& lut, const RayQuery& q) {
  long sx = iround(q.x), sy = iround(q.y);
  if (sx < 0 || sx >= lut.width || sy < 0 || sy >= lut.height) return lut.max_range;
  int ti = direction_index(q.theta, lut.theta_disc);
  return std::min(double(lut.entry(int(sx), int(sy), ti)), lut.max_range);
}

}  // namespace rangelib
