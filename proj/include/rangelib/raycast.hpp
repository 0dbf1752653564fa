#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "rangelib/grid.hpp"

namespace rangelib {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Round to nearest integer with exact .5 ties going down. Used for every
// state discretization so that a cell center (x + 0.5) maps to its own cell
// and a discretization boundary belongs to the lower state.
inline long iround(double v) { return long(std::ceil(v - 0.5)); }

// Wrap into [0, 2pi).
inline double normalize_angle_2pi(double t) {
  t = std::fmod(t, kTwoPi);
  if (t < 0) t += kTwoPi;
  if (t >= kTwoPi) t = 0.0;
  return t;
}

// Wrap into [-pi, pi).
inline double normalize_angle_pi(double t) {
  t = std::fmod(t + kTwoPi / 2.0, kTwoPi);
  if (t < 0) t += kTwoPi;
  return t - kTwoPi / 2.0;
}

// Nearest discrete direction index for theta_disc directions over the full
// circle. Adding theta_disc/2 to the index is exactly the opposite direction.
inline int direction_index(double theta, int theta_disc) {
  long i = iround(theta * double(theta_disc) / kTwoPi) % theta_disc;
  if (i < 0) i += theta_disc;
  return int(i);
}

struct RayQuery {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;  // normalized to [0, 2pi) on construction

  RayQuery(double x_, double y_, double theta_)
      : x(x_), y(y_), theta(normalize_angle_2pi(theta_)) {}
};

struct RangeMethodConfig {
  double max_range = 0.0;  // pixels; 0 = derive the grid diagonal
  int theta_disc = 216;    // discrete directions over the full circle; even

  void validate() const {
    if (max_range < 0.0) throw std::invalid_argument("max_range must be >= 0");
    if (theta_disc < 4 || theta_disc % 2 != 0)
      throw std::invalid_argument("theta_disc must be even and >= 4");
  }

  double resolved_max_range(const OccupancyGrid& grid) const {
    return max_range > 0.0 ? max_range : grid.diagonal();
  }
};

// Ground truth. Walks every cell the continuous ray passes through and
// returns the distance from the query point to the ray's entry point into
// the first occupied cell's unit square. 0 if the origin cell is occupied;
// max_range if the origin is out of bounds, the ray exits the grid, or no
// obstacle lies within max_range.
double oracle_cast(const OccupancyGrid& grid, const RayQuery& q, double max_range);

// Same traversal, but the reported distance is measured to the hit cell's
// integer coordinate (the classic rasterized-line convention), so results
// differ from the oracle by at most sqrt(2).
double bresenham_cast(const OccupancyGrid& grid, const RayQuery& q, double max_range);

// Distance-field stepping: jump by a safe lower bound on the obstacle
// clearance while it is large, walk cell-by-cell when close. Returns the
// exact entry distance, like the oracle.
double ray_march_cast(const OccupancyGrid& grid, const DistanceField& df, const RayQuery& q,
                      double max_range);

// Dense (x, y, theta-index) -> range table, 16-bit entries.
struct LookupTable {
  int width = 0;
  int height = 0;
  int theta_disc = 0;
  double max_range = 0.0;
  std::vector<std::uint16_t> entries;  // [theta][y][x]

  std::uint16_t entry(int x, int y, int ti) const {
    return entries[(size_t(ti) * height + y) * width + x];
  }
};

inline size_t lut_projected_bytes(int width, int height, int theta_disc) {
  return 2 * size_t(width) * size_t(height) * size_t(theta_disc);
}

// entry (x, y, i) = round(oracle_cast from the cell center (x+0.5, y+0.5) at
// theta_i = i*2pi/theta_disc), clamped to 16 bits. Builds above max_bytes are
// refused with the projected byte count.
LookupTable lut_build(const OccupancyGrid& grid, const RangeMethodConfig& cfg,
                      size_t max_bytes = size_t(1) << 31);

// Rounds the query to the nearest (cell, theta-index) state and returns the
// stored value clamped to max_range. Out-of-bounds states return max_range.
double lut_cast(const LookupTable& lut, const RayQuery& q);

}  // namespace rangelib
