#pragma once

#include <cmath>
#include <limits>

#include "rangelib/grid.hpp"

namespace rangelib::detail {

// Incremental traversal of the cells a continuous ray passes through, in
// order. The ray is p(t) = origin + t * dir with unit dir, t in pixels.
//
// Cells own half-open squares [x, x+1) x [y, y+1). A ray crossing a lattice
// corner exactly steps diagonally, so cells that merely touch the ray at a
// point are not visited; every visited cell has an interior segment of the
// ray (this matters for the zero-point bin membership argument in cddt.cpp).
//
// The walker is resumable: seek() repositions forward along the ray (requests
// to move backward are ignored), scan_to() advances until an occupied cell or
// a parameter limit. Monotone use lets callers scan disjoint windows cheaply.
class RayWalker {
 public:
  static constexpr double kNone = -1.0;  // window exhausted without a hit
  static constexpr double kExit = -2.0;  // ray left the grid

  RayWalker(const OccupancyGrid& grid, double ox, double oy, double dx, double dy)
      : grid_(grid), ox_(ox), oy_(oy), dx_(dx), dy_(dy) {
    place(0.0);
  }

  double position() const { return t_; }
  int cell_x() const { return cx_; }
  int cell_y() const { return cy_; }

  // Move forward to parameter t; no-op if already past it.
  void seek(double t) {
    if (t > t_) place(t);
  }

  // Advance exactly one cell along the ray; returns the entry parameter of
  // the new cell.
  double advance_one() {
    advance();
    return t_;
  }

  // Advance until entering an occupied cell or passing t_limit.
  // Returns the entry parameter of the occupied cell (the current position
  // if the walker already sits inside one), kNone, or kExit. Leaves the
  // walker on the reported cell, or on the last cell within the window.
  double scan_to(double t_limit) {
    for (;;) {
      if (!grid_.in_bounds(cx_, cy_)) return kExit;
      if (grid_.at(cx_, cy_)) return t_;
      double tn = t_next_x_ < t_next_y_ ? t_next_x_ : t_next_y_;
      if (tn > t_limit) return kNone;
      advance();
    }
  }

 private:
  void place(double t) {
    t_ = t;
    double px = ox_ + t * dx_, py = oy_ + t * dy_;
    cx_ = int(std::floor(px));
    cy_ = int(std::floor(py));
    // A point exactly on a cell boundary moving in the negative direction is
    // entering the lower cell.
    if (dx_ < 0 && px == double(cx_)) cx_--;
    if (dy_ < 0 && py == double(cy_)) cy_--;
    t_next_x_ = boundary_t(dx_, ox_, cx_);
    t_next_y_ = boundary_t(dy_, oy_, cy_);
  }

  static double boundary_t(double d, double o, int c) {
    if (d > 0) return (double(c) + 1.0 - o) / d;
    if (d < 0) return (double(c) - o) / d;
    return std::numeric_limits<double>::infinity();
  }

  void advance() {
    if (t_next_x_ == t_next_y_) {  // exact lattice-corner crossing: go diagonal
      t_ = t_next_x_;
      cx_ += dx_ > 0 ? 1 : -1;
      cy_ += dy_ > 0 ? 1 : -1;
      t_next_x_ = boundary_t(dx_, ox_, cx_);
      t_next_y_ = boundary_t(dy_, oy_, cy_);
    } else if (t_next_x_ < t_next_y_) {
      t_ = t_next_x_;
      cx_ += dx_ > 0 ? 1 : -1;
      t_next_x_ = boundary_t(dx_, ox_, cx_);
    } else {
      t_ = t_next_y_;
      cy_ += dy_ > 0 ? 1 : -1;
      t_next_y_ = boundary_t(dy_, oy_, cy_);
    }
  }

  const OccupancyGrid& grid_;
  double ox_, oy_, dx_, dy_;
  double t_ = 0.0;
  double t_next_x_ = 0.0, t_next_y_ = 0.0;
  int cx_ = 0, cy_ = 0;
};

}  // namespace rangelib::detail
