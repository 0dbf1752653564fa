#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rangelib {

// Binary occupancy grid. Cell (x, y) is stored row-major at y * width + x.
// x grows to the right, y grows downward (image convention), angles are
// radians counter-clockwise from +x. Resolution is meters per pixel and is
// carried as metadata; all geometry in this library is in pixel units.
class OccupancyGrid {
 public:
  OccupancyGrid() = default;
  OccupancyGrid(int width, int height, double resolution = 0.05)
      : width_(width), height_(height), resolution_(resolution) {
    if (width <= 0 || height <= 0) throw std::invalid_argument("grid dimensions must be positive");
    if (!(resolution > 0.0)) throw std::invalid_argument("resolution must be positive");
    cells_.assign(size_t(width) * size_t(height), 0);
  }

  int width() const { return width_; }
  int height() const { return height_; }
  double resolution() const { return resolution_; }
  void set_resolution(double r) {
    if (!(r > 0.0)) throw std::invalid_argument("resolution must be positive");
    resolution_ = r;
  }

  bool in_bounds(int x, int y) const { return x >= 0 && x < width_ && y >= 0 && y < height_; }

  // Unchecked accessors; callers bound-check first.
  bool at(int x, int y) const { return cells_[size_t(y) * width_ + x] != 0; }
  void set(int x, int y, bool occ) { cells_[size_t(y) * width_ + x] = occ ? 1 : 0; }

  double diagonal() const { return std::sqrt(double(width_) * width_ + double(height_) * height_); }

  size_t occupied_count() const {
    size_t n = 0;
    for (auto c : cells_) n += c;
    return n;
  }

  // Occupancy and resolution metadata is excluded: equality means same
  // dimensions and same binary occupancy.
  bool operator==(const OccupancyGrid& o) const {
    return width_ == o.width_ && height_ == o.height_ && cells_ == o.cells_;
  }
  bool operator!=(const OccupancyGrid& o) const { return !(*this == o); }

  const std::vector<std::uint8_t>& raw() const { return cells_; }

 private:
  int width_ = 0;
  int height_ = 0;
  double resolution_ = 0.05;
  std::vector<std::uint8_t> cells_;
};

// Occupancy at a continuous point: the cell containing it, with cell (x, y)
// owning the half-open square [x, x+1) x [y, y+1). Out of bounds is free.
inline bool is_occupied(const OccupancyGrid& grid, double x, double y) {
  int cx = int(std::floor(x)), cy = int(std::floor(y));
  return grid.in_bounds(cx, cy) && grid.at(cx, cy);
}

// Per-cell Euclidean distance (pixel units, between integer cell coordinates)
// to the nearest occupied cell. 0 exactly on occupied cells.
struct DistanceField {
  int width = 0;
  int height = 0;
  std::vector<float> values;

  float at(int x, int y) const { return values[size_t(y) * width + x]; }
};

// Thrown by parsers; offset is the byte position where parsing failed.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, size_t offset)
      : std::runtime_error(what + " (byte " + std::to_string(offset) + ")"), offset_(offset) {}
  size_t offset() const { return offset_; }

 private:
  size_t offset_;
};

// PGM (P2 ascii / P5 binary) import. Pixels <= threshold are occupied
// (black obstacles on a white background). Resolution is not part of PGM;
// callers set it afterwards (CLI flag, default 0.05 m/px).
OccupancyGrid load_pgm(const std::vector<std::uint8_t>& bytes, int threshold = 127);
OccupancyGrid load_pgm_file(const std::string& path, int threshold = 127);

// P5 export: occupied -> 0, free -> 255.
std::vector<std::uint8_t> save_pgm(const OccupancyGrid& grid);
void save_pgm_file(const OccupancyGrid& grid, const std::string& path);

// Occupied cells with at least one free or out-of-bounds 8-neighbor.
// Interior cells of solid blobs can never be the first cell a ray enters,
// so only these edge cells matter for range queries.
OccupancyGrid edge_map(const OccupancyGrid& grid);

bool is_edge_cell(const OccupancyGrid& grid, int x, int y);

// Exact two-pass Euclidean distance transform. A grid with no occupied
// cells yields the grid diagonal everywhere.
DistanceField distance_transform(const OccupancyGrid& grid);

}  // namespace rangelib
