#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "rangelib/grid.hpp"
#include "rangelib/raycast.hpp"

namespace rangelib {

// Cosine/sine of direction i out of theta_disc over the full circle, with
// axis-aligned directions snapped to exact 0/±1 so that axis slices project
// onto exact integer lattices.
void direction_components(int i, int theta_disc, double* cos_out, double* sin_out);

// Rigid map of the plane taking the slice direction onto +x'. x' is where
// zero points live; y' selects the bin row and is shifted to be non-negative
// over the whole grid.
struct SliceProjection {
  double theta = 0.0;
  double cos_t = 1.0;
  double sin_t = 0.0;
  double y_offset = 0.0;
  int bin_count = 0;

  static SliceProjection make(double theta, double cos_t, double sin_t, int width, int height);

  double project_x(double x, double y) const { return x * cos_t + y * sin_t; }
  double project_y(double x, double y) const { return -x * sin_t + y * cos_t + y_offset; }
};

inline std::pair<double, double> project(const SliceProjection& sp, double x, double y) {
  return {sp.project_x(x, y), sp.project_y(x, y)};
}

enum class BinStorage : std::uint8_t { sorted_vector = 0, ordered_multiset = 1 };
enum class RowDirection { forward, backward };

// Ordered multiset of 32-bit projected x coordinates for one bin row.
// sorted_vector: append + finalize once, then binary search (static maps).
// ordered_multiset: logarithmic insert/remove for incremental updates.
class ZeroPointBin {
 public:
  explicit ZeroPointBin(BinStorage storage = BinStorage::sorted_vector) : storage_(storage) {}

  BinStorage storage() const { return storage_; }
  size_t size() const {
    return storage_ == BinStorage::sorted_vector ? vec_.size() : set_.size();
  }
  bool empty() const { return size() == 0; }

  // Build path: append in any order, finalize before queries.
  void append(float v) {
    if (storage_ == BinStorage::sorted_vector)
      vec_.push_back(v);
    else
      set_.insert(v);
  }
  void finalize() {
    if (storage_ == BinStorage::sorted_vector) std::sort(vec_.begin(), vec_.end());
  }

  // Dynamic path: order is maintained.
  void insert(float v) {
    if (storage_ == BinStorage::sorted_vector)
      vec_.insert(std::lower_bound(vec_.begin(), vec_.end(), v), v);
    else
      set_.insert(v);
  }
  bool remove_one(float v) {
    if (storage_ == BinStorage::sorted_vector) {
      auto it = std::lower_bound(vec_.begin(), vec_.end(), v);
      if (it == vec_.end() || *it != v) return false;
      vec_.erase(it);
      return true;
    }
    auto it = set_.find(v);
    if (it == set_.end()) return false;
    set_.erase(it);
    return true;
  }

  void convert_to_vector() {
    if (storage_ == BinStorage::sorted_vector) return;
    vec_.assign(set_.begin(), set_.end());
    set_.clear();
    storage_ = BinStorage::sorted_vector;
  }

  std::vector<float> values() const {
    if (storage_ == BinStorage::sorted_vector) return vec_;
    return std::vector<float>(set_.begin(), set_.end());
  }

  bool successor(double x, double* out) const;       // smallest v > x
  bool predecessor(double x, double* out) const;     // largest v < x
  bool successor_geq(double x, double* out) const;   // smallest v >= x
  bool predecessor_leq(double x, double* out) const; // largest v <= x

  // Visit strict successors in ascending order (or strict predecessors in
  // descending order). f(value, index) returns true to keep going; index is
  // the sorted position, only meaningful in vector storage (SIZE_MAX else).
  template <class F>
  void visit_above(double x, F&& f) const {
    if (storage_ == BinStorage::sorted_vector) {
      auto it = std::upper_bound(vec_.begin(), vec_.end(), x,
                                 [](double q, float v) { return q < double(v); });
      for (; it != vec_.end(); ++it)
        if (!f(double(*it), size_t(it - vec_.begin()))) return;
    } else {
      for (auto it = set_.upper_bound(x); it != set_.end(); ++it)
        if (!f(double(*it), size_t(-1))) return;
    }
  }

  template <class F>
  void visit_below(double x, F&& f) const {
    if (storage_ == BinStorage::sorted_vector) {
      auto it = std::lower_bound(vec_.begin(), vec_.end(), x,
                                 [](float v, double q) { return double(v) < q; });
      for (auto r = std::make_reverse_iterator(it); r != vec_.rend(); ++r)
        if (!f(double(*r), size_t(vec_.rend() - r - 1))) return;
    } else {
      auto it = set_.lower_bound(x);
      for (auto r = std::make_reverse_iterator(it); r != set_.rend(); ++r)
        if (!f(double(*r), size_t(-1))) return;
    }
  }

 private:
  BinStorage storage_;
  std::vector<float> vec_;
  std::multiset<float, std::less<>> set_;
};

// Receives the candidate that resolved each query during the prune marking
// pass. index is the candidate's sorted position within (slice, row).
struct MarkSink {
  virtual ~MarkSink() = default;
  virtual void mark(int slice, int row, size_t index, bool forward) = 0;
};

// The compressed directional distance transform: S = theta_disc/2 slices of
// zero-point bins covering the half circle; the other half is served by
// predecessor searches in the same bins.
class Cddt {
 public:
  Cddt(const OccupancyGrid& grid, const RangeMethodConfig& cfg = {},
       BinStorage storage = BinStorage::sorted_vector);

  static Cddt build(const OccupancyGrid& grid, const RangeMethodConfig& cfg = {},
                    BinStorage storage = BinStorage::sorted_vector) {
    return Cddt(grid, cfg, storage);
  }

  // Distance to the first obstacle along the direction grid nearest to
  // q.theta. Candidate distances are differences of projected pixel-center
  // coordinates; every candidate is validated against the grid before being
  // returned, and obstacles closer than one cell are resolved exactly, so the
  // result is always within sqrt(2)/2 px of the oracle at the same
  // discretized direction.
  double cast(const RayQuery& q) const;

  // (cast at theta, cast at theta + pi) resolved in the same slice.
  // Each component equals the corresponding single cast bit for bit.
  std::pair<double, double> cast_pair(const RayQuery& q) const;

  // Cast along discrete direction a in [0, theta_disc). sink, when given,
  // observes the resolving candidate (used by prune and by tests).
  double directional_cast(double x, double y, int a, MarkSink* sink) const;

  // Drop every zero point that no (cell-center, discrete-direction) query
  // resolves to. Discrete-state answers are preserved exactly. Converts
  // storage to sorted vectors; the structure becomes read-only.
  void prune();

  // Toggle one cell and maintain bins and membership so the structure equals
  // a fresh build of the edited grid. Throws std::logic_error when pruned,
  // std::out_of_range outside the grid. Toggling to the current state is a
  // no-op.
  void set_occupancy(int x, int y, bool occupied);

  const OccupancyGrid& grid() const { return grid_; }
  double max_range() const { return max_range_; }
  int theta_disc() const { return theta_disc_; }
  int slice_count() const { return theta_disc_ / 2; }
  bool pruned() const { return pruned_; }
  BinStorage storage() const { return storage_; }
  bool membership(int x, int y) const { return membership_[size_t(y) * grid_.width() + x] != 0; }
  size_t zero_point_count() const { return zero_points_; }

  const SliceProjection& slice(int s) const { return slices_[s].proj; }
  const ZeroPointBin& bin(int s, int row) const { return slices_[s].bins[row]; }

  // Accounting: 4 bytes per zero point, one bit per grid cell, plus a fixed
  // 48-byte overhead per slice. Stable across runs for a fixed structure.
  size_t memory_bytes() const {
    size_t wh = size_t(grid_.width()) * grid_.height();
    return 4 * zero_points_ + (wh + 7) / 8 + size_t(slice_count()) * 48;
  }

 private:
  struct Slice {
    SliceProjection proj;
    std::vector<ZeroPointBin> bins;
  };

  Cddt() = default;  // deserialization shell

  template <class F>
  void for_each_bin_of_pixel(const Slice& sl, int px, int py, F&& f) const;
  void add_pixel_points(int px, int py);
  void remove_pixel_points(int px, int py);
  void rebuild_clear_mask(int x0, int y0, int x1, int y1);
  bool clear_around(int x, int y) const;

  friend std::vector<std::uint8_t> serialize_cddt(const Cddt& c);
  friend Cddt deserialize_cddt(const std::vector<std::uint8_t>& bytes);

  OccupancyGrid grid_;
  std::vector<Slice> slices_;
  std::vector<std::uint8_t> membership_;
  std::vector<std::uint8_t> clear_;  // cell plus all 8 neighbors free
  std::vector<double> dir_cos_, dir_sin_;
  int theta_disc_ = 0;
  double max_range_ = 0.0;
  bool pruned_ = false;
  BinStorage storage_ = BinStorage::sorted_vector;
  size_t zero_points_ = 0;
};

// Decompress one bin back into per-cell distances: sample x' = t + 0.5 for
// t in [0, length) and report the distance to the nearest zero point at or
// beyond the sample (forward) or at or before it (backward), clamped to
// max_range. Samples lying exactly on a zero point read 0.
std::vector<double> reconstruct_row(const ZeroPointBin& bin, int length, RowDirection direction,
                                    double max_range);

// Binary snapshot: header, occupancy and membership bitmaps, then per slice
// each bin's point count and ascending float payload. Little-endian,
// round-trips bit-exactly.
std::vector<std::uint8_t> serialize_cddt(const Cddt& c);
Cddt deserialize_cddt(const std::vector<std::uint8_t>& bytes);
void save_cddt_file(const Cddt& c, const std::string& path);
Cddt load_cddt_file(const std::string& path);

}  // namespace rangelib
