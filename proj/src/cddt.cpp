#include "rangelib/cddt.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <optional>
#include <stdexcept>

#include "rangelib/detail/ray_walker.hpp"

namespace rangelib {

namespace {

// The near field is resolved by walking the grid directly, so obstacles that
// a continuous-position query grazes within the first cell never depend on
// bin contents.
constexpr double kNearField = 0.75;

// Half-width of the validation window around each candidate distance. A
// candidate is the projection of a pixel center onto the ray axis, so the
// true entry point lies within sqrt(2)/2 of it; the remainder covers float
// rounding of stored zero points.
constexpr double kVerifyHalf = 0.7072;
constexpr double kLatticeEps = 1e-9;

}  // namespace

void direction_components(int i, int theta_disc, double* cos_out, double* sin_out) {
  long long q4 = 4LL * i;
  if (q4 % theta_disc == 0) {
    // axis-aligned direction: snap so axis slices project onto exact lattices
    int q = int(q4 / theta_disc) & 3;
    *cos_out = (q == 0) ? 1.0 : (q == 2) ? -1.0 : 0.0;
    *sin_out = (q == 1) ? 1.0 : (q == 3) ? -1.0 : 0.0;
  } else {
    double t = double(i) * kTwoPi / double(theta_disc);
    *cos_out = std::cos(t);
    *sin_out = std::sin(t);
  }
}

SliceProjection SliceProjection::make(double theta, double cos_t, double sin_t, int width,
                                      int height) {
  SliceProjection p;
  p.theta = theta;
  p.cos_t = cos_t;
  p.sin_t = sin_t;
  // raw y' of the four grid corners; shift the smallest to zero
  double a = 0.0;
  double b = -double(width) * sin_t;
  double c = double(height) * cos_t;
  double d = b + c;
  double lo = std::min(std::min(a, b), std::min(c, d));
  double hi = std::max(std::max(a, b), std::max(c, d));
  p.y_offset = -lo;
  p.bin_count = int(std::ceil(hi - lo)) + 1;
  return p;
}

bool ZeroPointBin::successor(double x, double* out) const {
  if (storage_ == BinStorage::sorted_vector) {
    auto it = std::upper_bound(vec_.begin(), vec_.end(), x,
                               [](double q, float v) { return q < double(v); });
    if (it == vec_.end()) return false;
    *out = double(*it);
    return true;
  }
  auto it = set_.upper_bound(x);
  if (it == set_.end()) return false;
  *out = double(*it);
  return true;
}

bool ZeroPointBin::predecessor(double x, double* out) const {
  if (storage_ == BinStorage::sorted_vector) {
    auto it = std::lower_bound(vec_.begin(), vec_.end(), x,
                               [](float v, double q) { return double(v) < q; });
    if (it == vec_.begin()) return false;
    *out = double(*(it - 1));
    return true;
  }
  auto it = set_.lower_bound(x);
  if (it == set_.begin()) return false;
  *out = double(*std::prev(it));
  return true;
}

bool ZeroPointBin::successor_geq(double x, double* out) const {
  if (storage_ == BinStorage::sorted_vector) {
    auto it = std::lower_bound(vec_.begin(), vec_.end(), x,
                               [](float v, double q) { return double(v) < q; });
    if (it == vec_.end()) return false;
    *out = double(*it);
    return true;
  }
  auto it = set_.lower_bound(x);
  if (it == set_.end()) return false;
  *out = double(*it);
  return true;
}

bool ZeroPointBin::predecessor_leq(double x, double* out) const {
  if (storage_ == BinStorage::sorted_vector) {
    auto it = std::upper_bound(vec_.begin(), vec_.end(), x,
                               [](double q, float v) { return q < double(v); });
    if (it == vec_.begin()) return false;
    *out = double(*(it - 1));
    return true;
  }
  auto it = set_.upper_bound(x);
  if (it == set_.begin()) return false;
  *out = double(*std::prev(it));
  return true;
}

template <class F>
void Cddt::for_each_bin_of_pixel(const Slice& sl, int px, int py, F&& f) const {
  const SliceProjection& p = sl.proj;
  // rows whose unit-wide strip overlaps the pixel square with positive area
  double c0 = p.project_y(px, py);
  double c1 = p.project_y(px + 1, py);
  double c2 = p.project_y(px, py + 1);
  double c3 = p.project_y(px + 1, py + 1);
  double lo = std::min(std::min(c0, c1), std::min(c2, c3));
  double hi = std::max(std::max(c0, c1), std::max(c2, c3));
  int r0 = int(std::floor(lo));
  int r1 = int(std::ceil(hi)) - 1;
  if (r0 < 0) r0 = 0;
  if (r1 >= p.bin_count) r1 = p.bin_count - 1;
  float v = float(p.project_x(px + 0.5, py + 0.5));
  for (int r = r0; r <= r1; r++) f(r, v);
}

Cddt::Cddt(const OccupancyGrid& grid, const RangeMethodConfig& cfg, BinStorage storage)
    : grid_(grid), theta_disc_(cfg.theta_disc), storage_(storage) {
  cfg.validate();
  max_range_ = cfg.resolved_max_range(grid_);
  const int w = grid_.width(), h = grid_.height();
  const int S = theta_disc_ / 2;

  dir_cos_.resize(theta_disc_);
  dir_sin_.resize(theta_disc_);
  for (int a = 0; a < theta_disc_; a++)
    direction_components(a, theta_disc_, &dir_cos_[a], &dir_sin_[a]);

  slices_.resize(S);
  for (int s = 0; s < S; s++) {
    double theta = double(s) * kTwoPi / double(theta_disc_);
    slices_[s].proj = SliceProjection::make(theta, dir_cos_[s], dir_sin_[s], w, h);
    slices_[s].bins.assign(slices_[s].proj.bin_count, ZeroPointBin(storage));
  }

  membership_.assign(size_t(w) * h, 0);
  for (int y = 0; y < h; y++)
    for (int x = 0; x < w; x++)
      if (is_edge_cell(grid_, x, y)) {
        membership_[size_t(y) * w + x] = 1;
        for (auto& sl : slices_)
          for_each_bin_of_pixel(sl, x, y, [&](int r, float v) {
            sl.bins[r].append(v);
            zero_points_++;
          });
      }
  for (auto& sl : slices_)
    for (auto& b : sl.bins) b.finalize();

  clear_.assign(size_t(w) * h, 0);
  rebuild_clear_mask(0, 0, w - 1, h - 1);
}

bool Cddt::clear_around(int x, int y) const {
  for (int dy = -1; dy <= 1; dy++)
    for (int dx = -1; dx <= 1; dx++) {
      int nx = x + dx, ny = y + dy;
      if (grid_.in_bounds(nx, ny) && grid_.at(nx, ny)) return false;
    }
  return true;
}

void Cddt::rebuild_clear_mask(int x0, int y0, int x1, int y1) {
  x0 = std::max(x0, 0);
  y0 = std::max(y0, 0);
  x1 = std::min(x1, grid_.width() - 1);
  y1 = std::min(y1, grid_.height() - 1);
  for (int y = y0; y <= y1; y++)
    for (int x = x0; x <= x1; x++)
      clear_[size_t(y) * grid_.width() + x] = clear_around(x, y) ? 1 : 0;
}

void Cddt::add_pixel_points(int px, int py) {
  for (auto& sl : slices_)
    for_each_bin_of_pixel(sl, px, py, [&](int r, float v) {
      sl.bins[r].insert(v);
      zero_points_++;
    });
}

void Cddt::remove_pixel_points(int px, int py) {
  for (auto& sl : slices_)
    for_each_bin_of_pixel(sl, px, py, [&](int r, float v) {
      if (sl.bins[r].remove_one(v)) zero_points_--;
    });
}

double Cddt::directional_cast(double x, double y, int a, MarkSink* sink) const {
  const int cxi = int(std::floor(x)), cyi = int(std::floor(y));
  if (!grid_.in_bounds(cxi, cyi)) return max_range_;
  if (grid_.at(cxi, cyi)) return 0.0;

  const int S = theta_disc_ / 2;
  const bool forward = a < S;
  const int s = forward ? a : a - S;
  const Slice& sl = slices_[s];
  const double xq = sl.proj.project_x(x, y);
  const double yq = sl.proj.project_y(x, y);
  int row = int(yq);
  if (row < 0) row = 0;
  if (row >= sl.proj.bin_count) row = sl.proj.bin_count - 1;

  const double dx = dir_cos_[a], dy = dir_sin_[a];
  std::optional<detail::RayWalker> walker;

  if (!clear_[size_t(cyi) * grid_.width() + cxi]) {
    // something occupied within one cell of the origin: resolve the first
    // 0.75 px exactly so near misses cannot slip between candidates
    walker.emplace(grid_, x, y, dx, dy);
    double r = walker->scan_to(kNearField);
    if (r >= 0.0) return std::min(r, max_range_);
    if (r == detail::RayWalker::kExit) return max_range_;
  }

  double result = max_range_;
  const double gw = double(grid_.width()), gh = double(grid_.height());
  auto consider = [&](double v, size_t index) {
    double d = forward ? v - xq : xq - v;
    if (d >= max_range_) return false;
    // Landing-cell probe: the point at distance d lies inside the
    // verification window, so an occupied landing cell settles the scan
    // without running the walker. Landings near a lattice line fall through:
    // the walker's cell convention decides boundary and corner touches.
    const double px = x + d * dx, py = y + d * dy;
    if (px >= 0.0 && py >= 0.0 && px < gw && py < gh) {
      const int hx = int(px), hy = int(py);
      const double fx = px - double(hx), fy = py - double(hy);
      if (fx > kLatticeEps && fx < 1.0 - kLatticeEps && fy > kLatticeEps &&
          fy < 1.0 - kLatticeEps && grid_.at(hx, hy)) {
        if (sink) sink->mark(s, row, index, forward);
        result = d;
        return false;
      }
    }
    if (!walker) walker.emplace(grid_, x, y, dx, dy);
    walker->seek(d - kVerifyHalf);
    double r = walker->scan_to(d + kVerifyHalf);
    if (r == detail::RayWalker::kExit) return false;
    if (r < 0.0) return true;  // clean window, next zero point
    if (sink) sink->mark(s, row, index, forward);
    result = d;
    return false;
  };
  const ZeroPointBin& bin = sl.bins[row];
  if (forward)
    bin.visit_above(xq, consider);
  else
    bin.visit_below(xq, consider);
  return result;
}

double Cddt::cast(const RayQuery& q) const {
  return directional_cast(q.x, q.y, direction_index(q.theta, theta_disc_), nullptr);
}

std::pair<double, double> Cddt::cast_pair(const RayQuery& q) const {
  int a = direction_index(q.theta, theta_disc_);
  int b = (a + theta_disc_ / 2) % theta_disc_;
  return {directional_cast(q.x, q.y, a, nullptr), directional_cast(q.x, q.y, b, nullptr)};
}

void Cddt::prune() {
  if (pruned_) return;
  for (auto& sl : slices_)
    for (auto& b : sl.bins) b.convert_to_vector();
  storage_ = BinStorage::sorted_vector;

  struct Marks final : MarkSink {
    std::vector<std::vector<std::vector<std::uint8_t>>> bits;
    void mark(int slice, int row, size_t index, bool forward) override {
      auto& row_bits = bits[slice][row];
      row_bits[index] = 1;
      // also keep the neighbor on the near side so the antipodal search of a
      // paired cast lands on the same zero points
      if (forward) {
        if (index > 0) row_bits[index - 1] = 1;
      } else {
        if (index + 1 < row_bits.size()) row_bits[index + 1] = 1;
      }
    }
  } sink;

  sink.bits.resize(slices_.size());
  for (size_t s = 0; s < slices_.size(); s++) {
    sink.bits[s].resize(slices_[s].bins.size());
    for (size_t r = 0; r < slices_[s].bins.size(); r++)
      sink.bits[s][r].assign(slices_[s].bins[r].size(), 0);
  }

  for (int cy = 0; cy < grid_.height(); cy++)
    for (int cx = 0; cx < grid_.width(); cx++) {
      if (grid_.at(cx, cy)) continue;  // occupied origins never consult bins
      const double px = cx + 0.5, py = cy + 0.5;
      for (int a = 0; a < theta_disc_; a++) directional_cast(px, py, a, &sink);
    }

  zero_points_ = 0;
  for (size_t s = 0; s < slices_.size(); s++)
    for (size_t r = 0; r < slices_[s].bins.size(); r++) {
      std::vector<float> vals = slices_[s].bins[r].values();
      ZeroPointBin kept(BinStorage::sorted_vector);
      for (size_t i = 0; i < vals.size(); i++)
        if (sink.bits[s][r][i]) {
          kept.append(vals[i]);
          zero_points_++;
        }
      kept.finalize();
      slices_[s].bins[r] = std::move(kept);
    }
  pruned_ = true;
}

void Cddt::set_occupancy(int x, int y, bool occupied) {
  if (pruned_) throw std::logic_error("cddt: incremental updates are disabled after prune");
  if (!grid_.in_bounds(x, y)) throw std::out_of_range("cddt: cell outside the grid");
  if ((grid_.at(x, y) != 0) == occupied) return;

  const int w = grid_.width();
  const size_t idx = size_t(y) * w + x;
  grid_.set(x, y, occupied);

  if (occupied) {
    if (is_edge_cell(grid_, x, y)) {
      membership_[idx] = 1;
      add_pixel_points(x, y);
    }
    // occupied neighbors may have lost their last free neighbor
    for (int dy = -1; dy <= 1; dy++)
      for (int dx = -1; dx <= 1; dx++) {
        if (dx == 0 && dy == 0) continue;
        int nx = x + dx, ny = y + dy;
        if (!grid_.in_bounds(nx, ny)) continue;
        size_t nidx = size_t(ny) * w + nx;
        if (membership_[nidx] && !is_edge_cell(grid_, nx, ny)) {
          membership_[nidx] = 0;
          remove_pixel_points(nx, ny);
        }
      }
  } else {
    if (membership_[idx]) {
      membership_[idx] = 0;
      remove_pixel_points(x, y);
    }
    // every occupied neighbor now borders this free cell
    for (int dy = -1; dy <= 1; dy++)
      for (int dx = -1; dx <= 1; dx++) {
        if (dx == 0 && dy == 0) continue;
        int nx = x + dx, ny = y + dy;
        if (!grid_.in_bounds(nx, ny)) continue;
        size_t nidx = size_t(ny) * w + nx;
        if (grid_.at(nx, ny) && !membership_[nidx]) {
          membership_[nidx] = 1;
          add_pixel_points(nx, ny);
        }
      }
  }
  rebuild_clear_mask(x - 1, y - 1, x + 1, y + 1);
}

std::vector<double> reconstruct_row(const ZeroPointBin& bin, int length, RowDirection direction,
                                    double max_range) {
  std::vector<double> out(size_t(std::max(length, 0)), max_range);
  for (int t = 0; t < length; t++) {
    double s = t + 0.5, v;
    if (direction == RowDirection::forward) {
      if (bin.successor_geq(s, &v)) out[t] = std::min(v - s, max_range);
    } else {
      if (bin.predecessor_leq(s, &v)) out[t] = std::min(s - v, max_range);
    }
  }
  return out;
}

namespace {

void put_u32(std::vector<std::uint8_t>& b, std::uint32_t v) {
  for (int i = 0; i < 4; i++) b.push_back(std::uint8_t(v >> (8 * i)));
}

void put_u64(std::vector<std::uint8_t>& b, std::uint64_t v) {
  for (int i = 0; i < 8; i++) b.push_back(std::uint8_t(v >> (8 * i)));
}

void put_f32(std::vector<std::uint8_t>& b, float v) {
  std::uint32_t u;
  std::memcpy(&u, &v, 4);
  put_u32(b, u);
}

void put_f64(std::vector<std::uint8_t>& b, double v) {
  std::uint64_t u;
  std::memcpy(&u, &v, 8);
  put_u64(b, u);
}

struct Reader {
  const std::vector<std::uint8_t>& b;
  size_t pos = 0;

  void need(size_t n, const char* what) const {
    if (pos + n > b.size()) throw ParseError(std::string("cddt snapshot truncated reading ") + what, pos);
  }
  std::uint8_t u8(const char* what) {
    need(1, what);
    return b[pos++];
  }
  std::uint32_t u32(const char* what) {
    need(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; i++) v |= std::uint32_t(b[pos + i]) << (8 * i);
    pos += 4;
    return v;
  }
  std::uint64_t u64(const char* what) {
    need(8, what);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; i++) v |= std::uint64_t(b[pos + i]) << (8 * i);
    pos += 8;
    return v;
  }
  float f32(const char* what) {
    std::uint32_t u = u32(what);
    float v;
    std::memcpy(&v, &u, 4);
    return v;
  }
  double f64(const char* what) {
    std::uint64_t u = u64(what);
    double v;
    std::memcpy(&v, &u, 8);
    return v;
  }
};

constexpr std::uint32_t kSnapshotVersion = 1;

}  // namespace

std::vector<std::uint8_t> serialize_cddt(const Cddt& c) {
  const int w = c.grid_.width(), h = c.grid_.height();
  const size_t wh = size_t(w) * h;
  std::vector<std::uint8_t> out;
  out.reserve(64 + 2 * ((wh + 7) / 8) + 4 * c.zero_points_);

  out.push_back('C');
  out.push_back('D');
  out.push_back('D');
  out.push_back('T');
  put_u32(out, kSnapshotVersion);
  put_u32(out, std::uint32_t(w));
  put_u32(out, std::uint32_t(h));
  put_u32(out, std::uint32_t(c.theta_disc_));
  out.push_back(c.pruned_ ? 1 : 0);
  out.push_back(std::uint8_t(c.storage_));
  out.push_back(0);
  out.push_back(0);
  put_f64(out, c.max_range_);
  put_f64(out, c.grid_.resolution());

  auto put_bitmap = [&](const std::vector<std::uint8_t>& cells) {
    std::vector<std::uint8_t> bits((wh + 7) / 8, 0);
    for (size_t i = 0; i < wh; i++)
      if (cells[i]) bits[i / 8] |= std::uint8_t(1u << (i % 8));
    out.insert(out.end(), bits.begin(), bits.end());
  };
  std::vector<std::uint8_t> occ(wh, 0);
  for (int y = 0; y < h; y++)
    for (int x = 0; x < w; x++) occ[size_t(y) * w + x] = c.grid_.at(x, y) ? 1 : 0;
  put_bitmap(occ);
  put_bitmap(c.membership_);

  for (const auto& sl : c.slices_) {
    put_u32(out, std::uint32_t(sl.bins.size()));
    for (const auto& bin : sl.bins) {
      std::vector<float> vals = bin.values();
      put_u32(out, std::uint32_t(vals.size()));
      for (float v : vals) put_f32(out, v);
    }
  }
  return out;
}

Cddt deserialize_cddt(const std::vector<std::uint8_t>& bytes) {
  Reader r{bytes};
  r.need(4, "magic");
  if (bytes[0] != 'C' || bytes[1] != 'D' || bytes[2] != 'D' || bytes[3] != 'T')
    throw ParseError("cddt snapshot: bad magic", 0);
  r.pos = 4;
  std::uint32_t version = r.u32("version");
  if (version != kSnapshotVersion)
    throw ParseError("cddt snapshot: unsupported version", 4);

  std::uint32_t w = r.u32("width"), h = r.u32("height"), theta_disc = r.u32("theta_disc");
  if (w == 0 || h == 0 || w > (1u << 20) || h > (1u << 20))
    throw ParseError("cddt snapshot: implausible grid size", 12);
  if (theta_disc < 4 || theta_disc % 2 != 0)
    throw ParseError("cddt snapshot: invalid direction count", 20);
  std::uint8_t pruned = r.u8("pruned flag");
  std::uint8_t storage = r.u8("storage mode");
  if (pruned > 1 || storage > 1) throw ParseError("cddt snapshot: bad flags", r.pos - 2);
  r.u8("pad");
  r.u8("pad");
  double max_range = r.f64("max_range");
  double resolution = r.f64("resolution");
  if (!(max_range > 0.0) || !(resolution > 0.0))
    throw ParseError("cddt snapshot: bad scalar field", r.pos - 16);

  Cddt c;
  c.theta_disc_ = int(theta_disc);
  c.max_range_ = max_range;
  c.pruned_ = pruned != 0;
  c.storage_ = BinStorage(storage);
  c.grid_ = OccupancyGrid(int(w), int(h), resolution);

  const size_t wh = size_t(w) * h;
  const size_t bitmap_bytes = (wh + 7) / 8;
  r.need(bitmap_bytes, "occupancy bitmap");
  for (size_t i = 0; i < wh; i++)
    if (bytes[r.pos + i / 8] & (1u << (i % 8))) c.grid_.set(int(i % w), int(i / w), true);
  r.pos += bitmap_bytes;

  r.need(bitmap_bytes, "membership bitmap");
  c.membership_.assign(wh, 0);
  for (size_t i = 0; i < wh; i++)
    c.membership_[i] = (bytes[r.pos + i / 8] >> (i % 8)) & 1;
  r.pos += bitmap_bytes;

  const int S = c.theta_disc_ / 2;
  c.dir_cos_.resize(c.theta_disc_);
  c.dir_sin_.resize(c.theta_disc_);
  for (int a = 0; a < c.theta_disc_; a++)
    direction_components(a, c.theta_disc_, &c.dir_cos_[a], &c.dir_sin_[a]);
  c.slices_.resize(S);
  for (int s = 0; s < S; s++) {
    double theta = double(s) * kTwoPi / double(c.theta_disc_);
    c.slices_[s].proj =
        SliceProjection::make(theta, c.dir_cos_[s], c.dir_sin_[s], int(w), int(h));
    std::uint32_t nbins = r.u32("bin count");
    if (int(nbins) != c.slices_[s].proj.bin_count)
      throw ParseError("cddt snapshot: bin count mismatch", r.pos - 4);
    c.slices_[s].bins.assign(nbins, ZeroPointBin(c.storage_));
    for (std::uint32_t bi = 0; bi < nbins; bi++) {
      std::uint32_t n = r.u32("zero point count");
      r.need(size_t(n) * 4, "zero points");
      float prev = -std::numeric_limits<float>::infinity();
      for (std::uint32_t i = 0; i < n; i++) {
        float v = r.f32("zero point");
        if (!(v >= prev)) throw ParseError("cddt snapshot: zero points out of order", r.pos - 4);
        prev = v;
        c.slices_[s].bins[bi].append(v);
        c.zero_points_++;
      }
    }
  }
  if (r.pos != bytes.size()) throw ParseError("cddt snapshot: trailing bytes", r.pos);

  c.clear_.assign(wh, 0);
  c.rebuild_clear_mask(0, 0, int(w) - 1, int(h) - 1);
  return c;
}

void save_cddt_file(const Cddt& c, const std::string& path) {
  std::vector<std::uint8_t> bytes = serialize_cddt(c);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
  if (!f) throw std::runtime_error("short write to " + path);
}

Cddt load_cddt_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                                  std::istreambuf_iterator<char>());
  return deserialize_cddt(bytes);
}

}  // namespace rangelib
