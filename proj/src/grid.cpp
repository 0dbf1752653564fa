#include "rangelib/grid.hpp"

#include <algorithm>
#include <fstream>
#include <limits>

namespace rangelib {

namespace {

struct Cursor {
  const std::vector<std::uint8_t>& bytes;
  size_t pos = 0;
  bool eof() const { return pos >= bytes.size(); }
  int peek() const { return eof() ? -1 : bytes[pos]; }
};

bool is_pgm_space(int c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

// Whitespace and '#' comments are both legal between header tokens.
void skip_separators(Cursor& c) {
  for (;;) {
    while (!c.eof() && is_pgm_space(c.peek())) c.pos++;
    if (!c.eof() && c.peek() == '#') {
      while (!c.eof() && c.peek() != '\n') c.pos++;
      continue;
    }
    return;
  }
}

long parse_int(Cursor& c, const char* what) {
  skip_separators(c);
  size_t start = c.pos;
  if (c.eof() || c.peek() < '0' || c.peek() > '9')
    throw ParseError(std::string("expected ") + what, c.pos);
  long v = 0;
  while (!c.eof() && c.peek() >= '0' && c.peek() <= '9') {
    v = v * 10 + (c.bytes[c.pos++] - '0');
    if (v > 1000000000) throw ParseError(std::string(what) + " out of range", start);
  }
  return v;
}

}  // namespace

OccupancyGrid load_pgm(const std::vector<std::uint8_t>& bytes, int threshold) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5'))
    throw ParseError("not a P2/P5 pgm", 0);
  const bool binary = bytes[1] == '5';
  Cursor c{bytes, 2};
  const long w = parse_int(c, "width");
  const long h = parse_int(c, "height");
  const long maxval = parse_int(c, "maxval");
  if (w <= 0 || h <= 0) throw ParseError("bad dimensions", c.pos);
  if (maxval <= 0 || maxval > 255) throw ParseError("unsupported maxval", c.pos);

  OccupancyGrid grid{int(w), int(h)};
  if (binary) {
    if (c.eof() || !is_pgm_space(c.peek())) throw ParseError("missing raster separator", c.pos);
    c.pos++;
    if (bytes.size() - c.pos < size_t(w) * size_t(h))
      throw ParseError("truncated raster", bytes.size());
    for (long y = 0; y < h; y++)
      for (long x = 0; x < w; x++) {
        int v = bytes[c.pos];
        if (v > maxval) throw ParseError("pixel above maxval", c.pos);
        c.pos++;
        grid.set(int(x), int(y), v <= threshold);
      }
  } else {
    for (long y = 0; y < h; y++)
      for (long x = 0; x < w; x++) {
        size_t at = c.pos;
        long v = parse_int(c, "pixel");
        if (v > maxval) throw ParseError("pixel above maxval", at);
        grid.set(int(x), int(y), v <= threshold);
      }
  }
  return grid;
}

OccupancyGrid load_pgm_file(const std::string& path, int threshold) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                                  std::istreambuf_iterator<char>());
  return load_pgm(bytes, threshold);
}

std::vector<std::uint8_t> save_pgm(const OccupancyGrid& grid) {
  std::string header = "P5\n" + std::to_string(grid.width()) + " " +
                       std::to_string(grid.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(out.size() + size_t(grid.width()) * grid.height());
  for (int y = 0; y < grid.height(); y++)
    for (int x = 0; x < grid.width(); x++) out.push_back(grid.at(x, y) ? 0 : 255);
  return out;
}

void save_pgm_file(const OccupancyGrid& grid, const std::string& path) {
  auto bytes = save_pgm(grid);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  f.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
}

bool is_edge_cell(const OccupancyGrid& grid, int x, int y) {
  if (!grid.at(x, y)) return false;
  for (int dy = -1; dy <= 1; dy++)
    for (int dx = -1; dx <= 1; dx++) {
      if (dx == 0 && dy == 0) continue;
      int nx = x + dx, ny = y + dy;
      if (!grid.in_bounds(nx, ny) || !grid.at(nx, ny)) return true;
    }
  return false;
}

OccupancyGrid edge_map(const OccupancyGrid& grid) {
  OccupancyGrid out(grid.width(), grid.height(), grid.resolution());
  for (int y = 0; y < grid.height(); y++)
    for (int x = 0; x < grid.width(); x++)
      if (is_edge_cell(grid, x, y)) out.set(x, y, true);
  return out;
}

namespace {

constexpr double kFar = 1e20;

// Lower envelope of parabolas, one pass of the squared distance transform.
void dt_1d(const std::vector<double>& f, std::vector<double>& d, std::vector<int>& v,
           std::vector<double>& z, int n) {
  int k = 0;
  v[0] = 0;
  z[0] = -kFar;
  z[1] = kFar;
  for (int q = 1; q < n; q++) {
    double s = ((f[q] + double(q) * q) - (f[v[k]] + double(v[k]) * v[k])) / (2.0 * q - 2.0 * v[k]);
    while (s <= z[k]) {
      k--;
      s = ((f[q] + double(q) * q) - (f[v[k]] + double(v[k]) * v[k])) / (2.0 * q - 2.0 * v[k]);
    }
    k++;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kFar;
  }
  k = 0;
  for (int q = 0; q < n; q++) {
    while (z[k + 1] < q) k++;
    double dq = q - v[k];
    d[q] = dq * dq + f[v[k]];
  }
}

}  // namespace

DistanceField distance_transform(const OccupancyGrid& grid) {
  const int w = grid.width(), h = grid.height();
  DistanceField field;
  field.width = w;
  field.height = h;
  auto& out = field.values;
  out.resize(size_t(w) * h);
  if (grid.occupied_count() == 0) {
    std::fill(out.begin(), out.end(), float(grid.diagonal()));
    return field;
  }

  std::vector<double> sq(size_t(w) * h);
  for (int y = 0; y < h; y++)
    for (int x = 0; x < w; x++) sq[size_t(y) * w + x] = grid.at(x, y) ? 0.0 : kFar;

  const int n = std::max(w, h);
  std::vector<double> f(n), d(n), z(size_t(n) + 1);
  std::vector<int> v(n);

  for (int x = 0; x < w; x++) {
    for (int y = 0; y < h; y++) f[y] = sq[size_t(y) * w + x];
    dt_1d(f, d, v, z, h);
    for (int y = 0; y < h; y++) sq[size_t(y) * w + x] = d[y];
  }
  for (int y = 0; y < h; y++) {
    for (int x = 0; x < w; x++) f[x] = sq[size_t(y) * w + x];
    dt_1d(f, d, v, z, w);
    for (int x = 0; x < w; x++) out[size_t(y) * w + x] = float(std::sqrt(d[x]));
  }
  return field;
}

}  // namespace rangelib
