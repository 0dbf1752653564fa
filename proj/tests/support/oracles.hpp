#pragma once

// Test-only reference implementations. Everything here is deliberately slow
// and simple so the production code can be checked against independent math.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "rangelib/grid.hpp"
#include "rangelib/raycast.hpp"

namespace testsupport {

// 4x4 fixture used throughout the unit tests: a diagonal of obstacles with
// one extra block on the bottom row.
inline rangelib::OccupancyGrid fig4_grid() {
    rangelib::OccupancyGrid g(4, 4);
    g.set(3, 0, true);
    g.set(1, 1, true);
    g.set(2, 2, true);
    g.set(3, 3, true);
    return g;
}

// O(n^2) euclidean distance transform over cell centers.
inline rangelib::DistanceField brute_distance_field(const rangelib::OccupancyGrid& g) {
    rangelib::DistanceField out;
    out.width = g.width();
    out.height = g.height();
    out.values.assign(static_cast<size_t>(g.width()) * g.height(), 0.0f);
    const double far = std::hypot(static_cast<double>(g.width()), static_cast<double>(g.height())) + 1.0;
    for (int y = 0; y < g.height(); ++y) {
        for (int x = 0; x < g.width(); ++x) {
            double best = far;
            for (int oy = 0; oy < g.height(); ++oy) {
                for (int ox = 0; ox < g.width(); ++ox) {
                    if (!g.at(ox, oy)) continue;
                    best = std::min(best, std::hypot(double(ox - x), double(oy - y)));
                }
            }
            out.values[static_cast<size_t>(y) * g.width() + x] = static_cast<float>(best);
        }
    }
    return out;
}

// Exact first-hit distance computed with per-cell AABB slab intersections,
// entirely independent of the grid walker. Occupied-cell entry distances are
// exact; grazing contacts on cell boundaries are measure zero for the random
// queries the tests use.
inline double slab_first_hit(const rangelib::OccupancyGrid& g, double x, double y,
                             double theta, double max_range) {
    const double dx = std::cos(theta);
    const double dy = std::sin(theta);
    const double inf = std::numeric_limits<double>::infinity();
    double best = inf;
    for (int cy = 0; cy < g.height(); ++cy) {
        for (int cx = 0; cx < g.width(); ++cx) {
            if (!g.at(cx, cy)) continue;
            double t0 = 0.0, t1 = inf;
            bool miss = false;
            const double lo[2] = {double(cx), double(cy)};
            const double hi[2] = {double(cx) + 1.0, double(cy) + 1.0};
            const double o[2] = {x, y};
            const double d[2] = {dx, dy};
            for (int axis = 0; axis < 2; ++axis) {
                if (std::abs(d[axis]) < 1e-15) {
                    if (o[axis] < lo[axis] || o[axis] > hi[axis]) { miss = true; break; }
                } else {
                    double ta = (lo[axis] - o[axis]) / d[axis];
                    double tb = (hi[axis] - o[axis]) / d[axis];
                    if (ta > tb) std::swap(ta, tb);
                    t0 = std::max(t0, ta);
                    t1 = std::min(t1, tb);
                    if (t0 > t1) { miss = true; break; }
                }
            }
            if (!miss && t1 >= 0.0) best = std::min(best, std::max(t0, 0.0));
        }
    }
    if (best > max_range) return max_range;
    return best;
}

// Dense sampling along the ray; locates the first occupied sample. The true
// entry point lies within one step of the returned value.
inline double fine_step_first_hit(const rangelib::OccupancyGrid& g, double x, double y,
                                  double theta, double max_range, double step = 0.01) {
    const double dx = std::cos(theta);
    const double dy = std::sin(theta);
    for (double t = 0.0; t <= max_range; t += step) {
        const double px = x + t * dx;
        const double py = y + t * dy;
        const int cx = static_cast<int>(std::floor(px));
        const int cy = static_cast<int>(std::floor(py));
        if (cx < 0 || cy < 0 || cx >= g.width() || cy >= g.height()) return max_range;
        if (g.at(cx, cy)) return t;
    }
    return max_range;
}

inline double percentile(std::vector<double> v, double frac) {
    std::sort(v.begin(), v.end());
    if (v.empty()) return 0.0;
    const size_t idx = static_cast<size_t>(frac * (v.size() - 1) + 0.5);
    return v[std::min(idx, v.size() - 1)];
}

// Composite trapezoid rule, fine enough for densities with jump
// discontinuities when n is large.
template <typename F>
double trapezoid(F f, double a, double b, int n) {
    double acc = 0.5 * (f(a) + f(b));
    const double h = (b - a) / n;
    for (int i = 1; i < n; ++i) acc += f(a + h * i);
    return acc * h;
}

// Deterministic 64-bit mix, handy for seeding independent test streams.
inline uint64_t mix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace testsupport
