#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "rangelib/grid.hpp"
#include "support/oracles.hpp"

using rangelib::OccupancyGrid;
using rangelib::ParseError;

namespace {

std::vector<std::uint8_t> bytes_of(const std::string& s) {
    return std::vector<std::uint8_t>(s.begin(), s.end());
}

OccupancyGrid random_grid(int w, int h, double density, uint32_t seed) {
    OccupancyGrid g(w, h);
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int y = 0; y < h; y++)
        for (int x = 0; x < w; x++)
            if (u(rng) < density) g.set(x, y, true);
    return g;
}

}  // namespace

TEST_CASE("grid constructor validates dimensions and resolution") {
    CHECK_THROWS_AS(OccupancyGrid(0, 4), std::invalid_argument);
    CHECK_THROWS_AS(OccupancyGrid(4, 0), std::invalid_argument);
    CHECK_THROWS_AS(OccupancyGrid(-1, 4), std::invalid_argument);
    CHECK_THROWS_AS(OccupancyGrid(4, 4, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(OccupancyGrid(4, 4, -0.05), std::invalid_argument);
    OccupancyGrid g(3, 2, 0.1);
    CHECK(g.width() == 3);
    CHECK(g.height() == 2);
    CHECK(g.resolution() == doctest::Approx(0.1));
    CHECK(g.occupied_count() == 0);
}

TEST_CASE("cell accessors and bounds") {
    OccupancyGrid g(4, 3);
    CHECK_FALSE(g.at(1, 2));
    g.set(1, 2, true);
    CHECK(g.at(1, 2));
    CHECK(g.occupied_count() == 1);
    CHECK(g.in_bounds(0, 0));
    CHECK(g.in_bounds(3, 2));
    CHECK_FALSE(g.in_bounds(4, 0));
    CHECK_FALSE(g.in_bounds(0, 3));
    CHECK_FALSE(g.in_bounds(-1, 0));
}

TEST_CASE("point occupancy uses floor and treats out of bounds as free") {
    OccupancyGrid g(4, 4);
    g.set(2, 1, true);
    CHECK(rangelib::is_occupied(g, 2.0, 1.0));    // cell owns its low corner
    CHECK(rangelib::is_occupied(g, 2.999, 1.999));
    CHECK_FALSE(rangelib::is_occupied(g, 3.0, 1.5));  // next cell over
    CHECK_FALSE(rangelib::is_occupied(g, 1.999, 1.5));
    CHECK_FALSE(rangelib::is_occupied(g, -0.5, 0.5));
    CHECK_FALSE(rangelib::is_occupied(g, 100.0, 100.0));
}

TEST_CASE("equality compares occupancy, not resolution") {
    OccupancyGrid a(4, 4, 0.05), b(4, 4, 0.20);
    a.set(1, 1, true);
    b.set(1, 1, true);
    CHECK(a == b);
    b.set(2, 2, true);
    CHECK(a != b);
    OccupancyGrid c(4, 5);
    CHECK(a != c);
}

TEST_CASE("pgm round trip preserves occupancy") {
    OccupancyGrid g = random_grid(13, 7, 0.3, 42);
    auto bytes = rangelib::save_pgm(g);
    OccupancyGrid back = rangelib::load_pgm(bytes);
    CHECK(back == g);
}

TEST_CASE("pgm p2 ascii parsing with comments") {
    const std::string text =
        "P2\n"
        "# a comment line\n"
        "3 2 # trailing comment\n"
        "255\n"
        "0 255 0\n"
        "255 0 255\n";
    OccupancyGrid g = rangelib::load_pgm(bytes_of(text));
    CHECK(g.width() == 3);
    CHECK(g.height() == 2);
    CHECK(g.at(0, 0));
    CHECK_FALSE(g.at(1, 0));
    CHECK(g.at(2, 0));
    CHECK_FALSE(g.at(0, 1));
    CHECK(g.at(1, 1));
    CHECK_FALSE(g.at(2, 1));
}

TEST_CASE("pgm threshold boundary: pixels at the threshold are occupied") {
    const std::string text = "P2\n3 1\n255\n126 127 128\n";
    OccupancyGrid g = rangelib::load_pgm(bytes_of(text), 127);
    CHECK(g.at(0, 0));
    CHECK(g.at(1, 0));
    CHECK_FALSE(g.at(2, 0));
}

TEST_CASE("pgm parse errors carry byte offsets") {
    CHECK_THROWS_AS(rangelib::load_pgm(bytes_of("P6\n1 1\n255\nx")), ParseError);
    CHECK_THROWS_AS(rangelib::load_pgm(bytes_of("")), ParseError);
    CHECK_THROWS_AS(rangelib::load_pgm(bytes_of("P2\n0 3\n255\n")), ParseError);
    CHECK_THROWS_AS(rangelib::load_pgm(bytes_of("P2\n2 1\n70000\n0 0")), ParseError);
    CHECK_THROWS_AS(rangelib::load_pgm(bytes_of("P2\n2 1\n255\n12")), ParseError);  // missing pixel
    CHECK_THROWS_AS(rangelib::load_pgm(bytes_of("P2\n2 1\n100\n0 101")), ParseError);
    // binary raster one byte short
    std::string p5 = "P5\n2 2\n255\n";
    auto b = bytes_of(p5);
    b.push_back(0);
    b.push_back(255);
    b.push_back(0);
    CHECK_THROWS_AS(rangelib::load_pgm(b), ParseError);

    try {
        rangelib::load_pgm(bytes_of("P2\n2 1\n255\n12"));
        FAIL("expected throw");
    } catch (const ParseError& e) {
        CHECK(e.offset() > 0);
        CHECK(std::string(e.what()).find("byte") != std::string::npos);
    }
}

TEST_CASE("pgm file io round trip") {
    OccupancyGrid g = testsupport::fig4_grid();
    const std::string path = "test_grid_roundtrip.pgm";
    rangelib::save_pgm_file(g, path);
    OccupancyGrid back = rangelib::load_pgm_file(path);
    CHECK(back == g);
    std::remove(path.c_str());
    CHECK_THROWS_AS(rangelib::load_pgm_file("does_not_exist_anywhere.pgm"), std::runtime_error);
}

TEST_CASE("edge map keeps boundary cells and drops interior cells") {
    // 3x3 solid block centered in 5x5: the 8 ring cells are edges, the
    // center cell is fully surrounded and drops out.
    OccupancyGrid g(5, 5);
    for (int y = 1; y <= 3; y++)
        for (int x = 1; x <= 3; x++) g.set(x, y, true);
    OccupancyGrid e = rangelib::edge_map(g);
    CHECK(e.occupied_count() == 8);
    CHECK_FALSE(e.at(2, 2));
    for (int y = 1; y <= 3; y++)
        for (int x = 1; x <= 3; x++)
            if (x != 2 || y != 2) CHECK(e.at(x, y));
}

TEST_CASE("edge map on a fully occupied grid keeps only the border") {
    OccupancyGrid g(4, 4);
    for (int y = 0; y < 4; y++)
        for (int x = 0; x < 4; x++) g.set(x, y, true);
    OccupancyGrid e = rangelib::edge_map(g);
    CHECK(e.occupied_count() == 12);  // 16 minus the 2x2 interior
    CHECK_FALSE(e.at(1, 1));
    CHECK_FALSE(e.at(2, 2));
    CHECK(e.at(0, 0));
    CHECK(e.at(3, 3));
}

TEST_CASE("edge map of sparse grids is identity") {
    OccupancyGrid g = random_grid(16, 16, 0.05, 7);
    // with 5% density isolated cells dominate; every occupied cell has a
    // free neighbor unless it is fully enclosed, which we verify per cell
    OccupancyGrid e = rangelib::edge_map(g);
    for (int y = 0; y < 16; y++)
        for (int x = 0; x < 16; x++)
            CHECK(e.at(x, y) == rangelib::is_edge_cell(g, x, y));
}

TEST_CASE("distance transform matches brute force") {
    for (uint32_t seed : {1u, 2u, 3u}) {
        OccupancyGrid g = random_grid(17, 11, 0.15, seed);
        if (g.occupied_count() == 0) g.set(5, 5, true);
        auto fast = rangelib::distance_transform(g);
        auto slow = testsupport::brute_distance_field(g);
        for (int y = 0; y < g.height(); y++)
            for (int x = 0; x < g.width(); x++) {
                CAPTURE(x);
                CAPTURE(y);
                CHECK(fast.at(x, y) == doctest::Approx(slow.at(x, y)).epsilon(1e-5));
            }
    }
}

TEST_CASE("distance transform basics") {
    OccupancyGrid g(8, 8);
    g.set(3, 4, true);
    auto d = rangelib::distance_transform(g);
    CHECK(d.at(3, 4) == doctest::Approx(0.0));
    CHECK(d.at(4, 4) == doctest::Approx(1.0));
    CHECK(d.at(3, 0) == doctest::Approx(4.0));
    CHECK(d.at(6, 8 - 1) == doctest::Approx(std::hypot(3.0, 3.0)));
}

TEST_CASE("distance transform of an empty grid is the diagonal") {
    OccupancyGrid g(6, 8);
    auto d = rangelib::distance_transform(g);
    const float expect = float(std::sqrt(36.0 + 64.0));
    for (int y = 0; y < 8; y++)
        for (int x = 0; x < 6; x++) CHECK(d.at(x, y) == doctest::Approx(expect));
}

TEST_CASE("distance transform is 1-Lipschitz between neighbors") {
    OccupancyGrid g = random_grid(24, 20, 0.08, 99);
    g.set(0, 0, true);
    auto d = rangelib::distance_transform(g);
    for (int y = 0; y < g.height(); y++)
        for (int x = 0; x + 1 < g.width(); x++)
            CHECK(std::abs(d.at(x, y) - d.at(x + 1, y)) <= 1.0f + 1e-5f);
    for (int y = 0; y + 1 < g.height(); y++)
        for (int x = 0; x < g.width(); x++)
            CHECK(std::abs(d.at(x, y) - d.at(x, y + 1)) <= 1.0f + 1e-5f);
}
