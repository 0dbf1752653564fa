#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "rangelib/bench.hpp"
#include "rangelib/methods.hpp"
#include "rangelib/synthetic.hpp"
#include "support/oracles.hpp"

using namespace rangelib;
using testsupport::fig4_grid;

namespace {

int count_fields(const std::string& line) {
    int n = 1;
    for (char c : line) n += (c == ',');
    return n;
}

void check_stats_invariants(const BenchReport& r) {
    CHECK(r.per_query.min <= r.per_query.median);
    CHECK(r.per_query.median <= r.per_query.max);
    CHECK(r.per_query.p25 <= r.per_query.p75);
    CHECK(r.per_query.p25 <= r.per_query.median);
    CHECK(r.per_query.median <= r.per_query.p99);
    CHECK(r.per_query.mean > 0.0);
    REQUIRE(r.histogram.size() == size_t(kHistogramBuckets));
    double total = 0.0;
    for (double h : r.histogram) total += h;
    CHECK(total == doctest::Approx(double(r.queries)));
}

}  // namespace

TEST_CASE("method factory spellings") {
    CHECK(method_kind_from_name("oracle") == MethodKind::oracle);
    CHECK(method_kind_from_name("bl") == MethodKind::bresenham);
    CHECK(method_kind_from_name("rm") == MethodKind::ray_march);
    CHECK(method_kind_from_name("cddt") == MethodKind::cddt);
    CHECK(method_kind_from_name("pcddt") == MethodKind::pcddt);
    CHECK(method_kind_from_name("lut") == MethodKind::lut);
    CHECK_THROWS_AS(method_kind_from_name("sonar"), std::invalid_argument);
    CHECK(std::string(method_name(MethodKind::bresenham)) == "bl");
    CHECK(std::string(method_name(MethodKind::pcddt)) == "pcddt");
}

TEST_CASE("methods built by the factory answer consistently") {
    OccupancyGrid g = fig4_grid();
    RangeMethodConfig cfg;
    cfg.theta_disc = 8;
    auto oracle = make_method(MethodKind::oracle, g, cfg);
    auto cddt = make_method(MethodKind::cddt, g, cfg);
    auto pcddt = make_method(MethodKind::pcddt, g, cfg);
    auto lut = make_method(MethodKind::lut, g, cfg);
    CHECK(std::string(oracle->name()) == "oracle");
    CHECK(std::string(cddt->name()) == "cddt");
    CHECK(std::string(pcddt->name()) == "pcddt");
    CHECK(oracle->cast(RayQuery(0.5, 0.5, 0.0)) == doctest::Approx(2.5));
    CHECK(cddt->cast(RayQuery(0.5, 0.5, 0.0)) == doctest::Approx(3.0));
    CHECK(pcddt->cast(RayQuery(0.5, 0.5, 0.0)) == doctest::Approx(3.0));
    CHECK(lut->cast(RayQuery(0.5, 0.5, 0.0)) == doctest::Approx(3.0));
    CHECK(cddt->supports_paired_cast());
    CHECK(pcddt->supports_paired_cast());
    CHECK_FALSE(oracle->supports_paired_cast());
    CHECK(cddt->direction_count() == 8);
    CHECK(oracle->direction_count() == 0);
    CHECK(oracle->init_seconds() >= 0.0);
    CHECK(cddt->memory_bytes() > 0);
    CHECK(pcddt->memory_bytes() <= cddt->memory_bytes());
    // paired casts equal singles through the interface too
    for (auto* m : {cddt.get(), pcddt.get(), oracle.get()}) {
        RayQuery q(0.6, 2.4, 1.1);
        auto [f, b] = m->cast_pair(q);
        CHECK(f == m->cast(q));
        CHECK(b == m->cast(RayQuery(q.x, q.y, q.theta + kTwoPi / 2.0)));
    }
}

TEST_CASE("map content id distinguishes occupancy") {
    OccupancyGrid a = fig4_grid();
    OccupancyGrid b = fig4_grid();
    CHECK(map_content_id(a) == map_content_id(b));
    b.set(0, 0, true);
    CHECK(map_content_id(a) != map_content_id(b));
    OccupancyGrid c(4, 4), d(2, 8);  // same cell count, different shape
    CHECK(map_content_id(c) != map_content_id(d));
    CHECK(map_content_id(a).size() == 16);
}

TEST_CASE("grid benchmark is deterministic and honors stride") {
    OccupancyGrid g = make_structured_map(32, 32);
    RangeMethodConfig cfg;
    cfg.theta_disc = 8;
    auto bl = make_method(MethodKind::bresenham, g, cfg);
    BenchReport r1 = run_grid_benchmark(*bl, g, cfg, 4);
    BenchReport r2 = run_grid_benchmark(*bl, g, cfg, 4);
    CHECK(r1.queries == size_t(8 * 8 * 8));  // 32/4 lattice per axis, 8 directions
    CHECK(r1.checksum == r2.checksum);
    CHECK(r1.mode == "grid");
    CHECK(r1.map_id == map_content_id(g));
    CHECK(r1.method == "bl");
    check_stats_invariants(r1);
    CHECK_THROWS_AS(run_grid_benchmark(*bl, g, cfg, 0), std::invalid_argument);
    CHECK_THROWS_AS(run_grid_benchmark(*bl, g, cfg, 100), std::invalid_argument);
}

TEST_CASE("grid benchmark checksums agree across methods") {
    OccupancyGrid g = make_structured_map(48, 48);
    RangeMethodConfig cfg;
    cfg.theta_disc = 16;
    std::vector<BenchReport> reports;
    for (MethodKind k : {MethodKind::oracle, MethodKind::bresenham, MethodKind::ray_march,
                         MethodKind::cddt, MethodKind::pcddt, MethodKind::lut}) {
        auto m = make_method(k, g, cfg);
        reports.push_back(run_grid_benchmark(*m, g, cfg, 3));
    }
    // every method answers the same queries within per-query tolerance 2.0,
    // so checksums stay within 2.0 * n of each other
    const double slack = 2.0 * double(reports[0].queries);
    for (size_t i = 1; i < reports.size(); i++) {
        CAPTURE(reports[i].method);
        CHECK(std::abs(reports[i].checksum - reports[0].checksum) <= slack);
    }
}

TEST_CASE("random benchmark is seed-deterministic") {
    OccupancyGrid g = make_structured_map(32, 32);
    RangeMethodConfig cfg;
    cfg.theta_disc = 8;
    auto rm = make_method(MethodKind::ray_march, g, cfg);
    BenchReport a = run_random_benchmark(*rm, g, cfg, 5000, 42);
    BenchReport b = run_random_benchmark(*rm, g, cfg, 5000, 42);
    BenchReport c = run_random_benchmark(*rm, g, cfg, 5000, 43);
    CHECK(a.checksum == b.checksum);
    CHECK(a.checksum != c.checksum);
    CHECK(a.seed == 42);
    CHECK(c.seed == 43);
    CHECK(a.mode == "random");
    CHECK(a.queries == 5000);
    check_stats_invariants(a);
    CHECK_THROWS_AS(run_random_benchmark(*rm, g, cfg, 0, 1), std::invalid_argument);
}

TEST_CASE("bresenham stays near the oracle under benchmark load") {
    OccupancyGrid g = make_structured_map(64, 64);
    RangeMethodConfig cfg;
    cfg.theta_disc = 16;
    auto bl = make_method(MethodKind::bresenham, g, cfg);
    auto oracle = make_method(MethodKind::oracle, g, cfg);
    BenchReport rb = run_random_benchmark(*bl, g, cfg, 20000, 7);
    BenchReport ro = run_random_benchmark(*oracle, g, cfg, 20000, 7);
    // same seed, same query stream: total absolute deviation is bounded per query
    CHECK(std::abs(rb.checksum - ro.checksum) <= 1.5 * 20000.0);
}

TEST_CASE("harness overhead stays below 50 ns per query") {
    NullMethod null;
    OccupancyGrid g(8, 8);
    RangeMethodConfig cfg;
    cfg.theta_disc = 8;
    BenchReport r = run_random_benchmark(null, g, cfg, 200000, 1);
    CHECK(r.per_query.median < 50e-9);
    CHECK(r.checksum == 0.0);
}

TEST_CASE("batches are sized for at least a millisecond of work") {
    NullMethod null;
    OccupancyGrid g(8, 8);
    RangeMethodConfig cfg;
    cfg.theta_disc = 8;
    BenchReport r = run_random_benchmark(null, g, cfg, 300000, 1);
    // a null cast takes a few ns, so millisecond batches need many queries
    CHECK(r.batch_size >= 64);
    CHECK(r.batch_size <= 65536);
    CHECK(r.total_seconds > 0.0);
}

TEST_CASE("table report lists speedups against the bresenham row") {
    OccupancyGrid g = make_structured_map(32, 32);
    RangeMethodConfig cfg;
    cfg.theta_disc = 8;
    auto bl = make_method(MethodKind::bresenham, g, cfg);
    BenchReport r = run_random_benchmark(*bl, g, cfg, 2000, 3);
    std::ostringstream out;
    report_emit({r}, out, ReportFormat::table);
    // the bl row is its own baseline: speedup exactly 1
    CHECK(out.str().find("1.00") != std::string::npos);
    CHECK(out.str().find("bl") != std::string::npos);
}

TEST_CASE("csv report has a constant field count and a header") {
    OccupancyGrid g = make_structured_map(32, 32);
    RangeMethodConfig cfg;
    cfg.theta_disc = 8;
    std::vector<BenchReport> reports;
    for (MethodKind k : {MethodKind::bresenham, MethodKind::cddt, MethodKind::lut}) {
        auto m = make_method(k, g, cfg);
        reports.push_back(run_random_benchmark(*m, g, cfg, 2000, 9));
    }
    std::ostringstream out;
    report_emit(reports, out, ReportFormat::csv);
    std::istringstream in(out.str());
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line.rfind("method,", 0) == 0);
    const int fields = count_fields(line);
    int rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        CHECK(count_fields(line) == fields);
        rows++;
    }
    CHECK(rows == 3);
}

TEST_CASE("jsonl report parses back with matching fields") {
    OccupancyGrid g = make_structured_map(32, 32);
    RangeMethodConfig cfg;
    cfg.theta_disc = 8;
    auto cddt = make_method(MethodKind::cddt, g, cfg);
    auto bl = make_method(MethodKind::bresenham, g, cfg);
    BenchReport rc = run_random_benchmark(*cddt, g, cfg, 3000, 11);
    BenchReport rb = run_random_benchmark(*bl, g, cfg, 3000, 11);
    std::ostringstream out;
    report_emit({rb, rc}, out, ReportFormat::jsonl);
    std::istringstream in(out.str());
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto j = nlohmann::json::parse(line);  // throws on malformed output
        CHECK(j.at("map_id").get<std::string>() == rc.map_id);
        CHECK(j.at("queries").get<size_t>() == 3000);
        CHECK(j.at("histogram").size() == size_t(kHistogramBuckets));
        if (j.at("method") == "bl")
            CHECK(j.at("speedup_vs_bl").get<double>() == doctest::Approx(1.0));
        CHECK(j.at("median_ns").get<double>() > 0.0);
        rows++;
    }
    CHECK(rows == 2);
}

TEST_CASE("reports from different maps refuse to mix") {
    OccupancyGrid g1 = make_structured_map(32, 32);
    OccupancyGrid g2 = make_loop_map(48, 48);
    RangeMethodConfig cfg;
    cfg.theta_disc = 8;
    auto m1 = make_method(MethodKind::bresenham, g1, cfg);
    auto m2 = make_method(MethodKind::bresenham, g2, cfg);
    BenchReport r1 = run_random_benchmark(*m1, g1, cfg, 1000, 1);
    BenchReport r2 = run_random_benchmark(*m2, g2, cfg, 1000, 1);
    std::ostringstream out;
    CHECK_THROWS_AS(report_emit({r1, r2}, out, ReportFormat::table), std::invalid_argument);
}

TEST_CASE("histogram bucket edges cover nanoseconds to milliseconds") {
    CHECK(histogram_bucket_low(0) == doctest::Approx(1e-9));
    CHECK(histogram_bucket_low(8) == doctest::Approx(1e-8));
    CHECK(histogram_bucket_low(47) == doctest::Approx(std::pow(10.0, -9.0 + 47.0 / 8.0)));
}

TEST_CASE("grid benchmark covers the expected lattice distances") {
    // on the 4x4 fixture with stride 1 the direction-0 pass walks the rows of
    // the golden table; the oracle checksum over that pass is the table sum
    // shifted by the entry convention
    OccupancyGrid g = fig4_grid();
    RangeMethodConfig cfg;
    cfg.theta_disc = 4;
    auto cddt = make_method(MethodKind::cddt, g, cfg);
    BenchReport r = run_grid_benchmark(*cddt, g, cfg, 1);
    CHECK(r.queries == size_t(4 * 4 * 4));
    // direction 0 contributes the golden-table distances under the center
    // convention: rows (3,2,1,0) + (1,0,mr,mr) + (2,1,0,mr) + (3,2,1,0)
    double mr = cddt->max_range();
    double dir0 = (3 + 2 + 1 + 0) + (1 + 0 + mr + mr) + (2 + 1 + 0 + mr) + (3 + 2 + 1 + 0);
    CHECK(r.checksum >= dir0 - 1e-6);  // the other three directions only add
    CHECK(r.checksum <= 4 * 16 * mr + 1e-6);
}
