#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rangelib/bench.hpp"
#include "rangelib/demo.hpp"
#include "rangelib/grid.hpp"
#include "rangelib/methods.hpp"
#include "rangelib/synthetic.hpp"

namespace {

struct MapArgs {
  std::string path;
  int threshold = 127;
  double resolution = 0.05;
};

void add_map_options(CLI::App* cmd, MapArgs* args) {
  cmd->add_option("--map", args->path, "occupancy map (PGM, dark pixels are obstacles)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--threshold", args->threshold, "grey level at or below which a pixel is occupied")
      ->check(CLI::Range(0, 255));
  cmd->add_option("--resolution", args->resolution, "meters per pixel metadata")
      ->check(CLI::PositiveNumber);
}

rangelib::OccupancyGrid load_map(const MapArgs& args) {
  rangelib::OccupancyGrid g = rangelib::load_pgm_file(args.path, args.threshold);
  g.set_resolution(args.resolution);
  return g;
}

const std::vector<std::string> kMethodNames = {"bl", "rm", "cddt", "pcddt", "lut", "oracle"};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"2D occupancy-grid ray casting: benchmarks, queries and a localization demo"};
  app.require_subcommand(1);

  // bench
  auto* bench = app.add_subcommand("bench", "time range queries for one or more methods");
  MapArgs bench_map;
  add_map_options(bench, &bench_map);
  std::vector<std::string> bench_methods = {"bl", "rm", "cddt", "pcddt", "lut"};
  bench->add_option("--method", bench_methods, "methods to run (repeatable or comma separated)")
      ->delimiter(',')
      ->check(CLI::IsMember(kMethodNames));
  std::string bench_mode = "random";
  bench->add_option("--mode", bench_mode, "query source")->check(CLI::IsMember({"grid", "random"}));
  size_t bench_queries = 1000000;
  bench->add_option("--queries", bench_queries, "random mode: number of queries");
  int bench_stride = 4;
  bench->add_option("--stride", bench_stride, "grid mode: cell stride")->check(CLI::PositiveNumber);
  int bench_theta = 216;
  bench->add_option("--theta-disc", bench_theta, "discrete directions over the full circle");
  double bench_range = 0.0;
  bench->add_option("--max-range", bench_range, "range clamp in px (0 = grid diagonal)");
  std::uint64_t bench_seed = 1;
  bench->add_option("--seed", bench_seed, "random mode: query stream seed");
  std::string bench_format = "table";
  bench->add_option("--format", bench_format, "output format")
      ->check(CLI::IsMember({"table", "csv", "jsonl"}));

  // cast
  auto* cast = app.add_subcommand("cast", "cast a single ray and print the distance");
  MapArgs cast_map;
  add_map_options(cast, &cast_map);
  std::string cast_method = "cddt";
  cast->add_option("--method", cast_method, "casting method")->check(CLI::IsMember(kMethodNames));
  double cast_x = 0, cast_y = 0, cast_theta = 0;
  cast->add_option("-x", cast_x, "query x in px")->required();
  cast->add_option("-y", cast_y, "query y in px")->required();
  cast->add_option("--theta", cast_theta, "query heading in radians")->required();
  int cast_theta_disc = 216;
  cast->add_option("--theta-disc", cast_theta_disc, "discrete directions over the full circle");
  double cast_range = 0.0;
  cast->add_option("--max-range", cast_range, "range clamp in px (0 = grid diagonal)");

  // info
  auto* info = app.add_subcommand("info", "report build time and memory for methods on a map");
  MapArgs info_map;
  add_map_options(info, &info_map);
  std::vector<std::string> info_methods = {"bl", "rm", "cddt", "pcddt", "lut"};
  info->add_option("--method", info_methods, "methods to build (repeatable or comma separated)")
      ->delimiter(',')
      ->check(CLI::IsMember(kMethodNames));
  int info_theta = 216;
  info->add_option("--theta-disc", info_theta, "discrete directions over the full circle");
  double info_range = 0.0;
  info->add_option("--max-range", info_range, "range clamp in px (0 = grid diagonal)");

  // mcl-demo
  auto* demo = app.add_subcommand("mcl-demo", "closed-loop Monte Carlo localization demo");
  MapArgs demo_map;
  add_map_options(demo, &demo_map);
  rangelib::DemoConfig dc;
  std::string demo_method = "cddt";
  demo->add_option("--method", demo_method, "range method backing the filter")
      ->check(CLI::IsMember(kMethodNames));
  demo->add_option("--particles", dc.particle_count, "particle count")->check(CLI::PositiveNumber);
  demo->add_option("--beams", dc.beam_count, "beams per scan")->check(CLI::PositiveNumber);
  demo->add_option("--fov-deg", dc.fov_deg, "scan field of view in degrees");
  demo->add_option("--theta-disc", dc.theta_disc, "discrete directions over the full circle");
  demo->add_option("--steps", dc.steps, "trajectory steps")->check(CLI::PositiveNumber);
  demo->add_option("--seed", dc.seed, "scenario seed");
  std::string demo_out;
  demo->add_option("--out", demo_out, "write per-step CSV here");

  // make-map
  auto* mkmap = app.add_subcommand("make-map", "generate a synthetic PGM map");
  std::string mk_kind = "structured";
  mkmap->add_option("--kind", mk_kind, "map family")
      ->check(CLI::IsMember({"structured", "loop", "random"}));
  int mk_w = 256, mk_h = 256;
  mkmap->add_option("--width", mk_w)->check(CLI::PositiveNumber);
  mkmap->add_option("--height", mk_h)->check(CLI::PositiveNumber);
  double mk_density = 0.05;
  mkmap->add_option("--density", mk_density, "random kind: occupancy probability")
      ->check(CLI::Range(0.0, 1.0));
  std::uint64_t mk_seed = 1;
  mkmap->add_option("--seed", mk_seed, "random kind: generator seed");
  std::string mk_out;
  mkmap->add_option("--out", mk_out, "output PGM path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    using namespace rangelib;
    if (bench->parsed()) {
      OccupancyGrid map = load_map(bench_map);
      RangeMethodConfig cfg;
      cfg.theta_disc = bench_theta;
      cfg.max_range = bench_range;
      std::vector<BenchReport> reports;
      for (const std::string& name : bench_methods) {
        auto m = make_method(method_kind_from_name(name), map, cfg);
        reports.push_back(bench_mode == "grid"
                              ? run_grid_benchmark(*m, map, cfg, bench_stride)
                              : run_random_benchmark(*m, map, cfg, bench_queries, bench_seed));
      }
      ReportFormat fmt = bench_format == "csv"     ? ReportFormat::csv
                         : bench_format == "jsonl" ? ReportFormat::jsonl
                                                   : ReportFormat::table;
      report_emit(reports, std::cout, fmt);
    } else if (cast->parsed()) {
      OccupancyGrid map = load_map(cast_map);
      RangeMethodConfig cfg;
      cfg.theta_disc = cast_theta_disc;
      cfg.max_range = cast_range;
      auto m = make_method(method_kind_from_name(cast_method), map, cfg);
      std::printf("%.6f\n", m->cast(RayQuery(cast_x, cast_y, cast_theta)));
    } else if (info->parsed()) {
      OccupancyGrid map = load_map(info_map);
      RangeMethodConfig cfg;
      cfg.theta_disc = info_theta;
      cfg.max_range = info_range;
      for (const std::string& name : info_methods) {
        auto m = make_method(method_kind_from_name(name), map, cfg);
        std::printf("method=%s init_seconds=%.6f memory_bytes=%zu directions=%d max_range=%.3f\n",
                    m->name(), m->init_seconds(), m->memory_bytes(), m->direction_count(),
                    m->max_range());
      }
    } else if (demo->parsed()) {
      OccupancyGrid map = load_map(demo_map);
      dc.method = method_kind_from_name(demo_method);
      DemoResult r = run_loop_demo(map, dc);
      if (!demo_out.empty()) write_demo_csv(r, demo_out);
      std::printf(
          "method=%s steps=%zu median_error_px=%.3f resets=%d resets_total=%d "
          "mean_step_ms=%.3f particles_at_40hz=%.0f\n",
          r.method.c_str(), r.rows.size(), r.median_error, r.resets, r.resets_total,
          r.mean_step_seconds * 1e3, r.particles_at_40hz);
    } else if (mkmap->parsed()) {
      OccupancyGrid g = mk_kind == "structured" ? make_structured_map(mk_w, mk_h)
                        : mk_kind == "loop"     ? make_loop_map(mk_w, mk_h)
                                                : make_random_map(mk_w, mk_h, mk_density, mk_seed);
      save_pgm_file(g, mk_out);
      std::printf("wrote %s (%dx%d, %zu occupied)\n", mk_out.c_str(), g.width(), g.height(),
                  g.occupied_count());
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
