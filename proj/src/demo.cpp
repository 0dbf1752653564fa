#include "rangelib/demo.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace rangelib {

namespace {

struct Pose {
  double x, y, theta;
};

Pose loop_pose(const OccupancyGrid& map, int step, double step_px) {
  const double cx = map.width() / 2.0, cy = map.height() / 2.0;
  const double radius = 0.32 * std::min(map.width(), map.height());
  const double dphi = step_px / radius;
  const double phi = double(step) * dphi;
  // heading tangent to the circle, counter-clockwise travel
  return {cx + radius * std::cos(phi), cy + radius * std::sin(phi),
          normalize_angle_2pi(phi + kTwoPi / 4.0)};
}

// World-frame pose delta expressed in the FROM pose's robot frame.
void relative_motion(const Pose& from, const Pose& to, double* dx, double* dy, double* dtheta) {
  double wx = to.x - from.x, wy = to.y - from.y;
  double c = std::cos(from.theta), s = std::sin(from.theta);
  *dx = wx * c + wy * s;
  *dy = -wx * s + wy * c;
  *dtheta = normalize_angle_pi(to.theta - from.theta);
}

}  // namespace

DemoResult run_loop_demo(const OccupancyGrid& map, const DemoConfig& cfg) {
  if (cfg.steps < 1) throw std::invalid_argument("demo needs at least one step");

  RangeMethodConfig mc;
  mc.theta_disc = cfg.theta_disc;
  std::unique_ptr<RangeMethod> method = make_method(cfg.method, map, mc);

  const double step_px = 1.5;

  MclConfig fc;
  fc.particle_count = cfg.particle_count;
  fc.scan.beam_count = cfg.beam_count;
  fc.scan.fov = cfg.fov_deg * kTwoPi / 360.0;
  // The filter is told how bad its inputs are: motion dispersion slightly
  // above the simulated odometry corruption keeps the cloud wide enough to
  // absorb it, and the beam model matches the simulated scan noise.
  fc.motion.trans_per_trans = (1.25 * cfg.odo_sigma_trans + 0.05) / step_px;
  fc.motion.rot_per_trans = (1.25 * cfg.odo_sigma_rot + 0.002) / step_px;
  fc.beam.sigma_hit = std::max(cfg.scan_sigma, 1.0);
  fc.seed = cfg.seed;
  Mcl filter(*method, fc);

  std::mt19937_64 world_rng(cfg.seed ^ 0x9e3779b97f4a7c15ull);
  std::normal_distribution<double> odo_t(0.0, std::max(cfg.odo_sigma_trans, 1e-12));
  std::normal_distribution<double> odo_r(0.0, std::max(cfg.odo_sigma_rot, 1e-12));
  Pose truth = loop_pose(map, 0, step_px);
  filter.init_gaussian(truth.x, truth.y, truth.theta, 2.0, 0.1);

  DemoResult result;
  result.method = method_name(cfg.method);
  result.rows.reserve(cfg.steps);

  double total_seconds = 0.0;
  for (int step = 1; step <= cfg.steps; step++) {
    Pose next = loop_pose(map, step, step_px);
    double dx, dy, dtheta;
    relative_motion(truth, next, &dx, &dy, &dtheta);
    truth = next;

    double odo_dx = dx + odo_t(world_rng);
    double odo_dy = dy + odo_t(world_rng);
    double odo_dtheta = dtheta + odo_r(world_rng);

    std::vector<double> scan = simulate_scan(map, truth.x, truth.y, truth.theta, fc.scan,
                                             method->max_range(), cfg.scan_sigma, world_rng);

    MclStepResult sr = filter.step(odo_dx, odo_dy, odo_dtheta, scan);
    total_seconds += sr.seconds;

    DemoRow row;
    row.step = step;
    row.true_x = truth.x;
    row.true_y = truth.y;
    row.true_theta = truth.theta;
    row.est_x = sr.estimate.x;
    row.est_y = sr.estimate.y;
    row.est_theta = sr.estimate.theta;
    row.error = std::hypot(sr.estimate.x - truth.x, sr.estimate.y - truth.y);
    row.seconds = sr.seconds;
    row.degenerate = sr.degenerate;

    if (row.error > cfg.reset_threshold) {
      filter.init_gaussian(truth.x, truth.y, truth.theta, 2.0, 0.1);
      row.reset = true;
      result.resets_total++;
      if (step > 10) result.resets++;
    }
    result.rows.push_back(row);
  }

  std::vector<double> errs;
  for (const DemoRow& r : result.rows)
    if (r.step > 10) errs.push_back(r.error);
  if (!errs.empty()) {
    std::sort(errs.begin(), errs.end());
    result.median_error = errs[errs.size() / 2];
  }
  result.mean_step_seconds = total_seconds / double(cfg.steps);
  result.particles_at_40hz =
      double(cfg.particle_count) * (0.025 / std::max(result.mean_step_seconds, 1e-12));
  return result;
}

void write_demo_csv(const DemoResult& result, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << "step,true_x,true_y,true_theta,est_x,est_y,est_theta,error_px,step_seconds,reset,"
       "degenerate\n";
  for (const DemoRow& r : result.rows)
    f << r.step << ',' << r.true_x << ',' << r.true_y << ',' << r.true_theta << ',' << r.est_x
      << ',' << r.est_y << ',' << r.est_theta << ',' << r.error << ',' << r.seconds << ','
      << int(r.reset) << ',' << int(r.degenerate) << "\n";
  if (!f) throw std::runtime_error("short write to " + path);
}

}  // namespace rangelib
