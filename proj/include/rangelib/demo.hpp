#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rangelib/mcl.hpp"
#include "rangelib/synthetic.hpp"

namespace rangelib {

// Closed-loop localization scenario: a simulated robot drives a circle of
// radius 0.32*min(w, h) around the map center, heading tangent to the circle,
// advancing ~1.5 px per step. The filter sees noisy odometry and noisy scans
// simulated from the true pose; when the estimate drifts beyond
// reset_threshold the filter is re-seeded at the truth and the event counted.
struct DemoConfig {
  MethodKind method = MethodKind::cddt;
  int particle_count = 1000;
  int beam_count = 61;
  double fov_deg = 270.0;
  int theta_disc = 216;
  int steps = 200;
  std::uint64_t seed = 1;

  // Simulated sensor and odometry corruption. The defaults put the filter in
  // a regime where it has to work for its estimate: dead reckoning alone
  // drifts tens of pixels over a run, and scans carry visible noise.
  double scan_sigma = 6.0;       // px, measurement noise on simulated scans
  double odo_sigma_trans = 1.5;  // px per step, odometry corruption
  double odo_sigma_rot = 0.04;   // rad per step
  double reset_threshold = 20.0; // px
};

struct DemoRow {
  int step = 0;
  double true_x = 0, true_y = 0, true_theta = 0;
  double est_x = 0, est_y = 0, est_theta = 0;
  double error = 0;       // px, position error of the estimate
  double seconds = 0;     // filter step wall time
  bool reset = false;     // filter was re-seeded after this step
  bool degenerate = false;
};

struct DemoResult {
  std::string method;
  std::vector<DemoRow> rows;
  double median_error = 0.0;       // over steps after the first 10
  int resets = 0;                  // after the first 10 steps
  int resets_total = 0;            // over the whole run
  double mean_step_seconds = 0.0;
  double particles_at_40hz = 0.0;  // particle budget at a 25 ms step
};

DemoResult run_loop_demo(const OccupancyGrid& map, const DemoConfig& cfg);

// Writes one CSV row per step (plus a header) to path.
void write_demo_csv(const DemoResult& result, const std::string& path);

}  // namespace rangelib
