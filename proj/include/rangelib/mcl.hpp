#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "rangelib/methods.hpp"

namespace rangelib {

struct Particle {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
  double weight = 0.0;
};

// Dispersion of the odometry motion model, in pixels and radians:
//   sigma_trans = trans_per_trans * |trans| + trans_per_rot * |rot|
//   sigma_rot   = rot_per_rot * |rot| + rot_per_trans * |trans|
// Noise is drawn in the robot frame and rotated by each particle's heading.
struct MotionNoise {
  double trans_per_trans = 0.12;
  double trans_per_rot = 1.0;
  double rot_per_rot = 0.25;
  double rot_per_trans = 0.008;
};

// Four-component beam measurement model. Each component is a normalized
// density on [0, z_max], so the mixture is a proper density whenever the
// weights sum to one. z_max must be set to the casting method's max range.
struct BeamModelParams {
  double w_hit = 0.75;
  double w_short = 0.10;
  double w_max = 0.05;
  double w_rand = 0.10;
  double sigma_hit = 2.0;     // px
  double lambda_short = 0.05; // 1/px
  double z_max = 0.0;         // px
};

struct ScanSpec {
  int beam_count = 61;
  double fov = 4.71238898038469;  // radians, symmetric about the heading

  // Bearing of beam i relative to the robot heading.
  double beam_offset(int i) const {
    if (beam_count <= 1) return 0.0;
    return -fov / 2.0 + fov * double(i) / double(beam_count - 1);
  }
};

// Mixture density of one measured range given the expected range.
// Strictly positive for measured in [0, z_max]; inputs outside the interval
// are clamped onto it.
double beam_likelihood(const BeamModelParams& p, double expected, double measured);

// Propagate particles by a robot-frame odometry increment plus sampled noise.
void motion_update(std::vector<Particle>& particles, double dx, double dy, double dtheta,
                   const MotionNoise& noise, std::mt19937_64& rng);

// Reweight particles against a measured scan. Log-likelihoods are accumulated
// and renormalized against their maximum before exponentiation. When the
// method serves paired casts, beams whose discrete directions are exact
// opposites share one paired query; answers are identical to unpaired casts.
// Returns false when every particle's likelihood underflowed (weights were
// reset to uniform).
bool sensor_update(std::vector<Particle>& particles, const RangeMethod& method,
                   const std::vector<double>& scan, const ScanSpec& spec,
                   const BeamModelParams& beam);

// Systematic (low variance) resampling: one uniform draw, n evenly spaced
// comb positions. Every particle is selected floor(n*w) or ceil(n*w) times.
// Weights are reset to 1/n.
void resample_low_variance(std::vector<Particle>& particles, std::mt19937_64& rng);

// Ground-truth scan: oracle ranges from the pose plus Gaussian noise, clamped
// to [0, max_range].
std::vector<double> simulate_scan(const OccupancyGrid& grid, double x, double y, double theta,
                                  const ScanSpec& spec, double max_range, double noise_sigma,
                                  std::mt19937_64& rng);

struct PoseEstimate {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
};

struct MclStepResult {
  PoseEstimate estimate;
  double seconds = 0.0;    // wall time of the whole step
  bool degenerate = false; // sensor update underflowed, weights were reset
};

struct MclConfig {
  int particle_count = 1000;
  ScanSpec scan;
  MotionNoise motion;
  BeamModelParams beam;  // z_max of 0 is replaced by the method's max range
  std::uint64_t seed = 1;
};

// Particle filter driving motion, sensor, estimate and resampling. The method
// reference must outlive the filter.
class Mcl {
 public:
  Mcl(const RangeMethod& method, const MclConfig& cfg);

  // Gaussian cloud around a pose.
  void init_gaussian(double x, double y, double theta, double sigma_xy, double sigma_theta);

  // motion -> sensor -> estimate -> resample
  MclStepResult step(double odo_dx, double odo_dy, double odo_dtheta,
                     const std::vector<double>& scan);

  PoseEstimate estimate() const;  // weighted mean, circular mean for theta
  const std::vector<Particle>& particles() const { return particles_; }
  std::mt19937_64& rng() { return rng_; }

 private:
  const RangeMethod& method_;
  MclConfig cfg_;
  std::vector<Particle> particles_;
  std::mt19937_64 rng_;
};

}  // namespace rangelib
