#include "rangelib/mcl.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rangelib {

double beam_likelihood(const BeamModelParams& p, double expected, double measured) {
  const double zm = p.z_max;
  if (!(zm > 0.0)) throw std::invalid_argument("beam model z_max must be positive");
  const double e = std::clamp(expected, 0.0, zm);
  const double m = std::clamp(measured, 0.0, zm);

  double hit = 0.0;
  if (p.w_hit > 0.0) {
    const double s = p.sigma_hit;
    const double inv_sqrt2 = 0.7071067811865476;
    // mass of the gaussian inside [0, z_max]
    double eta = 0.5 * (std::erf((zm - e) / s * inv_sqrt2) - std::erf((0.0 - e) / s * inv_sqrt2));
    if (eta > 1e-12) {
      double z = (m - e) / s;
      hit = std::exp(-0.5 * z * z) / (s * 2.5066282746310002) / eta;
    }
  }

  double shrt = 0.0;
  if (p.w_short > 0.0 && e > 0.0 && m <= e) {
    double denom = 1.0 - std::exp(-p.lambda_short * e);
    if (denom > 1e-12) shrt = p.lambda_short * std::exp(-p.lambda_short * m) / denom;
  }

  // unit-width band at the top of the range catches max-range returns
  double mx = (m >= zm - 1.0) ? 1.0 : 0.0;
  double rnd = 1.0 / zm;

  return p.w_hit * hit + p.w_short * shrt + p.w_max * mx + p.w_rand * rnd;
}

void motion_update(std::vector<Particle>& particles, double dx, double dy, double dtheta,
                   const MotionNoise& noise, std::mt19937_64& rng) {
  const double trans = std::hypot(dx, dy);
  const double st = noise.trans_per_trans * trans + noise.trans_per_rot * std::fabs(dtheta);
  const double sr = noise.rot_per_rot * std::fabs(dtheta) + noise.rot_per_trans * trans;
  std::normal_distribution<double> gt(0.0, std::max(st, 1e-12));
  std::normal_distribution<double> gr(0.0, std::max(sr, 1e-12));
  for (Particle& p : particles) {
    double rdx = dx + gt(rng), rdy = dy + gt(rng), rdt = dtheta + gr(rng);
    double c = std::cos(p.theta), s = std::sin(p.theta);
    p.x += rdx * c - rdy * s;
    p.y += rdx * s + rdy * c;
    p.theta = normalize_angle_2pi(p.theta + rdt);
  }
}

bool sensor_update(std::vector<Particle>& particles, const RangeMethod& method,
                   const std::vector<double>& scan, const ScanSpec& spec,
                   const BeamModelParams& beam) {
  if (int(scan.size()) != spec.beam_count)
    throw std::invalid_argument("scan length does not match beam count");
  if (particles.empty()) return true;

  const int K = method.direction_count();
  const bool paired = method.supports_paired_cast() && K > 0;
  const int nb = spec.beam_count;

  std::vector<double> expected(nb);
  std::vector<double> logw(particles.size());
  std::vector<int> pending(paired ? K : 0);
  std::vector<std::uint8_t> resolved(nb);

  double max_lw = -std::numeric_limits<double>::infinity();
  for (size_t pi = 0; pi < particles.size(); pi++) {
    const Particle& p = particles[pi];
    if (paired) {
      std::fill(pending.begin(), pending.end(), -1);
      std::fill(resolved.begin(), resolved.end(), 0);
      for (int b = 0; b < nb; b++) {
        int a = direction_index(p.theta + spec.beam_offset(b), K);
        int opp = (a + K / 2) % K;
        if (pending[opp] >= 0) {
          int j = pending[opp];
          pending[opp] = -1;
          auto pr = method.cast_pair(RayQuery(p.x, p.y, p.theta + spec.beam_offset(j)));
          expected[j] = pr.first;
          expected[b] = pr.second;
          resolved[j] = resolved[b] = 1;
        } else if (pending[a] < 0) {
          pending[a] = b;
        }
      }
      for (int b = 0; b < nb; b++)
        if (!resolved[b])
          expected[b] = method.cast(RayQuery(p.x, p.y, p.theta + spec.beam_offset(b)));
    } else {
      for (int b = 0; b < nb; b++)
        expected[b] = method.cast(RayQuery(p.x, p.y, p.theta + spec.beam_offset(b)));
    }

    double lw = 0.0;
    for (int b = 0; b < nb; b++) lw += std::log(beam_likelihood(beam, expected[b], scan[b]));
    logw[pi] = lw;
    if (lw > max_lw) max_lw = lw;
  }

  double sum = 0.0;
  for (size_t pi = 0; pi < particles.size(); pi++) {
    double w = std::exp(logw[pi] - max_lw);
    particles[pi].weight = w;
    sum += w;
  }
  if (!(sum > 0.0) || !std::isfinite(sum)) {
    for (Particle& p : particles) p.weight = 1.0 / double(particles.size());
    return false;
  }
  for (Particle& p : particles) p.weight /= sum;
  return true;
}

void resample_low_variance(std::vector<Particle>& particles, std::mt19937_64& rng) {
  const size_t n = particles.size();
  if (n == 0) return;
  std::uniform_real_distribution<double> u(0.0, 1.0 / double(n));
  const double r = u(rng);

  std::vector<Particle> out;
  out.reserve(n);
  double c = particles[0].weight;
  size_t i = 0;
  for (size_t m = 0; m < n; m++) {
    double target = r + double(m) / double(n);
    while (c < target && i + 1 < n) {
      i++;
      c += particles[i].weight;
    }
    out.push_back(particles[i]);
    out.back().weight = 1.0 / double(n);
  }
  particles = std::move(out);
}

std::vector<double> simulate_scan(const OccupancyGrid& grid, double x, double y, double theta,
                                  const ScanSpec& spec, double max_range, double noise_sigma,
                                  std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, std::max(noise_sigma, 1e-12));
  std::vector<double> scan(spec.beam_count);
  for (int b = 0; b < spec.beam_count; b++) {
    double d = oracle_cast(grid, RayQuery(x, y, theta + spec.beam_offset(b)), max_range);
    scan[b] = std::clamp(d + g(rng), 0.0, max_range);
  }
  return scan;
}

Mcl::Mcl(const RangeMethod& method, const MclConfig& cfg)
    : method_(method), cfg_(cfg), rng_(cfg.seed) {
  if (cfg_.particle_count <= 0)
    throw std::invalid_argument("particle filter needs at least one particle");
  if (!(cfg_.beam.z_max > 0.0)) cfg_.beam.z_max = method_.max_range();
  particles_.assign(size_t(cfg_.particle_count),
                    Particle{0.0, 0.0, 0.0, 1.0 / double(cfg_.particle_count)});
}

void Mcl::init_gaussian(double x, double y, double theta, double sigma_xy, double sigma_theta) {
  std::normal_distribution<double> gxy(0.0, std::max(sigma_xy, 1e-12));
  std::normal_distribution<double> gth(0.0, std::max(sigma_theta, 1e-12));
  for (Particle& p : particles_) {
    p.x = x + gxy(rng_);
    p.y = y + gxy(rng_);
    p.theta = normalize_angle_2pi(theta + gth(rng_));
    p.weight = 1.0 / double(particles_.size());
  }
}

PoseEstimate Mcl::estimate() const {
  double sx = 0.0, sy = 0.0, sc = 0.0, ss = 0.0, sw = 0.0;
  for (const Particle& p : particles_) {
    sx += p.weight * p.x;
    sy += p.weight * p.y;
    sc += p.weight * std::cos(p.theta);
    ss += p.weight * std::sin(p.theta);
    sw += p.weight;
  }
  if (!(sw > 0.0)) sw = 1.0;
  return {sx / sw, sy / sw, normalize_angle_2pi(std::atan2(ss, sc))};
}

MclStepResult Mcl::step(double odo_dx, double odo_dy, double odo_dtheta,
                        const std::vector<double>& scan) {
  auto t0 = std::chrono::steady_clock::now();
  motion_update(particles_, odo_dx, odo_dy, odo_dtheta, cfg_.motion, rng_);
  bool ok = sensor_update(particles_, method_, scan, cfg_.scan, cfg_.beam);
  MclStepResult res;
  res.estimate = estimate();
  resample_low_variance(particles_, rng_);
  auto t1 = std::chrono::steady_clock::now();
  res.seconds = std::chrono::duration<double>(t1 - t0).count();
  res.degenerate = !ok;
  return res;
}

}  // namespace rangelib
