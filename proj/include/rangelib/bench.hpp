#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rangelib/methods.hpp"

namespace rangelib {

// Per-query time statistics in seconds, from the thread cpu clock (immune to
// scheduler and hypervisor interference). Queries are timed in batches; every
// statistic except mean is computed over per-batch means weighted by batch
// size, which keeps clock overhead out of individual samples.
struct BenchStats {
  double mean = 0.0;
  double median = 0.0;
  double p25 = 0.0;
  double p75 = 0.0;
  double p99 = 0.0;
  double min = 0.0;
  double max = 0.0;
};

struct BenchReport {
  std::string method;
  std::string mode;    // "grid" or "random"
  std::string map_id;  // content hash; reports from different maps never mix
  int map_width = 0;
  int map_height = 0;
  int theta_disc = 0;
  std::uint64_t seed = 0;  // random mode only

  size_t queries = 0;
  size_t batch_size = 0;
  double total_seconds = 0.0;
  double checksum = 0.0;  // sum of returned distances, an output invariant
  BenchStats per_query;

  // 48 logarithmic buckets over [1e-9, 1e-3) s, 8 per decade, of per-batch
  // mean query times; counts are batch sizes and sum to queries.
  std::vector<double> histogram;

  double init_seconds = 0.0;
  size_t memory_bytes = 0;
};

constexpr int kHistogramBuckets = 48;
double histogram_bucket_low(int i);  // lower edge of bucket i, seconds

// Stable content hash of dimensions plus occupancy (hex string).
std::string map_content_id(const OccupancyGrid& grid);

// Casts from every stride-th cell center at each of the theta_disc lattice
// directions, direction-major (all cells at direction 0 first). Throws
// std::invalid_argument when the sample set is empty.
BenchReport run_grid_benchmark(const RangeMethod& method, const OccupancyGrid& map,
                               const RangeMethodConfig& cfg, int stride = 4);

// Casts n queries drawn uniformly over the map rectangle and [0, 2pi).
// The sequence is fully determined by the seed.
BenchReport run_random_benchmark(const RangeMethod& method, const OccupancyGrid& map,
                                 const RangeMethodConfig& cfg, size_t n, std::uint64_t seed);

enum class ReportFormat { table, csv, jsonl };

// Renders reports to the stream. All reports must come from the same map
// (same map_id); speedup columns are relative to the "bl" entry when one is
// present. CSV emits a fixed column set with the histogram joined by '|';
// jsonl emits one JSON object per report.
void report_emit(const std::vector<BenchReport>& reports, std::ostream& os, ReportFormat format);

}  // namespace rangelib
