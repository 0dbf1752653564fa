#include "rangelib/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include <ctime>
#include <sys/resource.h>

#include "rangelib/rng.hpp"

namespace rangelib {

double histogram_bucket_low(int i) { return std::pow(10.0, -9.0 + double(i) / 8.0); }

std::string map_content_id(const OccupancyGrid& grid) {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a 64
  auto mix = [&](std::uint8_t b) {
    h ^= b;
    h *= 1099511628211ull;
  };
  for (int shift = 0; shift < 32; shift += 8) mix(std::uint8_t(std::uint32_t(grid.width()) >> shift));
  for (int shift = 0; shift < 32; shift += 8) mix(std::uint8_t(std::uint32_t(grid.height()) >> shift));
  for (std::uint8_t c : grid.raw()) mix(c ? 1 : 0);
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

namespace {

struct BatchRecord {
  size_t n;
  double seconds;
};

long involuntary_switches() {
  rusage ru{};
  getrusage(RUSAGE_SELF, &ru);
  return ru.ru_nivcsw;
}

// Thread cpu time: unlike the wall clock it does not advance while the
// scheduler or the hypervisor has taken the core away, so batch times
// measure query cost rather than machine load.
double thread_cpu_seconds() {
  timespec ts{};
  clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
  return double(ts.tv_sec) + 1e-9 * double(ts.tv_nsec);
}

// Weighted percentile over per-batch means: smallest value whose cumulative
// weight reaches the requested fraction.
double weighted_percentile(std::vector<std::pair<double, size_t>>& sorted_by_value, double frac,
                           size_t total) {
  double need = frac * double(total);
  double cum = 0.0;
  for (const auto& [v, n] : sorted_by_value) {
    cum += double(n);
    if (cum >= need) return v;
  }
  return sorted_by_value.back().first;
}

template <class Gen>
void run_batches(const RangeMethod& method, size_t total, Gen&& gen, BenchReport& rep) {
  std::vector<BatchRecord> records;
  std::vector<RayQuery> buf;
  size_t done = 0;
  size_t batch = std::min<size_t>(total, 4096);
  bool calibrated = false;
  double checksum = 0.0, total_seconds = 0.0;

  volatile double warm_sink = 0.0;

  while (done < total) {
    size_t n = std::min(batch, total - done);
    buf.clear();
    buf.reserve(n);
    for (size_t i = 0; i < n; i++) buf.push_back(gen(done + i));

    if (done == 0) {
      // dry run of the first batch: cold caches would otherwise show up as a
      // slow outlier batch in the tail statistics
      double warm = 0.0;
      for (const RayQuery& q : buf) warm += method.cast(q);
      warm_sink = warm_sink + warm;
    }

    // A batch that loses the cpu mid-measurement reports cache pollution from
    // whatever ran in between, not query cost. Casting is pure, so a
    // preempted batch (detected through the involuntary context switch
    // counter) is simply timed again.
    double sec = 0.0, local = 0.0;
    for (int attempt = 0; attempt < 4; attempt++) {
      long pre = involuntary_switches();
      double t0 = thread_cpu_seconds();
      local = 0.0;
      for (const RayQuery& q : buf) local += method.cast(q);
      double t1 = thread_cpu_seconds();
      sec = t1 - t0;
      if (involuntary_switches() == pre) break;
    }
    checksum += local;
    total_seconds += sec;
    records.push_back({n, sec});
    done += n;

    if (!calibrated) {
      // size batches so each spans at least ~1 ms of wall time
      calibrated = true;
      double per = sec / double(n);
      double want = 0.001 / std::max(per, 1e-12);
      batch = size_t(std::clamp(want, 64.0, 65536.0));
    }
  }

  rep.queries = total;
  rep.batch_size = batch;
  rep.total_seconds = total_seconds;
  rep.checksum = checksum;
  rep.init_seconds = method.init_seconds();
  rep.memory_bytes = method.memory_bytes();

  std::vector<std::pair<double, size_t>> by_value;
  by_value.reserve(records.size());
  for (const auto& r : records) by_value.emplace_back(r.seconds / double(r.n), r.n);
  std::sort(by_value.begin(), by_value.end());

  rep.per_query.mean = total_seconds / double(total);
  rep.per_query.median = weighted_percentile(by_value, 0.50, total);
  rep.per_query.p25 = weighted_percentile(by_value, 0.25, total);
  rep.per_query.p75 = weighted_percentile(by_value, 0.75, total);
  rep.per_query.p99 = weighted_percentile(by_value, 0.99, total);
  rep.per_query.min = by_value.front().first;
  rep.per_query.max = by_value.back().first;

  rep.histogram.assign(kHistogramBuckets, 0.0);
  for (const auto& [v, n] : by_value) {
    int idx = int(std::floor((std::log10(std::max(v, 1e-300)) + 9.0) * 8.0));
    idx = std::clamp(idx, 0, kHistogramBuckets - 1);
    rep.histogram[idx] += double(n);
  }
}

}  // namespace

BenchReport run_grid_benchmark(const RangeMethod& method, const OccupancyGrid& map,
                               const RangeMethodConfig& cfg, int stride) {
  cfg.validate();
  if (stride < 1) throw std::invalid_argument("stride must be >= 1");
  if (stride > std::max(map.width(), map.height()))
    throw std::invalid_argument("stride exceeds the map size");
  const int K = cfg.theta_disc;
  const size_t nx = size_t((map.width() + stride - 1) / stride);
  const size_t ny = size_t((map.height() + stride - 1) / stride);
  const size_t total = size_t(K) * nx * ny;
  if (total == 0) throw std::invalid_argument("grid benchmark has no samples");

  BenchReport rep;
  rep.method = method.name();
  rep.mode = "grid";
  rep.map_id = map_content_id(map);
  rep.map_width = map.width();
  rep.map_height = map.height();
  rep.theta_disc = K;

  auto gen = [&](size_t i) {
    size_t ti = i / (nx * ny);
    size_t r = i % (nx * ny);
    size_t yi = r / nx, xi = r % nx;
    double x = double(xi) * stride + 0.5;
    double y = double(yi) * stride + 0.5;
    double theta = double(ti) * kTwoPi / double(K);
    return RayQuery(x, y, theta);
  };
  run_batches(method, total, gen, rep);
  return rep;
}

BenchReport run_random_benchmark(const RangeMethod& method, const OccupancyGrid& map,
                                 const RangeMethodConfig& cfg, size_t n, std::uint64_t seed) {
  cfg.validate();
  if (n == 0) throw std::invalid_argument("random benchmark needs at least one query");

  BenchReport rep;
  rep.method = method.name();
  rep.mode = "random";
  rep.map_id = map_content_id(map);
  rep.map_width = map.width();
  rep.map_height = map.height();
  rep.theta_disc = cfg.theta_disc;
  rep.seed = seed;

  SplitMix64 rng(seed);
  auto gen = [&](size_t) {
    double x = rng.uniform() * map.width();
    double y = rng.uniform() * map.height();
    double theta = rng.uniform() * kTwoPi;
    return RayQuery(x, y, theta);
  };
  run_batches(method, n, gen, rep);
  return rep;
}

namespace {

const BenchReport* find_bl(const std::vector<BenchReport>& reports) {
  for (const auto& r : reports)
    if (r.method == "bl") return &r;
  return nullptr;
}

void check_same_map(const std::vector<BenchReport>& reports) {
  for (const auto& r : reports)
    if (r.map_id != reports.front().map_id)
      throw std::invalid_argument("reports mix different maps; emit them separately");
}

std::string join_histogram(const std::vector<double>& h) {
  std::ostringstream os;
  for (size_t i = 0; i < h.size(); i++) {
    if (i) os << '|';
    os << (long long)(std::llround(h[i]));
  }
  return os.str();
}

void emit_table(const std::vector<BenchReport>& reports, std::ostream& os) {
  const BenchReport* bl = find_bl(reports);
  os << std::left << std::setw(8) << "method" << std::right << std::setw(10) << "queries"
     << std::setw(12) << "mean(ns)" << std::setw(12) << "median(ns)" << std::setw(12) << "p99(ns)"
     << std::setw(12) << "init(s)" << std::setw(12) << "mem(MB)" << std::setw(10) << "speedup"
     << std::setw(16) << "checksum" << "\n";
  for (const auto& r : reports) {
    os << std::left << std::setw(8) << r.method << std::right << std::setw(10) << r.queries
       << std::fixed << std::setprecision(1) << std::setw(12) << r.per_query.mean * 1e9
       << std::setw(12) << r.per_query.median * 1e9 << std::setw(12) << r.per_query.p99 * 1e9
       << std::setprecision(4) << std::setw(12) << r.init_seconds << std::setprecision(2)
       << std::setw(12) << double(r.memory_bytes) / (1024.0 * 1024.0);
    if (bl)
      os << std::setw(10) << std::setprecision(2) << bl->per_query.mean / r.per_query.mean;
    else
      os << std::setw(10) << "-";
    os << std::setw(16) << std::setprecision(1) << r.checksum << "\n";
    os.unsetf(std::ios::fixed);
  }
}

void emit_csv(const std::vector<BenchReport>& reports, std::ostream& os) {
  const BenchReport* bl = find_bl(reports);
  os << "method,mode,map_id,map_width,map_height,theta_disc,seed,queries,batch_size,"
        "total_seconds,checksum,mean_ns,median_ns,p25_ns,p75_ns,p99_ns,min_ns,max_ns,"
        "init_seconds,memory_bytes,speedup_vs_bl,histogram\n";
  for (const auto& r : reports) {
    os << r.method << ',' << r.mode << ',' << r.map_id << ',' << r.map_width << ','
       << r.map_height << ',' << r.theta_disc << ',' << r.seed << ',' << r.queries << ','
       << r.batch_size << ',' << std::setprecision(17) << r.total_seconds << ',' << r.checksum
       << ',' << r.per_query.mean * 1e9 << ',' << r.per_query.median * 1e9 << ','
       << r.per_query.p25 * 1e9 << ',' << r.per_query.p75 * 1e9 << ',' << r.per_query.p99 * 1e9
       << ',' << r.per_query.min * 1e9 << ',' << r.per_query.max * 1e9 << ',' << r.init_seconds
       << ',' << r.memory_bytes << ',';
    if (bl) os << bl->per_query.mean / r.per_query.mean;
    os << ',' << join_histogram(r.histogram) << "\n";
  }
}

void emit_jsonl(const std::vector<BenchReport>& reports, std::ostream& os) {
  const BenchReport* bl = find_bl(reports);
  for (const auto& r : reports) {
    nlohmann::json j;
    j["method"] = r.method;
    j["mode"] = r.mode;
    j["map_id"] = r.map_id;
    j["map_width"] = r.map_width;
    j["map_height"] = r.map_height;
    j["theta_disc"] = r.theta_disc;
    j["seed"] = r.seed;
    j["queries"] = r.queries;
    j["batch_size"] = r.batch_size;
    j["total_seconds"] = r.total_seconds;
    j["checksum"] = r.checksum;
    j["mean_ns"] = r.per_query.mean * 1e9;
    j["median_ns"] = r.per_query.median * 1e9;
    j["p25_ns"] = r.per_query.p25 * 1e9;
    j["p75_ns"] = r.per_query.p75 * 1e9;
    j["p99_ns"] = r.per_query.p99 * 1e9;
    j["min_ns"] = r.per_query.min * 1e9;
    j["max_ns"] = r.per_query.max * 1e9;
    j["init_seconds"] = r.init_seconds;
    j["memory_bytes"] = r.memory_bytes;
    if (bl)
      j["speedup_vs_bl"] = bl->per_query.mean / r.per_query.mean;
    else
      j["speedup_vs_bl"] = nullptr;
    j["histogram"] = r.histogram;
    os << j.dump() << "\n";
  }
}

}  // namespace

void report_emit(const std::vector<BenchReport>& reports, std::ostream& os, ReportFormat format) {
  if (reports.empty()) return;
  check_same_map(reports);
  switch (format) {
    case ReportFormat::table: emit_table(reports, os); break;
    case ReportFormat::csv: emit_csv(reports, os); break;
    case ReportFormat::jsonl: emit_jsonl(reports, os); break;
  }
}

}  // namespace rangelib
