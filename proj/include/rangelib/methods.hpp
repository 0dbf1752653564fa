#pragma once

#include <memory>
#include <string>
#include <utility>

#include "rangelib/cddt.hpp"
#include "rangelib/grid.hpp"
#include "rangelib/raycast.hpp"

namespace rangelib {

enum class MethodKind { oracle, bresenham, ray_march, cddt, pcddt, lut };

// CLI spellings: oracle, bl, rm, cddt, pcddt, lut. Anything else throws
// std::invalid_argument.
MethodKind method_kind_from_name(const std::string& name);
const char* method_name(MethodKind kind);

// A range method owns whatever it precomputed from the map and answers
// distance queries from continuous poses.
class RangeMethod {
 public:
  virtual ~RangeMethod() = default;

  virtual const char* name() const = 0;
  virtual double cast(const RayQuery& q) const = 0;

  // (range at theta, range at theta + pi). Methods with shared per-direction
  // state override this; the default is two independent casts.
  virtual std::pair<double, double> cast_pair(const RayQuery& q) const {
    return {cast(q), cast(RayQuery(q.x, q.y, q.theta + kTwoPi / 2.0))};
  }
  virtual bool supports_paired_cast() const { return false; }

  // Number of discrete directions served, 0 for continuous-angle methods.
  virtual int direction_count() const { return 0; }

  // Bytes attributable to the precomputed query structure, by the accounting
  // rules documented in the README. Deterministic for a fixed map and config.
  virtual size_t memory_bytes() const = 0;

  double max_range() const { return max_range_; }
  double init_seconds() const { return init_seconds_; }
  void set_init_seconds(double s) { init_seconds_ = s; }

 protected:
  double max_range_ = 0.0;
  double init_seconds_ = 0.0;
};

// Constructs the method and records wall-clock build time in init_seconds().
std::unique_ptr<RangeMethod> make_method(MethodKind kind, const OccupancyGrid& grid,
                                         const RangeMethodConfig& cfg = {});

// Always returns zero without touching any map: measures harness overhead.
class NullMethod final : public RangeMethod {
 public:
  explicit NullMethod(double max_range = 1.0) { max_range_ = max_range; }
  const char* name() const override { return "null"; }
  double cast(const RayQuery&) const override { return 0.0; }
  size_t memory_bytes() const override { return 0; }
};

}  // namespace rangelib
