#include "rangelib/methods.hpp"

#include <chrono>
#include <stdexcept>

namespace rangelib {

MethodKind method_kind_from_name(const std::string& name) {
  if (name == "oracle") return MethodKind::oracle;
  if (name == "bl") return MethodKind::bresenham;
  if (name == "rm") return MethodKind::ray_march;
  if (name == "cddt") return MethodKind::cddt;
  if (name == "pcddt") return MethodKind::pcddt;
  if (name == "lut") return MethodKind::lut;
  throw std::invalid_argument("unknown method '" + name + "' (expected bl, rm, cddt, pcddt, lut or oracle)");
}

const char* method_name(MethodKind kind) {
  switch (kind) {
    case MethodKind::oracle: return "oracle";
    case MethodKind::bresenham: return "bl";
    case MethodKind::ray_march: return "rm";
    case MethodKind::cddt: return "cddt";
    case MethodKind::pcddt: return "pcddt";
    case MethodKind::lut: return "lut";
  }
  return "?";
}

namespace {

class OracleMethod final : public RangeMethod {
 public:
  OracleMethod(const OccupancyGrid& grid, const RangeMethodConfig& cfg) : grid_(grid) {
    cfg.validate();
    max_range_ = cfg.resolved_max_range(grid_);
  }
  const char* name() const override { return "oracle"; }
  double cast(const RayQuery& q) const override { return oracle_cast(grid_, q, max_range_); }
  size_t memory_bytes() const override { return size_t(grid_.width()) * grid_.height(); }

 private:
  OccupancyGrid grid_;
};

class BresenhamMethod final : public RangeMethod {
 public:
  BresenhamMethod(const OccupancyGrid& grid, const RangeMethodConfig& cfg) : grid_(grid) {
    cfg.validate();
    max_range_ = cfg.resolved_max_range(grid_);
  }
  const char* name() const override { return "bl"; }
  double cast(const RayQuery& q) const override { return bresenham_cast(grid_, q, max_range_); }
  size_t memory_bytes() const override { return size_t(grid_.width()) * grid_.height(); }

 private:
  OccupancyGrid grid_;
};

class RayMarchMethod final : public RangeMethod {
 public:
  RayMarchMethod(const OccupancyGrid& grid, const RangeMethodConfig& cfg)
      : grid_(grid), df_(distance_transform(grid_)) {
    cfg.validate();
    max_range_ = cfg.resolved_max_range(grid_);
  }
  const char* name() const override { return "rm"; }
  double cast(const RayQuery& q) const override {
    return ray_march_cast(grid_, df_, q, max_range_);
  }
  // occupancy byte per cell plus the float clearance field
  size_t memory_bytes() const override { return 5 * size_t(grid_.width()) * grid_.height(); }

 private:
  OccupancyGrid grid_;
  DistanceField df_;
};

class CddtMethod final : public RangeMethod {
 public:
  CddtMethod(const OccupancyGrid& grid, const RangeMethodConfig& cfg, bool prune)
      : cddt_(grid, cfg) {
    if (prune) cddt_.prune();
    max_range_ = cddt_.max_range();
  }
  const char* name() const override { return cddt_.pruned() ? "pcddt" : "cddt"; }
  double cast(const RayQuery& q) const override { return cddt_.cast(q); }
  std::pair<double, double> cast_pair(const RayQuery& q) const override {
    return cddt_.cast_pair(q);
  }
  bool supports_paired_cast() const override { return true; }
  int direction_count() const override { return cddt_.theta_disc(); }
  size_t memory_bytes() const override { return cddt_.memory_bytes(); }

 private:
  Cddt cddt_;
};

class LutMethod final : public RangeMethod {
 public:
  LutMethod(const OccupancyGrid& grid, const RangeMethodConfig& cfg)
      : lut_(lut_build(grid, cfg)) {
    max_range_ = lut_.max_range;
  }
  const char* name() const override { return "lut"; }
  double cast(const RayQuery& q) const override { return lut_cast(lut_, q); }
  int direction_count() const override { return lut_.theta_disc; }
  size_t memory_bytes() const override {
    return lut_projected_bytes(lut_.width, lut_.height, lut_.theta_disc);
  }

 private:
  LookupTable lut_;
};

}  // namespace

std::unique_ptr<RangeMethod> make_method(MethodKind kind, const OccupancyGrid& grid,
                                         const RangeMethodConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  std::unique_ptr<RangeMethod> m;
  switch (kind) {
    case MethodKind::oracle: m = std::make_unique<OracleMethod>(grid, cfg); break;
    case MethodKind::bresenham: m = std::make_unique<BresenhamMethod>(grid, cfg); break;
    case MethodKind::ray_march: m = std::make_unique<RayMarchMethod>(grid, cfg); break;
    case MethodKind::cddt: m = std::make_unique<CddtMethod>(grid, cfg, false); break;
    case MethodKind::pcddt: m = std::make_unique<CddtMethod>(grid, cfg, true); break;
    case MethodKind::lut: m = std::make_unique<LutMethod>(grid, cfg); break;
  }
  auto t1 = std::chrono::steady_clock::now();
  m->set_init_seconds(std::chrono::duration<double>(t1 - t0).count());
  return m;
}

}  // namespace rangelib
