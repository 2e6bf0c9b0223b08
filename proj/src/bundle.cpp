#include "fiberline/bundle.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "fiberline/error.hpp"

namespace fiberline {
namespace {

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw Error(ErrorKind::InvalidArgument, std::string(what) + " must be positive");
  }
}

}  // namespace

BundlePoint act(double h, const BundlePoint& pt) {
  const double c = std::cos(h);
  const double s = std::sin(h);
  const Vec2 r(c * pt.r.x() + s * pt.r.y(), -s * pt.r.x() + c * pt.r.y());
  return {pt.g * Rotation3::about_z(h), r};
}

DirectedLine project_to_line(const BundlePoint& pt) {
  const Mat3& m = pt.g.matrix();
  const UnitVector3 u = UnitVector3::normalized(m.col(2));
  const Vec3 foot = pt.r.x() * m.col(0) + pt.r.y() * m.col(1);
  return DirectedLine::through(u, foot);
}

BundleDensity symmetrize_density(BundleDensity f_raw, int k) {
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "quadrature order must be >= 1");
  return [f_raw = std::move(f_raw), k](const BundlePoint& pt) {
    double sum = 0.0;
    for (int j = 0; j < k; ++j) {
      const double value = f_raw(act(2.0 * std::numbers::pi * j / k, pt));
      if (!std::isfinite(value)) throw Error(ErrorKind::NonFinite, "raw density value");
      sum += value;
    }
    return sum / k;
  };
}

LineDensity uniform_density(double disk_radius) {
  require_positive(disk_radius, "disk radius");
  return {[](const BundlePoint&) { return 1.0; }, 1.0, disk_radius, "uniform"};
}

LineDensity tilt_density(double kappa, const UnitVector3& axis, double disk_radius) {
  require_positive(disk_radius, "disk radius");
  if (!std::isfinite(kappa)) throw Error(ErrorKind::InvalidArgument, "kappa must be finite");
  const Vec3 a = axis.vec();
  return {[kappa, a](const BundlePoint& pt) {
            return std::exp(kappa * pt.g.matrix().col(2).dot(a) - std::abs(kappa));
          },
          1.0, disk_radius, "tilt"};
}

LineDensity radial_density(double sigma, double disk_radius) {
  require_positive(disk_radius, "disk radius");
  require_positive(sigma, "sigma");
  const double inv = 1.0 / (2.0 * sigma * sigma);
  return {[inv](const BundlePoint& pt) { return std::exp(-pt.r.squaredNorm() * inv); }, 1.0,
          disk_radius, "radial"};
}

LineDensity tilt_radial_density(double kappa, const UnitVector3& axis, double sigma,
                                double disk_radius) {
  LineDensity tilt = tilt_density(kappa, axis, disk_radius);
  LineDensity radial = radial_density(sigma, disk_radius);
  return {[t = std::move(tilt.f), r = std::move(radial.f)](const BundlePoint& pt) {
            return t(pt) * r(pt);
          },
          1.0, disk_radius, "tilt-radial"};
}

LineDensity density_from_line(std::function<double(const DirectedLine&)> f, double bound,
                              double disk_radius, std::string name) {
  require_positive(disk_radius, "disk radius");
  require_positive(bound, "density bound");
  return {[f = std::move(f)](const BundlePoint& pt) { return f(project_to_line(pt)); }, bound,
          disk_radius, std::move(name)};
}

Vec2 sample_disk(RngStream& rng, double radius) {
  const double r2 = radius * radius;
  for (;;) {
    const Vec2 p(rng.uniform(-radius, radius), rng.uniform(-radius, radius));
    if (p.squaredNorm() < r2) return p;
  }
}

DirectedLine sample_isotropic(RngStream& rng, double radius) {
  require_positive(radius, "disk radius");
  BundlePoint pt{sample_rotation(rng), Vec2::Zero()};
  pt.r = sample_disk(rng, radius);
  return project_to_line(pt);
}

BundlePoint sample_bundle(RngStream& rng, const LineDensity& d, RejectionTally* tally,
                          const RejectionLimits& limits) {
  require_positive(d.disk_radius, "disk radius");
  require_positive(d.bound, "density bound");
  RejectionTally local;
  RejectionTally& t = tally ? *tally : local;
  for (;;) {
    BundlePoint pt{sample_rotation(rng), Vec2::Zero()};
    pt.r = sample_disk(rng, d.disk_radius);
    const double value = d.f(pt);
    if (!std::isfinite(value)) throw Error(ErrorKind::NonFinite, "density value");
    if (value < 0.0) throw Error(ErrorKind::InvalidArgument, "negative density value");
    if (value > d.bound * (1.0 + 1e-9)) {
      throw Error(ErrorKind::BoundViolated, "f(g, r) = " + std::to_string(value) +
                                                " exceeds bound " + std::to_string(d.bound));
    }
    ++t.proposals;
    if (rng.uniform01() * d.bound < value) {
      ++t.accepted;
      return pt;
    }
    if (t.proposals >= limits.stall_cap && t.acceptance_rate() < limits.acceptance_floor) {
      throw Error(ErrorKind::RejectionStall,
                  "acceptance " + std::to_string(t.acceptance_rate()) + " after " +
                      std::to_string(t.proposals) + " proposals");
    }
  }
}

DirectedLine sample_cosine_surface(RngStream& rng, double radius) {
  require_positive(radius, "sphere radius");
  const UnitVector3 normal = sample_sphere2(rng);
  // 1 - U lies in (0, 1], so the direction is never tangent.
  const double cos_a = std::sqrt(1.0 - rng.uniform01());
  const double sin_a = std::sqrt(std::max(0.0, 1.0 - cos_a * cos_a));
  const UnitVector3 t = tangent_from_ball(rng, normal);
  const UnitVector3 dir = UnitVector3::normalized(-cos_a * normal.vec() + sin_a * t.vec());
  return DirectedLine::through(dir, radius * normal.vec());
}

}  // namespace fiberline
