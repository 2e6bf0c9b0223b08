#include "fiberline/haar.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "fiberline/error.hpp"

namespace fiberline {
namespace {

constexpr double kUnitVectorTol = 1e-12;
constexpr double kQuaternionTol = 1e-9;
constexpr double kRotationTol = 1e-10;
constexpr double kPoleTol = 1e-9;

void check_finite(double value, const char* what) {
  if (!std::isfinite(value)) throw Error(ErrorKind::NonFinite, what);
}

void check_unit_quaternion(const UnitQuaternion& q) {
  const double n = q.norm();
  if (!std::isfinite(n) || std::abs(n - 1.0) > kQuaternionTol) {
    throw Error(ErrorKind::NotUnit, "quaternion norm " + std::to_string(n));
  }
}

}  // namespace

UnitVector3::UnitVector3(const Vec3& v) : v_(v) {
  const double n2 = v.squaredNorm();
  if (!std::isfinite(n2) || std::abs(n2 - 1.0) > kUnitVectorTol) {
    throw Error(ErrorKind::NotUnit, "vector squared norm " + std::to_string(n2));
  }
}

UnitVector3 UnitVector3::normalized(const Vec3& v) {
  const double n = v.norm();
  if (!std::isfinite(n) || n == 0.0) throw Error(ErrorKind::NotUnit, "cannot normalize");
  return UnitVector3(v / n, Unchecked{});
}

double UnitQuaternion::norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

UnitQuaternion UnitQuaternion::phase(double t) { return {std::cos(t), 0.0, 0.0, std::sin(t)}; }

UnitQuaternion operator*(const UnitQuaternion& a, const UnitQuaternion& b) {
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
          a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
          a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

Rotation3::Rotation3(const Mat3& m) : m_(m) {
  const double orth = (m.transpose() * m - Mat3::Identity()).cwiseAbs().maxCoeff();
  const double det = m.determinant();
  if (!std::isfinite(orth) || orth > kRotationTol || std::abs(det - 1.0) > kRotationTol) {
    throw Error(ErrorKind::NotUnit, "matrix is not a rotation");
  }
}

Rotation3 Rotation3::about_z(double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Mat3 m;
  m << c, -s, 0.0,
       s, c, 0.0,
       0.0, 0.0, 1.0;
  return Rotation3(m, Unchecked{});
}

Rotation3 Rotation3::operator*(const Rotation3& other) const {
  return Rotation3(m_ * other.m_, Unchecked{});
}

Rotation3 Rotation3::inverse() const { return Rotation3(m_.transpose(), Unchecked{}); }

double Rotation3::angle() const {
  const double c = std::clamp((trace() - 1.0) / 2.0, -1.0, 1.0);
  return std::acos(c);
}

UnitVector3 sample_sphere2(RngStream& rng) {
  for (;;) {
    const Vec3 g(rng.gaussian(), rng.gaussian(), rng.gaussian());
    const double n = g.norm();
    if (n >= kDegenerateNorm) return UnitVector3::normalized(g);
  }
}

UnitQuaternion sample_sphere3(RngStream& rng) {
  for (;;) {
    UnitQuaternion q{rng.gaussian(), rng.gaussian(), rng.gaussian(), rng.gaussian()};
    const double n = q.norm();
    if (n >= kDegenerateNorm) return {q.w / n, q.x / n, q.y / n, q.z / n};
  }
}

Rotation3 quat_to_rotation(const UnitQuaternion& q) {
  check_unit_quaternion(q);
  // 2/|q|² keeps the result orthogonal at working precision even when q is
  // only unit to within the accepted tolerance.
  const double s = 2.0 / (q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z);
  const double xx = q.x * q.x, yy = q.y * q.y, zz = q.z * q.z;
  const double xy = q.x * q.y, xz = q.x * q.z, yz = q.y * q.z;
  const double wx = q.w * q.x, wy = q.w * q.y, wz = q.w * q.z;
  Mat3 m;
  m << 1.0 - s * (yy + zz), s * (xy - wz), s * (xz + wy),
       s * (xy + wz), 1.0 - s * (xx + zz), s * (yz - wx),
       s * (xz - wy), s * (yz + wx), 1.0 - s * (xx + yy);
  return Rotation3(m, Rotation3::Unchecked{});
}

Frame rotation_to_frame(const Rotation3& r) {
  return {UnitVector3::normalized(r.column(0)), UnitVector3::normalized(r.column(1)),
          UnitVector3::normalized(r.column(2))};
}

Rotation3 sample_rotation(RngStream& rng) { return quat_to_rotation(sample_sphere3(rng)); }

UnitVector3 hopf_map(const UnitQuaternion& q) {
  return UnitVector3::normalized(quat_to_rotation(q).column(2));
}

UnitQuaternion sample_s3_density(RngStream& rng, const S3Density& f, double bound,
                                 RejectionTally* tally, Cover cover,
                                 const RejectionLimits& limits) {
  if (!(bound > 0.0) || !std::isfinite(bound)) {
    throw Error(ErrorKind::InvalidArgument, "density bound must be positive and finite");
  }
  RejectionTally local;
  RejectionTally& t = tally ? *tally : local;
  for (;;) {
    const UnitQuaternion q = sample_sphere3(rng);
    const double value = f(q);
    check_finite(value, "density value");
    if (value < 0.0) throw Error(ErrorKind::InvalidArgument, "negative density value");
    if (value > bound * (1.0 + 1e-9)) {
      throw Error(ErrorKind::BoundViolated,
                  "f(q) = " + std::to_string(value) + " exceeds bound " + std::to_string(bound));
    }
    if (cover == Cover::Projective) {
      const double mirrored = f(-q);
      check_finite(mirrored, "density value");
      if (std::abs(mirrored - value) > 1e-12 * std::max(1.0, std::abs(value))) {
        throw Error(ErrorKind::InvalidArgument, "density is not antipodally symmetric");
      }
    }
    ++t.proposals;
    if (rng.uniform01() * bound < value) {
      ++t.accepted;
      return q;
    }
    if (t.proposals >= limits.stall_cap && t.acceptance_rate() < limits.acceptance_floor) {
      throw Error(ErrorKind::RejectionStall,
                  "acceptance " + std::to_string(t.acceptance_rate()) + " after " +
                      std::to_string(t.proposals) + " proposals");
    }
  }
}

double antipodal_asymmetry(RngStream& rng, const S3Density& f, int n) {
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const UnitQuaternion q = sample_sphere3(rng);
    worst = std::max(worst, std::abs(f(q) - f(-q)));
  }
  return worst;
}

Vec3 sample_unit_ball(RngStream& rng, RejectionTally* tally) {
  for (;;) {
    const Vec3 p(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    if (tally) ++tally->proposals;
    if (p.squaredNorm() <= 1.0) {
      if (tally) ++tally->accepted;
      return p;
    }
  }
}

UnitVector3 tangent_from_ball(RngStream& rng, const UnitVector3& u, RejectionTally* ball_tally) {
  for (;;) {
    const Vec3 p = sample_unit_ball(rng, ball_tally);
    const Vec3 projected = p - u.dot(p) * u.vec();
    if (projected.norm() >= kDegenerateNorm) return UnitVector3::normalized(projected);
  }
}

UnitVector3 naive_frame(const UnitVector3& u) {
  const Vec3 c = UnitVector3::e_z().vec().cross(u.vec());
  if (c.norm() <= kPoleTol) throw Error(ErrorKind::PoleSingularity, "e_z x u vanishes");
  return UnitVector3::normalized(c);
}

double angle_between(const Vec3& a, const Vec3& b) {
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

}  // namespace fiberline
