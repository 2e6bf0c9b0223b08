#pragma once

#include <cstdint>
#include <functional>

#include <Eigen/Core>

#include "fiberline/randkit.hpp"

namespace fiberline {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Point on S². Construction checks |v| = 1 within 1e-12.
class UnitVector3 {
 public:
  explicit UnitVector3(const Vec3& v);
  UnitVector3(double x, double y, double z) : UnitVector3(Vec3(x, y, z)) {}

  /// Throws NotUnit for zero or non-finite input.
  static UnitVector3 normalized(const Vec3& v);

  double x() const { return v_.x(); }
  double y() const { return v_.y(); }
  double z() const { return v_.z(); }
  double operator[](int i) const { return v_[i]; }
  const Vec3& vec() const { return v_; }
  operator const Vec3&() const { return v_; }  // NOLINT(google-explicit-constructor)

  double dot(const Vec3& other) const { return v_.dot(other); }
  UnitVector3 operator-() const { return UnitVector3(-v_, Unchecked{}); }

  static UnitVector3 e_x() { return {1.0, 0.0, 0.0}; }
  static UnitVector3 e_y() { return {0.0, 1.0, 0.0}; }
  static UnitVector3 e_z() { return {0.0, 0.0, 1.0}; }

 private:
  struct Unchecked {};
  UnitVector3(const Vec3& v, Unchecked) : v_(v) {}
  Vec3 v_;
};

/// Quaternion with scalar part first. Unit-norm is a precondition of the
/// functions that consume it, checked there to 1e-9.
struct UnitQuaternion {
  double w = 1.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const;
  UnitQuaternion operator-() const { return {-w, -x, -y, -z}; }
  /// U(1) fiber element cos t + k sin t, with k the unit aligned with e_z.
  static UnitQuaternion phase(double t);
};

UnitQuaternion operator*(const UnitQuaternion& a, const UnitQuaternion& b);

/// Element of SO(3). Columns are the images of e_x, e_y, e_z.
class Rotation3 {
 public:
  Rotation3() : m_(Mat3::Identity()) {}
  /// Checks RᵀR = I and det R = +1 within 1e-10; throws NotUnit otherwise.
  explicit Rotation3(const Mat3& m);

  static Rotation3 about_z(double angle);

  const Mat3& matrix() const { return m_; }
  Vec3 column(int i) const { return m_.col(i); }
  Vec3 operator*(const Vec3& v) const { return m_ * v; }
  Rotation3 operator*(const Rotation3& other) const;
  Rotation3 inverse() const;

  double trace() const { return m_.trace(); }
  /// Rotation angle in [0, π].
  double angle() const;

 private:
  struct Unchecked {};
  Rotation3(const Mat3& m, Unchecked) : m_(m) {}
  friend Rotation3 quat_to_rotation(const UnitQuaternion& q);
  Mat3 m_;
};

struct Frame {
  UnitVector3 x;
  UnitVector3 y;
  UnitVector3 z;
};

/// Proposal/acceptance counters shared by every rejection loop.
struct RejectionTally {
  std::uint64_t proposals = 0;
  std::uint64_t accepted = 0;

  double acceptance_rate() const {
    return proposals == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(proposals);
  }
};

/// A rejection loop throws RejectionStall once the tally has seen at least
/// `stall_cap` proposals and its acceptance rate is below `acceptance_floor`.
struct RejectionLimits {
  double acceptance_floor = 1e-6;
  std::uint64_t stall_cap = 10'000'000;
};

// Degenerate projections below this norm are rejected and redrawn.
inline constexpr double kDegenerateNorm = 1e-6;

UnitVector3 sample_sphere2(RngStream& rng);
UnitQuaternion sample_sphere3(RngStream& rng);

/// Throws NotUnit if |q| deviates from 1 by more than 1e-9. The map
/// depends on q only through pairwise products, so q and -q give
/// bit-identical matrices.
Rotation3 quat_to_rotation(const UnitQuaternion& q);

Frame rotation_to_frame(const Rotation3& r);

/// Haar-uniform rotation: uniform S³ pushed through the double cover.
Rotation3 sample_rotation(RngStream& rng);

/// Image of e_z under the rotation represented by q. Constant along
/// q * phase(t).
UnitVector3 hopf_map(const UnitQuaternion& q);

using S3Density = std::function<double(const UnitQuaternion&)>;

enum class Cover {
  Sphere,      ///< density on S³
  Projective,  ///< density on RP³ ≅ SO(3); f(q) = f(-q) is enforced per proposal
};

/// Rejection sampler for a density f ≤ bound on S³ (against the uniform
/// measure). Throws BoundViolated, NonFinite, RejectionStall, and, in
/// Projective mode, InvalidArgument when f(q) ≠ f(-q).
UnitQuaternion sample_s3_density(RngStream& rng, const S3Density& f, double bound,
                                 RejectionTally* tally = nullptr, Cover cover = Cover::Sphere,
                                 const RejectionLimits& limits = {});

/// Largest |f(q) - f(-q)| over n uniform draws on S³.
double antipodal_asymmetry(RngStream& rng, const S3Density& f, int n = 1000);

/// Uniform point in the unit ball by rejection from [-1,1]³.
Vec3 sample_unit_ball(RngStream& rng, RejectionTally* tally = nullptr);

/// Uniform unit vector in the plane ⟂ u: ball point, project, normalize.
UnitVector3 tangent_from_ball(RngStream& rng, const UnitVector3& u,
                              RejectionTally* ball_tally = nullptr);

/// normalize(e_z × u). Continuous away from the poles and necessarily
/// discontinuous at them. Throws PoleSingularity when |u × e_z| ≤ 1e-9.
UnitVector3 naive_frame(const UnitVector3& u);

/// Angle between two vectors in [0, π].
double angle_between(const Vec3& a, const Vec3& b);

}  // namespace fiberline
