#pragma once

#include <functional>
#include <string>

#include "fiberline/haar.hpp"
#include "fiberline/linespace.hpp"
#include "fiberline/randkit.hpp"

namespace fiberline {

/// Representative (g, r) of a point of SO(3) ×_{SO(2)} ℝ². The plane
/// coordinates r are taken in the frame (g e_x, g e_y).
struct BundlePoint {
  Rotation3 g;
  Vec2 r = Vec2::Zero();
};

/// SO(2) gauge action (g, r) ↦ (g R_z(h), R_z(-h) r). The structure group is
/// the rotations about e_z.
BundlePoint act(double h, const BundlePoint& pt);

using GaugeAction = std::function<BundlePoint(double, const BundlePoint&)>;

/// u = g e_z, foot = r₁ g e_x + r₂ g e_y. Constant on gauge orbits.
DirectedLine project_to_line(const BundlePoint& pt);

using BundleDensity = std::function<double(const BundlePoint&)>;

/// Density against Haar(SO(3)) × Lebesgue(disk of radius disk_radius),
/// bounded by `bound`, expected to be gauge-invariant. Evaluators must be
/// reentrant.
struct LineDensity {
  BundleDensity f;
  double bound = 1.0;
  double disk_radius = 1.0;
  std::string name;
};

/// Discrete fiber average (1/k) Σ_j f_raw(act(2πj/k, pt)). Exactly invariant
/// under shifts by multiples of 2π/k. Throws NonFinite if f_raw does.
BundleDensity symmetrize_density(BundleDensity f_raw, int k = 64);

LineDensity uniform_density(double disk_radius);
/// exp(κ u·axis − |κ|), u = g e_z; bounded by 1.
LineDensity tilt_density(double kappa, const UnitVector3& axis, double disk_radius);
/// exp(−|r|² / 2σ²); bounded by 1.
LineDensity radial_density(double sigma, double disk_radius);
LineDensity tilt_radial_density(double kappa, const UnitVector3& axis, double sigma,
                                double disk_radius);
/// Density that depends on the point only through its projected line, and
/// is therefore gauge-invariant by construction.
LineDensity density_from_line(std::function<double(const DirectedLine&)> f, double bound,
                              double disk_radius, std::string name);

/// Uniform point in the disk of radius R, by rejection from the square.
Vec2 sample_disk(RngStream& rng, double radius);

/// Isotropic uniform line with foot inside the disk of radius R: Haar frame
/// plus a uniform disk point in its plane.
DirectedLine sample_isotropic(RngStream& rng, double radius);

/// Rejection sampler on SO(3) × disk(d.disk_radius) with acceptance
/// d.f / d.bound. Throws BoundViolated, NonFinite, RejectionStall.
BundlePoint sample_bundle(RngStream& rng, const LineDensity& d, RejectionTally* tally = nullptr,
                          const RejectionLimits& limits = {});

/// Line entering a sphere of radius R from a uniform surface point with a
/// cosine-law direction about the inward normal (cos α = √U).
DirectedLine sample_cosine_surface(RngStream& rng, double radius);

}  // namespace fiberline
