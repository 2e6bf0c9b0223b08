#include "fiberline/geometry.hpp"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "fiberline/bundle.hpp"
#include "fiberline/error.hpp"
#include "oracles.hpp"

namespace fiberline {
namespace {

constexpr double kPi = std::numbers::pi;

ErrorKind kind_of(const std::function<void()>& call) {
  try {
    call();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorKind::InvalidArgument;
}

Halfspace face(double x, double y, double z, double offset) {
  return {UnitVector3::normalized(Vec3(x, y, z)), offset};
}

std::vector<Halfspace> cube_faces(double lo, double hi) {
  return {face(1, 0, 0, hi), face(-1, 0, 0, -lo), face(0, 1, 0, hi),
          face(0, -1, 0, -lo), face(0, 0, 1, hi), face(0, 0, -1, -lo)};
}

TEST(GeometryTest, BallChords) {
  const ConvexBody ball = ConvexBody::ball(Vec3::Zero(), 1.0);
  EXPECT_DOUBLE_EQ(chord(ball, DirectedLine(UnitVector3::e_z(), Vec3::Zero())), 2.0);
  EXPECT_NEAR(chord(ball, DirectedLine(UnitVector3::e_z(), Vec3(0.6, 0, 0))), 1.6, 1e-15);
  EXPECT_EQ(chord(ball, DirectedLine(UnitVector3::e_z(), Vec3(1.0, 0, 0))), 0.0);
  EXPECT_EQ(chord(ball, DirectedLine(UnitVector3::e_z(), Vec3(1.5, 0, 0))), 0.0);
  const ConvexBody off = ConvexBody::ball(Vec3(3, 0, 0), 0.5);
  EXPECT_DOUBLE_EQ(chord(off, DirectedLine(UnitVector3::e_y(), Vec3(3, 0, 0))), 1.0);
}

TEST(GeometryTest, BoxChords) {
  const ConvexBody cube = ConvexBody::box(Vec3::Zero(), Vec3::Ones());
  EXPECT_DOUBLE_EQ(chord(cube, DirectedLine(UnitVector3::e_z(), Vec3(0.5, 0.5, 0))), 1.0);
  const DirectedLine diag = DirectedLine::through(UnitVector3::normalized(Vec3::Ones()), Vec3::Zero());
  EXPECT_NEAR(chord(cube, diag), std::sqrt(3.0), 1e-12);
  EXPECT_EQ(chord(cube, DirectedLine(UnitVector3::e_z(), Vec3(1.5, 0.5, 0))), 0.0);
  // Parallel to a face and outside its slab.
  EXPECT_EQ(chord(cube, DirectedLine(UnitVector3::e_x(), Vec3(0, 2, 0.5))), 0.0);
}

TEST(GeometryTest, HalfspacesMatchBox) {
  const ConvexBody box = ConvexBody::box(Vec3(-1, -1, -1), Vec3(1, 1, 1));
  const ConvexBody hs = ConvexBody::halfspaces(cube_faces(-1, 1));
  EXPECT_NEAR(hs.bounding_radius(), std::sqrt(3.0), 1e-12);
  RngStream rng = make_rng(1);
  for (int i = 0; i < 10'000; ++i) {
    const DirectedLine l = sample_isotropic(rng, 2.0);
    ASSERT_NEAR(chord(box, l), chord(hs, l), 1e-9);
  }
}

TEST(GeometryTest, TetrahedronChord) {
  const ConvexBody tet = ConvexBody::halfspaces(
      {face(-1, 0, 0, 0), face(0, -1, 0, 0), face(0, 0, -1, 0), face(1, 1, 1, 1 / std::sqrt(3.0))});
  EXPECT_EQ(polytope_vertices(std::get<Halfspaces>(tet.shape())).size(), 4u);
  EXPECT_NEAR(tet.bounding_radius(), 1.0, 1e-12);
  EXPECT_NEAR(chord(tet, DirectedLine(UnitVector3::e_z(), Vec3(0.25, 0.25, 0))), 0.5, 1e-12);
  EXPECT_THROW(volume(tet), Error);
  EXPECT_EQ(kind_of([&] { surface_area(tet); }), ErrorKind::Unsupported);
}

TEST(GeometryTest, VolumeAndArea) {
  const ConvexBody ball = ConvexBody::ball(Vec3(1, 1, 1), 2.0);
  EXPECT_DOUBLE_EQ(volume(ball), 4.0 / 3.0 * kPi * 8.0);
  EXPECT_DOUBLE_EQ(surface_area(ball), 4.0 * kPi * 4.0);
  EXPECT_NEAR(ball.bounding_radius(), std::sqrt(3.0) + 2.0, 1e-12);
  const ConvexBody box = ConvexBody::box(Vec3(-0.5, -1, -1.5), Vec3(0.5, 1, 1.5));
  EXPECT_DOUBLE_EQ(volume(box), 6.0);
  EXPECT_DOUBLE_EQ(surface_area(box), 22.0);
  EXPECT_NEAR(bounding_radius(box), std::sqrt(14.0) / 2.0, 1e-12);
}

TEST(GeometryTest, CauchyProjectionOracle) {
  // Mean projected area is S/4 for a convex body.
  EXPECT_NEAR(oracle::box_mean_projected_area(1, 2, 3), 22.0 / 4.0, 1e-3);
  EXPECT_NEAR(oracle::box_mean_projected_area(1, 1, 1), 1.5, 1e-3);
}

TEST(GeometryTest, InvalidBodies) {
  EXPECT_EQ(kind_of([] { ConvexBody::ball(Vec3::Zero(), 0.0); }), ErrorKind::InvalidBody);
  EXPECT_EQ(kind_of([] { ConvexBody::ball(Vec3::Zero(), -1.0); }), ErrorKind::InvalidBody);
  EXPECT_EQ(kind_of([] { ConvexBody::box(Vec3::Zero(), Vec3(1, 0, 1)); }), ErrorKind::InvalidBody);
  EXPECT_EQ(kind_of([] { ConvexBody::halfspaces(cube_faces(1, -1)); }), ErrorKind::InvalidBody);
}

TEST(GeometryTest, UnboundedHalfspaces) {
  // Three faces: a cone.
  EXPECT_EQ(kind_of([] {
              ConvexBody::halfspaces({face(-1, 0, 0, 0), face(0, -1, 0, 0), face(0, 0, -1, 0)});
            }),
            ErrorKind::Unbounded);
  // Infinite prism: no face bounds z.
  EXPECT_EQ(kind_of([] {
              ConvexBody::halfspaces(
                  {face(1, 0, 0, 1), face(-1, 0, 0, 1), face(0, 1, 0, 1), face(0, -1, 0, 1)});
            }),
            ErrorKind::Unbounded);
  // Octant with an extra face that leaves a recession ray.
  EXPECT_EQ(kind_of([] {
              ConvexBody::halfspaces({face(-1, 0, 0, 0), face(0, -1, 0, 0), face(0, 0, -1, 0),
                                      face(1, 1, 0, 1)});
            }),
            ErrorKind::Unbounded);
  // Bounded but beyond the cap.
  EXPECT_EQ(kind_of([] { ConvexBody::halfspaces(cube_faces(-10, 10), 5.0); }), ErrorKind::Unbounded);
}

TEST(GeometryTest, ChordIsRotationInvariantForBall) {
  const ConvexBody ball = ConvexBody::ball(Vec3::Zero(), 1.0);
  RngStream rng = make_rng(2);
  for (int i = 0; i < 1000; ++i) {
    const DirectedLine l = sample_isotropic(rng, 1.5);
    EXPECT_NEAR(chord(ball, rotate(sample_rotation(rng), l)), chord(ball, l), 1e-12);
    EXPECT_EQ(chord(ball, l.flipped()), chord(ball, l));
  }
}

}  // namespace
}  // namespace fiberline
