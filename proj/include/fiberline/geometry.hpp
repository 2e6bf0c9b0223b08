#pragma once

#include <variant>
#include <vector>

#include "fiberline/haar.hpp"
#include "fiberline/linespace.hpp"

namespace fiberline {

struct Ball {
  Vec3 center = Vec3::Zero();
  double radius = 1.0;
};

struct Box {
  Vec3 min = Vec3::Zero();
  Vec3 max = Vec3::Ones();
};

/// Closed half-space {x : normal · x ≤ offset}.
struct Halfspace {
  UnitVector3 normal;
  double offset;
};

struct Halfspaces {
  std::vector<Halfspace> faces;
};

/// Convex body: ball, axis-aligned box, or bounded intersection of
/// half-spaces. The factories validate; a ConvexBody is always valid.
class ConvexBody {
 public:
  using Shape = std::variant<Ball, Box, Halfspaces>;

  /// Throws InvalidBody unless radius > 0.
  static ConvexBody ball(const Vec3& center, double radius);
  /// Throws InvalidBody unless min < max componentwise.
  static ConvexBody box(const Vec3& min, const Vec3& max);
  /// Throws Unbounded if the intersection is unbounded or reaches beyond
  /// `radius_cap` from the origin, InvalidBody if it is empty.
  static ConvexBody halfspaces(std::vector<Halfspace> faces, double radius_cap = 1e6);

  const Shape& shape() const { return shape_; }
  double bounding_radius() const { return bounding_radius_; }

 private:
  ConvexBody(Shape shape, double bounding_radius)
      : shape_(std::move(shape)), bounding_radius_(bounding_radius) {}
  Shape shape_;
  double bounding_radius_;
};

/// Length of body ∩ line; 0 on a miss or tangency.
double chord(const ConvexBody& body, const DirectedLine& dl);

/// Analytic volume and surface area. Throw Unsupported for Halfspaces.
double volume(const ConvexBody& body);
double surface_area(const ConvexBody& body);

/// Radius of the smallest origin-centered ball containing the body.
double bounding_radius(const ConvexBody& body);

/// Vertices of a half-space polytope.
std::vector<Vec3> polytope_vertices(const Halfspaces& hs);

}  // namespace fiberline
