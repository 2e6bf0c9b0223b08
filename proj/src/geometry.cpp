#include "fiberline/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "fiberline/error.hpp"

namespace fiberline {
namespace {

constexpr double kParallelTol = 1e-12;
constexpr double kTangencyTol = 1e-12;
constexpr double kFeasibleTol = 1e-9;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Parameter interval of the line inside all half-spaces; empty when lo >= hi.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  // Clips by  slope * t <= rhs.
  void clip(double slope, double rhs) {
    if (std::abs(slope) < kParallelTol) {
      if (rhs < 0.0) hi = -std::numeric_limits<double>::infinity();
      return;
    }
    const double t = rhs / slope;
    if (slope > 0.0) {
      hi = std::min(hi, t);
    } else {
      lo = std::max(lo, t);
    }
  }
  double length() const { return hi > lo ? hi - lo : 0.0; }
};

double ball_chord(const Ball& b, const DirectedLine& dl) {
  const Vec3 v = dl.foot() - b.center;
  const double along = dl.direction().dot(v);
  const double disc = b.radius * b.radius - (v.squaredNorm() - along * along);
  if (disc <= kTangencyTol * b.radius * b.radius) return 0.0;
  return 2.0 * std::sqrt(disc);
}

double box_chord(const Box& b, const DirectedLine& dl) {
  const Vec3& u = dl.direction().vec();
  const Vec3& q = dl.foot();
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    if (std::abs(u[i]) < kParallelTol) {
      // Parallel slab: all or nothing.
      if (q[i] < b.min[i] || q[i] > b.max[i]) return 0.0;
      continue;
    }
    double t0 = (b.min[i] - q[i]) / u[i];
    double t1 = (b.max[i] - q[i]) / u[i];
    if (t0 > t1) std::swap(t0, t1);
    lo = std::max(lo, t0);
    hi = std::min(hi, t1);
    if (hi <= lo) return 0.0;
  }
  return hi - lo;
}

double halfspaces_chord(const Halfspaces& hs, const DirectedLine& dl) {
  Interval interval;
  for (const auto& face : hs.faces) {
    interval.clip(face.normal.dot(dl.direction().vec()), face.offset - face.normal.dot(dl.foot()));
    if (interval.length() == 0.0) return 0.0;
  }
  return interval.length();
}

bool contains(const Halfspaces& hs, const Vec3& x) {
  return std::all_of(hs.faces.begin(), hs.faces.end(), [&](const Halfspace& f) {
    return f.normal.dot(x) <= f.offset + kFeasibleTol * std::max(1.0, std::abs(f.offset));
  });
}

std::array<Vec3, 26> probe_directions() {
  std::array<Vec3, 26> dirs;
  int k = 0;
  for (int x = -1; x <= 1; ++x)
    for (int y = -1; y <= 1; ++y)
      for (int z = -1; z <= 1; ++z)
        if (x != 0 || y != 0 || z != 0) dirs[k++] = Vec3(x, y, z).normalized();
  return dirs;
}

void check_bounded(const Halfspaces& hs) {
  const auto& faces = hs.faces;
  Eigen::MatrixXd normals(static_cast<Eigen::Index>(faces.size()), 3);
  for (std::size_t i = 0; i < faces.size(); ++i) {
    normals.row(static_cast<Eigen::Index>(i)) = faces[i].normal.vec();
  }
  if (faces.size() < 4 || Eigen::FullPivLU<Eigen::MatrixXd>(normals).rank() < 3) {
    throw Error(ErrorKind::Unbounded, "half-space normals do not span space");
  }
  // A nonzero recession cone of full-rank constraints has an extreme ray
  // along some n_i × n_j.
  for (std::size_t i = 0; i < faces.size(); ++i) {
    for (std::size_t j = i + 1; j < faces.size(); ++j) {
      const Vec3 c = faces[i].normal.vec().cross(faces[j].normal.vec());
      if (c.norm() < 1e-9) continue;
      for (const Vec3& d : {Vec3(c.normalized()), Vec3(-c.normalized())}) {
        const bool recedes = std::all_of(faces.begin(), faces.end(), [&](const Halfspace& f) {
          return f.normal.dot(d) <= kFeasibleTol;
        });
        if (recedes) throw Error(ErrorKind::Unbounded, "half-spaces admit a recession direction");
      }
    }
  }
}

}  // namespace

std::vector<Vec3> polytope_vertices(const Halfspaces& hs) {
  std::vector<Vec3> vertices;
  const auto& f = hs.faces;
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (std::size_t j = i + 1; j < f.size(); ++j) {
      for (std::size_t k = j + 1; k < f.size(); ++k) {
        Mat3 a;
        a.row(0) = f[i].normal.vec();
        a.row(1) = f[j].normal.vec();
        a.row(2) = f[k].normal.vec();
        if (std::abs(a.determinant()) < 1e-12) continue;
        const Vec3 x = a.partialPivLu().solve(Vec3(f[i].offset, f[j].offset, f[k].offset));
        if (contains(hs, x)) vertices.push_back(x);
      }
    }
  }
  return vertices;
}

ConvexBody ConvexBody::ball(const Vec3& center, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius) || !center.allFinite()) {
    throw Error(ErrorKind::InvalidBody, "ball radius must be positive");
  }
  return ConvexBody(Ball{center, radius}, center.norm() + radius);
}

ConvexBody ConvexBody::box(const Vec3& min, const Vec3& max) {
  if (!min.allFinite() || !max.allFinite() || !(min.array() < max.array()).all()) {
    throw Error(ErrorKind::InvalidBody, "box requires min < max componentwise");
  }
  double r2 = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double m = std::max(std::abs(min[i]), std::abs(max[i]));
    r2 += m * m;
  }
  return ConvexBody(Box{min, max}, std::sqrt(r2));
}

ConvexBody ConvexBody::halfspaces(std::vector<Halfspace> faces, double radius_cap) {
  for (const auto& face : faces) {
    if (!std::isfinite(face.offset)) throw Error(ErrorKind::InvalidBody, "non-finite offset");
  }
  Halfspaces hs{std::move(faces)};
  check_bounded(hs);
  const std::vector<Vec3> vertices = polytope_vertices(hs);
  if (vertices.empty()) throw Error(ErrorKind::InvalidBody, "half-spaces have empty intersection");

  Vec3 centroid = Vec3::Zero();
  double radius = 0.0;
  for (const auto& v : vertices) {
    centroid += v;
    radius = std::max(radius, v.norm());
  }
  centroid /= static_cast<double>(vertices.size());
  if (radius > radius_cap) throw Error(ErrorKind::Unbounded, "body exceeds radius cap");

  // Directional probe from the vertex centroid.
  for (const Vec3& d : probe_directions()) {
    double reach = std::numeric_limits<double>::infinity();
    for (const auto& face : hs.faces) {
      const double slope = face.normal.dot(d);
      if (slope > kParallelTol) {
        reach = std::min(reach, (face.offset - face.normal.dot(centroid)) / slope);
      }
    }
    if (!(reach + centroid.norm() <= radius_cap)) {
      throw Error(ErrorKind::Unbounded, "directional probe exceeds radius cap");
    }
  }
  return ConvexBody(std::move(hs), radius);
}

double chord(const ConvexBody& body, const DirectedLine& dl) {
  return std::visit(overloaded{[&](const Ball& b) { return ball_chord(b, dl); },
                               [&](const Box& b) { return box_chord(b, dl); },
                               [&](const Halfspaces& h) { return halfspaces_chord(h, dl); }},
                    body.shape());
}

double volume(const ConvexBody& body) {
  return std::visit(
      overloaded{[](const Ball& b) { return 4.0 / 3.0 * std::numbers::pi * std::pow(b.radius, 3); },
                 [](const Box& b) { return (b.max - b.min).prod(); },
                 [](const Halfspaces&) -> double {
                   throw Error(ErrorKind::Unsupported, "volume of a half-space body");
                 }},
      body.shape());
}

double surface_area(const ConvexBody& body) {
  return std::visit(
      overloaded{[](const Ball& b) { return 4.0 * std::numbers::pi * b.radius * b.radius; },
                 [](const Box& b) {
                   const Vec3 e = b.max - b.min;
                   return 2.0 * (e.x() * e.y() + e.y() * e.z() + e.z() * e.x());
                 },
                 [](const Halfspaces&) -> double {
                   throw Error(ErrorKind::Unsupported, "surface area of a half-space body");
                 }},
      body.shape());
}

double bounding_radius(const ConvexBody& body) { return body.bounding_radius(); }

}  // namespace fiberline
