#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fiberline/haar.hpp"

namespace fiberline {

/// Line given by its unit direction and its foot, the point closest to the
/// origin (so direction · foot = 0).
class DirectedLine {
 public:
  /// Checks |direction · foot| ≤ 1e-9; throws InvalidArgument otherwise.
  DirectedLine(const UnitVector3& direction, const Vec3& foot);

  /// Line with the given direction passing through `point`; the foot is
  /// recomputed.
  static DirectedLine through(const UnitVector3& direction, const Vec3& point);

  const UnitVector3& direction() const { return direction_; }
  const Vec3& foot() const { return foot_; }

  DirectedLine flipped() const { return DirectedLine(-direction_, foot_); }

 private:
  UnitVector3 direction_;
  Vec3 foot_;
};

/// Slope chart: x = a z + p, y = b z + q. Misses every line parallel to z = 0.
struct SlopeLine {
  double a = 0.0;
  double b = 0.0;
  double p = 0.0;
  double q = 0.0;
};

/// Direction (a, b, 1)/√(1+a²+b²), oriented toward +z.
DirectedLine slope_to_directed(const SlopeLine& sl);

/// Throws HorizontalLine when |u_z| ≤ 1e-9.
SlopeLine directed_to_slope(const DirectedLine& dl);

/// Invariant line-measure density (1 + a² + b²)^-2 in the slope chart,
/// unnormalized.
double slope_measure_weight(const SlopeLine& sl);

/// Projective representative: the first nonzero of (u_z, u_y, u_x) is made
/// positive. The foot is unchanged.
DirectedLine undirect(const DirectedLine& dl);

Vec3 point_at(const DirectedLine& dl, double t);

/// Feet and directions equal within 1e-9; with directed = false, both
/// lines are compared in undirected canonical form.
bool lines_equal(const DirectedLine& l1, const DirectedLine& l2, bool directed);

/// Euclidean distance from a point to the line.
double distance_to_line(const DirectedLine& dl, const Vec3& point);

/// Rigidly rotates a line about the origin.
DirectedLine rotate(const Rotation3& r, const DirectedLine& dl);

// Line records: CSV with header `ux,uy,uz,qx,qy,qz`, 17 significant digits.
// Lines starting with '#' are comments.
inline constexpr const char* kLineCsvHeader = "ux,uy,uz,qx,qy,qz";

void write_line_csv_row(std::ostream& out, const DirectedLine& dl);
void write_lines_csv(std::ostream& out, const std::vector<DirectedLine>& lines);
/// Parses CSV line records; '#' comment lines and the header are skipped.
/// Throws InvalidArgument on malformed rows.
std::vector<DirectedLine> read_lines_csv(std::istream& in);

/// A DirectedLine whose stored foot is re-projected so u·q = 0.
DirectedLine line_from_record(const Vec3& direction, const Vec3& foot);

std::string format_double(double value);

}  // namespace fiberline
