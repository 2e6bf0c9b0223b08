#include "fiberline/linespace.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "fiberline/error.hpp"

namespace fiberline {
namespace {

constexpr double kFootTol = 1e-9;
constexpr double kHorizontalTol = 1e-9;
constexpr double kEqualTol = 1e-9;

}  // namespace

DirectedLine::DirectedLine(const UnitVector3& direction, const Vec3& foot)
    : direction_(direction), foot_(foot) {
  if (!foot.allFinite()) throw Error(ErrorKind::NonFinite, "line foot");
  if (std::abs(direction.dot(foot)) > kFootTol) {
    throw Error(ErrorKind::InvalidArgument, "foot is not orthogonal to direction");
  }
}

DirectedLine DirectedLine::through(const UnitVector3& direction, const Vec3& point) {
  Vec3 foot = point - direction.dot(point) * direction.vec();
  // A second pass removes the residual component left by cancellation when
  // the point is far from the foot.
  foot -= direction.dot(foot) * direction.vec();
  return DirectedLine(direction, foot);
}

DirectedLine slope_to_directed(const SlopeLine& sl) {
  const UnitVector3 u = UnitVector3::normalized(Vec3(sl.a, sl.b, 1.0));
  return DirectedLine::through(u, Vec3(sl.p, sl.q, 0.0));
}

SlopeLine directed_to_slope(const DirectedLine& dl) {
  const UnitVector3& u = dl.direction();
  if (std::abs(u.z()) <= kHorizontalTol) {
    throw Error(ErrorKind::HorizontalLine, "line is parallel to z = 0");
  }
  const Vec3& f = dl.foot();
  const double t = -f.z() / u.z();
  return {u.x() / u.z(), u.y() / u.z(), f.x() + t * u.x(), f.y() + t * u.y()};
}

double slope_measure_weight(const SlopeLine& sl) {
  const double s = 1.0 + sl.a * sl.a + sl.b * sl.b;
  return 1.0 / (s * s);
}

DirectedLine undirect(const DirectedLine& dl) {
  const UnitVector3& u = dl.direction();
  for (int i : {2, 1, 0}) {
    if (u[i] > 0.0) return dl;
    if (u[i] < 0.0) return dl.flipped();
  }
  return dl;
}

Vec3 point_at(const DirectedLine& dl, double t) { return dl.foot() + t * dl.direction().vec(); }

bool lines_equal(const DirectedLine& l1, const DirectedLine& l2, bool directed) {
  const DirectedLine a = directed ? l1 : undirect(l1);
  const DirectedLine b = directed ? l2 : undirect(l2);
  return (a.foot() - b.foot()).cwiseAbs().maxCoeff() <= kEqualTol &&
         (a.direction().vec() - b.direction().vec()).cwiseAbs().maxCoeff() <= kEqualTol;
}

double distance_to_line(const DirectedLine& dl, const Vec3& point) {
  const Vec3 d = point - dl.foot();
  return (d - dl.direction().dot(d) * dl.direction().vec()).norm();
}

DirectedLine rotate(const Rotation3& r, const DirectedLine& dl) {
  return DirectedLine::through(UnitVector3::normalized(r * dl.direction().vec()), r * dl.foot());
}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_line_csv_row(std::ostream& out, const DirectedLine& dl) {
  const Vec3& u = dl.direction().vec();
  const Vec3& q = dl.foot();
  out << format_double(u.x()) << ',' << format_double(u.y()) << ',' << format_double(u.z()) << ','
      << format_double(q.x()) << ',' << format_double(q.y()) << ',' << format_double(q.z())
      << '\n';
}

void write_lines_csv(std::ostream& out, const std::vector<DirectedLine>& lines) {
  out << kLineCsvHeader << '\n';
  for (const auto& dl : lines) write_line_csv_row(out, dl);
}

DirectedLine line_from_record(const Vec3& direction, const Vec3& foot) {
  // 17-digit text round-trips exactly, so records written by this library
  // come back unchanged; hand-written records are normalized here.
  const UnitVector3 u = std::abs(direction.squaredNorm() - 1.0) <= 1e-12
                            ? UnitVector3(direction)
                            : UnitVector3::normalized(direction);
  if (std::abs(u.dot(foot)) <= kFootTol) return DirectedLine(u, foot);
  return DirectedLine::through(u, foot);
}

std::vector<DirectedLine> read_lines_csv(std::istream& in) {
  std::vector<DirectedLine> lines;
  std::string row;
  int row_number = 0;
  while (std::getline(in, row)) {
    ++row_number;
    if (!row.empty() && row.back() == '\r') row.pop_back();
    if (row.empty() || row.front() == '#' || row == kLineCsvHeader) continue;
    std::istringstream fields(row);
    std::vector<std::string> cells;
    std::string cell;
    while (std::getline(fields, cell, ',')) cells.push_back(cell);
    if (cells.size() != 6) {
      throw Error(ErrorKind::InvalidArgument,
                  "expected 6 columns on line " + std::to_string(row_number));
    }
    double values[6];
    for (int i = 0; i < 6; ++i) {
      try {
        std::size_t used = 0;
        values[i] = std::stod(cells[i], &used);
        if (used != cells[i].size()) throw std::invalid_argument(cells[i]);
      } catch (const std::exception&) {
        throw Error(ErrorKind::InvalidArgument,
                    "bad number '" + cells[i] + "' on line " + std::to_string(row_number));
      }
    }
    lines.push_back(line_from_record(Vec3(values[0], values[1], values[2]),
                                     Vec3(values[3], values[4], values[5])));
  }
  return lines;
}

}  // namespace fiberline
