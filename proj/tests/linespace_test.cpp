#include "fiberline/linespace.hpp"

#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "fiberline/error.hpp"

namespace fiberline {
namespace {

ErrorKind kind_of(const std::function<void()>& call) {
  try {
    call();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorKind::InvalidArgument;
}

DirectedLine random_line(RngStream& rng) {
  const UnitVector3 u = sample_sphere2(rng);
  const Vec3 p(rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3));
  return DirectedLine::through(u, p);
}

TEST(LinespaceTest, FootMustBeOrthogonal) {
  EXPECT_NO_THROW(DirectedLine(UnitVector3::e_z(), Vec3(1, 2, 0)));
  EXPECT_NO_THROW(DirectedLine(UnitVector3::e_z(), Vec3(1, 2, 5e-10)));
  EXPECT_EQ(kind_of([] { DirectedLine(UnitVector3::e_z(), Vec3(1, 2, 1e-6)); }),
            ErrorKind::InvalidArgument);
}

TEST(LinespaceTest, ThroughRecomputesFoot) {
  const DirectedLine dl = DirectedLine::through(UnitVector3::e_z(), Vec3(1, 2, 7));
  EXPECT_EQ(dl.foot(), Vec3(1, 2, 0));
  RngStream rng = make_rng(1);
  for (int i = 0; i < 1000; ++i) {
    const DirectedLine l = random_line(rng);
    EXPECT_LE(std::abs(l.direction().dot(l.foot())), 1e-12);
  }
}

TEST(LinespaceTest, SlopeRoundTripExample) {
  const SlopeLine sl{0.5, -0.25, 1.0, 2.0};
  const DirectedLine dl = slope_to_directed(sl);
  EXPECT_GT(dl.direction().z(), 0.0);
  EXPECT_NEAR(dl.direction().x() / dl.direction().z(), 0.5, 1e-15);
  EXPECT_NEAR(dl.direction().y() / dl.direction().z(), -0.25, 1e-15);
  // The line passes through (p, q, 0).
  EXPECT_LE(distance_to_line(dl, Vec3(1.0, 2.0, 0.0)), 1e-12);
  const SlopeLine back = directed_to_slope(dl);
  EXPECT_NEAR(back.a, sl.a, 1e-12);
  EXPECT_NEAR(back.b, sl.b, 1e-12);
  EXPECT_NEAR(back.p, sl.p, 1e-12);
  EXPECT_NEAR(back.q, sl.q, 1e-12);
}

TEST(LinespaceTest, SlopeRoundTripRandom) {
  RngStream rng = make_rng(2);
  for (int i = 0; i < 10'000; ++i) {
    const SlopeLine sl{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5),
                       rng.uniform(-5, 5)};
    const SlopeLine back = directed_to_slope(slope_to_directed(sl));
    ASSERT_NEAR(back.a, sl.a, 1e-9);
    ASSERT_NEAR(back.b, sl.b, 1e-9);
    ASSERT_NEAR(back.p, sl.p, 1e-9);
    ASSERT_NEAR(back.q, sl.q, 1e-9);
  }
}

TEST(LinespaceTest, SlopeFromDownwardLineUsesSameChart) {
  const DirectedLine up = slope_to_directed({1.0, 2.0, 0.5, -0.5});
  const SlopeLine down = directed_to_slope(up.flipped());
  EXPECT_NEAR(down.a, 1.0, 1e-12);
  EXPECT_NEAR(down.b, 2.0, 1e-12);
  EXPECT_NEAR(down.p, 0.5, 1e-12);
  EXPECT_NEAR(down.q, -0.5, 1e-12);
}

TEST(LinespaceTest, HorizontalLinesHaveNoSlopeCoordinates) {
  EXPECT_EQ(kind_of([] { directed_to_slope(DirectedLine(UnitVector3::e_x(), Vec3(0, 1, 0))); }),
            ErrorKind::HorizontalLine);
  const UnitVector3 nearly = UnitVector3::normalized(Vec3(1.0, 0.0, 5e-10));
  EXPECT_EQ(kind_of([&] { directed_to_slope(DirectedLine::through(nearly, Vec3::Zero())); }),
            ErrorKind::HorizontalLine);
}

TEST(LinespaceTest, SlopeMeasureWeight) {
  EXPECT_EQ(slope_measure_weight({0, 0, 3, 4}), 1.0);
  EXPECT_DOUBLE_EQ(slope_measure_weight({1, 1, 0, 0}), 1.0 / 9.0);
  EXPECT_DOUBLE_EQ(slope_measure_weight({2, 0, 0, 0}), 1.0 / 25.0);
}

TEST(LinespaceTest, UndirectSignRule) {
  const DirectedLine down(UnitVector3(0, 0, -1), Vec3(1, 0, 0));
  EXPECT_EQ(undirect(down).direction().vec(), Vec3(0, 0, 1));
  EXPECT_EQ(undirect(down).foot(), Vec3(1, 0, 0));
  const DirectedLine flat_y(UnitVector3(0, -1, 0), Vec3(0, 0, 2));
  EXPECT_EQ(undirect(flat_y).direction().vec(), Vec3(0, 1, 0));
  const DirectedLine flat_x(UnitVector3(-1, 0, 0), Vec3(0, 3, 0));
  EXPECT_EQ(undirect(flat_x).direction().vec(), Vec3(1, 0, 0));
  RngStream rng = make_rng(3);
  for (int i = 0; i < 1000; ++i) {
    const DirectedLine l = random_line(rng);
    EXPECT_TRUE(lines_equal(undirect(l), undirect(l.flipped()), true));
    EXPECT_TRUE(lines_equal(l, l.flipped(), false));
    EXPECT_FALSE(lines_equal(l, l.flipped(), true));
  }
}

TEST(LinespaceTest, LinesEqualTolerance) {
  const DirectedLine a(UnitVector3::e_z(), Vec3(1, 0, 0));
  const DirectedLine b(UnitVector3::e_z(), Vec3(1 + 5e-10, 0, 0));
  const DirectedLine c(UnitVector3::e_z(), Vec3(1 + 1e-7, 0, 0));
  EXPECT_TRUE(lines_equal(a, b, true));
  EXPECT_FALSE(lines_equal(a, c, true));
}

TEST(LinespaceTest, PointAtAndDistance) {
  const DirectedLine dl(UnitVector3::e_x(), Vec3(0, 2, 0));
  EXPECT_EQ(point_at(dl, 3.0), Vec3(3, 2, 0));
  EXPECT_DOUBLE_EQ(distance_to_line(dl, Vec3(10, 2, 5)), 5.0);
  EXPECT_DOUBLE_EQ(distance_to_line(dl, Vec3::Zero()), 2.0);
}

TEST(LinespaceTest, RotateIsRigid) {
  RngStream rng = make_rng(4);
  for (int i = 0; i < 1000; ++i) {
    const DirectedLine l = random_line(rng);
    const Rotation3 r = sample_rotation(rng);
    const DirectedLine moved = rotate(r, l);
    EXPECT_NEAR(moved.foot().norm(), l.foot().norm(), 1e-12);
    EXPECT_LE(std::abs(moved.direction().dot(moved.foot())), 1e-12);
    EXPECT_TRUE(lines_equal(rotate(r.inverse(), moved), l, true));
  }
}

TEST(LinespaceTest, CsvRoundTripIsExact) {
  RngStream rng = make_rng(5);
  std::vector<DirectedLine> lines;
  for (int i = 0; i < 200; ++i) lines.push_back(random_line(rng));
  std::stringstream buf;
  write_lines_csv(buf, lines);
  std::string first;
  std::getline(buf, first);
  EXPECT_EQ(first, kLineCsvHeader);
  buf.seekg(0);
  const std::vector<DirectedLine> back = read_lines_csv(buf);
  ASSERT_EQ(back.size(), lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    EXPECT_EQ(back[i].direction().vec(), lines[i].direction().vec());
    EXPECT_EQ(back[i].foot(), lines[i].foot());
  }
}

TEST(LinespaceTest, CsvSkipsCommentsAndRejectsBadRows) {
  std::istringstream ok("# note\nux,uy,uz,qx,qy,qz\n0,0,1,1,2,0\n\n");
  const auto lines = read_lines_csv(ok);
  ASSERT_EQ(lines.size(), 1u);
  EXPECT_EQ(lines[0].foot(), Vec3(1, 2, 0));
  std::istringstream short_row("0,0,1,1,2\n");
  EXPECT_EQ(kind_of([&] { read_lines_csv(short_row); }), ErrorKind::InvalidArgument);
  std::istringstream long_row("0,0,1,1,2,0,9\n");
  EXPECT_EQ(kind_of([&] { read_lines_csv(long_row); }), ErrorKind::InvalidArgument);
  std::istringstream junk("0,0,one,1,2,0\n");
  EXPECT_EQ(kind_of([&] { read_lines_csv(junk); }), ErrorKind::InvalidArgument);
  // Hand-written records are normalized; a zero direction is refused.
  std::istringstream not_unit("0,0,2,1,2,0\n");
  EXPECT_EQ(read_lines_csv(not_unit)[0].direction().vec(), Vec3(0, 0, 1));
  std::istringstream zero("0,0,0,1,2,0\n");
  EXPECT_THROW(read_lines_csv(zero), Error);
}

TEST(LinespaceTest, FormatDoubleIsLossless) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
}

}  // namespace
}  // namespace fiberline
