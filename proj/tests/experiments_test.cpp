#include "fiberline/experiments.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

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

TEST(ExperimentsTest, BertrandAnalyticMatchesQuadrature) {
  EXPECT_NEAR(bertrand_analytic(BertrandMethod::Endpoints), oracle::bertrand_endpoints_probability(), 1e-5);
  EXPECT_NEAR(bertrand_analytic(BertrandMethod::Radial), oracle::bertrand_radial_probability(), 1e-5);
  EXPECT_NEAR(bertrand_analytic(BertrandMethod::Midpoint), oracle::bertrand_midpoint_probability(), 5e-5);
  EXPECT_DOUBLE_EQ(bertrand_analytic(BertrandMethod::Endpoints), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(bertrand_analytic(BertrandMethod::Radial), 0.5);
  EXPECT_DOUBLE_EQ(bertrand_analytic(BertrandMethod::Midpoint), 0.25);
  EXPECT_DOUBLE_EQ(bertrand_analytic(BertrandMethod::LineMeasure), 0.5);
}

TEST(ExperimentsTest, BertrandNames) {
  for (auto m : {BertrandMethod::Endpoints, BertrandMethod::Radial, BertrandMethod::Midpoint,
                 BertrandMethod::LineMeasure}) {
    EXPECT_EQ(parse_bertrand_method(to_string(m)), m);
  }
  EXPECT_EQ(kind_of([] { parse_bertrand_method("uniform"); }), ErrorKind::InvalidArgument);
}

TEST(ExperimentsTest, BertrandEstimates) {
  RngStream root = make_rng(1);
  std::uint64_t k = 0;
  for (auto m : {BertrandMethod::Endpoints, BertrandMethod::Radial, BertrandMethod::Midpoint,
                 BertrandMethod::LineMeasure}) {
    RngStream rng = root.split(++k);
    const Estimate e = bertrand_experiment(rng, m, 200'000);
    EXPECT_NEAR(e.mean, bertrand_analytic(m), 4 * e.std_error) << to_string(m);
  }
}

TEST(ExperimentsTest, BertrandChordsStayInRange) {
  RngStream rng = make_rng(2);
  for (auto m : {BertrandMethod::Endpoints, BertrandMethod::Radial, BertrandMethod::Midpoint,
                 BertrandMethod::LineMeasure}) {
    for (int i = 0; i < 10'000; ++i) {
      const double c = bertrand_chord(rng, m);
      ASSERT_GE(c, 0.0);
      ASSERT_LE(c, 2.0);
    }
  }
}

TEST(ExperimentsTest, CauchyOracle) {
  const CauchyOracle ball = cauchy_oracle(4.0 / 3.0 * kPi, 4.0 * kPi, 2.0);
  EXPECT_DOUBLE_EQ(ball.hit_rate, 0.25);
  EXPECT_DOUBLE_EQ(ball.mean_chord, 4.0 / 3.0);
  EXPECT_DOUBLE_EQ(cauchy_oracle(6.0, 22.0, 1.0).mean_chord, 24.0 / 22.0);
}

TEST(ExperimentsTest, MeanChordSmallScale) {
  RngStream rng = make_rng(3);
  const ConvexBody box = ConvexBody::box(Vec3(-0.5, -1, -1.5), Vec3(0.5, 1, 1.5));
  const double radius = std::sqrt(14.0) / 2.0;
  const MeanChordResult r = mean_chord_experiment(rng, box, 200'000, radius);
  const CauchyOracle o = cauchy_oracle(volume(box), surface_area(box), radius);
  EXPECT_NEAR(r.mean_chord_given_hit.mean, o.mean_chord, 4 * r.mean_chord_given_hit.std_error);
  EXPECT_NEAR(r.hit_rate.mean, o.hit_rate, 4 * r.hit_rate.std_error);
}

TEST(ExperimentsTest, MeanChordErrors) {
  RngStream rng = make_rng(4);
  const ConvexBody ball = ConvexBody::ball(Vec3::Zero(), 1.0);
  EXPECT_EQ(kind_of([&] { mean_chord_experiment(rng, ball, 10, 0.5); }), ErrorKind::InsufficientRadius);
  EXPECT_EQ(kind_of([&] { summarize(MeanChordTally{}); }), ErrorKind::NoHits);
}

TEST(ExperimentsTest, ShardedExperimentIsDeterministic) {
  const RngStream root = make_rng(5);
  const ConvexBody ball = ConvexBody::ball(Vec3::Zero(), 1.0);
  auto shard = [&](RngStream& rng, std::uint64_t count) {
    return mean_chord_tally(rng, ball, count, 2.0, true);
  };
  const auto a = run_sharded<MeanChordTally>(root, 50'001, 3, shard);
  const auto b = run_sharded<MeanChordTally>(root, 50'001, 3, shard);
  EXPECT_EQ(a.hit_chords, b.hit_chords);
  EXPECT_EQ(a.chord.mean(), b.chord.mean());
  EXPECT_EQ(a.hit.count(), 50'001u);
}

TEST(ExperimentsTest, SlopeWindowCoversBallShadow) {
  // Every line meeting the radius-2 ball has (p, q) inside the proposal window.
  RngStream rng = make_rng(6);
  for (int i = 0; i < 100'000; ++i) {
    const SlopeSample s = sample_slope_line(rng, SlopeProposal::Hemisphere);
    const Vec3 x = 2.0 * sample_unit_ball(rng);
    const double a = s.line.a, b = s.line.b, slope = std::hypot(a, b);
    const Vec2 pq(x.x() - a * x.z(), x.y() - b * x.z());
    const Vec2 along = slope > 0 ? Vec2(a / slope, b / slope) : Vec2(1, 0);
    const Vec2 across(-along.y(), along.x());
    ASSERT_LE(std::abs(pq.dot(along)), 2.0 * (1.0 + slope));
    ASSERT_LE(std::abs(pq.dot(across)), 2.0);
  }
}

TEST(ExperimentsTest, SlopeWeightsMatchProposal) {
  RngStream rng = make_rng(7);
  for (auto proposal : {SlopeProposal::Hemisphere, SlopeProposal::Target}) {
    for (int i = 0; i < 1000; ++i) {
      const SlopeSample s = sample_slope_line(rng, proposal);
      const double w = 1.0 + s.line.a * s.line.a + s.line.b * s.line.b;
      const double expected = proposal == SlopeProposal::Hemisphere ? 2 * kPi / std::sqrt(w) : kPi;
      ASSERT_NEAR(s.slope_weight, expected, 1e-12 * expected);
    }
  }
}

// Mean chord of the 1×2×3 box from slope-chart lines whose invariant weight
// carries the exponent -2 + extra.
Estimate box_slope_estimate(RngStream& rng, double extra, int n) {
  const ConvexBody box = ConvexBody::box(Vec3(-0.5, -1, -1.5), Vec3(0.5, 1, 1.5));
  WeightedStats w;
  for (int i = 0; i < n; ++i) {
    const SlopeSample s = sample_slope_line(rng, SlopeProposal::Hemisphere);
    const double c = chord(box, slope_to_directed(s.line));
    const double g = 1.0 + s.line.a * s.line.a + s.line.b * s.line.b;
    if (c > 0.0) w.add(c, s.weight * std::pow(g, extra));
  }
  return w.estimate();
}

TEST(ExperimentsTest, SlopeEstimatorNeedsTheInvariantExponent) {
  RngStream rng = make_rng(8);
  const Estimate right = box_slope_estimate(rng, 0.0, 300'000);
  EXPECT_NEAR(right.mean, 24.0 / 22.0, 4 * right.std_error);
  // Exponent -5/2 tilts directions by |u_z|. The mean chord becomes
  // V / E[A(u) |u_z|] * E[|u_z|] with A the projected area of the box.
  const Estimate wrong = box_slope_estimate(rng, -0.5, 300'000);
  const double tilted = 6.0 / (2.0 * (2.0 / 3.0) + 9.0 * (4.0 / (3.0 * kPi)));
  EXPECT_NEAR(wrong.mean, tilted, 4 * wrong.std_error);
  EXPECT_GT(std::abs(wrong.mean - 24.0 / 22.0), 6 * wrong.std_error);
}

TEST(ExperimentsTest, SlopeImportanceSmallScale) {
  for (auto proposal : {SlopeProposal::Hemisphere, SlopeProposal::Target}) {
    RngStream rng = make_rng(9);
    const SlopeImportanceResult r = slope_importance_experiment(rng, 200'000, proposal);
    EXPECT_NEAR(r.mean_chord.mean, 4.0 / 3.0, 4 * r.mean_chord.std_error);
    EXPECT_GT(r.effective_sample_size, 1000.0);
  }
  RngStream rng = make_rng(9);
  EXPECT_GT(slope_importance_experiment(rng, 10'000, SlopeProposal::Hemisphere).slope_weight_variance,
            0.0);
  EXPECT_LT(slope_importance_experiment(rng, 10'000, SlopeProposal::Target).slope_weight_variance,
            1e-20);
}

TEST(ExperimentsTest, GaugeAuditIsExactForTheTrueAction) {
  RngStream rng = make_rng(10);
  const LineDensity d = tilt_density(2.0, UnitVector3::e_z(), 2.0);
  const ConvexBody ball = ConvexBody::ball(Vec3::Zero(), 1.0);
  const GaugeAuditResult r =
      gauge_audit(rng, d, [&](const DirectedLine& l) { return chord(ball, l); }, 20'000);
  EXPECT_LE(r.max_line_deviation, 1e-10);
  EXPECT_LE(std::abs(r.baseline.mean - r.shifted.mean), 1e-10);
  EXPECT_LE(std::abs(r.difference.mean), 1e-10);
}

LineDensity offset_density(double radius) {
  return density_from_line(
      [radius](const DirectedLine& l) { return 0.5 * (1.0 + l.foot().x() / radius); }, 1.0, radius,
      "offset");
}

TEST(ExperimentsTest, GaugeAuditDetectsBrokenAction) {
  RngStream rng = make_rng(11);
  const auto foot_x = [](const DirectedLine& l) { return l.foot().x(); };
  const GaugeAuditResult good = gauge_audit(rng, offset_density(1.0), foot_x, 50'000);
  EXPECT_LE(std::abs(good.difference.mean), 1e-10);
  // E[foot_x] under density ∝ 1 + foot_x on the disk feet: (1/R) E[x²] = 1/6.
  EXPECT_NEAR(good.baseline.mean, 1.0 / 6.0, 4 * good.baseline.std_error);
  const GaugeAuditResult bad =
      gauge_audit(rng, offset_density(1.0), foot_x, 50'000, negative_control::broken_act);
  EXPECT_GT(std::abs(bad.difference.mean), 3 * bad.difference.std_error);
  EXPECT_GT(bad.max_line_deviation, 0.1);
}

TEST(ExperimentsTest, HaarDiagnosticsPass) {
  RngStream rng = make_rng(12);
  const HaarDiagnostics d = haar_diagnostics(rng, 100'000, 20);
  EXPECT_GT(d.angle_ks.p_value, 1e-3);
  EXPECT_GT(d.pushforward_chi2.p_value, 1e-3);
  EXPECT_GT(d.pushforward_z_ks.p_value, 1e-3);
  EXPECT_GT(d.hopf_z_ks.p_value, 1e-3);
  EXPECT_GT(d.sphere3_w_ks.p_value, 1e-3);
  EXPECT_GT(d.left_invariance_ks.p_value, 1e-3);
  EXPECT_EQ(d.angle_histogram.size(), 20u);
}

TEST(ExperimentsTest, HaarCdfsMatchQuadrature) {
  const oracle::TabulatedCdf angle(oracle::haar_angle_density, 0.0, kPi);
  const oracle::TabulatedCdf w(oracle::sphere3_coordinate_density, -1.0, 1.0);
  for (double t = 0.0; t <= kPi; t += 0.1) EXPECT_NEAR(haar_angle_cdf(t), angle(t), 1e-8);
  for (double x = -1.0; x <= 1.0; x += 0.05) EXPECT_NEAR(sphere3_coordinate_cdf(x), w(x), 1e-6);
}

TEST(ExperimentsTest, Histogram) {
  const std::vector<double> xs = {-1.0, 0.0, 0.49, 0.5, 0.99, 1.0, 2.0};
  EXPECT_EQ(histogram(xs, 0.0, 1.0, 2), (std::vector<std::uint64_t>{3, 4}));
}

TEST(ExperimentsTest, CosineSourceMatchesIsotropicChords) {
  RngStream rng = make_rng(13);
  const auto cosine = cosine_source_chords(rng, 100'000, 1.0);
  const ConvexBody ball = ConvexBody::ball(Vec3::Zero(), 1.0);
  std::vector<double> iso;
  while (iso.size() < 100'000) {
    const double c = chord(ball, sample_isotropic(rng, 1.0));
    if (c > 0.0) iso.push_back(c);
  }
  EXPECT_GT(ks_two_sample(cosine, iso).p_value, 1e-3);
  EXPECT_GT(ks_test(cosine, [](double c) { return std::clamp(c * c / 4.0, 0.0, 1.0); }).p_value, 1e-3);
}

}  // namespace
}  // namespace fiberline
