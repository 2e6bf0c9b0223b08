#include "fiberline/experiments.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fiberline/error.hpp"

namespace fiberline {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

// ---------------------------------------------------------------------------
// Bertrand

BertrandMethod parse_bertrand_method(std::string_view name) {
  if (name == "endpoints") return BertrandMethod::Endpoints;
  if (name == "radial") return BertrandMethod::Radial;
  if (name == "midpoint") return BertrandMethod::Midpoint;
  if (name == "line-measure") return BertrandMethod::LineMeasure;
  throw Error(ErrorKind::InvalidArgument, "unknown Bertrand method '" + std::string(name) + "'");
}

std::string_view to_string(BertrandMethod method) {
  switch (method) {
    case BertrandMethod::Endpoints: return "endpoints";
    case BertrandMethod::Radial: return "radial";
    case BertrandMethod::Midpoint: return "midpoint";
    case BertrandMethod::LineMeasure: return "line-measure";
  }
  return "unknown";
}

double bertrand_analytic(BertrandMethod method) {
  switch (method) {
    case BertrandMethod::Endpoints: return 1.0 / 3.0;
    case BertrandMethod::Radial: return 0.5;
    case BertrandMethod::Midpoint: return 0.25;
    case BertrandMethod::LineMeasure: return 0.5;
  }
  return 0.0;
}

double bertrand_chord(RngStream& rng, BertrandMethod method) {
  switch (method) {
    case BertrandMethod::Endpoints: {
      const double t1 = rng.uniform(0.0, kTwoPi);
      const double t2 = rng.uniform(0.0, kTwoPi);
      return std::hypot(std::cos(t1) - std::cos(t2), std::sin(t1) - std::sin(t2));
    }
    case BertrandMethod::Radial: {
      // Midpoint uniform along a uniformly oriented radius; the orientation
      // does not affect the length.
      rng.uniform(0.0, kTwoPi);
      const double d = rng.uniform01();
      return 2.0 * std::sqrt(1.0 - d * d);
    }
    case BertrandMethod::Midpoint: {
      for (;;) {
        const double x = rng.uniform(-1.0, 1.0);
        const double y = rng.uniform(-1.0, 1.0);
        const double d2 = x * x + y * y;
        if (d2 < 1.0) return 2.0 * std::sqrt(1.0 - d2);
      }
    }
    case BertrandMethod::LineMeasure: {
      // Kinematic measure dφ ds on lines {x : x·(cos φ, sin φ) = s},
      // conditioned on meeting the circle.
      for (;;) {
        rng.uniform(0.0, std::numbers::pi);
        const double s = rng.uniform(-1.0, 1.0);
        if (std::abs(s) < 1.0) return 2.0 * std::sqrt(1.0 - s * s);
      }
    }
  }
  return 0.0;
}

RunningStats bertrand_tally(RngStream& rng, BertrandMethod method, std::uint64_t n) {
  const double side = std::sqrt(3.0);
  RunningStats stats;
  for (std::uint64_t i = 0; i < n; ++i) stats.add(bertrand_chord(rng, method) > side ? 1.0 : 0.0);
  return stats;
}

Estimate bertrand_experiment(RngStream& rng, BertrandMethod method, std::uint64_t n) {
  if (n < 1) throw Error(ErrorKind::TooFewSamples, "n must be >= 1");
  return bertrand_tally(rng, method, n).estimate();
}

// ---------------------------------------------------------------------------
// Mean chord

void MeanChordTally::merge(const MeanChordTally& other) {
  hit.merge(other.hit);
  chord.merge(other.chord);
  hit_chords.insert(hit_chords.end(), other.hit_chords.begin(), other.hit_chords.end());
}

CauchyOracle cauchy_oracle(double volume, double area, double radius) {
  return {area / (4.0 * std::numbers::pi * radius * radius), 4.0 * volume / area};
}

MeanChordTally mean_chord_tally(RngStream& rng, const ConvexBody& body, std::uint64_t n,
                                double radius, bool keep_chords) {
  const double needed = bounding_radius(body);
  if (!(radius >= needed)) {
    throw Error(ErrorKind::InsufficientRadius, "radius " + format_double(radius) +
                                                   " below bounding radius " + format_double(needed));
  }
  MeanChordTally tally;
  for (std::uint64_t i = 0; i < n; ++i) {
    const double c = chord(body, sample_isotropic(rng, radius));
    tally.hit.add(c > 0.0 ? 1.0 : 0.0);
    if (c > 0.0) {
      tally.chord.add(c);
      if (keep_chords) tally.hit_chords.push_back(c);
    }
  }
  return tally;
}

MeanChordResult summarize(const MeanChordTally& tally) {
  if (tally.chord.count() == 0) throw Error(ErrorKind::NoHits, "no sampled line met the body");
  return {tally.hit.estimate(), tally.chord.estimate()};
}

MeanChordResult mean_chord_experiment(RngStream& rng, const ConvexBody& body, std::uint64_t n,
                                      double radius) {
  return summarize(mean_chord_tally(rng, body, n, radius));
}

// ---------------------------------------------------------------------------
// Slope chart

SlopeSample sample_slope_line(RngStream& rng, SlopeProposal proposal) {
  double a = 0.0, b = 0.0, density_ab = 0.0;
  if (proposal == SlopeProposal::Hemisphere) {
    for (;;) {
      const UnitVector3 u = sample_sphere2(rng);
      const double uz = std::abs(u.z());
      if (uz <= 1e-9) continue;
      a = u.x() / uz;
      b = u.y() / uz;
      break;
    }
    const double s = 1.0 + a * a + b * b;
    density_ab = 1.0 / (kTwoPi * s * std::sqrt(s));
  } else {
    // Radial CDF of (1/π)(1+r²)^-2 r dr dφ is r²/(1+r²).
    const double v = rng.uniform01();
    const double r = std::sqrt(v / (1.0 - v));
    const double phi = rng.uniform(0.0, kTwoPi);
    a = r * std::cos(phi);
    b = r * std::sin(phi);
    const double s = 1.0 + a * a + b * b;
    density_ab = 1.0 / (std::numbers::pi * s * s);
  }

  const double slope = std::hypot(a, b);
  const Vec2 along = slope > 0.0 ? Vec2(a / slope, b / slope) : Vec2(1.0, 0.0);
  const Vec2 across(-along.y(), along.x());
  const double half_along = 2.0 * (1.0 + slope);
  const double half_across = 2.0;
  const Vec2 pq = rng.uniform(-half_along, half_along) * along +
                  rng.uniform(-half_across, half_across) * across;
  const double density_pq = 1.0 / (4.0 * half_along * half_across);

  const SlopeLine line{a, b, pq.x(), pq.y()};
  const double slope_weight = slope_measure_weight(line) / density_ab;
  return {line, slope_weight, slope_weight / density_pq};
}

SlopeImportanceResult slope_importance_experiment(RngStream& rng, std::uint64_t n,
                                                  SlopeProposal proposal) {
  const ConvexBody ball = ConvexBody::ball(Vec3::Zero(), 1.0);
  SlopeImportanceResult result;
  RunningStats slope_weights;
  for (std::uint64_t i = 0; i < n; ++i) {
    const SlopeSample s = sample_slope_line(rng, proposal);
    slope_weights.add(s.slope_weight);
    const double c = chord(ball, slope_to_directed(s.line));
    if (c > 0.0) result.hit_chords.add(c, s.weight);
  }
  result.hits = result.hit_chords.count();
  if (result.hits == 0) throw Error(ErrorKind::NoHits, "no slope-chart line met the unit ball");
  result.effective_sample_size = result.hit_chords.effective_sample_size();
  if (result.effective_sample_size < static_cast<double>(n) / 1000.0) {
    throw Error(ErrorKind::DegenerateWeights,
                "effective sample size " + format_double(result.effective_sample_size));
  }
  result.mean_chord = result.hit_chords.estimate();
  const double m = slope_weights.mean();
  result.slope_weight_variance = slope_weights.variance() / (m * m);
  return result;
}

// ---------------------------------------------------------------------------
// Gauge audit

GaugeAuditResult gauge_audit(RngStream& rng, const LineDensity& d, const LineEstimator& estimator,
                             std::uint64_t n, const GaugeAction& action) {
  GaugeAuditResult result;
  RunningStats base, shifted, diff;
  for (std::uint64_t i = 0; i < n; ++i) {
    const BundlePoint pt = sample_bundle(rng, d, &result.tally);
    const double h = rng.uniform(0.0, kTwoPi);
    const DirectedLine l0 = project_to_line(pt);
    const DirectedLine l1 = project_to_line(action(h, pt));
    result.max_line_deviation =
        std::max({result.max_line_deviation,
                  (l0.direction().vec() - l1.direction().vec()).cwiseAbs().maxCoeff(),
                  (l0.foot() - l1.foot()).cwiseAbs().maxCoeff()});
    const double e0 = estimator(l0);
    const double e1 = estimator(l1);
    base.add(e0);
    shifted.add(e1);
    diff.add(e1 - e0);
  }
  result.baseline = base.estimate();
  result.shifted = shifted.estimate();
  result.difference = diff.estimate();
  return result;
}

namespace negative_control {
BundlePoint broken_act(double h, const BundlePoint& pt) {
  const double c = std::cos(h);
  const double s = std::sin(h);
  const Vec2 r(c * pt.r.x() - s * pt.r.y(), s * pt.r.x() + c * pt.r.y());
  return {pt.g * Rotation3::about_z(h), r};
}
}  // namespace negative_control

// ---------------------------------------------------------------------------
// Haar diagnostics

double haar_angle_cdf(double theta) {
  if (theta <= 0.0) return 0.0;
  if (theta >= std::numbers::pi) return 1.0;
  return (theta - std::sin(theta)) / std::numbers::pi;
}

double sphere3_coordinate_cdf(double w) {
  if (w <= -1.0) return 0.0;
  if (w >= 1.0) return 1.0;
  return 0.5 + (w * std::sqrt(1.0 - w * w) + std::asin(w)) / std::numbers::pi;
}

double uniform_pm1_cdf(double z) { return std::clamp((z + 1.0) / 2.0, 0.0, 1.0); }

std::vector<std::uint64_t> histogram(std::span<const double> xs, double lo, double hi, int bins) {
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(bins), 0);
  for (double x : xs) {
    const int k = static_cast<int>((x - lo) / (hi - lo) * bins);
    ++counts[static_cast<std::size_t>(std::clamp(k, 0, bins - 1))];
  }
  return counts;
}

HaarDiagnostics haar_diagnostics(RngStream& rng, std::uint64_t n, int bins) {
  const Rotation3 fixed = quat_to_rotation(UnitQuaternion{0.5, 0.5, -0.5, 0.5});
  std::vector<double> angles, zs, hopf_z, ws, traces, fixed_traces;
  std::vector<Vec3> pushed;
  for (std::uint64_t i = 0; i < n; ++i) {
    const Rotation3 r = sample_rotation(rng);
    angles.push_back(r.angle());
    pushed.push_back(r.column(2));
    zs.push_back(r.column(2).z());
    fixed_traces.push_back((fixed * r).trace());
  }
  for (std::uint64_t i = 0; i < n; ++i) traces.push_back(sample_rotation(rng).trace());
  for (std::uint64_t i = 0; i < n; ++i) {
    const UnitQuaternion q = sample_sphere3(rng);
    ws.push_back(q.w);
    hopf_z.push_back(hopf_map(q).z());
  }
  HaarDiagnostics d;
  d.angle_ks = ks_test(angles, haar_angle_cdf);
  d.pushforward_chi2 = chi2_isotropy(std::span<const Vec3>(pushed), bins);
  d.pushforward_z_ks = ks_test(zs, uniform_pm1_cdf);
  d.hopf_z_ks = ks_test(hopf_z, uniform_pm1_cdf);
  d.sphere3_w_ks = ks_test(ws, sphere3_coordinate_cdf);
  d.left_invariance_ks = ks_two_sample(fixed_traces, traces);
  d.angle_histogram = histogram(angles, 0.0, std::numbers::pi, bins);
  d.z_histogram = histogram(zs, -1.0, 1.0, bins);
  return d;
}

std::vector<double> cosine_source_chords(RngStream& rng, std::uint64_t n, double radius) {
  const ConvexBody ball = ConvexBody::ball(Vec3::Zero(), radius);
  std::vector<double> chords;
  chords.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) chords.push_back(chord(ball, sample_cosine_surface(rng, radius)));
  return chords;
}

}  // namespace fiberline
