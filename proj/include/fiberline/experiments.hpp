#pragma once

#include <cstdint>
#include <functional>
#include <string_view>
#include <thread>
#include <vector>

#include "fiberline/bundle.hpp"
#include "fiberline/geometry.hpp"
#include "fiberline/haar.hpp"
#include "fiberline/linespace.hpp"
#include "fiberline/randkit.hpp"
#include "fiberline/stats.hpp"

namespace fiberline {

// ---------------------------------------------------------------------------
// Sharding

/// Runs `fn(stream, count)` on `shards` child streams split(root, i), each
/// taking n/shards draws (the first n % shards shards take one more), on one
/// thread per shard, and merges the tallies in stream-id order. The result
/// is a deterministic function of (root seed, root stream, n, shards).
template <class Tally, class Fn>
Tally run_sharded(const RngStream& root, std::uint64_t n, unsigned shards, Fn fn) {
  if (shards == 0) shards = 1;
  std::vector<Tally> parts(shards);
  auto work = [&](unsigned i) {
    RngStream stream = root.split(i);
    const std::uint64_t count = n / shards + (i < n % shards ? 1 : 0);
    parts[i] = fn(stream, count);
  };
  if (shards == 1) {
    work(0);
  } else {
    std::vector<std::thread> workers;
    workers.reserve(shards);
    for (unsigned i = 0; i < shards; ++i) workers.emplace_back(work, i);
    for (auto& w : workers) w.join();
  }
  Tally total = std::move(parts[0]);
  for (unsigned i = 1; i < shards; ++i) total.merge(parts[i]);
  return total;
}

// ---------------------------------------------------------------------------
// Bertrand's chord problem on the unit circle

enum class BertrandMethod { Endpoints, Radial, Midpoint, LineMeasure };

/// Accepts endpoints | radial | midpoint | line-measure.
BertrandMethod parse_bertrand_method(std::string_view name);
std::string_view to_string(BertrandMethod method);

/// Classical value of P(chord > √3) under each chord model.
double bertrand_analytic(BertrandMethod method);

/// One random chord length of the unit circle.
double bertrand_chord(RngStream& rng, BertrandMethod method);

/// Indicator tally of chord > √3 over n chords.
RunningStats bertrand_tally(RngStream& rng, BertrandMethod method, std::uint64_t n);
Estimate bertrand_experiment(RngStream& rng, BertrandMethod method, std::uint64_t n);

// ---------------------------------------------------------------------------
// Mean chord of convex bodies under isotropic uniform lines

struct MeanChordTally {
  RunningStats hit;    ///< indicator of chord > 0
  RunningStats chord;  ///< chord length over hits
  std::vector<double> hit_chords;

  void merge(const MeanChordTally& other);
};

struct MeanChordResult {
  Estimate hit_rate;
  Estimate mean_chord_given_hit;
};

/// Limits for isotropic lines with feet in a disk of radius R: hit rate
/// S/(4πR²) and mean chord 4V/S.
struct CauchyOracle {
  double hit_rate;
  double mean_chord;
};
CauchyOracle cauchy_oracle(double volume, double area, double radius);

/// Throws InsufficientRadius when R < bounding_radius(body).
MeanChordTally mean_chord_tally(RngStream& rng, const ConvexBody& body, std::uint64_t n,
                                double radius, bool keep_chords = false);
/// Throws InsufficientRadius, or NoHits when no line meets the body.
MeanChordResult summarize(const MeanChordTally& tally);
MeanChordResult mean_chord_experiment(RngStream& rng, const ConvexBody& body, std::uint64_t n,
                                      double radius);

// ---------------------------------------------------------------------------
// Slope-chart importance sampling

enum class SlopeProposal {
  /// Direction uniform on the upper hemisphere; density on (a, b) is
  /// (1/2π)(1 + a² + b²)^-3/2.
  Hemisphere,
  /// (a, b) drawn from the normalized invariant density (1/π)(1 + a² + b²)^-2.
  Target,
};

struct SlopeSample {
  SlopeLine line;
  double slope_weight;  ///< invariant weight / (a, b) proposal density
  double weight;        ///< slope_weight / (p, q) proposal density
};

/// (p, q) is uniform on the rectangle centered at the origin with half-width
/// 2(1 + |(a, b)|) along (a, b) and 2 across it. That rectangle contains the
/// z = 0 shadow of the radius-2 ball for every slope.
SlopeSample sample_slope_line(RngStream& rng, SlopeProposal proposal);

struct SlopeImportanceResult {
  Estimate mean_chord;  ///< self-normalized, over hits of the unit ball
  double effective_sample_size = 0.0;
  std::uint64_t hits = 0;
  double slope_weight_variance = 0.0;  ///< variance of slope weights / their mean
  WeightedStats hit_chords;
};

/// Mean chord of the unit ball from the slope chart with invariant weights.
/// Throws NoHits, or DegenerateWeights when the hit ESS is below n/1000.
SlopeImportanceResult slope_importance_experiment(RngStream& rng, std::uint64_t n,
                                                  SlopeProposal proposal = SlopeProposal::Hemisphere);

// ---------------------------------------------------------------------------
// Gauge audit

using LineEstimator = std::function<double(const DirectedLine&)>;

struct GaugeAuditResult {
  Estimate baseline;
  Estimate shifted;
  Estimate difference;  ///< paired per-sample difference
  double max_line_deviation = 0.0;
  RejectionTally tally;
};

/// Draws n bundle points and evaluates the estimator on the projected line of
/// each point and of its image under `action` with a fresh uniform angle.
GaugeAuditResult gauge_audit(RngStream& rng, const LineDensity& d, const LineEstimator& estimator,
                             std::uint64_t n, const GaugeAction& action = act);

namespace negative_control {
/// (g R_z(h), R_z(h) r): the gauge action with h⁻¹ replaced by h on the
/// fiber. Not an action on the quotient; used only to show the audit fails.
BundlePoint broken_act(double h, const BundlePoint& pt);
}  // namespace negative_control

// ---------------------------------------------------------------------------
// Haar diagnostics

/// CDF of the rotation angle of a Haar rotation, (θ − sin θ)/π on [0, π].
double haar_angle_cdf(double theta);
/// CDF of one coordinate of a uniform point on S³ (density (2/π)√(1−w²)).
double sphere3_coordinate_cdf(double w);
/// CDF of U[-1, 1].
double uniform_pm1_cdf(double z);

struct HaarDiagnostics {
  TestReport angle_ks;            ///< rotation angle vs (1 − cos θ)/π
  TestReport pushforward_chi2;    ///< R e_z in equal-area bands
  TestReport pushforward_z_ks;    ///< (R e_z)_z vs U[-1, 1]
  TestReport hopf_z_ks;           ///< hopf_map of uniform S³, z vs U[-1, 1]
  TestReport sphere3_w_ks;        ///< w of uniform S³ vs its marginal
  TestReport left_invariance_ks;  ///< trace(Q R) vs trace(R), two-sample
  std::vector<std::uint64_t> angle_histogram;
  std::vector<std::uint64_t> z_histogram;
};

HaarDiagnostics haar_diagnostics(RngStream& rng, std::uint64_t n, int bins = 20);

std::vector<std::uint64_t> histogram(std::span<const double> xs, double lo, double hi, int bins);

/// Chord lengths through the ball of radius R of n cosine-source lines.
std::vector<double> cosine_source_chords(RngStream& rng, std::uint64_t n, double radius);

}  // namespace fiberline
