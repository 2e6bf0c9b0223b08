#include "fiberline/cli.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fiberline/bundle.hpp"
#include "fiberline/experiments.hpp"
#include "fiberline/linespace.hpp"
#include "fiberline/randkit.hpp"
#include "fiberline/stats.hpp"

#ifndef FIBERLINE_VERSION
#define FIBERLINE_VERSION "0.0.0"
#endif

namespace fiberline::cli {
namespace {

using json = nlohmann::ordered_json;

constexpr double kPvalueFloor = 1e-3;
constexpr double kSigmaBand = 3.0;
constexpr double kGaugeTol = 1e-10;

// Flags shared by every subcommand.
struct Common {
  std::uint64_t seed = 0;
  std::uint64_t n = 0;
  unsigned threads = 1;
  bool timestamp = false;
  std::string command_line;
};

struct DensityFlags {
  std::string density = "uniform";
  double kappa = 2.0;
  double sigma = 1.0;
  std::string axis = "0,0,1";
};

struct SampleFlags {
  double radius = 1.0;
  std::string format = "csv";
  std::string out;
  std::string source = "isotropic";
  std::string manifest;
  DensityFlags density;
};

struct BertrandFlags {
  std::string method = "all";
};

struct ChordFlags {
  std::string body;
  std::optional<double> radius;
  std::string lines;
  bool expect_hit = false;
  std::optional<double> volume;
  std::optional<double> area;
};

struct HaarFlags {
  int bins = 20;
};

struct GaugeFlags {
  double radius = 1.0;
  std::string estimator = "chord";
  bool broken = false;
  DensityFlags density;
};

struct SlopeFlags {
  std::string proposal = "hemisphere";
};

std::vector<double> parse_numbers(std::string_view text, std::size_t expected, const char* what) {
  std::vector<double> values;
  std::string cell;
  std::istringstream in{std::string(text)};
  while (std::getline(in, cell, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(cell, &used));
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidArgument, std::string("bad number in ") + what + ": '" + cell + "'");
    }
  }
  if (values.size() != expected) {
    throw Error(ErrorKind::InvalidArgument, std::string(what) + " expects " +
                                                std::to_string(expected) + " comma-separated numbers");
  }
  return values;
}

UnitVector3 parse_axis(const std::string& text) {
  const auto v = parse_numbers(text, 3, "--axis");
  return UnitVector3::normalized(Vec3(v[0], v[1], v[2]));
}

LineDensity make_density(const DensityFlags& f, double radius) {
  if (f.density == "uniform") return uniform_density(radius);
  if (f.density == "tilt") return tilt_density(f.kappa, parse_axis(f.axis), radius);
  if (f.density == "radial") return radial_density(f.sigma, radius);
  if (f.density == "tilt-radial") {
    return tilt_radial_density(f.kappa, parse_axis(f.axis), f.sigma, radius);
  }
  if (f.density == "offset") {
    // Feet pushed toward +axis; depends only on the line.
    const Vec3 a = parse_axis(f.axis).vec();
    return density_from_line(
        [a, radius](const DirectedLine& l) { return 0.5 * (1.0 + a.dot(l.foot()) / radius); }, 1.0,
        radius, "offset");
  }
  throw Error(ErrorKind::InvalidArgument, "unknown density '" + f.density + "'");
}

json density_parameters(const DensityFlags& f) {
  json p{{"density", f.density}};
  if (f.density == "tilt" || f.density == "tilt-radial" || f.density == "offset") p["axis"] = f.axis;
  if (f.density == "tilt" || f.density == "tilt-radial") p["kappa"] = f.kappa;
  if (f.density == "radial" || f.density == "tilt-radial") p["sigma"] = f.sigma;
  return p;
}

std::string timestamp_text(bool wall_clock) {
  std::time_t t = 0;
  if (wall_clock) {
    t = std::time(nullptr);
  } else if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
    t = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
  } else {
    return "";
  }
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json manifest(const Common& c) {
  json m{{"tool", "fiberline"},
         {"version", FIBERLINE_VERSION},
         {"command", c.command_line},
         {"seed", c.seed},
         {"n", c.n},
         {"threads", c.threads}};
  const std::string ts = timestamp_text(c.timestamp);
  m["timestamp"] = ts.empty() ? json(nullptr) : json(ts);
  return m;
}

json to_json(const Estimate& e) { return {{"mean", e.mean}, {"stderr", e.std_error}, {"n", e.n}}; }

json to_json(const TestReport& t, bool pass) {
  return {{"statistic", t.statistic}, {"p_value", t.p_value}, {"n", t.n}, {"pass", pass}};
}

json p_test(const TestReport& t) { return to_json(t, t.p_value > kPvalueFloor); }

json sigma_test(const Estimate& e, double oracle) {
  const double dev = std::abs(e.mean - oracle);
  return {{"deviation", dev}, {"bound", kSigmaBand * e.std_error},
          {"pass", dev <= kSigmaBand * e.std_error}};
}

json line_record(const DirectedLine& l) {
  const Vec3& u = l.direction().vec();
  const Vec3& q = l.foot();
  return {{"ux", u.x()}, {"uy", u.y()}, {"uz", u.z()}, {"qx", q.x()}, {"qy", q.y()}, {"qz", q.z()}};
}

json report(std::string_view experiment, const Common& c, json parameters) {
  return {{"experiment", experiment},
          {"parameters", std::move(parameters)},
          {"seed", c.seed},
          {"n", c.n},
          {"estimates", json::object()},
          {"tests", json::object()},
          {"oracle_values", json::object()},
          {"pass", true},
          {"manifest", manifest(c)}};
}

int finish(json& r, std::ostream& out) {
  bool pass = true;
  for (const auto& [name, t] : r["tests"].items()) pass = pass && t.value("pass", false);
  r["pass"] = pass;
  out << r.dump(2) << '\n';
  return pass ? kPass : kStatisticalFail;
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorKind::InvalidArgument, "cannot open '" + path + "' for writing");
  file << text;
}

// ---------------------------------------------------------------------------
// sample / bundle

struct LineBatch {
  std::vector<DirectedLine> lines;
  RejectionTally tally;

  void merge(const LineBatch& other) {
    lines.insert(lines.end(), other.lines.begin(), other.lines.end());
    tally.proposals += other.tally.proposals;
    tally.accepted += other.tally.accepted;
  }
};

int cmd_sample(const Common& c, const SampleFlags& f, std::ostream& out) {
  if (f.format != "csv" && f.format != "json") {
    throw Error(ErrorKind::InvalidArgument, "--format must be csv or json");
  }
  if (!(f.radius > 0.0)) throw Error(ErrorKind::InvalidArgument, "--radius must be positive");
  std::optional<LineDensity> density;
  if (f.source == "bundle") {
    density = make_density(f.density, f.radius);
  } else if (f.source != "isotropic" && f.source != "cosine") {
    throw Error(ErrorKind::InvalidArgument, "--source must be isotropic, cosine, or bundle");
  }

  const RngStream root = make_rng(c.seed);
  const LineBatch batch =
      run_sharded<LineBatch>(root, c.n, c.threads, [&](RngStream& rng, std::uint64_t count) {
        LineBatch b;
        b.lines.reserve(count);
        for (std::uint64_t i = 0; i < count; ++i) {
          if (density) {
            b.lines.push_back(project_to_line(sample_bundle(rng, *density, &b.tally)));
          } else if (f.source == "cosine") {
            b.lines.push_back(sample_cosine_surface(rng, f.radius));
          } else {
            b.lines.push_back(sample_isotropic(rng, f.radius));
          }
        }
        return b;
      });

  json m = manifest(c);
  m["source"] = f.source;
  m["radius"] = f.radius;
  if (density) {
    m["parameters"] = density_parameters(f.density);
    m["proposals"] = batch.tally.proposals;
    m["acceptance_rate"] = batch.tally.acceptance_rate();
  }

  std::ostringstream text;
  if (f.format == "csv") {
    text << "# " << m.dump() << '\n';
    write_lines_csv(text, batch.lines);
  } else {
    json doc{{"manifest", m}, {"lines", json::array()}};
    for (const auto& l : batch.lines) doc["lines"].push_back(line_record(l));
    text << doc.dump(2) << '\n';
  }
  write_text(f.out, text.str(), out);
  if (!f.manifest.empty()) write_text(f.manifest, m.dump(2) + "\n", out);
  return kPass;
}

// ---------------------------------------------------------------------------
// bertrand

int cmd_bertrand(const Common& c, const BertrandFlags& f, std::ostream& out) {
  if (c.n < 1) throw Error(ErrorKind::InvalidArgument, "--n must be >= 1");
  std::vector<BertrandMethod> methods;
  if (f.method == "all") {
    methods = {BertrandMethod::Endpoints, BertrandMethod::Radial, BertrandMethod::Midpoint,
               BertrandMethod::LineMeasure};
  } else {
    methods = {parse_bertrand_method(f.method)};
  }
  json r = report("bertrand", c, {{"method", f.method}});
  const RngStream root = make_rng(c.seed);
  for (std::size_t k = 0; k < methods.size(); ++k) {
    const BertrandMethod m = methods[k];
    const std::string name(to_string(m));
    // Each method gets its own child stream when all four run together.
    const RngStream base = methods.size() == 1 ? root : root.split(k + 1);
    const Estimate e =
        run_sharded<RunningStats>(base, c.n, c.threads, [m](RngStream& rng, std::uint64_t count) {
          return bertrand_tally(rng, m, count);
        }).estimate();
    r["estimates"][name] = to_json(e);
    r["oracle_values"][name] = bertrand_analytic(m);
    r["tests"][name] = sigma_test(e, bertrand_analytic(m));
  }
  return finish(r, out);
}

// ---------------------------------------------------------------------------
// chord

int cmd_chord(const Common& c, const ChordFlags& f, std::ostream& out, std::istream& in) {
  const ConvexBody body = parse_body(f.body);
  json params{{"body", f.body}};

  if (!f.lines.empty()) {
    std::vector<DirectedLine> lines;
    if (f.lines == "-") {
      lines = read_lines_csv(in);
    } else {
      std::ifstream file(f.lines);
      if (!file) throw Error(ErrorKind::InvalidArgument, "cannot open '" + f.lines + "'");
      lines = read_lines_csv(file);
    }
    params["lines"] = f.lines;
    Common counted = c;
    counted.n = lines.size();
    json r = report("chord-lines", counted, params);
    RunningStats hit, length;
    double min_chord = std::numeric_limits<double>::infinity();
    for (const auto& l : lines) {
      const double ch = chord(body, l);
      hit.add(ch > 0.0 ? 1.0 : 0.0);
      if (ch > 0.0) length.add(ch);
      min_chord = std::min(min_chord, ch);
    }
    if (lines.empty()) throw Error(ErrorKind::InvalidArgument, "no line records in input");
    r["estimates"]["hit_fraction"] = to_json(hit.estimate());
    if (length.count() > 0) r["estimates"]["mean_chord_given_hit"] = to_json(length.estimate());
    r["estimates"]["min_chord"] = min_chord;
    if (f.expect_hit) {
      r["tests"]["all_hit"] = {{"hits", length.count()}, {"lines", lines.size()},
                               {"pass", length.count() == lines.size()}};
    }
    return finish(r, out);
  }

  const double radius = f.radius.value_or(bounding_radius(body));
  params["radius"] = radius;
  json r = report("chord", c, params);
  const RngStream root = make_rng(c.seed);
  // Validate before spawning shards so the error is raised once.
  if (!(radius >= bounding_radius(body))) {
    throw Error(ErrorKind::InsufficientRadius, "radius " + format_double(radius) +
                                                   " below bounding radius " +
                                                   format_double(bounding_radius(body)));
  }
  const MeanChordTally tally = run_sharded<MeanChordTally>(
      root, c.n, c.threads, [&](RngStream& rng, std::uint64_t count) {
        return mean_chord_tally(rng, body, count, radius, true);
      });
  const MeanChordResult res = summarize(tally);
  r["estimates"]["hit_rate"] = to_json(res.hit_rate);
  r["estimates"]["mean_chord_given_hit"] = to_json(res.mean_chord_given_hit);
  const double diameter = 2.0 * bounding_radius(body);
  r["histograms"]["chord"] = {{"lo", 0.0}, {"hi", diameter},
                              {"counts", histogram(tally.hit_chords, 0.0, diameter, 20)}};

  std::optional<double> v = f.volume, s = f.area;
  if (!std::holds_alternative<Halfspaces>(body.shape())) {
    v = volume(body);
    s = surface_area(body);
  }
  if (v && s) {
    const CauchyOracle o = cauchy_oracle(*v, *s, radius);
    r["oracle_values"] = {{"hit_rate", o.hit_rate}, {"mean_chord_given_hit", o.mean_chord},
                          {"volume", *v}, {"surface_area", *s}};
    r["tests"]["hit_rate"] = sigma_test(res.hit_rate, o.hit_rate);
    r["tests"]["mean_chord_given_hit"] = sigma_test(res.mean_chord_given_hit, o.mean_chord);
  }
  return finish(r, out);
}

// ---------------------------------------------------------------------------
// haar-test

int cmd_haar(const Common& c, const HaarFlags& f, std::ostream& out) {
  json r = report("haar-test", c, {{"bins", f.bins}});
  RngStream rng = make_rng(c.seed);
  const HaarDiagnostics d = haar_diagnostics(rng, c.n, f.bins);
  r["tests"]["rotation_angle_ks"] = p_test(d.angle_ks);
  r["tests"]["pushforward_isotropy_chi2"] = p_test(d.pushforward_chi2);
  r["tests"]["pushforward_z_ks"] = p_test(d.pushforward_z_ks);
  r["tests"]["hopf_pushforward_z_ks"] = p_test(d.hopf_z_ks);
  r["tests"]["sphere3_w_ks"] = p_test(d.sphere3_w_ks);
  r["tests"]["left_invariance_ks"] = p_test(d.left_invariance_ks);
  r["oracle_values"] = {{"rotation_angle_density", "(1 - cos t) / pi"},
                        {"pushforward_z", "U[-1, 1]"},
                        {"sphere3_w_density", "(2 / pi) sqrt(1 - w^2)"},
                        {"p_value_floor", kPvalueFloor}};
  r["histograms"]["rotation_angle"] = {{"lo", 0.0}, {"hi", std::numbers::pi}, {"counts", d.angle_histogram}};
  r["histograms"]["pushforward_z"] = {{"lo", -1.0}, {"hi", 1.0}, {"counts", d.z_histogram}};
  return finish(r, out);
}

// ---------------------------------------------------------------------------
// gauge-audit

int cmd_gauge(const Common& c, const GaugeFlags& f, std::ostream& out) {
  const LineDensity d = make_density(f.density, f.radius);
  LineEstimator estimator;
  const ConvexBody ball = ConvexBody::ball(Vec3::Zero(), 1.0);
  if (f.estimator == "chord") {
    estimator = [ball](const DirectedLine& l) { return chord(ball, l); };
  } else if (f.estimator == "uz2") {
    estimator = [](const DirectedLine& l) { return l.direction().z() * l.direction().z(); };
  } else if (f.estimator == "foot-x") {
    estimator = [](const DirectedLine& l) { return l.foot().x(); };
  } else {
    throw Error(ErrorKind::InvalidArgument, "--estimator must be chord, uz2, or foot-x");
  }
  json params = density_parameters(f.density);
  params["radius"] = f.radius;
  params["estimator"] = f.estimator;
  params["broken_action"] = f.broken;
  json r = report("gauge-audit", c, params);

  RngStream rng = make_rng(c.seed);
  const GaugeAuditResult a =
      gauge_audit(rng, d, estimator, c.n, f.broken ? GaugeAction(negative_control::broken_act) : GaugeAction(act));
  r["estimates"]["baseline"] = to_json(a.baseline);
  r["estimates"]["shifted"] = to_json(a.shifted);
  r["estimates"]["paired_difference"] = to_json(a.difference);
  r["estimates"]["max_line_deviation"] = a.max_line_deviation;
  r["estimates"]["acceptance_rate"] = a.tally.acceptance_rate();
  const double gap = std::abs(a.baseline.mean - a.shifted.mean);
  r["tests"]["estimates_agree"] = {{"difference", gap}, {"bound", kGaugeTol}, {"pass", gap < kGaugeTol}};
  r["tests"]["lines_agree"] = {{"max_deviation", a.max_line_deviation}, {"bound", kGaugeTol},
                               {"pass", a.max_line_deviation < kGaugeTol}};
  return finish(r, out);
}

// ---------------------------------------------------------------------------
// slope

int cmd_slope(const Common& c, const SlopeFlags& f, std::ostream& out) {
  SlopeProposal proposal;
  if (f.proposal == "hemisphere") {
    proposal = SlopeProposal::Hemisphere;
  } else if (f.proposal == "target") {
    proposal = SlopeProposal::Target;
  } else {
    throw Error(ErrorKind::InvalidArgument, "--proposal must be hemisphere or target");
  }
  json r = report("slope", c, {{"proposal", f.proposal}, {"body", "ball:0,0,0,1"}});
  const RngStream root = make_rng(c.seed);
  RngStream slope_rng = root.split(1);
  RngStream frame_rng = root.split(2);
  const SlopeImportanceResult s = slope_importance_experiment(slope_rng, c.n, proposal);
  const MeanChordTally iso =
      mean_chord_tally(frame_rng, ConvexBody::ball(Vec3::Zero(), 1.0), c.n, 1.0, true);
  r["estimates"]["mean_chord_given_hit"] = to_json(s.mean_chord);
  r["estimates"]["effective_sample_size"] = s.effective_sample_size;
  r["estimates"]["hits"] = s.hits;
  r["oracle_values"]["mean_chord_given_hit"] = 4.0 / 3.0;
  r["tests"]["mean_chord_given_hit"] = sigma_test(s.mean_chord, 4.0 / 3.0);
  r["tests"]["chord_law_vs_frame_ks"] =
      p_test(ks_two_sample_weighted(s.hit_chords.values(), s.hit_chords.weights(), iso.hit_chords));
  return finish(r, out);
}

std::string join(const std::vector<std::string>& args) {
  std::string s;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) s += ' ';
    s += args[i];
  }
  return s;
}

std::uint64_t default_seed() {
  const char* env = std::getenv("FIBERLINE_SEED");
  if (!env || !*env) return 0;
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (errno != 0 || *end != '\0' || env[0] == '-') {
    throw Error(ErrorKind::InvalidArgument, "FIBERLINE_SEED must be an unsigned 64-bit integer");
  }
  return v;
}

void add_common(CLI::App* sub, Common& c, std::uint64_t default_n) {
  c.n = default_n;
  sub->add_option("--seed", c.seed, "RNG seed (default: $FIBERLINE_SEED or 0)");
  sub->add_option("--n", c.n, "number of samples")->capture_default_str();
  sub->add_option("--threads", c.threads, "split streams / worker threads")
      ->check(CLI::Range(1u, 1024u))
      ->capture_default_str();
  sub->add_flag("--timestamp", c.timestamp, "record wall-clock time in the manifest");
}

void add_density(CLI::App* sub, DensityFlags& d) {
  sub->add_option("--density", d.density, "uniform | tilt | radial | tilt-radial | offset")
      ->capture_default_str();
  sub->add_option("--kappa", d.kappa, "tilt strength")->capture_default_str();
  sub->add_option("--sigma", d.sigma, "radial scale")->capture_default_str();
  sub->add_option("--axis", d.axis, "tilt axis x,y,z")->capture_default_str();
}

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::BoundViolated:
    case ErrorKind::NonFinite:
    case ErrorKind::RejectionStall:
    case ErrorKind::PoleSingularity:
    case ErrorKind::HorizontalLine:
    case ErrorKind::NoHits:
    case ErrorKind::DegenerateWeights:
      return kSamplerError;
    default:
      return kUsageError;
  }
}

ConvexBody parse_body(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw Error(ErrorKind::InvalidBody, "body spec must look like kind:parameters");
  }
  const std::string_view kind = spec.substr(0, colon);
  const std::string_view rest = spec.substr(colon + 1);
  try {
    if (kind == "ball") {
      const auto v = parse_numbers(rest, 4, "ball");
      return ConvexBody::ball(Vec3(v[0], v[1], v[2]), v[3]);
    }
    if (kind == "box") {
      const auto v = parse_numbers(rest, 6, "box");
      return ConvexBody::box(Vec3(v[0], v[1], v[2]), Vec3(v[3], v[4], v[5]));
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidArgument) throw Error(ErrorKind::InvalidBody, e.what());
    throw;
  }
  if (kind == "halfspaces") {
    if (rest.empty() || rest.front() != '@') {
      throw Error(ErrorKind::InvalidBody, "halfspaces expects @file.json");
    }
    const std::string path(rest.substr(1));
    std::ifstream file(path);
    if (!file) throw Error(ErrorKind::InvalidBody, "cannot open '" + path + "'");
    std::vector<Halfspace> faces;
    try {
      const json doc = json::parse(file);
      for (const auto& item : doc) {
        const auto n = item.at("normal").get<std::vector<double>>();
        const double offset = item.at("offset").get<double>();
        if (n.size() != 3) throw Error(ErrorKind::InvalidBody, "normal needs 3 components");
        const Vec3 raw(n[0], n[1], n[2]);
        const double len = raw.norm();
        if (!(len > 0.0) || !std::isfinite(len)) throw Error(ErrorKind::InvalidBody, "zero normal");
        faces.push_back({UnitVector3::normalized(raw), offset / len});
      }
    } catch (const json::exception& e) {
      throw Error(ErrorKind::InvalidBody, std::string("halfspaces file: ") + e.what());
    }
    return ConvexBody::halfspaces(std::move(faces));
  }
  throw Error(ErrorKind::InvalidBody, "unknown body kind '" + std::string(kind) + "'");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        std::istream& in) {
  CLI::App app{"Random lines in space: samplers, experiments, and audits", "fiberline"};
  app.require_subcommand(1);

  Common common;
  try {
    common.seed = default_seed();
  } catch (const Error& e) {
    err << e.name() << ": " << e.what() << '\n';
    return kUsageError;
  }
  common.command_line = join(args);

  Common c_sample = common, c_bundle = common, c_bertrand = common, c_chord = common,
         c_haar = common, c_gauge = common, c_slope = common;
  SampleFlags sample_flags, bundle_flags;
  BertrandFlags bertrand_flags;
  ChordFlags chord_flags;
  HaarFlags haar_flags;
  GaugeFlags gauge_flags;
  SlopeFlags slope_flags;

  auto* sample = app.add_subcommand("sample", "emit random lines");
  add_common(sample, c_sample, 1000);
  sample->add_option("--radius", sample_flags.radius, "disk or sphere radius")->capture_default_str();
  sample->add_option("--format", sample_flags.format, "csv | json")->capture_default_str();
  sample->add_option("--out", sample_flags.out, "output path (default stdout)");
  sample->add_option("--source", sample_flags.source, "isotropic | cosine | bundle")->capture_default_str();
  sample->add_option("--manifest", sample_flags.manifest, "write the run manifest to this path");
  add_density(sample, sample_flags.density);

  auto* bundle = app.add_subcommand("bundle", "emit lines from a density on the line bundle");
  add_common(bundle, c_bundle, 1000);
  bundle->add_option("--radius", bundle_flags.radius, "disk radius")->capture_default_str();
  bundle->add_option("--format", bundle_flags.format, "csv | json")->capture_default_str();
  bundle->add_option("--out", bundle_flags.out, "output path (default stdout)");
  bundle->add_option("--manifest", bundle_flags.manifest, "write the run manifest to this path");
  add_density(bundle, bundle_flags.density);

  auto* bertrand = app.add_subcommand("bertrand", "Bertrand chord probabilities");
  add_common(bertrand, c_bertrand, 1'000'000);
  bertrand->add_option("--method", bertrand_flags.method,
                       "endpoints | radial | midpoint | line-measure | all")
      ->capture_default_str();

  auto* chord_cmd = app.add_subcommand("chord", "mean chord and hit rate of a convex body");
  add_common(chord_cmd, c_chord, 1'000'000);
  chord_cmd->add_option("--body", chord_flags.body, "ball:... | box:... | halfspaces:@file")->required();
  chord_cmd->add_option("--radius", chord_flags.radius, "foot disk radius (default: bounding radius)");
  chord_cmd->add_option("--lines", chord_flags.lines, "measure CSV line records from a file or - (stdin)");
  chord_cmd->add_flag("--expect-hit", chord_flags.expect_hit, "with --lines: fail unless every line hits");
  chord_cmd->add_option("--volume", chord_flags.volume, "volume for half-space bodies");
  chord_cmd->add_option("--area", chord_flags.area, "surface area for half-space bodies");

  auto* haar = app.add_subcommand("haar-test", "Haar-measure diagnostics");
  add_common(haar, c_haar, 100'000);
  haar->add_option("--bins", haar_flags.bins, "isotropy bands")->check(CLI::Range(2, 100000))->capture_default_str();

  auto* gauge = app.add_subcommand("gauge-audit", "check gauge invariance of projected estimates");
  add_common(gauge, c_gauge, 100'000);
  gauge->add_option("--radius", gauge_flags.radius, "disk radius")->capture_default_str();
  gauge->add_option("--estimator", gauge_flags.estimator, "chord | uz2 | foot-x")->capture_default_str();
  gauge->add_flag("--broken", gauge_flags.broken, "use the non-invariant negative-control action");
  add_density(gauge, gauge_flags.density);

  auto* slope = app.add_subcommand("slope", "slope-chart importance sampling of the unit-ball mean chord");
  add_common(slope, c_slope, 1'000'000);
  slope->add_option("--proposal", slope_flags.proposal, "hemisphere | target")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kUsageError;
  }

  try {
    if (*sample) return cmd_sample(c_sample, sample_flags, out);
    if (*bundle) {
      bundle_flags.source = "bundle";
      return cmd_sample(c_bundle, bundle_flags, out);
    }
    if (*bertrand) return cmd_bertrand(c_bertrand, bertrand_flags, out);
    if (*chord_cmd) return cmd_chord(c_chord, chord_flags, out, in);
    if (*haar) return cmd_haar(c_haar, haar_flags, out);
    if (*gauge) return cmd_gauge(c_gauge, gauge_flags, out);
    if (*slope) return cmd_slope(c_slope, slope_flags, out);
  } catch (const Error& e) {
    err << e.name() << '\n' << e.what() << '\n';
    return exit_code_for(e.kind());
  }
  return kUsageError;
}

}  // namespace fiberline::cli
