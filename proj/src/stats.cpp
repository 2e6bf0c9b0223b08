#include "fiberline/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/gamma.hpp>

#include "fiberline/error.hpp"

namespace fiberline {
namespace {

constexpr std::size_t kMinKsSamples = 8;

void require_ks_size(std::size_t n) {
  if (n < kMinKsSamples) throw Error(ErrorKind::TooFewSamples, "KS test needs at least 8 samples");
}

double ks_p_value(double d, double n_eff) {
  const double root = std::sqrt(n_eff);
  return kolmogorov_survival((root + 0.12 + 0.11 / root) * d);
}

std::vector<double> sorted_copy(std::span<const double> xs) {
  std::vector<double> s(xs.begin(), xs.end());
  std::sort(s.begin(), s.end());
  return s;
}

}  // namespace

void RunningStats::add(double x) {
  ++n_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_);
}

void RunningStats::merge(const RunningStats& other) {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(n_);
  const double nb = static_cast<double>(other.n_);
  const double delta = other.mean_ - mean_;
  const double total = na + nb;
  mean_ += delta * nb / total;
  m2_ += other.m2_ + delta * delta * na * nb / total;
  n_ += other.n_;
}

double RunningStats::variance() const {
  return n_ < 2 ? 0.0 : m2_ / static_cast<double>(n_ - 1);
}

Estimate RunningStats::estimate() const {
  if (n_ == 0) throw Error(ErrorKind::TooFewSamples, "estimate of an empty sample");
  return {mean_, std::sqrt(variance() / static_cast<double>(n_)), n_};
}

void WeightedStats::add(double x, double w) {
  if (!(w >= 0.0) || !std::isfinite(w)) throw Error(ErrorKind::InvalidArgument, "bad weight");
  ++n_;
  sum_w_ += w;
  sum_w2_ += w * w;
  sum_wx_ += w * x;
  xs_.push_back(x);
  ws_.push_back(w);
}

double WeightedStats::effective_sample_size() const {
  return sum_w2_ > 0.0 ? sum_w_ * sum_w_ / sum_w2_ : 0.0;
}

Estimate WeightedStats::estimate() const {
  if (n_ == 0 || !(sum_w_ > 0.0)) {
    throw Error(ErrorKind::TooFewSamples, "weighted estimate needs positive total weight");
  }
  const double mean = sum_wx_ / sum_w_;
  double acc = 0.0;
  for (std::size_t i = 0; i < xs_.size(); ++i) {
    const double d = ws_[i] * (xs_[i] - mean);
    acc += d * d;
  }
  return {mean, std::sqrt(acc) / sum_w_, n_};
}

double kolmogorov_survival(double lambda) {
  if (!(lambda > 0.0)) return 1.0;
  constexpr int kMaxTerms = 100;
  constexpr double kTermTol = 1e-12;
  double p;
  if (lambda < 1.18) {
    // Jacobi theta form; converges fast for small λ.
    const double c = -std::numbers::pi * std::numbers::pi / (8.0 * lambda * lambda);
    double sum = 0.0;
    for (int k = 1; k <= kMaxTerms; ++k) {
      const double term = std::exp(c * (2 * k - 1) * (2 * k - 1));
      sum += term;
      if (term < kTermTol) break;
    }
    p = 1.0 - std::sqrt(2.0 * std::numbers::pi) / lambda * sum;
  } else {
    double sum = 0.0;
    for (int k = 1; k <= kMaxTerms; ++k) {
      const double term = std::exp(-2.0 * k * k * lambda * lambda);
      sum += (k % 2 == 1) ? term : -term;
      if (term < kTermTol) break;
    }
    p = 2.0 * sum;
  }
  return std::clamp(p, 0.0, 1.0);
}

TestReport ks_test(std::span<const double> samples, const Cdf& cdf) {
  require_ks_size(samples.size());
  const std::vector<double> s = sorted_copy(samples);
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double f = cdf(s[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return {d, ks_p_value(d, n), s.size()};
}

TestReport ks_two_sample(std::span<const double> a, std::span<const double> b) {
  require_ks_size(a.size());
  require_ks_size(b.size());
  const std::vector<double> sa = sorted_copy(a);
  const std::vector<double> sb = sorted_copy(b);
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < sa.size() && j < sb.size()) {
    const double x = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] == x) ++i;
    while (j < sb.size() && sb[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return {d, ks_p_value(d, na * nb / (na + nb)), sa.size() + sb.size()};
}

TestReport ks_two_sample_weighted(std::span<const double> a, std::span<const double> weights,
                                  std::span<const double> b) {
  if (weights.size() != a.size()) {
    throw Error(ErrorKind::InvalidArgument, "weights and samples differ in length");
  }
  require_ks_size(a.size());
  require_ks_size(b.size());
  std::vector<std::size_t> order(a.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return a[l] < a[r]; });
  double total = 0.0, total2 = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw Error(ErrorKind::InvalidArgument, "bad weight");
    total += w;
    total2 += w * w;
  }
  if (!(total > 0.0)) throw Error(ErrorKind::DegenerateWeights, "zero total weight");
  const std::vector<double> sb = sorted_copy(b);
  const double nb = static_cast<double>(sb.size());
  std::size_t i = 0, j = 0;
  double fa = 0.0, d = 0.0;
  while (i < order.size() && j < sb.size()) {
    const double x = std::min(a[order[i]], sb[j]);
    while (i < order.size() && a[order[i]] == x) fa += weights[order[i++]];
    while (j < sb.size() && sb[j] == x) ++j;
    d = std::max(d, std::abs(fa / total - static_cast<double>(j) / nb));
  }
  const double na = total * total / total2;
  return {d, ks_p_value(d, na * nb / (na + nb)), a.size() + sb.size()};
}

double chi2_survival(double x, double dof) {
  if (!(x > 0.0)) return 1.0;
  return boost::math::gamma_q(dof / 2.0, x / 2.0);
}

TestReport chi2_isotropy(std::span<const Vec3> directions, int bins) {
  if (bins < 2) throw Error(ErrorKind::InvalidArgument, "chi-square needs at least 2 bins");
  if (directions.empty()) throw Error(ErrorKind::TooFewSamples, "no directions");
  const double expected = static_cast<double>(directions.size()) / bins;
  if (expected < 5.0) throw Error(ErrorKind::TooFewSamples, "expected band count below 5");
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(bins), 0);
  for (const Vec3& u : directions) {
    int band = static_cast<int>((u.z() + 1.0) / 2.0 * bins);
    ++counts[static_cast<std::size_t>(std::clamp(band, 0, bins - 1))];
  }
  double stat = 0.0;
  for (std::uint64_t c : counts) {
    const double diff = static_cast<double>(c) - expected;
    stat += diff * diff / expected;
  }
  return {stat, chi2_survival(stat, bins - 1), directions.size()};
}

TestReport chi2_isotropy(std::span<const UnitVector3> directions, int bins) {
  std::vector<Vec3> vs;
  vs.reserve(directions.size());
  for (const auto& u : directions) vs.push_back(u.vec());
  return chi2_isotropy(std::span<const Vec3>(vs), bins);
}

}  // namespace fiberline
