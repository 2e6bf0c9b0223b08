#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "fiberline/haar.hpp"

namespace fiberline {

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;  ///< sample standard deviation / √n; 0 when n = 1
  std::uint64_t n = 0;
};

/// Streaming mean/variance (Welford) with exact pooling of shards.
class RunningStats {
 public:
  void add(double x);
  void merge(const RunningStats& other);

  std::uint64_t count() const { return n_; }
  double mean() const { return mean_; }
  /// Unbiased sample variance; 0 for fewer than two samples.
  double variance() const;
  /// Throws TooFewSamples when empty.
  Estimate estimate() const;

 private:
  std::uint64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// Self-normalized weighted mean Σwx/Σw with delta-method standard error.
class WeightedStats {
 public:
  void add(double x, double w);

  std::uint64_t count() const { return n_; }
  double weight_sum() const { return sum_w_; }
  /// (Σw)² / Σw².
  double effective_sample_size() const;
  /// Needs stored samples; computed from the retained (x, w) pairs.
  Estimate estimate() const;

  std::span<const double> values() const { return xs_; }
  std::span<const double> weights() const { return ws_; }

 private:
  std::uint64_t n_ = 0;
  double sum_w_ = 0.0;
  double sum_w2_ = 0.0;
  double sum_wx_ = 0.0;
  std::vector<double> xs_;
  std::vector<double> ws_;
};

struct TestReport {
  double statistic = 0.0;
  double p_value = 1.0;
  std::uint64_t n = 0;
};

using Cdf = std::function<double(double)>;

/// Survival function of the Kolmogorov distribution, P(K > λ).
double kolmogorov_survival(double lambda);

/// One-sample KS against a continuous CDF. Throws TooFewSamples below 8.
/// p-value from the Kolmogorov limit with Stephens' small-n correction.
TestReport ks_test(std::span<const double> samples, const Cdf& cdf);
TestReport ks_two_sample(std::span<const double> a, std::span<const double> b);
/// Two-sample KS where sample `a` carries importance weights; its
/// effective size is (Σw)²/Σw².
TestReport ks_two_sample_weighted(std::span<const double> a, std::span<const double> weights,
                                  std::span<const double> b);

/// Chi-square over `bins` equal-z (equal-area) bands of S². Throws
/// TooFewSamples if any expected count is below 5.
TestReport chi2_isotropy(std::span<const UnitVector3> directions, int bins);
TestReport chi2_isotropy(std::span<const Vec3> directions, int bins);

/// P(X² > x) for X² with `dof` degrees of freedom.
double chi2_survival(double x, double dof);

}  // namespace fiberline
