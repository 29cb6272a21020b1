#pragma once

#include <functional>
#include <vector>

namespace onebit {

double normal_cdf(double z);

/// P(K > k) for the limiting Kolmogorov distribution.
double kolmogorov_survival(double k);

struct KsResult {
  double D = 0.0;
  double p_value = 1.0;
};

/// One-sample KS statistic against a continuous CDF. Throws Error(SampleTooSmall) below 8 points.
KsResult ks_test(std::vector<double> sample, const std::function<double(double)>& cdf);

/// KS test against N(0, 1).
KsResult ks_test(std::vector<double> sample);

/// KS distance between an ascending sample and the CDF values at those points.
double ks_distance_sorted(const std::vector<double>& cdf_at_sorted);

/// Asymptotic p-value of D for sample size n (Stephens' finite-n correction).
double ks_p_value(double D, std::size_t n);

/// Critical value of D at level alpha for large n.
double ks_critical_value(double alpha, std::size_t n);

struct Moments {
  std::size_t n = 0;
  double mean = 0.0;
  double var = 0.0;  // unbiased
  double m4 = 0.0;   // fourth central moment

  double se_mean() const;
  /// Standard error of the sample variance, from the fourth moment.
  double se_var() const;
};

Moments moments(const std::vector<double>& sample);

}  // namespace onebit
