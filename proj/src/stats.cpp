#include "onebit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "onebit/errors.hpp"

namespace onebit {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double kolmogorov_survival(double k) {
  if (k <= 0.0) return 1.0;
  using std::numbers::pi;
  if (k < 1.18) {
    // Small-k form: CDF = sqrt(2 pi)/k sum exp(-(2j-1)^2 pi^2 / (8 k^2)).
    double cdf = 0.0;
    for (int j = 1; j <= 8; ++j) {
      const double m = 2.0 * j - 1.0;
      cdf += std::exp(-m * m * pi * pi / (8.0 * k * k));
    }
    return 1.0 - std::sqrt(2.0 * pi) / k * cdf;
  }
  double s = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * k * k);
    s += (j % 2 == 1 ? term : -term);
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * s, 0.0, 1.0);
}

double ks_p_value(double D, std::size_t n) {
  const double rn = std::sqrt(static_cast<double>(n));
  return kolmogorov_survival((rn + 0.12 + 0.11 / rn) * D);
}

double ks_critical_value(double alpha, std::size_t n) {
  // Invert the limiting survival function by bisection.
  double lo = 0.1, hi = 5.0;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    (kolmogorov_survival(mid) > alpha ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi) / std::sqrt(static_cast<double>(n));
}

double ks_distance_sorted(const std::vector<double>& cdf) {
  const double n = static_cast<double>(cdf.size());
  double d = 0.0;
  for (std::size_t i = 0; i < cdf.size(); ++i) {
    const double f = cdf[i];
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

KsResult ks_test(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.size() < 8)
    throw Error(ErrorKind::SampleTooSmall, fmt::format("KS test needs at least 8 points, got {}", sample.size()));
  std::sort(sample.begin(), sample.end());
  std::vector<double> f(sample.size());
  std::transform(sample.begin(), sample.end(), f.begin(), cdf);
  KsResult r;
  r.D = ks_distance_sorted(f);
  r.p_value = ks_p_value(r.D, sample.size());
  return r;
}

KsResult ks_test(std::vector<double> sample) { return ks_test(std::move(sample), normal_cdf); }

double Moments::se_mean() const { return n > 0 ? std::sqrt(var / static_cast<double>(n)) : 0.0; }

double Moments::se_var() const {
  if (n < 2) return 0.0;
  const double nn = static_cast<double>(n);
  const double v = (m4 - (nn - 3.0) / (nn - 1.0) * var * var) / nn;
  return std::sqrt(std::max(v, 0.0));
}

Moments moments(const std::vector<double>& sample) {
  Moments m;
  m.n = sample.size();
  if (m.n == 0) return m;
  double s = 0.0;
  for (double v : sample) s += v;
  m.mean = s / static_cast<double>(m.n);
  double s2 = 0.0, s4 = 0.0;
  for (double v : sample) {
    const double d = v - m.mean;
    s2 += d * d;
    s4 += d * d * d * d;
  }
  m.var = m.n > 1 ? s2 / static_cast<double>(m.n - 1) : 0.0;
  m.m4 = s4 / static_cast<double>(m.n);
  return m;
}

}  // namespace onebit
