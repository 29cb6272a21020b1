#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "onebit/errors.hpp"
#include "onebit/rng.hpp"
#include "onebit/stats.hpp"

using namespace onebit;

TEST_CASE("normal cdf") {
  const boost::math::normal n;
  for (double z : {-5.0, -1.3, 0.0, 0.4, 2.2, 7.0}) CHECK(normal_cdf(z) == doctest::Approx(boost::math::cdf(n, z)));
}

TEST_CASE("kolmogorov distribution tail") {
  CHECK(kolmogorov_survival(1.0) == doctest::Approx(0.26999967).epsilon(1e-6));
  CHECK(kolmogorov_survival(1.3580986) == doctest::Approx(0.05).epsilon(1e-4));
  CHECK(kolmogorov_survival(1.6276236) == doctest::Approx(0.01).epsilon(1e-4));
  CHECK(kolmogorov_survival(0.2) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(kolmogorov_survival(5.0) < 1e-20);
  CHECK(ks_critical_value(0.01, 1000000) * std::sqrt(1e6) == doctest::Approx(1.6276).epsilon(1e-3));
}

TEST_CASE("perfectly placed quantiles") {
  const boost::math::normal n;
  std::vector<double> s;
  for (int i = 1; i <= 100; ++i) s.push_back(boost::math::quantile(n, (i - 0.5) / 100.0));
  CHECK(ks_test(s).D <= 0.005 + 1e-12);
}

TEST_CASE("normal draws pass, constant sample fails") {
  NormalSource z(replication_stream(99, 0, StreamPurpose::Auxiliary));
  std::vector<double> s(10000);
  for (auto& v : s) v = z();
  const auto r = ks_test(s);
  CHECK(r.D < 0.02);
  CHECK(r.p_value > 0.001);
  CHECK(ks_test(std::vector<double>(50, 0.3)).D >= 0.5);
  CHECK_THROWS_AS(ks_test(std::vector<double>{1, 2, 3}), Error);
}

TEST_CASE("ks against a custom cdf") {
  NormalSource z(replication_stream(5, 0, StreamPurpose::Auxiliary));
  std::vector<double> u(5000);
  for (auto& v : u) v = z.uniform();
  CHECK(ks_test(u, [](double x) { return std::clamp(x, 0.0, 1.0); }).p_value > 0.001);
  CHECK(ks_test(u, [](double x) { return std::clamp(x * x, 0.0, 1.0); }).p_value < 1e-6);
}

TEST_CASE("moments") {
  const auto m = moments({1.0, 2.0, 3.0, 4.0});
  CHECK(m.n == 4);
  CHECK(m.mean == 2.5);
  CHECK(m.var == doctest::Approx(5.0 / 3.0));
  CHECK(m.m4 == doctest::Approx((2 * 5.0625 + 2 * 0.0625) / 4.0));
  CHECK(m.se_mean() == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
}
