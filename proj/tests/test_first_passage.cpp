#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "onebit/errors.hpp"
#include "onebit/first_passage.hpp"

using namespace onebit;

namespace {

// Spectral (eigenfunction) form of the same density: independent of the image series.
double spectral_g(double t, double a) {
  const double pi = std::numbers::pi;
  double s = 0.0;
  for (int m = 0; m < 400; ++m) {
    const double k = 2.0 * m + 1.0;
    const double term = (m % 2 ? -1.0 : 1.0) * k * std::exp(-k * k * pi * pi * t / (8.0 * a * a));
    s += term;
    if (std::abs(term) < 1e-300) break;
  }
  return pi / (4.0 * a * a) * s;
}

}  // namespace

TEST_CASE("first-passage kernel") {
  CHECK(kernel_h(1.0, 1.0) == doctest::Approx(std::exp(-0.5) / std::sqrt(2.0 * std::numbers::pi)));
  CHECK_THROWS_AS(kernel_h(0.0, 1.0), Error);
  CHECK_THROWS_AS(series_g(1.0, 0.0), Error);
  CHECK_THROWS_AS(series_g(-1.0, 1.0), Error);
}

TEST_CASE("image series agrees with the spectral series") {
  for (double a : {0.5, 1.0, 2.5, 5.0})
    for (double r : {0.02, 0.1, 0.5, 1.0, 3.0, 10.0}) {
      const double t = r * a * a;
      const double g = series_g(t, a);
      const double s = spectral_g(t, a);
      CHECK(g >= 0.0);
      CHECK(std::abs(g - s) <= 1e-10 * std::max(1.0, s) / (a * a));
    }
}

TEST_CASE("zero drift densities are symmetric") {
  const ExitProblem p{2.0, 1.0, 0.0};
  for (double t : {0.1, 1.0, 4.0, 20.0}) {
    const auto j = joint_density(p, t);
    CHECK(j.up == j.down);
    CHECK(j.up == doctest::Approx(series_g(t, 2.0)));
  }
  const auto f = exit_functionals(p);
  CHECK(f.prob_up == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(f.total == doctest::Approx(1.0).epsilon(1e-8));
  CHECK_THROWS_AS(joint_density(p, 0.0), Error);
}

// Exact oracles from the scale function and Wald's identity:
// P(up) = 1 / (1 + e^{-2 lambda Delta}),  E[delta] = Delta tanh(lambda Delta) / (lambda x^2).
TEST_CASE("exit functionals against closed forms") {
  for (double lambda : {-1.0, 0.3, 1.0, 2.0})
    for (double delta : {1.0, 5.0})
      for (double x : {1.0, 2.0}) {
        const auto f = exit_functionals({delta, x, lambda});
        CHECK(std::abs(f.total - 1.0) < 1e-6);
        CHECK(f.prob_up == doctest::Approx(1.0 / (1.0 + std::exp(-2.0 * lambda * delta))).epsilon(1e-6));
        CHECK(f.mean_delta == doctest::Approx(delta * std::tanh(lambda * delta) / (lambda * x * x)).epsilon(1e-6));
        CHECK(f.var_delta > 0.0);
      }
}

TEST_CASE("moments approach the leading-order asymptotics") {
  const ExitProblem p{10.0, 1.0, 1.0};
  const auto f = exit_functionals(p);
  CHECK(f.mean_delta == doctest::Approx(10.0).epsilon(0.05));
  CHECK(f.var_delta == doctest::Approx(10.0).epsilon(0.15));

  const auto a = delta_moment_asymptotics(p);
  CHECK(a.mean == 10.0);
  CHECK(a.var == 10.0);
  const auto b = delta_moment_asymptotics({10.0, 1.0, 2.0});
  CHECK(b.mean == 5.0);
  CHECK(b.var == 1.25);
  CHECK_THROWS_AS(delta_moment_asymptotics({10.0, 1.0, 0.0}), Error);
}

TEST_CASE("exit-time cdf") {
  const ExitProblem p{1.0, 1.0, 1.0};
  std::vector<double> t;
  for (int k = 1; k <= 60; ++k) t.push_back(0.1 * k);
  const auto c = exit_time_cdf(p, t);
  REQUIRE(c.size() == t.size());
  for (std::size_t k = 1; k < c.size(); ++k) CHECK(c[k] >= c[k - 1]);
  CHECK(c.front() >= 0.0);
  CHECK(c.back() == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(exit_tail_limit(p, 1e-12) > exit_tail_limit(p, 1e-6));
}
