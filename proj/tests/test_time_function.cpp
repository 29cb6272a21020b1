#include <doctest.h>

#include <cmath>

#include "onebit/time_function.hpp"

using namespace onebit;

namespace {
// Composite Simpson as an independent check on closed-form integrals.
template <class F>
double simpson(F f, double a, double b, int n = 2000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
  return s * h / 3.0;
}
}  // namespace

TEST_CASE("constant and polynomial integrals") {
  CHECK(TimeFunction::constant(2.5).integral(4.0) == doctest::Approx(10.0));
  const auto p = TimeFunction::polynomial({1.0, -2.0, 3.0});
  CHECK(p(2.0) == doctest::Approx(9.0));
  CHECK(p.integral(2.0) == doctest::Approx(2.0 - 4.0 + 8.0));
}

TEST_CASE("piecewise integrals match quadrature") {
  const auto pc = TimeFunction::piecewise_constant({1.0, 3.0}, {2.0, -1.0, 0.5});
  CHECK(pc(0.5) == 2.0);
  CHECK(pc(2.0) == -1.0);
  CHECK(pc(5.0) == 0.5);
  CHECK(pc.integral(5.0) == doctest::Approx(2.0 - 2.0 + 1.0));

  const auto pp = TimeFunction::piecewise_polynomial({2.0}, {{1.0, 1.0}, {0.0, 0.0, 1.0}});
  CHECK(pp.integral(1.5) == doctest::Approx(1.5 + 1.125));
  CHECK(pp.integral(3.3) == doctest::Approx(4.0 + (3.3 * 3.3 * 3.3 - 8.0) / 3.0));
  const auto smooth = TimeFunction::polynomial({0.2, -1.0, 0.0, 0.7});
  CHECK(smooth.integral(2.7) == doctest::Approx(simpson([&](double s) { return smooth(s); }, 0.0, 2.7)));
}

TEST_CASE("products and sums") {
  const auto a = TimeFunction::polynomial({1.0, 0.5});
  const auto b = TimeFunction::piecewise_constant({2.0}, {3.0, -1.0});
  const auto prod = a * b;
  const auto sum = a + b;
  for (double t : {0.3, 1.9, 2.1, 7.0}) {
    CHECK(prod(t) == doctest::Approx(a(t) * b(t)));
    CHECK(sum(t) == doctest::Approx(a(t) + b(t)));
  }
  CHECK(prod.integral(5.0) == doctest::Approx(9.0 - 8.25));
  CHECK(prod.integral(1.2) == doctest::Approx(simpson([&](double s) { return prod(s); }, 0.0, 1.2)));
  CHECK(TimeFunction::constant(0.0).is_identically_zero());
  CHECK_FALSE(a.is_identically_zero());
  CHECK(TimeFunction::constant(3.0).is_constant());
}
