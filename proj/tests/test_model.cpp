#include <doctest.h>

#include <cmath>
#include <vector>

#include "onebit/errors.hpp"
#include "onebit/model.hpp"
#include "onebit/stats.hpp"

using namespace onebit;

namespace {

ModelSpec brownian(std::vector<double> x) {
  ModelSpec s;
  s.sensors = static_cast<int>(x.size());
  s.x = std::move(x);
  return s;
}

ModelSpec correlated3() {
  ModelSpec s;
  s.kind = ModelKind::CorrelatedDiffusion;
  s.sensors = 3;
  const auto z = TimeFunction::constant(0.0);
  const auto one = TimeFunction::constant(1.0);
  s.sigma = {{one, z, z}, {TimeFunction::constant(0.5), one, z}, {z, TimeFunction::constant(0.3), one}};
  return s;
}

ErrorKind kind_of(const ModelSpec& s) {
  try {
    build_model(s);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::ValidationError;
}

}  // namespace

TEST_CASE("brownian information is sum of x squared times t") {
  const auto m = build_model(brownian({1.0, 2.0}));
  CHECK(m.random_cross_count(0) == 0);
  CHECK(m.random_cross_count(1) == 0);
  CHECK(m.info_deterministic());
  CHECK(m.total_info(3.0) == doctest::Approx(15.0));
}

TEST_CASE("correlated model with every cross term random") {
  auto s = correlated3();
  s.deterministic_cross = {{true, false, false}, {false, true, false}, {false, false, true}};
  const auto m = build_model(s);
  for (int i = 0; i < 3; ++i) CHECK(m.random_cross_count(i) == 2);
  CHECK_FALSE(m.info_deterministic());

  // Default mask only flags pairs with a nonzero sigma sigma' entry.
  const auto d = build_model(correlated3());
  CHECK(d.random_cross_count(0) == 1);
  CHECK(d.random_cross_count(1) == 2);
  CHECK(d.random_cross_count(2) == 1);
}

TEST_CASE("gaussian model with unit coefficients") {
  ModelSpec s;
  s.kind = ModelKind::GaussianDetInfo;
  s.sensors = 1;
  s.b = {TimeFunction::constant(1.0)};
  s.rho = {{TimeFunction::constant(1.0)}};
  const auto m = build_model(s);
  CHECK(m.total_info(2.5) == doctest::Approx(2.5));
}

TEST_CASE("spec validation") {
  CHECK(kind_of(brownian({})) == ErrorKind::InvalidSpec);
  auto s = brownian({1.0, 1.0});
  s.sensors = 3;
  CHECK(kind_of(s) == ErrorKind::InvalidSpec);

  ModelSpec g;
  g.kind = ModelKind::GaussianDetInfo;
  g.sensors = 2;
  g.b = {TimeFunction::constant(1.0), TimeFunction::constant(1.0)};
  const auto big = TimeFunction::constant(1.5);
  g.rho = {{TimeFunction::constant(1.0), big}, {big, TimeFunction::constant(1.0)}};
  CHECK(kind_of(g) == ErrorKind::InvalidSpec);

  auto c = correlated3();
  c.deterministic_cross = {{true, true, true}, {true, true, true}, {true, true, true}};
  CHECK(kind_of(c) == ErrorKind::InvalidSpec);

  auto b = brownian({1.0, 1.0});
  b.deterministic_cross = {{true, false}, {false, true}};
  CHECK(kind_of(b) == ErrorKind::InvalidSpec);
}

TEST_CASE("zero drift path starts at zero with unit-rate increments") {
  const auto m = build_model(brownian({1.0}));
  const TimeGrid grid{1.0, 10};
  const auto p = simulate_paths(m, 0.0, grid, 42);
  REQUIRE(p.Y[0].size() == 11);
  CHECK(p.Y[0][0] == 0.0);

  std::vector<double> inc;
  for (std::uint64_t seed = 0; seed < 2000; ++seed) {
    const auto q = simulate_paths(m, 0.0, grid, seed);
    for (std::size_t k = 1; k <= 10; ++k) inc.push_back(q.Y[0][k] - q.Y[0][k - 1]);
  }
  const auto mo = moments(inc);
  CHECK(std::abs(mo.mean) < 4 * mo.se_mean());
  CHECK(std::abs(mo.var - 0.1) < 4 * mo.se_var());
}

TEST_CASE("terminal mean under drift") {
  const auto m = build_model(brownian({1.0}));
  const TimeGrid grid{1.0, 10};
  std::vector<double> y;
  for (std::uint64_t seed = 0; seed < 100000; ++seed) y.push_back(simulate_paths(m, 2.0, grid, seed).Y[0].back());
  CHECK(moments(y).mean == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("ou drift is lambda times the state") {
  ModelSpec s;
  s.kind = ModelKind::OrnsteinUhlenbeck;
  s.sensors = 1;
  s.alpha = {1.0};
  const auto m = build_model(s);
  for (double y : {-2.0, 0.0, 0.7}) CHECK(m.integrand(0, 1.0, y) * s.alpha[0] == doctest::Approx(y));
}

TEST_CASE("zero path statistics") {
  const auto m = build_model(brownian({2.0}));
  SensorPaths p;
  p.grid = {2.0, 20};
  p.lambda_true = 0.7;
  p.Y = {std::vector<double>(21, 0.0)};
  const auto st = path_statistics(p, m);
  for (std::size_t k = 0; k < 21; ++k) {
    CHECK(st.B[k] == 0.0);
    CHECK(st.M[k] == doctest::Approx(-0.7 * st.A[k]));
    CHECK(st.A[k] == doctest::Approx(4.0 * p.grid.time(k)));
  }

  SensorPaths bad = p;
  bad.grid = {2.0, 10};
  CHECK_THROWS_AS(path_statistics(bad, m), Error);
}

TEST_CASE("longer horizon keeps the path prefix") {
  ModelSpec s;
  s.kind = ModelKind::OrnsteinUhlenbeck;
  s.sensors = 2;
  s.alpha = {1.0, 0.5};
  const auto m = build_model(s);
  const auto a = simulate_paths(m, -0.5, {10.0, 200}, 9, 4);
  const auto b = simulate_paths(m, -0.5, {20.0, 400}, 9, 4);
  for (int i = 0; i < 2; ++i)
    for (std::size_t k = 0; k <= 200; ++k) CHECK(a.Y[i][k] == b.Y[i][k]);
}

// M = B - lambda A is a martingale with <M> = A: E[M_t] = 0 and Var M_t = E[A_t].
TEST_CASE("martingale property of M across models") {
  std::vector<std::pair<ModelSpec, double>> cases;
  {
    ModelSpec s;
    s.kind = ModelKind::OrnsteinUhlenbeck;
    s.sensors = 2;
    s.alpha = {1.0, 0.5};
    cases.push_back({s, -0.5});
  }
  {
    ModelSpec s;
    s.kind = ModelKind::SquareRootDiffusion;
    s.sensors = 1;
    s.x = {1.0};
    cases.push_back({s, -0.5});
  }
  cases.push_back({correlated3(), -0.3});
  {
    ModelSpec s;
    s.kind = ModelKind::GaussianDetInfo;
    s.sensors = 2;
    s.b = {TimeFunction::constant(1.0), TimeFunction::polynomial({1.0, 0.1})};
    const auto r = TimeFunction::constant(0.4);
    s.rho = {{TimeFunction::constant(1.0), r}, {r, TimeFunction::constant(1.0)}};
    cases.push_back({s, 1.0});
  }
  for (const auto& [spec, lambda] : cases) {
    const auto m = build_model(spec);
    std::vector<double> mt, at;
    for (std::uint64_t r = 0; r < 3000; ++r) {
      const auto p = simulate_paths(m, lambda, {4.0, 400}, 77, r);
      const auto st = path_statistics(p, m);
      mt.push_back(st.M.back());
      at.push_back(st.A.back());
    }
    const auto mm = moments(mt);
    const auto ma = moments(at);
    CHECK(std::abs(mm.mean) < 4 * mm.se_mean());
    CHECK(std::abs(mm.var - ma.mean) < 4 * mm.se_var() + 4 * ma.se_mean());
    if (m.info_deterministic()) CHECK(ma.mean == doctest::Approx(m.total_info(4.0)));
  }
}

TEST_CASE("psd cholesky") {
  std::vector<double> l;
  CHECK(psd_cholesky({4.0, 2.0, 2.0, 2.0}, 2, l));
  CHECK(l[0] == doctest::Approx(2.0));
  CHECK(l[2] == doctest::Approx(1.0));
  CHECK(l[3] == doctest::Approx(1.0));
  CHECK(psd_cholesky({1.0, 1.0, 1.0, 1.0}, 2, l));
  CHECK_FALSE(psd_cholesky({1.0, 2.0, 2.0, 1.0}, 2, l));
}
