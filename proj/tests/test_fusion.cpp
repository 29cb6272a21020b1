#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "onebit/errors.hpp"
#include "onebit/fusion.hpp"

using namespace onebit;

namespace {

Model brownian1() {
  ModelSpec s;
  s.sensors = 1;
  s.x = {1.0};
  return build_model(s);
}

Model ou(int k) {
  ModelSpec s;
  s.kind = ModelKind::OrnsteinUhlenbeck;
  s.sensors = k;
  s.alpha.assign(static_cast<std::size_t>(k), 1.0);
  return build_model(s);
}

MessageLog b_log(std::vector<double> times, std::vector<int> bits, double horizon) {
  MessageLog log;
  log.horizon = horizon;
  log.sensors.resize(1);
  for (std::size_t n = 0; n < times.size(); ++n) log.sensors[0].b.push_back({times[n], bits[n], 0.0});
  return log;
}

TriggerConfig band(double d, std::optional<double> c = std::nullopt) {
  TriggerConfig t;
  t.delta_up = d;
  t.delta_down = d;
  t.c = c;
  return t;
}

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::ValidationError;
}

}  // namespace

TEST_CASE("B reconstruction from bits") {
  const auto st = reconstruct(b_log({1, 2, 3}, {1, 0, 1}, 5.0), brownian1(), {band(1.0)});
  CHECK(st.tB(3.5) == 1.0);
  CHECK(st.tB(2.5) == 0.0);
  CHECK(st.tB(0.5) == 0.0);
  CHECK(st.b_messages(3.0) == 3);
  CHECK(st.delta_total() == 1.0);
}

TEST_CASE("A reconstruction counts messages") {
  MessageLog log;
  log.horizon = 5.0;
  log.sensors.resize(1);
  log.sensors[0].a = {{1.0}, {2.0}, {3.0}};
  const auto st = reconstruct(log, ou(1), {band(1.0, 0.5)});
  CHECK(st.tA_i(0, 2.5) == 1.0);
  CHECK(st.tA(2.0) == 1.0);
  CHECK(st.tA(0.5) == 0.0);
  CHECK(st.c_total() == 0.5);
}

TEST_CASE("cross terms scale the A reconstruction") {
  ModelSpec s;
  s.kind = ModelKind::CorrelatedDiffusion;
  s.sensors = 2;
  const auto one = TimeFunction::constant(1.0);
  const auto z = TimeFunction::constant(0.0);
  s.sigma = {{one, z}, {TimeFunction::constant(0.5), one}};
  MessageLog log;
  log.horizon = 5.0;
  log.sensors.resize(2);
  log.sensors[0].a = {{1.0}};
  log.sensors[1].a = {{1.5}, {2.5}};
  const auto st = reconstruct(log, build_model(s), {band(1.0, 0.5), band(1.0, 0.25)});
  CHECK(st.tA(3.0) == doctest::Approx(2 * 0.5 + 2 * 0.5));
  CHECK(st.c_total() == doctest::Approx(2 * 0.5 + 2 * 0.25));
  CHECK(st.a_jump_times() == std::vector<double>{1.0, 1.5, 2.5});
}

TEST_CASE("inconsistent logs are rejected") {
  CHECK(kind_of([] { reconstruct(b_log({1, 2}, {1, 2}, 5.0), brownian1(), {band(1.0)}); }) ==
        ErrorKind::InconsistentLog);
  CHECK(kind_of([] { reconstruct(b_log({2, 1}, {1, 1}, 5.0), brownian1(), {band(1.0)}); }) ==
        ErrorKind::InconsistentLog);
  MessageLog log = b_log({}, {}, 5.0);
  log.sensors[0].a = {{1.0}};
  CHECK(kind_of([&] { reconstruct(log, brownian1(), {band(1.0)}); }) == ErrorKind::InconsistentLog);
  CHECK(kind_of([] { reconstruct(b_log({}, {}, 5.0), ou(1), {band(1.0)}); }) == ErrorKind::InvalidSpec);
}

TEST_CASE("fixed-horizon estimate") {
  const auto st = reconstruct(b_log({1, 2, 3}, {1, 1, 1}, 10.0), brownian1(), {band(1.0)});
  CHECK(estimate_fixed(st, 10.0).value == doctest::Approx(0.3));
  CHECK(estimate_fixed(st, 0.5).value == 0.0);
  CHECK(kind_of([&] { estimate_fixed(st, 11.0); }) == ErrorKind::OutOfHorizon);
  CHECK(kind_of([&] { estimate_fixed(st, 0.0); }) == ErrorKind::ZeroInformation);
  const auto r = reconstruct(b_log({}, {}, 10.0), ou(1), {band(1.0, 1.0)});
  CHECK(kind_of([&] { estimate_fixed(r, 5.0); }) == ErrorKind::InvalidSpec);
}

TEST_CASE("sequential estimate stops at gamma minus c") {
  MessageLog log = b_log({0.5, 3.5}, {1, 1}, 10.0);
  for (int k = 1; k <= 9; ++k) log.sensors[0].a.push_back({static_cast<double>(k)});
  const auto st = reconstruct(log, ou(1), {band(1.0, 1.0)});
  const auto r = estimate_sequential(st, 5.0);
  REQUIRE(r.stop_time);
  CHECK(*r.stop_time == 4.0);
  CHECK(r.info_used == 4.0);
  CHECK(r.value == doctest::Approx(0.5));
  CHECK(kind_of([&] { estimate_sequential(st, 1.0); }) == ErrorKind::GammaTooSmall);
  CHECK(kind_of([&] { estimate_sequential(st, 50.0); }) == ErrorKind::HorizonExhausted);
}

TEST_CASE("sequential estimate with deterministic information") {
  ModelSpec s;
  s.sensors = 2;
  s.x = {1.0, 2.0};
  const auto st = reconstruct(MessageLog{{{}, {}}, 10.0}, build_model(s), {band(1.0), band(1.0)});
  const auto r = estimate_sequential(st, 20.0);
  REQUIRE(r.stop_time);
  CHECK(*r.stop_time == doctest::Approx(4.0));
}

TEST_CASE("timing-only estimate") {
  const auto st = reconstruct(b_log({2, 3}, {1, 1}, 5.0), brownian1(), {band(1.0)});
  CHECK(st.checkA(3.5) == 3.0);
  CHECK(st.tB(3.5) == 2.0);
  CHECK(estimate_timing_only(st, 3.5).value == doctest::Approx(2.0 / 3.0));
  const auto empty = reconstruct(b_log({}, {}, 5.0), brownian1(), {band(1.0)});
  CHECK(kind_of([&] { estimate_timing_only(empty, 3.0); }) == ErrorKind::NoMessages);
}

TEST_CASE("centralized estimates and likelihood") {
  PathStats ps;
  ps.grid = {1.0, 1};
  ps.sensors = 1;
  ps.B = {0.0, 2.0};
  ps.A = {0.0, 4.0};
  ps.M = {0.0, 0.0};
  const auto r = centralized_estimates(ps, 1.0);
  REQUIRE(r.size() == 1);
  CHECK(r[0].value == 0.5);

  const auto l0 = centralized_loglik(0.0, 2.0, 4.0);
  CHECK(l0.loglik == 0.0);
  CHECK(l0.score == 2.0);
  CHECK(centralized_loglik(0.5, 2.0, 4.0).score == 0.0);
  const auto l1 = centralized_loglik(1.0, 2.0, 4.0);
  CHECK(l1.loglik == 0.0);
  CHECK(l1.score == -2.0);
}

TEST_CASE("estimator names round-trip") {
  for (auto k : {EstimatorKind::CentralizedFixed, EstimatorKind::CentralizedSequential, EstimatorKind::DecentralizedFixed,
                 EstimatorKind::DecentralizedSequential, EstimatorKind::TimingOnly})
    CHECK(estimator_from_string(to_string(k)) == k);
  CHECK_THROWS_AS(estimator_from_string("mle"), Error);
}

// Pathwise bounds on simulated paths, checked at every grid point against the
// simulator's own B^i and A^i.
TEST_CASE("per-sensor reconstruction bounds hold pathwise") {
  const auto m = ou(2);
  for (std::uint64_t rep = 0; rep < 10; ++rep) {
    const auto paths = simulate_paths(m, -0.5, {40.0, 800}, 123, rep);
    const auto ps = path_statistics(paths, m);
    const std::vector<TriggerConfig> cfg{band(1.5, 0.75), band(0.5, 0.3)};
    const auto log = run_triggers(ps, cfg);
    const auto st = reconstruct(log, m, cfg);
    for (std::size_t k = 0; k < ps.grid.size(); ++k) {
      const double t = ps.grid.time(k);
      for (int i = 0; i < 2; ++i) {
        CHECK(std::abs(ps.B_i[static_cast<std::size_t>(i)][k] - st.tB_i(i, t)) < cfg[static_cast<std::size_t>(i)].delta_max());
        const double gap = ps.A_i(i)[k] - st.tA_i(i, t);
        CHECK(gap >= 0.0);
        CHECK(gap < *cfg[static_cast<std::size_t>(i)].c);
      }
      CHECK(std::abs(ps.B[k] - st.tB(t)) <= st.delta_total() * (1 + 1e-12));
    }
  }
}
