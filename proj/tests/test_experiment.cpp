#include <doctest.h>

#include <cmath>
#include <vector>

#include "onebit/errors.hpp"
#include "onebit/experiment.hpp"
#include "onebit/stats.hpp"

using namespace onebit;

namespace {

ExperimentConfig brownian_fixed(double t, int reps) {
  ExperimentConfig c;
  c.model.sensors = 2;
  c.model.x = {1.0, 1.0};
  c.lambda_true = 1.0;
  c.points = {t};
  c.delta_rule = {1.0, 0.25};
  c.replications = reps;
  c.master_seed = 314;
  c.estimators = {EstimatorKind::CentralizedFixed, EstimatorKind::DecentralizedFixed, EstimatorKind::TimingOnly};
  return c;
}

bool same_rows(const ExperimentReport& a, const ExperimentReport& b) {
  if (a.rows.size() != b.rows.size()) return false;
  for (std::size_t k = 0; k < a.rows.size(); ++k) {
    const auto& x = a.rows[k];
    const auto& y = b.rows[k];
    if (x.replication != y.replication || x.estimator != y.estimator || x.value != y.value ||
        x.failure != y.failure || x.messages != y.messages || x.true_info != y.true_info)
      return false;
  }
  return true;
}

}  // namespace

TEST_CASE("fixed-horizon estimators are consistent") {
  const auto r = run_experiment(brownian_fixed(1000.0, 300));
  for (auto e : {EstimatorKind::CentralizedFixed, EstimatorKind::DecentralizedFixed, EstimatorKind::TimingOnly}) {
    const Aggregate* a = nullptr;
    for (const auto& x : r.aggregates)
      if (x.estimator == e) a = &x;
    REQUIRE(a);
    CHECK(a->n_ok == 300);
    // tB is within Delta of B, so the decentralized bias is at most Delta / A.
    CHECK(std::abs(a->bias) < 4.0 * std::sqrt(a->variance / 300.0) + 2.0 * std::pow(1000.0, 0.25) / 2000.0);
    if (e == EstimatorKind::CentralizedFixed) CHECK(a->ks_p.value_or(0.0) > 1e-3);
  }
  const double bound = 2.0 * std::pow(1000.0, 0.25) / 2000.0;
  for (const auto& row : r.rows)
    if (row.estimator == EstimatorKind::DecentralizedFixed) {
      REQUIRE(row.paired_diff);
      CHECK(std::abs(*row.paired_diff) <= bound * (1 + 1e-12));
    }
  REQUIRE(r.audits.size() == 1);
  CHECK(r.audits[0].failing_replications == 0);
  CHECK(r.audits[0].worst.pass());
}

TEST_CASE("reports are identical across runs, thread counts and order") {
  const auto cfg = brownian_fixed(50.0, 2);
  const auto a = run_experiment(cfg);
  const auto b = run_experiment(cfg);
  const auto c = run_experiment(cfg, {3, true});
  CHECK(same_rows(a, b));
  CHECK(same_rows(a, c));
  auto other = cfg;
  other.master_seed = 315;
  CHECK_FALSE(same_rows(a, run_experiment(other)));
}

TEST_CASE("validation lists every problem") {
  auto c = brownian_fixed(10.0, 0);
  c.points = {-1.0};
  c.estimators.clear();
  try {
    run_experiment(c);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.violations().size() >= 3);
  }
  auto s = brownian_fixed(10.0, 2);
  s.model.kind = ModelKind::OrnsteinUhlenbeck;
  s.model.x.clear();
  s.model.alpha = {1.0, 1.0};
  CHECK_THROWS_AS(validate_experiment(s), ValidationError);  // random information needs c_rule
}

TEST_CASE("sequential runs respect the information sandwich") {
  ExperimentConfig c;
  c.model.kind = ModelKind::OrnsteinUhlenbeck;
  c.model.sensors = 2;
  c.model.alpha = {1.0, 1.0};
  c.lambda_true = -0.5;
  c.regime = Regime::Sequential;
  c.points = {200.0};
  c.delta_rule = {1.0, 0.25};
  c.c_rule = PowerRule{1.0, 0.25};
  c.replications = 40;
  c.master_seed = 8;
  c.horizon = 50.0;
  c.estimators = {EstimatorKind::CentralizedSequential, EstimatorKind::DecentralizedSequential};
  const auto r = run_experiment(c);
  const double c_total = 2.0 * std::pow(200.0, 0.25);
  std::size_t dec = 0;
  for (const auto& row : r.rows) {
    REQUIRE(row.ok());
    REQUIRE(row.stop_time);
    if (row.estimator != EstimatorKind::DecentralizedSequential) continue;
    ++dec;
    CHECK(row.true_info <= 200.0 * (1 + 1e-9));
    CHECK(row.true_info >= 200.0 - c_total - 1e-6);
  }
  CHECK(dec == 40);
  for (const auto& a : r.audits) CHECK(a.failing_replications == 0);
}

TEST_CASE("discrete sampling audit and overshoot table") {
  ExperimentConfig c;
  c.model.sensors = 1;
  c.model.x = {1.0};
  c.regime = Regime::DiscreteSampling;
  c.points = {100.0};
  c.delta_rule = {2.0, 0.0};
  c.h_list = {0.2, 0.1};
  c.replications = 50;
  c.master_seed = 4;
  c.steps_per_unit = 40.0;
  c.estimators = {EstimatorKind::CentralizedFixed, EstimatorKind::DecentralizedFixed};
  const auto r = run_experiment(c);
  CHECK(r.audits.size() == 2);
  for (const auto& a : r.audits) CHECK(a.worst.pass());
  const auto t = overshoot_table(r);
  REQUIRE(t.size() == 2);
  for (const auto& row : t) {
    CHECK(row.mean_eta > 0.0);
    CHECK(row.normalized == doctest::Approx(row.mean_eta / std::cbrt(row.h)));
  }
}

TEST_CASE("monte carlo exit times match the closed-form exit probability") {
  const ExitProblem p{1.0, 1.0, 1.0};
  const auto s = sample_exit_times(p, 4000, 1e-3, 21);
  double up = 0.0, mean = 0.0;
  for (const auto& x : s) {
    up += x.bit;
    mean += x.time;
  }
  up /= 4000.0;
  mean /= 4000.0;
  const double pu = 1.0 / (1.0 + std::exp(-2.0));
  CHECK(std::abs(up - pu) < 4.0 * std::sqrt(pu * (1 - pu) / 4000.0));
  CHECK(mean == doctest::Approx(std::tanh(1.0)).epsilon(0.03));
}

TEST_CASE("renewal study bookkeeping") {
  const auto s = renewal_study(1.0, 1.0, 5.0, 100.0, 30.0, 20.0, 20, 6);
  REQUIRE(s.size() == 20);
  for (const auto& r : s) {
    CHECK(r.deltas.size() == r.m);
    double sum = 0.0;
    for (double d : r.deltas) sum += d;
    CHECK(r.age == doctest::Approx(100.0 - sum));
    CHECK(r.age >= 0.0);
    if (r.excess) CHECK(*r.excess >= 0.0);
    CHECK(r.info_deficit == doctest::Approx(r.age));
  }
}
