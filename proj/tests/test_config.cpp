#include <doctest.h>

#include <string>

#include "onebit/config.hpp"
#include "onebit/errors.hpp"

using namespace onebit;

namespace {

const char* kMinimal = R"(model:
  kind: brownian_constant
  sensors: 2
  x: [1, 1]
trigger:
  delta_up: 1
  delta_down: 1
)";

const char* kFull = R"(master_seed: 17
output: runs/full
model:
  kind: correlated_diffusion
  sensors: 2
  sigma:
    - [1, 0]
    - [{type: piecewise_constant, breaks: [2.5], values: [0.5, -0.25]}, {type: polynomial, coeffs: [1, 0.1]}]
trigger:
  - {delta_up: 1.5, delta_down: 0.5, c: 0.3}
  - {delta_up: 1, delta_down: 1, c: 0.1, mode: discrete_sampling, h: 0.05}
experiment:
  lambda: -0.3
  regime: sequential
  points: [100, 1000]
  delta_rule: {a: 1, b: 0.25}
  c_rule: {a: 0.5, b: 0.25}
  replications: 10
  estimators: [centralized_sequential, decentralized_sequential]
  steps_per_unit: 40
  horizon: 500
)";

std::vector<std::string> violations(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ValidationError& e) {
    return e.violations();
  }
  return {};
}

bool mentions(const std::vector<std::string>& v, const std::string& s) {
  for (const auto& x : v)
    if (x.find(s) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("minimal config gets documented defaults") {
  const auto c = parse_config(kMinimal);
  CHECK(c.model.kind == ModelKind::BrownianConstant);
  CHECK(c.model.sensors == 2);
  CHECK(c.model.magnitude_cap == 1e12);
  REQUIRE(c.trigger.size() == 2);
  CHECK(c.trigger[1].mode == TriggerMode::Continuous);
  CHECK_FALSE(c.trigger[0].c);
  CHECK(c.output == "onebit_out");
  CHECK(c.master_seed == 0);
  CHECK_FALSE(c.experiment);
  CHECK(c.model.deterministic_cross == std::vector<std::vector<bool>>{{true, true}, {true, true}});
}

TEST_CASE("unknown keys are rejected by name") {
  auto v = violations(std::string(kMinimal) + "foo: 1\n");
  CHECK(mentions(v, "foo"));
  v = violations(R"(model:
  kind: brownian_constant
  sensors: 1
  x: [1]
  foo: 2
)");
  CHECK(mentions(v, "foo"));
}

TEST_CASE("thresholds must be positive") {
  const auto v = violations(R"(model:
  kind: brownian_constant
  sensors: 1
  x: [1]
trigger:
  delta_up: 1
  delta_down: -1
)");
  CHECK(mentions(v, "delta_down"));
}

TEST_CASE("every violation is reported") {
  const auto v = violations(R"(model:
  kind: brownian_constant
  sensors: 1
  x: [1]
  bar: 1
trigger:
  delta_up: -1
  delta_down: 1
  baz: 2
)");
  CHECK(v.size() >= 3);
  CHECK(mentions(v, "bar"));
  CHECK(mentions(v, "baz"));
  CHECK(mentions(v, "delta_up"));
}

TEST_CASE("malformed values raise a parse error with a line") {
  try {
    parse_config("model:\n  kind: brownian_constant\n  sensors: two\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.field() == "model.sensors");
  }
}

TEST_CASE("serialization round-trips") {
  for (const char* text : {kMinimal, kFull}) {
    const auto c = parse_config(text);
    const auto s = serialize_config(c);
    const auto back = parse_config(s);
    CHECK(back == c);
    CHECK(serialize_config(back) == s);
  }
  const auto full = parse_config(kFull);
  REQUIRE(full.experiment);
  CHECK(full.experiment->master_seed == 17);
  CHECK(full.trigger[1].h == 0.05);
  CHECK(full.model.sigma[1][0](3.0) == -0.25);
}

TEST_CASE("names round-trip") {
  for (auto k : {ModelKind::BrownianConstant, ModelKind::GaussianDetInfo, ModelKind::OrnsteinUhlenbeck,
                 ModelKind::SquareRootDiffusion, ModelKind::CorrelatedDiffusion})
    CHECK(model_kind_from_string(to_string(k)) == k);
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}
