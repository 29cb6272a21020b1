#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "onebit/experiment.hpp"
#include "onebit/model.hpp"
#include "onebit/trigger.hpp"

namespace onebit {

/// Everything a CLI run needs. experiment.model always mirrors `model`.
struct RunConfig {
  ModelSpec model;
  std::vector<TriggerConfig> trigger;  // per sensor; empty derives thresholds from the experiment rules
  std::optional<ExperimentConfig> experiment;
  std::string output = "onebit_out";
  std::uint64_t master_seed = 0;

  bool operator==(const RunConfig&) const = default;
};

/// Strict YAML parsing: unknown keys are rejected. Defaults: trigger.mode = continuous,
/// experiment.steps_per_unit = 20, model.magnitude_cap = 1e12, model.y0 = 1 (square-root
/// diffusion), output = onebit_out, master_seed = 0.
/// Throws ParseError (malformed document or value) or ValidationError (all violations).
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// Canonical YAML text; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& cfg);

std::string_view to_string(ModelKind kind);
ModelKind model_kind_from_string(std::string_view name);

/// 64-bit FNV-1a, used to tag output files with the config they came from.
std::uint64_t fnv1a64(std::string_view data);

}  // namespace onebit
