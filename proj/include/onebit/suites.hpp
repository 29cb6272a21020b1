#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace onebit {

inline constexpr std::uint64_t kAcceptanceSeed = 20121;

struct SuiteContext {
  std::filesystem::path out_dir = "onebit_suites";
  std::uint64_t seed = kAcceptanceSeed;
  int threads = 1;
  bool reverse_order = false;
  std::ostream* log = nullptr;  // optional diagnostics
};

struct SuiteResult {
  int criterion = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// Suite names in criterion order: bounds, normality, fixed, sequential, timing,
/// density, moments, rate, overshoot, determinism.
const std::vector<std::string>& suite_names();

/// Runs one named suite; outputs go to ctx.out_dir / name. Throws Error(InvalidSpec) for unknown names.
SuiteResult run_suite(const std::string& name, const SuiteContext& ctx);

/// "criterion N (name): PASS|FAIL detail [seconds]".
std::string format_result(const SuiteResult& r);

}  // namespace onebit
