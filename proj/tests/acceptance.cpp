// Runs every acceptance suite and prints one PASS/FAIL line per criterion.

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "onebit/errors.hpp"
#include "onebit/parallel.hpp"
#include "onebit/suites.hpp"

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  onebit::SuiteContext ctx;
  ctx.out_dir = "acceptance_out";
  bool verbose = true;
  std::vector<std::string> only;
  app.add_option("--out", ctx.out_dir, "output directory");
  app.add_option("--seed", ctx.seed, "master seed");
  app.add_option("--only", only, "subset of suites");
  app.add_flag("!--quiet", verbose, "suppress diagnostics");
  CLI11_PARSE(app, argc, argv);
  ctx.threads = onebit::default_threads();
  if (verbose) ctx.log = &std::cout;

  const auto& names = only.empty() ? onebit::suite_names() : only;
  int failed = 0;
  for (const auto& n : names) {
    onebit::SuiteResult r;
    try {
      r = onebit::run_suite(n, ctx);
    } catch (const std::exception& e) {
      r.name = n;
      r.detail = std::string("error: ") + e.what();
    }
    std::cout << onebit::format_result(r) << std::endl;
    failed += r.pass ? 0 : 1;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed == 0 ? 0 : 1;
}
