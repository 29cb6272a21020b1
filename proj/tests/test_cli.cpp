#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

const fs::path kRoot = "cli_out";

int run(const std::string& args, std::string* output = nullptr) {
  fs::create_directories(kRoot);
  const auto log = kRoot / "last.log";
  const std::string cmd = std::string(ONEBIT_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  if (output) {
    std::ifstream in(log);
    std::stringstream ss;
    ss << in.rdbuf();
    *output = ss.str();
  }
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path write(const std::string& name, const std::string& text) {
  fs::create_directories(kRoot);
  const auto p = kRoot / name;
  std::ofstream(p) << text;
  return p;
}

const char* kConfig = R"(master_seed: 5
model:
  kind: brownian_constant
  sensors: 2
  x: [1, 2]
experiment:
  lambda: 1
  points: [20]
  delta_rule: {a: 1, b: 0.25}
  replications: 4
  estimators: [centralized_fixed, decentralized_fixed, timing_only]
)";

std::vector<fs::path> files_in(const fs::path& dir, const std::string& suffix) {
  std::vector<fs::path> out;
  if (!fs::exists(dir)) return out;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().string().ends_with(suffix)) out.push_back(e.path());
  return out;
}

}  // namespace

TEST_CASE("usage errors exit 1") {
  std::string out;
  CHECK(run("", &out) == 1);
  CHECK(out.find("simulate") != std::string::npos);
  CHECK(run("frobnicate", &out) == 1);
  CHECK(out.find("Usage") != std::string::npos);
}

TEST_CASE("invalid configs exit 1") {
  const auto bad = write("bad.yaml", std::string(kConfig) + "foo: 3\n");
  std::string out;
  CHECK(run("experiment --config " + bad.string(), &out) == 1);
  CHECK(out.find("foo") != std::string::npos);
  CHECK(run("density --delta -1", &out) == 1);
  CHECK(run("suite --name nosuch", &out) == 1);
}

TEST_CASE("runtime failures exit 2") {
  const auto cfg = write("ok.yaml", kConfig);
  const auto blocker = write("blocker", "x");
  CHECK(run("simulate --config " + cfg.string() + " --out " + (blocker / "sub").string()) == 2);
}

TEST_CASE("simulate, estimate and experiment write outputs under --out") {
  const auto cfg = write("ok.yaml", kConfig);
  const auto dir = kRoot / "run";
  fs::remove_all(dir);
  CHECK(run("simulate --config " + cfg.string() + " --out " + dir.string()) == 0);
  CHECK(files_in(dir, "_paths.csv").size() == 1);
  CHECK(files_in(dir, "_messages.csv").size() == 1);
  CHECK(run("estimate --config " + cfg.string() + " --out " + dir.string()) == 0);
  CHECK(files_in(dir, "_estimates.csv").size() == 1);
  CHECK(run("experiment --config " + cfg.string() + " --out " + dir.string() + " --threads 2") == 0);
  CHECK(files_in(dir, "_summary.json").size() == 1);

  // Seed override changes the output stem.
  CHECK(run("experiment --config " + cfg.string() + " --out " + dir.string() + " --seed 6") == 0);
  CHECK(files_in(dir, "_summary.json").size() == 2);
}

TEST_CASE("density with zero drift has equal columns") {
  const auto dir = kRoot / "density";
  fs::remove_all(dir);
  REQUIRE(run("density --lambda 0 --delta 2 --x 1 --t-start 0.05 --t-end 8 --n 50 --out " + dir.string()) == 0);
  const auto f = files_in(dir, ".csv");
  REQUIRE(f.size() == 1);
  std::ifstream in(f[0]);
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,p_up,p_down");
  int rows = 0;
  while (std::getline(in, line)) {
    const auto a = line.find(',');
    const auto b = line.find(',', a + 1);
    CHECK(line.substr(a + 1, b - a - 1) == line.substr(b + 1));
    ++rows;
  }
  CHECK(rows == 50);
}

TEST_CASE("bounds suite passes") {
  std::string out;
  CHECK(run("suite --name bounds --out " + (kRoot / "suites").string(), &out) == 0);
  CHECK(out.find("PASS") != std::string::npos);
}
