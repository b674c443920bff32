#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "mls/cli.hpp"
#include "mls/config.hpp"
#include "mls/error.hpp"

using namespace mls;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("mls-cli-test-" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "run.ini";
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string error_of(const std::string& text) {
  try {
    parse_config(text, "cfg");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Config);
    return e.what();
  }
  return "";
}

const char* kConfig = R"(# growth of the standard basis
[run]
seed = 5
workers = 1
output_dir = OUT

[metric:S]
kind = word

[metric:Sprime]
kind = word
generators = a b ab

[metric:Sphi]
kind = pullback
inner = S
images = a ba
inverse_images = a bA

[matrices:schottky]
dim = 2
m0 = 4 0 0 0.25
m1 = 2.125 1.875 1.875 2.125

[metric:psi]
kind = matrix-log-norm
matrices = schottky

[census]
metric = S
metric_star = Sprime
radius = 10

[curve]
grid_points = 11

[jsr]
matrices = schottky
depth = 6

[jtl]
metric = psi
semigroup = a A b B
depth = 4
)";

std::string config_in(const fs::path& dir) {
  std::string text = kConfig;
  text.replace(text.find("OUT"), 3, (dir / "out").string());
  return text;
}

}  // namespace

TEST_CASE("config parses sections and resolves metrics") {
  const auto cfg = parse_config(config_in("/tmp/x"), "cfg");
  CHECK(cfg.seed == 5);
  CHECK(cfg.rank == 2);
  REQUIRE(cfg.census);
  CHECK(cfg.census->radius == 10);
  CHECK(cfg.curve.grid_points == 11);
  CHECK(cfg.metric("Sphi").distance(parse_word("b")) == 2);
  CHECK(cfg.metric("psi").distance(parse_word("a")) == doctest::Approx(std::log(4.0)));
  CHECK(cfg.matrix_set("schottky").size() == 2);
}

TEST_CASE("config errors name the line and field") {
  CHECK(error_of("[census]\nmetric = S\nradius = ten\n").find("cfg:3: census.radius: not a number") !=
        std::string::npos);
  CHECK(error_of("[nonsense]\n").find("cfg:1: nonsense: unknown section") != std::string::npos);
  CHECK(error_of("[metric:A]\nkind = word\nbogus = 1\n").find("cfg:3: metric:A.bogus: unknown field") !=
        std::string::npos);
  CHECK(error_of("[census]\nmetric = missing\nradius = 3\n").find("census.metric: unknown metric") !=
        std::string::npos);
  CHECK(error_of("[metric:A]\nkind = pullback\ninner = A\nimages = a b\ninverse_images = a b\n")
            .find("cycle") != std::string::npos);
  CHECK(error_of("[metric:A]\nkind = word\ngenerators = a q\n").find("metric:A.generators") != std::string::npos);
  CHECK(error_of("[run]\nworkers = 0\n").find("run.workers: must be positive") != std::string::npos);
  CHECK(error_of("[run\n").find("cfg:1: syntax") != std::string::npos);
  CHECK(error_of("[matrices:M]\ndim = 2\nm0 = 1 2 3\n").find("matrices:M.m0: expected 4") != std::string::npos);
}

TEST_CASE("inline bound evaluation") {
  const auto dir = scratch("bound");
  const auto cfg = write_config(dir, "[run]\noutput_dir = " + (dir / "out").string() + "\n");
  auto r = run({"bound", "rigidity-hyperbolic", "L=4", "eta=1", "alpha=0", "delta=0", "K=38"});
  CHECK(r.code == 0);
  CHECK(r.out == "bound rigidity-hyperbolic: 2\n");
  r = run({"bound", "rigidity-hyperbolic", "L=2", "eta=1", "alpha=0", "delta=0"});
  CHECK(r.code == 2);
  r = run({"bound", "rigidity-hyperbolic", "L=4", "eta=1", "alpha=0", "delta=0", "bogus=1"});
  CHECK(r.code == 1);
  r = run({"bound", "no-such-formula"});
  CHECK(r.code == 1);
  (void)cfg;
}

TEST_CASE("growth writes a rate file") {
  const auto dir = scratch("growth");
  const auto cfg = write_config(dir, "[run]\noutput_dir = " + (dir / "out").string() +
                                         "\n[metric:S]\nkind = word\n[census]\nmetric = S\nradius = 12\n");
  const auto r = run({"growth", cfg.string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("growth: rate") == 0);
  const auto j = nlohmann::json::parse(slurp(dir / "out" / "growth.json"));
  CHECK(std::abs(j["rate"].get<double>() - std::log(3.0)) <= 1e-9);
  CHECK(slurp(dir / "out" / "counts.csv").rfind("T,N\n0,1\n1,5\n", 0) == 0);
}

TEST_CASE("outputs are identical across worker counts") {
  const auto dir = scratch("determinism");
  const auto cfg = write_config(dir, config_in(dir));
  for (const char* cmd : {"ball", "conj", "curve", "beta", "dilation", "tau", "jsr", "bochi", "jtl"}) {
    const auto a = run({"--workers", "1", cmd, cfg.string()});
    REQUIRE_MESSAGE(a.code == 0, cmd << ": " << a.err);
    std::map<std::string, std::string> first;
    for (const auto& e : fs::directory_iterator(dir / "out")) first[e.path().filename().string()] = slurp(e.path());
    const auto b = run({"--workers", "3", cmd, cfg.string()});
    REQUIRE(b.code == 0);
    CHECK(a.out == b.out);
    for (const auto& [name, content] : first) CHECK_MESSAGE(slurp(dir / "out" / name) == content, cmd << " " << name);
    fs::remove_all(dir / "out");
  }
}

TEST_CASE("correlate on an automorphism pair") {
  const auto dir = scratch("correlate");
  const auto cfg = write_config(dir, "[run]\noutput_dir = " + (dir / "out").string() +
                                         "\n[metric:S]\nkind = word\n[metric:P]\nkind = pullback\ninner = S\n"
                                         "images = a ba\ninverse_images = a bA\n"
                                         "[census]\nmetric = S\nmetric_star = P\nradius = 8\nfilter = equality\n");
  const auto r = run({"correlate", cfg.string()});
  CHECK_MESSAGE(r.code == 0, r.err);
  CHECK(slurp(dir / "out" / "counts.csv").find("8,") != std::string::npos);
}

TEST_CASE("exit codes for budgets, missing sections and usage") {
  const auto dir = scratch("codes");
  const auto cfg = write_config(dir, "[run]\noutput_dir = " + (dir / "out").string() +
                                         "\n[matrices:M]\ndim = 2\nm0 = 1 1 0 1\nm1 = 1 0 1 1\n"
                                         "[jsr]\nmatrices = M\ndepth = 30\nbudget = 1000\n");
  CHECK(run({"jsr", cfg.string()}).code == 3);
  CHECK(run({"growth", cfg.string()}).code == 1);
  CHECK(run({"jsr", (dir / "missing.ini").string()}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({"scenario", "unknown"}).code == 1);
}

TEST_CASE("output directory falls back to the environment") {
  const auto dir = scratch("env");
  const auto cfg = write_config(dir, "[bound]\nformula = rigidity-hyperbolic\nL = 4\neta = 1\nalpha = 0\ndelta = 0\n");
  ::setenv(kOutputDirEnv, (dir / "envout").string().c_str(), 1);
  const auto r = run({"bound", cfg.string()});
  ::unsetenv(kOutputDirEnv);
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "envout" / "bound.json"));
}
