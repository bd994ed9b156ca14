#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include <sys/wait.h>

#include <json.hpp>

#include "qmem/config.hpp"
#include "qmem/csv.hpp"
#include "qmem/errors.hpp"
#include "qmem/run.hpp"

using namespace qmem;
namespace fs = std::filesystem;

namespace {

const char* const kSmallKernel =
    "regime = high_speed\n"
    "L = 10\n"
    "T_W = 5.5\n"
    "direction = backward\n"
    "n_t = 32\n"
    "n_tp = 32\n"
    "n_z = 128\n"
    "experiment = kernel\n";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("qmem_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int parse_error_line(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + QMEM_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("parsing a minimal configuration") {
  const RunConfig c = parse_config(std::string("# comment\n\n") + kSmallKernel);
  CHECK(c.model.regime == Regime::high_speed);
  CHECK(c.model.read_time == 5.5);
  CHECK(c.model.n_z == 128);
  CHECK(c.experiment == Experiment::kernel);
  CHECK(c.outdir == "out");
  CHECK_FALSE(c.source.has_value());
  const RunConfig trailing = parse_config("regime=adiabatic # inline\nL=1\nT_W=2\ndirection=forward\nexperiment=modes\n");
  CHECK(trailing.model.regime == Regime::adiabatic);
  CHECK(trailing.model.n_t == 256);
}

TEST_CASE("configuration errors carry line numbers") {
  const std::string base = kSmallKernel;
  CHECK(parse_error_line(base + "direction = sideways\n") == 9);
  CHECK(parse_error_line("regime = high_speed\nL = 10\nT_W = 5.5\ndirection = sideways\nexperiment = kernel\n") == 4);
  CHECK(parse_error_line(base + "bogus = 1\n") == 9);
  CHECK(parse_error_line("regime = high_speed\nL = 10\ndirection = backward\nexperiment = kernel\n") == 4);
  CHECK(parse_error_line("regime = high_speed\nL = -1\nT_W = 5.5\ndirection = backward\nexperiment = kernel\n") == 2);
  CHECK(parse_error_line("regime = high_speed\nL = ten\n") == 2);
  CHECK(parse_error_line("n_t = 33\nregime = high_speed\nL = 10\nT_W = 5.5\ndirection = backward\nexperiment = kernel\n") == 1);
  CHECK(parse_error_line("just a line\n") == 1);

  const std::string curve = "regime = high_speed\nL = 10\nT_W = 5.5\ndirection = backward\n"
                            "experiment = efficiency-curve\nsource.kind = laser\nsource.kappa = 18\n"
                            "source.mu = 0.01\nsource.p = 1\n";
  CHECK(parse_error_line(curve + "sweep.start = 1\nsweep.stop = 2\nsweep.count = 0\n") == 12);
  CHECK(parse_error_line(curve + "sweep.start = 1\nsweep.stop = 2\nsweep.count = 3\nsweep.count = 4\n") == 13);
  CHECK(parse_error_line(curve + "source.s = 0.5\nsweep.start = 1\nsweep.stop = 2\nsweep.count = 3\n") == 10);
  CHECK(parse_error_line(curve) > 0);  // sweep missing
  CHECK(parse_config(curve + "sweep.start = 1\nsweep.stop = 2\nsweep.count = 3\n").sweep->count == 3);
  CHECK(parse_error_line(base + "sweep.start = 1\nsweep.stop = 2\nsweep.count = 3\n") > 0);
}

TEST_CASE("csv round trip is bit exact") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  CsvTable t;
  std::vector<double> a, b;
  for (int i = 0; i < 200; ++i) {
    a.push_back(u(rng) * std::pow(10.0, i % 40 - 20));
    b.push_back(std::nextafter(1.0, 2.0) * i);
  }
  a[0] = std::numeric_limits<double>::min();
  a[1] = -0.0;
  t.add("a", a);
  t.add("b", b);
  const CsvTable back = parse_csv(to_csv(t));
  REQUIRE(back.header == t.header);
  for (std::size_t c = 0; c < 2; ++c)
    for (std::size_t i = 0; i < t.rows(); ++i) CHECK(back.columns[c][i] == t.columns[c][i]);
  CHECK(std::signbit(back.columns[0][1]));
  CHECK_THROWS_AS(parse_csv("x,y\n1,2\n3\n"), ParseError);
  CHECK_THROWS_AS(parse_csv("x\nabc\n"), ParseError);
  CsvTable ragged;
  ragged.add("a", std::vector<double>{1, 2});
  ragged.add("b", std::vector<double>{1});
  CHECK_THROWS_AS(to_csv(ragged), UsageError);
}

TEST_CASE("configuration hash") {
  const RunConfig a = parse_config(kSmallKernel);
  RunConfig b = parse_config(std::string("# reordered\nexperiment = kernel\n") +
                             "n_z = 128\nn_tp = 32\nn_t = 32\ndirection = backward\nT_W = 5.5\nL = 10\n"
                             "regime = high_speed\noutdir = elsewhere\n");
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 16);
  b.model.length = 10.000000000000002;
  CHECK(config_hash(a) != config_hash(b));
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("runs are deterministic") {
  const fs::path d1 = scratch("det1"), d2 = scratch("det2");
  const RunConfig c = parse_config(kSmallKernel);
  std::ostringstream diag;
  RunOptions o1, o2;
  o1.outdir = d1.string();
  o2.outdir = d2.string();
  const RunOutcome r1 = run(c, o1, diag);
  const RunOutcome r2 = run(c, o2, diag);
  CHECK(r1.exit_code == kExitOk);
  REQUIRE(r1.files.size() == r2.files.size());
  for (const char* name : {"kernel.csv", "kernel.json", "summary.json"}) {
    REQUIRE(fs::exists(d1 / name));
    CHECK(slurp(d1 / name) == slurp(d2 / name));
  }
  const auto s = nlohmann::json::parse(slurp(d1 / "summary.json"));
  for (const char* key : {"software", "config_hash", "experiment", "parameters", "results", "checks", "convergence",
                          "warnings", "files"})
    CHECK(s.contains(key));
  CHECK(s["config_hash"] == config_hash(c));
  const CsvTable k = parse_csv(slurp(d1 / "kernel.csv"));
  CHECK(k.rows() == 33);
  CHECK(k.columns.size() == 34);
}

TEST_CASE("command line exit codes") {
  const fs::path dir = scratch("cli");
  const fs::path good = dir / "good.conf", bad = dir / "bad.conf", coarse = dir / "coarse.conf";
  write_file(good.string(), kSmallKernel);
  write_file(bad.string(), std::string(kSmallKernel) + "direction = sideways\n");
  write_file(coarse.string(),
             "regime = adiabatic\nL = 55\nT_W = 55\ndirection = backward\nn_t = 64\nn_tp = 64\nn_z = 64\n"
             "experiment = kernel\n");
  const std::string out = " --outdir \"" + (dir / "out").string() + "\"";
  CHECK(run_cli("\"" + good.string() + "\"" + out) == 0);
  CHECK(fs::exists(dir / "out" / "summary.json"));
  CHECK(run_cli("\"" + bad.string() + "\"" + out) == 1);
  CHECK(run_cli("\"" + (dir / "missing.conf").string() + "\"" + out) == 1);
  CHECK(run_cli("--grid-scale 0 \"" + good.string() + "\"" + out) == 1);
  CHECK(run_cli("") == 1);
  CHECK(run_cli("\"" + coarse.string() + "\"" + out) == 2);
  CHECK(run_cli("--version") == 0);
}

TEST_CASE("shipped configurations parse") {
  for (const auto& e : fs::directory_iterator(QMEM_CONFIG_DIR)) {
    if (e.path().extension() != ".conf") continue;
    CAPTURE(e.path().string());
    CHECK_NOTHROW(load_config(e.path().string()));
  }
}
