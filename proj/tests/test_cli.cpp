#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hexdg/drivers.hpp"

using namespace hexdg;
namespace fs = std::filesystem;

namespace {

std::string scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("hexdg_test_" + name);
  fs::remove_all(p);
  return p.string();
}

RunConfig small_tgv(const std::string& out) {
  RunConfig c;
  c.testcase = TestCase::tgv;
  c.N = 2;
  c.elems = {2, 2, 2};
  c.max_steps = 10;
  c.t_end = 100.0;
  c.analyze_every = 2;
  c.output = out;
  return c;
}

}  // namespace

TEST_CASE("configuration defaults and round trip") {
  const RunConfig d = parse_config_text("");
  CHECK(d == RunConfig{});
  RunConfig c;
  c.testcase = TestCase::sod;
  c.N = 5;
  c.node_type = NodeType::LGL;
  c.split = true;
  c.shock_capturing = true;
  c.elems = {7, 3, 2};
  c.cfl = 0.333;
  c.conv_meshes = {3, 6};
  c.output = "some/dir";
  CHECK(parse_config_text(to_text(c)) == c);
  CHECK(defaults_text().find("cfl") != std::string::npos);
}

TEST_CASE("keys are case-insensitive and comments are ignored") {
  const RunConfig c = parse_config_text("! comment line\nN = 4   ! trailing\n  NodeType = lgl\nOPERATOR = split\n");
  CHECK(c.N == 4);
  CHECK(c.node_type == NodeType::LGL);
  CHECK(c.split);
}

TEST_CASE("configuration errors name the offending keys") {
  auto message = [](const std::string& text) {
    try {
      parse_config_text(text, "case.ini");
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  const std::string split = message("operator = split\nnodetype = GL\n");
  CHECK(split.find("operator") != std::string::npos);
  CHECK(split.find("nodetype") != std::string::npos);
  const std::string unknown = message("n = 3\nfoo = 1\n");
  CHECK(unknown.find("foo") != std::string::npos);
  CHECK(unknown.find("2") != std::string::npos);
  CHECK(message("n = three\n").find("n") != std::string::npos);
  CHECK_FALSE(message("ranks = 100\nnelems = 2 2 2\n").empty());
  CHECK_FALSE(message("cfl = -1\n").empty());
  CHECK_THROWS_AS(parse_config("/nonexistent/hexdg.ini"), ConfigError);
}

TEST_CASE("CSV and snapshot files round trip exactly") {
  const std::string dir = scratch("io");
  ensure_directory(dir);
  CsvTable t;
  t.header = {"a", "b"};
  t.rows = {{format_double(0.1), format_double(1.0 / 3.0)}, {"x", format_double(-2e-300)}};
  write_csv(dir + "/t.csv", t);
  const CsvTable r = read_csv(dir + "/t.csv");
  CHECK(r.header == t.header);
  CHECK(r.rows == t.rows);
  CHECK(r.number(0, "b") == 1.0 / 3.0);

  Snapshot s;
  s.N = 1;
  s.n_elems = 2;
  s.time = 0.25;
  for (int i = 0; i < 2 * 8 * 5; ++i) s.U.push_back(std::sin(i) / 7.0);
  s.alpha = {0.0, 0.3};
  write_snapshot(dir + "/s.hdgf", s);
  const Snapshot q = read_snapshot(dir + "/s.hdgf");
  CHECK(q.N == 1);
  CHECK(q.time == 0.25);
  CHECK(q.U == s.U);
  CHECK(q.alpha == s.alpha);

  std::ofstream(dir + "/bad.hdgf") << "NOPE and more bytes";
  CHECK_THROWS_AS(read_snapshot(dir + "/bad.hdgf"), IoError);
  CHECK_THROWS_AS(read_csv(dir + "/missing.csv"), IoError);
}

TEST_CASE("run command writes the time series and snapshots") {
  const std::string dir = scratch("run");
  std::ostringstream log;
  REQUIRE(cmd_run(small_tgv(dir), log) == kExitOk);
  const CsvTable ts = read_csv(dir + "/timeseries.csv");
  CHECK(ts.header == timeseries_header());
  CHECK(ts.rows.size() == 6);
  CHECK(ts.number(0, "step") == 0.0);
  CHECK(ts.number(5, "step") == 10.0);
  CHECK(ts.number(0, "E_k") == doctest::Approx(0.125).epsilon(1e-2));
  CHECK(fs::exists(dir + "/config.txt"));
  CHECK(fs::exists(dir + "/timers.csv"));
  const Snapshot s = read_snapshot(dir + "/" + snapshot_name(10));
  CHECK(s.N == 2);
  CHECK(s.n_elems == 8);
  CHECK(s.U.size() == 8u * 27u * 5u);
}

TEST_CASE("repeated runs give identical output") {
  const std::string a = scratch("det_a"), b = scratch("det_b");
  std::ostringstream log;
  RunConfig c = small_tgv(a);
  c.n_ranks = 3;
  REQUIRE(cmd_run(c, log) == kExitOk);
  c.output = b;
  REQUIRE(cmd_run(c, log) == kExitOk);
  CHECK(read_csv(a + "/timeseries.csv").rows == read_csv(b + "/timeseries.csv").rows);
  CHECK(read_snapshot(a + "/" + snapshot_name(10)).U == read_snapshot(b + "/" + snapshot_name(10)).U);
}

TEST_CASE("numerical failure exits with code 3 and keeps earlier snapshots") {
  const std::string dir = scratch("nan");
  RunConfig c = small_tgv(dir);
  c.cfl = 50.0;
  c.max_steps = 200;
  std::ostringstream log;
  int code = 0;
  try {
    code = cmd_run(c, log);
  } catch (...) {
    std::ostringstream err;
    code = report_failure(err);
    CHECK(err.str().find("numerical") != std::string::npos);
  }
  CHECK(code == kExitNumerical);
  CHECK(fs::exists(dir + "/" + snapshot_name(0)));
}

TEST_CASE("unwritable output directory exits with code 4") {
  const std::string file = scratch("blocker");
  std::ofstream(file) << "x";
  RunConfig c = small_tgv(file + "/sub");
  std::ostringstream log;
  int code = 0;
  try {
    code = cmd_run(c, log);
  } catch (...) {
    std::ostringstream err;
    code = report_failure(err);
  }
  CHECK(code == kExitIo);
}

TEST_CASE("convergence command: errors decrease under refinement") {
  const std::string dir = scratch("conv");
  RunConfig c;
  c.testcase = TestCase::mms;
  c.conv_N = {3};
  c.conv_meshes = {2, 4, 8};
  c.t_end = 0.05;
  c.output = dir;
  const auto rows = convergence_study(c);
  REQUIRE(rows.size() == 3);
  CHECK(rows[1].error < rows[0].error);
  CHECK(rows[2].error < rows[1].error);
  CHECK(rows[2].eoc > 3.0);
  std::ostringstream log;
  CHECK(cmd_convergence(c, log) == kExitOk);
  const CsvTable t = read_csv(dir + "/convergence.csv");
  CHECK(t.rows.size() == 3);
  CHECK(t.column("eoc") >= 0);
}
