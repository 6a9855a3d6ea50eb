#include <doctest.h>

#include "hexdg/perf.hpp"

using namespace hexdg;

TEST_CASE("PID from wall time, ranks, stages and DOF") {
  PerfRecord r;
  r.walltime = 10.0;
  r.n_ranks = 4;
  r.n_rk_stages = 100;
  r.n_dof = 100000;
  CHECK(compute_pid(r) == doctest::Approx(4e-6).epsilon(1e-14));
  r.power_per_rank = 2.5;
  CHECK(compute_epid(r) == doctest::Approx(1e-5).epsilon(1e-14));
}

TEST_CASE("EPID reference values") {
  auto epid = [](double power, double pid) {
    PerfRecord r;
    r.walltime = pid;
    r.n_ranks = 1;
    r.n_rk_stages = 1;
    r.n_dof = 1;
    r.power_per_rank = power;
    return compute_epid(r);
  };
  CHECK(epid(448.0, 4.579389e-9) == doctest::Approx(2.05e-6).epsilon(1e-3));
  CHECK(epid(4.9414, 1.024092e-6) == doctest::Approx(5.06e-6).epsilon(1e-3));
}

TEST_CASE("PID rejects zero counts") {
  PerfRecord r;
  r.walltime = 1.0;
  r.n_ranks = 1;
  r.n_rk_stages = 0;
  r.n_dof = 8;
  CHECK_THROWS_AS(compute_pid(r), std::invalid_argument);
  r.n_rk_stages = 5;
  r.n_dof = 0;
  CHECK_THROWS_AS(compute_pid(r), std::invalid_argument);
  r.n_dof = 8;
  r.power_per_rank = -1.0;
  CHECK_THROWS_AS(compute_epid(r), std::invalid_argument);
}

TEST_CASE("scaling report efficiencies") {
  PerfRecord a;
  a.walltime = 8.0;
  a.n_ranks = 1;
  a.n_rk_stages = 10;
  a.n_dof = 1000;
  PerfRecord b = a;
  b.n_ranks = 2;
  b.walltime = 4.0;
  PerfRecord c = a;
  c.n_ranks = 2;
  c.n_dof = 2000;
  c.walltime = 16.0;
  const CsvTable t = scaling_report({a, b, c});
  REQUIRE(t.rows.size() == 3);
  CHECK(t.number(1, "weak_efficiency") == doctest::Approx(1.0));
  CHECK(t.number(1, "strong_speedup") == doctest::Approx(2.0));
  CHECK(t.number(2, "weak_efficiency") == doctest::Approx(0.5));
  CHECK(t.number(0, "dof_per_rank") == 1000.0);
  CHECK_THROWS_AS(scaling_report({a}), std::invalid_argument);
}

TEST_CASE("kernel report percentages") {
  std::vector<KernelTime> k = {{"vol_int", 0, 3.0}, {"surf_int", 0, 1.0}, {"vol_int", 0, 1.0}, {"prolong", 1, 2.0}};
  const CsvTable t = kernel_report(k);
  REQUIRE(t.rows.size() == 3);
  CHECK(t.rows[0][0] == "vol_int");
  CHECK(t.number(0, "total_s") == 4.0);
  CHECK(t.number(0, "percent") == doctest::Approx(80.0));
  CHECK(t.number(1, "percent") == doctest::Approx(20.0));
  CHECK(t.number(2, "percent") == doctest::Approx(100.0));
  const CsvTable u = kernel_report(k, {10.0, 4.0});
  CHECK(u.number(0, "percent") == doctest::Approx(40.0));
  CHECK(u.number(2, "percent") == doctest::Approx(50.0));
}
