#include "hexdg/drivers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "hexdg/output.hpp"

namespace hexdg {

namespace {

bool has_box(const RunConfig& cfg) { return cfg.lo != cfg.hi; }

double case_T0(const RunConfig& cfg) {
  if (cfg.testcase == TestCase::tgv) {
    TGVSetup s;
    s.Ma0 = cfg.Ma0;
    return s.p0(cfg.gamma) / (s.rho0 * cfg.R);
  }
  return 1.0 / cfg.R;
}

TGVSetup tgv_setup(const RunConfig& cfg) {
  TGVSetup s;
  s.Ma0 = cfg.Ma0;
  s.Re = cfg.Re;
  s.version = cfg.tgv_version;
  s.sutherland = cfg.sutherland;
  s.viscous = !cfg.inviscid;
  return s;
}

std::string path_in(const RunConfig& cfg, const std::string& name) { return cfg.output + "/" + name; }

void check_finite(const std::vector<double>& U) {
  for (size_t i = 0; i < U.size(); ++i)
    if (!std::isfinite(U[i]))
      throw AdmissibilityError("non-finite value in the solution at index " + std::to_string(i));
}

CsvTable timers_table(const RunResult& res) {
  CsvTable t;
  t.header = {"kernel", "rank", "seconds"};
  for (const auto& k : res.kernel_times) t.rows.push_back({k.kernel, std::to_string(k.rank), format_double(k.seconds)});
  for (size_t r = 0; r < res.operator_time.size(); ++r)
    t.rows.push_back({"operator", std::to_string(r), format_double(res.operator_time[r])});
  return t;
}

CsvTable trace_table(const RunResult& res) {
  CsvTable t;
  t.header = {"task", "priority", "start", "end", "rank", "evaluation"};
  for (const auto& row : res.trace)
    t.rows.push_back({row.task, priority_name(row.priority), format_double(row.start), format_double(row.end),
                      std::to_string(row.rank), std::to_string(row.evaluation)});
  return t;
}

}  // namespace

GasProperties case_gas(const RunConfig& cfg) {
  GasProperties g;
  g.gamma = cfg.gamma;
  g.R = cfg.R;
  g.Pr = cfg.Pr;
  if (cfg.inviscid) {
    g.mu_ref = 0.0;
  } else if (cfg.mu >= 0.0) {
    g.mu_ref = cfg.mu;
  } else {
    g.mu_ref = cfg.testcase == TestCase::tgv ? tgv_setup(cfg).mu0() : 0.0;
  }
  g.viscosity_law = cfg.sutherland ? ViscosityLaw::sutherland : ViscosityLaw::constant;
  g.T_ref = cfg.T_ref > 0.0 ? cfg.T_ref : case_T0(cfg);
  return g;
}

Mesh case_mesh(const RunConfig& cfg) {
  BoxSpec b;
  b.nx = cfg.elems[0];
  b.ny = cfg.elems[1];
  b.nz = cfg.elems[2];
  b.mixed_frames = cfg.mixed_frames;
  switch (cfg.testcase) {
    case TestCase::tgv:
      b.lo = {0.0, 0.0, 0.0};
      b.hi = {2.0 * M_PI, 2.0 * M_PI, 2.0 * M_PI};
      break;
    case TestCase::mms:
      b.lo = {-1.0, -1.0, -1.0};
      b.hi = {1.0, 1.0, 1.0};
      break;
    case TestCase::sod: {
      const double h = 1.0 / b.nx;
      b.lo = {0.0, 0.0, 0.0};
      b.hi = {1.0, h * b.ny, h * b.nz};
      b.periodic = {false, true, true};
      break;
    }
    case TestCase::freestream:
      b.lo = {0.0, 0.0, 0.0};
      b.hi = {1.0, 1.0, 1.0};
      break;
  }
  if (has_box(cfg)) {
    b.lo = cfg.lo;
    b.hi = cfg.hi;
  }
  Mesh m = generate_box_mesh(b, cfg.N);
  if (cfg.curve_amplitude != 0.0) m = curve_mesh(m, cfg.curve_amplitude);
  return m;
}

CaseSetup build_case(const RunConfig& cfg) {
  cfg.validate();
  const GasProperties gas = case_gas(cfg);
  SchemeConfig sc;
  sc.split = cfg.split;
  sc.riemann = cfg.riemann;
  sc.shock_capturing = cfg.shock_capturing;
  sc.indicator = cfg.indicator;

  ManufacturedSolution ms;
  ms.amplitude = cfg.mms_amplitude;
  ms.speed = cfg.mms_speed;
  SodSetup sod;
  sod.x0 = cfg.sod_x0;
  sod.left.T = sod.left.p / (sod.left.rho * gas.R);
  sod.right.T = sod.right.p / (sod.right.rho * gas.R);
  if (cfg.testcase == TestCase::mms)
    sc.source = [ms, gas](const Vec3& x, double t, double* S) { ms.source(x, t, gas, S); };
  if (cfg.testcase == TestCase::sod) sod_boundaries(sc, sod, gas);

  CaseSetup cs;
  cs.disc = std::make_unique<Discretization>(case_mesh(cfg), cfg.N, cfg.node_type, gas, sc);
  const Discretization& disc = *cs.disc;
  switch (cfg.testcase) {
    case TestCase::tgv: {
      const TGVSetup s = tgv_setup(cfg);
      cs.U0 = tgv_init(disc, s);
      cs.scales = {s.rho0, s.U0, s.L};
      break;
    }
    case TestCase::mms:
      cs.U0 = project_initial(disc, [&](const Vec3& x) { return ms.exact(x, 0.0); });
      cs.exact_density = [ms](const Vec3& x, double t) { return ms.exact(x, t)[0]; };
      break;
    case TestCase::sod:
      cs.U0 = sod_init(disc, sod);
      break;
    case TestCase::freestream: {
      const State5 q{1.0, 0.3, -0.2, 0.1, 1.0 / (gas.gamma - 1.0) + 0.5 * (0.09 + 0.04 + 0.01)};
      cs.U0 = project_initial(disc, [q](const Vec3&) { return q; });
      cs.exact_density = [](const Vec3&, double) { return 1.0; };
      break;
    }
  }
  return cs;
}

RunControl run_control(const RunConfig& cfg) {
  RunControl c;
  c.scheme = cfg.time_scheme;
  c.timestep.cfl = cfg.cfl;
  c.timestep.cfl_visc = cfg.cfl_visc;
  c.t_end = cfg.t_end;
  c.max_steps = cfg.max_steps;
  c.fixed_dt = cfg.fixed_dt;
  c.analyze_every = cfg.analyze_every;
  c.snapshot_every = cfg.snapshot_every;
  return c;
}

RuntimeOptions runtime_options(const RunConfig& cfg) {
  RuntimeOptions o;
  o.n_ranks = cfg.n_ranks;
  o.priorities = cfg.priorities;
  o.chunk_elems = cfg.chunk_elems;
  o.latency_s = cfg.latency;
  o.trace_evaluations = cfg.trace_evaluations;
  return o;
}

std::vector<std::string> timeseries_header() {
  return {"step", "t", "E_k", "eps_S", "eps_D", "dt", "mass", "mom_x", "mom_y", "mom_z", "energy", "max_alpha"};
}

std::vector<std::string> timeseries_row(const AnalysisRecord& r) {
  std::vector<std::string> row{std::to_string(r.step), format_double(r.t),     format_double(r.E_k),
                               format_double(r.eps_S), format_double(r.eps_D), format_double(r.dt)};
  for (double v : r.totals) row.push_back(format_double(v));
  row.push_back(format_double(r.max_alpha));
  return row;
}

std::string snapshot_name(long step) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "snapshot_%08ld.hdgf", step);
  return buf;
}

int report_failure(std::ostream& err) {
  try {
    throw;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const MeshError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const AdmissibilityError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_run(const RunConfig& cfg, std::ostream& log) {
  try {
    CaseSetup cs = build_case(cfg);
    const Discretization& disc = *cs.disc;
    ensure_directory(cfg.output);
    {
      std::ofstream f(path_in(cfg, "config.txt"));
      if (!f) throw IoError("cannot write " + path_in(cfg, "config.txt"));
      f << to_text(cfg);
    }
    const std::string ts_path = path_in(cfg, "timeseries.csv");
    std::ofstream ts(ts_path);
    if (!ts) throw IoError("cannot write " + ts_path);
    const auto header = timeseries_header();
    for (size_t i = 0; i < header.size(); ++i) ts << (i ? "," : "") << header[i];
    ts << "\n" << std::flush;

    RunControl ctl = run_control(cfg);
    ctl.scales = cs.scales;
    ctl.on_analysis = [&](const AnalysisRecord& r) {
      const auto row = timeseries_row(r);
      for (size_t i = 0; i < row.size(); ++i) ts << (i ? "," : "") << row[i];
      ts << "\n" << std::flush;
      if (!ts) throw IoError("write failed: " + ts_path);
      log << "step " << r.step << " t=" << format_double(r.t) << " E_k=" << format_double(r.E_k)
          << " max_alpha=" << r.max_alpha << "\n"
          << std::flush;
    };
    auto write_snap = [&](double t, long step, const std::vector<double>& U, const std::vector<double>& alpha) {
      Snapshot s;
      s.N = disc.N();
      s.n_elems = disc.mesh.n_elems;
      s.time = t;
      s.U = U;
      if (disc.scheme.shock_capturing) s.alpha = alpha;
      write_snapshot(path_in(cfg, snapshot_name(step)), s);
    };
    ctl.on_snapshot = write_snap;
    write_snap(0.0, 0, cs.U0, std::vector<double>(disc.mesh.n_elems, 0.0));

    std::vector<double> U = cs.U0;
    const RunResult res = run_distributed(disc, U, 0.0, ctl, runtime_options(cfg));
    check_finite(U);
    if (cfg.snapshot_every <= 0 && res.steps > 0) write_snap(res.t, res.steps, U, res.alpha);

    write_csv(path_in(cfg, "timers.csv"), timers_table(res));
    if (!res.trace.empty()) write_csv(path_in(cfg, "trace.csv"), trace_table(res));
    if (res.stages > 0) {
      const PerfRecord pr = perf_record(res, cfg.n_ranks, disc.n_dof(), cfg.power_per_rank);
      CsvTable perf;
      perf.header = {"n_ranks", "n_dof", "rk_stages", "walltime", "pid", "epid"};
      perf.rows.push_back({std::to_string(pr.n_ranks), std::to_string(pr.n_dof), std::to_string(pr.n_rk_stages),
                           format_double(pr.walltime), format_double(compute_pid(pr)), format_double(compute_epid(pr))});
      write_csv(path_in(cfg, "perf.csv"), perf);
    }
    log << "finished: t=" << format_double(res.t) << " steps=" << res.steps << " walltime=" << res.walltime
        << " s overlap=" << res.overlap.fraction() << "\n";
    return kExitOk;
  } catch (...) {
    return report_failure(log);
  }
}

std::vector<ConvergenceRow> convergence_study(const RunConfig& cfg, std::ostream* log) {
  std::vector<ConvergenceRow> rows;
  for (int N : cfg.conv_N) {
    double prev = -1.0;
    for (int ne : cfg.conv_meshes) {
      RunConfig c = cfg;
      c.testcase = TestCase::mms;
      c.N = N;
      c.elems = {ne, ne, ne};
      c.n_ranks = std::min(cfg.n_ranks, ne * ne * ne);
      c.analyze_every = 0;
      c.snapshot_every = 0;
      ConvergenceRow row;
      row.N = N;
      row.elems = ne;
      try {
        CaseSetup cs = build_case(c);
        row.n_dof = cs.disc->n_dof();
        std::vector<double> U = cs.U0;
        const RunResult res = run_distributed(*cs.disc, U, 0.0, run_control(c), runtime_options(c));
        check_finite(U);
        row.error = l2_density_error(*cs.disc, U, [&](const Vec3& x) { return cs.exact_density(x, res.t); });
        if (prev > 0.0) {
          row.eoc = std::log2(prev / row.error);
          row.status = row.error < prev ? "ok" : "non-decreasing";
        } else {
          row.status = "ok";
        }
        prev = row.error;
      } catch (const AdmissibilityError&) {
        row.status = "diverged";
        row.error = std::nan("");
        prev = -1.0;
      }
      if (log)
        *log << "N=" << N << " elems=" << ne << "^3 error=" << format_double(row.error) << " eoc=" << row.eoc
             << " " << row.status << "\n"
             << std::flush;
      rows.push_back(row);
    }
  }
  return rows;
}

CsvTable convergence_table(const std::vector<ConvergenceRow>& rows) {
  CsvTable t;
  t.header = {"N", "elems", "n_dof", "l2_error_rho", "eoc", "status"};
  for (const auto& r : rows)
    t.rows.push_back({std::to_string(r.N), std::to_string(r.elems), std::to_string(r.n_dof), format_double(r.error),
                      format_double(r.eoc), r.status});
  return t;
}

int cmd_convergence(const RunConfig& cfg, std::ostream& log) {
  try {
    cfg.validate();
    ensure_directory(cfg.output);
    const auto rows = convergence_study(cfg, &log);
    write_csv(path_in(cfg, "convergence.csv"), convergence_table(rows));
    return kExitOk;
  } catch (...) {
    return report_failure(log);
  }
}

int cmd_scaling(const RunConfig& cfg, std::ostream& log) {
  try {
    cfg.validate();
    ensure_directory(cfg.output);
    std::vector<PerfRecord> strong, weak;
    for (int R : cfg.scaling_ranks) {
      for (bool is_weak : {false, true}) {
        RunConfig c = cfg;
        c.n_ranks = R;
        c.analyze_every = 0;
        c.snapshot_every = 0;
        if (is_weak) c.elems[0] = cfg.elems[0] * R;
        CaseSetup cs = build_case(c);
        std::vector<double> U = cs.U0;
        const RunResult res = run_distributed(*cs.disc, U, 0.0, run_control(c), runtime_options(c));
        check_finite(U);
        (is_weak ? weak : strong).push_back(perf_record(res, R, cs.disc->n_dof(), c.power_per_rank));
        log << (is_weak ? "weak" : "strong") << " ranks=" << R << " dof=" << cs.disc->n_dof()
            << " walltime=" << res.walltime << " s\n"
            << std::flush;
      }
    }
    write_csv(path_in(cfg, "scaling_strong.csv"), scaling_report(strong));
    write_csv(path_in(cfg, "scaling_weak.csv"), scaling_report(weak));
    return kExitOk;
  } catch (...) {
    return report_failure(log);
  }
}

int cmd_perf_report(const RunConfig& cfg, std::ostream& log) {
  try {
    const CsvTable timers = read_csv(path_in(cfg, "timers.csv"));
    std::vector<KernelTime> kernels;
    std::vector<double> op_time;
    const int ck = timers.column("kernel"), cr = timers.column("rank");
    if (ck < 0 || cr < 0 || timers.column("seconds") < 0) throw IoError("timers.csv: missing columns");
    for (size_t i = 0; i < timers.rows.size(); ++i) {
      const std::string& name = timers.rows[i][ck];
      const int rank = std::stoi(timers.rows[i][cr]);
      const double s = timers.number(i, "seconds");
      if (name == "operator") {
        if (static_cast<int>(op_time.size()) <= rank) op_time.resize(rank + 1, 0.0);
        op_time[rank] = s;
      } else {
        kernels.push_back({name, rank, s});
      }
    }
    const CsvTable rep = kernel_report(kernels, op_time);
    write_csv(path_in(cfg, "perf_report.csv"), rep);
    for (const auto& row : rep.rows) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "%-24s rank %-3s %12s s %7s %%\n", row[0].c_str(), row[3].c_str(),
                    row[1].c_str(), row[2].c_str());
      log << buf;
    }
    return kExitOk;
  } catch (...) {
    return report_failure(log);
  }
}

}  // namespace hexdg
