#include "hexdg/runtime.hpp"

#include <algorithm>
#include <exception>
#include <map>
#include <mutex>
#include <set>
#include <thread>

namespace hexdg {

namespace {

class RankSolver {
 public:
  RankSolver(const Discretization& disc, const Partition& part, Transport& tr, const RuntimeOptions& opt)
      : disc_(disc), tr_(tr), opt_(opt), dom_(RankDomain::build(disc, part)), rank_(part.rank) {
    data_.allocate(disc, dom_);
    build_graph();
    sched_ = std::make_unique<Scheduler>(graph_, &tr_, rank_, ScheduleOptions{opt_.priorities});
  }

  const RankDomain& domain() const { return dom_; }

  /// Ut = L(U, t) on this rank's elements.
  void evaluate(const double* U, double t, double* Ut, bool timed) {
    cur_U_ = U;
    cur_Ut_ = Ut;
    cur_t_ = t;
    const auto t0 = Clock::now();
    events_.clear();
    OverlapStats ov;
    sched_->run(origin_, events_, ov);
    const double dt = std::chrono::duration<double>(Clock::now() - t0).count();
    if (timed) {
      overlap_.add(ov);
      operator_time_ += dt;
      double busy = 0.0;
      for (const TraceEvent& ev : events_) {
        kernel_time_[graph_.tasks()[ev.task].kernel] += ev.end - ev.start;
        busy += ev.end - ev.start;
      }
      kernel_time_["wait"] += std::max(0.0, dt - busy);
    }
    if (evaluation_ < opt_.trace_evaluations)
      for (const TraceEvent& ev : events_)
        trace_.push_back({graph_.tasks()[ev.task].name, ev.priority, ev.start, ev.end, rank_, evaluation_});
    ++evaluation_;
  }

  void set_origin(Clock::time_point o) { origin_ = o; }
  const RankData& data() const { return data_; }
  RankData& data() { return data_; }

  double operator_time_ = 0.0;
  std::map<std::string, double> kernel_time_;
  OverlapStats overlap_;
  std::vector<TraceRow> trace_;

 private:
  void build_graph();
  std::vector<int> chunks_touching(const std::vector<int>& sides) const;

  void pack_send(int to, Phase phase, const std::vector<double>& arr, int nvar, const std::vector<int>& sides) {
    const size_t blk = static_cast<size_t>(disc_.nf()) * nvar;
    std::vector<double> buf;
    buf.reserve(blk * sides.size());
    for (int s : sides) buf.insert(buf.end(), arr.begin() + s * blk, arr.begin() + (s + 1) * blk);
    tr_.send(rank_, to, phase, std::move(buf));
  }

  void recv_unpack(int from, Phase phase, std::vector<double>& arr, int nvar, const std::vector<int>& sides) {
    const size_t blk = static_cast<size_t>(disc_.nf()) * nvar;
    const std::vector<double> buf = tr_.recv_expect(rank_, from, phase, blk * sides.size());
    for (size_t i = 0; i < sides.size(); ++i)
      std::copy(buf.begin() + i * blk, buf.begin() + (i + 1) * blk, arr.begin() + sides[i] * blk);
  }

  std::vector<double> recv_checked(int from, Phase phase, size_t expect) {
    return tr_.recv_expect(rank_, from, phase, expect);
  }

  const Discretization& disc_;
  Transport& tr_;
  RuntimeOptions opt_;
  RankDomain dom_;
  int rank_;
  RankData data_;
  ElementScratch scratch_;
  TaskGraph graph_;
  std::unique_ptr<Scheduler> sched_;
  std::vector<std::pair<int, int>> chunks_;
  std::vector<int> local_sides_;  // inner + boundary
  std::vector<TraceEvent> events_;
  Clock::time_point origin_ = Clock::now();
  int evaluation_ = 0;

  const double* cur_U_ = nullptr;
  double* cur_Ut_ = nullptr;
  double cur_t_ = 0.0;
};

std::vector<int> RankSolver::chunks_touching(const std::vector<int>& sides) const {
  std::set<int> elems;
  for (int s : sides) {
    const LocalSide& ls = dom_.sides[s];
    if (ls.prim_elem >= 0) elems.insert(ls.prim_elem);
    if (ls.rep_elem >= 0) elems.insert(ls.rep_elem);
  }
  std::vector<int> out;
  for (size_t c = 0; c < chunks_.size(); ++c) {
    auto it = elems.lower_bound(chunks_[c].first);
    if (it != elems.end() && *it < chunks_[c].second) out.push_back(static_cast<int>(c));
  }
  return out;
}

void RankSolver::build_graph() {
  const int ne = dom_.n_elems;
  const int cs = std::max(1, opt_.chunk_elems);
  for (int e = 0; e < ne; e += cs) chunks_.push_back({e, std::min(ne, e + cs)});
  local_sides_ = dom_.inner_sides;
  local_sides_.insert(local_sides_.end(), dom_.boundary_sides.begin(), dom_.boundary_sides.end());
  std::sort(local_sides_.begin(), local_sides_.end());
  const bool visc = disc_.viscous();
  const int nf = disc_.nf();
  const auto& nbs = dom_.neighbors;

  auto add = [&](std::string name, std::string kernel, Priority p, std::vector<int> deps, std::function<void()> fn,
                 std::vector<RecvDep> recvs = {}, std::vector<RecvDep> sends = {}) {
    Task t;
    t.name = std::move(name);
    t.kernel = std::move(kernel);
    t.priority = p;
    t.deps = std::move(deps);
    t.fn = std::move(fn);
    t.recvs = std::move(recvs);
    t.sends = std::move(sends);
    return graph_.add(std::move(t));
  };
  auto chunk_name = [](const char* base, size_t c) { return std::string(base) + "[" + std::to_string(c) + "]"; };
  auto all_of = [](const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> r = a;
    r.insert(r.end(), b.begin(), b.end());
    return r;
  };
  auto sends_to_all = [&](Phase ph) {
    std::vector<RecvDep> s;
    for (const auto& nb : nbs) s.push_back({nb.rank, ph});
    return s;
  };

  std::vector<int> C;
  for (size_t c = 0; c < chunks_.size(); ++c) {
    const auto [e0, e1] = chunks_[c];
    C.push_back(add(chunk_name("cons2prim", c), "cons2prim", Priority::low, {},
                    [this, e0, e1] { kernels::cons_to_prim(disc_, dom_, cur_U_, data_, e0, e1); }));
  }
  const int A = add("prolong_mpi", "prolong", Priority::top, {},
                    [this] {
                      kernels::prolong_to_face(disc_, dom_, cur_U_, data_, dom_.mpi_sides, cur_t_);
                      for (const auto& nb : dom_.neighbors)
                        pack_send(nb.rank, Phase::traces, data_.UR, kNumVars, nb.replica_sides);
                    },
                    {}, sends_to_all(Phase::traces));
  const int B = add("prolong", "prolong", Priority::mid, {},
                    [this] { kernels::prolong_to_face(disc_, dom_, cur_U_, data_, local_sides_, cur_t_); });

  std::vector<int> G;  // lifting surface chunks (viscous only)
  int I = -1;
  std::vector<int> H_deps_all;
  std::vector<int> D_tasks;
  if (visc) {
    for (const auto& nb : nbs) {
      D_tasks.push_back(add("lift_fill_flux_mpi[" + std::to_string(nb.rank) + "]", "lift_fill_flux", Priority::top,
                            {A},
                            [this, &nb] {
                              recv_unpack(nb.rank, Phase::traces, data_.UR, kNumVars, nb.primary_sides);
                              kernels::lift_fill_flux(disc_, dom_, data_, nb.primary_sides, cur_t_);
                              pack_send(nb.rank, Phase::lifted_fluxes, data_.wstar, kNumLifted, nb.primary_sides);
                            },
                            {{nb.rank, Phase::traces}}, {{nb.rank, Phase::lifted_fluxes}}));
    }
    const int E = add("lift_fill_flux", "lift_fill_flux", Priority::mid, {B},
                      [this] { kernels::lift_fill_flux(disc_, dom_, data_, local_sides_, cur_t_); });
    std::vector<int> D2;
    for (const auto& nb : nbs) {
      D2.push_back(add("lift_unpack[" + std::to_string(nb.rank) + "]", "comm_unpack", Priority::top, {},
                       [this, &nb, nf] {
                         const auto buf = recv_checked(nb.rank, Phase::lifted_fluxes,
                                                       static_cast<size_t>(nf) * kNumLifted * nb.replica_sides.size());
                         for (size_t i = 0; i < nb.replica_sides.size(); ++i)
                           kernels::lift_flux_from_trace(disc_, dom_, data_, nb.replica_sides[i],
                                                         &buf[i * nf * kNumLifted]);
                       },
                       {{nb.rank, Phase::lifted_fluxes}}));
    }
    std::vector<int> F;
    for (size_t c = 0; c < chunks_.size(); ++c) {
      const auto [e0, e1] = chunks_[c];
      F.push_back(add(chunk_name("lift_vol_int", c), "lift_vol_int", Priority::low, {C[c]},
                      [this, e0, e1] { kernels::lift_volume(disc_, dom_, data_, e0, e1); }));
    }
    for (size_t c = 0; c < chunks_.size(); ++c) {
      const auto [e0, e1] = chunks_[c];
      std::vector<int> deps = all_of(D_tasks, D2);
      deps.push_back(F[c]);
      deps.push_back(E);
      G.push_back(add(chunk_name("lift_surf_int", c), "lift_surf_int", Priority::low, deps,
                      [this, e0, e1] { kernels::lift_surface(disc_, dom_, data_, e0, e1); }));
    }
    std::vector<int> hdeps;
    for (int c : chunks_touching(dom_.mpi_sides)) hdeps.push_back(G[c]);
    const int H = add("prolong_grad_mpi", "prolong_grad", Priority::top, hdeps,
                      [this] {
                        kernels::prolong_gradients(disc_, dom_, data_, dom_.mpi_sides);
                        for (const auto& nb : dom_.neighbors)
                          pack_send(nb.rank, Phase::lifted_traces, data_.gR, kNumGrad, nb.replica_sides);
                      },
                      {}, sends_to_all(Phase::lifted_traces));
    std::vector<int> ideps;
    for (int c : chunks_touching(local_sides_)) ideps.push_back(G[c]);
    I = add("prolong_grad", "prolong_grad", Priority::mid, ideps,
            [this] { kernels::prolong_gradients(disc_, dom_, data_, local_sides_); });
    H_deps_all = {H};
  }

  std::vector<int> J;
  for (size_t k = 0; k < nbs.size(); ++k) {
    const auto& nb = nbs[k];
    std::vector<int> deps = visc ? std::vector<int>{H_deps_all[0], D_tasks[k]} : std::vector<int>{A};
    const Phase in = visc ? Phase::lifted_traces : Phase::traces;
    J.push_back(add("fill_flux_mpi[" + std::to_string(nb.rank) + "]", "fill_flux", Priority::top, deps,
                    [this, &nb, visc] {
                      if (visc) {
                        recv_unpack(nb.rank, Phase::lifted_traces, data_.gR, kNumGrad, nb.primary_sides);
                      } else {
                        recv_unpack(nb.rank, Phase::traces, data_.UR, kNumVars, nb.primary_sides);
                      }
                      kernels::fill_flux(disc_, dom_, data_, nb.primary_sides, cur_t_);
                      pack_send(nb.rank, Phase::fluxes, data_.flux, kNumVars, nb.primary_sides);
                    },
                    {{nb.rank, in}}, {{nb.rank, Phase::fluxes}}));
  }
  const int K = add("fill_flux", "fill_flux", Priority::mid, visc ? std::vector<int>{I, B} : std::vector<int>{B},
                    [this] { kernels::fill_flux(disc_, dom_, data_, local_sides_, cur_t_); });
  std::vector<int> J2;
  for (const auto& nb : nbs) {
    J2.push_back(add("flux_unpack[" + std::to_string(nb.rank) + "]", "comm_unpack", Priority::top, {},
                     [this, &nb] { recv_unpack(nb.rank, Phase::fluxes, data_.flux, kNumVars, nb.replica_sides); },
                     {{nb.rank, Phase::fluxes}}));
  }
  std::vector<int> L;
  for (size_t c = 0; c < chunks_.size(); ++c) {
    const auto [e0, e1] = chunks_[c];
    std::vector<int> deps{C[c]};
    if (visc) deps.push_back(G[c]);
    L.push_back(add(chunk_name("vol_int", c), "vol_int", Priority::low, deps, [this, e0, e1] {
      kernels::volume_integral(disc_, dom_, cur_U_, data_, cur_Ut_, e0, e1, scratch_);
    }));
  }
  for (size_t c = 0; c < chunks_.size(); ++c) {
    const auto [e0, e1] = chunks_[c];
    std::vector<int> deps = all_of(J, J2);
    deps.push_back(L[c]);
    deps.push_back(K);
    add(chunk_name("surf_int", c), "surf_int", Priority::low, deps, [this, e0, e1] {
      kernels::surface_integral(disc_, dom_, data_.flux.data(), kNumVars, cur_Ut_, e0, e1);
      kernels::apply_jacobian(disc_, dom_, cur_Ut_, kNumVars, -1.0, e0, e1);
      kernels::add_source(disc_, dom_, cur_Ut_, cur_t_, e0, e1);
    });
  }
}

std::vector<Partition> make_partitions(const Discretization& disc, const RuntimeOptions& opt) {
  if (!opt.cuts.empty()) {
    if (static_cast<int>(opt.cuts.size()) != opt.n_ranks + 1)
      throw ConfigError("partition cuts do not match the rank count");
    return partition_ranges(disc.mesh, opt.cuts);
  }
  return partition_sfc(disc.mesh, opt.n_ranks);
}

// Runs body(rank) on one thread per rank and rethrows the first failure.
template <class Body>
void run_ranks(Transport& tr, int n_ranks, Body body) {
  std::mutex err_m;
  std::exception_ptr first;
  auto worker = [&](int r) {
    tr.enter_compute();
    try {
      body(r);
    } catch (const AbortedError&) {
    } catch (const std::exception& e) {
      {
        std::lock_guard lk(err_m);
        if (!first) first = std::current_exception();
      }
      tr.abort(e.what());
    }
    tr.leave_compute();
  };
  std::vector<std::thread> threads;
  for (int r = 0; r < n_ranks; ++r) threads.emplace_back(worker, r);
  for (auto& t : threads) t.join();
  if (first) std::rethrow_exception(first);
}

}  // namespace

RunResult run_distributed(const Discretization& disc, std::vector<double>& U, double t0, const RunControl& ctl,
                          const RuntimeOptions& opt) {
  if (U.size() != disc.field_size()) throw std::invalid_argument("run_distributed: field size mismatch");
  const auto parts = make_partitions(disc, opt);
  const int R = opt.n_ranks;
  const RKScheme& scheme = rk_scheme(ctl.scheme);
  Transport tr(R, opt.latency_s, opt.max_computing);
  const size_t nn = disc.nn();
  const size_t evar = nn * kNumVars;

  std::vector<std::unique_ptr<RankSolver>> solvers(R);
  for (int r = 0; r < R; ++r) solvers[r] = std::make_unique<RankSolver>(disc, parts[r], tr, opt);

  RunResult res;
  res.operator_time.assign(R, 0.0);
  res.alpha.assign(disc.mesh.n_elems, 0.0);
  std::vector<double> step_time(R, 0.0);
  const auto origin = Clock::now();
  long steps_done = 0;
  double t_final = t0;

  run_ranks(tr, R, [&](int r) {
    RankSolver& rs = *solvers[r];
    rs.set_origin(origin);
    const Partition& part = parts[r];
    const int ne = part.n_elems();
    std::vector<double> u(U.begin() + part.elem_begin * evar, U.begin() + part.elem_end * evar);
    std::vector<double> K, Ut(u.size()), scratch(u.size());
    RhsFn rhs = [&](const std::vector<double>& x, double t, std::vector<double>& out) {
      rs.evaluate(x.data(), t, out.data(), true);
    };
    std::vector<double> alpha_local(ne, 0.0);

    auto refresh_alpha = [&](double t) {
      // Gradients and blending factors of the current state.
      if (disc.viscous()) {
        rs.evaluate(u.data(), t, scratch.data(), false);
        alpha_local = rs.data().alpha;
      } else if (disc.scheme.shock_capturing) {
        for (int e = 0; e < ne; ++e)
          alpha_local[e] = indicator_alpha(disc.basis, &u[e * evar], disc.gas, disc.scheme.indicator);
      }
    };
    auto analysis = [&](double t, long step, double dt) {
      refresh_alpha(t);
      std::vector<double> partials(static_cast<size_t>(ne) * kNumPartials + 1);
      double amax = 0.0;
      for (int e = 0; e < ne; ++e) {
        element_partials(disc, part.elem_begin + e, &u[e * evar],
                         disc.viscous() ? &rs.data().grad[e * nn * kNumGrad] : nullptr, &partials[e * kNumPartials]);
        amax = std::max(amax, alpha_local[e]);
      }
      partials.pop_back();
      const auto all = tr.allgather(r, partials);
      const double gmax = tr.allreduce_max(r, amax);
      if (r == 0 && ctl.on_analysis) {
        AnalysisRecord rec = reduce_partials(all, ctl.scales);
        rec.step = step;
        rec.t = t;
        rec.dt = dt;
        rec.max_alpha = gmax;
        ctl.on_analysis(rec);
      }
    };
    auto snapshot = [&](double t, long step) {
      refresh_alpha(t);
      const auto all_u = tr.allgather(r, u);
      const auto all_a = tr.allgather(r, alpha_local);
      if (r == 0 && ctl.on_snapshot) ctl.on_snapshot(t, step, all_u, all_a);
    };

    double t = t0;
    long step = 0;
    double dt = 0.0;
    const bool analyze = ctl.analyze_every > 0 && static_cast<bool>(ctl.on_analysis);
    const bool snap = ctl.snapshot_every > 0 && static_cast<bool>(ctl.on_snapshot);
    if (analyze) analysis(t, 0, 0.0);
    if (snap) snapshot(t, 0);
    const double t_eps = 1e-12 * std::max(1.0, std::abs(ctl.t_end));
    for (;;) {
      if (ctl.max_steps >= 0 && step >= ctl.max_steps) break;
      if (t >= ctl.t_end - t_eps) break;
      const auto s0 = Clock::now();
      if (ctl.fixed_dt > 0.0) {
        dt = ctl.fixed_dt;
      } else {
        dt = tr.allreduce_min(r, compute_dt(disc, u.data(), part.elem_begin, ne, ctl.timestep));
      }
      if (t + dt > ctl.t_end) dt = ctl.t_end - t;
      rk_step(u, K, Ut, t, dt, rhs, scheme);
      t += dt;
      ++step;
      step_time[r] += std::chrono::duration<double>(Clock::now() - s0).count();
      const bool last = (ctl.max_steps >= 0 && step >= ctl.max_steps) || t >= ctl.t_end - t_eps;
      if (analyze && (step % ctl.analyze_every == 0 || last)) analysis(t, step, dt);
      if (snap && (step % ctl.snapshot_every == 0 || last)) snapshot(t, step);
    }
    if (!analyze && !snap && disc.scheme.shock_capturing) refresh_alpha(t);
    std::copy(u.begin(), u.end(), U.begin() + part.elem_begin * evar);
    std::copy(alpha_local.begin(), alpha_local.end(), res.alpha.begin() + part.elem_begin);
    if (r == 0) {
      steps_done = step;
      t_final = t;
    }
  });

  res.t = t_final;
  res.steps = steps_done;
  res.stages = steps_done * scheme.stages;
  res.walltime = *std::max_element(step_time.begin(), step_time.end());
  res.messages = tr.messages_sent();
  res.bytes = tr.bytes_sent();
  for (int r = 0; r < R; ++r) {
    const RankSolver& rs = *solvers[r];
    res.operator_time[r] = rs.operator_time_;
    for (const auto& [k, v] : rs.kernel_time_) res.kernel_times.push_back({k, r, v});
    res.overlap.add(rs.overlap_);
    res.trace.insert(res.trace.end(), rs.trace_.begin(), rs.trace_.end());
  }
  return res;
}

std::vector<double> distributed_time_derivative(const Discretization& disc, const std::vector<double>& U, double t,
                                                const RuntimeOptions& opt) {
  if (U.size() != disc.field_size()) throw std::invalid_argument("time derivative: field size mismatch");
  const auto parts = make_partitions(disc, opt);
  Transport tr(opt.n_ranks, opt.latency_s, opt.max_computing);
  std::vector<std::unique_ptr<RankSolver>> solvers(opt.n_ranks);
  for (int r = 0; r < opt.n_ranks; ++r) solvers[r] = std::make_unique<RankSolver>(disc, parts[r], tr, opt);
  const size_t evar = static_cast<size_t>(disc.nn()) * kNumVars;
  std::vector<double> Ut(U.size());
  run_ranks(tr, opt.n_ranks, [&](int r) {
    const Partition& p = parts[r];
    solvers[r]->evaluate(&U[p.elem_begin * evar], t, &Ut[p.elem_begin * evar], true);
  });
  return Ut;
}

}  // namespace hexdg
