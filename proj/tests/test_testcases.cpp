#include <doctest.h>

#include <cmath>
#include <functional>
#include <map>
#include <tuple>

#include "exact_riemann.hpp"
#include "hexdg/runtime.hpp"
#include "hexdg/testcases.hpp"

using namespace hexdg;

namespace {

// Eighth-order central first derivative.
double d8(const std::function<double(double)>& f, double x, double h) {
  static const double c[4] = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
  double s = 0.0;
  for (int k = 0; k < 4; ++k) s += c[k] * (f(x + (k + 1) * h) - f(x - (k + 1) * h));
  return s / h;
}

struct Prim {
  double rho, u[3], p, T;
};

Prim exact_prim(const ManufacturedSolution& ms, const Vec3& x, double t, const GasProperties& g) {
  const State5 U = ms.exact(x, t);
  Prim P;
  P.rho = U[0];
  for (int d = 0; d < 3; ++d) P.u[d] = U[1 + d] / U[0];
  P.p = (g.gamma - 1.0) * (U[4] - 0.5 * (U[1] * U[1] + U[2] * U[2] + U[3] * U[3]) / U[0]);
  P.T = P.p / (P.rho * g.R);
  return P;
}

// Total (advective minus diffusive) flux in direction d, written out from the
// textbook definitions without the library's flux routines.
double total_flux(const ManufacturedSolution& ms, const GasProperties& g, const Vec3& x, double t, int d, int var,
                  double h) {
  const Prim P = exact_prim(ms, x, t, g);
  const State5 U = ms.exact(x, t);
  double adv;
  if (var == 0) {
    adv = U[1 + d];
  } else if (var <= 3) {
    adv = U[var] * P.u[d] + (var - 1 == d ? P.p : 0.0);
  } else {
    adv = (U[4] + P.p) * P.u[d];
  }
  if (g.mu_ref == 0.0 || var == 0) return adv;
  double grad[3][4];  // d/dx_a of (u, v, w, T)
  for (int a = 0; a < 3; ++a)
    for (int l = 0; l < 4; ++l)
      grad[a][l] = d8(
          [&](double s) {
            Vec3 y = x;
            y[a] = s;
            const Prim Q = exact_prim(ms, y, t, g);
            return l < 3 ? Q.u[l] : Q.T;
          },
          x[a], h);
  const double mu = g.mu_ref;
  const double div = grad[0][0] + grad[1][1] + grad[2][2];
  auto tau = [&](int a, int b) { return mu * (grad[a][b] + grad[b][a]) - (a == b ? 2.0 / 3.0 * mu * div : 0.0); };
  if (var <= 3) return adv - tau(var - 1, d);
  const double k = mu * g.gamma * g.R / ((g.gamma - 1.0) * g.Pr);
  double work = 0.0;
  for (int b = 0; b < 3; ++b) work += tau(d, b) * P.u[b];
  return adv - work - k * grad[d][3];
}

double mms_residual(const ManufacturedSolution& ms, const GasProperties& g, const Vec3& x, double t) {
  const double h = 1e-2;
  double S[5];
  ms.source(x, t, g, S);
  double worst = 0.0;
  for (int v = 0; v < 5; ++v) {
    double r = d8([&](double s) { return ms.exact(x, s)[v]; }, t, h);
    for (int d = 0; d < 3; ++d)
      r += d8(
          [&](double s) {
            Vec3 y = x;
            y[d] = s;
            return total_flux(ms, g, y, t, d, v, h);
          },
          x[d], h);
    worst = std::max(worst, std::abs(r - S[v]));
  }
  return worst;
}

Discretization periodic(int ne, int N, NodeType nt, GasProperties gas, double L = 2 * M_PI) {
  BoxSpec b;
  b.nx = b.ny = b.nz = ne;
  b.lo = {0, 0, 0};
  b.hi = {L, L, L};
  return Discretization(generate_box_mesh(b, N), N, nt, gas, SchemeConfig{});
}

}  // namespace

TEST_CASE("manufactured source matches a finite-difference residual oracle") {
  ManufacturedSolution ms;
  const Vec3 pts[] = {{0.1, 0.2, 0.3}, {-0.7, 0.45, 0.05}, {0.33, -0.9, 0.61}};
  for (double mu : {0.0, 0.05}) {
    GasProperties g;
    g.mu_ref = mu;
    for (const Vec3& x : pts)
      for (double t : {0.0, 0.37}) {
        CAPTURE(mu);
        CHECK(mms_residual(ms, g, x, t) < 1e-8);
      }
  }
}

TEST_CASE("zero amplitude gives a constant state and no source") {
  ManufacturedSolution ms;
  ms.amplitude = 0.0;
  GasProperties g;
  g.mu_ref = 0.1;
  double S[5];
  ms.source({0.3, 0.1, 0.7}, 0.4, g, S);
  for (double s : S) CHECK(s == 0.0);
  const State5 U = ms.exact({0.3, 0.1, 0.7}, 0.4);
  CHECK(U[0] == 2.0);
  CHECK(U[4] == 4.0);
}

TEST_CASE("projection error of the manufactured solution decays at order N+1") {
  ManufacturedSolution ms;
  for (int N : {2, 3, 4}) {
    double prev = 0.0;
    for (int ne : {2, 4, 8}) {
      BoxSpec b;
      b.nx = b.ny = b.nz = ne;
      b.lo = {-1, -1, -1};
      b.hi = {1, 1, 1};
      Discretization disc(generate_box_mesh(b, N), N, NodeType::GL, GasProperties{}, SchemeConfig{});
      const auto U = project_initial(disc, [&](const Vec3& x) { return ms.exact(x, 0.0); });
      const double e = l2_density_error(disc, U, [&](const Vec3& x) { return ms.exact(x, 0.0)[0]; });
      if (ne == 8) {
        CAPTURE(N);
        CHECK(std::log2(prev / e) > N + 0.6);
      }
      prev = e;
    }
  }
}

TEST_CASE("TGV initial condition") {
  TGVSetup s;
  s.Ma0 = 0.1;
  const GasProperties g = s.gas();
  CHECK(s.p0(1.4) == doctest::Approx(1.0 / (1.4 * 0.01)));
  const PrimitiveState P0 = s.state({0.0, 0.0, 0.0}, g);
  CHECK(P0.vel[0] == 0.0);
  CHECK(P0.vel[1] == 0.0);
  CHECK(P0.vel[2] == 0.0);
  for (const Vec3& x : {Vec3{0.3, 1.2, 2.2}, Vec3{4.0, 0.1, 5.5}}) {
    CHECK(s.state(x, g).vel[2] == 0.0);
    CHECK(s.state(x, g).T == doctest::Approx(g.T_ref).epsilon(1e-14));
  }
  TGVSetup v1 = s;
  v1.version = 1;
  CHECK(v1.state({0.3, 1.2, 2.2}, v1.gas()).rho == 1.0);
  CHECK(s.mu0() == doctest::Approx(1.0 / 1600.0));
}

TEST_CASE("TGV analysis quantities at t = 0") {
  TGVSetup s;
  s.version = 1;
  GasProperties g = s.gas();
  Discretization disc = periodic(4, 5, NodeType::GL, g);
  const auto U = tgv_init(disc, s);
  DGOperator op(disc);
  const auto grad = op.compute_lifting(U, 0.0);
  const AnalysisRecord r = analyze(disc, U, grad, AnalysisScales{});
  CHECK(r.E_k == doctest::Approx(0.125).epsilon(1e-6));
  CHECK(r.eps_D < 1e-4 * r.eps_S);
  // Solenoidal dissipation of the initial field: 3/(4 Re) with unit density and viscosity mu0.
  CHECK(r.eps_S == doctest::Approx(3.0 / (4.0 * 1600.0)).epsilon(1e-4));
  // Mean pressure fluctuation integrates to zero.
  const int n = disc.n(), nn = disc.nn();
  double mean = 0.0;
  for (int e = 0; e < disc.mesh.n_elems; ++e)
    for (int a = 0; a < nn; ++a) {
      const int i = a % n, j = (a / n) % n, k = a / (n * n);
      const Vec3 x{disc.geo.x[((size_t)e * nn + a) * 3], disc.geo.x[((size_t)e * nn + a) * 3 + 1],
                   disc.geo.x[((size_t)e * nn + a) * 3 + 2]};
      const auto& w = disc.basis.weights;
      mean += w[i] * w[j] * w[k] * disc.geo.J[(size_t)e * nn + a] * (s.state(x, g).p - s.p0(g.gamma));
    }
  CHECK(std::abs(mean) < 1e-12);
}

TEST_CASE("analysis of a fluid at rest is zero") {
  GasProperties g;
  g.mu_ref = 0.01;
  Discretization disc = periodic(2, 3, NodeType::LGL, g);
  const auto U = project_initial(disc, [](const Vec3&) { return State5{1.0, 0, 0, 0, 2.5}; });
  const AnalysisRecord r = analyze(disc, U, std::vector<double>(disc.n_dof() * kNumGrad, 0.0), AnalysisScales{});
  CHECK(r.E_k == 0.0);
  CHECK(r.eps_S == 0.0);
  CHECK(r.eps_D == 0.0);
  CHECK(r.totals[0] == doctest::Approx(std::pow(2 * M_PI, 3)));
}

TEST_CASE("exact Riemann oracle reproduces the Sod star state") {
  oracle::ExactRiemann rs({1.0, 0.0, 1.0}, {0.125, 0.0, 0.1}, 1.4);
  CHECK(rs.star_pressure() == doctest::Approx(0.30313).epsilon(1e-4));
  CHECK(rs.star_velocity() == doctest::Approx(0.92745).epsilon(1e-4));
  CHECK(rs.sample(-10.0).rho == 1.0);
  CHECK(rs.sample(10.0).rho == 0.125);
  // Contact: density jumps between 0.42632 and 0.26557.
  CHECK(rs.sample(0.9).rho == doctest::Approx(0.42632).epsilon(1e-4));
  CHECK(rs.sample(1.0).rho == doctest::Approx(0.26557).epsilon(1e-4));
}

TEST_CASE("Sod solution mirrors under reflection of the initial data") {
  for (int variant : {2, 3}) {
  auto run = [variant](bool mirrored) {
    BoxSpec b;
    b.nx = 16;
    b.ny = b.nz = 1;
    b.hi = {1.0, 1.0 / 16, 1.0 / 16};
    b.periodic = {false, true, true};
    SodSetup s;
    if (mirrored) std::swap(s.left, s.right);
    SchemeConfig sc;
    sc.split = variant & 1;
    sc.shock_capturing = variant & 2;
    GasProperties gas;
    sod_boundaries(sc, s, gas);
    auto disc = std::make_unique<Discretization>(generate_box_mesh(b, 3), 3, NodeType::LGL, gas, sc);
    std::vector<double> U = sod_init(*disc, s);
    RunControl c;
    c.t_end = 0.05;
    run_distributed(*disc, U, 0.0, c, RuntimeOptions{});
    return std::make_pair(std::move(disc), U);
  };
  auto [da, Ua] = run(false);
  auto [db, Ub] = run(true);
  // Interface nodes appear once per element, so nodes are keyed by their
  // element's centre as well.
  std::map<std::tuple<long, long, long, long>, size_t> where;
  const size_t nodes = Ub.size() / 5;
  const size_t nn = db->nn();
  auto centre = [nn](const Discretization& d, size_t a) {
    const size_t e = a / nn;
    double c = 0.0;
    for (size_t b = e * nn; b < (e + 1) * nn; ++b) c += d.geo.x[b * 3];
    return c / nn;
  };
  auto key = [](double c, double x, double y, double z) {
    return std::make_tuple(std::lround(c * 1e8), std::lround(x * 1e8), std::lround(y * 1e8), std::lround(z * 1e8));
  };
  for (size_t a = 0; a < nodes; ++a)
    where[key(centre(*db, a), db->geo.x[a * 3], db->geo.x[a * 3 + 1], db->geo.x[a * 3 + 2])] = a;
  double worst = 0.0;
  for (size_t a = 0; a < nodes; ++a) {
    const auto it = where.find(
        key(1.0 - centre(*da, a), 1.0 - da->geo.x[a * 3], da->geo.x[a * 3 + 1], da->geo.x[a * 3 + 2]));
    REQUIRE(it != where.end());
    const size_t m = it->second;
    worst = std::max(worst, std::abs(Ua[a * 5] - Ub[m * 5]));
    worst = std::max(worst, std::abs(Ua[a * 5 + 1] + Ub[m * 5 + 1]));
    worst = std::max(worst, std::abs(Ua[a * 5 + 4] - Ub[m * 5 + 4]));
  }
  CAPTURE(variant);
  CHECK(worst < 1e-12);
  }
}

TEST_CASE("Sod at N = 7 without shock capturing becomes inadmissible") {
  for (bool split : {false, true}) {
    BoxSpec b;
    b.nx = 8;
    b.hi = {1.0, 1.0 / 8, 1.0 / 8};
    b.periodic = {false, true, true};
    SodSetup s;
    SchemeConfig sc;
    sc.split = split;
    GasProperties gas;
    sod_boundaries(sc, s, gas);
    Discretization disc(generate_box_mesh(b, 7), 7, NodeType::LGL, gas, sc);
    std::vector<double> U = sod_init(disc, s);
    RunControl c;
    c.t_end = 0.2;
    CAPTURE(split);
    CHECK_THROWS_AS(run_distributed(disc, U, 0.0, c, RuntimeOptions{}), AdmissibilityError);
  }
}
