#include <doctest.h>

#include <cmath>

#include "hexdg/equations.hpp"

using namespace hexdg;

namespace {

PrimitiveState prim(double rho, Vec3 v, double p, const GasProperties& g) { return {rho, v, p, p / (rho * g.R)}; }

State5 dot(const FluxTriple& F, const Vec3& n) {
  State5 r{};
  for (int v = 0; v < 5; ++v) r[v] = F.dir[0][v] * n[0] + F.dir[1][v] * n[1] + F.dir[2][v] * n[2];
  return r;
}

}  // namespace

TEST_CASE("conserved and primitive states round-trip") {
  GasProperties g;
  g.R = 287.0;
  const PrimitiveState P = prim(1.2, {30.0, -4.0, 2.5}, 101325.0, g);
  const PrimitiveState Q = cons_to_prim(prim_to_cons(P, g), g);
  CHECK(Q.rho == doctest::Approx(P.rho).epsilon(1e-15));
  for (int d = 0; d < 3; ++d) CHECK(Q.vel[d] == doctest::Approx(P.vel[d]).epsilon(1e-14));
  CHECK(Q.p == doctest::Approx(P.p).epsilon(1e-13));
  CHECK(Q.T == doctest::Approx(P.T).epsilon(1e-13));
}

TEST_CASE("inadmissible states are rejected") {
  GasProperties g;
  CHECK_THROWS_AS(cons_to_prim(ConservedState{-1.0, {0, 0, 0}, 2.5}, g), AdmissibilityError);
  CHECK_THROWS_AS(cons_to_prim(ConservedState{1.0, {3, 0, 0}, 2.5}, g), AdmissibilityError);
  CHECK_THROWS_AS(cons_to_prim(ConservedState{NAN, {0, 0, 0}, 2.5}, g), AdmissibilityError);
  GasProperties bad;
  bad.gamma = 1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("Sutherland viscosity equals mu_ref at T_ref and grows with T") {
  GasProperties g;
  g.mu_ref = 2e-3;
  g.T_ref = 3.0;
  g.viscosity_law = ViscosityLaw::sutherland;
  CHECK(viscosity(3.0, g) == doctest::Approx(2e-3).epsilon(1e-14));
  CHECK(viscosity(6.0, g) > viscosity(3.0, g));
  g.viscosity_law = ViscosityLaw::constant;
  CHECK(viscosity(6.0, g) == 2e-3);
}

TEST_CASE("Riemann fluxes are consistent and conservative") {
  GasProperties g;
  const Vec3 n{0.48, 0.6, 0.64};
  const PrimitiveState A = prim(1.1, {0.3, -0.2, 0.5}, 0.9, g);
  const PrimitiveState B = prim(0.7, {-0.1, 0.4, 0.0}, 1.3, g);
  for (RiemannSolverKind k : {RiemannSolverKind::llf, RiemannSolverKind::hllc}) {
    const State5 fc = riemann_flux(A, A, n, g, k);
    const State5 fe = dot(euler_flux(A, prim_to_cons(A, g)), n);
    for (int v = 0; v < 5; ++v) CHECK(fc[v] == doctest::Approx(fe[v]).epsilon(1e-14));
    const State5 f1 = riemann_flux(A, B, n, g, k);
    const State5 f2 = riemann_flux(B, A, {-n[0], -n[1], -n[2]}, g, k);
    for (int v = 0; v < 5; ++v) CHECK(f1[v] == doctest::Approx(-f2[v]).epsilon(1e-14));
  }
}

TEST_CASE("HLLC upwinds supersonic flow") {
  GasProperties g;
  const Vec3 n{1.0, 0.0, 0.0};
  const PrimitiveState A = prim(1.0, {5.0, 0.1, 0.0}, 1.0, g);
  const PrimitiveState B = prim(0.5, {4.0, 0.0, 0.2}, 0.8, g);
  const State5 f = riemann_flux(A, B, n, g, RiemannSolverKind::hllc);
  const State5 fe = dot(euler_flux(A, prim_to_cons(A, g)), n);
  for (int v = 0; v < 5; ++v) CHECK(f[v] == doctest::Approx(fe[v]).epsilon(1e-14));
}

TEST_CASE("two-point split flux is symmetric and consistent") {
  GasProperties g;
  const Vec3 m{0.3, -1.2, 0.7};
  const PrimitiveState A = prim(1.1, {0.3, -0.2, 0.5}, 0.9, g);
  const PrimitiveState B = prim(0.7, {-0.1, 0.4, 0.0}, 1.3, g);
  const State5 fab = split_flux_twopoint(A, B, m, g);
  const State5 fba = split_flux_twopoint(B, A, m, g);
  for (int v = 0; v < 5; ++v) CHECK(fab[v] == doctest::Approx(fba[v]).epsilon(1e-15));
  const State5 faa = split_flux_twopoint(A, A, m, g);
  const State5 fe = dot(euler_flux(A, prim_to_cons(A, g)), m);
  for (int v = 0; v < 5; ++v) CHECK(faa[v] == doctest::Approx(fe[v]).epsilon(1e-14));
}

TEST_CASE("stress tensor is symmetric and trace free") {
  LiftedGradient gr{};
  double s = 0.1;
  for (auto& row : gr)
    for (auto& x : row) x = (s += 0.37);
  const auto tau = stress_tensor(0.02, gr);
  CHECK(std::abs(tau[0][0] + tau[1][1] + tau[2][2]) < 1e-15);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) CHECK(tau[a][b] == doctest::Approx(tau[b][a]).epsilon(1e-15));
}

TEST_CASE("viscous flux vanishes for a uniform state") {
  GasProperties g;
  g.mu_ref = 0.01;
  const PrimitiveState A = prim(1.0, {0.3, 0.1, 0.2}, 1.0, g);
  const FluxTriple F = viscous_flux(A, LiftedGradient{}, g);
  for (const auto& d : F.dir)
    for (double v : d) CHECK(v == 0.0);
}

TEST_CASE("BR1 trace is the arithmetic mean") {
  GasProperties g;
  const PrimitiveState A = prim(1.0, {1.0, 2.0, 3.0}, 1.0, g);
  const PrimitiveState B = prim(1.0, {3.0, 2.0, 1.0}, 2.0, g);
  const auto w = br1_lifting_flux(A, B);
  CHECK(w[0] == 2.0);
  CHECK(w[1] == 2.0);
  CHECK(w[2] == 2.0);
  CHECK(w[3] == doctest::Approx(1.5));
}

TEST_CASE("closed-form state conversions") {
  GasProperties g;
  const PrimitiveState a = cons_to_prim(ConservedState{1.0, {0, 0, 0}, 2.5}, g);
  CHECK(a.p == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(a.vel[0] == 0.0);
  CHECK(cons_to_prim(ConservedState{1.0, {1, 0, 0}, 3.0}, g).p == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(prim_to_cons(prim(1.0, {0, 0, 0}, 1.0, g), g).rhoE == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(prim_to_cons(prim(2.0, {1, 1, 1}, 2.0, g), g).rhoE == doctest::Approx(8.0).epsilon(1e-15));
}

TEST_CASE("Sutherland and conductivity reference values") {
  GasProperties g;
  g.mu_ref = 1.0;
  g.T_ref = 280.0;
  g.viscosity_law = ViscosityLaw::sutherland;
  CHECK(viscosity(2.0 * g.T_ref, g) == doctest::Approx(1.4042 * 2.0 * std::sqrt(2.0) / 2.4042).epsilon(1e-14));
  CHECK(viscosity(2.0 * g.T_ref, g) == doctest::Approx(1.65201).epsilon(1e-4));
  GasProperties k;
  CHECK(thermal_conductivity(1.0, k) == doctest::Approx(4.929577).epsilon(1e-6));
  CHECK(thermal_conductivity(0.0, k) == 0.0);
  k.R = 287.058;
  CHECK(thermal_conductivity(1.8e-5, k) == doctest::Approx(0.025463).epsilon(1e-4));
}

TEST_CASE("Euler flux of simple states") {
  GasProperties g;
  const PrimitiveState rest = prim(1.0, {0, 0, 0}, 1.0, g);
  const FluxTriple a = euler_flux(rest, prim_to_cons(rest, g));
  CHECK(a.dir[0] == State5{0, 1, 0, 0, 0});
  const PrimitiveState move = prim(1.0, {1, 0, 0}, 1.0, g);
  const FluxTriple b = euler_flux(move, prim_to_cons(move, g));
  for (int v = 0; v < 5; ++v) CHECK(b.dir[0][v] == doctest::Approx(State5{1, 2, 0, 0, 4}[v]).epsilon(1e-15));
}

TEST_CASE("pure shear and uniform dilation stresses") {
  LiftedGradient gr{};
  gr[1][0] = 0.3;  // du/dy
  const auto tau = stress_tensor(0.02, gr);
  CHECK(tau[0][1] == doctest::Approx(0.006));
  CHECK(tau[1][0] == doctest::Approx(0.006));
  for (int d = 0; d < 3; ++d) CHECK(tau[d][d] == 0.0);
  LiftedGradient dil{};
  for (int d = 0; d < 3; ++d) dil[d][d] = 0.4;
  const auto td = stress_tensor(0.02, dil);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) CHECK(std::abs(td[a][b]) < 1e-17);
}

TEST_CASE("LLF flux matches a scalar 1-D oracle on the Sod states") {
  const double gamma = 1.4;
  GasProperties g;
  struct S1 {
    double rho, u, p;
  };
  const S1 L{1.0, 0.0, 1.0}, R{0.125, 0.0, 0.1};
  auto flux = [&](const S1& s, double* f) {
    const double E = s.p / (gamma - 1.0) + 0.5 * s.rho * s.u * s.u;
    f[0] = s.rho * s.u;
    f[1] = s.rho * s.u * s.u + s.p;
    f[2] = s.u * (E + s.p);
  };
  auto cons = [&](const S1& s, double* q) {
    q[0] = s.rho;
    q[1] = s.rho * s.u;
    q[2] = s.p / (gamma - 1.0) + 0.5 * s.rho * s.u * s.u;
  };
  double fl[3], fr[3], ql[3], qr[3];
  flux(L, fl);
  flux(R, fr);
  cons(L, ql);
  cons(R, qr);
  const double lam = std::max(std::abs(L.u) + std::sqrt(gamma * L.p / L.rho), std::abs(R.u) + std::sqrt(gamma * R.p / R.rho));
  double ref[3];
  for (int v = 0; v < 3; ++v) ref[v] = 0.5 * (fl[v] + fr[v]) - 0.5 * lam * (qr[v] - ql[v]);
  const State5 f = riemann_flux(prim(L.rho, {L.u, 0, 0}, L.p, g), prim(R.rho, {R.u, 0, 0}, R.p, g), {1, 0, 0}, g,
                                RiemannSolverKind::llf);
  CHECK(f[0] == doctest::Approx(ref[0]).epsilon(1e-15));
  CHECK(f[1] == doctest::Approx(ref[1]).epsilon(1e-15));
  CHECK(f[2] == 0.0);
  CHECK(f[3] == 0.0);
  CHECK(f[4] == doctest::Approx(ref[2]).epsilon(1e-15));
}
