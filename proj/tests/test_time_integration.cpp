#include <doctest.h>

#include <cmath>

#include "hexdg/testcases.hpp"
#include "hexdg/time_integration.hpp"

using namespace hexdg;

namespace {

// y' = -y + cos(t) (plus a second, stiffer-ish component) integrated to t = 1.
double ode_error(const RKScheme& s, int steps) {
  std::vector<double> U{1.0, 0.5}, K, Ut;
  RhsFn f = [](const std::vector<double>& u, double t, std::vector<double>& out) {
    out.resize(2);
    out[0] = -u[0] + std::cos(t);
    out[1] = -2.0 * u[1] * t;
  };
  const double dt = 1.0 / steps;
  double t = 0.0;
  for (int i = 0; i < steps; ++i, t += dt) rk_step(U, K, Ut, t, dt, f, s);
  // y0 = (sin t + cos t)/2 + C e^-t with C = 1/2; y1 = 0.5 exp(-t^2)
  const double y0 = 0.5 * (std::sin(1.0) + std::cos(1.0)) + 0.5 * std::exp(-1.0);
  const double y1 = 0.5 * std::exp(-1.0);
  return std::max(std::abs(U[0] - y0), std::abs(U[1] - y1));
}

}  // namespace

TEST_CASE("both schemes are fourth-order accurate") {
  for (const auto& name : rk_scheme_names()) {
    const RKScheme& s = rk_scheme(name);
    const double e1 = ode_error(s, 10), e2 = ode_error(s, 20);
    CAPTURE(name);
    CHECK(std::log2(e1 / e2) > 3.8);
    CHECK(s.order == 4);
  }
  CHECK(rk_scheme("carpenter-kennedy-5-4").stages == 5);
  CHECK(rk_scheme("niegemann-14-4").stages == 14);
  CHECK_THROWS_AS(rk_scheme("euler"), ConfigError);
}

TEST_CASE("stage times c are consistent with the A, B coefficients") {
  for (const auto& name : rk_scheme_names()) {
    const RKScheme& s = rk_scheme(name);
    // For y' = 1 the state at the start of stage i equals y0 + c_i dt.
    std::vector<double> U{0.0}, K, Ut;
    std::vector<double> seen_u, seen_t;
    RhsFn f = [&](const std::vector<double>& u, double t, std::vector<double>& out) {
      seen_u.push_back(u[0]);
      seen_t.push_back(t);
      out.assign(1, 1.0);
    };
    const double dt = 0.5;
    rk_step(U, K, Ut, 2.0, dt, f, s);
    REQUIRE(static_cast<int>(seen_u.size()) == s.stages);
    for (int i = 0; i < s.stages; ++i) {
      CHECK(seen_u[i] == doctest::Approx(s.c[i] * dt).scale(1.0).epsilon(1e-12));
      CHECK(seen_t[i] == doctest::Approx(2.0 + s.c[i] * dt).epsilon(1e-14));
    }
    CHECK(U[0] == doctest::Approx(dt).epsilon(1e-13));
    CHECK(s.A[0] == 0.0);
  }
}

TEST_CASE("stage errors carry the stage index") {
  std::vector<double> U{1.0}, K, Ut;
  int calls = 0;
  RhsFn f = [&](const std::vector<double>&, double, std::vector<double>& out) {
    if (++calls == 3) throw AdmissibilityError("boom");
    out.assign(1, 0.0);
  };
  try {
    rk_step(U, K, Ut, 0.0, 0.1, f, rk_scheme("carpenter-kennedy-5-4"));
    FAIL("expected an error");
  } catch (const AdmissibilityError& e) {
    CHECK(std::string(e.what()).find("RK stage 3") != std::string::npos);
  }
}

TEST_CASE("CFL timestep scales with the element size and the degree") {
  auto dt_for = [](int ne, int N) {
    BoxSpec b;
    b.nx = b.ny = b.nz = ne;
    Discretization disc(generate_box_mesh(b, N), N, NodeType::GL, GasProperties{}, SchemeConfig{});
    const auto U = project_initial(disc, [](const Vec3&) { return State5{1.0, 0.5, 0.0, 0.0, 2.625}; });
    return compute_dt(disc, U.data(), 0, disc.mesh.n_elems, TimestepConfig{});
  };
  const double d2 = dt_for(2, 3), d4 = dt_for(4, 3);
  CHECK(d2 / d4 == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(dt_for(2, 3) / dt_for(2, 6) == doctest::Approx(13.0 / 7.0).epsilon(1e-12));
  // u = 0.5, c = sqrt(1.4 * 1 / 1) with p = 0.4 * (2.625 - 0.125) = 1
  const double lam = 0.5 + 3.0 * std::sqrt(1.4);
  CHECK(d2 == doctest::Approx(0.9 * 2.0 / (7.0 * lam * 4.0)).epsilon(1e-12));
}

TEST_CASE("viscous timestep limit takes over for large viscosity") {
  BoxSpec b;
  b.nx = b.ny = b.nz = 2;
  GasProperties g;
  Discretization inv(generate_box_mesh(b, 3), 3, NodeType::GL, g, SchemeConfig{});
  g.mu_ref = 10.0;
  Discretization visc(generate_box_mesh(b, 3), 3, NodeType::GL, g, SchemeConfig{});
  const auto U = project_initial(inv, [](const Vec3&) { return State5{1.0, 0.0, 0.0, 0.0, 2.5}; });
  CHECK(compute_dt(visc, U.data(), 0, 8, TimestepConfig{}) < compute_dt(inv, U.data(), 0, 8, TimestepConfig{}));
}

TEST_CASE("linear amplification matches the truncated exponential") {
  for (const auto& name : rk_scheme_names()) {
    const RKScheme& s = rk_scheme(name);
    for (double z : {-0.05, -0.02, 0.03}) {
      std::vector<double> U{1.0}, K, Ut;
      RhsFn f = [](const std::vector<double>& u, double, std::vector<double>& out) { out.assign(1, u[0]); };
      rk_step(U, K, Ut, 0.0, z, f, s);
      const double taylor = 1.0 + z + z * z / 2.0 + z * z * z / 6.0 + z * z * z * z / 24.0;
      CAPTURE(name);
      CAPTURE(z);
      CHECK(std::abs(U[0] - taylor) <= std::pow(std::abs(z), 5));
    }
  }
}

TEST_CASE("a zero right-hand side leaves the state unchanged") {
  for (const auto& name : rk_scheme_names()) {
    std::vector<double> U{1.5, -2.0, 3.25}, K, Ut;
    const std::vector<double> U0 = U;
    RhsFn f = [](const std::vector<double>& u, double, std::vector<double>& out) { out.assign(u.size(), 0.0); };
    rk_step(U, K, Ut, 0.0, 0.1, f, rk_scheme(name));
    CHECK(U == U0);
  }
}
