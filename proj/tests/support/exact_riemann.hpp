#pragma once

// Exact solution of the 1-D Euler Riemann problem for an ideal gas
// (two-rarefaction/two-shock pressure iteration with Newton steps).

namespace oracle {

struct Primitive1D {
  double rho, u, p;
};

class ExactRiemann {
 public:
  ExactRiemann(Primitive1D left, Primitive1D right, double gamma);

  double star_pressure() const { return p_star_; }
  double star_velocity() const { return u_star_; }
  /// State at similarity coordinate s = (x - x0) / t.
  Primitive1D sample(double s) const;

 private:
  double f(double p, const Primitive1D& k, double c, double& df) const;

  Primitive1D L_, R_;
  double g_, cL_, cR_;
  double p_star_ = 0.0, u_star_ = 0.0;
};

}  // namespace oracle
