#pragma once

// Finite-volume subcell operator on the LGL subcell grid, the a priori
// modal indicator, and convex DG/FV blending.

#include <vector>

#include "hexdg/basis.hpp"
#include "hexdg/equations.hpp"

namespace hexdg {

struct IndicatorConfig {
  double alpha_max = 0.5;
  double alpha_min = 1e-3;
  /// Threshold T(N) = threshold_a * 10^(-threshold_b * (N + 1)^threshold_c).
  double threshold_a = 0.5;
  double threshold_b = 1.8;
  double threshold_c = 0.25;
  /// Logistic sharpness s = ln((1 - eps) / eps).
  double sharpness_eps = 1e-4;
  /// When >= 0, every element uses this blending factor.
  double alpha_fixed = -1.0;
};

double indicator_threshold(int N, const IndicatorConfig& cfg);

/// Modal energy indicator E of a nodal element field q (n^3 values, i fastest).
double modal_energy_indicator(const Basis1D& basis, const double* q);

/// Blending factor of one element from its conserved nodal states
/// (n^3 nodes x 5 variables, variable fastest).
double indicator_alpha(const Basis1D& basis, const double* U_elem, const GasProperties& gas,
                       const IndicatorConfig& cfg);

/// Subcell widths along one direction: the LGL weights.
std::vector<double> subcell_widths(const Basis1D& basis);

/// Volume part of the first-order FV residual on one element, accumulated
/// into out (n^3 x 5). Interface metric vectors come from Geometry::fv_metric
/// for this element (3 directions x N interfaces x n^2 lines x 3). Outer
/// interfaces are omitted: they are the DG surface fluxes.
void fv_subcell_volume(const Basis1D& basis, const double* U_elem, const double* prim_elem,
                       const double* fv_metric_elem, const GasProperties& gas, RiemannSolverKind riemann,
                       double* out);

/// (1 - alpha) R_dg + alpha R_fv; throws std::invalid_argument if alpha is outside [0, 1].
void blend(const double* R_dg, const double* R_fv, double alpha, double* R, int count);

}  // namespace hexdg
