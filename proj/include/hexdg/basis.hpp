#pragma once

// One-dimensional spectral building blocks on [-1, 1].

#include <string>
#include <vector>

namespace hexdg {

enum class NodeType { GL, LGL };

NodeType parse_node_type(const std::string& s);
const char* to_string(NodeType t);

/// Row-major dense square or rectangular matrix.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}
  double& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
};

Matrix matmul(const Matrix& A, const Matrix& B);
/// Gauss-Jordan inverse with partial pivoting; throws on singular input.
Matrix inverse(const Matrix& A);

/// Legendre polynomial P_n(x) and its derivative.
void legendre(int n, double x, double& p, double& dp);

struct Basis1D {
  int N = 0;
  NodeType node_type = NodeType::GL;
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> bary;  // barycentric weights
  /// Strong differentiation matrix D(i, j) = l_j'(xi_i).
  Matrix D;
  /// Weak-form volume operator: Dhat(i, a) = -(w_a / w_i) D(a, i).
  Matrix Dhat;
  /// Split-form volume operator 2 D with the LGL boundary corrections folded in.
  Matrix DVolSurf;
  std::vector<double> l_minus;  // l_i(-1)
  std::vector<double> l_plus;   // l_i(+1)
  std::vector<double> lhat_minus;  // l_i(-1) / w_i
  std::vector<double> lhat_plus;   // l_i(+1) / w_i
  /// V(j, m) = phi_m(xi_j), orthonormal Legendre modes; Vinv maps nodal to modal.
  Matrix vandermonde;
  Matrix vandermonde_inv;

  int n() const { return N + 1; }
};

/// Quadrature nodes/weights only (used for oracles and over-integration in analysis).
void quadrature(int N, NodeType type, std::vector<double>& x, std::vector<double>& w);

Basis1D build_basis(int N, NodeType type);

double lagrange_eval(const Basis1D& b, int i, double x);
double lagrange_deriv(const Basis1D& b, int i, double x);
/// M(p, i) = l_i(x_p) for arbitrary target points.
Matrix interpolation_matrix(const Basis1D& b, const std::vector<double>& x);

std::vector<double> modal_transform(const Basis1D& b, const std::vector<double>& nodal);
std::vector<double> nodal_transform(const Basis1D& b, const std::vector<double>& modal);

}  // namespace hexdg
