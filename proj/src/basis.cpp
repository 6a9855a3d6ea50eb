#include "hexdg/basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hexdg {

NodeType parse_node_type(const std::string& s) {
  std::string t;
  for (char c : s) t += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (t == "GL" || t == "GAUSS") return NodeType::GL;
  if (t == "LGL" || t == "GAUSS-LOBATTO" || t == "LOBATTO") return NodeType::LGL;
  throw std::invalid_argument("unknown node type '" + s + "' (expected GL or LGL)");
}

const char* to_string(NodeType t) { return t == NodeType::GL ? "GL" : "LGL"; }

Matrix matmul(const Matrix& A, const Matrix& B) {
  if (A.cols != B.rows) throw std::invalid_argument("matmul: shape mismatch");
  Matrix C(A.rows, B.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int k = 0; k < A.cols; ++k) {
      const double a = A(i, k);
      for (int j = 0; j < B.cols; ++j) C(i, j) += a * B(k, j);
    }
  return C;
}

Matrix inverse(const Matrix& A) {
  if (A.rows != A.cols) throw std::invalid_argument("inverse: matrix not square");
  const int n = A.rows;
  Matrix M = A;
  Matrix I(n, n);
  for (int i = 0; i < n; ++i) I(i, i) = 1.0;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(M(r, c)) > std::abs(M(piv, c))) piv = r;
    if (M(piv, c) == 0.0) throw std::runtime_error("inverse: singular matrix");
    if (piv != c) {
      for (int j = 0; j < n; ++j) {
        std::swap(M(c, j), M(piv, j));
        std::swap(I(c, j), I(piv, j));
      }
    }
    const double s = 1.0 / M(c, c);
    for (int j = 0; j < n; ++j) {
      M(c, j) *= s;
      I(c, j) *= s;
    }
    for (int r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = M(r, c);
      if (f == 0.0) continue;
      for (int j = 0; j < n; ++j) {
        M(r, j) -= f * M(c, j);
        I(r, j) -= f * I(c, j);
      }
    }
  }
  return I;
}

void legendre(int n, double x, double& p, double& dp) {
  if (n == 0) {
    p = 1.0;
    dp = 0.0;
    return;
  }
  double p0 = 1.0, p1 = x;
  double d0 = 0.0, d1 = 1.0;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    const double d2 = d0 + (2.0 * k - 1.0) * p1;
    p0 = p1;
    p1 = p2;
    d0 = d1;
    d1 = d2;
  }
  p = p1;
  dp = d1;
}

namespace {

template <class F>
double newton(double x, F&& f) {
  for (int it = 0; it < 100; ++it) {
    double v, dv;
    f(x, v, dv);
    const double dx = v / dv;
    x -= dx;
    if (std::abs(dx) < 1e-15) break;
  }
  return x;
}

void symmetrize(std::vector<double>& x, std::vector<double>& w) {
  const int n = static_cast<int>(x.size());
  for (int k = 0; k < n / 2; ++k) {
    const double xs = 0.5 * (x[n - 1 - k] - x[k]);
    const double ws = 0.5 * (w[k] + w[n - 1 - k]);
    x[k] = -xs;
    x[n - 1 - k] = xs;
    w[k] = ws;
    w[n - 1 - k] = ws;
  }
  if (n % 2 == 1) x[n / 2] = 0.0;
}

}  // namespace

void quadrature(int N, NodeType type, std::vector<double>& x, std::vector<double>& w) {
  if (N < 0) throw std::invalid_argument("quadrature: negative degree");
  const int n = N + 1;
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  const double pi = std::numbers::pi;
  if (type == NodeType::GL) {
    for (int k = 0; k < n; ++k) {
      double xk = newton(-std::cos((2.0 * k + 1.0) * pi / (2.0 * n)), [n](double t, double& v, double& dv) {
        legendre(n, t, v, dv);
      });
      double p, dp;
      legendre(n, xk, p, dp);
      x[k] = xk;
      w[k] = 2.0 / ((1.0 - xk * xk) * dp * dp);
    }
  } else {
    if (N < 1) throw std::invalid_argument("quadrature: LGL requires N >= 1");
    x[0] = -1.0;
    x[N] = 1.0;
    for (int k = 1; k < N; ++k) {
      x[k] = newton(-std::cos(pi * k / N), [N](double t, double& v, double& dv) {
        double pa, da, pb, db, pn, dn;
        legendre(N + 1, t, pa, da);
        legendre(N - 1, t, pb, db);
        legendre(N, t, pn, dn);
        v = pa - pb;
        dv = (2.0 * N + 1.0) * pn;
      });
    }
    for (int k = 0; k < n; ++k) {
      double p, dp;
      legendre(N, x[k], p, dp);
      w[k] = 2.0 / (N * (N + 1.0) * p * p);
    }
  }
  symmetrize(x, w);
}

Basis1D build_basis(int N, NodeType type) {
  if (N < 1) throw std::invalid_argument("build_basis: polynomial degree must be >= 1");
  Basis1D b;
  b.N = N;
  b.node_type = type;
  quadrature(N, type, b.nodes, b.weights);
  const int n = N + 1;
  const auto& x = b.nodes;
  const auto& w = b.weights;

  b.bary.assign(n, 1.0);
  for (int j = 0; j < n; ++j) {
    double prod = 1.0;
    for (int k = 0; k < n; ++k)
      if (k != j) prod *= x[j] - x[k];
    b.bary[j] = 1.0 / prod;
  }

  b.D = Matrix(n, n);
  for (int i = 0; i < n; ++i) {
    double diag = 0.0;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double d = (b.bary[j] / b.bary[i]) / (x[i] - x[j]);
      b.D(i, j) = d;
      diag -= d;
    }
    b.D(i, i) = diag;
  }

  b.Dhat = Matrix(n, n);
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < n; ++a) b.Dhat(i, a) = -(w[a] / w[i]) * b.D(a, i);

  b.DVolSurf = Matrix(n, n);
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < n; ++a) b.DVolSurf(i, a) = 2.0 * b.D(i, a);
  if (type == NodeType::LGL) {
    b.DVolSurf(0, 0) += 1.0 / w[0];
    b.DVolSurf(N, N) -= 1.0 / w[N];
  }

  b.l_minus.resize(n);
  b.l_plus.resize(n);
  b.lhat_minus.resize(n);
  b.lhat_plus.resize(n);
  for (int i = 0; i < n; ++i) {
    b.l_minus[i] = lagrange_eval(b, i, -1.0);
    b.l_plus[i] = lagrange_eval(b, i, 1.0);
    b.lhat_minus[i] = b.l_minus[i] / w[i];
    b.lhat_plus[i] = b.l_plus[i] / w[i];
  }

  b.vandermonde = Matrix(n, n);
  for (int j = 0; j < n; ++j)
    for (int m = 0; m < n; ++m) {
      double p, dp;
      legendre(m, x[j], p, dp);
      b.vandermonde(j, m) = std::sqrt((2.0 * m + 1.0) / 2.0) * p;
    }
  b.vandermonde_inv = inverse(b.vandermonde);
  return b;
}

double lagrange_eval(const Basis1D& b, int i, double x) {
  const int n = b.n();
  for (int k = 0; k < n; ++k)
    if (x == b.nodes[k]) return k == i ? 1.0 : 0.0;
  double den = 0.0;
  for (int k = 0; k < n; ++k) den += b.bary[k] / (x - b.nodes[k]);
  return (b.bary[i] / (x - b.nodes[i])) / den;
}

double lagrange_deriv(const Basis1D& b, int i, double x) {
  const int n = b.n();
  for (int k = 0; k < n; ++k)
    if (x == b.nodes[k]) return b.D(k, i);
  double s = 0.0;
  for (int k = 0; k < n; ++k)
    if (k != i) s += 1.0 / (x - b.nodes[k]);
  return lagrange_eval(b, i, x) * s;
}

Matrix interpolation_matrix(const Basis1D& b, const std::vector<double>& x) {
  Matrix M(static_cast<int>(x.size()), b.n());
  for (int p = 0; p < M.rows; ++p)
    for (int i = 0; i < b.n(); ++i) M(p, i) = lagrange_eval(b, i, x[p]);
  return M;
}

std::vector<double> modal_transform(const Basis1D& b, const std::vector<double>& nodal) {
  const int n = b.n();
  if (static_cast<int>(nodal.size()) != n) throw std::invalid_argument("modal_transform: size mismatch");
  std::vector<double> m(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m[i] += b.vandermonde_inv(i, j) * nodal[j];
  return m;
}

std::vector<double> nodal_transform(const Basis1D& b, const std::vector<double>& modal) {
  const int n = b.n();
  if (static_cast<int>(modal.size()) != n) throw std::invalid_argument("nodal_transform: size mismatch");
  std::vector<double> u(n, 0.0);
  for (int j = 0; j < n; ++j)
    for (int m = 0; m < n; ++m) u[j] += b.vandermonde(j, m) * modal[m];
  return u;
}

}  // namespace hexdg
