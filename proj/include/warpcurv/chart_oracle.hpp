#pragma once

// Coordinate-chart finite-difference Riemann tensor, the ground truth the
// frame formulas are checked against.  Christoffel symbols come from
// 4th-order central differences of the metric, curvature from 4th-order
// central differences of the Christoffel symbols.  Output convention
// matches frame_curvature.hpp: O[a][b][c][d] ~ <R(d_a, d_b) d_c, d_d>.

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "warpcurv/errors.hpp"
#include "warpcurv/warping.hpp"

namespace warpcurv {

using Point = std::vector<double>;
using Matrix = std::vector<std::vector<double>>;

struct ChartMetric {
  int dim = 0;
  std::function<Matrix(const Point&)> g;
  std::function<bool(const Point&)> domain = [](const Point&) { return true; };
};

struct FDConfig {
  double step = 1e-3;
};

// dense n^4 table of lowered curvature components
struct RiemannTable {
  int dim = 0;
  std::vector<double> t;
  double at(int a, int b, int c, int d) const {
    return t[(((size_t)a * dim + b) * dim + c) * dim + d];
  }
  double& at(int a, int b, int c, int d) {
    return t[(((size_t)a * dim + b) * dim + c) * dim + d];
  }
  double max_symmetry_violation() const {
    double worst = 0;
    for (int a = 0; a < dim; a++)
      for (int b = 0; b < dim; b++)
        for (int c = 0; c < dim; c++)
          for (int d = 0; d < dim; d++) {
            double v = at(a, b, c, d);
            worst = std::max(worst, std::fabs(v + at(b, a, c, d)));
            worst = std::max(worst, std::fabs(v + at(a, b, d, c)));
            worst = std::max(worst, std::fabs(v - at(c, d, a, b)));
            worst = std::max(worst, std::fabs(v + at(b, c, a, d) + at(c, a, b, d)));
          }
    return worst;
  }
};

namespace detail {

inline Matrix mat_inverse(Matrix g) {
  int n = (int)g.size();
  Matrix inv(n, std::vector<double>(n, 0));
  for (int i = 0; i < n; i++) inv[i][i] = 1;
  for (int c = 0; c < n; c++) {
    int p = c;
    for (int r = c + 1; r < n; r++)
      if (std::fabs(g[r][c]) > std::fabs(g[p][c])) p = r;
    std::swap(g[p], g[c]);
    std::swap(inv[p], inv[c]);
    double d = g[c][c];
    if (std::fabs(d) < 1e-300) throw InvalidParams("metric matrix is singular");
    for (int j = 0; j < n; j++) {
      g[c][j] /= d;
      inv[c][j] /= d;
    }
    for (int r = 0; r < n; r++)
      if (r != c) {
        double f = g[r][c];
        for (int j = 0; j < n; j++) {
          g[r][j] -= f * g[c][j];
          inv[r][j] -= f * inv[c][j];
        }
      }
  }
  return inv;
}

inline Matrix metric_derivative(const ChartMetric& chart, Point p, int k, double h) {
  auto at = [&](double off) {
    Point q = p;
    q[k] += off;
    return chart.g(q);
  };
  Matrix m1 = at(h), m2 = at(2 * h), m3 = at(-h), m4 = at(-2 * h);
  int n = chart.dim;
  Matrix r(n, std::vector<double>(n));
  for (int i = 0; i < n; i++)
    for (int j = 0; j < n; j++)
      r[i][j] = (8 * (m1[i][j] - m3[i][j]) - (m2[i][j] - m4[i][j])) / (12 * h);
  return r;
}

// Gamma[a][b][c] = Gamma^a_{bc}
inline std::vector<Matrix> christoffel_fd(const ChartMetric& chart, const Point& p, double h) {
  int n = chart.dim;
  Matrix gi = mat_inverse(chart.g(p));
  std::vector<Matrix> d(n);
  for (int k = 0; k < n; k++) d[k] = metric_derivative(chart, p, k, h);
  std::vector<Matrix> G(n, Matrix(n, std::vector<double>(n, 0)));
  for (int a = 0; a < n; a++)
    for (int b = 0; b < n; b++)
      for (int c = 0; c < n; c++) {
        double s = 0;
        for (int e = 0; e < n; e++) s += gi[a][e] * (d[b][e][c] + d[c][b][e] - d[e][b][c]);
        G[a][b][c] = 0.5 * s;
      }
  return G;
}

}  // namespace detail

inline RiemannTable riemann_fd(const ChartMetric& chart, const Point& p, const FDConfig& cfg) {
  int n = chart.dim;
  if ((int)p.size() != n) throw InvalidParams("point dimension mismatch");
  double h = cfg.step;
  if (!(h > 0)) throw InvalidParams("step must be positive");
  // all metric samples live within 4*step of p along coordinate axes
  for (int k = 0; k < n; k++)
    for (double off : {-4 * h, 4 * h}) {
      Point q = p;
      q[k] += off;
      if (!chart.domain(q)) throw DomainMargin("point too close to the chart boundary");
    }

  Matrix gp = chart.g(p);
  for (int i = 0; i < n; i++)
    for (int j = 0; j < n; j++)
      if (std::fabs(gp[i][j] - gp[j][i]) > 1e-12)
        throw InvalidParams("metric matrix must be symmetric");

  auto G = detail::christoffel_fd(chart, p, h);
  // dG[k][a][b][c] = d/dx_k Gamma^a_{bc}
  std::vector<std::vector<Matrix>> dG(n);
  for (int k = 0; k < n; k++) {
    Point q = p;
    q[k] = p[k] + h;
    auto g1 = detail::christoffel_fd(chart, q, h);
    q[k] = p[k] + 2 * h;
    auto g2 = detail::christoffel_fd(chart, q, h);
    q[k] = p[k] - h;
    auto g3 = detail::christoffel_fd(chart, q, h);
    q[k] = p[k] - 2 * h;
    auto g4 = detail::christoffel_fd(chart, q, h);
    dG[k].assign(n, Matrix(n, std::vector<double>(n)));
    for (int a = 0; a < n; a++)
      for (int b = 0; b < n; b++)
        for (int c = 0; c < n; c++)
          dG[k][a][b][c] =
              (8 * (g1[a][b][c] - g3[a][b][c]) - (g2[a][b][c] - g4[a][b][c])) / (12 * h);
  }

  RiemannTable out;
  out.dim = n;
  out.t.assign((size_t)n * n * n * n, 0.0);
  for (int b = 0; b < n; b++)
    for (int c = 0; c < n; c++)
      for (int d = 0; d < n; d++)
        for (int a = 0; a < n; a++) {
          // <dx^a, R(d_c, d_d) d_b>
          double up = dG[c][a][d][b] - dG[d][a][c][b];
          for (int e = 0; e < n; e++) up += G[a][c][e] * G[e][d][b] - G[a][d][e] * G[e][c][b];
          for (int f = 0; f < n; f++) out.at(c, d, b, f) += gp[f][a] * up;
        }
  return out;
}

// ---------------------------------------------------------------------------
// charts

// coordinates (r, theta, x_1..x_{n-3}, y), y > 0:
// diag(1, v(r)^2, h(r)^2/y^2, ..., h(r)^2/y^2)
inline ChartMetric chart_warped_hyperbolic(const WarpingFunction& v, const WarpingFunction& h,
                                           int n) {
  if (n < 3) throw InvalidParams("warped hyperbolic chart needs n >= 3");
  ChartMetric c;
  c.dim = n;
  c.g = [v, h, n](const Point& p) {
    double vr = v.value(p[0]), hr = h.value(p[0]);
    double y = p[n - 1];
    Matrix g(n, std::vector<double>(n, 0.0));
    g[0][0] = 1;
    g[1][1] = vr * vr;
    for (int i = 2; i < n; i++) g[i][i] = hr * hr / (y * y);
    return g;
  };
  c.domain = [v, n](const Point& p) { return p[n - 1] > 0 && v.contains(p[0]); };
  return c;
}

// coordinates (r, x, y, z); coframe dx, dy, dz - x dy scaled by h1, h2, h3
inline ChartMetric chart_heisenberg(const WarpingFunction& h1, const WarpingFunction& h2,
                                    const WarpingFunction& h3) {
  ChartMetric c;
  c.dim = 4;
  c.g = [h1, h2, h3](const Point& p) {
    double a = h1.value(p[0]), b = h2.value(p[0]), d = h3.value(p[0]);
    double x = p[1];
    Matrix g(4, std::vector<double>(4, 0.0));
    g[0][0] = 1;
    g[1][1] = a * a;
    g[2][2] = b * b + x * x * d * d;
    g[2][3] = g[3][2] = -x * d * d;
    g[3][3] = d * d;
    return g;
  };
  c.domain = [h1](const Point& p) { return h1.contains(p[0]); };
  return c;
}

inline ChartMetric chart_euclidean(int n) {
  ChartMetric c;
  c.dim = n;
  c.g = [n](const Point&) {
    Matrix g(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; i++) g[i][i] = 1;
    return g;
  };
  return c;
}

// ---------------------------------------------------------------------------
// frame comparison

struct CompareReport {
  double max_abs_diff = 0;
  std::array<int, 4> worst{};
};

// frame[A] = coordinate coefficients of the A-th frame vector
inline CompareReport frame_compare(const ChartMetric& chart,
                                   const std::vector<std::vector<double>>& frame, const Point& p,
                                   const FDConfig& cfg,
                                   const std::function<double(int, int, int, int)>& expected) {
  int n = chart.dim;
  Matrix gp = chart.g(p);
  for (int A = 0; A < n; A++)
    for (int B = 0; B < n; B++) {
      double dot = 0;
      for (int i = 0; i < n; i++)
        for (int j = 0; j < n; j++) dot += frame[A][i] * gp[i][j] * frame[B][j];
      if (std::fabs(dot - (A == B ? 1.0 : 0.0)) > 1e-10)
        throw FrameNotOrthonormal("frame is not orthonormal at the comparison point");
    }

  RiemannTable O = riemann_fd(chart, p, cfg);
  CompareReport rep;
  for (int A = 0; A < n; A++)
    for (int B = 0; B < n; B++)
      for (int C = 0; C < n; C++)
        for (int D = 0; D < n; D++) {
          double s = 0;
          for (int a = 0; a < n; a++)
            for (int b = 0; b < n; b++)
              for (int c = 0; c < n; c++)
                for (int d = 0; d < n; d++)
                  s += frame[A][a] * frame[B][b] * frame[C][c] * frame[D][d] * O.at(a, b, c, d);
          double diff = std::fabs(s - expected(A, B, C, D));
          if (diff > rep.max_abs_diff) {
            rep.max_abs_diff = diff;
            rep.worst = {A, B, C, D};
          }
        }
  return rep;
}

// ---------------------------------------------------------------------------
// convergence check against a constant-curvature model

struct ConvergenceReport {
  double err_coarse = 0, err_fine = 0;
  double order = 0;
  bool reliable = false;
  std::string note;
};

inline ConvergenceReport convergence_check(const ChartMetric& chart, const Point& p, double kappa,
                                           double step = 0.05) {
  Matrix gp = chart.g(p);
  int n = chart.dim;
  auto err_at = [&](double h) {
    RiemannTable O = riemann_fd(chart, p, FDConfig{h});
    double worst = 0;
    for (int a = 0; a < n; a++)
      for (int b = 0; b < n; b++)
        for (int c = 0; c < n; c++)
          for (int d = 0; d < n; d++) {
            double truth = kappa * (gp[a][d] * gp[b][c] - gp[a][c] * gp[b][d]);
            worst = std::max(worst, std::fabs(O.at(a, b, c, d) - truth));
          }
    return worst;
  };
  ConvergenceReport rep;
  try {
    rep.err_coarse = err_at(step);
    rep.err_fine = err_at(step / 2);
  } catch (const DomainMargin&) {
    rep.reliable = false;
    rep.note = "step too large for the chart domain";
    return rep;
  }
  if (rep.err_fine < 1e-12) {
    rep.order = 0;
    rep.reliable = false;
    rep.note = "errors at round-off floor; order not measurable";
    return rep;
  }
  rep.order = std::log2(rep.err_coarse / rep.err_fine);
  rep.reliable = rep.order > 3.5 && rep.order < 4.5 && step <= 0.2;
  rep.note = rep.reliable ? "ok" : "order outside the 4th-order window; step unreliable";
  return rep;
}

}  // namespace warpcurv
