#pragma once

// Curvature tensor of dr^2 + g_r in the orthonormal frame (d_r, Y_1..Y_m),
// where Y_i = X_i / h_i(r) for r-independent fields X_i with constant
// structure coefficients.  Conventions, fixed against the coordinate
// finite-difference oracle:
//   R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z
//   sec(X,Y) = <R(X,Y)Y, X> for orthonormal X, Y.
// Frame index 0 is the radial direction, 1..m are fiber directions.

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "warpcurv/errors.hpp"
#include "warpcurv/warping.hpp"

namespace warpcurv {

// structure constants c[i][j][k] of [X_i, X_j] = sum_k c_ij^k X_k,
// antisymmetric in (i, j); indices 0..m-1 for fiber directions
struct FrameBracketData {
  int m = 0;
  std::vector<double> c;  // m*m*m, row-major (i, j, k)

  static FrameBracketData zero(int m) {
    FrameBracketData d;
    d.m = m;
    d.c.assign((size_t)m * m * m, 0.0);
    return d;
  }
  double& at(int i, int j, int k) { return c[((size_t)i * m + j) * m + k]; }
  double at(int i, int j, int k) const { return c[((size_t)i * m + j) * m + k]; }

  void set_bracket(int i, int j, int k, double val) {
    at(i, j, k) = val;
    at(j, i, k) = -val;
  }
  void validate() const {
    if ((size_t)m * m * m != c.size()) throw InvalidParams("bracket table size mismatch");
    for (int i = 0; i < m; i++)
      for (int j = 0; j < m; j++)
        for (int k = 0; k < m; k++)
          if (std::fabs(at(i, j, k) + at(j, i, k)) > 1e-12)
            throw InvalidParams("bracket coefficients must be antisymmetric in (i, j)");
  }
};

struct WarpProfile {
  std::vector<WarpingFunction> h;  // one per fiber direction

  int m() const { return (int)h.size(); }
  ScalarJet jet(int i, double r) const { return h[i].eval_jet(r); }
};

// dense table of b_ijk = <[Y_i, Y_j], Y_k> at fixed r
struct BracketTable {
  int m = 0;
  std::vector<double> b;
  double& at(int i, int j, int k) { return b[((size_t)i * m + j) * m + k]; }
  double at(int i, int j, int k) const { return b[((size_t)i * m + j) * m + k]; }
};

inline BracketTable bracket_coeffs(const FrameBracketData& data, const WarpProfile& prof, double r) {
  data.validate();
  if (prof.m() != data.m) throw InvalidParams("profile dimension mismatch");
  BracketTable t;
  t.m = data.m;
  t.b.assign(data.c.size(), 0.0);
  std::vector<double> h(data.m);
  for (int i = 0; i < data.m; i++) h[i] = prof.jet(i, r).value;
  for (int i = 0; i < data.m; i++)
    for (int j = 0; j < data.m; j++)
      for (int k = 0; k < data.m; k++)
        t.at(i, j, k) = data.at(i, j, k) * h[k] / (h[i] * h[j]);
  return t;
}

// Q_ijk = b_ijk + b_kij + b_kji (Koszul combination)
struct QTable {
  int m = 0;
  std::vector<double> q;
  double& at(int i, int j, int k) { return q[((size_t)i * m + j) * m + k]; }
  double at(int i, int j, int k) const { return q[((size_t)i * m + j) * m + k]; }
};

inline QTable q_coeffs(const BracketTable& b) {
  QTable q;
  q.m = b.m;
  q.q.assign(b.b.size(), 0.0);
  for (int i = 0; i < b.m; i++)
    for (int j = 0; j < b.m; j++)
      for (int k = 0; k < b.m; k++)
        q.at(i, j, k) = b.at(i, j, k) + b.at(k, i, j) + b.at(k, j, i);
  return q;
}

// nabla_{Y_i} Y_j = radial * d_r + sum_k fiber[k] * Y_k.
// The frame is parallel along the radial direction (nabla_{d_r} Y_i = 0),
// so these coefficients describe the whole connection.
struct ConnectionCoeffs {
  double radial = 0;
  std::vector<double> fiber;
};

inline ConnectionCoeffs connection(int i, int j, const WarpProfile& prof, const BracketTable& b,
                                   double r) {
  ConnectionCoeffs out;
  out.fiber.assign(b.m, 0.0);
  ScalarJet ji = prof.jet(i, r);
  out.radial = (i == j) ? -ji.d1 / ji.value : 0.0;
  QTable q = q_coeffs(b);
  for (int k = 0; k < b.m; k++) out.fiber[k] = 0.5 * q.at(i, j, k);
  return out;
}

// <R(d_r, Y_i) Y_j, Y_k>
inline double mixed_term(int i, int j, int k, const WarpProfile& prof, const BracketTable& b,
                         double r) {
  ScalarJet hi = prof.jet(i, r), hj = prof.jet(j, r), hk = prof.jet(k, r);
  double li = hi.d1 / hi.value, lj = hj.d1 / hj.value, lk = hk.d1 / hk.value;
  double twice = b.at(i, j, k) * (lk - lj) + b.at(k, i, j) * (lj - lk) +
                 b.at(k, j, i) * (2 * li - lj - lk);
  return 0.5 * twice;
}

// the incorrect prior-literature expression for the same component, kept as
// a comparator; agrees with mixed_term exactly when all brackets vanish
inline double mixed_term_erroneous(int i, int j, int k, const WarpProfile& prof,
                                   const BracketTable& b, double r) {
  ScalarJet hj = prof.jet(j, r), hk = prof.jet(k, r);
  double l = hj.d1 / hj.value + hk.d1 / hk.value;
  return 0.5 * l * (b.at(j, i, k) + b.at(i, k, j) + b.at(j, k, i));
}

// ---------------------------------------------------------------------------
// fiber curvature sources

class FiberCurvature {
 public:
  struct Factor {
    std::vector<int> members;  // fiber indices 1..m
    double curvature = 0;      // of the unscaled factor metric
    bool contains(int i) const {
      for (int v : members)
        if (v == i) return true;
      return false;
    }
  };

  // product of constant-curvature factors, zero cross terms; the fiber
  // metric scales each factor by its (shared) warping function
  static FiberCurvature constant_blocks(std::vector<Factor> factors) {
    FiberCurvature f;
    f.mode_ = Mode::Blocks;
    f.factors_ = std::move(factors);
    return f;
  }
  // curvature of the left-invariant fiber metric at fixed r, computed from
  // the frame brackets by the same Koszul combination
  static FiberCurvature lie_frame() {
    FiberCurvature f;
    f.mode_ = Mode::Lie;
    return f;
  }
  static FiberCurvature custom(std::function<double(double, int, int, int, int)> fn) {
    FiberCurvature f;
    f.mode_ = Mode::Custom;
    f.fn_ = std::move(fn);
    return f;
  }

  // <R_{g_r}(Y_i, Y_j) Y_l, Y_m>, 1-based fiber indices
  double component(double r, int i, int j, int l, int mm, const WarpProfile& prof,
                   const BracketTable& b) const {
    switch (mode_) {
      case Mode::Blocks: {
        const Factor* f = factor_of(i);
        if (!f || !f->contains(j) || !f->contains(l) || !f->contains(mm)) return 0.0;
        if (f->members.size() < 2) return 0.0;
        double h = prof.jet(f->members.front() - 1, r).value;
        for (int idx : f->members) {
          double hh = prof.jet(idx - 1, r).value;
          if (std::fabs(hh - h) > 1e-12 * std::max(1.0, std::fabs(h)))
            throw FiberMismatch("constant-curvature factor members must share a warping function");
        }
        double kappa = f->curvature / (h * h);
        return kappa * ((i == mm ? 1.0 : 0.0) * (j == l ? 1.0 : 0.0) -
                        (i == l ? 1.0 : 0.0) * (j == mm ? 1.0 : 0.0));
      }
      case Mode::Lie:
        return lie_component(i - 1, j - 1, l - 1, mm - 1, b);
      case Mode::Custom:
        return fn_(r, i, j, l, mm);
    }
    return 0.0;
  }

 private:
  enum class Mode { Blocks, Lie, Custom };
  Mode mode_ = Mode::Lie;
  std::vector<Factor> factors_;
  std::function<double(double, int, int, int, int)> fn_;

  const Factor* factor_of(int i) const {
    for (const auto& f : factors_)
      for (int v : f.members)
        if (v == i) return &f;
    return nullptr;
  }

  static double lie_component(int i, int j, int l, int mm, const BracketTable& b) {
    // frame with constant structure coefficients:
    // <R(Y_i,Y_j)Y_l, Y_m> = sum_k (G_jlk G_ikm - G_ilk G_jkm) - sum_k b_ijk G_klm
    QTable q = q_coeffs(b);
    auto G = [&](int a, int bb, int cc) { return 0.5 * q.at(a, bb, cc); };
    double s = 0;
    for (int k = 0; k < b.m; k++) {
      s += G(j, l, k) * G(i, k, mm) - G(i, l, k) * G(j, k, mm);
      s -= b.at(i, j, k) * G(k, l, mm);
    }
    return s;
  }
};

// ---------------------------------------------------------------------------
// assembled tensor

// dense table of <R(e_A, e_B) e_C, e_D>, indices 0..m with 0 = d_r
struct CurvatureComponents {
  int dim = 0;  // m + 1
  std::vector<double> t;
  double at(int a, int b, int c, int d) const {
    return t[(((size_t)a * dim + b) * dim + c) * dim + d];
  }
  double& at(int a, int b, int c, int d) {
    return t[(((size_t)a * dim + b) * dim + c) * dim + d];
  }
  double sec(int a, int b) const { return at(a, b, b, a); }

  // worst violation of pair/antisymmetry and the first Bianchi identity
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
            worst = std::max(worst,
                             std::fabs(v + at(b, c, a, d) + at(c, a, b, d)));
          }
    return worst;
  }
};

inline CurvatureComponents assemble_curvature(const FrameBracketData& data,
                                              const WarpProfile& prof,
                                              const FiberCurvature& fiber, double r) {
  int m = data.m;
  if (prof.m() != m) throw InvalidParams("profile dimension mismatch");
  BracketTable b = bracket_coeffs(data, prof, r);
  CurvatureComponents out;
  out.dim = m + 1;
  out.t.assign((size_t)out.dim * out.dim * out.dim * out.dim, 0.0);

  std::vector<ScalarJet> jets(m);
  for (int i = 0; i < m; i++) jets[i] = prof.jet(i, r);

  // fiber-fiber block with the warped-product slope correction
  for (int i = 1; i <= m; i++)
    for (int j = 1; j <= m; j++)
      for (int l = 1; l <= m; l++)
        for (int mm = 1; mm <= m; mm++) {
          double v = fiber.component(r, i, j, l, mm, prof, b);
          const ScalarJet &hi = jets[i - 1], &hj = jets[j - 1];
          double corr = (hi.d1 * hj.d1) / (hi.value * hj.value);
          v -= corr * ((i == mm ? 1.0 : 0.0) * (j == l ? 1.0 : 0.0) -
                       (i == l ? 1.0 : 0.0) * (j == mm ? 1.0 : 0.0));
          out.at(i, j, l, mm) = v;
        }

  // two radial slots: <R(Y_i, d_r) d_r, Y_j> = -(h_i''/h_i) delta_ij
  for (int i = 1; i <= m; i++) {
    double k = -jets[i - 1].d2 / jets[i - 1].value;
    out.at(i, 0, 0, i) = k;
    out.at(0, i, 0, i) = -k;
    out.at(i, 0, i, 0) = -k;
    out.at(0, i, i, 0) = k;
  }

  // one radial slot, from the corrected mixed term M_ijk = <R(d_r,Y_i)Y_j,Y_k>
  for (int i = 1; i <= m; i++)
    for (int j = 1; j <= m; j++)
      for (int k = 1; k <= m; k++) {
        double M = mixed_term(i - 1, j - 1, k - 1, prof, b, r);
        out.at(0, i, j, k) = M;
        out.at(i, 0, j, k) = -M;
        out.at(j, k, 0, i) = M;   // pair symmetry
        out.at(j, k, i, 0) = -M;
      }

  return out;
}

// the four coordinate-plane curvature profiles of the circle x hyperbolic
// fiber metric; K4 is absent below dimension four
struct PrincipalCurvatures {
  double K1 = 0, K2 = 0, K3 = 0;
  std::optional<double> K4;
};

inline PrincipalCurvatures paper_principal_curvatures(const WarpingFunction& v,
                                                      const WarpingFunction& h, int n, double r) {
  if (n < 2) throw InvalidParams("dimension must be at least 2");
  ScalarJet jv = v.eval_jet(r), jh = h.eval_jet(r);
  PrincipalCurvatures k;
  k.K1 = -(jh.d1 * jv.d1) / (jh.value * jv.value);
  k.K2 = -jh.d2 / jh.value;
  k.K3 = -jv.d2 / jv.value;
  if (n >= 4) k.K4 = -1.0 / (jh.value * jh.value) - (jh.d1 / jh.value) * (jh.d1 / jh.value);
  return k;
}

// min/max sectional curvature over coordinate planes, after asserting that
// the coordinate bivectors diagonalize the curvature operator
struct OperatorExtremes {
  double min = 0, max = 0;
};

inline OperatorExtremes curvature_operator_extremes(const CurvatureComponents& c,
                                                    double tol = 1e-12) {
  int n = c.dim;
  std::vector<std::pair<int, int>> planes;
  for (int a = 0; a < n; a++)
    for (int b = a + 1; b < n; b++) planes.emplace_back(a, b);
  double scale = 0;
  for (double v : c.t) scale = std::max(scale, std::fabs(v));
  double thresh = tol * std::max(1.0, scale);
  OperatorExtremes ext{INFINITY, -INFINITY};
  for (size_t p = 0; p < planes.size(); p++) {
    for (size_t q = 0; q < planes.size(); q++) {
      auto [a, b] = planes[p];
      auto [cc, d] = planes[q];
      double entry = c.at(a, b, d, cc);  // <Rop(a^b), c^d>
      if (p == q) {
        ext.min = std::min(ext.min, entry);
        ext.max = std::max(ext.max, entry);
      } else if (std::fabs(entry) > thresh) {
        throw NotDiagonalizable("curvature operator not diagonal in coordinate bivectors");
      }
    }
  }
  return ext;
}

}  // namespace warpcurv
