#pragma once

// Tube geometry and end volumes.  The volume element of a cross-section at
// radius r is 2*pi * v(r) * h(r)^(2n-2) * vol(B); the end volume integrates
// it down the tail.  Tails with exponential v admit closed forms, the
// compact middle is integrated by adaptive Simpson split at spline knots.

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "warpcurv/errors.hpp"
#include "warpcurv/warping.hpp"

namespace warpcurv {

struct TubeGeometry {
  double circumference = 0;  // of the circle factor
  double base_scale = 0;     // scaling of the base hyperbolic factor
};

inline TubeGeometry tube_geometry(double r) {
  if (!(r > 0)) throw InvalidParams("tube radius must be positive");
  return {2.0 * M_PI * std::sinh(r), std::cosh(r)};
}

struct EndSpec {
  WarpingFunction v, h;
  int n = 4;
  double volB = 1.0;  // volume of the compact base component
  double r0 = 0.0;    // cut level; the end is (-oo, r0]
};

inline void validate(const EndSpec& s) {
  if (!(s.volB > 0)) throw InvalidParams("base volume must be positive");
  if (s.n < 2) throw InvalidParams("dimension must be at least 2");
}

inline double cross_section_volume(const EndSpec& s, double r) {
  validate(s);
  if (r > s.r0) throw OutOfDomain("r beyond the cut level");
  double v = s.v.value(r), h = s.h.value(r);
  return 2.0 * M_PI * v * std::pow(h, 2 * s.n - 2) * s.volB;
}

namespace detail {

inline double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                          double fm, double fb, double whole, double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4 * frm + fb);
  if (depth <= 0 || std::fabs(left + right - whole) < 15 * tol)
    return left + right + (left + right - whole) / 15.0;
  return simpson_rec(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol) {
  if (!(a < b)) return 0.0;
  double m = 0.5 * (a + b);
  double fa = f(a), fm = f(m), fb = f(b);
  double whole = (b - a) / 6.0 * (fa + 4 * fm + fb);
  return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 48);
}

// integral of e^r * h(r)^p over (-oo, u] for the supported left-tail kinds
inline std::optional<double> exp_tail_integral(PieceKind hkind, double tau_or_c, int p, double u) {
  double eu = std::exp(u);
  switch (hkind) {
    case PieceKind::Exp:
      return std::pow(eu, p + 1) / (p + 1);
    case PieceKind::ExpShift: {
      double tau = tau_or_c;
      return (std::pow(eu + tau, p + 1) - std::pow(tau, p + 1)) / (p + 1);
    }
    case PieceKind::Const:
      return std::pow(tau_or_c, p) * eu;
    default:
      return std::nullopt;
  }
}

}  // namespace detail

// integral of the cross-section volume over [a, b], split at spline knots
inline double volume_over(const EndSpec& s, double a, double b, double tol = 1e-12) {
  validate(s);
  auto f = [&](double r) {
    return 2.0 * M_PI * s.v.value(r) * std::pow(s.h.value(r), 2 * s.n - 2) * s.volB;
  };
  std::vector<double> cuts{a};
  for (const WarpingFunction* w : {&s.v, &s.h})
    for (double k : w->knots())
      if (k > a && k < b) cuts.push_back(k);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  double total = 0;
  for (size_t i = 0; i + 1 < cuts.size(); i++)
    total += detail::adaptive_simpson(f, cuts[i], cuts[i + 1], tol);
  return total;
}

// volume of the end (-oo, r0]; nullopt when divergent
inline std::optional<double> end_volume(const EndSpec& s) {
  validate(s);
  const Piece& pv = s.v.pieces().front();
  const Piece& ph = s.h.pieces().front();
  if (!std::isinf(pv.lo) || !std::isinf(ph.lo))
    throw InvalidParams("end volume needs tails reaching -oo");
  // finite iff h is bounded on the tail and the integral of v converges
  if (pv.kind != PieceKind::Exp) return std::nullopt;            // Const / ExpShift v diverge
  if (ph.kind == PieceKind::Cosh || ph.kind == PieceKind::Sinh)  // h unbounded (or invalid)
    return std::nullopt;

  double knot = std::min({pv.hi, ph.hi, s.r0});
  auto tail = detail::exp_tail_integral(ph.kind, ph.coef[0], 2 * s.n - 2, knot);
  if (!tail) return std::nullopt;
  double total = 2.0 * M_PI * s.volB * *tail;
  if (knot < s.r0) total += volume_over(s, knot, s.r0);
  return total;
}

}  // namespace warpcurv
