#pragma once

// Curvature-bound certificates for metrics dr^2 + v^2 dtheta^2 + h^2 g_hyp.
// Infinite tails are handled by closed forms (the outermost pieces are
// analytic); the compact middle is swept on a knot-aligned grid with
// derivative-guided refinement of interior extrema.  Extremes reached only
// in the limit r -> -oo are reported as limit values with an
// "not attained" flag.  This is a sampling-based certificate, not an
// interval-arithmetic proof.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "warpcurv/errors.hpp"
#include "warpcurv/frame_curvature.hpp"
#include "warpcurv/warping.hpp"

namespace warpcurv {

struct MetricSpec {
  WarpingFunction v, h;
  int n = 4;
  double eps = 0, rho = 0;
  MetricVariant variant;
};

struct BoundCertificate {
  // certified sup of sectional curvature; the limit value when not attained
  double upper = 0;
  bool upper_attained = true;
  // largest value actually attained (equals upper when upper_attained)
  double attained_max = 0;
  // certified inf; nullopt when unbounded below
  std::optional<double> lower;
  bool lower_attained = true;
  bool strictly_negative = false;   // every attained value < 0
  bool nonstrict = false;           // attained_max == 0 (constant-tail case)
  double grid_step = 0;
  double window_lo = 0, window_hi = 0;
  std::string method;
};

struct ProfileRow {
  double r = 0;
  PrincipalCurvatures K;
};

inline std::vector<ProfileRow> principal_profiles(const MetricSpec& spec,
                                                  const std::vector<double>& r_grid) {
  std::vector<ProfileRow> rows;
  rows.reserve(r_grid.size());
  for (double r : r_grid) rows.push_back({r, paper_principal_curvatures(spec.v, spec.h, spec.n, r)});
  return rows;
}

namespace detail {

struct ExtremeTracker {
  double sup = -INFINITY;
  bool sup_attained = true;
  double attained_max = -INFINITY;
  double inf = INFINITY;
  bool inf_attained = true;
  double attained_min = INFINITY;
  bool unbounded_below = false;

  void add(double v, bool attained) {
    if (attained) {
      attained_max = std::max(attained_max, v);
      attained_min = std::min(attained_min, v);
    }
    if (v > sup || (v == sup && attained)) {
      sup = v;
      sup_attained = attained;
    }
    if (v < inf || (v == inf && attained)) {
      inf = v;
      inf_attained = attained;
    }
  }
};

// the four profiles and their r-derivatives from 3-jets
struct ProfilePoint {
  double K[4];
  double dK[4];
};

inline ProfilePoint profile_point(const MetricSpec& s, double r) {
  auto v = s.v.jet3(r), h = s.h.jet3(r);
  ProfilePoint p{};
  double v0 = v[0], v1 = v[1], v2 = v[2], v3 = v[3];
  double h0 = h[0], h1 = h[1], h2 = h[2], h3 = h[3];
  p.K[0] = -h1 * v1 / (h0 * v0);
  p.dK[0] = -((h2 * v1 + h1 * v2) * h0 * v0 - h1 * v1 * (h1 * v0 + h0 * v1)) / (h0 * v0 * h0 * v0);
  p.K[1] = -h2 / h0;
  p.dK[1] = -(h3 * h0 - h2 * h1) / (h0 * h0);
  p.K[2] = -v2 / v0;
  p.dK[2] = -(v3 * v0 - v2 * v1) / (v0 * v0);
  p.K[3] = -1.0 / (h0 * h0) - (h1 / h0) * (h1 / h0);
  p.dK[3] = 2 * h1 / (h0 * h0 * h0) - 2 * h1 * h2 / (h0 * h0) + 2 * h1 * h1 * h1 / (h0 * h0 * h0);
  return p;
}

inline int profile_count(int n) { return n >= 4 ? 4 : 3; }

// closed-form tail contributions; junction value is attained, limits are not
inline void left_tail_extremes(const MetricSpec& s, double junction, ExtremeTracker& t) {
  PieceKind vk = s.v.pieces().front().kind;
  PieceKind hk = s.h.pieces().front().kind;
  int np = profile_count(s.n);
  double u = std::exp(junction);

  if (vk == PieceKind::Exp && hk == PieceKind::Exp) {
    t.add(-1.0, true);  // K1 = K2 = K3 = -1 on the whole tail
    if (np == 4) {
      t.add(-1.0 - 1.0 / (u * u), true);  // K4 at the junction, max over the tail
      t.unbounded_below = true;           // K4 -> -oo as r -> -oo
    }
    return;
  }
  if (vk == PieceKind::Const && hk == PieceKind::Const) {
    double c = s.h.pieces().front().coef[0];
    t.add(0.0, true);  // K1 = K2 = K3 = 0
    if (np == 4) t.add(-1.0 / (c * c), true);
    return;
  }
  if (vk == PieceKind::Exp && hk == PieceKind::ExpShift) {
    double tau = s.h.pieces().front().coef[0];
    // K1 = K2 = -u/(u + tau), decreasing in r: inf at junction, sup -> 0
    t.add(-u / (u + tau), true);
    t.add(0.0, false);
    t.add(-1.0, true);  // K3
    if (np == 4) {
      // K4 = -(1+u^2)/(u+tau)^2, increasing in r while u*tau < 1
      double kj = -(1.0 + u * u) / ((u + tau) * (u + tau));
      t.add(kj, true);
      if (u * tau < 1.0) {
        t.add(-1.0 / (tau * tau), false);  // limit as r -> -oo
      } else {
        t.add(-1.0 / (1.0 + tau * tau), true);  // interior max at u = 1/tau
        t.add(-1.0 / (tau * tau), false);
      }
    }
    return;
  }
  throw InvalidParams("unsupported left tail piece kinds for certification");
}

inline void right_tail_extremes(const MetricSpec& s, double junction, ExtremeTracker& t) {
  PieceKind vk = s.v.pieces().back().kind;
  PieceKind hk = s.h.pieces().back().kind;
  int np = profile_count(s.n);
  if (vk == PieceKind::Sinh && hk == PieceKind::Cosh) {
    t.add(-1.0, true);  // every profile is exactly -1
    return;
  }
  if (vk == PieceKind::Exp && hk == PieceKind::Exp) {
    t.add(-1.0, true);
    if (np == 4) {
      double u = std::exp(junction);
      t.add(-1.0 - 1.0 / (u * u), true);  // K4 minimum at the junction
      t.add(-1.0, false);                 // K4 sup in the limit r -> +oo
    }
    return;
  }
  if (vk == PieceKind::Const && hk == PieceKind::Const) {
    double c = s.h.pieces().back().coef[0];
    t.add(0.0, true);
    if (np == 4) t.add(-1.0 / (c * c), true);
    return;
  }
  throw InvalidParams("unsupported right tail piece kinds for certification");
}

inline void sweep_middle(const MetricSpec& s, double lo, double hi, double step,
                         ExtremeTracker& t) {
  if (!(lo < hi)) return;
  std::vector<double> grid;
  int n = (int)std::ceil((hi - lo) / step);
  grid.reserve(n + 16);
  for (int i = 0; i <= n; i++) grid.push_back(lo + (hi - lo) * i / n);
  for (const WarpingFunction* f : {&s.v, &s.h})
    for (double k : f->knots())
      if (k > lo && k < hi) grid.push_back(k);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  int np = profile_count(s.n);
  ProfilePoint prev = profile_point(s, grid[0]);
  for (int k = 0; k < np; k++) t.add(prev.K[k], true);
  for (size_t i = 1; i < grid.size(); i++) {
    ProfilePoint cur = profile_point(s, grid[i]);
    for (int k = 0; k < np; k++) {
      t.add(cur.K[k], true);
      // interior extremum: derivative changes sign across the cell
      if (prev.dK[k] * cur.dK[k] < 0) {
        double a = grid[i - 1], b = grid[i];
        double da = prev.dK[k];
        for (int it = 0; it < 60; it++) {
          double mid = 0.5 * (a + b);
          double dm = profile_point(s, mid).dK[k];
          if (da * dm <= 0) b = mid; else { a = mid; da = dm; }
        }
        t.add(profile_point(s, 0.5 * (a + b)).K[k], true);
      }
    }
    prev = cur;
  }
}

inline BoundCertificate analyze(const MetricSpec& spec, double step = 1e-3) {
  const WarpingFunction &v = spec.v, &h = spec.h;
  double lo = -spec.rho - 1.0, hi = spec.eps + 1.0;
  double dlo = std::max(v.domain_lo(), h.domain_lo());
  double dhi = std::min(v.domain_hi(), h.domain_hi());
  bool left_infinite = std::isinf(dlo);
  bool right_infinite = std::isinf(dhi);
  if (!left_infinite) lo = std::max(lo, dlo + step);
  if (!right_infinite) hi = std::min(hi, dhi - step);

  detail::ExtremeTracker t;
  if (left_infinite) detail::left_tail_extremes(spec, lo, t);
  if (right_infinite) detail::right_tail_extremes(spec, hi, t);
  detail::sweep_middle(spec, lo, hi, step, t);

  BoundCertificate cert;
  cert.upper = t.sup;
  cert.upper_attained = t.sup_attained;
  cert.attained_max = t.attained_max;
  if (!t.unbounded_below) {
    cert.lower = t.inf;
    cert.lower_attained = t.inf_attained;
  }
  cert.strictly_negative = t.attained_max < 0;
  cert.nonstrict = t.attained_max == 0;
  cert.grid_step = step;
  cert.window_lo = lo;
  cert.window_hi = hi;
  cert.method = "tail closed forms + knot-aligned grid sweep with derivative-guided refinement";
  return cert;
}

}  // namespace detail

inline BoundCertificate certify_upper_bound(const MetricSpec& spec, double step = 1e-3) {
  BoundCertificate cert = detail::analyze(spec, step);
  bool requires_strict = spec.variant.kind != MetricVariant::Kind::HeintzeSchroeder;
  if (requires_strict && !(cert.attained_max < 0))
    throw CertificationFailed("attained curvature maximum is not strictly negative");
  return cert;
}

struct PinchingResult {
  bool unbounded = false;   // no finite lower bound (K4 diverges down the tail)
  double lower = 0, upper = 0;
  bool lower_attained = true, upper_attained = true;
};

inline PinchingResult pinching(const MetricSpec& spec, double step = 1e-3) {
  BoundCertificate cert = detail::analyze(spec, step);
  PinchingResult out;
  if (!cert.lower) {
    out.unbounded = true;
    return out;
  }
  out.lower = *cert.lower;
  out.lower_attained = cert.lower_attained;
  out.upper = cert.upper;
  out.upper_attained = cert.upper_attained;
  return out;
}

struct RescaledCertificate {
  double scale = 1;  // metric is multiplied by scale^2, curvature by scale^-2
  BoundCertificate cert;
};

inline RescaledCertificate rescale_to_unit_lower_bound(const BoundCertificate& cert) {
  if (!cert.lower) throw UnboundedInput("cannot rescale a certificate with no lower bound");
  if (!(*cert.lower < 0)) throw InvalidParams("lower bound must be negative");
  double neg = -*cert.lower;
  RescaledCertificate out;
  out.scale = std::sqrt(neg);
  out.cert = cert;
  out.cert.upper = cert.upper / neg;
  out.cert.attained_max = cert.attained_max / neg;
  out.cert.lower = *cert.lower / neg;
  return out;
}

}  // namespace warpcurv
