#pragma once

// Warping functions of one radial variable with queryable 2-jets.
// A WarpingFunction is an ordered list of half-open pieces [lo, hi) that
// partition its domain; pieces are either standard analytic profiles
// (exp, shifted exp, cosh, sinh, constant) or local polynomials of degree
// at most five. Constructors of interest:
//   * choose_rho        - smallest left-knot distance for which the tangent
//                         lines of the exponential tail and of both right
//                         tail profiles cross strictly inside the gap;
//   * build_interpolant - C2 join of the left and right tails with value,
//                         slope and convexity kept positive throughout.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "warpcurv/errors.hpp"

namespace warpcurv {

struct ScalarJet {
  double value = 0;
  double d1 = 0;
  double d2 = 0;
};

enum class PieceKind { Exp, ExpShift, Cosh, Sinh, Const, Quintic };

inline const char* piece_kind_name(PieceKind k) {
  switch (k) {
    case PieceKind::Exp: return "exp";
    case PieceKind::ExpShift: return "expshift";
    case PieceKind::Cosh: return "cosh";
    case PieceKind::Sinh: return "sinh";
    case PieceKind::Const: return "const";
    case PieceKind::Quintic: return "quintic";
  }
  return "?";
}

struct Piece {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  PieceKind kind = PieceKind::Const;
  // ExpShift: coef[0] = tau; Const: coef[0] = c;
  // Quintic: coefficients in the local variable u = r - lo.
  std::array<double, 6> coef{};
};

namespace detail {

// value, d1, d2, d3 of a piece at r
inline std::array<double, 4> piece_jet3(const Piece& p, double r) {
  switch (p.kind) {
    case PieceKind::Exp: {
      double e = std::exp(r);
      return {e, e, e, e};
    }
    case PieceKind::ExpShift: {
      double e = std::exp(r);
      return {e + p.coef[0], e, e, e};
    }
    case PieceKind::Cosh:
      return {std::cosh(r), std::sinh(r), std::cosh(r), std::sinh(r)};
    case PieceKind::Sinh:
      return {std::sinh(r), std::cosh(r), std::sinh(r), std::cosh(r)};
    case PieceKind::Const:
      return {p.coef[0], 0.0, 0.0, 0.0};
    case PieceKind::Quintic: {
      double u = r - p.lo;
      const auto& c = p.coef;
      double v = ((((c[5] * u + c[4]) * u + c[3]) * u + c[2]) * u + c[1]) * u + c[0];
      double d1 = (((5 * c[5] * u + 4 * c[4]) * u + 3 * c[3]) * u + 2 * c[2]) * u + c[1];
      double d2 = ((20 * c[5] * u + 12 * c[4]) * u + 6 * c[3]) * u + 2 * c[2];
      double d3 = (60 * c[5] * u + 24 * c[4]) * u + 6 * c[3];
      return {v, d1, d2, d3};
    }
  }
  return {0, 0, 0, 0};
}

}  // namespace detail

class WarpingFunction {
 public:
  WarpingFunction() = default;
  explicit WarpingFunction(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {
    if (pieces_.empty()) throw InvalidParams("warping function needs at least one piece");
    for (size_t i = 0; i + 1 < pieces_.size(); i++) {
      if (!(pieces_[i].hi == pieces_[i + 1].lo))
        throw InvalidParams("warping function pieces must be contiguous");
      if (!(pieces_[i].lo < pieces_[i].hi))
        throw InvalidParams("warping function piece has empty interval");
    }
  }

  const std::vector<Piece>& pieces() const { return pieces_; }
  double domain_lo() const { return pieces_.front().lo; }
  double domain_hi() const { return pieces_.back().hi; }
  bool contains(double r) const { return r >= domain_lo() && r <= domain_hi(); }

  ScalarJet eval_jet(double r) const {
    auto j = jet3(r);
    return {j[0], j[1], j[2]};
  }
  double value(double r) const { return jet3(r)[0]; }

  // value, d1, d2, d3 (d3 used by bound refinement)
  std::array<double, 4> jet3(double r) const {
    const Piece& p = piece_at(r);
    return detail::piece_jet3(p, r);
  }

  const Piece& piece_at(double r) const {
    if (!std::isfinite(r) || !contains(r)) throw OutOfDomain("r outside warping function domain");
    // half-open [lo, hi); the last piece also owns its right endpoint
    size_t lo = 0, hi = pieces_.size();
    while (hi - lo > 1) {
      size_t mid = (lo + hi) / 2;
      if (r < pieces_[mid].lo) hi = mid; else lo = mid;
    }
    return pieces_[lo];
  }

  // interior knots where adjacent pieces meet
  std::vector<double> knots() const {
    std::vector<double> k;
    for (size_t i = 0; i + 1 < pieces_.size(); i++) k.push_back(pieces_[i].hi);
    return k;
  }

  // worst componentwise jet mismatch across interior knots
  double max_knot_mismatch() const {
    double worst = 0;
    for (size_t i = 0; i + 1 < pieces_.size(); i++) {
      double r = pieces_[i].hi;
      auto a = detail::piece_jet3(pieces_[i], r);
      auto b = detail::piece_jet3(pieces_[i + 1], r);
      for (int c = 0; c < 3; c++) worst = std::max(worst, std::fabs(a[c] - b[c]));
    }
    return worst;
  }

 private:
  std::vector<Piece> pieces_;
};

inline WarpingFunction wf_exp() { return WarpingFunction({Piece{-INFINITY, INFINITY, PieceKind::Exp, {}}}); }
inline WarpingFunction wf_exp_shift(double tau) {
  if (!(tau > 0)) throw InvalidParams("exp shift must be positive");
  return WarpingFunction({Piece{-INFINITY, INFINITY, PieceKind::ExpShift, {tau}}});
}
inline WarpingFunction wf_cosh() { return WarpingFunction({Piece{-INFINITY, INFINITY, PieceKind::Cosh, {}}}); }
inline WarpingFunction wf_sinh(double lo = 0.0) {
  return WarpingFunction({Piece{lo, INFINITY, PieceKind::Sinh, {}}});
}
inline WarpingFunction wf_const(double c) {
  if (!(c > 0)) throw InvalidParams("constant warping value must be positive");
  return WarpingFunction({Piece{-INFINITY, INFINITY, PieceKind::Const, {c}}});
}

struct MetricVariant {
  enum class Kind { PaperNegative, HeintzeSchroeder, Fujiwara };
  Kind kind = Kind::PaperNegative;
  double tau = 0;

  static MetricVariant paper_negative() { return {Kind::PaperNegative, 0}; }
  static MetricVariant heintze_schroeder() { return {Kind::HeintzeSchroeder, 0}; }
  static MetricVariant fujiwara(double tau) {
    if (!(tau > 0)) throw InvalidParams("fujiwara variant needs tau > 0");
    return {Kind::Fujiwara, tau};
  }
  bool strict_convexity() const { return kind != Kind::HeintzeSchroeder; }
  const char* name() const {
    switch (kind) {
      case Kind::PaperNegative: return "paper";
      case Kind::HeintzeSchroeder: return "heintze-schroeder";
      case Kind::Fujiwara: return "fujiwara";
    }
    return "?";
  }
};

// ---------------------------------------------------------------------------
// choose_rho

namespace detail {

// abscissa where the tangent to e^r at -rho meets the tangent at eps to
// cosh (use_cosh) or sinh; nullopt when the lines are parallel
inline std::optional<double> tangent_crossing(double rho, double eps, bool use_cosh) {
  double b0 = use_cosh ? std::cosh(eps) : std::sinh(eps);
  double b1 = use_cosh ? std::sinh(eps) : std::cosh(eps);
  double a = std::exp(-rho);
  double den = a - b1;
  if (std::fabs(den) < 1e-300) return std::nullopt;
  return (b0 - eps * b1 - a * (1.0 + rho)) / den;
}

inline bool rho_feasible(double rho, double eps) {
  for (bool pair : {true, false}) {
    auto r = tangent_crossing(rho, eps, pair);
    if (!r || !(*r > -rho && *r < eps)) return false;
  }
  return true;
}

}  // namespace detail

inline double choose_rho(double eps) {
  if (!(eps > 0) || !std::isfinite(eps)) throw InvalidEpsilon("eps must be positive and finite");
  const double res = 1e-6;
  double max_rho = 20.0 + 2.0 / std::tanh(eps);
  double lo = 0, hi = -1;
  for (double r = 0.05; r <= max_rho; r += 0.05) {
    if (detail::rho_feasible(r, eps)) { hi = r; lo = r - 0.05; break; }
  }
  if (hi < 0) throw ConstructionFailed("no feasible rho located");
  while (hi - lo > res * 0.25) {
    double mid = 0.5 * (lo + hi);
    (detail::rho_feasible(mid, eps) ? hi : lo) = mid;
  }
  return std::max(hi, res);
}

// ---------------------------------------------------------------------------
// C2 convex join

namespace detail {

// continuous piecewise-linear second-derivative profile
struct PwLinear {
  std::vector<double> x, y;

  double mass() const {
    double s = 0;
    for (size_t i = 0; i + 1 < x.size(); i++) s += 0.5 * (y[i] + y[i + 1]) * (x[i + 1] - x[i]);
    return s;
  }
  // integral of (b - t) * phi(t)
  double moment(double b) const {
    double s = 0;
    for (size_t i = 0; i + 1 < x.size(); i++) {
      double L = x[i + 1] - x[i];
      if (L <= 0) continue;
      double dy = y[i + 1] - y[i];
      double c = b - x[i];
      s += c * y[i] * L + (c * dy / L - y[i]) * L * L / 2.0 - dy / L * L * L * L / 3.0;
    }
    return s;
  }
};

// integrate phi twice from (f0, d0); each segment becomes a cubic piece
inline std::vector<Piece> integrate_profile(const PwLinear& phi, double f0, double d0) {
  std::vector<Piece> out;
  double v = f0, d = d0;
  for (size_t i = 0; i + 1 < phi.x.size(); i++) {
    double L = phi.x[i + 1] - phi.x[i];
    double slope = (phi.y[i + 1] - phi.y[i]) / L;
    Piece p;
    p.lo = phi.x[i];
    p.hi = phi.x[i + 1];
    p.kind = PieceKind::Quintic;
    p.coef = {v, d, phi.y[i] / 2.0, slope / 6.0, 0.0, 0.0};
    out.push_back(p);
    v = p.coef[0] + L * (p.coef[1] + L * (p.coef[2] + L * p.coef[3]));
    d = p.coef[1] + L * (2 * p.coef[2] + 3 * L * p.coef[3]);
  }
  return out;
}

// C2 join on [a, b] between full 2-jets A and B with f > 0, f' and f''
// kept positive (nonnegative when strict is false).  f'' is shaped as a
// small floor proportional to the tangent envelope plus two tent bumps
// flanking the tangent crossing; the tent amplitudes solve the exact
// slope-gain (mass) and value-gain (moment) equations.
inline std::optional<std::vector<Piece>> convex_join(double a, ScalarJet A, double b, ScalarJet B,
                                                     bool strict) {
  double L = b - a;
  double dmass = B.d1 - A.d1;
  double dmom = B.value - A.value - A.d1 * L;
  if (!(dmass > 0) || !(dmom > 0)) return std::nullopt;
  double c = b - dmom / dmass;
  double margin = std::max(1e-9, 1e-6 * L);
  if (!(c > a + margin && c < b - margin)) return std::nullopt;

  auto envelope = [&](double t) {
    return std::max(A.value + A.d1 * (t - a), B.value + B.d1 * (t - b));
  };

  for (int dk = 0; dk < 30; dk++) {
    double delta = 0.02 * std::pow(0.5, dk);
    for (double wf : {0.9, 0.5, 0.25, 0.125, 0.0625}) {
      double w = wf * std::min(c - a, b - c);
      double x1 = c - w, x3 = c + w;
      double wa = std::min(0.15 * L, 0.4 * (x1 - a));
      if (A.d2 > 0) wa = std::min({wa, 0.1 * dmom / (A.d2 * L), 0.1 * dmass / A.d2});
      double wb = std::min(0.15 * L, 0.4 * (b - x3));
      if (B.d2 > 0) wb = std::min(wb, 0.05 * dmass / B.d2);
      double xa = a + wa, xb = b - wb;
      if (!(a < xa && xa < x1 && x1 < c && c < x3 && x3 < xb && xb < b)) continue;

      PwLinear base;
      base.x = {a, xa, x1, c, x3, xb, b};
      base.y.assign(7, 0.0);
      base.y[0] = A.d2;
      base.y[6] = B.d2;
      for (int i = 1; i <= 5; i++) base.y[i] = delta * envelope(base.x[i]);

      double M = dmass - base.mass();
      double Mo = dmom - base.moment(b);
      PwLinear t1 = base, t3 = base;
      std::fill(t1.y.begin(), t1.y.end(), 0.0);
      std::fill(t3.y.begin(), t3.y.end(), 0.0);
      t1.y[2] = 1.0;
      t3.y[4] = 1.0;
      double m1 = t1.mass(), m3 = t3.mass();
      double q1 = t1.moment(b), q3 = t3.moment(b);
      double det = m1 * q3 - m3 * q1;
      if (std::fabs(det) < 1e-300) continue;
      double u1 = (M * q3 - Mo * m3) / det;
      double u3 = (m1 * Mo - q1 * M) / det;
      if (!(u1 >= 0 && u3 >= 0)) continue;

      PwLinear phi = base;
      phi.y[2] += u1;
      phi.y[4] += u3;
      bool ok = true;
      for (size_t i = 0; i < phi.y.size(); i++) {
        bool zero_ok = !strict || (i == 0 && A.d2 == 0);
        if (!(phi.y[i] > 0 || (zero_ok && phi.y[i] >= 0))) ok = false;
      }
      if (!ok) continue;
      return integrate_profile(phi, A.value, A.d1);
    }
  }
  return std::nullopt;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// build_interpolant

struct PositivityReport {
  double grid_step = 0;
  double rho = 0, eps = 0;
  // minima over the verification grid, in order f, f', f'' for v then h
  std::array<double, 6> minima{};
  bool strict = true;
};

struct InterpolantPair {
  WarpingFunction v, h;
  double rho = 0;    // final value after retries
  int retries = 0;
  PositivityReport report;
};

namespace detail {

struct TailJets {
  ScalarJet v, h;
  Piece vpiece, hpiece;
};

inline TailJets left_tail(double rho, const MetricVariant& var) {
  double ea = std::exp(-rho);
  TailJets t;
  switch (var.kind) {
    case MetricVariant::Kind::PaperNegative:
      t.v = {ea, ea, ea};
      t.h = t.v;
      t.vpiece = {-INFINITY, -rho, PieceKind::Exp, {}};
      t.hpiece = t.vpiece;
      break;
    case MetricVariant::Kind::HeintzeSchroeder:
      t.v = {ea, 0, 0};
      t.h = t.v;
      t.vpiece = {-INFINITY, -rho, PieceKind::Const, {ea}};
      t.hpiece = t.vpiece;
      break;
    case MetricVariant::Kind::Fujiwara:
      t.v = {ea, ea, ea};
      t.h = {ea + var.tau, ea, ea};
      t.vpiece = {-INFINITY, -rho, PieceKind::Exp, {}};
      t.hpiece = {-INFINITY, -rho, PieceKind::ExpShift, {var.tau}};
      break;
  }
  return t;
}

}  // namespace detail

inline InterpolantPair build_interpolant(double eps, double rho, const MetricVariant& variant) {
  if (!(eps > 0) || !std::isfinite(eps)) throw InvalidParams("eps must be positive");
  if (!(rho > 0) || !std::isfinite(rho)) throw InvalidParams("rho must be positive");
  if (variant.kind == MetricVariant::Kind::Fujiwara && !(variant.tau > 0))
    throw InvalidParams("fujiwara variant needs tau > 0");
  if (variant.kind == MetricVariant::Kind::PaperNegative && rho < choose_rho(eps) - 1e-9)
    throw InvalidParams("rho below choose_rho(eps)");

  const int max_retries = 40;
  ScalarJet bv{std::sinh(eps), std::cosh(eps), std::sinh(eps)};
  ScalarJet bh{std::cosh(eps), std::sinh(eps), std::cosh(eps)};
  bool strict = variant.strict_convexity();

  for (int attempt = 0; attempt <= max_retries; attempt++, rho *= 1.25) {
    auto tails = detail::left_tail(rho, variant);
    auto mv = detail::convex_join(-rho, tails.v, eps, bv, strict);
    auto mh = detail::convex_join(-rho, tails.h, eps, bh, strict);
    if (!mv || !mh) continue;

    std::vector<Piece> vp{tails.vpiece}, hp{tails.hpiece};
    vp.insert(vp.end(), mv->begin(), mv->end());
    hp.insert(hp.end(), mh->begin(), mh->end());
    vp.push_back({eps, INFINITY, PieceKind::Sinh, {}});
    hp.push_back({eps, INFINITY, PieceKind::Cosh, {}});
    InterpolantPair out{WarpingFunction(std::move(vp)), WarpingFunction(std::move(hp)), rho,
                        attempt, {}};

    if (out.v.max_knot_mismatch() > 1e-9 || out.h.max_knot_mismatch() > 1e-9) continue;

    // positivity check on a grid of step <= 1e-3 over [-rho, eps]
    PositivityReport rep;
    rep.grid_step = 1e-3;
    rep.rho = rho;
    rep.eps = eps;
    rep.strict = strict;
    rep.minima.fill(std::numeric_limits<double>::infinity());
    int n = (int)std::ceil((eps + rho) / rep.grid_step);
    bool ok = true;
    for (int i = 0; i <= n && ok; i++) {
      double r = -rho + (eps + rho) * i / n;
      ScalarJet jv = out.v.eval_jet(r), jh = out.h.eval_jet(r);
      double q[6] = {jv.value, jv.d1, jv.d2, jh.value, jh.d1, jh.d2};
      for (int k = 0; k < 6; k++) {
        rep.minima[k] = std::min(rep.minima[k], q[k]);
        bool positive = strict ? (q[k] > 0) : (k % 3 == 0 ? q[k] > 0 : q[k] >= 0);
        if (!positive) ok = false;
      }
    }
    if (!ok) continue;
    out.report = rep;
    return out;
  }
  throw ConstructionFailed("interpolant construction failed after retries");
}

// ---------------------------------------------------------------------------
// serialization: one "piece lo hi kind coefs..." line per piece

namespace detail {

inline std::string fmt17(double x) {
  char buf[40];
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline double parse_bound(const std::string& s) {
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  try {
    size_t pos = 0;
    double x = std::stod(s, &pos);
    if (pos != s.size()) throw ParseError("bad number: " + s);
    return x;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    throw ParseError("bad number: " + s);
  }
}

}  // namespace detail

inline std::string to_text(const WarpingFunction& f) {
  std::string out;
  for (const auto& p : f.pieces()) {
    out += "piece " + detail::fmt17(p.lo) + " " + detail::fmt17(p.hi) + " " + piece_kind_name(p.kind);
    int nc = 0;
    if (p.kind == PieceKind::ExpShift || p.kind == PieceKind::Const) nc = 1;
    if (p.kind == PieceKind::Quintic) nc = 6;
    for (int i = 0; i < nc; i++) out += " " + detail::fmt17(p.coef[i]);
    out += "\n";
  }
  return out;
}

// parses consecutive "piece ..." lines from a stream; stops at the first
// non-piece line (which is pushed back via the returned leftover)
inline WarpingFunction parse_pieces(std::istream& in, std::string* leftover = nullptr) {
  std::vector<Piece> pieces;
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("piece ", 0) != 0) {
      if (leftover) *leftover = line;
      break;
    }
    std::istringstream ls(line);
    std::string tag, lo, hi, kind;
    ls >> tag >> lo >> hi >> kind;
    Piece p;
    p.lo = detail::parse_bound(lo);
    p.hi = detail::parse_bound(hi);
    int nc = 0;
    if (kind == "exp") p.kind = PieceKind::Exp;
    else if (kind == "expshift") { p.kind = PieceKind::ExpShift; nc = 1; }
    else if (kind == "cosh") p.kind = PieceKind::Cosh;
    else if (kind == "sinh") p.kind = PieceKind::Sinh;
    else if (kind == "const") { p.kind = PieceKind::Const; nc = 1; }
    else if (kind == "quintic") { p.kind = PieceKind::Quintic; nc = 6; }
    else throw ParseError("unknown piece kind: " + kind);
    for (int i = 0; i < nc; i++) {
      std::string tok;
      if (!(ls >> tok)) throw ParseError("missing coefficient in piece line");
      p.coef[i] = detail::parse_bound(tok);
    }
    pieces.push_back(p);
  }
  if (pieces.empty()) throw ParseError("no pieces found");
  return WarpingFunction(std::move(pieces));
}

}  // namespace warpcurv
