#include <cmath>
#include <sstream>

#include "doctest.h"
#include "warpcurv/warping.hpp"

using namespace warpcurv;

TEST_CASE("analytic piece jets") {
  CHECK(wf_exp().eval_jet(0.0).value == 1.0);
  CHECK(wf_exp().eval_jet(0.0).d1 == 1.0);
  CHECK(wf_exp().eval_jet(0.0).d2 == 1.0);

  auto c = wf_cosh().eval_jet(0.0);
  CHECK(c.value == 1.0);
  CHECK(c.d1 == 0.0);
  CHECK(c.d2 == 1.0);

  auto s = wf_sinh().eval_jet(1.0);
  CHECK(s.value == doctest::Approx(std::sinh(1.0)).epsilon(1e-15));
  CHECK(s.d1 == doctest::Approx(std::cosh(1.0)).epsilon(1e-15));
  CHECK(s.d2 == doctest::Approx(std::sinh(1.0)).epsilon(1e-15));

  auto es = wf_exp_shift(0.1).eval_jet(-3.0);
  CHECK(es.value == doctest::Approx(std::exp(-3.0) + 0.1).epsilon(1e-15));
  CHECK(es.d1 == doctest::Approx(std::exp(-3.0)).epsilon(1e-15));

  CHECK_THROWS_AS(wf_sinh(0.0).eval_jet(-0.5), OutOfDomain);
  CHECK_THROWS_AS(wf_const(-1.0), InvalidParams);
}

TEST_CASE("jet derivative consistency via central differences") {
  auto check_fn = [](const WarpingFunction& f, double r) {
    auto ratio = [&](double d) {
      auto c = [&](double x) { return f.eval_jet(x).value; };
      double fd = (c(r + d) - c(r - d)) / (2 * d);
      return std::fabs(fd - f.eval_jet(r).d1);
    };
    double e1 = ratio(1e-2), e2 = ratio(5e-3);
    CHECK(e1 / e2 > 3.0);  // second-order decay
    CHECK(e1 / e2 < 5.0);
  };
  check_fn(wf_exp(), 0.7);
  check_fn(wf_cosh(), -1.3);
  check_fn(wf_sinh(), 2.1);
}

// independent re-derivation of the tangent-crossing feasibility predicate
static bool rho_ok_oracle(double rho, double eps) {
  auto inside = [&](bool use_cosh) {
    double b0 = use_cosh ? std::cosh(eps) : std::sinh(eps);
    double b1 = use_cosh ? std::sinh(eps) : std::cosh(eps);
    double a = std::exp(-rho);
    if (a == b1) return false;
    double r = (b0 - eps * b1 - a * (1.0 + rho)) / (a - b1);
    return r > -rho && r < eps;
  };
  return inside(true) && inside(false);
}

static double choose_rho_oracle(double eps) {
  double lo = 0, hi = -1;
  for (double r = 0.02; r < 25 + 3 / eps; r += 0.02)
    if (rho_ok_oracle(r, eps)) { hi = r; lo = r - 0.02; break; }
  for (int i = 0; i < 70; i++) {
    double mid = 0.5 * (lo + hi);
    (rho_ok_oracle(mid, eps) ? hi : lo) = mid;
  }
  return hi;
}

TEST_CASE("choose_rho against the independent oracle and frozen values") {
  CHECK(choose_rho(0.1) == doctest::Approx(9.932826).epsilon(1e-4));
  CHECK(choose_rho(1.0) == doctest::Approx(0.904991).epsilon(1e-4));
  CHECK(choose_rho(0.01) == doctest::Approx(99.993333).epsilon(1e-4));
  for (double eps : {0.05, 0.3, 0.7, 1.5}) {
    double got = choose_rho(eps);
    CHECK(got == doctest::Approx(choose_rho_oracle(eps)).epsilon(1e-4));
    CHECK(rho_ok_oracle(got + 1e-5, eps));
  }
  CHECK_THROWS_AS(choose_rho(0.0), InvalidEpsilon);
  CHECK_THROWS_AS(choose_rho(-1.0), InvalidEpsilon);
}

TEST_CASE("choose_rho is monotone in eps") {
  double prev = INFINITY;
  for (double eps : {0.05, 0.1, 0.2, 0.5, 1.0, 2.0}) {
    double r = choose_rho(eps);
    CHECK(r <= prev + 1e-9);
    prev = r;
  }
}

TEST_CASE("build_interpolant paper variant") {
  double eps = 0.1;
  auto out = build_interpolant(eps, choose_rho(eps), MetricVariant::paper_negative());
  CHECK(out.rho <= 13.0);
  CHECK(out.v.max_knot_mismatch() <= 1e-9);
  CHECK(out.h.max_knot_mismatch() <= 1e-9);

  // tails are the exact analytic pieces
  CHECK(out.v.pieces().front().kind == PieceKind::Exp);
  CHECK(out.h.pieces().front().kind == PieceKind::Exp);
  CHECK(out.v.pieces().back().kind == PieceKind::Sinh);
  CHECK(out.h.pieces().back().kind == PieceKind::Cosh);

  // strict positivity of all six quantities on an independent grid
  double a = -out.rho, b = eps;
  int n = 12000;
  for (int i = 0; i <= n; i++) {
    double r = a + (b - a) * i / n;
    auto jv = out.v.eval_jet(r), jh = out.h.eval_jet(r);
    REQUIRE(jv.value > 0);
    REQUIRE(jv.d1 > 0);
    REQUIRE(jv.d2 > 0);
    REQUIRE(jh.value > 0);
    REQUIRE(jh.d1 > 0);
    REQUIRE(jh.d2 > 0);
  }
}

TEST_CASE("build_interpolant heintze-schroeder left tail") {
  auto out = build_interpolant(0.1, choose_rho(0.1), MetricVariant::heintze_schroeder());
  const Piece& left = out.v.pieces().front();
  CHECK(left.kind == PieceKind::Const);
  CHECK(left.coef[0] == doctest::Approx(std::exp(-out.rho)).epsilon(1e-15));
  auto j = out.v.eval_jet(-out.rho - 2.0);
  CHECK(j.value == doctest::Approx(std::exp(-out.rho)).epsilon(1e-15));
  CHECK(j.d1 == 0.0);
  CHECK(j.d2 == 0.0);
  // nonnegative slope and convexity through the middle
  for (double r = -out.rho; r <= 0.1; r += 1e-3) {
    auto jv = out.v.eval_jet(r);
    CHECK(jv.value > 0);
    CHECK(jv.d1 >= 0);
    CHECK(jv.d2 >= 0);
  }
}

TEST_CASE("build_interpolant fujiwara left tail") {
  auto out = build_interpolant(0.1, choose_rho(0.1), MetricVariant::fujiwara(0.1));
  CHECK(out.v.pieces().front().kind == PieceKind::Exp);
  const Piece& hleft = out.h.pieces().front();
  CHECK(hleft.kind == PieceKind::ExpShift);
  CHECK(hleft.coef[0] == 0.1);
  double r = -out.rho - 3.0;
  CHECK(out.h.value(r) == doctest::Approx(std::exp(r) + 0.1).epsilon(1e-15));
  CHECK(out.v.value(r) == doctest::Approx(std::exp(r)).epsilon(1e-15));
}

TEST_CASE("build_interpolant rejects bad input") {
  CHECK_THROWS_AS(build_interpolant(-1.0, 1.0, MetricVariant::paper_negative()), InvalidParams);
  CHECK_THROWS_AS(build_interpolant(0.1, 1.0, MetricVariant::paper_negative()), InvalidParams);
  CHECK_THROWS_AS(MetricVariant::fujiwara(0.0), InvalidParams);
}

TEST_CASE("serialization round-trip preserves jets exactly") {
  auto out = build_interpolant(0.1, choose_rho(0.1), MetricVariant::paper_negative());
  for (const WarpingFunction* f : {&out.v, &out.h}) {
    std::string text = to_text(*f);
    std::istringstream in(text);
    WarpingFunction g = parse_pieces(in);
    REQUIRE(g.pieces().size() == f->pieces().size());
    for (double r : {-out.rho - 1.0, -out.rho, -5.0, -1.0, 0.0, 0.05, 0.1, 2.0}) {
      auto a = f->eval_jet(r), b = g.eval_jet(r);
      CHECK(a.value == b.value);
      CHECK(a.d1 == b.d1);
      CHECK(a.d2 == b.d2);
    }
  }
}

TEST_CASE("parse errors") {
  std::istringstream bad("piece 0 1 wobble\n");
  CHECK_THROWS_AS(parse_pieces(bad), ParseError);
  std::istringstream empty("");
  CHECK_THROWS_AS(parse_pieces(empty), ParseError);
  std::istringstream badnum("piece zero 1 exp\n");
  CHECK_THROWS_AS(parse_pieces(badnum), ParseError);
}

TEST_CASE("build_interpolant across the parameter range") {
  for (double eps : {0.05, 0.2, 0.5, 1.0, 2.0}) {
    for (auto variant : {MetricVariant::paper_negative(), MetricVariant::heintze_schroeder(),
                         MetricVariant::fujiwara(0.1)}) {
      auto out = build_interpolant(eps, choose_rho(eps), variant);
      CHECK(out.v.max_knot_mismatch() <= 1e-9);
      CHECK(out.h.max_knot_mismatch() <= 1e-9);
      bool strict = variant.strict_convexity();
      int n = 4000;
      for (int i = 0; i <= n; i++) {
        double r = -out.rho + (out.rho + eps) * i / n;
        for (const WarpingFunction* f : {&out.v, &out.h}) {
          auto j = f->eval_jet(r);
          REQUIRE(j.value > 0);
          REQUIRE((strict ? j.d1 > 0 : j.d1 >= 0));
          REQUIRE((strict ? j.d2 > 0 : j.d2 >= 0));
        }
      }
    }
  }
}
