#include <cmath>
#include <random>

#include "doctest.h"
#include "warpcurv/chart_oracle.hpp"
#include "warpcurv/frame_curvature.hpp"

using namespace warpcurv;

namespace {

// orthonormal coordinate frame for the warped hyperbolic chart at theta=0
std::vector<std::vector<double>> hyperbolic_frame(const WarpingFunction& v,
                                                  const WarpingFunction& h, int n,
                                                  const Point& p) {
  std::vector<std::vector<double>> f(n, std::vector<double>(n, 0.0));
  double y = p[n - 1];
  f[0][0] = 1.0;
  f[1][1] = 1.0 / v.value(p[0]);
  for (int i = 2; i < n; i++) f[i][i] = y / h.value(p[0]);
  return f;
}

}  // namespace

TEST_CASE("warped hyperbolic chart metric entries") {
  auto c = chart_warped_hyperbolic(wf_sinh(0.0), wf_cosh(), 4);
  auto g = c.g({0.5, 0.0, 0.0, 1.0});
  CHECK(g[0][0] == 1.0);
  CHECK(g[1][1] == doctest::Approx(std::sinh(0.5) * std::sinh(0.5)).epsilon(1e-15));
  CHECK(g[1][1] == doctest::Approx(0.2715403).epsilon(1e-6));
  CHECK(g[2][2] == doctest::Approx(std::cosh(0.5) * std::cosh(0.5)).epsilon(1e-15));
  CHECK(g[3][3] == doctest::Approx(1.2715403).epsilon(1e-6));
  CHECK(!c.domain({0.5, 0.0, 0.0, -1.0}));
  CHECK(!c.domain({0.5, 0.0, 0.0, 0.0}));

  auto c3 = chart_warped_hyperbolic(wf_exp(), wf_exp(), 3);
  auto g3 = c3.g({0.0, 0.0, 1.0});
  for (int i = 0; i < 3; i++)
    for (int j = 0; j < 3; j++) CHECK(g3[i][j] == (i == j ? 1.0 : 0.0));
}

TEST_CASE("heisenberg chart metric entries") {
  auto flat = chart_heisenberg(wf_const(1.0), wf_const(1.0), wf_const(1.0));
  auto g = flat.g({0.0, 0.0, 0.0, 0.0});
  for (int i = 0; i < 4; i++)
    for (int j = 0; j < 4; j++) CHECK(g[i][j] == (i == j ? 1.0 : 0.0));

  auto c = chart_heisenberg(wf_const(1.0), wf_const(1.0), wf_exp());
  auto g2 = c.g({1.0, 0.5, 0.0, 0.0});
  double e2 = std::exp(2.0);
  CHECK(g2[2][2] == doctest::Approx(1.0 + 0.25 * e2).epsilon(1e-14));
  CHECK(g2[2][3] == doctest::Approx(-0.5 * e2).epsilon(1e-14));
  CHECK(g2[3][3] == doctest::Approx(e2).epsilon(1e-14));

  // det g = (h1 h2 h3)^2 independent of x
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int t = 0; t < 20; t++) {
    double r = u(rng), x = u(rng);
    auto gm = c.g({r, x, u(rng), u(rng)});
    double det_yz = gm[2][2] * gm[3][3] - gm[2][3] * gm[3][2];
    double expect = std::exp(2 * r);  // h1 = h2 = 1
    CHECK(det_yz * gm[1][1] == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("finite-difference curvature of flat space is zero") {
  auto c = chart_euclidean(3);
  auto R = riemann_fd(c, {0.1, -0.4, 2.0}, FDConfig{1e-3});
  for (double v : R.t) CHECK(std::fabs(v) <= 1e-10);
}

TEST_CASE("finite-difference curvature of the hyperbolic chart") {
  auto v = wf_sinh(0.0);
  auto h = wf_cosh();
  for (int n : {3, 4, 5}) {
    auto c = chart_warped_hyperbolic(v, h, n);
    Point p(n, 0.0);
    p[0] = 0.5;
    p[n - 1] = 1.0;
    auto R = riemann_fd(c, p, FDConfig{1e-3});
    CHECK(R.max_symmetry_violation() <= 1e-7);
    auto g = c.g(p);
    for (int a = 0; a < n; a++)
      for (int b = a + 1; b < n; b++) {
        double sec = R.at(a, b, b, a) / (g[a][a] * g[b][b]);
        CHECK(sec == doctest::Approx(-1.0).epsilon(1e-6));
      }
  }
}

TEST_CASE("domain margin enforcement") {
  auto c = chart_warped_hyperbolic(wf_sinh(0.0), wf_cosh(), 4);
  CHECK_THROWS_AS(riemann_fd(c, {0.5, 0.0, 0.0, 0.003}, FDConfig{1e-3}), DomainMargin);
}

TEST_CASE("frame comparison: hyperbolic chart vs assembled tensor") {
  auto v = wf_sinh(0.0);
  auto h = wf_cosh();
  for (int n : {3, 4, 5}) {
    int m = n - 1;
    WarpProfile prof;
    prof.h.push_back(v);
    for (int i = 1; i < m; i++) prof.h.push_back(h);
    std::vector<int> rest;
    for (int i = 2; i <= m; i++) rest.push_back(i);
    std::vector<FiberCurvature::Factor> factors{{{1}, 0.0}};
    if (!rest.empty()) factors.push_back({rest, -1.0});
    auto fiber = FiberCurvature::constant_blocks(factors);
    auto chart = chart_warped_hyperbolic(v, h, n);
    for (double r : {0.25, 0.5, 1.0, 2.0}) {
      Point p(n, 0.0);
      p[0] = r;
      p[n - 1] = 1.0;
      auto cc = assemble_curvature(FrameBracketData::zero(m), prof, fiber, r);
      auto rep = frame_compare(chart, hyperbolic_frame(v, h, n, p), p, FDConfig{1e-3},
                               [&](int A, int B, int C, int D) { return cc.at(A, B, C, D); });
      CHECK(rep.max_abs_diff <= 1e-6);
    }
  }
}

TEST_CASE("frame comparison: heisenberg chart pins the mixed-term sign") {
  auto h1 = wf_const(1.0), h2 = wf_const(1.0);
  auto h3 = wf_exp();
  auto chart = chart_heisenberg(h1, h2, h3);
  auto data = FrameBracketData::zero(3);
  data.set_bracket(0, 1, 2, 1.0);
  WarpProfile prof{{h1, h2, h3}};

  for (double r : {0.0, -1.0}) {
    Point p{r, 0.0, 0.0, 0.0};
    std::vector<std::vector<double>> frame(4, std::vector<double>(4, 0.0));
    frame[0][0] = 1.0;
    frame[1][1] = 1.0;
    frame[2][2] = 1.0;
    frame[3][3] = 1.0 / std::exp(r);

    auto cc = assemble_curvature(data, prof, FiberCurvature::lie_frame(), r);
    auto rep = frame_compare(chart, frame, p, FDConfig{1e-3},
                             [&](int A, int B, int C, int D) { return cc.at(A, B, C, D); });
    CHECK(rep.max_abs_diff <= 1e-4);

    // the erroneous mixed-term formula disagrees by e^r at (d_r,Y1,Y2,Y3)
    auto b = bracket_coeffs(data, prof, r);
    auto R = riemann_fd(chart, p, FDConfig{1e-3});
    double fd = 0;
    for (int a = 0; a < 4; a++)
      for (int bb = 0; bb < 4; bb++)
        for (int ccc = 0; ccc < 4; ccc++)
          for (int d = 0; d < 4; d++)
            fd += frame[0][a] * frame[1][bb] * frame[2][ccc] * frame[3][d] * R.at(a, bb, ccc, d);
    CHECK(fd == doctest::Approx(mixed_term(0, 1, 2, prof, b, r)).epsilon(1e-4));
    double err = mixed_term_erroneous(0, 1, 2, prof, b, r);
    CHECK(std::fabs(fd - err) == doctest::Approx(std::exp(r)).epsilon(1e-3));
  }
}

TEST_CASE("frame comparison: shifted-exponential warped metric") {
  auto v = wf_exp();
  auto h = wf_exp_shift(0.3);
  int n = 4, m = 3;
  WarpProfile prof{{v, h, h}};
  auto fiber = FiberCurvature::constant_blocks({{{1}, 0.0}, {{2, 3}, -1.0}});
  auto chart = chart_warped_hyperbolic(v, h, n);
  for (double r : {-1.0, 0.0, 0.4}) {
    Point p{r, 0.0, 0.0, 1.0};
    auto cc = assemble_curvature(FrameBracketData::zero(m), prof, fiber, r);
    auto rep = frame_compare(chart, hyperbolic_frame(v, h, n, p), p, FDConfig{1e-3},
                             [&](int A, int B, int C, int D) { return cc.at(A, B, C, D); });
    CHECK(rep.max_abs_diff <= 1e-6);
    auto k = paper_principal_curvatures(v, h, n, r);
    CHECK(cc.sec(1, 2) == doctest::Approx(k.K1).epsilon(1e-12));
    CHECK(cc.sec(2, 3) == doctest::Approx(*k.K4).epsilon(1e-12));
  }
}

TEST_CASE("frame comparison inside the constructed interpolant") {
  auto built = build_interpolant(0.1, choose_rho(0.1), MetricVariant::paper_negative());
  int n = 4, m = 3;
  WarpProfile prof{{built.v, built.h, built.h}};
  auto fiber = FiberCurvature::constant_blocks({{{1}, 0.0}, {{2, 3}, -1.0}});
  auto chart = chart_warped_hyperbolic(built.v, built.h, n);
  // points interior to spline pieces, away from the knots
  for (double r : {-5.0, -1.0, 0.05}) {
    Point p{r, 0.0, 0.0, 1.0};
    auto cc = assemble_curvature(FrameBracketData::zero(m), prof, fiber, r);
    auto rep = frame_compare(chart, hyperbolic_frame(built.v, built.h, n, p), p, FDConfig{2e-4},
                             [&](int A, int B, int C, int D) { return cc.at(A, B, C, D); });
    CHECK(rep.max_abs_diff <= 1e-5);
    auto k = paper_principal_curvatures(built.v, built.h, n, r);
    CHECK(cc.sec(0, 1) == doctest::Approx(k.K3).epsilon(1e-12));
    CHECK(cc.sec(0, 2) == doctest::Approx(k.K2).epsilon(1e-12));
    CHECK(cc.sec(1, 2) == doctest::Approx(k.K1).epsilon(1e-12));
    CHECK(cc.sec(2, 3) == doctest::Approx(*k.K4).epsilon(1e-12));
  }
}

TEST_CASE("frame comparison: flat chart against the zero tensor") {
  auto chart = chart_euclidean(3);
  std::vector<std::vector<double>> frame(3, std::vector<double>(3, 0.0));
  for (int i = 0; i < 3; i++) frame[i][i] = 1.0;
  auto rep = frame_compare(chart, frame, {0.0, 0.0, 0.0}, FDConfig{1e-3},
                           [](int, int, int, int) { return 0.0; });
  CHECK(rep.max_abs_diff <= 1e-10);
}

TEST_CASE("frame comparison rejects non-orthonormal frames") {
  auto chart = chart_euclidean(2);
  std::vector<std::vector<double>> frame{{1.0, 0.0}, {0.5, 1.0}};
  CHECK_THROWS_AS(frame_compare(chart, frame, {0.0, 0.0}, FDConfig{1e-3},
                                [](int, int, int, int) { return 0.0; }),
                  FrameNotOrthonormal);
}

TEST_CASE("convergence order of the double finite difference") {
  auto chart = chart_warped_hyperbolic(wf_sinh(0.0), wf_cosh(), 4);
  auto rep = convergence_check(chart, {0.5, 0.0, 0.0, 1.0}, -1.0);
  CHECK(rep.order > 3.5);
  CHECK(rep.order < 4.5);
  CHECK(rep.reliable);

  auto flat = convergence_check(chart_euclidean(3), {0.0, 0.0, 0.0}, 0.0);
  CHECK(!flat.reliable);  // errors at the round-off floor

  auto coarse = convergence_check(chart, {0.5, 0.0, 0.0, 1.0}, -1.0, 0.3);
  CHECK(!coarse.reliable);
}
