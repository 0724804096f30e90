// warpcurv: workbench for warped-product curvature experiments.
// Subcommands: construct, curvature, certify, volume, oracle, bundle,
// morse, tree.  Exit codes: 0 success, 1 invalid input, 2 scientific
// failure (construction, certification or oracle mismatch).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "warpcurv/certify.hpp"
#include "warpcurv/chart_oracle.hpp"
#include "warpcurv/circle_bundle.hpp"
#include "warpcurv/cone_tree.hpp"
#include "warpcurv/frame_curvature.hpp"
#include "warpcurv/handle_calculus.hpp"
#include "warpcurv/spec_io.hpp"
#include "warpcurv/volume.hpp"
#include "warpcurv/warping.hpp"

using namespace warpcurv;

namespace {

std::string g17(double x) { return detail::fmt17(x); }

MetricVariant parse_variant(const std::string& name, double tau) {
  if (name == "paper") return MetricVariant::paper_negative();
  if (name == "heintze-schroeder") return MetricVariant::heintze_schroeder();
  if (name == "fujiwara") return MetricVariant::fujiwara(tau);
  throw InvalidParams("unknown variant: " + name);
}

MetricSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParams("cannot open spec file: " + path);
  return read_spec(in);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, sep))
    if (!tok.empty()) out.push_back(tok);
  return out;
}

TreePoint parse_tree_point(const MetricTree& T, const std::string& s) {
  auto colon = s.find(':');
  if (colon == std::string::npos) return T.point_at_vertex(T.vertex_id(s));
  int edge = std::stoi(s.substr(0, colon));
  double off = std::stod(s.substr(colon + 1));
  TreePoint p{edge, off};
  T.check_point(p);
  return p;
}

ConePoint parse_cone_point(const MetricTree& T, const std::string& s) {
  auto comma = s.find(',');
  if (comma == std::string::npos) throw InvalidParams("cone point must be t,location: " + s);
  ConePoint p;
  p.t = std::stod(s.substr(0, comma));
  p.p = parse_tree_point(T, s.substr(comma + 1));
  return p;
}

int cmd_construct(double eps, const std::string& variant_name, double tau,
                  std::optional<double> rho, int n, const std::string& out_path) {
  MetricVariant var = parse_variant(variant_name, tau);
  double rho0 = rho ? *rho : choose_rho(eps);
  auto built = build_interpolant(eps, rho0, var);
  MetricSpec spec{built.v, built.h, n, eps, built.rho, var};

  std::ostringstream report;
  report << "variant = " << var.name() << "\n";
  report << "eps = " << g17(eps) << "\n";
  report << "rho = " << g17(built.rho) << "\n";
  report << "retries = " << built.retries << "\n";
  report << "grid_step = " << g17(built.report.grid_step) << "\n";
  const char* names[6] = {"min_v", "min_v1", "min_v2", "min_h", "min_h1", "min_h2"};
  for (int i = 0; i < 6; i++)
    report << names[i] << " = " << g17(built.report.minima[i]) << "\n";
  report << "positivity = " << (built.report.strict ? "strict" : "nonnegative") << "\n";

  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw InvalidParams("cannot write spec file: " + out_path);
    write_spec(out, spec);
    report << "spec_file = " << out_path << "\n";
  } else {
    write_spec(std::cout, spec);
  }
  std::cout << report.str();
  return 0;
}

int cmd_curvature(const std::string& spec_path, double rmin, double rmax, double step,
                  const std::string& out_path) {
  MetricSpec spec = load_spec(spec_path);
  if (!(step > 0) || !(rmax >= rmin)) throw InvalidParams("bad r range");
  std::ostringstream csv;
  bool with_k4 = spec.n >= 4;
  csv << (with_k4 ? "r,K1,K2,K3,K4\n" : "r,K1,K2,K3\n");
  long steps = (long)std::floor((rmax - rmin) / step + 1e-9);
  for (long i = 0; i <= steps; i++) {
    double r = rmin + i * step;
    auto k = paper_principal_curvatures(spec.v, spec.h, spec.n, r);
    csv << g17(r) << "," << g17(k.K1) << "," << g17(k.K2) << "," << g17(k.K3);
    if (with_k4) csv << "," << g17(*k.K4);
    csv << "\n";
  }
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw InvalidParams("cannot write: " + out_path);
    out << csv.str();
  } else {
    std::cout << csv.str();
  }
  return 0;
}

int cmd_certify(const std::string& spec_path) {
  MetricSpec spec = load_spec(spec_path);
  BoundCertificate cert = certify_upper_bound(spec);
  std::cout << "upper = " << g17(cert.upper) << "\n";
  std::cout << "upper_attained = " << (cert.upper_attained ? "true" : "false") << "\n";
  std::cout << "attained_max = " << g17(cert.attained_max) << "\n";
  if (cert.lower) {
    std::cout << "lower = " << g17(*cert.lower) << "\n";
    std::cout << "lower_attained = " << (cert.lower_attained ? "true" : "false") << "\n";
  } else {
    std::cout << "lower = unbounded\n";
  }
  std::cout << "strictly_negative = " << (cert.strictly_negative ? "true" : "false") << "\n";
  if (cert.nonstrict) std::cout << "flag = nonpositive, not strictly negative\n";
  std::cout << "window = [" << g17(cert.window_lo) << ", " << g17(cert.window_hi) << "]\n";
  std::cout << "grid_step = " << g17(cert.grid_step) << "\n";
  std::cout << "method = " << cert.method << "\n";
  return 0;
}

int cmd_volume(const std::string& spec_path, double r0, double volB) {
  MetricSpec spec = load_spec(spec_path);
  EndSpec end{spec.v, spec.h, spec.n, volB, r0};
  auto vol = end_volume(end);
  if (vol)
    std::cout << "volume = " << g17(*vol) << "\n";
  else
    std::cout << "volume = divergent\n";
  return 0;
}

int cmd_oracle(const std::string& check) {
  FDConfig cfg{1e-3};
  double worst = 0;
  bool pass = false;

  if (check == "hyperbolic") {
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
        std::vector<std::vector<double>> frame(n, std::vector<double>(n, 0.0));
        frame[0][0] = 1.0;
        frame[1][1] = 1.0 / v.value(r);
        for (int i = 2; i < n; i++) frame[i][i] = 1.0 / h.value(r);
        auto cc = assemble_curvature(FrameBracketData::zero(m), prof, fiber, r);
        auto rep = frame_compare(chart, frame, p, cfg,
                                 [&](int A, int B, int C, int D) { return cc.at(A, B, C, D); });
        worst = std::max(worst, rep.max_abs_diff);
      }
    }
    pass = worst <= 1e-6;
  } else if (check == "heisenberg-mixed") {
    auto h1 = wf_const(1.0), h2 = wf_const(1.0);
    auto h3 = wf_exp();
    auto chart = chart_heisenberg(h1, h2, h3);
    auto data = FrameBracketData::zero(3);
    data.set_bracket(0, 1, 2, 1.0);
    WarpProfile prof{{h1, h2, h3}};
    Point p{0.0, 0.0, 0.0, 0.0};
    std::vector<std::vector<double>> frame(4, std::vector<double>(4, 0.0));
    for (int i = 0; i < 4; i++) frame[i][i] = 1.0;
    auto cc = assemble_curvature(data, prof, FiberCurvature::lie_frame(), 0.0);
    auto rep = frame_compare(chart, frame, p, cfg,
                             [&](int A, int B, int C, int D) { return cc.at(A, B, C, D); });
    worst = rep.max_abs_diff;
    pass = worst <= 1e-4;
    // the corrected and erroneous formulas must be told apart by the oracle
    auto b = bracket_coeffs(data, prof, 0.0);
    auto R = riemann_fd(chart, p, cfg);
    double fd = R.at(0, 1, 2, 3);
    double good = mixed_term(0, 1, 2, prof, b, 0.0);
    double bad = mixed_term_erroneous(0, 1, 2, prof, b, 0.0);
    std::cout << "fd = " << g17(fd) << "\n";
    std::cout << "mixed_term = " << g17(good) << "\n";
    std::cout << "mixed_term_erroneous = " << g17(bad) << "\n";
    pass = pass && std::fabs(fd - good) <= 1e-4 && std::fabs(fd - bad) >= 0.999;
  } else if (check == "flat") {
    auto chart = chart_euclidean(4);
    auto R = riemann_fd(chart, {0.0, 0.0, 0.0, 0.0}, cfg);
    for (double v : R.t) worst = std::max(worst, std::fabs(v));
    pass = worst <= 1e-10;
  } else if (check == "convergence") {
    auto chart = chart_warped_hyperbolic(wf_sinh(0.0), wf_cosh(), 4);
    auto rep = convergence_check(chart, {0.5, 0.0, 0.0, 1.0}, -1.0);
    std::cout << "order = " << g17(rep.order) << "\n";
    std::cout << "note = " << rep.note << "\n";
    worst = std::fabs(rep.order - 4.0);
    pass = rep.reliable;
  } else {
    throw InvalidParams("unknown oracle check: " + check);
  }

  std::cout << "max_discrepancy = " << g17(worst) << "\n";
  std::cout << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? 0 : 2;
}

int cmd_bundle(int rank, const std::string& free_angles, const std::string& torsion,
               const std::string& torsion_angles, std::optional<double> t) {
  OrientableFlatBundle b;
  b.rank = rank;
  for (const auto& s : split(free_angles, ',')) b.free_angles.push_back(std::stod(s));
  for (const auto& s : split(torsion, ',')) b.torsion.push_back(std::stoll(s));
  for (const auto& s : split(torsion_angles, ',')) {
    auto parts = split(s, '/');
    if (parts.size() != 2) throw InvalidParams("torsion angle must be p/q: " + s);
    b.torsion_angles.push_back({std::stoll(parts[0]), std::stoll(parts[1])});
  }
  auto normalized = validate(b);
  std::cout << "valid = true\n";
  std::cout << "degree = " << trivializing_cover_degree(b) << "\n";
  for (size_t j = 0; j < normalized.size(); j++)
    std::cout << "torsion_angle_" << j << " = " << normalized[j].p << "/" << normalized[j].d
              << "\n";
  if (t) {
    auto hol = deform(b, *t);
    std::cout << "t = " << g17(*t) << "\n";
    for (size_t i = 0; i < hol.free_angles.size(); i++)
      std::cout << "free_angle_" << i << " = " << g17(hol.free_angles[i]) << "\n";
  }
  return 0;
}

int cmd_morse(const std::string& codims, bool countable) {
  StratumData s;
  for (const auto& c : split(codims, ',')) s.codims.push_back(std::stoi(c));
  s.countable_family = countable;
  auto handles = handle_decomposition(s);
  std::cout << "handles =";
  for (auto [k, cnt] : handles) std::cout << " " << k << ":" << cnt;
  std::cout << "\n";
  bool asph = is_aspherical(s);
  std::cout << "aspherical = " << (asph ? "true" : "false") << "\n";
  if (asph) {
    auto kr = kernel_rank(s);
    if (kr.countably_infinite)
      std::cout << "kernel_rank = countably-infinite\n";
    else
      std::cout << "kernel_rank = " << kr.rank << "\n";
  }
  std::cout << "wedge_spheres =";
  for (int d : homotopy_type(s)) std::cout << " S" << d;
  std::cout << "\n";
  return 0;
}

int cmd_tree(const std::string& tree_path, const std::vector<std::string>& dist,
             const std::vector<std::string>& med, const std::vector<std::string>& crossings,
             const std::vector<std::string>& open_pts, const std::vector<std::string>& perturb) {
  std::ifstream in(tree_path);
  if (!in) throw InvalidParams("cannot open tree file: " + tree_path);
  MetricTree T = MetricTree::parse(in);

  if (!dist.empty()) {
    ConePoint p = parse_cone_point(T, dist[0]), q = parse_cone_point(T, dist[1]);
    std::cout << "distance = " << g17(cone_distance(T, p, q)) << "\n";
  }
  if (!med.empty()) {
    TreePoint a = parse_tree_point(T, med[0]);
    TreePoint b = parse_tree_point(T, med[1]);
    TreePoint c = parse_tree_point(T, med[2]);
    TreePoint m = T.median(a, b, c);
    std::cout << "median = " << m.edge << ":" << g17(m.offset) << "\n";
  }
  if (!crossings.empty()) {
    auto x = parse_cone_point(T, crossings[0]);
    auto y = parse_cone_point(T, crossings[1]);
    auto z = parse_cone_point(T, crossings[2]);
    auto c = wall_crossings(T, x, y, z);
    std::cout << "crossings = " << g17(c[0]) << " " << g17(c[1]) << " " << g17(c[2]) << "\n";
  }
  if (!open_pts.empty()) {
    auto x = parse_cone_point(T, open_pts[0]);
    auto y = parse_cone_point(T, open_pts[1]);
    auto z = parse_cone_point(T, open_pts[2]);
    bool open = is_open(T, x, y, z);
    if (open) {
      std::cout << "open\n";
    } else {
      std::cout << "not open";
      try {
        auto c = wall_crossings(T, x, y, z);
        std::cout << "; crossings " << g17(c[0]) << " " << g17(c[1]) << " " << g17(c[2]);
      } catch (const DegenerateTripod&) {
        std::cout << "; degenerate (planar)";
      }
      std::cout << "\n";
    }
  }
  if (!perturb.empty()) {
    auto x = parse_cone_point(T, perturb[0]);
    auto y = parse_cone_point(T, perturb[1]);
    auto z = parse_cone_point(T, perturb[2]);
    int n = std::stoi(perturb[3]);
    auto res = find_open_perturbation(T, x, y, z, n);
    if (res.found) {
      std::cout << "found = true\n";
      std::cout << "z_n = " << g17(res.z.t) << "," << res.z.p.edge << ":" << g17(res.z.p.offset)
                << "\n";
      std::cout << "distance = " << g17(cone_distance(T, res.z, z)) << "\n";
    } else {
      std::cout << "found = false\n";
      std::cout << "diagnostic = " << res.diagnostic << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"warped-product curvature workbench"};
  app.require_subcommand(1);

  // construct
  double eps = 0, tau = 0;
  std::string variant = "paper", out_path, spec_path;
  std::optional<double> rho_opt;
  int n = 4;
  auto* construct = app.add_subcommand("construct", "build the warping function pair");
  construct->add_option("--eps", eps, "right gluing knot")->required();
  construct->add_option("--variant", variant, "paper | heintze-schroeder | fujiwara");
  construct->add_option("--tau", tau, "shift for the fujiwara variant");
  double rho_in = -1;
  auto* rho_flag = construct->add_option("--rho", rho_in, "left gluing knot distance");
  construct->add_option("--n", n, "manifold dimension");
  construct->add_option("--out", out_path, "spec file path");

  // curvature
  double rmin = -5, rmax = 2, rstep = 0.1;
  auto* curvature = app.add_subcommand("curvature", "principal curvature table (CSV)");
  curvature->add_option("--spec", spec_path, "spec file")->required();
  curvature->add_option("--rmin", rmin);
  curvature->add_option("--rmax", rmax);
  curvature->add_option("--step", rstep);
  curvature->add_option("--out", out_path, "CSV path (stdout when omitted)");

  // certify
  auto* certify = app.add_subcommand("certify", "curvature bound certificate");
  certify->add_option("--spec", spec_path, "spec file")->required();

  // volume
  double r0 = 0, volB = 1;
  auto* volume = app.add_subcommand("volume", "end volume");
  volume->add_option("--spec", spec_path, "spec file")->required();
  volume->add_option("--r0", r0, "cut level");
  volume->add_option("--volB", volB, "base volume");

  // oracle
  std::string check;
  auto* oracle = app.add_subcommand("oracle", "finite-difference cross-checks");
  oracle->add_option("--check", check, "hyperbolic | heisenberg-mixed | flat | convergence")
      ->required();

  // bundle
  int rank = 0;
  std::string free_angles, torsion, torsion_angles;
  std::optional<double> deform_t;
  double deform_in = -1;
  auto* bundle = app.add_subcommand("bundle", "flat circle bundle holonomy");
  bundle->add_option("--rank", rank, "free rank of H1");
  bundle->add_option("--free-angles", free_angles, "comma-separated turns");
  bundle->add_option("--torsion", torsion, "comma-separated orders");
  bundle->add_option("--torsion-angles", torsion_angles, "comma-separated p/q turns");
  auto* deform_flag = bundle->add_option("--deform", deform_in, "deformation parameter");

  // morse
  std::string codims;
  bool countable = false;
  auto* morse = app.add_subcommand("morse", "handle calculus of the complement");
  morse->add_option("--codims", codims, "comma-separated codimensions")->required();
  morse->add_flag("--countable", countable, "census truncated from a countable family");

  // tree
  std::string tree_path;
  std::vector<std::string> dist, med, crossings, open_pts, perturb;
  auto* tree = app.add_subcommand("tree", "geodesics in R x tree");
  tree->add_option("--tree", tree_path, "edge list file")->required();
  tree->add_option("--distance", dist, "two cone points")->expected(2);
  tree->add_option("--median", med, "three tree points")->expected(3);
  tree->add_option("--crossings", crossings, "three cone points")->expected(3);
  tree->add_option("--open", open_pts, "three cone points")->expected(3);
  tree->add_option("--perturb", perturb, "three cone points and n")->expected(4);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (construct->parsed()) {
      if (rho_flag->count()) rho_opt = rho_in;
      return cmd_construct(eps, variant, tau, rho_opt, n, out_path);
    }
    if (curvature->parsed()) return cmd_curvature(spec_path, rmin, rmax, rstep, out_path);
    if (certify->parsed()) return cmd_certify(spec_path);
    if (volume->parsed()) return cmd_volume(spec_path, r0, volB);
    if (oracle->parsed()) return cmd_oracle(check);
    if (bundle->parsed()) {
      if (deform_flag->count()) deform_t = deform_in;
      return cmd_bundle(rank, free_angles, torsion, torsion_angles, deform_t);
    }
    if (morse->parsed()) return cmd_morse(codims, countable);
    if (tree->parsed()) return cmd_tree(tree_path, dist, med, crossings, open_pts, perturb);
  } catch (const ConstructionFailed& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const CertificationFailed& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NotDiagonalizable& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
