#pragma once

// Line-oriented metric spec files: header keys, then the piece lists of the
// two warping functions.  All reals are written with 17 significant digits
// so parsing reproduces the doubles exactly.

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "warpcurv/certify.hpp"
#include "warpcurv/errors.hpp"
#include "warpcurv/warping.hpp"

namespace warpcurv {

inline void write_spec(std::ostream& out, const MetricSpec& spec) {
  out << "# warpcurv metric spec\n";
  out << "variant " << spec.variant.name() << "\n";
  if (spec.variant.kind == MetricVariant::Kind::Fujiwara)
    out << "tau " << detail::fmt17(spec.variant.tau) << "\n";
  out << "n " << spec.n << "\n";
  out << "eps " << detail::fmt17(spec.eps) << "\n";
  out << "rho " << detail::fmt17(spec.rho) << "\n";
  out << "function v\n" << to_text(spec.v);
  out << "function h\n" << to_text(spec.h);
}

inline MetricSpec read_spec(std::istream& in) {
  MetricSpec spec;
  std::string variant = "paper";
  double tau = 0;
  bool have_v = false, have_h = false;
  std::string line;
  while (true) {
    if (line.empty() && !std::getline(in, line)) break;
    if (line.empty() || line[0] == '#') {
      line.clear();
      continue;
    }
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "variant") {
      ls >> variant;
    } else if (key == "tau") {
      std::string v;
      ls >> v;
      tau = detail::parse_bound(v);
    } else if (key == "n") {
      ls >> spec.n;
    } else if (key == "eps") {
      std::string v;
      ls >> v;
      spec.eps = detail::parse_bound(v);
    } else if (key == "rho") {
      std::string v;
      ls >> v;
      spec.rho = detail::parse_bound(v);
    } else if (key == "function") {
      std::string which;
      ls >> which;
      std::string leftover;
      WarpingFunction f = parse_pieces(in, &leftover);
      if (which == "v") {
        spec.v = f;
        have_v = true;
      } else if (which == "h") {
        spec.h = f;
        have_h = true;
      } else {
        throw ParseError("unknown function name: " + which);
      }
      line = leftover;
      continue;
    } else {
      throw ParseError("unknown spec key: " + key);
    }
    line.clear();
  }
  if (!have_v || !have_h) throw ParseError("spec file must define functions v and h");
  if (variant == "paper") spec.variant = MetricVariant::paper_negative();
  else if (variant == "heintze-schroeder") spec.variant = MetricVariant::heintze_schroeder();
  else if (variant == "fujiwara") spec.variant = MetricVariant::fujiwara(tau);
  else throw ParseError("unknown variant: " + variant);
  return spec;
}

}  // namespace warpcurv
