#pragma once

// Flat Euclidean circle bundles over a base with finitely generated first
// homology Z^k + T, described by rotation angles of the generators.  Free
// angles are stored in turns as reals; torsion angles as exact rationals so
// the order arithmetic is exact.  The straight-line contraction of the free
// summand ends at a holonomy with finite cyclic image whose order is the
// degree of a trivializing cover.
//
// Rotation-group holonomy factors through H1, which is what this data
// captures.  A bundle with full O(2) holonomy is described here by the data
// of its orientation double cover.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "warpcurv/errors.hpp"

namespace warpcurv {

struct TurnFraction {
  std::int64_t num = 0;
  std::int64_t den = 1;
};

struct OrientableFlatBundle {
  int rank = 0;                             // free rank of H1
  std::vector<std::int64_t> torsion;        // orders d_j >= 2
  std::vector<double> free_angles;          // turns in [0, 1)
  std::vector<TurnFraction> torsion_angles; // turns, one per torsion factor
};

struct TorsionAngle {
  std::int64_t p = 0;  // normalized numerator: angle = p / d turns
  std::int64_t d = 1;
};

// checks invariants and normalizes each torsion angle to p/d with the
// factor order d as denominator
inline std::vector<TorsionAngle> validate(const OrientableFlatBundle& b) {
  if (b.rank < 0) throw InvalidParams("rank must be nonnegative");
  if ((int)b.free_angles.size() != b.rank)
    throw InvalidParams("free angle count must equal the rank");
  for (double a : b.free_angles)
    if (!(a >= 0 && a < 1)) throw InvalidParams("free angles must lie in [0, 1) turns");
  if (b.torsion.size() != b.torsion_angles.size())
    throw InvalidParams("torsion angle count must equal the torsion factor count");
  std::vector<TorsionAngle> out;
  for (size_t j = 0; j < b.torsion.size(); j++) {
    std::int64_t d = b.torsion[j];
    if (d < 2) throw InvalidParams("torsion orders must be at least 2");
    const TurnFraction& a = b.torsion_angles[j];
    if (a.den <= 0) throw InvalidParams("torsion angle denominator must be positive");
    // the image of an order-d generator must have order dividing d
    if ((d * a.num) % a.den != 0)
      throw TorsionOrderMismatch("torsion angle is not a multiple of 1/d turns");
    std::int64_t p = ((d * a.num / a.den) % d + d) % d;
    out.push_back({p, d});
  }
  return out;
}

struct HolonomyData {
  std::vector<double> free_angles;       // turns in [0, 1)
  std::vector<TorsionAngle> torsion_angles;
};

// straight-line (shortest-path) contraction of the free summand;
// torsion images are kept fixed
inline HolonomyData deform(const OrientableFlatBundle& b, double t) {
  if (!(t >= 0 && t <= 1)) throw InvalidParams("deformation parameter must lie in [0, 1]");
  HolonomyData out;
  out.torsion_angles = validate(b);
  for (double a : b.free_angles) {
    double signed_angle = a <= 0.5 ? a : a - 1.0;  // shortest path to the identity
    double d = (1.0 - t) * signed_angle;
    if (d < 0) d += 1.0;
    out.free_angles.push_back(d == 1.0 ? 0.0 : d);
  }
  return out;
}

// order of the finite holonomy image at the end of the deformation
inline std::int64_t trivializing_cover_degree(const OrientableFlatBundle& b) {
  std::int64_t deg = 1;
  for (const TorsionAngle& a : validate(b)) {
    std::int64_t order = a.d / std::gcd(a.p, a.d);  // gcd(0, d) = d
    deg = std::lcm(deg, order);
  }
  return deg;
}

}  // namespace warpcurv
