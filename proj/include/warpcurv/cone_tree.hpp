#pragma once

// Finite metric trees and geodesic geometry of R x T.  Points of T live on
// edges as (edge, offset); geodesics in the product project to the unique
// tree arc with the R-coordinate linear in arclength.  A geodesic triangle
// is open when any two sides meet only at their common vertex; in the
// nondegenerate tripod case this is decided by the three crossing heights
// on the wall R x {median}, in the degenerate case by planar collinearity
// inside the common flat strip.

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "warpcurv/errors.hpp"

namespace warpcurv {

struct TreePoint {
  int edge = 0;
  double offset = 0;  // measured from the edge's first endpoint
};

class MetricTree {
 public:
  struct Edge {
    int u = 0, v = 0;
    double len = 0;
  };

  MetricTree(std::vector<std::string> names, std::vector<Edge> edges)
      : names_(std::move(names)), edges_(std::move(edges)) {
    build();
  }

  // line-oriented edge list: "u v length" per line; '#' starts a comment
  static MetricTree parse(std::istream& in) {
    std::vector<std::string> names;
    std::map<std::string, int> byname;
    std::vector<Edge> edges;
    auto intern = [&](const std::string& s) {
      auto it = byname.find(s);
      if (it != byname.end()) return it->second;
      int id = (int)names.size();
      names.push_back(s);
      byname.emplace(s, id);
      return id;
    };
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::istringstream ls(line);
      std::string u, v;
      double len;
      if (!(ls >> u >> v >> len)) throw ParseError("bad tree edge line: " + line);
      edges.push_back({intern(u), intern(v), len});
    }
    return MetricTree(std::move(names), std::move(edges));
  }

  int vertex_count() const { return (int)names_.size(); }
  int edge_count() const { return (int)edges_.size(); }
  const Edge& edge(int e) const { return edges_[e]; }
  const std::vector<std::string>& names() const { return names_; }

  int vertex_id(const std::string& name) const {
    for (int i = 0; i < (int)names_.size(); i++)
      if (names_[i] == name) return i;
    throw BadTree("unknown vertex: " + name);
  }

  TreePoint point_at_vertex(int vid) const {
    for (int e = 0; e < (int)edges_.size(); e++) {
      if (edges_[e].u == vid) return {e, 0.0};
      if (edges_[e].v == vid) return {e, edges_[e].len};
    }
    throw BadTree("vertex has no incident edge");
  }

  void check_point(const TreePoint& p) const {
    if (p.edge < 0 || p.edge >= (int)edges_.size()) throw BadTree("bad edge index");
    if (!(p.offset >= 0 && p.offset <= edges_[p.edge].len))
      throw BadTree("point offset outside its edge");
  }

  // vertex id when the point sits exactly on a vertex, else -1
  int vertex_of(const TreePoint& p) const {
    if (p.offset == 0) return edges_[p.edge].u;
    if (p.offset == edges_[p.edge].len) return edges_[p.edge].v;
    return -1;
  }

  double vdist(int a, int b) const { return vdist_[a][b]; }

  double distance(const TreePoint& p, const TreePoint& q) const {
    check_point(p);
    check_point(q);
    if (p.edge == q.edge) return std::fabs(p.offset - q.offset);
    const Edge &ep = edges_[p.edge], &eq = edges_[q.edge];
    double best = std::numeric_limits<double>::infinity();
    for (auto [pv, pd] : {std::pair{ep.u, p.offset}, std::pair{ep.v, ep.len - p.offset}})
      for (auto [qv, qd] : {std::pair{eq.u, q.offset}, std::pair{eq.v, eq.len - q.offset}})
        best = std::min(best, pd + vdist_[pv][qv] + qd);
    return best;
  }

  // point at arclength s from p along the unique arc toward q
  TreePoint point_along(const TreePoint& p, const TreePoint& q, double s) const {
    double total = distance(p, q);
    if (s <= 0) return p;
    if (s >= total) return q;
    if (p.edge == q.edge)
      return {p.edge, p.offset + (q.offset > p.offset ? s : -s)};

    const Edge &ep = edges_[p.edge], &eq = edges_[q.edge];
    // exit corner achieving the minimum route
    int best_pv = ep.u, best_qv = eq.u;
    double best = std::numeric_limits<double>::infinity();
    for (auto [pv, pd] : {std::pair{ep.u, p.offset}, std::pair{ep.v, ep.len - p.offset}})
      for (auto [qv, qd] : {std::pair{eq.u, q.offset}, std::pair{eq.v, eq.len - q.offset}}) {
        double d = pd + vdist_[pv][qv] + qd;
        if (d < best) {
          best = d;
          best_pv = pv;
          best_qv = qv;
        }
      }
    double d_exit = (best_pv == ep.u) ? p.offset : ep.len - p.offset;
    if (s <= d_exit && d_exit > 0)
      return {p.edge, p.offset + (best_pv == ep.v ? s : -s)};
    double rem = s - d_exit;
    // walk the vertex chain from the exit toward the entry vertex
    int cur = best_pv;
    while (cur != best_qv) {
      int nxt = next_[cur][best_qv];
      int e = edge_between(cur, nxt);
      double len = edges_[e].len;
      if (rem < len)
        return {e, edges_[e].u == cur ? rem : len - rem};
      rem -= len;
      cur = nxt;
    }
    // inside q's edge, approaching from best_qv
    return {q.edge, edges_[q.edge].u == best_qv ? rem : edges_[q.edge].len - rem};
  }

  TreePoint median(const TreePoint& a, const TreePoint& b, const TreePoint& c) const {
    double da = 0.5 * (distance(a, b) + distance(a, c) - distance(b, c));
    return point_along(a, b, da);
  }

 private:
  std::vector<std::string> names_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::pair<int, int>>> adj_;  // vertex -> (edge, other end)
  std::vector<std::vector<double>> vdist_;
  std::vector<std::vector<int>> next_;  // next_[a][b]: neighbor of a toward b

  int edge_between(int a, int b) const {
    for (auto [e, other] : adj_[a])
      if (other == b) return e;
    throw BadTree("vertices not adjacent");
  }

  void build() {
    int n = (int)names_.size();
    if (n < 2 || edges_.empty()) throw BadTree("tree needs at least one edge");
    if ((int)edges_.size() != n - 1) throw BadTree("edge count must be vertex count minus one");
    adj_.assign(n, {});
    for (int e = 0; e < (int)edges_.size(); e++) {
      const Edge& ed = edges_[e];
      if (!(ed.len > 0)) throw BadTree("edge lengths must be positive");
      if (ed.u == ed.v) throw BadTree("self-loop edge");
      adj_[ed.u].push_back({e, ed.v});
      adj_[ed.v].push_back({e, ed.u});
    }
    vdist_.assign(n, std::vector<double>(n, 0));
    next_.assign(n, std::vector<int>(n, -1));
    for (int start = 0; start < n; start++) {
      std::vector<int> stack{start}, parent(n, -1);
      std::vector<bool> seen(n, false);
      seen[start] = true;
      while (!stack.empty()) {
        int cur = stack.back();
        stack.pop_back();
        for (auto [e, other] : adj_[cur]) {
          if (seen[other]) continue;
          seen[other] = true;
          parent[other] = cur;
          vdist_[start][other] = vdist_[start][cur] + edges_[e].len;
          stack.push_back(other);
        }
      }
      for (int v = 0; v < n; v++) {
        if (!seen[v]) throw BadTree("tree is not connected");
        int w = v;
        while (w != start && parent[w] != start) w = parent[w];
        next_[start][v] = (v == start) ? start : w;
      }
    }
  }
};

// ---------------------------------------------------------------------------
// R x T geometry

struct ConePoint {
  double t = 0;
  TreePoint p;
};

inline double cone_distance(const MetricTree& T, const ConePoint& x, const ConePoint& y) {
  return std::hypot(x.t - y.t, T.distance(x.p, y.p));
}

struct ConeGeodesic {
  const MetricTree* tree;
  ConePoint from, to;
  double tree_length = 0;

  double length() const { return std::hypot(to.t - from.t, tree_length); }
  // s in [0, 1], linear in arclength
  ConePoint eval(double s) const {
    ConePoint out;
    out.t = from.t + s * (to.t - from.t);
    out.p = tree->point_along(from.p, to.p, s * tree_length);
    return out;
  }
};

inline ConeGeodesic cone_geodesic(const MetricTree& T, const ConePoint& x, const ConePoint& y) {
  return {&T, x, y, T.distance(x.p, y.p)};
}

// R-coordinates at which the sides [x,y], [x,z], [y,z] cross the wall
// R x {median of the three projections}
inline std::array<double, 3> wall_crossings(const MetricTree& T, const ConePoint& x,
                                            const ConePoint& y, const ConePoint& z) {
  TreePoint m = T.median(x.p, y.p, z.p);
  double dxm = T.distance(x.p, m), dym = T.distance(y.p, m), dzm = T.distance(z.p, m);
  if (!(dxm > 0 && dym > 0 && dzm > 0)) throw DegenerateTripod("median is one of the projections");
  auto cross = [&](const ConePoint& p, const ConePoint& q, double dpm) {
    double d = T.distance(p.p, q.p);
    return p.t + (q.t - p.t) * dpm / d;
  };
  return {cross(x, y, dxm), cross(x, z, dxm), cross(y, z, dym)};
}

inline bool is_open(const MetricTree& T, const ConePoint& x, const ConePoint& y,
                    const ConePoint& z) {
  double dxy = T.distance(x.p, y.p), dxz = T.distance(x.p, z.p), dyz = T.distance(y.p, z.p);
  // coincident cone points give degenerate sides
  if ((dxy == 0 && x.t == y.t) || (dxz == 0 && x.t == z.t) || (dyz == 0 && y.t == z.t))
    return false;

  TreePoint m = T.median(x.p, y.p, z.p);
  double dxm = T.distance(x.p, m), dym = T.distance(y.p, m), dzm = T.distance(z.p, m);
  bool nondegenerate = dxy > 0 && dxz > 0 && dyz > 0 && dxm > 0 && dym > 0 && dzm > 0;
  if (nondegenerate) {
    auto c = wall_crossings(T, x, y, z);
    return c[0] != c[1] && c[0] != c[2] && c[1] != c[2];
  }
  // degenerate: all three projections lie on one arc; unfold the strip into
  // the plane with s = arclength from one extreme projection
  const TreePoint* base = &x.p;
  double dmax = dxy;
  if (dxz > dmax) { dmax = dxz; base = &x.p; }
  if (dyz > dmax) { dmax = dyz; base = &y.p; }
  double sx = T.distance(*base, x.p), sy = T.distance(*base, y.p), sz = T.distance(*base, z.p);
  double area2 = (y.t - x.t) * (sz - sx) - (z.t - x.t) * (sy - sx);
  return area2 != 0;
}

struct PerturbationResult {
  bool found = false;
  ConePoint z;
  std::string diagnostic;
};

// searches for z_n within cone distance 1/n of z making the triangle open;
// candidates sweep R-offsets and offsets along z's edge
inline PerturbationResult find_open_perturbation(const MetricTree& T, const ConePoint& x,
                                                 const ConePoint& y, const ConePoint& z, int n) {
  if (n < 1) throw InvalidParams("perturbation index must be at least 1");
  if (is_open(T, x, y, z)) return {true, z, "triangle already open"};

  double radius = 1.0 / n;
  std::vector<double> offs;
  for (int k : {1, 2, 4})
    for (double sgn : {1.0, -1.0}) offs.push_back(sgn * radius / k);

  std::vector<std::pair<double, double>> candidates;  // (dt, ds)
  for (double dt : offs) candidates.push_back({dt, 0.0});
  for (double ds : offs) candidates.push_back({0.0, ds});
  for (double dt : offs)
    for (double ds : offs)
      if (std::hypot(dt, ds) <= radius + 1e-15) candidates.push_back({dt, ds});

  double elen = T.edge(z.p.edge).len;
  for (auto [dt, ds] : candidates) {
    ConePoint cand = z;
    cand.t += dt;
    cand.p.offset = std::min(elen, std::max(0.0, z.p.offset + ds));
    if (cone_distance(T, cand, z) > radius + 1e-15) continue;
    if (is_open(T, x, y, cand)) return {true, cand, ""};
  }

  PerturbationResult out;
  out.z = z;
  // the symmetric configuration: equal wall distances and equal heights make
  // the crossings of [x,z'] and [y,z'] agree for every z' in z's branch
  TreePoint m = T.median(x.p, y.p, z.p);
  if (T.distance(x.p, m) == T.distance(y.p, m) && x.t == y.t)
    out.diagnostic = "crossings coincide for all perturbations of z within the branch";
  else
    out.diagnostic = "no open perturbation found in the search set";
  return out;
}

}  // namespace warpcurv
