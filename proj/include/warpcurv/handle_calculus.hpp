#pragma once

// Handle bookkeeping for complements of totally geodesic submanifolds: the
// census of lifted components and their codimensions determines the handle
// decomposition, asphericity, the free kernel rank and the homotopy type.
// Pure combinatorics over caller-supplied data.

#include <algorithm>
#include <map>
#include <vector>

#include "warpcurv/errors.hpp"

namespace warpcurv {

struct StratumData {
  std::vector<int> codims;         // one entry per component, each >= 2
  bool countable_family = false;   // census truncated from a countable family
};

inline void validate(const StratumData& s) {
  for (int c : s.codims)
    if (c < 2) throw BadCodim("component codimension must be at least 2");
}

// handle index -> number of handles; a codimension-(k+1) component
// contributes one k-handle
inline std::map<int, int> handle_decomposition(const StratumData& s) {
  validate(s);
  std::map<int, int> handles;
  for (int c : s.codims) handles[c - 1]++;
  return handles;
}

inline bool is_aspherical(const StratumData& s) {
  validate(s);
  for (int c : s.codims)
    if (c != 2) return false;
  return true;
}

struct KernelRank {
  bool countably_infinite = false;
  std::size_t rank = 0;
};

inline KernelRank kernel_rank(const StratumData& s) {
  if (!is_aspherical(s)) throw NotAspherical("kernel is free only in the aspherical case");
  if (s.countable_family) return {true, 0};
  return {false, s.codims.size()};
}

// dimensions of the wedge-of-spheres model, one (codim-1)-sphere per component
inline std::vector<int> homotopy_type(const StratumData& s) {
  validate(s);
  std::vector<int> spheres;
  for (int c : s.codims) spheres.push_back(c - 1);
  std::sort(spheres.begin(), spheres.end());
  return spheres;
}

}  // namespace warpcurv
