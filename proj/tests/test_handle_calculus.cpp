#include <vector>

#include "doctest.h"
#include "warpcurv/handle_calculus.hpp"

using namespace warpcurv;

TEST_CASE("handle decomposition examples") {
  auto h = handle_decomposition({{2, 2, 2}, false});
  CHECK(h.size() == 1);
  CHECK(h[1] == 3);

  auto h2 = handle_decomposition({{2, 3}, false});
  CHECK(h2[1] == 1);
  CHECK(h2[2] == 1);

  CHECK(handle_decomposition({{}, false}).empty());  // open ball
  CHECK_THROWS_AS(handle_decomposition({{1}, false}), BadCodim);
}

TEST_CASE("asphericity and kernel rank") {
  CHECK(is_aspherical({{2, 2}, false}));
  CHECK(!is_aspherical({{2, 3}, false}));
  CHECK(is_aspherical({{}, false}));

  CHECK(kernel_rank({{2, 2, 2}, false}).rank == 3);
  CHECK(kernel_rank({{2}, false}).rank == 1);
  CHECK(kernel_rank({{2, 2}, true}).countably_infinite);
  CHECK_THROWS_AS(kernel_rank({{2, 3}, false}), NotAspherical);
}

TEST_CASE("homotopy type") {
  CHECK(homotopy_type({{2, 2}, false}) == std::vector<int>{1, 1});
  CHECK(homotopy_type({{4}, false}) == std::vector<int>{3});
  CHECK(homotopy_type({{}, false}).empty());  // contractible
}

TEST_CASE("exhaustive consistency over short codimension lists") {
  // all lists of length <= 6 with entries in {2..5}
  std::vector<std::vector<int>> lists{{}};
  for (int len = 1; len <= 6; len++) {
    std::vector<int> cur(len, 2);
    while (true) {
      lists.push_back(cur);
      int i = len - 1;
      while (i >= 0 && cur[i] == 5) cur[i--] = 2;
      if (i < 0) break;
      cur[i]++;
    }
  }
  for (const auto& codims : lists) {
    StratumData s{codims, false};
    auto handles = handle_decomposition(s);
    int total = 0;
    for (auto [k, cnt] : handles) {
      CHECK(k >= 1);
      total += cnt;
    }
    CHECK(total == (int)codims.size());

    bool all2 = true;
    for (int c : codims) all2 &= (c == 2);
    CHECK(is_aspherical(s) == all2);

    auto spheres = homotopy_type(s);
    bool only_circles = true;
    for (int d : spheres) only_circles &= (d == 1);
    CHECK(only_circles == all2);

    if (all2) {
      CHECK(kernel_rank(s).rank == codims.size());
    } else {
      CHECK_THROWS_AS(kernel_rank(s), NotAspherical);
    }
  }
}
