#include <algorithm>
#include <functional>

#include "doctest.h"
#include "stftpr/connectivity.hpp"
#include "stftpr/random.hpp"

using namespace stftpr;

namespace {

using Parts = std::vector<std::vector<long>>;

// depth-first search on the explicit relation graph
Parts brute_components(const std::vector<long>& supp, const std::function<bool(long, long)>& related) {
  std::vector<int> seen(supp.size(), 0);
  Parts out;
  for (std::size_t s = 0; s < supp.size(); ++s) {
    if (seen[s]) continue;
    std::vector<long> comp;
    std::vector<std::size_t> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      comp.push_back(supp[i]);
      for (std::size_t j = 0; j < supp.size(); ++j)
        if (!seen[j] && related(supp[i], supp[j])) seen[j] = 1, stack.push_back(j);
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(comp);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<long> random_subset(long d, Rng& rng) {
  std::vector<long> s;
  const double p = rng.uniform(0.05, 0.9);
  for (long j = 0; j < d; ++j)
    if (rng.coin(p)) s.push_back(j);
  return s;
}

}  // namespace

TEST_CASE("cyclic L-connectivity examples") {
  CHECK(components_mod_d({0, 1, 3, 4}, 5, 2).connected());
  CHECK(components_mod_d({1, 4}, 5, 2).connected());
  const auto p = components_mod_d({0, 4}, 8, 3);
  CHECK(p.count() == 2);
  CHECK(p.components == Parts{{0}, {4}});
  CHECK(dist_mod(0, 7, 8) == 1);
  CHECK(dist_mod(2, 6, 8) == 4);
}

TEST_CASE("line connectivity examples") {
  CHECK(components_line({0, 2, 7}, 2).components == Parts{{0, 2}, {7}});
  DifferenceSet dg;
  dg.members = {-2, -1, 0, 1, 2};
  CHECK(components_line({0, 3}, dg).count() == 2);
  DifferenceSet sparse;
  sparse.members = {-3, -2, 0, 2, 3};
  CHECK(components_line({0, 1}, sparse).count() == 2);
  CHECK(components_line({0, 2, 5}, sparse).connected());
}

TEST_CASE("empty support is connected with zero components") {
  const auto p = components_mod_d({}, 8, 2);
  CHECK(p.count() == 0);
  CHECK(p.connected());
  CHECK(components_line({}, 3).connected());
}

TEST_CASE("preconditions") {
  CHECK_THROWS_AS(components_mod_d({0, 1}, 8, 4), Error);
  CHECK_THROWS_AS(components_mod_d({0, 9}, 8, 2), Error);
}

TEST_CASE("components match a brute-force graph search") {
  Rng rng(31);
  for (int t = 0; t < 1000; ++t) {
    const long d = rng.integer(3, 24);
    const long L = rng.integer(0, (d - 1) / 2);
    const auto s = random_subset(d, rng);
    const auto p = components_mod_d(s, d, L);
    Parts got = p.components;
    std::sort(got.begin(), got.end());
    CHECK(got == brute_components(s, [&](long a, long b) { return dist_mod(a, b, d) <= L; }));
    // components are ordered by smallest member and each is sorted
    for (std::size_t i = 1; i < p.components.size(); ++i) CHECK(p.components[i - 1][0] < p.components[i][0]);
    for (const auto& c : p.components) CHECK(std::is_sorted(c.begin(), c.end()));

    std::vector<long> shifts;
    for (long k = 1; k < d; ++k)
      if (rng.coin(0.3)) shifts.push_back(k);
    const auto q = components_by_shifts(s, d, shifts);
    got = q.components;
    std::sort(got.begin(), got.end());
    CHECK(got == brute_components(s, [&](long a, long b) {
            for (long k : shifts)
              if (wrap(a - b - k, d) == 0 || wrap(b - a - k, d) == 0) return true;
            return false;
          }));
  }
}

TEST_CASE("components partition the support and no cross pair is related") {
  Rng rng(32);
  for (int t = 0; t < 300; ++t) {
    const long d = rng.integer(3, 30), L = rng.integer(0, (d - 1) / 2);
    const auto s = random_subset(d, rng);
    const auto p = components_mod_d(s, d, L);
    std::vector<long> all;
    for (const auto& c : p.components) all.insert(all.end(), c.begin(), c.end());
    std::sort(all.begin(), all.end());
    CHECK(all == s);
    for (std::size_t a = 0; a < p.components.size(); ++a)
      for (std::size_t b = a + 1; b < p.components.size(); ++b)
        for (long x : p.components[a])
          for (long y : p.components[b]) CHECK(dist_mod(x, y, d) > L);
  }
}

TEST_CASE("enlarging L never adds components") {
  Rng rng(33);
  for (int t = 0; t < 300; ++t) {
    const long d = rng.integer(4, 30);
    const auto s = random_subset(d, rng);
    std::size_t prev = s.size() + 1;
    for (long L = 0; 2 * L < d; ++L) {
      const std::size_t c = components_mod_d(s, d, L).count();
      CHECK(c <= prev);
      prev = c;
    }
    std::size_t prev_line = s.size() + 1;
    for (long L = 0; L < d; ++L) {
      const std::size_t c = components_line(s, L).count();
      CHECK(c <= prev_line);
      prev_line = c;
    }
  }
}

TEST_CASE("half-length windows connect everything for odd d") {
  Rng rng(34);
  for (int t = 0; t < 200; ++t) {
    const long d = 2 * rng.integer(1, 15) + 1;
    auto s = random_subset(d, rng);
    if (s.empty()) s.push_back(0);
    CHECK(components_mod_d(s, d, (d - 1) / 2).connected());
  }
}

TEST_CASE("union-find merges and finds") {
  UnionFind uf(6);
  uf.unite(0, 1);
  uf.unite(2, 3);
  uf.unite(1, 3);
  CHECK(uf.find(0) == uf.find(2));
  CHECK(uf.find(4) != uf.find(0));
  CHECK(uf.find(5) == 5);
}

TEST_CASE("describe names the relation") {
  CHECK(components_mod_d({0}, 8, 3).describe().find("L=3") != std::string::npos);
  CHECK(components_line({0}, 2).relation == RelationKind::LLine);
}
