#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stftpr/window.hpp"

namespace stftpr {

enum class RelationKind { LModD, LLine, GapSetLine, ShiftSetModD };

const char* to_string(RelationKind r);

struct ConnectivityPartition {
  RelationKind relation = RelationKind::LModD;
  long L = 0;                     // for the L relations
  std::optional<std::size_t> d;   // cyclic relations
  std::vector<long> gaps;         // allowed steps for the set-based relations
  std::vector<long> universe;     // sorted support
  std::vector<std::vector<long>> components;  // each sorted, ordered by smallest member

  std::size_t count() const { return components.size(); }
  bool connected() const { return components.size() <= 1; }
  std::string describe() const;
};

class UnionFind {
 public:
  explicit UnionFind(std::size_t n);
  std::size_t find(std::size_t x);
  void unite(std::size_t a, std::size_t b);

 private:
  std::vector<std::size_t> parent_, rank_;
};

long dist_mod(long a, long b, std::size_t d);

ConnectivityPartition components_mod_d(const std::vector<long>& support, std::size_t d, std::size_t L);
ConnectivityPartition components_line(const std::vector<long>& support, long L);
ConnectivityPartition components_line(const std::vector<long>& support, const DifferenceSet& gaps);
// cyclic relation generated by an arbitrary symmetric set of shifts
ConnectivityPartition components_by_shifts(const std::vector<long>& support, std::size_t d,
                                           const std::vector<long>& shifts);

}  // namespace stftpr
