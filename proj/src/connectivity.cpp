#include "stftpr/connectivity.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace stftpr {

const char* to_string(RelationKind r) {
  switch (r) {
    case RelationKind::LModD: return "L-mod-d";
    case RelationKind::LLine: return "L-line";
    case RelationKind::GapSetLine: return "g-line";
    case RelationKind::ShiftSetModD: return "shift-set-mod-d";
  }
  return "?";
}

std::string ConnectivityPartition::describe() const {
  std::ostringstream os;
  os << to_string(relation);
  if (relation == RelationKind::LModD || relation == RelationKind::LLine) os << " L=" << L;
  if (d) os << " d=" << *d;
  return os.str();
}

UnionFind::UnionFind(std::size_t n) : parent_(n), rank_(n, 0) {
  std::iota(parent_.begin(), parent_.end(), 0);
}

std::size_t UnionFind::find(std::size_t x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

void UnionFind::unite(std::size_t a, std::size_t b) {
  a = find(a);
  b = find(b);
  if (a == b) return;
  if (rank_[a] < rank_[b]) std::swap(a, b);
  parent_[b] = a;
  if (rank_[a] == rank_[b]) ++rank_[a];
}

long dist_mod(long a, long b, std::size_t d) {
  const long r = static_cast<long>(wrap(a - b, d));
  return std::min(r, static_cast<long>(d) - r);
}

namespace {

template <class Related>
ConnectivityPartition build(std::vector<long> support, Related related) {
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());
  const std::size_t n = support.size();
  UnionFind uf(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (related(support[i], support[j])) uf.unite(i, j);
  std::map<std::size_t, std::vector<long>> groups;
  for (std::size_t i = 0; i < n; ++i) groups[uf.find(i)].push_back(support[i]);
  ConnectivityPartition p;
  p.universe = support;
  for (auto& [root, members] : groups) p.components.push_back(std::move(members));
  std::sort(p.components.begin(), p.components.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return p;
}

}  // namespace

ConnectivityPartition components_mod_d(const std::vector<long>& support, std::size_t d, std::size_t L) {
  if (2 * L >= d) throw Error(ErrorCode::InvalidArgument, "components_mod_d needs L < d/2");
  std::vector<long> s;
  for (long x : support) {
    if (x < 0 || x >= static_cast<long>(d)) throw Error(ErrorCode::InvalidArgument, "support index out of range");
    s.push_back(x);
  }
  auto p = build(s, [&](long a, long b) { return dist_mod(a, b, d) <= static_cast<long>(L); });
  p.relation = RelationKind::LModD;
  p.L = static_cast<long>(L);
  p.d = d;
  return p;
}

ConnectivityPartition components_line(const std::vector<long>& support, long L) {
  if (L < 0) throw Error(ErrorCode::InvalidArgument, "L must be nonnegative");
  auto p = build(support, [&](long a, long b) { return std::abs(a - b) <= L; });
  p.relation = RelationKind::LLine;
  p.L = L;
  return p;
}

ConnectivityPartition components_line(const std::vector<long>& support, const DifferenceSet& gaps) {
  if (gaps.modulus) throw Error(ErrorCode::InvalidArgument, "line connectivity needs a line difference set");
  auto p = build(support, [&](long a, long b) { return gaps.members.count(b - a) != 0; });
  p.relation = RelationKind::GapSetLine;
  p.gaps.assign(gaps.members.begin(), gaps.members.end());
  return p;
}

ConnectivityPartition components_by_shifts(const std::vector<long>& support, std::size_t d,
                                           const std::vector<long>& shifts) {
  std::set<std::size_t> allowed;
  for (long k : shifts) {
    allowed.insert(wrap(k, d));
    allowed.insert(wrap(-k, d));
  }
  auto p = build(support, [&](long a, long b) { return allowed.count(wrap(b - a, d)) != 0; });
  p.relation = RelationKind::ShiftSetModD;
  p.d = d;
  p.gaps.assign(allowed.begin(), allowed.end());
  return p;
}

}  // namespace stftpr
