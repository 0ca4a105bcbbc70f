#include "dippl/bdd.hpp"

#include <algorithm>
#include <absl/container/flat_hash_map.h>

namespace dippl::bdd {

// Bottom-up weighted model count with smoothing. Every universe variable
// strictly between a node's level and a child's level is absent on that
// edge and contributes on_true + on_false.
template <class Num, class Convert>
Num NodeStore::wmc_impl(Bdd a, const WeightFn& w, std::span<const VarId> universe, Convert convert) const {
  check(a);
  std::vector<std::uint32_t> order;
  order.reserve(universe.size());
  for (auto v : universe) order.push_back(v.index);
  std::sort(order.begin(), order.end());
  order.erase(std::unique(order.begin(), order.end()), order.end());

  const auto n = static_cast<std::uint32_t>(order.size());
  absl::flat_hash_map<std::uint32_t, std::uint32_t> rank_of;
  rank_of.reserve(n);
  for (std::uint32_t r = 0; r < n; ++r) rank_of.emplace(order[r], r);

  std::vector<Num> on_true(n), on_false(n);
  // prefix[r] multiplies the nonzero skip factors of ranks < r; zeros[r]
  // counts the zero ones, so skip(lo, hi) is prefix[hi] / prefix[lo] unless
  // a zero lies in between.
  std::vector<Num> prefix(n + 1);
  std::vector<std::uint32_t> zeros(n + 1, 0);
  prefix[0] = convert(Rational(1));
  for (std::uint32_t r = 0; r < n; ++r) {
    const auto& wt = w.get(VarId{order[r]});
    on_true[r] = convert(wt.on_true);
    on_false[r] = convert(wt.on_false);
    Num s = on_true[r] + on_false[r];
    if (s == 0) {
      prefix[r + 1] = prefix[r];
      zeros[r + 1] = zeros[r] + 1;
    } else {
      prefix[r + 1] = prefix[r] * s;
      zeros[r + 1] = zeros[r];
    }
  }
  auto skip = [&](std::uint32_t from, std::uint32_t to) -> Num {
    if (zeros[to] != zeros[from]) return convert(Rational(0));
    if (from == to) return convert(Rational(1));
    return prefix[to] / prefix[from];
  };

  auto rank = [&](std::uint32_t id) -> std::uint32_t {
    if (id <= Bdd::kTrue) return n;
    auto it = rank_of.find(node(id).var);
    if (it == rank_of.end()) {
      throw SupportOutsideUniverse("BDD mentions variable " + var_names_[node(id).var] +
                                   " outside the counting universe");
    }
    return it->second;
  };

  absl::flat_hash_map<std::uint32_t, Num> memo;
  memo.emplace(Bdd::kFalse, convert(Rational(0)));
  memo.emplace(Bdd::kTrue, convert(Rational(1)));

  // Iterative post-order so deep diagrams cannot overflow the stack.
  std::vector<std::pair<std::uint32_t, bool>> stack{{a.id_, false}};
  while (!stack.empty()) {
    auto [id, expanded] = stack.back();
    stack.pop_back();
    if (memo.count(id)) continue;
    const Node& nd = node(id);
    if (!expanded) {
      rank(id);
      stack.push_back({id, true});
      if (!memo.count(nd.lo)) stack.push_back({nd.lo, false});
      if (!memo.count(nd.hi)) stack.push_back({nd.hi, false});
      continue;
    }
    std::uint32_t r = rank(id);
    Num lo = on_false[r] * skip(r + 1, rank(nd.lo)) * memo.at(nd.lo);
    Num hi = on_true[r] * skip(r + 1, rank(nd.hi)) * memo.at(nd.hi);
    memo.emplace(id, lo + hi);
  }
  return skip(0, rank(a.id_)) * memo.at(a.id_);
}

Rational NodeStore::wmc(Bdd a, const WeightFn& w, std::span<const VarId> universe) const {
  return wmc_impl<Rational>(a, w, universe, [](const Rational& r) { return r; });
}

double NodeStore::wmc_double(Bdd a, const WeightFn& w, std::span<const VarId> universe) const {
  return wmc_impl<double>(a, w, universe, [](const Rational& r) { return r.get_d(); });
}

}  // namespace dippl::bdd
