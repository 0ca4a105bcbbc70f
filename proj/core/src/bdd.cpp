#include "dippl/bdd.hpp"

#include <algorithm>
#include <cassert>

#include <absl/container/flat_hash_set.h>

namespace dippl::bdd {

namespace {

inline std::size_t mix(std::uint64_t x) {
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdULL;
  x ^= x >> 33;
  x *= 0xc4ceb9fe1a85ec53ULL;
  x ^= x >> 33;
  return static_cast<std::size_t>(x);
}

}  // namespace

VarId Bdd::var() const {
  assert(valid() && !is_terminal());
  return VarId{store_->node(id_).var};
}

Bdd Bdd::low() const { return Bdd(store_, store_->node(id_).lo); }
Bdd Bdd::high() const { return Bdd(store_, store_->node(id_).hi); }

void WeightFn::set(VarId v, Rational on_true, Rational on_false) {
  if (on_true < 0 || on_false < 0) throw std::invalid_argument("literal weights must be nonnegative");
  weights_[v] = Weights{std::move(on_true), std::move(on_false)};
}

const WeightFn::Weights& WeightFn::get(VarId v) const {
  static const Weights unit{};
  auto it = weights_.find(v);
  return it == weights_.end() ? unit : it->second;
}

void WeightFn::merge(const WeightFn& other) {
  for (const auto& [v, w] : other.weights_) {
    auto [it, inserted] = weights_.emplace(v, w);
    if (!inserted && !(it->second == w)) {
      throw std::logic_error("conflicting weights for variable " + std::to_string(v.index));
    }
  }
}

std::size_t NodeStore::NodeHash::operator()(const Node& n) const noexcept {
  return mix((std::uint64_t{n.var} << 40) ^ (std::uint64_t{n.lo} << 20) ^ n.hi ^
             (std::uint64_t{n.hi} << 44));
}

std::size_t NodeStore::CacheKeyHash::operator()(const CacheKey& k) const noexcept {
  std::uint64_t h = mix((std::uint64_t{k.a} << 32) | k.b);
  return mix(h ^ (std::uint64_t{k.c} << 3) ^ static_cast<std::uint64_t>(k.op));
}

NodeStore::NodeStore() {
  nodes_.push_back({kTerminalVar, Bdd::kFalse, Bdd::kFalse});
  nodes_.push_back({kTerminalVar, Bdd::kTrue, Bdd::kTrue});
}

VarId NodeStore::new_var(std::string name) {
  auto index = static_cast<std::uint32_t>(var_names_.size());
  if (name.empty()) name = "v" + std::to_string(index);
  var_names_.push_back(std::move(name));
  return VarId{index};
}

const std::string& NodeStore::var_name(VarId v) const {
  if (v.index >= var_names_.size()) throw UnknownVar("unknown BDD variable " + std::to_string(v.index));
  return var_names_[v.index];
}

void NodeStore::check(Bdd a) const {
  if (a.store_ != this) throw ManagerMismatch("BDD belongs to a different NodeStore");
}

std::uint32_t NodeStore::make(std::uint32_t var, std::uint32_t lo, std::uint32_t hi) {
  if (lo == hi) return lo;
  assert(var < top(lo) && var < top(hi));
  Node n{var, lo, hi};
  auto it = unique_.find(n);
  if (it != unique_.end()) return it->second;
  auto id = static_cast<std::uint32_t>(nodes_.size());
  nodes_.push_back(n);
  unique_.emplace(n, id);
  return id;
}

Bdd NodeStore::constant(bool value) { return wrap(value ? Bdd::kTrue : Bdd::kFalse); }

Bdd NodeStore::var(VarId v) {
  if (v.index >= var_names_.size()) throw UnknownVar("unknown BDD variable " + std::to_string(v.index));
  return wrap(make(v.index, Bdd::kFalse, Bdd::kTrue));
}

Bdd NodeStore::literal(VarId v, bool positive) {
  if (v.index >= var_names_.size()) throw UnknownVar("unknown BDD variable " + std::to_string(v.index));
  return positive ? wrap(make(v.index, Bdd::kFalse, Bdd::kTrue)) : wrap(make(v.index, Bdd::kTrue, Bdd::kFalse));
}

Bdd NodeStore::cube(std::span<const std::pair<VarId, bool>> literals) {
  std::vector<std::pair<VarId, bool>> sorted(literals.begin(), literals.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].first == sorted[i - 1].first && sorted[i].second != sorted[i - 1].second) {
      return constant(false);
    }
  }
  std::uint32_t acc = Bdd::kTrue;
  for (auto it = sorted.rbegin(); it != sorted.rend(); ++it) {
    if (it->first.index >= var_names_.size()) {
      throw UnknownVar("unknown BDD variable " + std::to_string(it->first.index));
    }
    if (top(acc) == it->first.index) continue;
    acc = it->second ? make(it->first.index, Bdd::kFalse, acc) : make(it->first.index, acc, Bdd::kFalse);
  }
  return wrap(acc);
}

bool NodeStore::cache_lookup(const CacheKey& key, std::uint32_t& out) const {
  if (!caching_) return false;
  auto it = cache_.find(key);
  if (it == cache_.end()) return false;
  out = it->second;
  return true;
}

void NodeStore::cache_store(const CacheKey& key, std::uint32_t value) {
  if (caching_) cache_.emplace(key, value);
}

void NodeStore::clear_caches() { cache_.clear(); }

Bdd NodeStore::apply(Op op, Bdd a, Bdd b) {
  check(a);
  check(b);
  switch (op) {
    case Op::And: return wrap(ite_rec(a.id_, b.id_, Bdd::kFalse));
    case Op::Or: return wrap(ite_rec(a.id_, Bdd::kTrue, b.id_));
    case Op::Xor: return wrap(ite_rec(a.id_, not_rec(b.id_), b.id_));
    case Op::Iff: return wrap(ite_rec(a.id_, b.id_, not_rec(b.id_)));
    case Op::Implies: return wrap(ite_rec(a.id_, b.id_, Bdd::kTrue));
  }
  throw std::invalid_argument("unknown Op");
}

Bdd NodeStore::ite(Bdd f, Bdd g, Bdd h) {
  check(f);
  check(g);
  check(h);
  return wrap(ite_rec(f.id_, g.id_, h.id_));
}

Bdd NodeStore::negate(Bdd a) {
  check(a);
  return wrap(not_rec(a.id_));
}

std::uint32_t NodeStore::not_rec(std::uint32_t a) {
  if (a == Bdd::kFalse) return Bdd::kTrue;
  if (a == Bdd::kTrue) return Bdd::kFalse;
  CacheKey key{CacheOp::Not, a, 0, 0};
  std::uint32_t r;
  if (cache_lookup(key, r)) return r;
  Node n = node(a);
  r = make(n.var, not_rec(n.lo), not_rec(n.hi));
  cache_store(key, r);
  return r;
}

std::uint32_t NodeStore::ite_rec(std::uint32_t f, std::uint32_t g, std::uint32_t h) {
  if (f == Bdd::kTrue) return g;
  if (f == Bdd::kFalse) return h;
  if (g == h) return g;
  if (g == Bdd::kTrue && h == Bdd::kFalse) return f;
  if (g == Bdd::kFalse && h == Bdd::kTrue) return not_rec(f);
  if (g == f) g = Bdd::kTrue;
  if (h == f) h = Bdd::kFalse;
  if (g == h) return g;

  CacheKey key{CacheOp::Ite, f, g, h};
  std::uint32_t r;
  if (cache_lookup(key, r)) return r;

  std::uint32_t v = std::min({top(f), top(g), top(h)});
  auto cof = [&](std::uint32_t x, bool high) {
    const Node& n = node(x);
    if (n.var != v) return x;
    return high ? n.hi : n.lo;
  };
  std::uint32_t f0 = cof(f, false), f1 = cof(f, true);
  std::uint32_t g0 = cof(g, false), g1 = cof(g, true);
  std::uint32_t h0 = cof(h, false), h1 = cof(h, true);
  std::uint32_t lo = ite_rec(f0, g0, h0);
  std::uint32_t hi = ite_rec(f1, g1, h1);
  r = make(v, lo, hi);
  cache_store(key, r);
  return r;
}

std::uint32_t NodeStore::intern_set(std::span<const VarId> vars) {
  std::vector<std::uint32_t> key;
  key.reserve(vars.size());
  for (auto v : vars) {
    if (v.index >= var_names_.size()) throw UnknownVar("unknown BDD variable " + std::to_string(v.index));
    key.push_back(v.index);
  }
  std::sort(key.begin(), key.end());
  key.erase(std::unique(key.begin(), key.end()), key.end());
  auto it = set_ids_.find(key);
  if (it != set_ids_.end()) return it->second;
  VarSet set{std::vector<bool>(var_names_.size(), false), 0};
  for (auto i : key) set.member[i] = true;
  set.max_index = key.empty() ? 0 : key.back();
  auto id = static_cast<std::uint32_t>(sets_.size());
  sets_.push_back(std::move(set));
  set_ids_.emplace(std::move(key), id);
  return id;
}

Bdd NodeStore::exists(std::span<const VarId> vars, Bdd a) {
  check(a);
  if (vars.empty()) return a;
  return wrap(exists_rec(a.id_, intern_set(vars)));
}

std::uint32_t NodeStore::exists_rec(std::uint32_t a, std::uint32_t set) {
  if (a <= Bdd::kTrue) return a;
  const Node n = node(a);
  if (n.var > sets_[set].max_index) return a;
  CacheKey key{CacheOp::Exists, a, set, 0};
  std::uint32_t r;
  if (cache_lookup(key, r)) return r;
  std::uint32_t lo = exists_rec(n.lo, set);
  if (sets_[set].member[n.var]) {
    r = lo == Bdd::kTrue ? Bdd::kTrue : ite_rec(lo, Bdd::kTrue, exists_rec(n.hi, set));
  } else {
    r = make(n.var, lo, exists_rec(n.hi, set));
  }
  cache_store(key, r);
  return r;
}

Bdd NodeStore::and_exists(Bdd a, Bdd b, std::span<const VarId> vars) {
  check(a);
  check(b);
  if (vars.empty()) return apply(Op::And, a, b);
  return wrap(and_exists_rec(a.id_, b.id_, intern_set(vars)));
}

std::uint32_t NodeStore::and_exists_rec(std::uint32_t a, std::uint32_t b, std::uint32_t set) {
  if (a == Bdd::kFalse || b == Bdd::kFalse) return Bdd::kFalse;
  if (a == Bdd::kTrue && b == Bdd::kTrue) return Bdd::kTrue;
  if (a == Bdd::kTrue || a == b) return exists_rec(b, set);
  if (b == Bdd::kTrue) return exists_rec(a, set);
  if (a > b) std::swap(a, b);

  std::uint32_t v = std::min(top(a), top(b));
  if (v > sets_[set].max_index) return ite_rec(a, b, Bdd::kFalse);

  CacheKey key{CacheOp::AndExists, a, b, set};
  std::uint32_t r;
  if (cache_lookup(key, r)) return r;

  const Node na = node(a), nb = node(b);
  std::uint32_t a0 = na.var == v ? na.lo : a, a1 = na.var == v ? na.hi : a;
  std::uint32_t b0 = nb.var == v ? nb.lo : b, b1 = nb.var == v ? nb.hi : b;
  std::uint32_t lo = and_exists_rec(a0, b0, set);
  if (sets_[set].member[v]) {
    r = lo == Bdd::kTrue ? Bdd::kTrue : ite_rec(lo, Bdd::kTrue, and_exists_rec(a1, b1, set));
  } else {
    r = make(v, lo, and_exists_rec(a1, b1, set));
  }
  cache_store(key, r);
  return r;
}

std::uint32_t NodeStore::intern_map(const VarMap& mapping) {
  std::vector<std::uint32_t> table(var_names_.size());
  for (std::uint32_t i = 0; i < table.size(); ++i) table[i] = i;
  for (const auto& [from, to] : mapping) {
    if (from.index >= table.size() || to.index >= table.size()) {
      throw UnknownVar("rename mentions an unknown BDD variable");
    }
    table[from.index] = to.index;
  }
  auto it = map_ids_.find(table);
  if (it != map_ids_.end()) return it->second;
  auto id = static_cast<std::uint32_t>(maps_.size());
  maps_.push_back(table);
  map_ids_.emplace(std::move(table), id);
  return id;
}

Bdd NodeStore::rename(const VarMap& mapping, Bdd a) {
  check(a);
  if (a.is_terminal()) return a;
  std::uint32_t id = intern_map(mapping);
  const auto& table = maps_[id];
  std::uint32_t prev = 0;
  bool first = true;
  for (auto v : support(a)) {
    std::uint32_t to = table[v.index];
    if (!first && to <= prev) {
      throw OrderViolation("rename is not order-preserving on the support: " + var_names_[v.index] + " -> " +
                           var_names_[to]);
    }
    prev = to;
    first = false;
  }
  return wrap(rename_rec(a.id_, id));
}

std::uint32_t NodeStore::rename_rec(std::uint32_t a, std::uint32_t map) {
  if (a <= Bdd::kTrue) return a;
  CacheKey key{CacheOp::Rename, a, map, 0};
  std::uint32_t r;
  if (cache_lookup(key, r)) return r;
  const Node n = node(a);
  std::uint32_t lo = rename_rec(n.lo, map);
  std::uint32_t hi = rename_rec(n.hi, map);
  r = make(maps_[map][n.var], lo, hi);
  cache_store(key, r);
  return r;
}

std::vector<VarId> NodeStore::support(Bdd a) const {
  check(a);
  std::vector<bool> seen_var(var_names_.size(), false);
  std::vector<std::uint32_t> stack{a.id_};
  absl::flat_hash_set<std::uint32_t> visited;
  while (!stack.empty()) {
    auto id = stack.back();
    stack.pop_back();
    if (id <= Bdd::kTrue || !visited.insert(id).second) continue;
    const Node& n = node(id);
    seen_var[n.var] = true;
    stack.push_back(n.lo);
    stack.push_back(n.hi);
  }
  std::vector<VarId> out;
  for (std::uint32_t i = 0; i < seen_var.size(); ++i) {
    if (seen_var[i]) out.push_back(VarId{i});
  }
  return out;
}

std::size_t NodeStore::node_count(Bdd a) const {
  check(a);
  std::vector<std::uint32_t> stack{a.id_};
  absl::flat_hash_set<std::uint32_t> visited;
  while (!stack.empty()) {
    auto id = stack.back();
    stack.pop_back();
    if (id <= Bdd::kTrue || !visited.insert(id).second) continue;
    stack.push_back(node(id).lo);
    stack.push_back(node(id).hi);
  }
  return visited.size();
}

bool NodeStore::evaluate(Bdd a, const std::function<bool(VarId)>& assignment) const {
  check(a);
  std::uint32_t id = a.id_;
  while (id > Bdd::kTrue) {
    const Node& n = node(id);
    id = assignment(VarId{n.var}) ? n.hi : n.lo;
  }
  return id == Bdd::kTrue;
}

}  // namespace dippl::bdd
