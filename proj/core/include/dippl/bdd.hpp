#pragma once

#include "dippl/rational.hpp"

#include <absl/container/flat_hash_map.h>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dippl::bdd {

/// Position of a variable in the store's global order. Smaller indices are
/// closer to the root.
struct VarId {
  std::uint32_t index = 0;
  auto operator<=>(const VarId&) const = default;
};

class UnknownVar : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};
class ManagerMismatch : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};
class OrderViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};
class SupportOutsideUniverse : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class NodeStore;

/// Handle to a node of a NodeStore. Within one store, two handles are equal
/// exactly when they denote the same Boolean function.
class Bdd {
 public:
  Bdd() = default;

  bool valid() const noexcept { return store_ != nullptr; }
  bool is_true() const noexcept { return id_ == kTrue; }
  bool is_false() const noexcept { return id_ == kFalse; }
  bool is_terminal() const noexcept { return id_ <= kTrue; }

  /// Requires !is_terminal().
  VarId var() const;
  Bdd low() const;
  Bdd high() const;

  std::uint32_t id() const noexcept { return id_; }
  NodeStore* store() const noexcept { return store_; }

  friend bool operator==(const Bdd&, const Bdd&) = default;

  static constexpr std::uint32_t kFalse = 0;
  static constexpr std::uint32_t kTrue = 1;

 private:
  friend class NodeStore;
  Bdd(NodeStore* store, std::uint32_t id) : store_(store), id_(id) {}

  NodeStore* store_ = nullptr;
  std::uint32_t id_ = kFalse;
};

enum class Op { And, Or, Xor, Iff, Implies };

/// Literal weights. Unlisted variables weigh (1, 1).
class WeightFn {
 public:
  struct Weights {
    Rational on_true = 1;
    Rational on_false = 1;
    friend bool operator==(const Weights&, const Weights&) = default;
  };

  /// Throws std::invalid_argument on a negative weight.
  void set(VarId v, Rational on_true, Rational on_false);
  const Weights& get(VarId v) const;
  bool contains(VarId v) const { return weights_.count(v) != 0; }
  const std::map<VarId, Weights>& entries() const noexcept { return weights_; }

  /// Union with `other`. Throws std::logic_error if both define a variable
  /// with different weights.
  void merge(const WeightFn& other);

  friend bool operator==(const WeightFn&, const WeightFn&) = default;

 private:
  std::map<VarId, Weights> weights_;
};

/// Partial variable substitution; variables not listed map to themselves.
using VarMap = std::vector<std::pair<VarId, VarId>>;

/// Hash-consed store of reduced ordered BDD nodes plus the operation cache.
///
/// Single-writer: calls on one store must be externally serialized. wmc()
/// and the other const queries keep their memo tables on the stack.
class NodeStore {
 public:
  NodeStore();
  NodeStore(const NodeStore&) = delete;
  NodeStore& operator=(const NodeStore&) = delete;

  /// Appends a variable at the bottom of the order.
  VarId new_var(std::string name = {});
  std::size_t var_count() const noexcept { return var_names_.size(); }
  const std::string& var_name(VarId v) const;

  Bdd constant(bool value);
  /// Node(v, F, T). Throws UnknownVar.
  Bdd var(VarId v);
  Bdd literal(VarId v, bool positive);
  /// Conjunction of literals.
  Bdd cube(std::span<const std::pair<VarId, bool>> literals);

  Bdd apply(Op op, Bdd a, Bdd b);
  Bdd ite(Bdd f, Bdd g, Bdd h);
  Bdd negate(Bdd a);

  /// Existential quantification of `vars`.
  Bdd exists(std::span<const VarId> vars, Bdd a);
  /// exists(vars, a & b) without building the full conjunction.
  Bdd and_exists(Bdd a, Bdd b, std::span<const VarId> vars);

  /// Substitutes variables in one structural pass. The mapping must be
  /// strictly increasing on support(a); throws OrderViolation otherwise.
  Bdd rename(const VarMap& mapping, Bdd a);

  std::vector<VarId> support(Bdd a) const;
  std::size_t node_count(Bdd a) const;
  bool evaluate(Bdd a, const std::function<bool(VarId)>& assignment) const;

  /// Weighted model count over total assignments to `universe`. Variables
  /// of the universe skipped along a path contribute on_true + on_false.
  /// Throws SupportOutsideUniverse if `a` mentions a variable outside it.
  Rational wmc(Bdd a, const WeightFn& w, std::span<const VarId> universe) const;
  double wmc_double(Bdd a, const WeightFn& w, std::span<const VarId> universe) const;

  /// Graphviz rendering; low edges dashed, high edges solid.
  std::string to_dot(Bdd a, const std::function<std::string(VarId)>& names = {}) const;

  /// Operation caching can be disabled to cross-check cached results.
  void set_caching(bool enabled) noexcept { caching_ = enabled; }
  bool caching() const noexcept { return caching_; }
  void clear_caches();

  /// Nodes ever allocated, including the two terminals.
  std::size_t size() const noexcept { return nodes_.size(); }
  std::size_t cache_entries() const noexcept { return cache_.size(); }

 private:
  friend class Bdd;

  struct Node {
    std::uint32_t var;
    std::uint32_t lo;
    std::uint32_t hi;
    friend bool operator==(const Node&, const Node&) = default;
  };
  struct NodeHash {
    std::size_t operator()(const Node& n) const noexcept;
  };

  enum class CacheOp : std::uint32_t { Ite, Not, Exists, AndExists, Rename };
  struct CacheKey {
    CacheOp op;
    std::uint32_t a, b, c;
    friend bool operator==(const CacheKey&, const CacheKey&) = default;
  };
  struct CacheKeyHash {
    std::size_t operator()(const CacheKey& k) const noexcept;
  };

  struct VarSet {
    std::vector<bool> member;
    std::uint32_t max_index;
  };

  static constexpr std::uint32_t kTerminalVar = 0xFFFFFFFFu;

  const Node& node(std::uint32_t id) const { return nodes_[id]; }
  std::uint32_t top(std::uint32_t id) const { return nodes_[id].var; }
  std::uint32_t make(std::uint32_t var, std::uint32_t lo, std::uint32_t hi);
  Bdd wrap(std::uint32_t id) { return Bdd(this, id); }
  void check(Bdd a) const;

  std::uint32_t ite_rec(std::uint32_t f, std::uint32_t g, std::uint32_t h);
  std::uint32_t not_rec(std::uint32_t a);
  std::uint32_t exists_rec(std::uint32_t a, std::uint32_t set);
  std::uint32_t and_exists_rec(std::uint32_t a, std::uint32_t b, std::uint32_t set);
  std::uint32_t rename_rec(std::uint32_t a, std::uint32_t map);

  std::uint32_t intern_set(std::span<const VarId> vars);
  std::uint32_t intern_map(const VarMap& mapping);

  bool cache_lookup(const CacheKey& key, std::uint32_t& out) const;
  void cache_store(const CacheKey& key, std::uint32_t value);

  template <class Num, class Convert>
  Num wmc_impl(Bdd a, const WeightFn& w, std::span<const VarId> universe, Convert convert) const;

  std::vector<Node> nodes_;
  absl::flat_hash_map<Node, std::uint32_t, NodeHash> unique_;
  absl::flat_hash_map<CacheKey, std::uint32_t, CacheKeyHash> cache_;
  std::vector<std::string> var_names_;

  std::vector<VarSet> sets_;
  std::map<std::vector<std::uint32_t>, std::uint32_t> set_ids_;
  std::vector<std::vector<std::uint32_t>> maps_;
  std::map<std::vector<std::uint32_t>, std::uint32_t> map_ids_;

  bool caching_ = true;
};

inline Bdd operator&(Bdd a, Bdd b) { return a.store()->apply(Op::And, a, b); }
inline Bdd operator|(Bdd a, Bdd b) { return a.store()->apply(Op::Or, a, b); }
inline Bdd operator^(Bdd a, Bdd b) { return a.store()->apply(Op::Xor, a, b); }
inline Bdd operator!(Bdd a) { return a.store()->negate(a); }

}  // namespace dippl::bdd
