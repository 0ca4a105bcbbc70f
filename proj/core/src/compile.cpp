#include "dippl/compile.hpp"

#include <algorithm>
#include <chrono>
#include <map>

namespace dippl {

using bdd::Bdd;
using bdd::NodeStore;
using bdd::Op;
using bdd::VarId;
using bdd::WeightFn;

std::size_t VarBanks::index_of(std::string_view name) const {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw UnknownVariable(std::string(name));
  return static_cast<std::size_t>(it - names.begin());
}

const VarBanks::Triple& VarBanks::of(std::string_view name) const { return triples[index_of(name)]; }

std::vector<VarId> VarBanks::unprimed() const {
  std::vector<VarId> out;
  for (const auto& t : triples) out.push_back(t.unprimed);
  return out;
}

std::vector<VarId> VarBanks::primed() const {
  std::vector<VarId> out;
  for (const auto& t : triples) out.push_back(t.primed);
  return out;
}

bdd::VarMap VarBanks::shift_in() const {
  bdd::VarMap m;
  for (const auto& t : triples) {
    m.emplace_back(t.unprimed, t.primed);
    m.emplace_back(t.primed, t.double_primed);
  }
  return m;
}

bdd::VarMap VarBanks::shift_out() const {
  bdd::VarMap m;
  for (const auto& t : triples) m.emplace_back(t.double_primed, t.primed);
  return m;
}

bdd::VarMap VarBanks::to_primed() const {
  bdd::VarMap m;
  for (const auto& t : triples) m.emplace_back(t.unprimed, t.primed);
  return m;
}

VarBanks allocate_banks(const Program& p, NodeStore& store) {
  VarBanks banks;
  banks.names = p.vars;
  banks.triples.resize(p.vars.size());
  auto flips = collect_flips(*p.body);
  banks.flips.resize(flips.size());

  std::map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < p.vars.size(); ++i) position.emplace(p.vars[i], i);

  std::map<std::string, std::vector<std::size_t>> by_target;
  for (const Flip* f : flips) by_target[f->target].push_back(f->label);

  // Triples follow first appearance; a variable's flips sit just above it.
  for (const auto& name : p.vars) {
    if (auto it = by_target.find(name); it != by_target.end()) {
      for (auto label : it->second) banks.flips.at(label) = store.new_var("f" + std::to_string(label));
    }
    auto& t = banks.triples[position.at(name)];
    t.unprimed = store.new_var(name);
    t.primed = store.new_var(name + "'");
    t.double_primed = store.new_var(name + "''");
  }

  for (const auto& t : banks.triples) {
    banks.universe.push_back(t.unprimed);
    banks.universe.push_back(t.primed);
  }
  banks.universe.insert(banks.universe.end(), banks.flips.begin(), banks.flips.end());
  std::sort(banks.universe.begin(), banks.universe.end());
  return banks;
}

Bdd gamma(NodeStore& store, const VarBanks& banks, const std::set<std::string>& exclude) {
  // Built bottom-up so every step conjoins with a disjoint lower block.
  Bdd acc = store.constant(true);
  for (std::size_t i = banks.names.size(); i-- > 0;) {
    if (exclude.count(banks.names[i])) continue;
    const auto& t = banks.triples[i];
    acc = acc & store.apply(Op::Iff, store.var(t.unprimed), store.var(t.primed));
  }
  return acc;
}

Bdd compile_expr(NodeStore& store, const Expr& e, const VarBanks& banks, Bank bank) {
  return std::visit(overloaded{
                        [&](const VarRef& x) {
                          const auto& t = banks.of(x.name);
                          return store.var(bank == Bank::Unprimed ? t.unprimed : t.primed);
                        },
                        [&](const Const& x) { return store.constant(x.value); },
                        [&](const Or& x) {
                          return compile_expr(store, *x.lhs, banks, bank) | compile_expr(store, *x.rhs, banks, bank);
                        },
                        [&](const And& x) {
                          return compile_expr(store, *x.lhs, banks, bank) & compile_expr(store, *x.rhs, banks, bank);
                        },
                        [&](const Not& x) { return !compile_expr(store, *x.inner, banks, bank); },
                    },
                    e.node);
}

namespace {

// A statement's relation is kept as (phi, writes): the full formula is
// phi & gamma(variables not written). Frames are materialized only where
// branches disagree and once at the end, which keeps intermediate diagrams
// proportional to what a statement touches rather than to the whole state.
// With lazy frames off every relation carries its frame explicitly.
class Compiler {
 public:
  using Mask = std::vector<char>;

  struct Rel {
    Bdd phi;
    Mask writes;
  };

  Compiler(NodeStore& store, const VarBanks& banks, const CompileOptions& options)
      : store_(store), banks_(banks), options_(options), n_(banks.names.size()) {}

  Rel run(const Stmt& s) {
    Rel r = std::visit(overloaded{
                           [&](const Skip&) { return leaf(store_.constant(true), Mask(n_, 0)); },
                           [&](const Flip& x) {
                             VarId f = banks_.flips.at(x.label);
                             WeightFn w;
                             w.set(f, x.theta, 1 - x.theta);
                             weights_.merge(w);
                             return write(x.target, store_.var(f));
                           },
                           [&](const Assign& x) { return write(x.target, compile_expr(store_, *x.rhs, banks_)); },
                           [&](const Observe& x) { return leaf(compile_expr(store_, *x.cond, banks_), Mask(n_, 0)); },
                           [&](const If& x) {
                             Bdd c = compile_expr(store_, *x.cond, banks_);
                             Rel t = run(*x.then_branch);
                             Rel e = run(*x.else_branch);
                             Mask w = unite(t.writes, e.writes);
                             Bdd pt = t.phi & frame(minus(w, t.writes));
                             Bdd pe = e.phi & frame(minus(w, e.writes));
                             return Rel{store_.ite(c, pt, pe), w};
                           },
                           [&](const Seq& x) {
                             Rel a = run(*x.first);
                             Rel b = run(*x.second);
                             return sequence(a, b);
                           },
                       },
                       s.node);
    peak_ = std::max(peak_, store_.node_count(r.phi));
    return r;
  }

  /// phi with the frame of every unwritten variable attached.
  Bdd close(const Rel& r) { return r.phi & frame(minus(Mask(n_, 1), r.writes)); }

  WeightFn& weights() { return weights_; }
  std::size_t peak() const { return peak_; }

 private:
  Rel leaf(Bdd phi, Mask writes) {
    if (options_.lazy_frames) return Rel{phi, std::move(writes)};
    return Rel{phi & frame(minus(Mask(n_, 1), writes)), Mask(n_, 1)};
  }

  Rel write(const std::string& target, Bdd value) {
    std::size_t i = banks_.index_of(target);
    Mask w(n_, 0);
    w[i] = 1;
    return leaf(store_.apply(Op::Iff, store_.var(banks_.triples[i].primed), value), std::move(w));
  }

  // Variables written by the first part are routed through the primed bank;
  // those written by both are quantified away. Everything else is untouched.
  Rel sequence(const Rel& a, const Rel& b) {
    bdd::VarMap in, out;
    std::vector<VarId> quantified;
    for (std::size_t i = 0; i < n_; ++i) {
      if (!a.writes[i]) continue;
      const auto& t = banks_.triples[i];
      in.emplace_back(t.unprimed, t.primed);
      in.emplace_back(t.primed, t.double_primed);
      if (b.writes[i]) {
        quantified.push_back(t.primed);
        out.emplace_back(t.double_primed, t.primed);
      }
    }
    Bdd second = in.empty() ? b.phi : store_.rename(in, b.phi);
    Bdd joined = options_.fused_and_exists ? store_.and_exists(a.phi, second, quantified)
                                           : store_.exists(quantified, a.phi & second);
    if (!out.empty()) joined = store_.rename(out, joined);
    return Rel{joined, unite(a.writes, b.writes)};
  }

  Mask unite(const Mask& a, const Mask& b) const {
    Mask m(n_);
    for (std::size_t i = 0; i < n_; ++i) m[i] = a[i] || b[i];
    return m;
  }

  Mask minus(const Mask& a, const Mask& b) const {
    Mask m(n_);
    for (std::size_t i = 0; i < n_; ++i) m[i] = a[i] && !b[i];
    return m;
  }

  // Conjunction of x <=> x' over the variables in `include`.
  Bdd frame(const Mask& include) {
    auto it = frames_.find(include);
    if (it != frames_.end()) return it->second;
    Bdd acc = store_.constant(true);
    for (std::size_t i = n_; i-- > 0;) {
      if (!include[i]) continue;
      const auto& t = banks_.triples[i];
      acc = acc & store_.apply(Op::Iff, store_.var(t.unprimed), store_.var(t.primed));
    }
    frames_.emplace(include, acc);
    return acc;
  }

  NodeStore& store_;
  const VarBanks& banks_;
  const CompileOptions& options_;
  std::size_t n_;
  std::map<Mask, Bdd> frames_;
  WeightFn weights_;
  std::size_t peak_ = 0;
};

}  // namespace

std::pair<Bdd, WeightFn> compile_stmt(NodeStore& store, const Stmt& s, const VarBanks& banks,
                                      const CompileOptions& options) {
  Compiler c(store, banks, options);
  Bdd phi = c.close(c.run(s));
  return {phi, std::move(c.weights())};
}

Bdd state_cube(NodeStore& store, const VarBanks& banks, const State& s, Bank bank) {
  if (s.size() != banks.names.size()) {
    throw std::invalid_argument("state must assign exactly the program variables");
  }
  std::vector<std::pair<VarId, bool>> lits;
  lits.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto& t = banks.of(s.domain().name(i));
    lits.emplace_back(bank == Bank::Unprimed ? t.unprimed : t.primed, s.get(i));
  }
  return store.cube(lits);
}

CompiledProgram compile(const Program& p, const CompileOptions& options) {
  auto start = std::chrono::steady_clock::now();
  CompiledProgram out;
  out.store = std::make_shared<NodeStore>();
  out.banks = allocate_banks(p, *out.store);
  out.program = p;

  Compiler c(*out.store, out.banks, options);
  out.phi = c.close(c.run(*p.body));
  out.weights = std::move(c.weights());

  out.stats.node_count = out.store->node_count(out.phi);
  out.stats.peak_node_count = c.peak();
  out.stats.store_nodes = out.store->size();
  out.stats.compile_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace dippl
