#include "dippl/oracle.hpp"

#include <cctype>
#include <sstream>

namespace dippl {

Domain::Domain(std::vector<std::string> names) : names_(std::move(names)) {
  for (std::size_t i = 0; i < names_.size(); ++i) index_.emplace(names_[i], i);
}

std::optional<std::size_t> Domain::find(std::string_view name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Domain::index_of(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw UnknownVariable(std::string(name));
}

DomainPtr domain_of(const Program& p) { return std::make_shared<const Domain>(p.vars); }

State::State(DomainPtr domain) : domain_(std::move(domain)), values_(domain_->size(), false) {}

State State::from_mask(DomainPtr domain, std::uint64_t mask) {
  State s(std::move(domain));
  for (std::size_t i = 0; i < s.size() && i < 64; ++i) s.values_[i] = (mask >> i) & 1U;
  return s;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

State State::parse(DomainPtr domain, std::string_view bindings) {
  State s(std::move(domain));
  while (!trim(bindings).empty()) {
    auto comma = bindings.find(',');
    auto item = trim(bindings.substr(0, comma));
    bindings = comma == std::string_view::npos ? std::string_view{} : bindings.substr(comma + 1);
    auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("expected name=value in state binding '" + std::string(item) + "'");
    }
    auto name = trim(item.substr(0, eq));
    auto value = trim(item.substr(eq + 1));
    bool b;
    if (value == "true" || value == "T" || value == "1") {
      b = true;
    } else if (value == "false" || value == "F" || value == "0") {
      b = false;
    } else {
      throw std::invalid_argument("invalid Boolean '" + std::string(value) + "' for " + std::string(name));
    }
    s.set(name, b);
  }
  return s;
}

std::uint64_t State::mask() const {
  if (values_.size() > 64) throw std::length_error("state has more than 64 variables");
  std::uint64_t m = 0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i]) m |= std::uint64_t{1} << i;
  }
  return m;
}

std::string State::to_string() const {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (i) os << ", ";
    os << domain_->name(i) << ':' << (values_[i] ? 'T' : 'F');
  }
  os << '}';
  return os.str();
}

StateDistribution::StateDistribution(DomainPtr domain, std::map<std::uint64_t, Rational> mass)
    : domain_(std::move(domain)), mass_(std::move(mass)) {}

StateDistribution StateDistribution::bottom(DomainPtr domain) {
  StateDistribution d(std::move(domain), {});
  d.bottom_ = true;
  return d;
}

Rational StateDistribution::mass(const State& s) const {
  auto it = mass_.find(s.mask());
  return it == mass_.end() ? Rational(0) : it->second;
}

Rational StateDistribution::total() const {
  Rational t = 0;
  for (const auto& [_, m] : mass_) t += m;
  return t;
}

std::vector<std::pair<State, Rational>> StateDistribution::entries() const {
  std::vector<std::pair<State, Rational>> out;
  out.reserve(mass_.size());
  for (const auto& [mask, m] : mass_) out.emplace_back(State::from_mask(domain_, mask), m);
  return out;
}

bool eval_expr(const Expr& e, const State& s) {
  return std::visit(overloaded{
                        [&](const VarRef& x) { return s.get(x.name); },
                        [](const Const& x) { return x.value; },
                        [&](const Or& x) { return eval_expr(*x.lhs, s) || eval_expr(*x.rhs, s); },
                        [&](const And& x) { return eval_expr(*x.lhs, s) && eval_expr(*x.rhs, s); },
                        [&](const Not& x) { return !eval_expr(*x.inner, s); },
                    },
                    e.node);
}

namespace {

using Mask = std::uint32_t;

struct Dist {
  bool bottom = false;
  std::map<Mask, Rational> mass;
};

struct MemoKey {
  const Stmt* stmt;
  Mask state;
  bool operator==(const MemoKey&) const = default;
};

struct MemoKeyHash {
  std::size_t operator()(const MemoKey& k) const noexcept {
    return std::hash<const void*>{}(k.stmt) * 0x9E3779B97F4A7C15ULL ^ k.state;
  }
};

// Evaluates the transition and accepting semantics over bitmask states.
// Memo tables live for one top-level query.
class Interpreter {
 public:
  explicit Interpreter(const Domain& domain) : domain_(domain) {
    if (domain.size() > kOracleMaxVars) {
      throw OracleTooLarge("reference interpreter supports at most " + std::to_string(kOracleMaxVars) +
                           " variables, program has " + std::to_string(domain.size()));
    }
  }

  bool eval(const Expr& e, Mask s) {
    return std::visit(overloaded{
                          [&](const VarRef& x) { return ((s >> index(x.name)) & 1U) != 0; },
                          [](const Const& x) { return x.value; },
                          [&](const Or& x) { return eval(*x.lhs, s) || eval(*x.rhs, s); },
                          [&](const And& x) { return eval(*x.lhs, s) && eval(*x.rhs, s); },
                          [&](const Not& x) { return !eval(*x.inner, s); },
                      },
                      e.node);
  }

  const Rational& accepting(const Stmt& stmt, Mask s) {
    MemoKey key{&stmt, s};
    if (auto it = accept_memo_.find(key); it != accept_memo_.end()) return it->second;
    Rational r = std::visit(overloaded{
                                [&](const Observe& x) { return Rational(eval(*x.cond, s) ? 1 : 0); },
                                [&](const Seq& x) {
                                  Rational first = accepting(*x.first, s);
                                  if (first == 0) return Rational(0);
                                  Rational sum = 0;
                                  for (const auto& [tau, p] : transition(*x.first, s).mass) {
                                    sum += p * accepting(*x.second, tau);
                                  }
                                  return Rational(first * sum);
                                },
                                [&](const If& x) {
                                  return eval(*x.cond, s) ? accepting(*x.then_branch, s)
                                                          : accepting(*x.else_branch, s);
                                },
                                [](const auto&) { return Rational(1); },
                            },
                            stmt.node);
    return accept_memo_.emplace(key, std::move(r)).first->second;
  }

  const Dist& transition(const Stmt& stmt, Mask s) {
    MemoKey key{&stmt, s};
    if (auto it = trans_memo_.find(key); it != trans_memo_.end()) return it->second;
    Dist d = std::visit(overloaded{
                            [&](const Skip&) { return point(s); },
                            [&](const Assign& x) { return point(with(s, x.target, eval(*x.rhs, s))); },
                            [&](const Flip& x) {
                              Dist out;
                              if (x.theta != 0) out.mass[with(s, x.target, true)] += x.theta;
                              if (x.theta != 1) out.mass[with(s, x.target, false)] += 1 - x.theta;
                              return out;
                            },
                            [&](const Observe& x) { return eval(*x.cond, s) ? point(s) : Dist{true, {}}; },
                            [&](const If& x) {
                              return eval(*x.cond, s) ? transition(*x.then_branch, s)
                                                      : transition(*x.else_branch, s);
                            },
                            [&](const Seq& x) { return sequence(x, s); },
                        },
                        stmt.node);
    return trans_memo_.emplace(key, std::move(d)).first->second;
  }

 private:
  // sum_tau T1(tau|s) T2(s'|tau) A2(tau) / sum_tau T1(tau|s) A2(tau), with a
  // zero denominator yielding bottom.
  Dist sequence(const Seq& x, Mask s) {
    const Dist& first = transition(*x.first, s);
    if (first.bottom) return Dist{true, {}};
    Dist out;
    Rational denom = 0;
    for (const auto& [tau, p] : first.mass) {
      Rational a2 = accepting(*x.second, tau);
      if (a2 == 0) continue;
      Rational w = p * a2;
      denom += w;
      const Dist& second = transition(*x.second, tau);
      for (const auto& [sigma, q] : second.mass) out.mass[sigma] += w * q;
    }
    if (denom == 0) return Dist{true, {}};
    for (auto& [_, m] : out.mass) m /= denom;
    return out;
  }

  static Dist point(Mask s) {
    Dist d;
    d.mass.emplace(s, 1);
    return d;
  }

  std::size_t index(const std::string& name) const { return domain_.index_of(name); }

  Mask with(Mask s, const std::string& name, bool value) const {
    Mask bit = Mask{1} << index(name);
    return value ? (s | bit) : (s & ~bit);
  }

  const Domain& domain_;
  std::unordered_map<MemoKey, Rational, MemoKeyHash> accept_memo_;
  std::unordered_map<MemoKey, Dist, MemoKeyHash> trans_memo_;
};

}  // namespace

Rational accepting(const Stmt& stmt, const State& s) {
  Interpreter interp(s.domain());
  return interp.accepting(stmt, static_cast<Mask>(s.mask()));
}

StateDistribution transition(const Stmt& stmt, const State& s) {
  Interpreter interp(s.domain());
  const Dist& d = interp.transition(stmt, static_cast<Mask>(s.mask()));
  if (d.bottom) return StateDistribution::bottom(s.domain_ptr());
  std::map<std::uint64_t, Rational> mass;
  for (const auto& [m, p] : d.mass) {
    if (p != 0) mass.emplace(m, p);
  }
  return StateDistribution(s.domain_ptr(), std::move(mass));
}

std::optional<Rational> output_marginal(const Program& p, const State& init, const Expr& query) {
  auto d = transition(*p.body, init);
  if (d.is_bottom()) return std::nullopt;
  Rational sum = 0;
  for (const auto& [state, m] : d.entries()) {
    if (eval_expr(query, state)) sum += m;
  }
  return sum;
}

}  // namespace dippl
