#pragma once

#include "dippl/ast.hpp"
#include "dippl/rational.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace dippl {

class UnknownVariable : public std::runtime_error {
 public:
  explicit UnknownVariable(const std::string& name)
      : std::runtime_error("unknown variable '" + name + "'"), name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

/// Raised by the enumerative interpreter for programs with more than
/// kOracleMaxVars variables.
class OracleTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kOracleMaxVars = 12;

/// Ordered set of variable names with index lookup.
class Domain {
 public:
  explicit Domain(std::vector<std::string> names);

  std::size_t size() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::string& name(std::size_t i) const { return names_.at(i); }

  std::optional<std::size_t> find(std::string_view name) const;
  /// Throws UnknownVariable.
  std::size_t index_of(std::string_view name) const;

 private:
  std::vector<std::string> names_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

using DomainPtr = std::shared_ptr<const Domain>;

DomainPtr domain_of(const Program& p);

/// Total assignment of Booleans to the variables of a Domain.
class State {
 public:
  explicit State(DomainPtr domain);

  static State from_mask(DomainPtr domain, std::uint64_t mask);
  /// Parses `"x=true,y=0"`; unmentioned variables are false. Throws
  /// UnknownVariable or std::invalid_argument.
  static State parse(DomainPtr domain, std::string_view bindings);

  bool get(std::size_t index) const { return values_.at(index); }
  bool get(std::string_view name) const { return values_[domain_->index_of(name)]; }
  void set(std::size_t index, bool value) { values_.at(index) = value; }
  void set(std::string_view name, bool value) { values_[domain_->index_of(name)] = value; }

  std::size_t size() const noexcept { return values_.size(); }
  const Domain& domain() const noexcept { return *domain_; }
  const DomainPtr& domain_ptr() const noexcept { return domain_; }

  /// Bit i holds variable i. Requires size() <= 64.
  std::uint64_t mask() const;

  /// `{x:T, y:F}`
  std::string to_string() const;

  friend bool operator==(const State& a, const State& b) {
    return a.values_ == b.values_ && a.domain_->names() == b.domain_->names();
  }

 private:
  DomainPtr domain_;
  std::vector<bool> values_;
};

/// Exact distribution over the states of one Domain, or the all-zero
/// element (bottom) produced when every execution violates an observation.
class StateDistribution {
 public:
  StateDistribution(DomainPtr domain, std::map<std::uint64_t, Rational> mass);
  static StateDistribution bottom(DomainPtr domain);

  bool is_bottom() const noexcept { return bottom_; }
  Rational mass(const State& s) const;
  Rational total() const;
  std::size_t support_size() const noexcept { return mass_.size(); }
  std::vector<std::pair<State, Rational>> entries() const;
  const std::map<std::uint64_t, Rational>& by_mask() const noexcept { return mass_; }

 private:
  DomainPtr domain_;
  std::map<std::uint64_t, Rational> mass_;
  bool bottom_ = false;
};

/// Standard Boolean evaluation. Throws UnknownVariable.
bool eval_expr(const Expr& e, const State& s);

/// Probability that executing `stmt` from `s` violates no observation.
Rational accepting(const Stmt& stmt, const State& s);

/// Normalized output distribution of `stmt` from `s`, conditioned on no
/// observation being violated; bottom when that has probability zero.
StateDistribution transition(const Stmt& stmt, const State& s);

/// Probability that `query` holds in the output state of `p` started in
/// `init`. std::nullopt when the evidence is infeasible (bottom).
std::optional<Rational> output_marginal(const Program& p, const State& init, const Expr& query);

}  // namespace dippl
