#pragma once

#include "dippl/compile.hpp"

#include <optional>
#include <variant>

namespace dippl {

enum class Arithmetic { Exact, Float };

/// Ratio of two weighted model counts. A zero denominator means every
/// execution violates an observation; that outcome is reported, not thrown.
struct InferenceResult {
  Arithmetic mode = Arithmetic::Exact;
  bool infeasible = false;
  /// Exact ratio; empty when infeasible or in Float mode.
  std::optional<Rational> value;
  /// In Float mode these hold the exact values of the computed doubles.
  Rational numerator = 0;
  Rational denominator = 0;
  /// Ratio as a double; NaN when infeasible.
  double approx = 0;
  double query_ms = 0;
};

/// State over the program's variables with every variable false.
State default_state(const CompiledProgram& c);

InferenceResult transition_prob(const CompiledProgram& c, const State& from, const State& to,
                                Arithmetic mode = Arithmetic::Exact);
Rational accept_prob(const CompiledProgram& c, const State& from);
/// Probability that `event` holds in the output state. Throws
/// UnknownVariable if `event` mentions a non-program variable.
InferenceResult event_prob(const CompiledProgram& c, const State& from, const Expr& event,
                           Arithmetic mode = Arithmetic::Exact);

struct Marginal {
  ExprPtr event;
};
struct Transition {
  State target;
};
struct Accepting {};

struct Query {
  /// All-false when empty.
  std::optional<State> init;
  std::variant<Marginal, Transition, Accepting> mode;
};

struct OracleReport {
  bool agree = false;
  /// Empty means infeasible evidence.
  std::optional<Rational> oracle;
  std::optional<Rational> compiled;
};

/// Answers `q` with both the enumerative interpreter and the compiled
/// formula and compares them exactly. Throws OracleTooLarge above
/// kOracleMaxVars variables.
OracleReport check_against_oracle(const Program& p, const Query& q);

}  // namespace dippl
