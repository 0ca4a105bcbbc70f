#include "dippl/infer.hpp"

#include <chrono>
#include <limits>

namespace dippl {

using bdd::Bdd;

namespace {

InferenceResult ratio(const CompiledProgram& c, Bdd num, Bdd den, Arithmetic mode,
                      std::chrono::steady_clock::time_point start) {
  InferenceResult r;
  r.mode = mode;
  const auto& store = *c.store;
  if (mode == Arithmetic::Exact) {
    r.numerator = store.wmc(num, c.weights, c.banks.universe);
    r.denominator = store.wmc(den, c.weights, c.banks.universe);
    if (r.denominator == 0) {
      r.infeasible = true;
      r.approx = std::numeric_limits<double>::quiet_NaN();
    } else {
      r.value = r.numerator / r.denominator;
      r.approx = r.value->get_d();
    }
  } else {
    double n = store.wmc_double(num, c.weights, c.banks.universe);
    double d = store.wmc_double(den, c.weights, c.banks.universe);
    r.numerator = n;
    r.denominator = d;
    r.infeasible = d == 0;
    r.approx = r.infeasible ? std::numeric_limits<double>::quiet_NaN() : n / d;
  }
  r.query_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace

State default_state(const CompiledProgram& c) { return State(domain_of(c.program)); }

InferenceResult transition_prob(const CompiledProgram& c, const State& from, const State& to, Arithmetic mode) {
  auto start = std::chrono::steady_clock::now();
  auto& store = *c.store;
  Bdd den = c.phi & state_cube(store, c.banks, from, Bank::Unprimed);
  Bdd num = den & state_cube(store, c.banks, to, Bank::Primed);
  return ratio(c, num, den, mode, start);
}

Rational accept_prob(const CompiledProgram& c, const State& from) {
  auto& store = *c.store;
  Bdd den = c.phi & state_cube(store, c.banks, from, Bank::Unprimed);
  return store.wmc(den, c.weights, c.banks.universe);
}

InferenceResult event_prob(const CompiledProgram& c, const State& from, const Expr& event, Arithmetic mode) {
  auto start = std::chrono::steady_clock::now();
  auto& store = *c.store;
  Bdd den = c.phi & state_cube(store, c.banks, from, Bank::Unprimed);
  Bdd num = den & compile_expr(store, event, c.banks, Bank::Primed);
  return ratio(c, num, den, mode, start);
}

OracleReport check_against_oracle(const Program& p, const Query& q) {
  auto domain = domain_of(p);
  if (domain->size() > kOracleMaxVars) {
    throw OracleTooLarge("program has " + std::to_string(domain->size()) + " variables; the oracle handles at most " +
                         std::to_string(kOracleMaxVars));
  }
  State init = q.init ? *q.init : State(domain);
  CompiledProgram c = compile(p);

  OracleReport report;
  std::visit(overloaded{
                 [&](const Marginal& m) {
                   report.oracle = output_marginal(p, init, *m.event);
                   report.compiled = event_prob(c, init, *m.event).value;
                 },
                 [&](const Transition& t) {
                   auto d = transition(*p.body, init);
                   if (!d.is_bottom()) report.oracle = d.mass(t.target);
                   report.compiled = transition_prob(c, init, t.target).value;
                 },
                 [&](const Accepting&) {
                   report.oracle = accepting(*p.body, init);
                   report.compiled = accept_prob(c, init);
                 },
             },
             q.mode);
  report.agree = report.oracle == report.compiled;
  return report;
}

}  // namespace dippl
