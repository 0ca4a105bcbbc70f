#include "dippl/infer.hpp"
#include "dippl/lang.hpp"
#include "random_programs.hpp"

#include <doctest.h>

#include <cmath>

using namespace dippl;
using dippl::testing::Rng;

namespace {

const char* kMarkov3 = R"(
x ~ flip(0.5);
if x { y ~ flip(0.6) } else { y ~ flip(0.4) };
if y { z ~ flip(0.6) } else { z ~ flip(0.9) }
)";
const char* kBar1 = "if x { y ~ flip(1/4) } else { y ~ flip(1/2) }";
const char* kBar2 = "y ~ flip(1/2); observe(x || y); if y { y ~ flip(1/2) } else { y := false }";

State st(const CompiledProgram& c, const char* bindings) { return State::parse(domain_of(c.program), bindings); }

}  // namespace

TEST_CASE("transition probabilities") {
  CompiledProgram foo_bar1 = compile(parse(std::string("x ~ flip(1/3); ") + kBar1));
  for (const char* from : {"", "x=1", "y=1", "x=1,y=1"}) {
    CHECK(*transition_prob(foo_bar1, st(foo_bar1, from), st(foo_bar1, "y=1")).value == Rational(1, 3));
  }

  CompiledProgram skip = compile(parse("skip; observe(a || !a); b := b"));
  CHECK(*transition_prob(skip, st(skip, "a=1"), st(skip, "a=1")).value == 1);
  CHECK(*transition_prob(skip, st(skip, "a=1"), st(skip, "b=1")).value == 0);

  CompiledProgram chain = compile(parse(kMarkov3));
  CHECK(*transition_prob(chain, default_state(chain), st(chain, "x=1,y=1,z=1")).value == Rational(9, 50));
}

TEST_CASE("acceptance") {
  CompiledProgram free = compile(parse(kMarkov3));
  CHECK(accept_prob(free, default_state(free)) == 1);
  CompiledProgram foo_bar2 = compile(parse(std::string("x ~ flip(1/3); ") + kBar2));
  CHECK(accept_prob(foo_bar2, default_state(foo_bar2)) == Rational(2, 3));
  CompiledProgram never = compile(parse("observe(false)"));
  CHECK(accept_prob(never, default_state(never)) == 0);
}

TEST_CASE("event probabilities") {
  CompiledProgram chain = compile(parse(kMarkov3));
  State init = default_state(chain);
  CHECK(*event_prob(chain, init, *parse_expr("z")).value == Rational(3, 4));
  CHECK(*event_prob(chain, init, *parse_expr("!z")).value == Rational(1, 4));
  CHECK(*event_prob(chain, init, *parse_expr("true")).value == 1);

  CompiledProgram foo_bar2 = compile(parse(std::string("x ~ flip(1/3); ") + kBar2));
  auto r = event_prob(foo_bar2, default_state(foo_bar2), *parse_expr("x"));
  CHECK(*r.value == Rational(1, 2));
  CHECK(r.numerator == Rational(1, 3));
  CHECK(r.denominator == Rational(2, 3));
  CHECK(r.approx == doctest::Approx(0.5));

  CompiledProgram bar2 = compile(parse(kBar2));
  CHECK(*event_prob(bar2, st(bar2, "x=0"), *parse_expr("y")).value == Rational(1, 2));
  CHECK_THROWS_AS(event_prob(bar2, default_state(bar2), *parse_expr("w")), UnknownVariable);
}

TEST_CASE("infeasible evidence is a result") {
  CompiledProgram never = compile(parse("x ~ flip(0.5); observe(false)"));
  auto r = event_prob(never, default_state(never), *parse_expr("x"));
  CHECK(r.infeasible);
  CHECK_FALSE(r.value.has_value());
  CHECK(r.denominator == 0);
  CHECK(std::isnan(r.approx));
  auto f = event_prob(never, default_state(never), *parse_expr("x"), Arithmetic::Float);
  CHECK(f.infeasible);
}

TEST_CASE("float mode tracks exact mode") {
  CompiledProgram chain = compile(parse(kMarkov3));
  auto r = event_prob(chain, default_state(chain), *parse_expr("z"), Arithmetic::Float);
  CHECK(r.mode == Arithmetic::Float);
  CHECK_FALSE(r.value.has_value());
  CHECK(r.approx == doctest::Approx(0.75));
}

TEST_CASE("states must cover the program variables") {
  CompiledProgram c = compile(parse("x := true"));
  auto other = std::make_shared<const Domain>(std::vector<std::string>{"x", "y"});
  CHECK_THROWS_AS(accept_prob(c, State(other)), std::invalid_argument);
}

TEST_CASE("complementarity, monotonicity and query purity") {
  Rng rng(41);
  for (int i = 0; i < 100; ++i) {
    Program p = testing::random_program(rng);
    CompiledProgram c = compile(p);
    State init = State::from_mask(domain_of(p), rng() & ((1U << p.vars.size()) - 1));
    bdd::Bdd before = c.phi;
    std::size_t store_nodes = c.store->size();
    auto e1 = testing::random_expr(rng, p.vars);
    auto e2 = testing::random_expr(rng, p.vars);
    auto a = event_prob(c, init, *e1);
    auto na = event_prob(c, init, *expr::lnot(e1));
    if (accept_prob(c, init) > 0) {
      REQUIRE(*a.value + *na.value == 1);
      auto b = event_prob(c, init, *e2);
      auto either = event_prob(c, init, *expr::lor(e1, e2));
      REQUIRE(*either.value >= *a.value);
      REQUIRE(*either.value >= *b.value);
    } else {
      REQUIRE(a.infeasible);
      REQUIRE(na.infeasible);
    }
    auto again = event_prob(c, init, *e1);
    REQUIRE(again.value == a.value);
    REQUIRE(c.phi == before);
    REQUIRE(c.store->size() >= store_nodes);
  }
}

TEST_CASE("oracle cross-check") {
  Program chain = parse(kMarkov3);
  auto z = check_against_oracle(chain, Query{std::nullopt, Marginal{parse_expr("z")}});
  CHECK(z.agree);
  CHECK(*z.oracle == Rational(3, 4));

  Program fb1 = parse(std::string("x ~ flip(1/3); ") + kBar1);
  auto t = check_against_oracle(fb1, Query{std::nullopt, Transition{State::parse(domain_of(fb1), "y=1")}});
  CHECK(t.agree);
  CHECK(*t.compiled == Rational(1, 3));

  Program never = parse("observe(false)");
  auto n = check_against_oracle(never, Query{std::nullopt, Marginal{parse_expr("true")}});
  CHECK(n.agree);
  CHECK_FALSE(n.oracle.has_value());
  CHECK_FALSE(n.compiled.has_value());

  auto acc = check_against_oracle(parse(std::string("x ~ flip(1/3); ") + kBar2), Query{std::nullopt, Accepting{}});
  CHECK(acc.agree);
  CHECK(*acc.oracle == Rational(2, 3));

  std::string big;
  for (std::size_t i = 0; i <= kOracleMaxVars; ++i) big += "v" + std::to_string(i) + " ~ flip(0.5);";
  CHECK_THROWS_AS(check_against_oracle(parse(big), Query{std::nullopt, Accepting{}}), OracleTooLarge);
}

TEST_CASE("compiled queries match the oracle on random programs") {
  Rng rng(42);
  for (int i = 0; i < 100; ++i) {
    Program p = testing::random_program(rng);
    State init = State::from_mask(domain_of(p), rng() & ((1U << p.vars.size()) - 1));
    auto e = testing::random_expr(rng, p.vars);
    auto r = check_against_oracle(p, Query{init, Marginal{e}});
    REQUIRE_MESSAGE(r.agree, print(p) << "\nquery " << print(*e));
    REQUIRE(check_against_oracle(p, Query{init, Accepting{}}).agree);
  }
}
