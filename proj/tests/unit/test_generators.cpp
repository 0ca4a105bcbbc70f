#include "dippl/generators.hpp"
#include "dippl/infer.hpp"
#include "dippl/lang.hpp"

#include <doctest.h>

using namespace dippl;

TEST_CASE("splitmix64 reference stream") {
  // First outputs for seed 0 of the published reference implementation.
  gen::SplitMix64 rng(0);
  CHECK(rng.next() == 0xE220A8397B1DCDAFULL);
  CHECK(rng.next() == 0x6E789E6AA1B965F4ULL);
  CHECK(rng.next() == 0x06C45D188009454FULL);
}

TEST_CASE("thetas are tenths in (0, 1)") {
  gen::SplitMix64 rng(99);
  for (int i = 0; i < 200; ++i) {
    Rational t = rng.theta();
    CHECK(t > 0);
    CHECK(t < 1);
    CHECK(Rational(t * 10).get_den() == 1);
  }
}

TEST_CASE("chain with the three-step parameters reproduces the example program") {
  Program p = gen::chain_program({"x", "y", "z"}, {Rational(1, 2), Rational(3, 5), Rational(2, 5), Rational(3, 5),
                                                   Rational(9, 10)});
  Program expected = parse(R"(
    x ~ flip(0.5);
    if x { y ~ flip(0.6) } else { y ~ flip(0.4) };
    if y { z ~ flip(0.6) } else { z ~ flip(0.9) })");
  CHECK(p == expected);
  CHECK(gen::gen_chain(1).flip_count == 1);
  CHECK(std::holds_alternative<Flip>(gen::gen_chain(1).body->node));
  CHECK(gen::gen_chain(20).vars.size() == 20);
  CHECK(gen::gen_chain(20).flip_count == 39);
}

TEST_CASE("generation is deterministic") {
  CHECK(print(gen::gen_chain(30, 5)) == print(gen::gen_chain(30, 5)));
  CHECK(print(gen::gen_chain(30, 5)) != print(gen::gen_chain(30, 6)));
  CHECK(print(gen::gen_grid(4, 0.5, 5)) == print(gen::gen_grid(4, 0.5, 5)));
  CHECK(print(gen::gen_ladder(8, 5)) == print(gen::gen_ladder(8, 5)));
}

TEST_CASE("grid structure") {
  Program g = gen::gen_grid(3, 0, 1);
  CHECK(g.vars.size() == 9);
  CHECK(g.flip_count == 25);
  CHECK(gen::grid_flip_count(3) == 25);
  CHECK(gen::grid_flip_count(1) == 1);
  CHECK(gen::gen_grid(4, 0, 1).flip_count == gen::grid_flip_count(4));
  CHECK(validate(g).empty());

  Program half = gen::gen_grid(3, 0.5, 1);
  CHECK(half.flip_count == 25 - 12);
  Program most = gen::gen_grid(4, 0.9, 1);
  CHECK(most.flip_count == gen::grid_flip_count(4) - 44);

  CHECK_THROWS_AS(gen::gen_grid(3, 1.5, 1), std::invalid_argument);
}

TEST_CASE("fully deterministic grids are point distributions") {
  Program g = gen::gen_grid(3, 1.0, 8);
  CHECK(g.flip_count == 0);
  CompiledProgram c = compile(g);
  State init = default_state(c);
  CHECK(accept_prob(c, init) == 1);
  for (const auto& v : g.vars) {
    Rational p = *event_prob(c, init, *expr::var(v)).value;
    CHECK((p == 0 || p == 1));
  }
}

TEST_CASE("ladder") {
  Program two = gen::ladder_program({"x", "y"}, {Rational(3, 5), Rational(7, 10)});
  CHECK(two == parse("x ~ flip(0.6); y ~ flip(0.7)"));
  Program one = gen::gen_ladder(1);
  CompiledProgram c = compile(one);
  CHECK(c.stats.node_count == 3);
  CHECK(gen::gen_ladder(16).vars.size() == 16);
}
