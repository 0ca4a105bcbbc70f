// Acceptance criteria: one PASS/FAIL line per criterion, nonzero exit if
// any criterion fails.

#include "dippl/generators.hpp"
#include "dippl/infer.hpp"
#include "dippl/lang.hpp"
#include "random_programs.hpp"
#include "truth_table.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>

using namespace dippl;
using bdd::Bdd;
using bdd::NodeStore;
using bdd::VarId;
using testing::Rng;

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t) { return std::chrono::duration<double, std::milli>(Clock::now() - t).count(); }

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

struct Outcome {
  bool pass;
  std::string detail;
};

// Least-squares line through (x, y); returns ||y - fit|| / ||y||.
double affine_residual(const std::vector<double>& x, const std::vector<double>& y) {
  double n = static_cast<double>(x.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  double icpt = (sy - slope * sx) / n;
  double res = 0, norm = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double r = y[i] - (slope * x[i] + icpt);
    res += r * r;
    norm += y[i] * y[i];
  }
  return std::sqrt(res) / std::sqrt(norm);
}

std::string fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

State random_state(Rng& rng, const DomainPtr& d) {
  return State::from_mask(d, rng() & ((std::uint64_t{1} << d->size()) - 1));
}

Outcome differential() {
  auto start = Clock::now();
  Rng rng(20240501);
  testing::ProgramShape shape;  // <= 8 vars, <= 10 flips, depth <= 5, observe 0.2
  std::size_t checks = 0, mismatches = 0, infeasible = 0;
  std::string first_failure;
  auto expect = [&](bool ok, const Program& p, const std::string& what) {
    ++checks;
    if (ok) return;
    if (mismatches++ == 0) first_failure = what + " in\n" + print(p);
  };

  for (int i = 0; i < 500; ++i) {
    Program p = testing::random_program(rng, shape);
    CompiledProgram c = compile(p);
    auto d = domain_of(p);
    for (int k = 0; k < 3; ++k) {
      State init = random_state(rng, d);
      expect(accepting(*p.body, init) == accept_prob(c, init), p, "acceptance");

      auto dist = transition(*p.body, init);
      std::vector<State> targets;
      for (const auto& [s, m] : dist.entries()) targets.push_back(s);
      for (int r = 0; r < 3; ++r) targets.push_back(random_state(rng, d));
      for (const auto& t : targets) {
        auto got = transition_prob(c, init, t);
        if (dist.is_bottom()) {
          expect(got.infeasible, p, "transition bottom");
        } else {
          expect(!got.infeasible && *got.value == dist.mass(t), p, "transition to " + t.to_string());
        }
      }
      if (dist.is_bottom()) ++infeasible;

      for (int e = 0; e < 2; ++e) {
        auto event = testing::random_expr(rng, p.vars);
        auto want = output_marginal(p, init, *event);
        auto got = event_prob(c, init, *event);
        expect(want == got.value && got.infeasible == !want.has_value(), p, "event " + print(*event));
      }
    }
  }
  double secs = ms_since(start) / 1000;
  bool pass = mismatches == 0 && secs < 300;
  auto detail = fmt("500 programs, %zu exact comparisons (%zu infeasible starts), %zu mismatches, %.1f s (< 300 s)",
                    checks, infeasible, mismatches, secs);
  if (!first_failure.empty()) detail += "\n  first mismatch: " + first_failure;
  return {pass, detail};
}

Outcome paper_values() {
  const std::string markov3 = R"(
    x ~ flip(0.5);
    if x { y ~ flip(0.6) } else { y ~ flip(0.4) };
    if y { z ~ flip(0.6) } else { z ~ flip(0.9) })";
  const std::string foo = "x ~ flip(1/3); ";
  const std::string bar1 = "if x { y ~ flip(1/4) } else { y ~ flip(1/2) }";
  const std::string bar2 = "y ~ flip(1/2); observe(x || y); if y { y ~ flip(1/2) } else { y := false }";

  std::vector<std::string> failed;
  auto check = [&](bool ok, const std::string& what) {
    if (!ok) failed.push_back(what);
  };

  CompiledProgram fb1 = compile(parse(foo + bar1));
  auto d1 = domain_of(fb1.program);
  check(*transition_prob(fb1, State(d1), State::parse(d1, "y=1")).value == Rational(1, 3), "foo;bar1 -> {x:F,y:T}");

  CompiledProgram b1 = compile(parse(bar1)), b2 = compile(parse(bar2));
  auto d = domain_of(b1.program);
  for (std::uint64_t from = 0; from < 4; ++from) {
    for (std::uint64_t to = 0; to < 4; ++to) {
      State s = State::from_mask(d, from), t = State::from_mask(d, to);
      bool x_in = s.get("x"), x_out = t.get("x"), y_out = t.get("y");
      Rational expected = x_in != x_out ? Rational(0)
                          : !x_in      ? Rational(1, 2)
                          : y_out      ? Rational(1, 4)
                                       : Rational(3, 4);
      auto v1 = transition_prob(b1, s, t).value, v2 = transition_prob(b2, s, t).value;
      check(v1 && v2 && *v1 == expected && *v2 == expected, "bar table " + s.to_string() + " -> " + t.to_string());
    }
  }

  CompiledProgram fb2 = compile(parse(foo + bar2));
  check(*event_prob(fb2, default_state(fb2), *parse_expr("x")).value == Rational(1, 2), "foo;bar2 Pr(x)");

  CompiledProgram chain = compile(parse(markov3));
  check(*event_prob(chain, default_state(chain), *parse_expr("z")).value == Rational(3, 4), "Pr(z)");
  check(*event_prob(chain, default_state(chain), *parse_expr("!z")).value == Rational(1, 4), "Pr(!z)");

  std::string detail = "foo;bar1 = 1/3, bar1/bar2 tables (1/2, 1/4, 3/4), foo;bar2 Pr(x) = 1/2, Pr(z) = 3/4, Pr(!z) = 1/4";
  for (const auto& f : failed) detail += "\n  wrong: " + f;
  return {failed.empty(), detail};
}

std::vector<VarId> subset(Rng& rng, const std::vector<VarId>& from, std::size_t lo, std::size_t hi) {
  std::vector<VarId> pool = from;
  std::shuffle(pool.begin(), pool.end(), rng);
  std::size_t n = lo + testing::pick(rng, hi - lo + 1);
  pool.resize(std::min(n, pool.size()));
  std::sort(pool.begin(), pool.end());
  return pool;
}

Outcome wmc_lemmas() {
  Rng rng(77);
  std::size_t failures[4] = {0, 0, 0, 0};
  constexpr int kInstances = 1000;

  for (int i = 0; i < kInstances; ++i) {
    NodeStore s;
    std::vector<VarId> vs;
    for (int k = 0; k < 8; ++k) vs.push_back(s.new_var());

    // Independent conjunction.
    {
      auto shuffled = vs;
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      std::size_t cut = 1 + testing::pick(rng, 7);
      std::vector<VarId> a_vars(shuffled.begin(), shuffled.begin() + cut), b_vars(shuffled.begin() + cut, shuffled.end());
      std::sort(a_vars.begin(), a_vars.end());
      std::sort(b_vars.begin(), b_vars.end());
      Bdd a = testing::random_bdd(rng, s, a_vars), b = testing::random_bdd(rng, s, b_vars);
      auto w = testing::random_weights(rng, vs);
      Rational joint = s.wmc(a & b, w, vs);
      bool ok = joint == s.wmc(a, w, a_vars) * s.wmc(b, w, b_vars) && joint == testing::brute_wmc(s, a & b, w, vs);
      failures[0] += !ok;
    }
    // Mutually exclusive disjunction.
    {
      Bdd a = testing::random_bdd(rng, s, vs), c = testing::random_bdd(rng, s, vs);
      Bdd b = !a & c;
      auto w = testing::random_weights(rng, vs);
      Rational either = s.wmc(a | b, w, vs);
      bool ok = either == s.wmc(a, w, vs) + s.wmc(b, w, vs) && either == testing::brute_wmc(s, a | b, w, vs);
      failures[1] += !ok;
    }
    // Functionally dependent quantification.
    {
      std::size_t ny = 1 + testing::pick(rng, 4);
      std::vector<VarId> ys(vs.begin(), vs.begin() + static_cast<long>(ny));
      std::vector<VarId> xs(vs.begin() + static_cast<long>(ny), vs.begin() + static_cast<long>(ny + 1 + testing::pick(rng, 8 - ny)));
      Bdd a = testing::random_bdd(rng, s, ys);
      for (auto x : xs) a = a & s.apply(bdd::Op::Iff, s.var(x), testing::random_bdd(rng, s, ys));
      auto w = testing::random_weights(rng, ys);
      std::vector<VarId> all = ys;
      all.insert(all.end(), xs.begin(), xs.end());
      Rational before = s.wmc(a, w, all);
      bool ok = s.wmc(s.exists(xs, a), w, ys) == before && before == testing::brute_wmc(s, a, w, all);
      failures[2] += !ok;
    }
    // Smoothing neutrality.
    {
      std::vector<VarId> u = subset(rng, std::vector<VarId>(vs.begin(), vs.begin() + 6), 1, 6);
      Bdd a = testing::random_bdd(rng, s, u);
      auto w = testing::random_weights(rng, u);
      Rational theta(static_cast<long>(testing::pick(rng, 11)), 10);
      theta.canonicalize();
      w.set(vs[6], theta, 1 - theta);
      Rational base = s.wmc(a, w, u);
      auto with_flip = u, with_unit = u;
      with_flip.push_back(vs[6]);
      with_unit.push_back(vs[7]);
      bool ok = base == testing::brute_wmc(s, a, w, u) && s.wmc(a, w, with_flip) == base &&
                s.wmc(a, w, with_unit) == 2 * base;
      failures[3] += !ok;
    }
  }
  bool pass = failures[0] + failures[1] + failures[2] + failures[3] == 0;
  return {pass, fmt("%d instances each; failures: independent conjunction %zu, exclusive disjunction %zu, "
                    "dependent quantification %zu, smoothing %zu",
                    kInstances, failures[0], failures[1], failures[2], failures[3])};
}

Outcome chain_scaling() {
  std::vector<double> ns, nodes;
  for (std::size_t n = 10; n <= 150; n += 10) {
    ns.push_back(static_cast<double>(n));
    nodes.push_back(static_cast<double>(compile(gen::gen_chain(n)).stats.node_count));
  }
  double resid = affine_residual(ns, nodes);

  auto start = Clock::now();
  Program p = gen::gen_chain(150);
  CompiledProgram c = compile(p);
  auto r = event_prob(c, default_state(c), *expr::var(p.vars.back()));
  double ms = ms_since(start);
  bool pass = resid < 0.01 && ms < 5000 && r.value.has_value();
  return {pass, fmt("node counts %.0f..%.0f over n = 10..150, affine residual %.2e (< 1e-2); n = 150 compile+query "
                    "%.1f ms exact (< 5000 ms)",
                    nodes.front(), nodes.back(), resid, ms)};
}

Outcome path_explosion() {
  Program p = gen::gen_chain(12);
  auto event = expr::var(p.vars.back());
  std::vector<double> oracle_ms, compiled_ms;
  Rational oracle_value, compiled_value;
  for (int rep = 0; rep < 3; ++rep) {
    auto t = Clock::now();
    oracle_value = *output_marginal(p, State(domain_of(p)), *event);
    oracle_ms.push_back(ms_since(t));
  }
  for (int rep = 0; rep < 9; ++rep) {
    auto t = Clock::now();
    CompiledProgram c = compile(p);
    compiled_value = *event_prob(c, default_state(c), *event).value;
    compiled_ms.push_back(ms_since(t));
  }
  double ratio = median(oracle_ms) / median(compiled_ms);
  bool pass = ratio >= 10 && oracle_value == compiled_value;
  return {pass, fmt("chain(12): oracle %.2f ms, compile+query %.3f ms, ratio %.0fx (>= 10x), values %s", median(oracle_ms),
                    median(compiled_ms), ratio, oracle_value == compiled_value ? "equal" : "DIFFER")};
}

Outcome grid_determinism() {
  const std::uint64_t seed = gen::kDefaultSeed;
  const double dets[] = {0.0, 0.5, 0.9};
  Program programs[3];
  for (int i = 0; i < 3; ++i) programs[i] = gen::gen_grid(4, dets[i], seed);
  std::vector<double> times[3];
  for (int i = 0; i < 3; ++i) compile(programs[i]);  // warm-up
  for (int rep = 0; rep < 31; ++rep) {
    for (int i = 0; i < 3; ++i) {
      auto t = Clock::now();
      CompiledProgram c = compile(programs[i]);
      times[i].push_back(ms_since(t));
    }
  }
  double m[3] = {median(times[0]), median(times[1]), median(times[2])};
  bool ordered = m[0] > m[1] && m[1] > m[2];
  double speedup = m[0] / m[2];

  auto start = Clock::now();
  Program big = gen::gen_grid(6, 0.9, seed);
  CompiledProgram c = compile(big);
  auto r = event_prob(c, default_state(c), *expr::var(big.vars.back()));
  double big_ms = ms_since(start);

  bool pass = ordered && speedup >= 2 && big_ms < 60000 && r.value.has_value();
  return {pass, fmt("k = 4 median compile ms at 0/0.5/0.9 determinism: %.3f > %.3f > %.3f (%s), 0 vs 0.9 speedup %.1fx "
                    "(>= 2x); k = 6 at 0.9: %.1f ms (< 60000 ms)",
                    m[0], m[1], m[2], ordered ? "strictly decreasing" : "NOT decreasing", speedup, big_ms)};
}

Outcome ladder_scaling() {
  std::vector<double> ks, nodes;
  for (std::size_t k : {2, 4, 8, 16, 32}) {
    ks.push_back(static_cast<double>(k));
    nodes.push_back(static_cast<double>(compile(gen::gen_ladder(k)).stats.node_count));
  }
  double resid = affine_residual(ks, nodes);
  return {resid < 0.01, fmt("node counts %.0f/%.0f/%.0f/%.0f/%.0f for k = 2/4/8/16/32, affine residual %.2e (< 1e-2)",
                            nodes[0], nodes[1], nodes[2], nodes[3], nodes[4], resid)};
}

// Runs one random operation sequence on `s`, returning every intermediate.
// Operations that the store rejects (order-violating renames) are recorded
// as invalid handles.
std::vector<Bdd> run_ops(NodeStore& s, const std::vector<VarId>& vs, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Bdd> pool;
  for (auto v : vs) pool.push_back(s.var(v));
  pool.push_back(s.constant(true));
  auto operand = [&] {
    for (;;) {
      Bdd b = pool[testing::pick(rng, pool.size())];
      if (b.valid()) return b;
    }
  };
  for (int step = 0; step < 12; ++step) {
    switch (testing::pick(rng, 7)) {
      case 0: {
        static const bdd::Op ops[] = {bdd::Op::And, bdd::Op::Or, bdd::Op::Xor, bdd::Op::Iff, bdd::Op::Implies};
        auto op = ops[testing::pick(rng, 5)];
        Bdd a = operand(), b = operand();
        pool.push_back(s.apply(op, a, b));
        break;
      }
      case 1: {
        Bdd f = operand(), g = operand(), h = operand();
        pool.push_back(s.ite(f, g, h));
        break;
      }
      case 2: pool.push_back(s.negate(operand())); break;
      case 3: {
        auto q = subset(rng, vs, 1, 3);
        pool.push_back(s.exists(q, operand()));
        break;
      }
      case 4: {
        auto q = subset(rng, vs, 1, 3);
        Bdd a = operand(), b = operand();
        pool.push_back(s.and_exists(a, b, q));
        break;
      }
      case 5: {
        auto from = subset(rng, vs, 1, 3);
        auto to = subset(rng, vs, from.size(), from.size());
        bdd::VarMap m;
        for (std::size_t i = 0; i < from.size() && i < to.size(); ++i) m.emplace_back(from[i], to[i]);
        try {
          pool.push_back(s.rename(m, operand()));
        } catch (const bdd::OrderViolation&) {
          pool.push_back(Bdd{});
        }
        break;
      }
      default: {
        Bdd a = operand(), b = operand();
        pool.push_back(s.apply(bdd::Op::And, a, s.negate(b)));
        break;
      }
    }
  }
  return pool;
}

Outcome cache_and_canonicity() {
  std::size_t sequences = 1000, mismatched = 0, rejected = 0, canon_violations = 0;
  std::size_t distinct = 0;
  for (std::size_t i = 0; i < sequences; ++i) {
    std::size_t nvars = 3 + i % 4;  // 3..6 variables
    NodeStore cached, uncached;
    uncached.set_caching(false);
    std::vector<VarId> va, vb;
    for (std::size_t k = 0; k < nvars; ++k) {
      va.push_back(cached.new_var());
      vb.push_back(uncached.new_var());
    }
    auto a = run_ops(cached, va, i);
    auto b = run_ops(uncached, vb, i);

    // Same store, caching switched off mid-life: handles must coincide.
    cached.set_caching(false);
    auto again = run_ops(cached, va, i);
    cached.set_caching(true);

    bool same = a.size() == b.size() && a.size() == again.size();
    for (std::size_t k = 0; same && k < a.size(); ++k) {
      if (a[k].valid() != b[k].valid()) {
        same = false;
        break;
      }
      if (!a[k].valid()) {
        ++rejected;
        continue;
      }
      same = testing::truth_table(cached, a[k], va) == testing::truth_table(uncached, b[k], vb) &&
             cached.node_count(a[k]) == uncached.node_count(b[k]) && again[k] == a[k];
    }
    mismatched += !same;

    std::map<std::vector<bool>, Bdd> by_table;
    for (const auto& h : a) {
      if (!h.valid()) continue;
      auto [it, inserted] = by_table.emplace(testing::truth_table(cached, h, va), h);
      if (it->second != h) ++canon_violations;
    }
    // Distinct handles must denote distinct functions as well.
    std::map<std::uint32_t, std::vector<bool>> by_handle;
    for (const auto& [table, h] : by_table) {
      auto [it, inserted] = by_handle.emplace(h.id(), table);
      if (!inserted && it->second != table) ++canon_violations;
    }
    distinct += by_table.size();
  }
  bool pass = mismatched == 0 && canon_violations == 0;
  return {pass, fmt("%zu sequences on 3..6 variables: %zu cache on/off mismatches, %zu canonicity violations over %zu "
                    "distinct functions (%zu renames rejected identically)",
                    sequences, mismatched, canon_violations, distinct, rejected)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {"1 compiled inference equals the enumerative oracle", differential},
      {"2 reference values", paper_values},
      {"3 weighted model counting lemmas", wmc_lemmas},
      {"4 chain scaling", chain_scaling},
      {"5 path explosion contrast", path_explosion},
      {"6 grid determinism trend", grid_determinism},
      {"7 independence ladder", ladder_scaling},
      {"8 cache soundness and canonicity", cache_and_canonicity},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s  criterion %s: %s\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed, std::size(criteria));
  return failed == 0 ? 0 : 1;
}
