#include "dippl/generators.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace dippl::gen {

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Rational SplitMix64::theta() {
  Rational r(static_cast<long>(1 + next() % 9), 10);
  r.canonicalize();
  return r;
}

Program chain_program(const std::vector<std::string>& names, const std::vector<Rational>& thetas) {
  if (names.empty()) throw std::invalid_argument("chain needs at least one variable");
  if (thetas.size() != 2 * names.size() - 1) throw std::invalid_argument("chain needs 2n-1 parameters");
  std::vector<StmtPtr> parts{stmt::flip(names[0], thetas[0])};
  for (std::size_t i = 1; i < names.size(); ++i) {
    parts.push_back(stmt::if_else(expr::var(names[i - 1]), stmt::flip(names[i], thetas[2 * i - 1]),
                                  stmt::flip(names[i], thetas[2 * i])));
  }
  return make_program(stmt::seq(std::move(parts)));
}

Program gen_chain(std::size_t n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<std::string> names;
  std::vector<Rational> thetas;
  for (std::size_t i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
  for (std::size_t i = 0; i + 1 < 2 * n; ++i) thetas.push_back(rng.theta());
  return chain_program(names, thetas);
}

std::size_t grid_flip_count(std::size_t k) {
  if (k == 0) return 0;
  return 1 + 2 * 2 * (k - 1) + 4 * (k - 1) * (k - 1);
}

Program gen_grid(std::size_t k, double determinism, std::uint64_t seed) {
  if (k == 0) throw std::invalid_argument("grid side must be positive");
  if (!(determinism >= 0 && determinism <= 1)) throw std::invalid_argument("determinism must lie in [0, 1]");
  SplitMix64 rng(seed);
  const std::size_t total = grid_flip_count(k);

  std::vector<Rational> thetas;
  for (std::size_t i = 0; i < total; ++i) thetas.push_back(rng.theta());

  std::vector<std::size_t> order(total);
  for (std::size_t i = 0; i < total; ++i) order[i] = i;
  for (std::size_t i = total; i > 1; --i) std::swap(order[i - 1], order[rng.next() % i]);
  auto replaced = static_cast<std::size_t>(std::floor(determinism * static_cast<double>(total) + 1e-9));
  std::vector<int> constant(total, -1);
  for (std::size_t i = 0; i < replaced; ++i) constant[order[i]] = static_cast<int>(rng.next() & 1U);

  auto name = [](std::size_t i, std::size_t j) { return "x_" + std::to_string(i) + "_" + std::to_string(j); };
  std::size_t label = 0;
  auto leaf = [&](const std::string& target) {
    std::size_t l = label++;
    if (constant[l] >= 0) return stmt::assign(target, expr::constant(constant[l] == 1));
    return stmt::flip(target, thetas[l]);
  };

  std::vector<StmtPtr> parts;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      std::vector<std::string> parents;
      if (i > 0) parents.push_back(name(i - 1, j));
      if (j > 0) parents.push_back(name(i, j - 1));
      std::string target = name(i, j);
      std::function<StmtPtr(std::size_t)> cascade = [&](std::size_t depth) -> StmtPtr {
        if (depth == parents.size()) return leaf(target);
        auto then_branch = cascade(depth + 1);
        auto else_branch = cascade(depth + 1);
        return stmt::if_else(expr::var(parents[depth]), then_branch, else_branch);
      };
      parts.push_back(cascade(0));
    }
  }
  return make_program(stmt::seq(std::move(parts)));
}

Program ladder_program(const std::vector<std::string>& names, const std::vector<Rational>& thetas) {
  if (names.size() != thetas.size()) throw std::invalid_argument("ladder needs one parameter per variable");
  std::vector<StmtPtr> parts;
  for (std::size_t i = 0; i < names.size(); ++i) parts.push_back(stmt::flip(names[i], thetas[i]));
  return make_program(stmt::seq(std::move(parts)));
}

Program gen_ladder(std::size_t k, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<std::string> names;
  std::vector<Rational> thetas;
  for (std::size_t i = 1; i <= k; ++i) {
    names.push_back("x" + std::to_string(i));
    thetas.push_back(rng.theta());
  }
  return ladder_program(names, thetas);
}

}  // namespace dippl::gen
