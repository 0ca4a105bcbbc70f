#pragma once

#include "dippl/ast.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace dippl::gen {

/// SplitMix64 (Steele, Lea and Flood). Same seed, same stream on every
/// platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  /// Uniform draw from {1/10, 2/10, ..., 9/10}.
  Rational theta();

 private:
  std::uint64_t state_;
};

inline constexpr std::uint64_t kDefaultSeed = 0x5EED;

/// Markov chain over `names`: the first variable is a flip, each later one
/// branches on its predecessor between two flips. `thetas` lists the flip
/// parameters in textual order (1 + 2(n-1) of them).
Program chain_program(const std::vector<std::string>& names, const std::vector<Rational>& thetas);
/// Chain over x1..xn with parameters drawn from `seed`.
Program gen_chain(std::size_t n, std::uint64_t seed = kDefaultSeed);

/// k-by-k grid over x_i_j (row-major). Each node branches on its up and
/// left neighbours with one flip per parent valuation. floor(determinism *
/// #flips) flips, chosen by a seeded shuffle, become `x := true` or
/// `x := false`.
Program gen_grid(std::size_t k, double determinism, std::uint64_t seed = kDefaultSeed);
/// Flip count of gen_grid(k, 0, _).
std::size_t grid_flip_count(std::size_t k);

/// Independent flips, one per name.
Program ladder_program(const std::vector<std::string>& names, const std::vector<Rational>& thetas);
Program gen_ladder(std::size_t k, std::uint64_t seed = kDefaultSeed);

}  // namespace dippl::gen
