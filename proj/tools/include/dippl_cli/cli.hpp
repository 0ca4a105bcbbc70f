#pragma once

#include "dippl/generators.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace dippl::cli {

enum ExitCode : int { kOk = 0, kInputError = 1, kInfeasible = 2, kInternal = 3 };

/// Runs the `dippl` command line. Output goes to `out`, diagnostics to
/// `err`; the return value is the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

enum class Family { Chain, Grid, Ladder };

struct BenchSpec {
  Family family = Family::Chain;
  std::size_t size = 1;
  double determinism = 0;
  std::uint64_t seed = gen::kDefaultSeed;
};

struct BenchRow {
  BenchSpec spec;
  std::size_t node_count = 0;
  double compile_ms = 0;
  double query_ms = 0;
  bool exact = true;
};

Family parse_family(std::string_view name);
std::string_view family_name(Family f);

/// `"10..150:10"`, `"5..8"`, `"4"` or a comma-separated mix of those.
std::vector<std::size_t> parse_sizes(std::string_view text);
/// Comma-separated fractions in [0, 1].
std::vector<double> parse_fractions(std::string_view text);

Program generate(const BenchSpec& spec);

/// Compiles the generated program and queries its last variable from the
/// all-false state.
BenchRow run_bench(const BenchSpec& spec, bool exact = true);

inline constexpr std::string_view kCsvHeader = "family,size,determinism,seed,nodeCount,compileMs,queryMs,mode";
std::string csv_row(const BenchRow& row);

}  // namespace dippl::cli
