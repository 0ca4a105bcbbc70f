#pragma once

#include "dippl/ast.hpp"
#include "dippl/bdd.hpp"
#include "dippl/oracle.hpp"

#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dippl {

/// BDD variables standing for the program state and the random choices.
///
/// Each program variable x owns three consecutive positions in the order:
/// x (input), x' (output) and x'' (scratch used while sequencing). Every
/// textual flip owns one variable. Triples follow first textual appearance
/// and each flip variable sits directly above the triple it writes.
struct VarBanks {
  struct Triple {
    bdd::VarId unprimed, primed, double_primed;
  };

  std::vector<std::string> names;  // program variables, first-appearance order
  std::vector<Triple> triples;     // parallel to names
  std::vector<bdd::VarId> flips;   // indexed by flip label
  std::vector<bdd::VarId> universe;  // unprimed, primed and flips; sorted

  /// Throws UnknownVariable.
  std::size_t index_of(std::string_view name) const;
  const Triple& of(std::string_view name) const;
  std::vector<bdd::VarId> unprimed() const;
  std::vector<bdd::VarId> primed() const;

  /// x -> x', x' -> x''
  bdd::VarMap shift_in() const;
  /// x'' -> x'
  bdd::VarMap shift_out() const;
  /// x -> x'
  bdd::VarMap to_primed() const;
};

enum class Bank { Unprimed, Primed };

/// Allocates the banks of `p` in `store` in the order described on
/// VarBanks. `store` should be fresh.
VarBanks allocate_banks(const Program& p, bdd::NodeStore& store);

struct CompileOptions {
  /// Sequence composition uses the fused conjoin-and-quantify operation
  /// instead of building the conjunction first. Results are identical.
  bool fused_and_exists = true;
  /// Attach x <=> x' frames only where needed instead of to every
  /// statement. The final formula is the same diagram either way.
  bool lazy_frames = true;
};

struct CompileStats {
  std::size_t node_count = 0;
  std::size_t peak_node_count = 0;
  std::size_t store_nodes = 0;
  double compile_ms = 0;
};

/// Weighted Boolean formula for a program. The store is shared so copies
/// remain cheap; queries add nodes to it but never change `phi`.
struct CompiledProgram {
  std::shared_ptr<bdd::NodeStore> store;
  bdd::Bdd phi;
  bdd::WeightFn weights;
  VarBanks banks;
  Program program;
  CompileStats stats;
};

/// Conjunction of x <=> x' over the program variables not in `exclude`.
bdd::Bdd gamma(bdd::NodeStore& store, const VarBanks& banks, const std::set<std::string>& exclude = {});

/// Truth-table semantics of `e` over one bank. Throws UnknownVariable.
bdd::Bdd compile_expr(bdd::NodeStore& store, const Expr& e, const VarBanks& banks, Bank bank = Bank::Unprimed);

/// Formula and weights for one statement. Flip labels must be distinct.
std::pair<bdd::Bdd, bdd::WeightFn> compile_stmt(bdd::NodeStore& store, const Stmt& s, const VarBanks& banks,
                                                const CompileOptions& options = {});

/// Cube fixing every program variable to its value in `s`. Throws
/// std::invalid_argument unless `s` covers exactly the program variables.
bdd::Bdd state_cube(bdd::NodeStore& store, const VarBanks& banks, const State& s, Bank bank);

CompiledProgram compile(const Program& p, const CompileOptions& options = {});

}  // namespace dippl
