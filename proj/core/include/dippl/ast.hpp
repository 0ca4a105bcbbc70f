#pragma once

#include "dippl/rational.hpp"

#include <cstddef>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace dippl {

// Abstract syntax of dippl. Trees are immutable and share subtrees through
// shared_ptr<const T>; equality is structural.

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct VarRef {
  std::string name;
};
struct Const {
  bool value;
};
struct Or {
  ExprPtr lhs, rhs;
};
struct And {
  ExprPtr lhs, rhs;
};
struct Not {
  ExprPtr inner;
};

struct Expr {
  std::variant<VarRef, Const, Or, And, Not> node;
};

bool operator==(const Expr& a, const Expr& b);

namespace expr {
ExprPtr var(std::string name);
ExprPtr constant(bool value);
ExprPtr lor(ExprPtr lhs, ExprPtr rhs);
ExprPtr land(ExprPtr lhs, ExprPtr rhs);
ExprPtr lnot(ExprPtr inner);
}  // namespace expr

struct Stmt;
using StmtPtr = std::shared_ptr<const Stmt>;

struct Skip {};
struct Seq {
  StmtPtr first, second;
};
struct Assign {
  std::string target;
  ExprPtr rhs;
};
/// `target ~ flip(theta)`. `label` is the 0-based textual index of the flip.
struct Flip {
  std::string target;
  Rational theta;
  std::size_t label = 0;
};
struct If {
  ExprPtr cond;
  StmtPtr then_branch, else_branch;
};
struct Observe {
  ExprPtr cond;
};

struct Stmt {
  std::variant<Skip, Seq, Assign, Flip, If, Observe> node;
};

bool operator==(const Stmt& a, const Stmt& b);

namespace stmt {
StmtPtr skip();
StmtPtr seq(StmtPtr first, StmtPtr second);
/// Right-nested sequence of `parts`; a single part is returned as-is and an
/// empty list yields `skip`.
StmtPtr seq(std::vector<StmtPtr> parts);
StmtPtr assign(std::string target, ExprPtr rhs);
StmtPtr flip(std::string target, Rational theta, std::size_t label = 0);
StmtPtr if_else(ExprPtr cond, StmtPtr then_branch, StmtPtr else_branch);
StmtPtr observe(ExprPtr cond);
}  // namespace stmt

struct Program {
  StmtPtr body;
  /// Every program variable once, in order of first textual appearance.
  std::vector<std::string> vars;
  std::size_t flip_count = 0;

  friend bool operator==(const Program& a, const Program& b) {
    return *a.body == *b.body && a.vars == b.vars && a.flip_count == b.flip_count;
  }
};

/// Builds a Program around `body`: collects variables in textual order and
/// renumbers flip labels 0, 1, 2, ... in textual order.
Program make_program(StmtPtr body);

/// Variables of `e` in order of first appearance.
std::vector<std::string> expr_vars(const Expr& e);

/// All flips of `s` in textual order.
std::vector<const Flip*> collect_flips(const Stmt& s);

bool contains_observe(const Stmt& s);

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace dippl
