#pragma once

#include "dippl/ast.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dippl {

/// Malformed source. `line` and `column` are 1-based.
class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(const std::string& message, std::size_t line, std::size_t column);
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Well-formed source with an illegal value, e.g. flip(3/2).
class ValueError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses a complete dippl program.
///
/// Grammar (`;` separates statements, a trailing `;` is allowed):
///
///     stmt    := atom (";" atom)* ";"?
///     atom    := "skip" | ident ":=" expr | ident "~" "flip" "(" number ")"
///              | "if" expr "{" stmt "}" "else" "{" stmt "}"
///              | "observe" "(" expr ")"
///     expr    := andExpr ("||" andExpr)*
///     andExpr := notExpr ("&&" notExpr)*
///     notExpr := "!" notExpr | "true" | "false" | ident | "(" expr ")"
///     number  := decimal | integer "/" integer
///
/// `//` starts a comment running to end of line. Sequences are right-nested.
Program parse(std::string_view source);

/// Parses a standalone expression (used for queries).
ExprPtr parse_expr(std::string_view source);

/// Renders `p` back to concrete syntax; parse(print(p)) == p.
std::string print(const Program& p);
std::string print(const Stmt& s);
std::string print(const Expr& e);

enum class Severity { Warning, Error };

struct Diagnostic {
  Severity severity;
  std::string variable;
  std::string message;
};

/// Static checks. Reading a variable that is not assigned on every path
/// reaching the read is legal but reported as a warning (once per variable).
std::vector<Diagnostic> validate(const Program& p);

}  // namespace dippl
