#include "dippl/lang.hpp"

#include <sstream>

namespace dippl {

namespace {

// Binding strength: || < && < ! < atoms.
int precedence(const Expr& e) {
  return std::visit(overloaded{
                        [](const Or&) { return 1; },
                        [](const And&) { return 2; },
                        [](const Not&) { return 3; },
                        [](const auto&) { return 4; },
                    },
                    e.node);
}

void emit(std::ostream& os, const Expr& e, int min_prec) {
  bool parens = precedence(e) < min_prec;
  if (parens) os << '(';
  std::visit(overloaded{
                 [&](const VarRef& x) { os << x.name; },
                 [&](const Const& x) { os << (x.value ? "true" : "false"); },
                 [&](const Or& x) {
                   emit(os, *x.lhs, 1);
                   os << " || ";
                   emit(os, *x.rhs, 2);
                 },
                 [&](const And& x) {
                   emit(os, *x.lhs, 2);
                   os << " && ";
                   emit(os, *x.rhs, 3);
                 },
                 [&](const Not& x) {
                   os << '!';
                   emit(os, *x.inner, 3);
                 },
             },
             e.node);
  if (parens) os << ')';
}

void indent(std::ostream& os, int depth) {
  for (int i = 0; i < depth; ++i) os << "  ";
}

void emit(std::ostream& os, const Stmt& s, int depth);

void emit_atom(std::ostream& os, const Stmt& s, int depth) {
  std::visit(overloaded{
                 [&](const Skip&) { os << "skip"; },
                 [&](const Seq&) { emit(os, s, depth); },
                 [&](const Assign& x) {
                   os << x.target << " := ";
                   emit(os, *x.rhs, 1);
                 },
                 [&](const Flip& x) { os << x.target << " ~ flip(" << to_string(x.theta) << ')'; },
                 [&](const If& x) {
                   os << "if ";
                   emit(os, *x.cond, 1);
                   os << " {\n";
                   indent(os, depth + 1);
                   emit(os, *x.then_branch, depth + 1);
                   os << '\n';
                   indent(os, depth);
                   os << "} else {\n";
                   indent(os, depth + 1);
                   emit(os, *x.else_branch, depth + 1);
                   os << '\n';
                   indent(os, depth);
                   os << '}';
                 },
                 [&](const Observe& x) {
                   os << "observe(";
                   emit(os, *x.cond, 1);
                   os << ')';
                 },
             },
             s.node);
}

void emit(std::ostream& os, const Stmt& s, int depth) {
  const Stmt* cur = &s;
  while (const auto* seq = std::get_if<Seq>(&cur->node)) {
    emit_atom(os, *seq->first, depth);
    os << ";\n";
    indent(os, depth);
    cur = seq->second.get();
  }
  emit_atom(os, *cur, depth);
}

}  // namespace

std::string print(const Expr& e) {
  std::ostringstream os;
  emit(os, e, 1);
  return os.str();
}

std::string print(const Stmt& s) {
  std::ostringstream os;
  emit(os, s, 0);
  return os.str();
}

std::string print(const Program& p) { return print(*p.body); }

}  // namespace dippl
