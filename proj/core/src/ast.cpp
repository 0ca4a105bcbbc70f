#include "dippl/ast.hpp"

#include <algorithm>
#include <unordered_set>

namespace dippl {

bool operator==(const Expr& a, const Expr& b) {
  if (&a == &b) return true;
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      overloaded{
          [&](const VarRef& x) { return x.name == std::get<VarRef>(b.node).name; },
          [&](const Const& x) { return x.value == std::get<Const>(b.node).value; },
          [&](const Or& x) {
            const auto& y = std::get<Or>(b.node);
            return *x.lhs == *y.lhs && *x.rhs == *y.rhs;
          },
          [&](const And& x) {
            const auto& y = std::get<And>(b.node);
            return *x.lhs == *y.lhs && *x.rhs == *y.rhs;
          },
          [&](const Not& x) { return *x.inner == *std::get<Not>(b.node).inner; },
      },
      a.node);
}

bool operator==(const Stmt& a, const Stmt& b) {
  if (&a == &b) return true;
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      overloaded{
          [&](const Skip&) { return true; },
          [&](const Seq& x) {
            const auto& y = std::get<Seq>(b.node);
            return *x.first == *y.first && *x.second == *y.second;
          },
          [&](const Assign& x) {
            const auto& y = std::get<Assign>(b.node);
            return x.target == y.target && *x.rhs == *y.rhs;
          },
          [&](const Flip& x) {
            const auto& y = std::get<Flip>(b.node);
            return x.target == y.target && x.theta == y.theta && x.label == y.label;
          },
          [&](const If& x) {
            const auto& y = std::get<If>(b.node);
            return *x.cond == *y.cond && *x.then_branch == *y.then_branch &&
                   *x.else_branch == *y.else_branch;
          },
          [&](const Observe& x) { return *x.cond == *std::get<Observe>(b.node).cond; },
      },
      a.node);
}

namespace expr {
ExprPtr var(std::string name) { return std::make_shared<const Expr>(Expr{VarRef{std::move(name)}}); }
ExprPtr constant(bool value) { return std::make_shared<const Expr>(Expr{Const{value}}); }
ExprPtr lor(ExprPtr lhs, ExprPtr rhs) {
  return std::make_shared<const Expr>(Expr{Or{std::move(lhs), std::move(rhs)}});
}
ExprPtr land(ExprPtr lhs, ExprPtr rhs) {
  return std::make_shared<const Expr>(Expr{And{std::move(lhs), std::move(rhs)}});
}
ExprPtr lnot(ExprPtr inner) { return std::make_shared<const Expr>(Expr{Not{std::move(inner)}}); }
}  // namespace expr

namespace stmt {
StmtPtr skip() { return std::make_shared<const Stmt>(Stmt{Skip{}}); }
StmtPtr seq(StmtPtr first, StmtPtr second) {
  return std::make_shared<const Stmt>(Stmt{Seq{std::move(first), std::move(second)}});
}
StmtPtr seq(std::vector<StmtPtr> parts) {
  if (parts.empty()) return skip();
  StmtPtr out = parts.back();
  for (auto it = parts.rbegin() + 1; it != parts.rend(); ++it) out = seq(*it, out);
  return out;
}
StmtPtr assign(std::string target, ExprPtr rhs) {
  return std::make_shared<const Stmt>(Stmt{Assign{std::move(target), std::move(rhs)}});
}
StmtPtr flip(std::string target, Rational theta, std::size_t label) {
  return std::make_shared<const Stmt>(Stmt{Flip{std::move(target), std::move(theta), label}});
}
StmtPtr if_else(ExprPtr cond, StmtPtr then_branch, StmtPtr else_branch) {
  return std::make_shared<const Stmt>(
      Stmt{If{std::move(cond), std::move(then_branch), std::move(else_branch)}});
}
StmtPtr observe(ExprPtr cond) { return std::make_shared<const Stmt>(Stmt{Observe{std::move(cond)}}); }
}  // namespace stmt

namespace {

class VarCollector {
 public:
  void add(const std::string& name) {
    if (seen_.insert(name).second) order_.push_back(name);
  }

  void visit(const Expr& e) {
    std::visit(overloaded{
                   [&](const VarRef& x) { add(x.name); },
                   [](const Const&) {},
                   [&](const Or& x) { visit(*x.lhs), visit(*x.rhs); },
                   [&](const And& x) { visit(*x.lhs), visit(*x.rhs); },
                   [&](const Not& x) { visit(*x.inner); },
               },
               e.node);
  }

  void visit(const Stmt& s) {
    std::visit(overloaded{
                   [](const Skip&) {},
                   [&](const Seq& x) { visit(*x.first), visit(*x.second); },
                   [&](const Assign& x) { add(x.target), visit(*x.rhs); },
                   [&](const Flip& x) { add(x.target); },
                   [&](const If& x) {
                     visit(*x.cond);
                     visit(*x.then_branch);
                     visit(*x.else_branch);
                   },
                   [&](const Observe& x) { visit(*x.cond); },
               },
               s.node);
  }

  std::vector<std::string> take() { return std::move(order_); }

 private:
  std::unordered_set<std::string> seen_;
  std::vector<std::string> order_;
};

StmtPtr relabel(const StmtPtr& s, std::size_t& next) {
  return std::visit(
      overloaded{
          [&](const Skip&) { return s; },
          [&](const Seq& x) {
            auto a = relabel(x.first, next);
            auto b = relabel(x.second, next);
            return stmt::seq(a, b);
          },
          [&](const Assign&) { return s; },
          [&](const Flip& x) { return stmt::flip(x.target, x.theta, next++); },
          [&](const If& x) {
            auto t = relabel(x.then_branch, next);
            auto e = relabel(x.else_branch, next);
            return stmt::if_else(x.cond, t, e);
          },
          [&](const Observe&) { return s; },
      },
      s->node);
}

void flips_into(const Stmt& s, std::vector<const Flip*>& out) {
  std::visit(overloaded{
                 [](const Skip&) {},
                 [&](const Seq& x) { flips_into(*x.first, out), flips_into(*x.second, out); },
                 [](const Assign&) {},
                 [&](const Flip& x) { out.push_back(&x); },
                 [&](const If& x) {
                   flips_into(*x.then_branch, out);
                   flips_into(*x.else_branch, out);
                 },
                 [](const Observe&) {},
             },
             s.node);
}

}  // namespace

Program make_program(StmtPtr body) {
  std::size_t next = 0;
  Program p;
  p.body = relabel(body, next);
  p.flip_count = next;
  VarCollector vc;
  vc.visit(*p.body);
  p.vars = vc.take();
  return p;
}

std::vector<std::string> expr_vars(const Expr& e) {
  VarCollector vc;
  vc.visit(e);
  return vc.take();
}

std::vector<const Flip*> collect_flips(const Stmt& s) {
  std::vector<const Flip*> out;
  flips_into(s, out);
  return out;
}

bool contains_observe(const Stmt& s) {
  return std::visit(overloaded{
                        [](const Skip&) { return false; },
                        [](const Seq& x) { return contains_observe(*x.first) || contains_observe(*x.second); },
                        [](const Assign&) { return false; },
                        [](const Flip&) { return false; },
                        [](const If& x) {
                          return contains_observe(*x.then_branch) || contains_observe(*x.else_branch);
                        },
                        [](const Observe&) { return true; },
                    },
                    s.node);
}

}  // namespace dippl
