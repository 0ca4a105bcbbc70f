#include "dippl/lang.hpp"

#include <set>

namespace dippl {

namespace {

// Must-defined analysis: a variable is defined after a statement when every
// path through it assigns or samples the variable.
class UseBeforeDef {
 public:
  std::vector<Diagnostic> run(const Stmt& body) {
    visit(body, {});
    return std::move(diags_);
  }

 private:
  using Defined = std::set<std::string>;

  void reads(const Expr& e, const Defined& defined) {
    for (const auto& v : expr_vars(e)) {
      if (defined.count(v) || !reported_.insert(v).second) continue;
      diags_.push_back({Severity::Warning, v,
                        "variable '" + v + "' may be read before it is assigned; its initial-state value is used"});
    }
  }

  Defined visit(const Stmt& s, Defined defined) {
    return std::visit(overloaded{
                          [&](const Skip&) { return defined; },
                          [&](const Seq& x) { return visit(*x.second, visit(*x.first, defined)); },
                          [&](const Assign& x) {
                            reads(*x.rhs, defined);
                            defined.insert(x.target);
                            return defined;
                          },
                          [&](const Flip& x) {
                            defined.insert(x.target);
                            return defined;
                          },
                          [&](const If& x) {
                            reads(*x.cond, defined);
                            auto t = visit(*x.then_branch, defined);
                            auto e = visit(*x.else_branch, defined);
                            Defined both;
                            for (const auto& v : t) {
                              if (e.count(v)) both.insert(v);
                            }
                            return both;
                          },
                          [&](const Observe& x) {
                            reads(*x.cond, defined);
                            return defined;
                          },
                      },
                      s.node);
  }

  std::set<std::string> reported_;
  std::vector<Diagnostic> diags_;
};

}  // namespace

std::vector<Diagnostic> validate(const Program& p) { return UseBeforeDef{}.run(*p.body); }

}  // namespace dippl
