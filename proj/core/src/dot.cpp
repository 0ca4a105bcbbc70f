#include "dippl/bdd.hpp"

#include <sstream>
#include <unordered_set>

namespace dippl::bdd {

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string NodeStore::to_dot(Bdd a, const std::function<std::string(VarId)>& names) const {
  check(a);
  std::ostringstream os;
  os << "digraph bdd {\n";
  os << "  n0 [label=\"F\", shape=box];\n";
  os << "  n1 [label=\"T\", shape=box];\n";
  std::unordered_set<std::uint32_t> seen;
  std::vector<std::uint32_t> stack{a.id_};
  std::ostringstream edges;
  while (!stack.empty()) {
    auto id = stack.back();
    stack.pop_back();
    if (id <= Bdd::kTrue || !seen.insert(id).second) continue;
    const Node& n = node(id);
    std::string label = names ? names(VarId{n.var}) : var_names_[n.var];
    os << "  n" << id << " [label=\"" << escape(label) << "\", shape=circle];\n";
    edges << "  n" << id << " -> n" << n.lo << " [style=dashed];\n";
    edges << "  n" << id << " -> n" << n.hi << ";\n";
    stack.push_back(n.lo);
    stack.push_back(n.hi);
  }
  os << edges.str() << "}\n";
  return os.str();
}

}  // namespace dippl::bdd
