#include "dippl/infer.hpp"
#include "dippl_cli/cli.hpp"

#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace dippl::cli {

Family parse_family(std::string_view name) {
  if (name == "chain") return Family::Chain;
  if (name == "grid") return Family::Grid;
  if (name == "ladder") return Family::Ladder;
  throw std::invalid_argument("unknown benchmark family '" + std::string(name) + "'");
}

std::string_view family_name(Family f) {
  switch (f) {
    case Family::Chain: return "chain";
    case Family::Grid: return "grid";
    case Family::Ladder: return "ladder";
  }
  return "?";
}

namespace {

std::size_t to_size(std::string_view s) {
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || s.empty()) {
    throw std::invalid_argument("invalid size '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    auto i = s.find(sep);
    out.push_back(s.substr(0, i));
    if (i == std::string_view::npos) break;
    s.remove_prefix(i + 1);
  }
  return out;
}

}  // namespace

std::vector<std::size_t> parse_sizes(std::string_view text) {
  std::vector<std::size_t> out;
  for (auto item : split(text, ',')) {
    auto dots = item.find("..");
    if (dots == std::string_view::npos) {
      out.push_back(to_size(item));
      continue;
    }
    std::size_t step = 1;
    auto rest = item.substr(dots + 2);
    if (auto colon = rest.find(':'); colon != std::string_view::npos) {
      step = to_size(rest.substr(colon + 1));
      rest = rest.substr(0, colon);
    }
    std::size_t lo = to_size(item.substr(0, dots)), hi = to_size(rest);
    if (step == 0 || lo > hi) throw std::invalid_argument("invalid size range '" + std::string(item) + "'");
    for (std::size_t n = lo; n <= hi; n += step) out.push_back(n);
  }
  return out;
}

std::vector<double> parse_fractions(std::string_view text) {
  std::vector<double> out;
  for (auto item : split(text, ',')) {
    std::string s(item);
    std::size_t used = 0;
    double d = -1;
    try {
      d = std::stod(s, &used);
    } catch (const std::exception&) {
    }
    if (used != s.size() || !(d >= 0 && d <= 1)) {
      throw std::invalid_argument("invalid fraction '" + s + "'");
    }
    out.push_back(d);
  }
  return out;
}

Program generate(const BenchSpec& spec) {
  switch (spec.family) {
    case Family::Chain: return gen::gen_chain(spec.size, spec.seed);
    case Family::Grid: return gen::gen_grid(spec.size, spec.determinism, spec.seed);
    case Family::Ladder: return gen::gen_ladder(spec.size, spec.seed);
  }
  throw std::invalid_argument("unknown family");
}

BenchRow run_bench(const BenchSpec& spec, bool exact) {
  Program p = generate(spec);
  CompiledProgram c = compile(p);
  auto event = expr::var(p.vars.back());
  auto r = event_prob(c, default_state(c), *event, exact ? Arithmetic::Exact : Arithmetic::Float);
  BenchRow row;
  row.spec = spec;
  row.node_count = c.stats.node_count;
  row.compile_ms = c.stats.compile_ms;
  row.query_ms = r.query_ms;
  row.exact = exact;
  return row;
}

std::string csv_row(const BenchRow& row) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s,%zu,%g,%llu,%zu,%.3f,%.3f,%s", std::string(family_name(row.spec.family)).c_str(),
                row.spec.size, row.spec.determinism, static_cast<unsigned long long>(row.spec.seed), row.node_count,
                row.compile_ms, row.query_ms, row.exact ? "exact" : "float");
  return buf;
}

}  // namespace dippl::cli
