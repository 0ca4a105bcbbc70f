#include "dippl_cli/cli.hpp"

#include "dippl/infer.hpp"
#include "dippl/lang.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

namespace dippl::cli {

namespace {

using json = nlohmann::json;

struct InternalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << text;
}

State init_state(const Program& p, const std::string& text) { return State::parse(domain_of(p), text); }

struct Report {
  std::string program;
  std::string query;
  std::optional<Rational> value;
  double approx = 0;
  std::optional<Rational> numerator, denominator;
  std::optional<std::size_t> node_count;
  double compile_ms = 0;
  double query_ms = 0;
  std::string mode = "exact";
};

void emit(std::ostream& out, const Report& r, bool as_json) {
  bool infeasible = !r.value && r.mode == "exact";
  if (as_json) {
    json j;
    j["program"] = r.program;
    j["query"] = r.query;
    j["mode"] = r.mode;
    j["infeasible"] = infeasible || std::isnan(r.approx);
    if (r.value) {
      j["value"] = to_string(*r.value);
      j["decimal"] = to_decimal(*r.value);
    } else if (!std::isnan(r.approx)) {
      j["value"] = r.approx;
      j["decimal"] = std::to_string(r.approx);
    } else {
      j["value"] = nullptr;
    }
    if (r.numerator) j["numerator"] = to_string(*r.numerator);
    if (r.denominator) j["denominator"] = to_string(*r.denominator);
    if (r.node_count) j["nodeCount"] = *r.node_count;
    j["compileMs"] = r.compile_ms;
    j["queryMs"] = r.query_ms;
    out << j.dump(2) << '\n';
    return;
  }
  out << "program: " << r.program << '\n' << "query: " << r.query << '\n';
  if (r.value) {
    out << "value: " << to_string(*r.value) << " (" << to_decimal(*r.value) << ")\n";
  } else if (!std::isnan(r.approx) && r.mode == "float") {
    out << "value: " << r.approx << '\n';
  } else {
    out << "value: infeasible evidence (every execution violates an observation)\n";
  }
  if (r.node_count) out << "nodes: " << *r.node_count << '\n';
  out << "compile_ms: " << r.compile_ms << '\n' << "query_ms: " << r.query_ms << '\n' << "mode: " << r.mode << '\n';
}

int infer_cmd(std::ostream& out, const std::string& file, const std::string& query, const std::string& init,
              bool as_json, bool use_float) {
  Program p = parse(read_file(file));
  ExprPtr event = parse_expr(query);
  State from = init_state(p, init);
  CompiledProgram c = compile(p);
  auto r = event_prob(c, from, *event, use_float ? Arithmetic::Float : Arithmetic::Exact);

  Report rep;
  rep.program = file;
  rep.query = print(*event);
  rep.value = r.value;
  rep.approx = r.approx;
  rep.numerator = r.numerator;
  rep.denominator = r.denominator;
  rep.node_count = c.stats.node_count;
  rep.compile_ms = c.stats.compile_ms;
  rep.query_ms = r.query_ms;
  rep.mode = use_float ? "float" : "exact";
  emit(out, rep, as_json);
  return r.infeasible ? kInfeasible : kOk;
}

int oracle_cmd(std::ostream& out, const std::string& file, const std::string& query, const std::string& init,
               bool as_json, bool check) {
  Program p = parse(read_file(file));
  ExprPtr event = parse_expr(query);
  State from = init_state(p, init);

  auto start = std::chrono::steady_clock::now();
  auto value = output_marginal(p, from, *event);
  Report rep;
  rep.program = file;
  rep.query = print(*event);
  rep.value = value;
  rep.approx = value ? value->get_d() : std::nan("");
  rep.query_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  if (!check) {
    emit(out, rep, as_json);
    return value ? kOk : kInfeasible;
  }
  auto report = check_against_oracle(p, Query{from, Marginal{event}});
  auto show = [](const std::optional<Rational>& v) { return v ? to_string(*v) : std::string("infeasible"); };
  if (as_json) {
    json j;
    j["program"] = file;
    j["query"] = rep.query;
    j["oracle"] = show(report.oracle);
    j["compiled"] = show(report.compiled);
    j["agree"] = report.agree;
    out << j.dump(2) << '\n';
  } else {
    emit(out, rep, false);
    out << "compiled: " << show(report.compiled) << '\n'
        << "check: " << (report.agree ? "agree" : "DISAGREE") << '\n';
  }
  if (!report.agree) throw InternalError("oracle and compiled results differ");
  return value ? kOk : kInfeasible;
}

int compile_cmd(std::ostream& out, const std::string& file, const std::string& dot_path,
                const std::string& stats_path) {
  Program p = parse(read_file(file));
  CompiledProgram c = compile(p);
  json stats;
  stats["nodeCount"] = c.stats.node_count;
  stats["peakNodeCount"] = c.stats.peak_node_count;
  stats["storeNodes"] = c.stats.store_nodes;
  stats["compileMs"] = c.stats.compile_ms;
  stats["flips"] = p.flip_count;
  std::vector<std::string> order;
  for (std::size_t i = 0; i < c.store->var_count(); ++i) order.push_back(c.store->var_name(bdd::VarId{static_cast<std::uint32_t>(i)}));
  stats["varOrder"] = order;

  if (!dot_path.empty()) write_file(dot_path, c.store->to_dot(c.phi));
  if (!stats_path.empty()) write_file(stats_path, stats.dump(2) + "\n");
  if (dot_path.empty() && stats_path.empty()) out << stats.dump(2) << '\n';
  return kOk;
}

int bench_cmd(std::ostream& out, const std::string& family, const std::string& sizes, const std::string& dets,
              std::uint64_t seed, const std::string& out_path, bool use_float) {
  Family f = parse_family(family);
  auto size_list = parse_sizes(sizes);
  std::vector<double> det_list = f == Family::Grid ? parse_fractions(dets) : std::vector<double>{0};

  std::ostringstream csv;
  csv << kCsvHeader << '\n';
  for (auto n : size_list) {
    for (auto d : det_list) {
      csv << csv_row(run_bench(BenchSpec{f, n, d, seed}, !use_float)) << '\n';
    }
  }
  if (out_path.empty()) {
    out << csv.str();
  } else {
    write_file(out_path, csv.str());
  }
  return kOk;
}

int gen_cmd(std::ostream& out, const std::string& family, std::size_t size, double det, std::uint64_t seed) {
  out << print(generate(BenchSpec{parse_family(family), size, det, seed})) << '\n';
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact inference for Boolean probabilistic programs via BDD compilation", "dippl"};
  app.require_subcommand(1);

  std::string file, query, init, dot_path, stats_path, family = "chain", sizes, dets = "0", out_path;
  bool as_json = false, use_float = false, check = false;
  std::uint64_t seed = gen::kDefaultSeed;
  std::size_t size = 3;
  double det = 0;

  auto* infer = app.add_subcommand("infer", "probability of an event in the output state");
  infer->add_option("file", file, "program source")->required();
  infer->add_option("--query,-q", query, "event over program variables")->required();
  infer->add_option("--init", init, "initial state, e.g. x=true,y=false (default all false)");
  infer->add_flag("--json", as_json, "machine-readable output");
  infer->add_flag("--float", use_float, "double-precision arithmetic");

  auto* oracle = app.add_subcommand("oracle", "same query by enumerating executions");
  oracle->add_option("file", file, "program source")->required();
  oracle->add_option("--query,-q", query, "event over program variables")->required();
  oracle->add_option("--init", init, "initial state");
  oracle->add_flag("--json", as_json, "machine-readable output");
  oracle->add_flag("--check", check, "also compile and compare exactly");

  auto* comp = app.add_subcommand("compile", "build the diagram and report statistics");
  comp->add_option("file", file, "program source")->required();
  comp->add_option("--dot", dot_path, "write Graphviz output");
  comp->add_option("--stats", stats_path, "write statistics JSON");

  auto* bench = app.add_subcommand("bench", "scaling experiments as CSV");
  bench->add_option("--family", family, "chain, grid or ladder")->required();
  bench->add_option("--sizes", sizes, "e.g. 10..150:10")->required();
  bench->add_option("--det", dets, "grid determinism fractions, e.g. 0,0.5,0.9");
  bench->add_option("--seed", seed, "generator seed");
  bench->add_option("--out", out_path, "CSV path (default stdout)");
  bench->add_flag("--float", use_float, "double-precision queries");

  auto* gen = app.add_subcommand("gen", "print a generated benchmark program");
  gen->add_option("--family", family, "chain, grid or ladder")->required();
  gen->add_option("--size", size, "chain length, grid side or ladder width");
  gen->add_option("--det", det, "grid determinism fraction");
  gen->add_option("--seed", seed, "generator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*infer) return infer_cmd(out, file, query, init, as_json, use_float);
    if (*oracle) return oracle_cmd(out, file, query, init, as_json, check);
    if (*comp) return compile_cmd(out, file, dot_path, stats_path);
    if (*bench) return bench_cmd(out, family, sizes, dets, seed, out_path, use_float);
    if (*gen) return gen_cmd(out, family, size, det, seed);
  } catch (const SyntaxError& e) {
    err << "syntax error: " << e.what() << '\n';
    return kInputError;
  } catch (const ValueError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const UnknownVariable& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kInternal;
}

}  // namespace dippl::cli
