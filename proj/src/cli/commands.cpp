#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "eqpl/calculus.hpp"
#include "eqpl/cli.hpp"
#include "eqpl/modelfinder.hpp"
#include "eqpl/semantics.hpp"

namespace eqpl::cli {

using json = nlohmann::ordered_json;

namespace {

struct Options {
  std::uint64_t seed = 1;
  double tol = 1e-9;
  std::string oracle_cmd;
  bool json = false;

  std::string formula;
  std::string term;
  std::string model;
  std::string script;
  std::string bound;
  std::string assign;
  std::string out;
  std::string category = "quantum";
  std::size_t budget = 20;
  std::size_t max_systems = 200;
  int restarts = 64;
};

// Negative verdicts that are not errors (exit 1).
struct Outcome {
  bool affirmative;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// The argument names a file (alias preamble allowed) or is the text itself.
std::string source_text(const std::string& arg, AliasTable& aliases) {
  std::error_code ec;
  const std::string text = std::filesystem::is_regular_file(arg, ec) ? read_file(arg) : arg;
  return strip_alias_preamble(text, aliases);
}

Category category_from(const std::string& name) {
  if (name == "classical") return Category::Classical;
  if (name == "real") return Category::Real;
  if (name == "complex") return Category::Complex;
  return Category::Quantum;
}

QubitSet parse_bound(const std::string& bound, const AliasTable& aliases) {
  if (bound.find_first_not_of(" \t") == std::string::npos) return {};
  const Ptr p = parse("[" + bound + "]", Category::Quantum, aliases);
  return p->set_a;
}

Tolerances tolerances(const Options& o) {
  Tolerances t;
  t.cmp = o.tol;
  return t;
}

OracleConfig oracle_config(const Options& o) {
  OracleConfig c;
  c.seed = o.seed;
  c.command = o.oracle_cmd;
  return c;
}

json pair_of(Complex z) { return json::array({z.real(), z.imag()}); }

ModelFile load_valid_model(const std::string& path) {
  ModelFile m = load_model(read_file(path));
  const auto diags = validate_structure(m.structure);
  if (!diags.empty()) {
    std::string msg = "invalid model " + path + ":";
    for (const auto& d : diags) msg += " " + std::string(diagnostic_name(d.kind)) + " (" + d.message + ")";
    throw Error(msg);
  }
  return m;
}

// ---- commands ----

Outcome cmd_parse(const Options& o, json& r) {
  AliasTable aliases;
  try {
    const Ptr p = parse(source_text(o.formula, aliases), category_from(o.category), aliases);
    r["verdict"] = "parsed";
    r["category"] = std::string(category_name(category_of(*p)));
    r["rendered"] = render(p, &aliases);
    return {true};
  } catch (const SyntaxError& e) {
    r["verdict"] = "not parsed";
    r["diagnostics"].push_back(e.what());
  } catch (const CategoryError& e) {
    r["verdict"] = "not parsed";
    r["diagnostics"].push_back(e.what());
  }
  return {false};
}

Outcome cmd_expand(const Options& o, json& r) {
  AliasTable aliases;
  const Ptr p = parse(source_text(o.formula, aliases), category_from(o.category), aliases);
  r["verdict"] = "expanded";
  r["rendered"] = render(expand(p), &aliases);
  return {true};
}

Outcome cmd_check(const Options& o, json& r) {
  ModelFile m = load_valid_model(o.model);
  const Ptr g = parse(source_text(o.formula, m.aliases), Category::Quantum, m.aliases);
  const bool ok = satisfies(m.structure, m.assignment, g, tolerances(o));
  r["verdict"] = ok ? "satisfied" : "not satisfied";
  r["formula"] = render(g, &m.aliases);
  return {ok};
}

Outcome cmd_eval(const Options& o, json& r) {
  ModelFile m;
  const bool with_model = !o.model.empty();
  if (with_model) m = load_valid_model(o.model);
  if (!o.assign.empty()) {
    const Assignment extra = parse_assignment(o.assign);
    for (const auto& [k, v] : extra.reals) m.assignment.reals[k] = v;
    for (const auto& [k, v] : extra.complexes) m.assignment.complexes[k] = v;
  }
  const Evaluator ev(with_model ? &m.structure : nullptr, m.assignment, tolerances(o));

  if (o.term.empty() && o.formula.empty()) throw Error("eval needs --term or --formula");
  if (!o.term.empty()) {
    const std::string text = source_text(o.term, m.aliases);
    Ptr t;
    try {
      t = parse(text, Category::Real, m.aliases);
    } catch (const Error&) {
      t = parse(text, Category::Complex, m.aliases);
    }
    r["verdict"] = "evaluated";
    r["term"] = render(t, &m.aliases);
    if (category_of(*t) == Category::Real) {
      r["category"] = "real";
      r["value"] = ev.real(*t);
    } else {
      r["category"] = "complex";
      r["value"] = pair_of(ev.complex(*t));
    }
    return {true};
  }

  const Ptr g = parse(source_text(o.formula, m.aliases), Category::Quantum, m.aliases);
  r["formula"] = render(g, &m.aliases);
  if (with_model || !o.assign.empty() || !is_arithmetical(*g)) {
    const bool ok = ev.satisfies(*g);
    r["verdict"] = ok ? "satisfied" : "not satisfied";
    return {ok};
  }
  // No structure and no values: ask the oracle about validity.
  const OracleVerdict v = oracle_check(g, oracle_config(o));
  std::string verdict(verdict_name(v.verdict));
  std::transform(verdict.begin(), verdict.end(), verdict.begin(), [](unsigned char c) { return std::tolower(c); });
  r["verdict"] = verdict;
  r["reason"] = v.reason;
  if (v.verdict == Verdict::Invalid) r["witness"] = format_assignment(v.witness);
  return {v.verdict == Verdict::Valid};
}

Outcome cmd_prove(const Options& o, json& r) {
  const Derivation d = parse_proof_script(read_file(o.script));
  const CheckReport rep = check_derivation(d, oracle_config(o));
  r["lines"] = d.lines.size();
  if (rep.ok) {
    r["verdict"] = "proof ok";
    r["conclusion"] = d.lines.empty() ? "" : render(d.lines.back().formula, &d.aliases);
    r["justifications"] = rep.notes;
    return {true};
  }
  r["verdict"] = "proof rejected";
  r["line"] = rep.line;
  r["kind"] = std::string(diagnostic_name(rep.kind));
  r["diagnostics"].push_back(rep.message);
  return {false};
}

Outcome cmd_dnf(const Options& o, json& r) {
  AliasTable aliases;
  const Ptr g = parse(source_text(o.formula, aliases), Category::Quantum, aliases);
  const QubitSet f = parse_bound(o.bound, aliases);
  const auto dnf = quantum_dnf(g, f, o.budget);
  r["verdict"] = "computed";
  r["atoms"] = quantum_atoms(expand(g)).size();
  r["count"] = dnf.size();
  json ds = json::array();
  for (const auto& m : dnf) ds.push_back(render(m.formula(), &aliases));
  r["disjuncts"] = ds;
  return {true};
}

Outcome cmd_solve(const Options& o, json& r) {
  AliasTable aliases;
  const Ptr g = parse(source_text(o.formula, aliases), Category::Quantum, aliases);
  const QubitSet f = parse_bound(o.bound, aliases);
  FinderConfig config;
  config.solver.seed = o.seed;
  config.solver.restarts = o.restarts;
  config.solver.oracle.command = o.oracle_cmd;
  config.max_systems = o.max_systems;
  const FindResult res = find_model(g, f, config);
  r["verdict"] = res.status == FindResult::Status::Model          ? "model found"
                 : res.status == FindResult::Status::Inconsistent ? "inconsistent"
                                                                  : "no model found";
  if (!res.reason.empty()) r["reason"] = res.reason;
  r["branches"] = res.report;
  if (res.status != FindResult::Status::Model) return {false};
  const std::string text = save_model({*res.structure, res.assignment, aliases});
  r["model"] = json::parse(text);
  if (!o.out.empty()) {
    std::ofstream out(o.out, std::ios::binary);
    if (!out) throw Error("cannot write " + o.out);
    out << text;
    r["model_file"] = o.out;
  }
  return {true};
}

Outcome cmd_validate(const Options& o, json& r) {
  const ModelFile m = load_model(read_file(o.model));
  const auto diags = validate_structure(m.structure, tolerances(o));
  r["verdict"] = diags.empty() ? "valid" : "invalid";
  for (const auto& d : diags) r["diagnostics"].push_back(std::string(diagnostic_name(d.kind)) + ": " + d.message);
  return {diags.empty()};
}

void print_text(const json& r, std::ostream& out) {
  for (const auto& [key, value] : r.items()) {
    if (value.is_string()) {
      out << key << ": " << value.get<std::string>() << "\n";
    } else if (value.is_array() && std::all_of(value.begin(), value.end(), [](const json& x) { return x.is_string(); })) {
      out << key << ":\n";
      for (const auto& x : value) out << "  - " << x.get<std::string>() << "\n";
    } else {
      out << key << ": " << value.dump() << "\n";
    }
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Workbench for exogenous quantum propositional logic", "eqpl"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--seed", o.seed, "Random seed for searches")->capture_default_str();
  app.add_option("--tol", o.tol, "Tolerance for comparing reals")->capture_default_str();
  app.add_option("--oracle-cmd", o.oracle_cmd, "External prover for arithmetic validity");
  app.add_flag("--json", o.json, "Print the report as JSON");

  auto formula = [&](CLI::App* s) { return s->add_option("--formula", o.formula, "Formula text or file"); };
  auto bound = [&](CLI::App* s) { return s->add_option("--bound", o.bound, "Qubits of F, comma separated"); };

  auto* parse_cmd = app.add_subcommand("parse", "Parse and render a formula or term");
  formula(parse_cmd)->required();
  parse_cmd->add_option("--category", o.category, "quantum, classical, real or complex")
      ->check(CLI::IsMember({"quantum", "classical", "real", "complex"}));
  auto* expand_cmd = app.add_subcommand("expand", "Replace abbreviations by their definitions");
  formula(expand_cmd)->required();
  expand_cmd->add_option("--category", o.category, "quantum, classical, real or complex")
      ->check(CLI::IsMember({"quantum", "classical", "real", "complex"}));
  auto* check_cmd = app.add_subcommand("check", "Does a model satisfy a formula?");
  check_cmd->add_option("--model", o.model, "Model file")->required();
  formula(check_cmd)->required();
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a term, or decide a formula");
  eval_cmd->add_option("--model", o.model, "Model file");
  eval_cmd->add_option("--assign", o.assign, "Values, e.g. \"x1=0.5 z1=(0,1)\"");
  auto* term_opt = eval_cmd->add_option("--term", o.term, "Real or complex term");
  formula(eval_cmd)->excludes(term_opt);
  auto* prove_cmd = app.add_subcommand("prove", "Check a derivation script");
  prove_cmd->add_option("--script", o.script, "Derivation script")->required();
  auto* dnf_cmd = app.add_subcommand("dnf", "Quantum disjunctive normal form");
  formula(dnf_cmd)->required();
  bound(dnf_cmd)->required();
  dnf_cmd->add_option("--budget", o.budget, "Maximal number of atoms")->capture_default_str();
  auto* solve_cmd = app.add_subcommand("solve", "Search for a model of a formula");
  formula(solve_cmd)->required();
  bound(solve_cmd)->required();
  solve_cmd->add_option("--out", o.out, "Write the model file here");
  solve_cmd->add_option("--restarts", o.restarts, "Solver restarts per system")->capture_default_str();
  solve_cmd->add_option("--max-systems", o.max_systems, "Solver calls overall")->capture_default_str();
  auto* validate_cmd = app.add_subcommand("validate-model", "Check a model file");
  validate_cmd->add_option("--model", o.model, "Model file")->required();
  for (auto* s : app.get_subcommands({})) s->fallthrough();

  std::vector<const char*> argv{"eqpl"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  const auto* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  json r;
  std::string echo = "eqpl";
  for (const auto& a : args) echo += " " + a;
  r["command"] = echo;
  r["verdict"] = nullptr;
  r["diagnostics"] = json::array();
  const auto start = std::chrono::steady_clock::now();
  int code;
  try {
    Outcome result{false};
    if (name == "parse") result = cmd_parse(o, r);
    else if (name == "expand") result = cmd_expand(o, r);
    else if (name == "check") result = cmd_check(o, r);
    else if (name == "eval") result = cmd_eval(o, r);
    else if (name == "prove") result = cmd_prove(o, r);
    else if (name == "dnf") result = cmd_dnf(o, r);
    else if (name == "solve") result = cmd_solve(o, r);
    else result = cmd_validate(o, r);
    code = result.affirmative ? 0 : 1;
  } catch (const std::exception& e) {
    r["verdict"] = "error";
    r["diagnostics"].push_back(e.what());
    code = 2;
  }
  r["seed"] = o.seed;
  r["timing_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  if (o.json) {
    out << r.dump(2) << "\n";
  } else {
    print_text(r, out);
  }
  return code;
}

}  // namespace eqpl::cli
