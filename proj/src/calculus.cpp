#include "eqpl/calculus.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

#include "logic/abstraction.hpp"
#include "logic/sat.hpp"

namespace eqpl {

using namespace ast;

bool is_tautology(const Ptr& phi, TautologyMode mode) {
  const Ptr core = expand(phi);
  const bool quantum = mode == TautologyMode::Quantum;
  if (quantum ? category_of(*core) != Category::Quantum && !is_classical(*core) : !is_classical(*core)) return false;
  detail::Tseitin t(quantum);
  const int root = t.literal(core);
  t.cnf().clauses.push_back({-root});
  return !detail::solve_sat(t.cnf());
}

namespace {

// ---- schema templates ----

bool match(const Node& p, const Ptr& t, std::map<int, Ptr>& bound) {
  if (p.kind == Kind::Meta) {
    const auto want = static_cast<Category>(p.index2);
    if (want == Category::Classical ? !is_classical(*t) : category_of(*t) != want) return false;
    auto [it, fresh] = bound.emplace(p.index, t);
    return fresh || equal(it->second, t);
  }
  if (p.kind != t->kind || p.index != t->index || p.index2 != t->index2 || p.text != t->text ||
      p.set_a != t->set_a || p.set_b != t->set_b || p.args.size() != t->args.size())
    return false;
  for (std::size_t i = 0; i < p.args.size(); ++i)
    if (!match(*p.args[i], t->args[i], bound)) return false;
  return true;
}

Ptr a1() { return meta(0, Category::Classical); }
Ptr a2() { return meta(1, Category::Classical); }
Ptr u1() { return meta(2, Category::Complex); }
Ptr u2() { return meta(3, Category::Complex); }

Ptr template_of(AxiomSchema s) {
  switch (s) {
    case AxiomSchema::Lift: return qimp(imp(a1(), a2()), qimp(a1(), a2()));
    case AxiomSchema::RefConj: return qimp(qand(a1(), a2()), conj_c(a1(), a2()));
    case AxiomSchema::IfTop: return qimp(a1(), ceq(ite(a1(), u1(), u2()), u1()));
    case AxiomSchema::IfBot: return qimp(qneg(a1()), ceq(ite(a1(), u1(), u2()), u2()));
    default: return nullptr;
  }
}

// Sugared forms are compared as written first, then through their
// definitions.
bool same_formula(const Ptr& a, const Ptr& b) { return equal(a, b) || equal(expand(a), expand(b)); }

template <typename Visit>
void walk(const Ptr& n, Visit&& visit) {
  visit(n);
  for (const auto& a : n->args) walk(a, visit);
}

void add_set(std::vector<QubitSet>& out, const QubitSet& s) {
  if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
}

std::vector<QubitSet> etg_sets(const Ptr& phi) {
  std::vector<QubitSet> out;
  for (const Ptr& root : {phi, expand(phi)})
    walk(root, [&](const Ptr& n) {
      if (n->kind == Kind::NonEtg) add_set(out, n->set_a);
      if (n->kind == Kind::CondNonEtg) {
        add_set(out, n->set_a);
        add_set(out, n->set_b);
      }
    });
  return out;
}

std::vector<QubitSet> amplitude_targets(const Ptr& phi) {
  std::vector<QubitSet> out;
  for (const Ptr& root : {phi, expand(phi)})
    walk(root, [&](const Ptr& n) {
      if (n->kind == Kind::Amp || n->kind == Kind::AmpOf || n->kind == Kind::Molecular) add_set(out, n->set_b);
    });
  return out;
}

MatchResult yes(std::string msg = {}) { return {true, ProofDiagnostic::None, std::move(msg)}; }
MatchResult no(ProofDiagnostic k, std::string msg) { return {false, k, std::move(msg)}; }

std::string set_text(const QubitSet& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::string("qb") + std::to_string(s[i]);
  return out + "}";
}

// Two-set non-entanglement schemas: try the given sets, else every pair of
// sets occurring in the formula.
MatchResult match_pair(AxiomSchema s, const Ptr& phi, const AxiomParams& params) {
  auto build = [&](const QubitSet& g1, const QubitSet& g2) -> Ptr {
    switch (s) {
      case AxiomSchema::NEtgBar: return qimp(non_etg(g2), qiff(non_etg(g1), cond_non_etg(g1, g2)));
      case AxiomSchema::NEtgUnion: return qimp(non_etg(g1), qimp(non_etg(g2), non_etg(set_union(g1, g2))));
      default: return qimp(non_etg(g1), qimp(non_etg(g2), non_etg(set_minus(g1, g2))));
    }
  };
  const bool needs_subset = s == AxiomSchema::NEtgBar;
  const std::vector<QubitSet> sets = etg_sets(phi);
  std::vector<QubitSet> c1 = params.g1 ? std::vector<QubitSet>{*params.g1} : sets;
  std::vector<QubitSet> c2 = params.g2 ? std::vector<QubitSet>{*params.g2} : sets;
  bool proviso_failed = false;
  for (const auto& g1 : c1)
    for (const auto& g2 : c2) {
      if (needs_subset && !is_subset(g1, g2)) {
        // The [G1|G2] builder would reject it; only note a literal match.
        proviso_failed = proviso_failed || (params.g1 && params.g2);
        continue;
      }
      if (same_formula(build(g1, g2), phi)) return yes();
    }
  if (proviso_failed) return no(ProofDiagnostic::ProvisoViolation, "needs G1 ⊆ G2");
  return no(ProofDiagnostic::NotAnInstance, "no sets G1, G2 make this an instance");
}

// ---- Oracle ----

MatchResult match_oracle(const Ptr& phi, const OracleConfig& config) {
  std::optional<OracleVerdict> invalid;
  std::string last_reason = "not an arithmetical formula over substituted terms";
  for (const Ptr& form : {phi, expand(phi)}) {
    const Ptr upsilon = detail::Abstraction(form).formula(form);
    if (!is_arithmetical(*upsilon)) continue;
    OracleVerdict v = oracle_check(upsilon, config);
    if (v.verdict == Verdict::Valid) return yes(v.reason + " on " + render(upsilon));
    if (v.verdict == Verdict::Invalid && !invalid) invalid = v;
    last_reason = v.reason;
  }
  if (invalid)
    return no(ProofDiagnostic::OracleInvalid,
              "the abstracted formula fails at " + format_assignment(invalid->witness));
  if (last_reason.rfind("not an arithmetical", 0) == 0) return no(ProofDiagnostic::NotAnInstance, last_reason);
  return no(ProofDiagnostic::OracleUnknown, last_reason);
}

}  // namespace

const std::vector<AxiomSchema>& all_schemas() {
  static const std::vector<AxiomSchema> all = {
      AxiomSchema::CTaut,   AxiomSchema::QTaut,   AxiomSchema::Oracle,  AxiomSchema::Lift,      AxiomSchema::RefConj,
      AxiomSchema::IfTop,   AxiomSchema::IfBot,   AxiomSchema::NEtgF,   AxiomSchema::NEtgBar,   AxiomSchema::NEtgUnion,
      AxiomSchema::NEtgDiff, AxiomSchema::Empty,  AxiomSchema::NAdm,    AxiomSchema::Unit,      AxiomSchema::Prob,
  };
  return all;
}

std::string_view schema_name(AxiomSchema s) {
  switch (s) {
    case AxiomSchema::CTaut: return "CTaut";
    case AxiomSchema::QTaut: return "QTaut";
    case AxiomSchema::Oracle: return "ORACLE";
    case AxiomSchema::Lift: return "LIFT";
    case AxiomSchema::RefConj: return "REFCONJ";
    case AxiomSchema::IfTop: return "IFTOP";
    case AxiomSchema::IfBot: return "IFBOT";
    case AxiomSchema::NEtgF: return "NETG_F";
    case AxiomSchema::NEtgBar: return "NETG_BAR";
    case AxiomSchema::NEtgUnion: return "NETG_UNION";
    case AxiomSchema::NEtgDiff: return "NETG_DIFF";
    case AxiomSchema::Empty: return "EMPTY";
    case AxiomSchema::NAdm: return "NADM";
    case AxiomSchema::Unit: return "UNIT";
    case AxiomSchema::Prob: return "PROB";
  }
  return "?";
}

std::optional<AxiomSchema> schema_from_name(std::string_view name) {
  auto upper = [](std::string_view s) {
    std::string r(s);
    for (char& c : r) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return r;
  };
  for (AxiomSchema s : all_schemas())
    if (upper(schema_name(s)) == upper(name)) return s;
  return std::nullopt;
}

std::string_view diagnostic_name(ProofDiagnostic d) {
  switch (d) {
    case ProofDiagnostic::None: return "None";
    case ProofDiagnostic::BadNumbering: return "BadNumbering";
    case ProofDiagnostic::BadCitation: return "BadCitation";
    case ProofDiagnostic::OutOfBound: return "OutOfBound";
    case ProofDiagnostic::NotAnInstance: return "NotAnInstance";
    case ProofDiagnostic::ProvisoViolation: return "ProvisoViolation";
    case ProofDiagnostic::OracleUnknown: return "OracleUnknown";
    case ProofDiagnostic::OracleInvalid: return "OracleInvalid";
    case ProofDiagnostic::NotClassical: return "NotClassical";
    case ProofDiagnostic::NotAnImplication: return "NotAnImplication";
    case ProofDiagnostic::MismatchedAntecedent: return "MismatchedAntecedent";
    case ProofDiagnostic::MismatchedConsequent: return "MismatchedConsequent";
    case ProofDiagnostic::NotAPremise: return "NotAPremise";
  }
  return "?";
}

MatchResult match_axiom(AxiomSchema schema, const Ptr& phi, const QubitSet& bound, const AxiomParams& params,
                        const OracleConfig& oracle) {
  try {
    if (!is_subset(qubits_of(phi), bound))
      return no(ProofDiagnostic::OutOfBound, "formula mentions qubits outside " + set_text(bound));
    switch (schema) {
      case AxiomSchema::CTaut:
        if (!is_classical(*phi)) return no(ProofDiagnostic::NotAnInstance, "not a classical formula");
        return is_tautology(phi, TautologyMode::Classical) ? yes()
                                                           : no(ProofDiagnostic::NotAnInstance, "not a classical tautology");
      case AxiomSchema::QTaut:
        return is_tautology(phi, TautologyMode::Quantum) ? yes()
                                                         : no(ProofDiagnostic::NotAnInstance, "not a quantum tautology");
      case AxiomSchema::Oracle: return match_oracle(phi, oracle);
      case AxiomSchema::Lift:
      case AxiomSchema::RefConj:
      case AxiomSchema::IfTop:
      case AxiomSchema::IfBot: {
        std::map<int, Ptr> binding;
        if (match(*template_of(schema), phi, binding)) return yes();
        binding.clear();
        if (match(*expand(template_of(schema)), expand(phi), binding)) return yes();
        return no(ProofDiagnostic::NotAnInstance, "does not have the shape " + render(template_of(schema)));
      }
      case AxiomSchema::NEtgF:
        return same_formula(non_etg(bound), phi) ? yes()
                                                 : no(ProofDiagnostic::NotAnInstance, "expected [F] for F = " + set_text(bound));
      case AxiomSchema::NEtgBar:
      case AxiomSchema::NEtgUnion:
      case AxiomSchema::NEtgDiff: return match_pair(schema, phi, params);
      case AxiomSchema::Empty:
        return same_formula(ceq(amp({}, {}), complex_const(1)), phi)
                   ? yes()
                   : no(ProofDiagnostic::NotAnInstance, "expected (amp{}{} = 1)");
      case AxiomSchema::NAdm: {
        if (params.g1 && !is_subset(*params.g1, bound)) return no(ProofDiagnostic::ProvisoViolation, "needs A ⊆ F");
        auto candidates = params.g1 ? std::vector<QubitSet>{*params.g1} : amplitude_targets(phi);
        for (const auto& a : candidates)
          if (is_subset(a, bound) && same_formula(qimp(neg(molecular(bound, a)), ceq(amp(bound, a), complex_const(0))), phi))
            return yes();
        return no(ProofDiagnostic::NotAnInstance, "expected ((~ mol{F}{A}) ==> (amp{F}{A} = 0)) for F = " + set_text(bound));
      }
      case AxiomSchema::Unit: {
        auto candidates = params.g1 ? std::vector<QubitSet>{*params.g1} : etg_sets(phi);
        for (const auto& g : candidates)
          if (same_formula(qimp(non_etg(g), eq(sumsq(g, top()), num(1))), phi)) return yes();
        return no(ProofDiagnostic::NotAnInstance, "expected ([G] ==> (sumsq{G}[top] = 1))");
      }
      case AxiomSchema::Prob: {
        std::vector<Ptr> candidates;
        if (params.alpha) {
          candidates.push_back(params.alpha);
        } else {
          walk(phi, [&](const Ptr& n) {
            if (n->kind == Kind::Prob) candidates.push_back(n->args[0]);
          });
        }
        for (const auto& alpha : candidates) {
          if (!is_subset(qubits_of(alpha), bound)) return no(ProofDiagnostic::ProvisoViolation, "needs QB(alpha) ⊆ F");
          if (same_formula(eq(prob(alpha), sumsq(bound, alpha)), phi)) return yes();
        }
        return no(ProofDiagnostic::NotAnInstance, "expected (Pr(alpha) = sumsq{F}[alpha]) for F = " + set_text(bound));
      }
    }
  } catch (const ProvisoViolation& e) {
    return no(ProofDiagnostic::ProvisoViolation, e.what());
  } catch (const Error& e) {
    return no(ProofDiagnostic::NotAnInstance, e.what());
  }
  return no(ProofDiagnostic::NotAnInstance, "unknown schema");
}

CheckReport check_derivation(const Derivation& d, const OracleConfig& oracle) {
  CheckReport report;
  auto fail = [&](const DerivationLine& line, ProofDiagnostic kind, std::string msg) {
    report.ok = false;
    report.line = line.index;
    report.kind = kind;
    report.message = std::move(msg);
    return report;
  };
  for (std::size_t k = 0; k < d.lines.size(); ++k) {
    const DerivationLine& line = d.lines[k];
    if (line.index != static_cast<int>(k) + 1)
      return fail(line, ProofDiagnostic::BadNumbering, "expected line number " + std::to_string(k + 1));
    if (!line.formula) return fail(line, ProofDiagnostic::NotAnInstance, "missing formula");
    if (!is_subset(qubits_of(line.formula), d.bound))
      return fail(line, ProofDiagnostic::OutOfBound, "formula mentions qubits outside " + set_text(d.bound));
    const Justification& j = line.just;
    switch (j.rule) {
      case Justification::Rule::Premise: {
        bool found = false;
        for (const auto& p : d.premises) found = found || equal(p, line.formula);
        if (!found) return fail(line, ProofDiagnostic::NotAPremise, "not among the premises");
        report.notes.push_back("premise");
        break;
      }
      case Justification::Rule::Axiom: {
        MatchResult m = match_axiom(j.schema, line.formula, d.bound, j.params, oracle);
        if (!m.ok) return fail(line, m.kind, std::string(schema_name(j.schema)) + ": " + m.message);
        report.notes.push_back(std::string(schema_name(j.schema)) + (m.message.empty() ? "" : " (" + m.message + ")"));
        break;
      }
      case Justification::Rule::CMP:
      case Justification::Rule::QMP: {
        const bool classical = j.rule == Justification::Rule::CMP;
        const char* rule = classical ? "CMP" : "QMP";
        for (int c : {j.i, j.j})
          if (c < 1 || c >= line.index)
            return fail(line, ProofDiagnostic::BadCitation, std::string(rule) + " cites line " + std::to_string(c) +
                                                                ", which is not an earlier line");
        const Ptr& antecedent = d.lines[j.i - 1].formula;
        const Ptr& implication = d.lines[j.j - 1].formula;
        if (classical && (!is_classical(*antecedent) || !is_classical(*implication)))
          return fail(line, ProofDiagnostic::NotClassical, "CMP needs classical premises");
        const Ptr core = expand(implication);
        if (core->kind != (classical ? Kind::Imp : Kind::QImp))
          return fail(line, ProofDiagnostic::NotAnImplication,
                      "line " + std::to_string(j.j) + " is not a " + (classical ? "classical" : "quantum") + " implication");
        if (!equal(core->args[0], expand(antecedent)))
          return fail(line, ProofDiagnostic::MismatchedAntecedent,
                      "line " + std::to_string(j.i) + " is not the antecedent of line " + std::to_string(j.j));
        if (!equal(core->args[1], expand(line.formula)))
          return fail(line, ProofDiagnostic::MismatchedConsequent,
                      "the formula is not the consequent of line " + std::to_string(j.j));
        report.notes.push_back(std::string(rule) + ":" + std::to_string(j.i) + "," + std::to_string(j.j));
        break;
      }
    }
  }
  report.ok = true;
  return report;
}

// ---- scripts ----

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

QubitSet parse_qubits(const std::string& text, const AliasTable& aliases, int line) {
  try {
    Ptr n = parse("[" + text + "]", Category::Quantum, aliases);
    return n->set_a;
  } catch (const Error& e) {
    throw SyntaxError("bad qubit list '" + text + "': " + e.what(), line, 1);
  }
}

// Position of the last ';' outside brackets, or npos.
std::size_t last_top_level_semicolon(const std::string& s) {
  int depth = 0;
  std::size_t pos = std::string::npos;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (c == '(' || c == '[' || c == '{') ++depth;
    if (c == ')' || c == ']' || c == '}') --depth;
    if (c == ';' && depth == 0) pos = i;
  }
  return pos;
}

Justification parse_justification(const std::string& text, const AliasTable& aliases, int line) {
  Justification j;
  std::string name = text, args;
  bool has_args = false;
  if (auto p = text.find('('); p != std::string::npos) {
    if (text.back() != ')') throw SyntaxError("unbalanced justification '" + text + "'", line, 1);
    name = trim(text.substr(0, p));
    args = text.substr(p + 1, text.size() - p - 2);
    has_args = true;
  } else if (auto c = text.find(':'); c != std::string::npos) {  // QMP:1,2
    name = trim(text.substr(0, c));
    args = text.substr(c + 1);
    has_args = true;
  }
  std::string upper = name;
  for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));

  if (upper == "PREMISE") return j;
  if (upper == "CMP" || upper == "QMP") {
    j.rule = upper == "CMP" ? Justification::Rule::CMP : Justification::Rule::QMP;
    const auto comma = args.find(',');
    if (!has_args || comma == std::string::npos) throw SyntaxError(upper + " needs two line numbers", line, 1);
    try {
      j.i = std::stoi(args.substr(0, comma));
      j.j = std::stoi(args.substr(comma + 1));
    } catch (const std::exception&) {
      throw SyntaxError("bad line numbers in '" + text + "'", line, 1);
    }
    return j;
  }
  auto schema = schema_from_name(name);
  if (!schema) throw SyntaxError("unknown justification '" + name + "'", line, 1);
  j.rule = Justification::Rule::Axiom;
  j.schema = *schema;
  if (!has_args) return j;
  switch (*schema) {
    case AxiomSchema::NEtgBar:
    case AxiomSchema::NEtgUnion:
    case AxiomSchema::NEtgDiff: {
      const auto semi = args.find(';');
      if (semi == std::string::npos) throw SyntaxError(name + " needs two qubit sets G1;G2", line, 1);
      j.params.g1 = parse_qubits(args.substr(0, semi), aliases, line);
      j.params.g2 = parse_qubits(args.substr(semi + 1), aliases, line);
      break;
    }
    case AxiomSchema::NAdm:
    case AxiomSchema::Unit: j.params.g1 = parse_qubits(args, aliases, line); break;
    case AxiomSchema::Prob:
      try {
        j.params.alpha = parse(args, Category::Classical, aliases);
      } catch (const Error& e) {
        throw SyntaxError(std::string("bad PROB parameter: ") + e.what(), line, 1);
      }
      break;
    default: throw SyntaxError(name + " takes no parameters", line, 1);
  }
  return j;
}

std::string qubit_list(const QubitSet& s, const AliasTable& aliases) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += aliases.name_of(s[i]).value_or("qb" + std::to_string(s[i]));
  }
  return out;
}

}  // namespace

Derivation parse_proof_script(std::string_view text) {
  Derivation d;
  bool have_bound = false;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("alias", 0) == 0) {
      try {
        if (!trim(strip_alias_preamble(line + "\n", d.aliases)).empty()) throw Error("bad alias line");
      } catch (const Error& e) {
        throw SyntaxError(e.what(), line_no, 1);
      }
      continue;
    }
    if (line.rfind("bound", 0) == 0) {
      const auto eqpos = line.find('=');
      if (eqpos == std::string::npos) throw SyntaxError("expected 'bound F = qubits'", line_no, 1);
      d.bound = parse_qubits(line.substr(eqpos + 1), d.aliases, line_no);
      have_bound = true;
      continue;
    }
    std::size_t digits = 0;
    while (digits < line.size() && std::isdigit(static_cast<unsigned char>(line[digits]))) ++digits;
    if (digits == 0 || digits >= line.size() || line[digits] != '.')
      throw SyntaxError("expected 'N. formula ; JUSTIFICATION'", line_no, 1);
    if (!have_bound) throw SyntaxError("derivation line before the 'bound' header", line_no, 1);
    const std::string body = line.substr(digits + 1);
    const auto semi = last_top_level_semicolon(body);
    if (semi == std::string::npos) throw SyntaxError("missing '; JUSTIFICATION'", line_no, static_cast<int>(line.size()));
    DerivationLine dl;
    dl.index = std::stoi(line.substr(0, digits));
    dl.source_line = line_no;
    try {
      dl.formula = parse(body.substr(0, semi), Category::Quantum, d.aliases);
    } catch (const SyntaxError& e) {
      throw SyntaxError(std::string("in formula: ") + e.what(), line_no, static_cast<int>(digits) + 1 + e.column());
    } catch (const Error& e) {
      throw SyntaxError(std::string("in formula: ") + e.what(), line_no, static_cast<int>(digits) + 2);
    }
    dl.just = parse_justification(trim(body.substr(semi + 1)), d.aliases, line_no);
    if (dl.just.rule == Justification::Rule::Premise) d.premises.push_back(dl.formula);
    d.lines.push_back(std::move(dl));
  }
  if (!have_bound) throw SyntaxError("missing 'bound F = ...' header", line_no, 1);
  return d;
}

std::string render_proof_script(const Derivation& d) {
  std::string out;
  for (const auto& [name, q] : d.aliases.entries()) out += "alias " + name + " = qb" + std::to_string(q) + "\n";
  out += "bound F = " + qubit_list(d.bound, d.aliases) + "\n";
  for (const auto& line : d.lines) {
    out += std::to_string(line.index) + ". " + render(line.formula, &d.aliases) + " ; ";
    const Justification& j = line.just;
    switch (j.rule) {
      case Justification::Rule::Premise: out += "PREMISE"; break;
      case Justification::Rule::CMP:
      case Justification::Rule::QMP:
        out += std::string(j.rule == Justification::Rule::CMP ? "CMP" : "QMP") + "(" + std::to_string(j.i) + "," +
               std::to_string(j.j) + ")";
        break;
      case Justification::Rule::Axiom: {
        out += schema_name(j.schema);
        const auto& p = j.params;
        if (p.g1 && p.g2)
          out += "(" + qubit_list(*p.g1, d.aliases) + ";" + qubit_list(*p.g2, d.aliases) + ")";
        else if (p.g1)
          out += "(" + qubit_list(*p.g1, d.aliases) + ")";
        else if (p.alpha)
          out += "(" + render(p.alpha, &d.aliases) + ")";
        break;
      }
    }
    out += "\n";
  }
  return out;
}

// ---- theorem corpus ----

namespace {

Justification axiom(AxiomSchema s, AxiomParams p = {}) {
  Justification j;
  j.rule = Justification::Rule::Axiom;
  j.schema = s;
  j.params = std::move(p);
  return j;
}

Justification mp(Justification::Rule r, int i, int k) {
  Justification j;
  j.rule = r;
  j.i = i;
  j.j = k;
  return j;
}

std::string punit_script(const QubitSet& f) {
  Derivation d;
  d.bound = f;
  const Ptr s = sumsq(f, top());
  const Ptr unit = eq(s, num(1)), goal = eq(prob(top()), num(1)), pr = eq(prob(top()), s);
  auto add = [&](Ptr phi, Justification j) {
    d.lines.push_back({static_cast<int>(d.lines.size()) + 1, std::move(phi), std::move(j), 0});
  };
  add(non_etg(f), axiom(AxiomSchema::NEtgF));
  add(qimp(non_etg(f), unit), axiom(AxiomSchema::Unit, {f, std::nullopt, nullptr}));
  add(unit, mp(Justification::Rule::QMP, 1, 2));
  add(pr, axiom(AxiomSchema::Prob, {std::nullopt, std::nullopt, top()}));
  add(qimp(pr, qimp(unit, goal)), axiom(AxiomSchema::Oracle));
  add(qimp(unit, goal), mp(Justification::Rule::QMP, 4, 5));
  add(goal, mp(Justification::Rule::QMP, 3, 6));
  return render_proof_script(d);
}

}  // namespace

std::string cmp_from_qmp_script(const Ptr& alpha1, const Ptr& alpha2, const QubitSet& bound) {
  Derivation d;
  d.bound = bound;
  auto add = [&](Ptr phi, Justification j) {
    d.lines.push_back({static_cast<int>(d.lines.size()) + 1, std::move(phi), std::move(j), 0});
  };
  add(alpha1, {});
  add(imp(alpha1, alpha2), {});
  add(qimp(imp(alpha1, alpha2), qimp(alpha1, alpha2)), axiom(AxiomSchema::Lift));
  add(qimp(alpha1, alpha2), mp(Justification::Rule::QMP, 2, 3));
  add(alpha2, mp(Justification::Rule::QMP, 1, 4));
  return render_proof_script(d);
}

const std::vector<Theorem>& theorem_corpus() {
  using P = TheoremParams;
  static const std::vector<Theorem> corpus = [] {
    std::vector<Theorem> t;
    auto add = [&](std::string name, std::string statement, std::function<Ptr(const P&)> f, bool block_union = false) {
      t.push_back({std::move(name), std::move(statement), block_union, std::move(f), nullptr});
    };
    add("PUnit", "(Pr(top) = 1)", [](const P&) { return eq(prob(top()), num(1)); });
    t.back().derivation = punit_script;
    add("NEtgCap", "([G1] ==> ([G2] ==> [G1 ∩ G2]))", [](const P& p) {
      return qimp(non_etg(p.g1), qimp(non_etg(p.g2), non_etg(set_intersection(p.g1, p.g2))));
    });
    add("AAdd", "(|a1 \\/ a2>_G + |a1 /\\ a2>_G) = (|a1>_G + |a2>_G)", [](const P& p) {
      return vector_eq(vsum(amp_vector(p.g, disj_c(p.alpha1, p.alpha2)), amp_vector(p.g, conj_c(p.alpha1, p.alpha2))),
                       vsum(amp_vector(p.g, p.alpha1), amp_vector(p.g, p.alpha2)));
    });
    add("AMon", "((a1 -> a2) ==> (|a1>_G ⊆ |a2>_G))", [](const P& p) {
      return qimp(imp(p.alpha1, p.alpha2), vector_subset(amp_vector(p.g, p.alpha1), amp_vector(p.g, p.alpha2)));
    });
    add("ASoE", "((a1 <-> a2) ==> (|a1>_G = |a2>_G))", [](const P& p) {
      return qimp(iff_c(p.alpha1, p.alpha2), vector_eq(amp_vector(p.g, p.alpha1), amp_vector(p.g, p.alpha2)));
    });
    add("ANec", "(a ==> (|a>_G = |top>_G))", [](const P& p) {
      return qimp(p.alpha1, vector_eq(amp_vector(p.g, p.alpha1), amp_vector(p.g, top())));
    });
    add(
        "AMExc", "((|a>_G + |~ a>_G) = |top>_G)",
        [](const P& p) {
          return vector_eq(vsum(amp_vector(p.g, p.alpha1), amp_vector(p.g, neg(p.alpha1))), amp_vector(p.g, top()));
        },
        true);
    add("PAdd", "((Pr(a1 \\/ a2) + Pr(a1 /\\ a2)) = (Pr(a1) + Pr(a2)))", [](const P& p) {
      return eq(radd(prob(disj_c(p.alpha1, p.alpha2)), prob(conj_c(p.alpha1, p.alpha2))),
                radd(prob(p.alpha1), prob(p.alpha2)));
    });
    add("Meas", "(poss{G}(mol{G}{A} : u) ==> (Pr(mol{G}{A}) = |u|^2))", [](const P& p) {
      return qimp(poss(p.g, {{molecular(p.g, p.a), p.u1}}), eq(prob(molecular(p.g, p.a)), rmul(abs(p.u1), abs(p.u1))));
    });
    add("PMon", "((a1 -> a2) ==> (Pr(a1) <= Pr(a2)))", [](const P& p) {
      return qimp(imp(p.alpha1, p.alpha2), leq(prob(p.alpha1), prob(p.alpha2)));
    });
    add("QNorm", "(poss{G}((a1 \\/ a2) : u) <=> (poss{G}(a1 : u) || poss{G}(a2 : u)))", [](const P& p) {
      return qiff(poss(p.g, {{disj_c(p.alpha1, p.alpha2), p.u1}}),
                  qor(poss(p.g, {{p.alpha1, p.u1}}), poss(p.g, {{p.alpha2, p.u1}})));
    });
    add("QMon", "((a1 -> a2) ==> (poss{G}(a1 : u) ==> poss{G}(a2 : u)))", [](const P& p) {
      return qimp(imp(p.alpha1, p.alpha2), qimp(poss(p.g, {{p.alpha1, p.u1}}), poss(p.g, {{p.alpha2, p.u1}})));
    });
    add("QCong", "((u1 = u2) ==> (poss{G}(a : u1) ==> poss{G}(a : u2)))", [](const P& p) {
      return qimp(ceq(p.u1, p.u2), qimp(poss(p.g, {{p.alpha1, p.u1}}), poss(p.g, {{p.alpha1, p.u2}})));
    });
    add("PNec", "(a ==> box(a))", [](const P& p) { return qimp(p.alpha1, box(p.alpha1)); });
    add("PNorm", "(box(a1 -> a2) ==> (box(a1) ==> box(a2)))", [](const P& p) {
      return qimp(box(imp(p.alpha1, p.alpha2)), qimp(box(p.alpha1), box(p.alpha2)));
    });
    return t;
  }();
  return corpus;
}

}  // namespace eqpl
