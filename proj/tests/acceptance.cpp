// Acceptance run: one PASS/FAIL line per criterion; exit status 1 if any fails.

#include <array>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "eqpl/calculus.hpp"
#include "eqpl/cli.hpp"
#include "eqpl/modelfinder.hpp"
#include "eqpl/semantics.hpp"
#include "support/axiom_instances.hpp"
#include "support/fixtures.hpp"
#include "support/rank_oracle.hpp"
#include "support/random_structure.hpp"

using namespace eqpl;
using namespace eqpl::ast;

namespace {

const std::string kFixtures = EQPL_FIXTURES_DIR;

std::string read_fixture(const std::string& name) {
  std::ifstream in(kFixtures + "/" + name);
  if (!in) throw Error("missing fixture " + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Ptr q(std::string_view text, const AliasTable& t = {}) { return parse(text, Category::Quantum, t); }

struct Outcome {
  bool pass;
  std::string detail;
};

int cli_code(const std::vector<std::string>& args, nlohmann::json* report = nullptr) {
  std::vector<std::string> full{"--json"};
  full.insert(full.end(), args.begin(), args.end());
  std::ostringstream out, err;
  const int code = cli::run(full, out, err);
  if (report) *report = nlohmann::json::parse(out.str());
  return code;
}

// ---- 1 ----
Outcome cat_fixture() {
  const std::string model = kFixtures + "/cat.model.json";
  int satisfied = 0;
  for (const auto& line : testing::cat_assertions())
    if (cli_code({"check", "--model", model, "--formula", line}) == 0) ++satisfied;
  nlohmann::json r;
  cli_code({"eval", "--model", model, "--term", "Pr(cata)"}, &r);
  const double pr = r["value"].get<double>();
  std::ostringstream d;
  d << satisfied << "/6 assertions satisfied, Pr(cata) = " << pr;
  return {satisfied == 6 && std::abs(pr - 1.0 / 3) <= 1e-9, d.str()};
}

// ---- 2 ----
Outcome measurement() {
  // a1|00 w1> + a2|01 w2> + a3|01 w3> + a4|10 w4>, rational amplitudes.
  const std::vector<std::array<Complex, 4>> cases = {
      {Complex(3, 0) / 5.0, Complex(0, 12) / 25.0, Complex(-16, 0) / 25.0, 0.0},
      {0.5, 0.5, Complex(0, -0.5), -0.5},
      {0.0, Complex(3, 4) / 13.0, Complex(0, 12) / 13.0, 0.0},
      {0.6, 0.0, 0.0, Complex(0, 0.8)}};
  double worst = 0;
  for (const auto& a : cases) {
    QuantumStructure w;
    w.frame = {0, 1, 2, 3};
    for (Mask v = 0; v < 16; ++v) w.admissible.push_back(v);
    w.partition = {{0, 1, 2, 3}};
    w.blocks = {make_vector({0, 1, 2, 3}, {{parse_bitstring("0000"), a[0]},
                                           {parse_bitstring("0110"), a[1]},
                                           {parse_bitstring("0101"), a[2]},
                                           {parse_bitstring("1011"), a[3]}})};
    const double expected = std::norm(a[1]) + std::norm(a[2]);
    worst = std::max(worst, std::abs(measure(w, {0, 1}, {parse_bitstring("01")}) - expected));
    worst = std::max(worst, std::abs(denote_real(parse("Pr((~ qb0 /\\ qb1))", Category::Real), w, {}) - expected));
  }
  std::ostringstream d;
  d << cases.size() << " states, max error " << worst;
  return {worst <= 1e-12, d.str()};
}

// ---- 3 ----
Outcome proof_checker() {
  const std::string script = read_fixture("punit.proof");
  const bool accepted = check_derivation(parse_proof_script(script)).ok;
  // Replace one numbered line.
  auto mutate = [&](int n, const std::string& replacement) {
    std::istringstream in(script);
    std::string line, out;
    while (std::getline(in, line)) {
      if (line.rfind(std::to_string(n) + ". ", 0) == 0) line = replacement;
      out += line + "\n";
    }
    return out;
  };
  const std::vector<std::pair<int, std::string>> mutations = {
      {1, "1. [qb0,qb1] ; UNIT(qb0,qb1)"},
      {2, "2. ([qb0,qb1] ==> (sumsq{qb0,qb1}[top] = 1)) ; PROB(top)"},
      {3, "3. (sumsq{qb0,qb1}[top] = 1) ; QMP(2,1)"},
      {4, "4. (Pr(top) = sumsq{qb0,qb1}[qb0]) ; PROB(top)"},
      {5, "5. ((Pr(top) = sumsq{qb0,qb1}[top]) ==> ((sumsq{qb0,qb1}[top] = 1) ==> (Pr(top) = 2))) ; ORACLE"},
      {6, "6. ((sumsq{qb0,qb1}[top] = 1) ==> (Pr(top) = 1)) ; QMP(4,4)"},
      {7, "7. (Pr(top) = 1) ; QMP(3,5)"},
  };
  int rejected = 0;
  for (const auto& [n, text] : mutations) {
    const std::string mutated = mutate(n, text);
    if (mutated == script) continue;
    try {
      if (!check_derivation(parse_proof_script(mutated)).ok) ++rejected;
    } catch (const Error&) {
      ++rejected;
    }
  }
  std::ostringstream d;
  d << "original " << (accepted ? "accepted" : "rejected") << ", " << rejected << "/7 mutations rejected";
  return {accepted && rejected == 7, d.str()};
}

// ---- 4 ----
Outcome axiom_soundness() {
  const QubitSet frame{0, 1, 2};
  std::mt19937_64 rng(4);
  testing::AstGen gen(41, frame);
  testing::ArithGen ar(42);
  int triples = 0, violations = 0, refused = 0, attempts = 0;
  const auto& schemas = all_schemas();
  while (triples < 1000 && attempts < 5000) {
    const AxiomSchema s = schemas[attempts++ % schemas.size()];
    const Ptr phi = testing::instance(s, gen, ar, frame);
    if (!match_axiom(s, phi, frame, {}, {2000, 200, 1, {}}).ok) {
      if (s != AxiomSchema::Oracle) ++refused;
      continue;
    }
    ++triples;
    const QuantumStructure w = testing::random_structure(rng, frame);
    if (!satisfies(w, testing::random_assignment(rng), phi)) ++violations;
  }
  std::ostringstream d;
  d << triples << " triples over " << schemas.size() << " schemas, " << violations << " violations, " << refused
    << " generated instances refused";
  return {triples == 1000 && violations == 0 && refused == 0 && schemas.size() == 15, d.str()};
}

// ---- 5 ----
Outcome theorem_corpus_check() {
  const QubitSet frame{0, 1, 2};
  std::mt19937_64 rng(5);
  testing::AstGen gen(51, frame);
  const auto& corpus = theorem_corpus();
  int checks = 0, violations = 0;
  for (const Theorem& t : corpus) {
    for (int i = 0; i < 100; ++i) {
      const QuantumStructure w = testing::random_structure(rng, frame);
      const Assignment rho = testing::random_assignment(rng);
      TheoremParams p;
      p.g = gen.subset_of(frame);
      if (t.needs_block_union) {
        std::vector<QubitSet> unions;
        for (const auto& s : all_subsets(frame))
          if (w.is_union_of_blocks(s)) unions.push_back(s);
        p.g = unions[gen.pick(static_cast<int>(unions.size()))];
      }
      p.g1 = gen.subset_of(frame);
      p.g2 = gen.subset_of(frame);
      p.a = gen.subset_of(p.g);
      p.alpha1 = gen.classical(2, p.g);
      p.alpha2 = gen.coin() ? disj_c(p.alpha1, gen.classical(1, p.g)) : gen.classical(2, p.g);
      p.u1 = gen.coin() ? amp(p.g, p.a) : gen.complex(1);
      p.u2 = gen.coin() ? p.u1 : gen.complex(1);
      ++checks;
      if (!satisfies(w, rho, t.instance(p))) ++violations;
    }
  }
  std::ostringstream d;
  d << corpus.size() << " theorems, " << checks << " checks, " << violations << " violations";
  return {corpus.size() == 15 && violations == 0, d.str()};
}

// ---- 6 ----
bool eval_row(const Ptr& g, const std::vector<Ptr>& letters, std::uint64_t row) {
  if (g->kind == Kind::QNot) return !eval_row(g->args[0], letters, row);
  if (g->kind == Kind::QImp) return !eval_row(g->args[0], letters, row) || eval_row(g->args[1], letters, row);
  for (std::size_t k = 0; k < letters.size(); ++k)
    if (equal(letters[k], g)) return row >> k & 1U;
  throw Error("not a letter: " + render(g));
}

Ptr combination(testing::AstGen& gen, const std::vector<Ptr>& letters, int depth) {
  if (depth == 0 || gen.pick(4) == 0) return letters[gen.pick(static_cast<int>(letters.size()))];
  auto sub = [&] { return combination(gen, letters, depth - 1); };
  switch (gen.pick(5)) {
    case 0: return qneg(sub());
    case 1: return qimp(sub(), sub());
    case 2: return qand(sub(), sub());
    case 3: return qor(sub(), sub());
    default: return qiff(sub(), sub());
  }
}

Outcome dnf_equivalence() {
  const QubitSet frame{0, 1, 2};
  testing::AstGen gen(61, frame);
  int formulas = 0, mismatches = 0;
  while (formulas < 500) {
    const int n = 1 + gen.pick(10);
    std::vector<Ptr> letters;
    while (static_cast<int>(letters.size()) < n) {
      Ptr a;
      switch (gen.pick(3)) {
        case 0: a = expand(gen.classical(2)); break;
        case 1: a = leq(real_var(gen.pick(6) + 1), num(gen.pick(5))); break;
        default: a = non_etg(gen.subset_of(frame));
      }
      if (std::none_of(letters.begin(), letters.end(), [&](const Ptr& b) { return equal(a, b); })) letters.push_back(a);
    }
    const Ptr g = combination(gen, letters, 5);
    const Ptr core = expand(g);
    const auto atoms = quantum_atoms(core);
    if (atoms.size() > 10) continue;
    ++formulas;
    const auto dnf = quantum_dnf(g, frame);
    // A molecular formula holds on a row iff each of its literals does.
    auto holds = [&](const MolecularFormula& m, std::uint64_t row) {
      for (std::size_t i = 0; i < m.atoms.size(); ++i)
        if (eval_row(m.atoms[i], atoms, row) != m.positive[i]) return false;
      return true;
    };
    for (std::uint64_t row = 0; row < (std::uint64_t{1} << atoms.size()); ++row) {
      const bool in_dnf = std::any_of(dnf.begin(), dnf.end(), [&](const auto& m) { return holds(m, row); });
      if (eval_row(core, atoms, row) != in_dnf) {
        ++mismatches;
        break;
      }
    }
  }
  std::ostringstream d;
  d << formulas << " formulas, " << mismatches << " truth-table mismatches";
  return {mismatches == 0, d.str()};
}

// ---- 7 ----
Outcome factorizability() {
  std::mt19937_64 rng(7);
  int vectors = 0, disagreements = 0, named_wrong = 0;
  auto judge = [&](const StateVector& v, const QubitSet& part, std::optional<bool> expected) {
    ++vectors;
    const bool oracle = testing::rank1_residual(v, part) < 1e-7;
    const bool got = schmidt_factor(v, part, 1e-7).factorizable;
    if (oracle != got) ++disagreements;
    if (expected && *expected != got) ++named_wrong;
  };
  const double h = 1 / std::sqrt(2.0);
  judge(testing::bell(), {0}, false);
  for (int n = 3; n <= 6; ++n) {
    QubitSet all;
    for (int k = 0; k < n; ++k) all.push_back(k);
    const StateVector ghz = make_vector(all, {{0, h}, {(Mask{1} << n) - 1, h}});
    for (int cut = 1; cut < n; ++cut) judge(ghz, QubitSet(all.begin(), all.begin() + cut), false);
  }
  for (int i = 0; vectors < 200; ++i) {
    const int n = 2 + static_cast<int>(rng() % 5);
    QubitSet all, part, rest;
    for (int k = 0; k < n; ++k) all.push_back(k);
    // A random nontrivial cut.
    while (part.empty() || part.size() == all.size()) {
      part.clear();
      for (int k : all)
        if (rng() % 2) part.push_back(k);
    }
    rest = set_minus(all, part);
    if (i % 2 == 0) {
      judge(tensor(testing::random_vector(rng, part, 0.3), testing::random_vector(rng, rest, 0.3)), part, true);
    } else {
      judge(testing::random_vector(rng, all, i % 3 == 0 ? 0.6 : 0.0), part, std::nullopt);
    }
  }
  std::ostringstream d;
  d << vectors << " vectors, " << disagreements << " disagreements with the rank-1 search, " << named_wrong
    << " wrong on Bell/GHZ/products";
  return {disagreements == 0 && named_wrong == 0, d.str()};
}

// ---- 8 ----
Outcome model_finder() {
  AliasTable aliases;
  const std::string body = strip_alias_preamble(read_fixture("finder_corpus.txt"), aliases);
  std::istringstream in(body);
  std::string line;
  int formulas = 0, controls = 0, models = 0, unsound = 0, control_models = 0;
  const auto start = std::chrono::steady_clock::now();
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t") == std::string::npos || line[line.find_first_not_of(" \t")] == '#') continue;
    const auto bar1 = line.find('|'), bar2 = line.find('|', bar1 + 1);
    const auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t"));
      s.erase(s.find_last_not_of(" \t") + 1);
      return s;
    };
    const std::string expect = trim(line.substr(0, bar1));
    const std::string bound = trim(line.substr(bar1 + 1, bar2 - bar1 - 1));
    const Ptr g = q(trim(line.substr(bar2 + 1)), aliases);
    const QubitSet f = bound.empty() ? QubitSet{} : q("[" + bound + "]", aliases)->set_a;
    ++formulas;
    const FindResult r = find_model(g, f);
    if (expect == "unsat") ++controls;
    if (r.status != FindResult::Status::Model) continue;
    ++models;
    if (!validate_structure(*r.structure).empty() || !satisfies(*r.structure, r.assignment, g)) ++unsound;
    if (expect == "unsat") ++control_models;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream d;
  d << formulas << " formulas, " << models << " models (" << unsound << " unsound), " << controls << " controls ("
    << control_models << " given a model), " << seconds << " s";
  return {formulas == 30 && controls == 10 && unsound == 0 && control_models == 0 && seconds < 60, d.str()};
}

// ---- 9 ----
bool survives_sampling(const Ptr& phi, std::mt19937_64& rng, int samples) {
  std::normal_distribution<double> n;
  std::uniform_int_distribution<int> small(-3, 3);
  const Symbols s = free_symbols(phi);
  for (int i = 0; i < samples; ++i) {
    Assignment rho;
    const bool discrete = i % 2 == 0;
    for (int k : s.real_vars) rho.reals[k] = discrete ? small(rng) : 5 * n(rng);
    for (int k : s.complex_vars) rho.complexes[k] = discrete ? Complex(small(rng), small(rng)) : Complex(n(rng), n(rng));
    if (!eval_arith(phi, rho)) return false;
  }
  return true;
}

Outcome oracle_soundness() {
  testing::ArithGen gen(91);
  std::mt19937_64 rng(92);
  int valid = 0, wrong = 0;
  for (int i = 0; i < 120; ++i) {
    const Ptr phi = i % 3 == 0 ? gen.valid() : gen.formula(2, i % 3 == 1);
    if (oracle_check(phi).verdict != Verdict::Valid) continue;
    ++valid;
    if (!survives_sampling(phi, rng, 100000)) ++wrong;
  }
  const OracleVerdict t = oracle_check(q("(((x1 <= x2) && (x2 <= x3)) ==> (x1 <= x3))"));
  const OracleVerdict r = oracle_check(q("(((z1 * z1) = -1) ==> ((z1 = (0 + i 1)) || (z1 = (0 + i -1))))"));
  const bool examples = t.verdict == Verdict::Valid && t.reason.find("tier 1") != std::string::npos &&
                        r.verdict == Verdict::Valid && r.reason.find("schema") != std::string::npos;
  std::ostringstream d;
  d << valid << " Valid verdicts sampled 1e5 times each, " << wrong << " falsified; examples: " << t.reason << " / "
    << r.reason;
  return {wrong == 0 && valid > 0 && examples, d.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"cat model satisfies its assertions", cat_fixture},
      {"measurement of the four-term state", measurement},
      {"PUnit derivation and its mutations", proof_checker},
      {"axiom instances hold", axiom_soundness},
      {"derived theorems hold", theorem_corpus_check},
      {"quantum DNF is equivalent", dnf_equivalence},
      {"factorizability agrees with rank-1 search", factorizability},
      {"model finder is sound", model_finder},
      {"oracle never wrongly says valid", oracle_soundness},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << i + 1 << " " << criteria[i].first << ": " << o.detail
              << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
