#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "eqpl/arithmetic.hpp"
#include "eqpl/syntax.hpp"

namespace eqpl {

enum class TautologyMode { Classical, Quantum };

// Classical mode: truth table over the qubits of a classical formula.
// Quantum mode: each maximal quantum atom becomes a propositional letter.
bool is_tautology(const Ptr& phi, TautologyMode mode);

enum class AxiomSchema {
  CTaut,
  QTaut,
  Oracle,
  Lift,     // ((a1 -> a2) ==> (a1 ==> a2))
  RefConj,  // ((a1 && a2) ==> (a1 /\ a2))
  IfTop,
  IfBot,
  NEtgF,
  NEtgBar,  // ([G2] ==> ([G1] <=> [G1 // G2])), G1 ⊆ G2
  NEtgUnion,
  NEtgDiff,
  Empty,
  NAdm,
  Unit,
  Prob,
};

const std::vector<AxiomSchema>& all_schemas();
// Script spelling: CTaut, QTaut, ORACLE, LIFT, REFCONJ, IFTOP, IFBOT, NETG_F,
// NETG_BAR, NETG_UNION, NETG_DIFF, EMPTY, NADM, UNIT, PROB.
std::string_view schema_name(AxiomSchema s);
std::optional<AxiomSchema> schema_from_name(std::string_view name);

// Optional schema parameters; whatever is absent is inferred from the formula.
//   NEtgBar/NEtgUnion/NEtgDiff: g1, g2.  NAdm: g1 = A.  Unit: g1 = G.
//   Prob: alpha.
struct AxiomParams {
  std::optional<QubitSet> g1;
  std::optional<QubitSet> g2;
  Ptr alpha;
};

enum class ProofDiagnostic {
  None,
  BadNumbering,
  BadCitation,
  OutOfBound,
  NotAnInstance,
  ProvisoViolation,
  OracleUnknown,
  OracleInvalid,
  NotClassical,
  NotAnImplication,
  MismatchedAntecedent,
  MismatchedConsequent,
  NotAPremise,
};
std::string_view diagnostic_name(ProofDiagnostic d);

struct MatchResult {
  bool ok = false;
  ProofDiagnostic kind = ProofDiagnostic::None;
  std::string message;  // why not, or (for Oracle) which tier decided
};

// Is phi (over bound F) an instance of the schema? Never throws on bad input;
// the reason is reported instead.
MatchResult match_axiom(AxiomSchema schema, const Ptr& phi, const QubitSet& bound, const AxiomParams& params = {},
                        const OracleConfig& oracle = {});

struct Justification {
  enum class Rule { Axiom, CMP, QMP, Premise };
  Rule rule = Rule::Premise;
  AxiomSchema schema = AxiomSchema::CTaut;
  AxiomParams params;
  int i = 0;  // CMP/QMP: line of the antecedent
  int j = 0;  // CMP/QMP: line of the implication
};

struct DerivationLine {
  int index = 0;
  Ptr formula;
  Justification just;
  int source_line = 0;  // script line, 0 when built programmatically
};

struct Derivation {
  QubitSet bound;
  std::vector<Ptr> premises;
  std::vector<DerivationLine> lines;
  AliasTable aliases;
};

struct CheckReport {
  bool ok = false;
  int line = 0;  // first failing line index
  ProofDiagnostic kind = ProofDiagnostic::None;
  std::string message;
  std::vector<std::string> notes;  // one per line: how it was justified
};

CheckReport check_derivation(const Derivation& d, const OracleConfig& oracle = {});

// Script format:
//   alias name = qbN            (optional, any number)
//   bound F = qb0,qb1
//   1. <quantum formula> ; JUST
// JUST is a schema name with optional parameters (NETG_BAR(G1;G2), NADM(A),
// UNIT(G), PROB(alpha)), CMP(i,j), QMP(i,j) or PREMISE. PREMISE lines make up
// the premise list. Throws SyntaxError with the script line number.
Derivation parse_proof_script(std::string_view text);
std::string render_proof_script(const Derivation& d);

// Schematic parameters for instantiating a theorem statement.
struct TheoremParams {
  Ptr alpha1;  // classical, over g
  Ptr alpha2;  // classical, over g
  QubitSet g;
  QubitSet g1;
  QubitSet g2;
  QubitSet a;  // ⊆ g
  Ptr u1;
  Ptr u2;
};

struct Theorem {
  std::string name;
  std::string statement;  // schematic, for display
  bool needs_block_union = false;  // only sound when G is a union of blocks
  std::function<Ptr(const TheoremParams&)> instance;
  // Derivation script for bound F, when the corpus has one.
  std::function<std::string(const QubitSet&)> derivation;
};

const std::vector<Theorem>& theorem_corpus();

// alpha1, (alpha1 -> alpha2) |- alpha2 using only QMP and Lift.
std::string cmp_from_qmp_script(const Ptr& alpha1, const Ptr& alpha2, const QubitSet& bound);

}  // namespace eqpl
