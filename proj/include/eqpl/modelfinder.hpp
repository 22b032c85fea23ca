#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "eqpl/arithmetic.hpp"
#include "eqpl/structures.hpp"
#include "eqpl/syntax.hpp"

namespace eqpl {

class AtomBudgetExceeded : public Error {
 public:
  using Error::Error;
};

class AllBranchesInconsistent : public Error {
 public:
  using Error::Error;
};

class ValidationFailed : public Error {
 public:
  using Error::Error;
};

// (⊓_Q D): the atoms of Q, each asserted (positive) or denied.
struct MolecularFormula {
  std::vector<Ptr> atoms;
  std::vector<bool> positive;

  Ptr formula() const { return ast::quantum_molecular(atoms, positive); }
};

// Every row of the atom-abstracted truth table of gamma that makes it true,
// over Q = quantum_atoms(expand(gamma)). Throws AtomBudgetExceeded when
// |Q| exceeds the budget and ProvisoViolation when gamma is not over F.
std::vector<MolecularFormula> quantum_dnf(const Ptr& gamma, const QubitSet& f, std::size_t atom_budget = 20);

// Partial rows (cubes) whose conjunction propositionally implies gamma,
// produced by a tableau over the core formula; every row of quantum_dnf
// extends some cube. At most `limit` cubes.
std::vector<MolecularFormula> implicant_cubes(const Ptr& gamma, std::size_t limit = 64);

// Replaces each [G] literal by the amplitude equations of [G|F] (negated for
// denied atoms).
Ptr eliminate_nonentanglement(const MolecularFormula& m, const QubitSet& f);

// A cube with the classical part turned into an admissible set: Prob and
// alternative terms are resolved against V, [G] literals are kept for the
// partition search.
struct Completion {
  std::vector<Mask> admissible;                        // V over F, sorted
  std::vector<Ptr> arithmetic;                         // (t1 <= t2) or (! (t1 <= t2))
  std::vector<std::pair<QubitSet, bool>> entanglement;  // [G] asserted or denied
};

// Candidate completions, largest V first. Throws AllBranchesInconsistent when
// no admissible set can satisfy the classical literals.
std::vector<Completion> henkin_complete(const MolecularFormula& m, const QubitSet& f, std::size_t max_sets = 32);

// Partitions of F compatible with the [G] literals, finest first.
std::vector<std::vector<QubitSet>> partition_search(const Completion& c, const QubitSet& f);

// An amplitude unknown: z for Amp(G, A). Block variables (G in the partition)
// build every union-of-blocks amplitude; the others are free ν defaults.
struct AmpVar {
  QubitSet g;
  QubitSet a;
  int var = 0;  // complex variable index
  bool block = false;
};

// Constraints are (t1 <= t2), (! (t1 <= t2)), (t1 = t2) or (u1 = u2) over
// the user's variables and the amplitude variables.
struct ConstraintSystem {
  QubitSet frame;
  std::vector<Mask> admissible;
  std::vector<QubitSet> partition;
  std::vector<AmpVar> amp_vars;
  std::set<int> real_vars;
  std::set<int> complex_vars;  // includes the amplitude variables
  std::vector<Ptr> constraints;
};

ConstraintSystem emit_system(const Completion& c, const QubitSet& f, const std::vector<QubitSet>& partition);

struct SolverConfig {
  std::uint64_t seed = 1;
  int restarts = 64;
  double tol = 1e-8;
  OracleConfig oracle{0, 200, 1, {}};
};

struct SolveResult {
  enum class Status { Solution, NoSolutionFound, Inconsistent };
  Status status = Status::NoSolutionFound;
  Assignment values;
  double residual = 0;  // best maximal residual
  std::string reason;
};

// Residuals of every constraint under `values`: hinge for inequalities
// (strict ones need slack), differences for equations.
std::vector<double> residuals(const ConstraintSystem& sys, const Assignment& values);

SolveResult solve(const ConstraintSystem& sys, const SolverConfig& config = {});

// Structure over F and assignment of the user's variables from a solution.
// Blocks whose state factorizes are split. Throws ValidationFailed when the
// result is not a valid structure.
std::pair<QuantumStructure, Assignment> build_model(const ConstraintSystem& sys, const Assignment& values);

struct FinderConfig {
  SolverConfig solver;
  std::size_t max_cubes = 256;
  std::size_t max_sets = 32;      // admissible sets per cube
  std::size_t max_systems = 200;  // solver calls overall
};

struct FindResult {
  enum class Status { Model, NoModelFound, Inconsistent };
  Status status = Status::NoModelFound;
  std::optional<QuantumStructure> structure;
  Assignment assignment;
  std::vector<std::string> report;  // one line per explored branch
  std::string reason;
};

std::string_view status_name(FindResult::Status s);

// Model of gamma with frame F, checked with `satisfies` before it is
// returned. Inconsistent only when every cube is refuted exactly.
FindResult find_model(const Ptr& gamma, const QubitSet& f, const FinderConfig& config = {});

}  // namespace eqpl
