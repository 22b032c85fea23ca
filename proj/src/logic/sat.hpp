#pragma once

// Propositional satisfiability for the calculus and the model finder: Tseitin
// encoding of core formulas (structurally equal subformulas share a variable)
// and a small DPLL solver.

#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "eqpl/syntax.hpp"

namespace eqpl::detail {

using Clause = std::vector<int>;  // DIMACS-style literals, variables from 1

struct Cnf {
  int vars = 0;
  std::vector<Clause> clauses;
};

// Satisfying assignment indexed by variable (entry 0 unused), if any.
std::optional<std::vector<bool>> solve_sat(const Cnf& cnf);

class Tseitin {
 public:
  // Quantum mode: ! and ==> are connectives, every other node is a letter.
  // Classical mode: ~, -> and top are connectives, qubits are letters.
  explicit Tseitin(bool quantum) : quantum_(quantum) {}

  int literal(const Ptr& core);
  const Cnf& cnf() const { return cnf_; }
  Cnf& cnf() { return cnf_; }
  // Letters in order of first encounter, with their variables.
  const std::vector<std::pair<Ptr, int>>& letters() const { return letters_; }

 private:
  bool quantum_;
  Cnf cnf_;
  std::unordered_map<const Node*, int> by_address_;
  std::map<Ptr, int, PtrLess> by_structure_;
  std::vector<std::pair<Ptr, int>> letters_;
  int top_ = 0;
};

}  // namespace eqpl::detail
