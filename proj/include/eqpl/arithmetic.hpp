#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "eqpl/semantics.hpp"

namespace eqpl {

// True iff the formula lies in the arithmetical language: comparisons, ⌐ and
// ⊐ (plus their sugar) over variables, constants and the arithmetic term
// constructors; no qubits, Prob, amplitudes, alternatives or [F].
bool is_arithmetical(const Node& phi);

bool eval_arith(const Ptr& phi, const Assignment& rho, const Tolerances& tol = {});

enum class Verdict { Valid, Invalid, Unknown };
std::string_view verdict_name(Verdict v);

struct OracleVerdict {
  Verdict verdict = Verdict::Unknown;
  Assignment witness;   // Invalid only: falsifies the formula under eval_arith
  std::string reason;   // which tier decided, or why nothing did
};

struct OracleConfig {
  std::size_t samples = 10000;      // falsification-search evaluations
  std::size_t eliminations = 1000;  // Fourier-Motzkin runs
  std::uint64_t seed = 1;
  std::string command;  // external prover, consulted when the built-in tiers say Unknown
};

// Sound partial decision procedure for validity of arithmetical formulas over
// the reals (exact semantics): Valid only from the exact linear tier or the
// pattern tier, Invalid only with a checked witness, Unknown otherwise.
OracleVerdict oracle_check(const Ptr& phi, const OracleConfig& config = {});

// Runs `command` with the rendered formula on stdin and parses its verdict
// line: VALID | INVALID x1=1 z1=(0,1) ... | UNKNOWN. Invalid witnesses are
// re-checked.
OracleVerdict run_oracle_command(const std::string& command, const Ptr& phi);

std::string format_assignment(const Assignment& rho);
Assignment parse_assignment(std::string_view text);

}  // namespace eqpl
