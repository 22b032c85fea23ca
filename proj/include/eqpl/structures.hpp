#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eqpl/qubit_set.hpp"
#include "eqpl/syntax.hpp"

namespace eqpl {

using Complex = std::complex<double>;

// A valuation over an ordered qubit set S: bit i is the truth value of S[i].
using Mask = std::uint64_t;

// Largest frame we are willing to enumerate valuations of.
inline constexpr std::size_t kMaxFrame = 20;

struct Tolerances {
  double norm = 1e-9;  // unit-norm checks
  double rank = 1e-7;  // sigma2/sigma1 cutoff in the rank-1 test
  double cmp = 1e-9;   // comparisons of denoted reals
};

class NotUnitNorm : public Error {
 public:
  explicit NotUnitNorm(double actual)
      : Error("state vector is not unit norm (norm " + std::to_string(actual) + ")"), actual_(actual) {}
  double actual() const { return actual_; }

 private:
  double actual_;
};

class OverlappingCarriers : public Error {
 public:
  using Error::Error;
};

class OutOfFrame : public Error {
 public:
  using Error::Error;
};

class UnboundVariable : public Error {
 public:
  using Error::Error;
};

// Restricts/reindexes `v` (over `from`) to the qubits of `to`; qubits of `to`
// missing from `from` read as false.
Mask remap(Mask v, const QubitSet& from, const QubitSet& to);

// v^S_A: the valuation over S true exactly on A.
inline Mask valuation_of(const QubitSet& s, const QubitSet& a) { return mask_of_subset(s, a); }

// Bitstring with character i giving the value of S[i].
std::string bitstring(Mask v, std::size_t width);
Mask parse_bitstring(std::string_view bits);

// Dense amplitude map over all valuations of `carrier` (index = mask).
struct StateVector {
  QubitSet carrier;
  std::vector<Complex> amps;

  Complex amplitude(Mask v) const { return amps[v]; }
  double norm() const;
};

StateVector make_vector(QubitSet carrier, const std::map<Mask, Complex>& entries, double eps_norm = 1e-9);
StateVector unit_scalar();  // the empty tensor, psi_[{}] = 1
StateVector tensor(const StateVector& a, const StateVector& b);

enum class Side { Inside, Outside };
// V_[S] (inside) or V_]S[ (outside); the result is sorted and duplicate free.
std::vector<Mask> project_valuations(const QubitSet& frame, const std::vector<Mask>& v, const QubitSet& s,
                                     Side side);

struct Factorization {
  bool factorizable = false;
  std::optional<StateVector> left;   // carrier = part
  std::optional<StateVector> right;  // carrier = rest
};

// Rank-1 test of the amplitude matrix (rows: valuations of `part`, columns:
// valuations of the rest of the carrier).
Factorization schmidt_factor(const StateVector& v, const QubitSet& part, double eps_rank = 1e-7);

struct QuantumStructure {
  QubitSet frame;
  std::vector<Mask> admissible;  // over frame, sorted
  std::vector<QubitSet> partition;
  std::vector<StateVector> blocks;  // blocks[i].carrier == partition[i]
  std::map<std::pair<QubitSet, QubitSet>, Complex> nu_overrides;

  bool is_union_of_blocks(const QubitSet& g) const;
  // psi_[R] for R a union of blocks.
  StateVector state_of(const QubitSet& r) const;
  StateVector full_state() const { return state_of(frame); }
  // nu_GA: computed from the block states when G is a union of blocks.
  Complex nu(const QubitSet& g, const QubitSet& a) const;
  void require_in_frame(const QubitSet& s) const;
};

enum class DiagnosticKind {
  PartitionViolation,
  CarrierMismatch,
  NormViolation,
  NonFactorizableBlockViolation,
  AdmissibilityViolation,
  EmptyAdmissibleSet,
  OverrideOnUnionOfBlocks,
};

std::string_view diagnostic_name(DiagnosticKind k);

struct Diagnostic {
  DiagnosticKind kind;
  std::string message;
};

std::vector<Diagnostic> validate_structure(const QuantumStructure& w, const Tolerances& tol = {});

struct Assignment {
  std::map<int, double> reals;
  std::map<int, Complex> complexes;

  double real(int k) const;
  Complex complex(int k) const;
};

}  // namespace eqpl
