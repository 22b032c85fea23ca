#pragma once

#include "eqpl/structures.hpp"
#include "eqpl/syntax.hpp"

namespace eqpl {

// v (over `frame`) |=c alpha. Sugared classical connectives are evaluated
// directly.
bool classical_sat(const QubitSet& frame, Mask v, const Node& alpha);

// ext(alpha)^S_V = { v in V_[S] : v |=c alpha }, as valuations over S.
std::vector<Mask> extent(const Ptr& alpha, const QubitSet& frame, const std::vector<Mask>& v, const QubitSet& s);

// mu^F_w(U): probability that measuring the qubits F yields a valuation in U.
double measure(const QuantumStructure& w, const QubitSet& f, const std::vector<Mask>& u);

// Evaluates terms and formulas of one structure/assignment pair. The
// structure may be absent, in which case only arithmetical syntax (no Prob,
// amplitudes, alternatives, qubits or [F]) can be evaluated.
class Evaluator {
 public:
  Evaluator(const QuantumStructure* w, const Assignment& rho, Tolerances tol = {});

  double real(const Node& t) const;
  Complex complex(const Node& u) const;
  bool satisfies(const Node& g) const;
  // w |= alpha: every admissible valuation satisfies alpha.
  bool holds_classically(const Node& alpha) const;
  double prob(const Node& alpha) const;

  const Tolerances& tolerances() const { return tol_; }

 private:
  const QuantumStructure* w_;
  const Assignment& rho_;
  Tolerances tol_;
  StateVector full_;

  const QuantumStructure& structure(const char* what) const;
  bool leq(double a, double b) const { return a <= b + tol_.cmp; }
  bool ceq(Complex a, Complex b) const {
    return leq(a.real(), b.real()) && leq(b.real(), a.real()) && leq(a.imag(), b.imag()) && leq(b.imag(), a.imag());
  }
  bool non_etg(const QubitSet& f) const;
  bool cond_non_etg(const QubitSet& g, const QubitSet& f) const;
  Complex amp_of(const QubitSet& f, const QubitSet& a, const Node& alpha) const;
};

double denote_real(const Ptr& t, const QuantumStructure& w, const Assignment& rho, const Tolerances& tol = {});
Complex denote_complex(const Ptr& u, const QuantumStructure& w, const Assignment& rho, const Tolerances& tol = {});
bool satisfies(const QuantumStructure& w, const Assignment& rho, const Ptr& g, const Tolerances& tol = {});

// Value of a real constant expression (decimal, pi, e, sqrt, division).
double constant_value(const Node& c);

}  // namespace eqpl
