#include "eqpl/semantics.hpp"

#include <cmath>
#include <numbers>

namespace eqpl {
namespace {

bool bit(const QubitSet& frame, Mask v, int q) {
  auto it = std::lower_bound(frame.begin(), frame.end(), q);
  if (it == frame.end() || *it != q) throw OutOfFrame("qubit qb" + std::to_string(q) + " lies outside the frame");
  return v >> (it - frame.begin()) & 1U;
}

bool sat(const QubitSet& frame, Mask v, const Node& a) {
  switch (a.kind) {
    case Kind::Qubit: return bit(frame, v, a.index);
    case Kind::Top: return true;
    case Kind::Bot: return false;
    case Kind::Not: return !sat(frame, v, *a.args[0]);
    case Kind::Imp: return !sat(frame, v, *a.args[0]) || sat(frame, v, *a.args[1]);
    case Kind::And: return sat(frame, v, *a.args[0]) && sat(frame, v, *a.args[1]);
    case Kind::Or: return sat(frame, v, *a.args[0]) || sat(frame, v, *a.args[1]);
    case Kind::Iff: return sat(frame, v, *a.args[0]) == sat(frame, v, *a.args[1]);
    case Kind::Molecular: {
      if (!is_subset(a.set_b, a.set_a)) throw ProvisoViolation("molecular formula needs A ⊆ F");
      for (int q : a.set_a)
        if (bit(frame, v, q) != contains(a.set_b, q)) return false;
      return true;
    }
    default: throw Error("not a classical formula: " + render(std::make_shared<Node>(a)));
  }
}

}  // namespace

bool classical_sat(const QubitSet& frame, Mask v, const Node& alpha) { return sat(frame, v, alpha); }

std::vector<Mask> extent(const Ptr& alpha, const QubitSet& frame, const std::vector<Mask>& v, const QubitSet& s) {
  if (!is_subset(s, frame)) throw OutOfFrame("extent over qubits outside the frame");
  std::vector<Mask> out;
  for (Mask m : project_valuations(frame, v, s, Side::Inside))
    if (sat(s, m, *alpha)) out.push_back(m);
  return out;
}

double measure(const QuantumStructure& w, const QubitSet& f, const std::vector<Mask>& u) {
  w.require_in_frame(f);
  const StateVector full = w.full_state();
  std::vector<char> in_u(std::size_t{1} << f.size(), 0);
  for (Mask m : u) in_u.at(m) = 1;
  double total = 0;
  for (Mask v = 0; v < full.amps.size(); ++v)
    if (in_u[remap(v, w.frame, f)]) total += std::norm(full.amps[v]);
  return total;
}

double constant_value(const Node& c) {
  switch (c.kind) {
    case Kind::Num: return std::stod(c.text);
    case Kind::Pi: return std::numbers::pi;
    case Kind::Euler: return std::numbers::e;
    case Kind::Sqrt: return std::sqrt(constant_value(*c.args[0]));
    case Kind::Div: return constant_value(*c.args[0]) / constant_value(*c.args[1]);
    default: throw Error("not a constant: " + render(std::make_shared<Node>(c)));
  }
}

Evaluator::Evaluator(const QuantumStructure* w, const Assignment& rho, Tolerances tol)
    : w_(w), rho_(rho), tol_(tol), full_(w ? w->full_state() : unit_scalar()) {}

const QuantumStructure& Evaluator::structure(const char* what) const {
  if (!w_) throw Error(std::string(what) + " needs a quantum structure");
  return *w_;
}

bool Evaluator::holds_classically(const Node& alpha) const {
  const auto& w = structure("a classical formula");
  for (Mask v : w.admissible)
    if (!sat(w.frame, v, alpha)) return false;
  return true;
}

double Evaluator::prob(const Node& alpha) const {
  const auto& w = structure("Pr");
  const Ptr a = std::make_shared<Node>(alpha);
  const QubitSet f = qubits_of(a);
  w.require_in_frame(f);
  // mu^{QB(alpha)}_w(ext(alpha)^{QB(alpha)}_V)
  std::vector<char> in_ext(std::size_t{1} << f.size(), 0);
  for (Mask m : extent(a, w.frame, w.admissible, f)) in_ext[m] = 1;
  double total = 0;
  for (Mask v = 0; v < full_.amps.size(); ++v)
    if (in_ext[remap(v, w.frame, f)]) total += std::norm(full_.amps[v]);
  return total;
}

Complex Evaluator::amp_of(const QubitSet& f, const QubitSet& a, const Node& alpha) const {
  if (!is_subset(a, f)) throw ProvisoViolation("amplitude term needs A ⊆ F");
  const auto& w = structure("an amplitude");
  w.require_in_frame(f);
  if (alpha.kind == Kind::Top) return w.nu(f, a);
  if (!is_subset(qubits_of(std::make_shared<Node>(alpha)), f))
    throw ProvisoViolation("amplitude term |alpha>_FA needs QB(alpha) ⊆ F");
  // Guard ((/\_F A) -> alpha) must hold at every admissible valuation.
  for (Mask v : w.admissible)
    if (remap(v, w.frame, f) == valuation_of(f, a) && !sat(w.frame, v, alpha)) return Complex{};
  return w.nu(f, a);
}

double Evaluator::real(const Node& t) const {
  const auto& a = t.args;
  switch (t.kind) {
    case Kind::RealVar: return rho_.real(t.index);
    case Kind::Num:
    case Kind::Pi:
    case Kind::Euler:
    case Kind::Sqrt:
    case Kind::Div: return constant_value(t);
    case Kind::Prob: return prob(*a[0]);
    case Kind::RAdd: return real(*a[0]) + real(*a[1]);
    case Kind::RMul: return real(*a[0]) * real(*a[1]);
    case Kind::Re: return complex(*a[0]).real();
    case Kind::Im: return complex(*a[0]).imag();
    case Kind::Arg: {
      const Complex z = complex(*a[0]);
      return z == Complex{} ? 0.0 : std::arg(z);
    }
    case Kind::Abs: return std::abs(complex(*a[0]));
    case Kind::SumSq: {
      double s = 0;
      for (const auto& sub : all_subsets(t.set_a)) s += std::norm(amp_of(t.set_a, sub, *a[0]));
      return s;
    }
    default: throw Error("not a real term: " + render(std::make_shared<Node>(t)));
  }
}

Complex Evaluator::complex(const Node& u) const {
  const auto& a = u.args;
  switch (u.kind) {
    case Kind::CVar: return rho_.complex(u.index);
    case Kind::Amp:
      if (!is_subset(u.set_b, u.set_a)) throw ProvisoViolation("amplitude term needs A ⊆ F");
      return structure("an amplitude").nu(u.set_a, u.set_b);
    case Kind::AmpOf: return amp_of(u.set_a, u.set_b, *a[0]);
    case Kind::Cart: return {real(*a[0]), real(*a[1])};
    case Kind::Polar: return std::polar(1.0, real(*a[1])) * real(*a[0]);
    case Kind::Conj: return std::conj(complex(*a[0]));
    case Kind::CAdd: return complex(*a[0]) + complex(*a[1]);
    case Kind::CMul: return complex(*a[0]) * complex(*a[1]);
    case Kind::Ite: return holds_classically(*a[0]) ? complex(*a[1]) : complex(*a[2]);
    default:
      if (category_of(u) == Category::Real) return {real(u), 0.0};
      throw Error("not a complex term: " + render(std::make_shared<Node>(u)));
  }
}

bool Evaluator::non_etg(const QubitSet& f) const {
  const auto& w = structure("[F]");
  w.require_in_frame(f);
  return w.is_union_of_blocks(f);
}

bool Evaluator::cond_non_etg(const QubitSet& g, const QubitSet& f) const {
  if (!is_subset(g, f)) throw ProvisoViolation("[G|F] needs G ⊆ F");
  const auto& w = structure("[G|F]");
  const QubitSet rest = set_minus(f, g);
  for (const auto& a1 : all_subsets(g))
    for (const auto& a2 : all_subsets(rest))
      if (!ceq(w.nu(f, set_union(a1, a2)), w.nu(g, a1) * w.nu(rest, a2))) return false;
  return true;
}

bool Evaluator::satisfies(const Node& g) const {
  const auto& a = g.args;
  switch (g.kind) {
    case Kind::Leq: return leq(real(*a[0]), real(*a[1]));
    case Kind::Lt: {
      const double x = real(*a[0]), y = real(*a[1]);
      return leq(x, y) && !leq(y, x);
    }
    case Kind::Eq: {
      const double x = real(*a[0]), y = real(*a[1]);
      return leq(x, y) && leq(y, x);
    }
    case Kind::CEq: return ceq(complex(*a[0]), complex(*a[1]));
    case Kind::NonEtg: return non_etg(g.set_a);
    case Kind::CondNonEtg: return cond_non_etg(g.set_a, g.set_b);
    case Kind::Entangled: {
      if (!contains(g.set_a, g.index) || !contains(g.set_a, g.index2) || g.index == g.index2)
        throw ProvisoViolation("entanglement formula needs two distinct qubits of F");
      for (const auto& s : all_subsets(g.set_a))
        if (contains(s, g.index) && !contains(s, g.index2) && non_etg(s)) return false;
      return true;
    }
    case Kind::Poss: {
      const QubitSet& f = g.set_a;
      if (!non_etg(f)) return false;
      for (std::size_t i = 0; i < a.size(); i += 2) {
        const Complex u = complex(*a[i + 1]);
        if (!(0.0 < std::abs(u) - tol_.cmp)) return false;
        bool found = false;
        for (const auto& sub : all_subsets(f))
          if (ceq(amp_of(f, sub, *a[i]), u)) found = true;
        if (!found) return false;
      }
      return true;
    }
    case Kind::Dia: return satisfies(*ast::lt(ast::num(0), ast::prob(a[0])));
    case Kind::Box: return satisfies(*ast::eq(ast::num(1), ast::prob(a[0])));
    case Kind::QNot: return !satisfies(*a[0]);
    case Kind::QImp: return !satisfies(*a[0]) || satisfies(*a[1]);
    case Kind::QOr: return satisfies(*a[0]) || satisfies(*a[1]);
    case Kind::QAnd: return satisfies(*a[0]) && satisfies(*a[1]);
    case Kind::QIff: return satisfies(*a[0]) == satisfies(*a[1]);
    default:
      if (is_classical(g)) return holds_classically(g);
      throw Error("not a quantum formula: " + render(std::make_shared<Node>(g)));
  }
}

double denote_real(const Ptr& t, const QuantumStructure& w, const Assignment& rho, const Tolerances& tol) {
  return Evaluator(&w, rho, tol).real(*t);
}

Complex denote_complex(const Ptr& u, const QuantumStructure& w, const Assignment& rho, const Tolerances& tol) {
  return Evaluator(&w, rho, tol).complex(*u);
}

bool satisfies(const QuantumStructure& w, const Assignment& rho, const Ptr& g, const Tolerances& tol) {
  return Evaluator(&w, rho, tol).satisfies(*g);
}

}  // namespace eqpl
