#pragma once

// Term abstraction shared by the Oracle schema and the model finder.

#include <map>

#include "eqpl/syntax.hpp"

namespace eqpl::detail {

inline bool arithmetic_constructor(Kind k) {
  switch (k) {
    case Kind::RAdd:
    case Kind::RMul:
    case Kind::Re:
    case Kind::Im:
    case Kind::Arg:
    case Kind::Abs:
    case Kind::Cart:
    case Kind::Polar:
    case Kind::Conj:
    case Kind::CAdd:
    case Kind::CMul:
    case Kind::RealVar:
    case Kind::CVar:
    case Kind::Num:
    case Kind::Pi:
    case Kind::Euler:
    case Kind::Sqrt:
    case Kind::Div: return true;
    default: return false;
  }
}

// Replaces every non-arithmetical term (Pr, amplitudes, alternatives, sums)
// by a fresh variable, equal terms by the same variable.
class Abstraction {
 public:
  explicit Abstraction(const Ptr& phi) {
    const Symbols s = free_symbols(phi);
    next_real_ = s.real_vars.empty() ? 1 : *s.real_vars.rbegin() + 1;
    next_complex_ = s.complex_vars.empty() ? 1 : *s.complex_vars.rbegin() + 1;
  }

  Ptr formula(const Ptr& n) {
    const Category c = category_of(*n);
    if (c == Category::Real || c == Category::Complex) return term(n);
    if (n->args.empty()) return n;
    auto copy = std::make_shared<Node>(*n);
    for (auto& a : copy->args) a = formula(a);
    return copy;
  }

 private:
  std::map<Ptr, Ptr, PtrLess> fresh_;
  int next_real_;
  int next_complex_;

  Ptr term(const Ptr& n) {
    if (arithmetic_constructor(n->kind)) {
      if (n->args.empty()) return n;
      auto copy = std::make_shared<Node>(*n);
      for (auto& a : copy->args) a = term(a);
      return copy;
    }
    auto [it, inserted] = fresh_.emplace(n, nullptr);
    if (inserted)
      it->second = category_of(*n) == Category::Real ? ast::real_var(next_real_++) : ast::complex_var(next_complex_++);
    return it->second;
  }
};

}  // namespace eqpl::detail

