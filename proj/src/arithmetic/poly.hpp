#pragma once

// Normal forms of arithmetical terms as polynomials with rational
// coefficients. Variables are x_k, re(z_k), im(z_k); anything else (pi,
// irrational roots, arg, |u|, trigonometric parts of polar terms) becomes an
// opaque symbol carrying the facts we know about it.

#include <optional>
#include <string>
#include <vector>

#include "eqpl/syntax.hpp"
#include "linear.hpp"

namespace eqpl::detail {

using Monomial = std::vector<std::pair<int, int>>;  // (symbol, power), sorted
using Poly = std::map<Monomial, Rational>;

struct SymbolInfo {
  enum class Type { RealVar, ReZ, ImZ, Opaque } type;
  int var = 0;      // variable index for RealVar/ReZ/ImZ
  std::string key;  // identity of an opaque symbol
  std::optional<Poly> square;  // symbol^2 rewrites to this polynomial
  bool nonnegative = false;
  std::optional<std::pair<Rational, Rational>> interval;  // closed enclosure
};

// The term is outside the arithmetical language (or has no real value).
class NotArithmetical : public Error {
 public:
  using Error::Error;
};

class PolyBuilder {
 public:
  Poly real(const Node& t);
  std::pair<Poly, Poly> complex(const Node& u);

  const std::vector<SymbolInfo>& symbols() const { return symbols_; }
  bool uses_opaque() const;

  Poly add(const Poly& a, const Poly& b) const;
  Poly sub(const Poly& a, const Poly& b) const;
  Poly mul(const Poly& a, const Poly& b) const;
  static Poly constant(const Rational& c);
  static std::optional<Rational> as_constant(const Poly& p);

 private:
  std::vector<SymbolInfo> symbols_;
  std::map<std::string, int> by_key_;

  int symbol(SymbolInfo info);
  Poly var(int s) const { return Poly{{Monomial{{s, 1}}, Rational(1)}}; }
  Poly opaque_constant(const Node& t, const std::string& key, bool nonnegative);
  Poly reduce(const Monomial& m, const Rational& c) const;
};

std::string show(const Node& n);

}  // namespace eqpl::detail
