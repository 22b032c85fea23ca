#pragma once

// Exact linear arithmetic over the rationals: Fourier-Motzkin elimination
// with strict inequalities and witness extraction.

#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <string_view>
#include <vector>

namespace eqpl::detail {

using Rational = boost::multiprecision::cpp_rational;

// sum coeffs[j] * y_j + constant  >= 0  (or > 0 when strict)
struct LinearConstraint {
  std::map<int, Rational> coeffs;
  Rational constant;
  bool strict = false;
};

enum class FmResult { Satisfiable, Unsatisfiable, BudgetExceeded };

struct FmOutcome {
  FmResult result;
  std::vector<Rational> witness;  // one value per variable when Satisfiable
};

FmOutcome fourier_motzkin(std::vector<LinearConstraint> cs, int nvars, std::size_t max_constraints = 20000);

Rational parse_decimal(std::string_view text);

}  // namespace eqpl::detail
