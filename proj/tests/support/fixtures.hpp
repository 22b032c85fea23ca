#pragma once

// Hand-built fixtures shared by several test binaries.

#include <cmath>
#include <numbers>

#include "eqpl/structures.hpp"
#include "eqpl/syntax.hpp"

namespace eqpl::testing {

inline AliasTable cat_aliases() {
  AliasTable t;
  t.add("cati", 0);
  t.add("cata", 1);
  t.add("catm", 2);
  return t;
}

// The cat assertions, one per line.
inline const std::vector<std::string>& cat_assertions() {
  static const std::vector<std::string> lines = {
      "[cati,cata,catm]",
      "(catm -> cata)",
      "(dia(cata) && dia(~ cata))",
      "! [cata]",
      "(Pr(cata) = 1/3)",
      "poss{cata,catm}((cata /\\ catm) : 1/sqrt(6), (cata /\\ ~ catm) : 1/sqrt(6),"
      " (~ cata /\\ ~ catm) : sqrt(2/3) e^{i pi/3})",
  };
  return lines;
}

// Frame {cati,cata,catm}; cati alone in |0>, (cata,catm) in the superposition
// 1/sqrt6 |11> + 1/sqrt6 |10> + e^{i pi/3} sqrt(2/3) |00>; V = models of (catm -> cata).
inline QuantumStructure cat_structure() {
  QuantumStructure w;
  w.frame = {0, 1, 2};
  for (Mask v = 0; v < 8; ++v) {
    const bool alive = v >> 1 & 1U, moving = v >> 2 & 1U;
    if (!moving || alive) w.admissible.push_back(v);
  }
  w.partition = {{0}, {1, 2}};
  const double s6 = 1 / std::sqrt(6.0);
  w.blocks.push_back(make_vector({0}, {{parse_bitstring("0"), 1.0}}));
  w.blocks.push_back(make_vector({1, 2}, {{parse_bitstring("11"), s6},
                                          {parse_bitstring("10"), s6},
                                          {parse_bitstring("00"), std::polar(std::sqrt(2.0 / 3.0), std::numbers::pi / 3)}}));
  return w;
}

inline StateVector bell() {
  const double h = 1 / std::sqrt(2.0);
  return make_vector({0, 1}, {{parse_bitstring("00"), h}, {parse_bitstring("11"), h}});
}

}  // namespace eqpl::testing
