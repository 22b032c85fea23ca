#pragma once

// Brute-force rank-1 test by alternating least squares, independent of any
// SVD: fit M ~ a b^T and report the relative residual.

#include <cmath>
#include <vector>

#include "eqpl/structures.hpp"

namespace eqpl::testing {

inline double rank1_residual(const StateVector& v, const QubitSet& part) {
  const QubitSet rest = set_minus(v.carrier, part);
  const std::size_t rows = std::size_t{1} << part.size(), cols = std::size_t{1} << rest.size();
  std::vector<std::vector<Complex>> m(rows, std::vector<Complex>(cols));
  double total = 0;
  for (Mask k = 0; k < v.amps.size(); ++k) {
    m[remap(k, v.carrier, part)][remap(k, v.carrier, rest)] = v.amps[k];
    total += std::norm(v.amps[k]);
  }
  auto residual = [&](const std::vector<Complex>& a, const std::vector<Complex>& b) {
    double r = 0;
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) r += std::norm(m[i][j] - a[i] * b[j]);
    return std::sqrt(r / total);
  };
  double best = 1.0;
  // Start from every row with non-negligible mass.
  for (std::size_t start = 0; start < rows; ++start) {
    std::vector<Complex> b = m[start], a(rows);
    double nb = 0;
    for (const auto& x : b) nb += std::norm(x);
    if (nb < 1e-12 * total) continue;
    for (int it = 0; it < 200; ++it) {
      nb = 0;
      for (const auto& x : b) nb += std::norm(x);
      for (std::size_t i = 0; i < rows; ++i) {
        Complex s{};
        for (std::size_t j = 0; j < cols; ++j) s += m[i][j] * std::conj(b[j]);
        a[i] = s / nb;
      }
      double na = 0;
      for (const auto& x : a) na += std::norm(x);
      for (std::size_t j = 0; j < cols; ++j) {
        Complex s{};
        for (std::size_t i = 0; i < rows; ++i) s += std::conj(a[i]) * m[i][j];
        b[j] = s / na;
      }
    }
    best = std::min(best, residual(a, b));
  }
  return best;
}

}  // namespace eqpl::testing
