#include "linear.hpp"

#include <optional>
#include <set>
#include <stdexcept>
#include <string>

namespace eqpl::detail {
namespace {

using Key = std::tuple<std::vector<std::pair<int, Rational>>, Rational, bool>;

// Scale so the first coefficient has modulus 1; used to drop duplicates.
Key normalized(const LinearConstraint& c) {
  Rational s = c.coeffs.empty() ? Rational(1) : abs(c.coeffs.begin()->second);
  Key k;
  for (const auto& [v, a] : c.coeffs) std::get<0>(k).emplace_back(v, a / s);
  std::get<1>(k) = c.constant / s;
  std::get<2>(k) = c.strict;
  return k;
}

void dedupe(std::vector<LinearConstraint>& cs) {
  std::set<Key> seen;
  std::vector<LinearConstraint> out;
  for (auto& c : cs)
    if (seen.insert(normalized(c)).second) out.push_back(std::move(c));
  cs = std::move(out);
}

// Value strictly/non-strictly between the bounds, preferring 0, then integers.
Rational pick(const std::optional<std::pair<Rational, bool>>& lo, const std::optional<std::pair<Rational, bool>>& hi) {
  auto above = [&](const Rational& x) { return !lo || (lo->second ? x > lo->first : x >= lo->first); };
  auto below = [&](const Rational& x) { return !hi || (hi->second ? x < hi->first : x <= hi->first); };
  if (above(0) && below(0)) return 0;
  if (lo) {
    Rational f = Rational(boost::multiprecision::cpp_int(numerator(lo->first) / denominator(lo->first)));
    for (int k : {-1, 0, 1, 2})
      if (Rational c = f + k; above(c) && below(c)) return c;
  }
  if (hi) {
    Rational f = Rational(boost::multiprecision::cpp_int(numerator(hi->first) / denominator(hi->first)));
    for (int k : {1, 0, -1, -2})
      if (Rational c = f + k; above(c) && below(c)) return c;
  }
  if (lo && hi) return (lo->first + hi->first) / 2;
  throw std::logic_error("no value between Fourier-Motzkin bounds");
}

}  // namespace

FmOutcome fourier_motzkin(std::vector<LinearConstraint> cs, int nvars, std::size_t max_constraints) {
  for (auto& c : cs)
    for (auto it = c.coeffs.begin(); it != c.coeffs.end();)
      it = it->second == 0 ? c.coeffs.erase(it) : std::next(it);
  dedupe(cs);

  std::vector<std::vector<LinearConstraint>> stages;  // constraints before eliminating order[k]
  std::vector<int> order;
  std::vector<bool> done(nvars, false);
  for (int step = 0; step < nvars; ++step) {
    // Eliminate the variable producing the fewest combinations.
    int best = -1;
    std::size_t best_cost = 0;
    for (int v = 0; v < nvars; ++v) {
      if (done[v]) continue;
      std::size_t pos = 0, neg = 0;
      for (const auto& c : cs) {
        auto it = c.coeffs.find(v);
        if (it == c.coeffs.end()) continue;
        (it->second > 0 ? pos : neg)++;
      }
      if (best < 0 || pos * neg < best_cost) {
        best = v;
        best_cost = pos * neg;
      }
    }
    done[best] = true;
    order.push_back(best);
    stages.push_back(cs);

    std::vector<LinearConstraint> pos, neg, next;
    for (auto& c : cs) {
      auto it = c.coeffs.find(best);
      if (it == c.coeffs.end())
        next.push_back(std::move(c));
      else
        (it->second > 0 ? pos : neg).push_back(std::move(c));
    }
    for (const auto& p : pos)
      for (const auto& n : neg) {
        const Rational a = p.coeffs.at(best), b = -n.coeffs.at(best);
        LinearConstraint r;
        for (const auto& [v, x] : p.coeffs) r.coeffs[v] += b * x;
        for (const auto& [v, x] : n.coeffs) r.coeffs[v] += a * x;
        for (auto it = r.coeffs.begin(); it != r.coeffs.end();)
          it = it->second == 0 ? r.coeffs.erase(it) : std::next(it);
        r.constant = b * p.constant + a * n.constant;
        r.strict = p.strict || n.strict;
        next.push_back(std::move(r));
      }
    dedupe(next);
    if (next.size() > max_constraints) return {FmResult::BudgetExceeded, {}};
    cs = std::move(next);
  }
  for (const auto& c : cs)
    if (c.strict ? !(c.constant > 0) : !(c.constant >= 0)) return {FmResult::Unsatisfiable, {}};

  // Back-substitution in reverse elimination order.
  std::vector<Rational> value(nvars, 0);
  for (int k = nvars - 1; k >= 0; --k) {
    const int v = order[k];
    std::optional<std::pair<Rational, bool>> lo, hi;
    for (const auto& c : stages[k]) {
      auto it = c.coeffs.find(v);
      if (it == c.coeffs.end()) continue;
      Rational rest = c.constant;
      for (const auto& [u, x] : c.coeffs)
        if (u != v) rest += x * value[u];
      const Rational bound = -rest / it->second;
      if (it->second > 0) {
        if (!lo || bound > lo->first || (bound == lo->first && c.strict)) lo = {bound, c.strict};
      } else {
        if (!hi || bound < hi->first || (bound == hi->first && c.strict)) hi = {bound, c.strict};
      }
    }
    value[v] = pick(lo, hi);
  }
  return {FmResult::Satisfiable, std::move(value)};
}

Rational parse_decimal(std::string_view text) {
  bool negative = false;
  if (!text.empty() && text.front() == '-') {
    negative = true;
    text.remove_prefix(1);
  }
  boost::multiprecision::cpp_int num = 0, den = 1;
  bool frac = false;
  for (char ch : text) {
    if (ch == '.') {
      frac = true;
      continue;
    }
    if (ch < '0' || ch > '9') throw std::invalid_argument("bad decimal '" + std::string(text) + "'");
    num = num * 10 + (ch - '0');
    if (frac) den *= 10;
  }
  Rational r(num, den);
  return negative ? -r : r;
}

}  // namespace eqpl::detail
