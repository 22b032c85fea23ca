#include "eqpl/modelfinder.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>
#include <unordered_map>

#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include "eqpl/semantics.hpp"
#include "logic/abstraction.hpp"

namespace eqpl {

using namespace ast;

namespace {

constexpr double kStrictSlack = 1e-6;  // strict inequalities are solved with this margin
constexpr double kZeroAmplitude = 1e-10;
constexpr int kVerifyAttempts = 3;
constexpr double kPolishTarget = 1e-12;
constexpr double kSnapRadius = 1e-3;

std::string show(const QubitSet& s) { return render(non_etg(s)); }

void require_over(const Ptr& gamma, const QubitSet& f) {
  const QubitSet q = qubits_of(gamma);
  if (!is_subset(q, f)) throw ProvisoViolation("formula mentions qubits " + show(set_minus(q, f)) + " outside F");
}

Ptr quantum_core(const Ptr& gamma) {
  Ptr core = expand(gamma);
  if (category_of(*core) != Category::Quantum && !is_classical(*core))
    throw CategoryError("expected a quantum formula");
  return core;
}

// ---- truth table rows, 64 at a time ----

class RowEvaluator {
 public:
  explicit RowEvaluator(const std::vector<Ptr>& atoms) {
    for (std::size_t i = 0; i < atoms.size(); ++i) index_.emplace(atoms[i], static_cast<int>(i));
  }

  // Bit b of the result: the value of n at row 64 * word + b.
  std::uint64_t eval(const Ptr& n, std::uint64_t word) {
    if (word != word_) {
      memo_.clear();
      word_ = word;
    }
    if (auto it = memo_.find(n.get()); it != memo_.end()) return it->second;
    std::uint64_t r;
    if (n->kind == Kind::QNot) {
      r = ~eval(n->args[0], word);
    } else if (n->kind == Kind::QImp) {
      r = ~eval(n->args[0], word) | eval(n->args[1], word);
    } else {
      r = letter(index_.at(n), word);
    }
    memo_.emplace(n.get(), r);
    return r;
  }

 private:
  std::map<Ptr, int, PtrLess> index_;
  std::unordered_map<const Node*, std::uint64_t> memo_;
  std::uint64_t word_ = ~std::uint64_t{0};

  static std::uint64_t letter(int k, std::uint64_t word) {
    static constexpr std::uint64_t patterns[6] = {0xAAAAAAAAAAAAAAAAULL, 0xCCCCCCCCCCCCCCCCULL,
                                                  0xF0F0F0F0F0F0F0F0ULL, 0xFF00FF00FF00FF00ULL,
                                                  0xFFFF0000FFFF0000ULL, 0xFFFFFFFF00000000ULL};
    if (k < 6) return patterns[k];
    return (word >> (k - 6) & 1U) ? ~std::uint64_t{0} : 0;
  }
};

// ---- tableau ----

class Tableau {
 public:
  Tableau(std::size_t limit, std::vector<MolecularFormula>& out) : limit_(limit), out_(out) {}

  void run(const Ptr& core) { branch({{core, true}}, {}); }

 private:
  using Item = std::pair<Ptr, bool>;
  std::size_t limit_;
  std::vector<MolecularFormula>& out_;
  std::set<std::string> seen_;

  bool full() const { return out_.size() >= limit_; }

  void branch(std::vector<Item> todo, std::vector<Item> lits) {
    while (!todo.empty() && !full()) {
      auto [f, sign] = todo.back();
      todo.pop_back();
      if (f->kind == Kind::QNot) {
        todo.emplace_back(f->args[0], !sign);
      } else if (f->kind == Kind::QImp) {
        if (!sign) {
          todo.emplace_back(f->args[1], false);
          todo.emplace_back(f->args[0], true);
        } else {
          auto left = todo;
          left.emplace_back(f->args[0], false);
          branch(std::move(left), lits);
          todo.emplace_back(f->args[1], true);
        }
      } else {
        bool clash = false, present = false;
        for (const auto& [a, s] : lits)
          if (equal(a, f)) (s == sign ? present : clash) = true;
        if (clash) return;
        if (!present) lits.emplace_back(f, sign);
      }
    }
    if (full()) return;
    std::vector<std::string> keys;
    for (const auto& [a, s] : lits) keys.push_back((s ? "+" : "-") + render(a));
    std::sort(keys.begin(), keys.end());
    std::string key;
    for (const auto& k : keys) key += k + "\n";
    if (!seen_.insert(key).second) return;
    MolecularFormula m;
    for (const auto& [a, s] : lits) {
      m.atoms.push_back(a);
      m.positive.push_back(s);
    }
    out_.push_back(std::move(m));
  }
};

// ---- valuations ----

std::vector<Mask> all_valuations(const QubitSet& f) {
  std::vector<Mask> v(std::size_t{1} << f.size());
  for (Mask m = 0; m < v.size(); ++m) v[m] = m;
  return v;
}

std::vector<Mask> restrict_to(const std::vector<Mask>& v, const QubitSet& f, const Ptr& alpha, bool value) {
  std::vector<Mask> out;
  for (Mask m : v)
    if (classical_sat(f, m, *alpha) == value) out.push_back(m);
  return out;
}

bool holds_on(const std::vector<Mask>& v, const QubitSet& f, const Ptr& alpha) {
  return std::all_of(v.begin(), v.end(), [&](Mask m) { return classical_sat(f, m, *alpha); });
}

void collect_guards(const Ptr& n, std::vector<Ptr>& out) {
  if (n->kind == Kind::Ite &&
      std::none_of(out.begin(), out.end(), [&](const Ptr& g) { return equal(g, n->args[0]); }))
    out.push_back(n->args[0]);
  for (const auto& a : n->args) collect_guards(a, out);
}

Ptr squared_modulus(const Ptr& u) { return rmul(abs(u), abs(u)); }

Ptr sum_or_zero(const std::vector<Ptr>& xs) { return xs.empty() ? num(0) : big_radd(xs); }

// Pr and alternative terms evaluated against a fixed admissible set.
Ptr resolve(const Ptr& literal, const std::vector<Mask>& v, const QubitSet& f) {
  return rewrite(literal, [&](const Ptr& n) -> Ptr {
    if (n->kind == Kind::Prob) {
      std::vector<Ptr> parts;
      for (Mask m : v)
        if (classical_sat(f, m, *n->args[0])) parts.push_back(squared_modulus(amp(f, subset_from_mask(f, m))));
      return sum_or_zero(parts);
    }
    if (n->kind == Kind::Ite) return holds_on(v, f, n->args[0]) ? n->args[1] : n->args[2];
    return n;
  });
}

bool is_union(const QubitSet& g, const std::vector<QubitSet>& partition) {
  QuantumStructure w;
  w.partition = partition;
  return w.is_union_of_blocks(g);
}

void set_partitions(const QubitSet& f, std::size_t i, std::vector<QubitSet>& cur,
                    std::vector<std::vector<QubitSet>>& out) {
  if (i == f.size()) {
    out.push_back(cur);
    return;
  }
  for (std::size_t b = 0; b < cur.size(); ++b) {
    cur[b].push_back(f[i]);
    set_partitions(f, i + 1, cur, out);
    cur[b].pop_back();
  }
  cur.push_back({f[i]});
  set_partitions(f, i + 1, cur, out);
  cur.pop_back();
}

bool mentions_amplitude(const Node& n) {
  if (n.kind == Kind::Amp) return true;
  return std::any_of(n.args.begin(), n.args.end(), [](const Ptr& a) { return mentions_amplitude(*a); });
}

// A literal without variables or amplitudes that evaluates to false.
bool ground_false(const Ptr& literal) {
  const Symbols s = free_symbols(literal);
  if (!s.real_vars.empty() || !s.complex_vars.empty() || mentions_amplitude(*literal)) return false;
  try {
    return !Evaluator(nullptr, Assignment{}).satisfies(*literal);
  } catch (const std::exception&) {
    return false;
  }
}

bool is_literal(const Node& c) {
  return c.kind == Kind::Leq || (c.kind == Kind::QNot && c.args[0]->kind == Kind::Leq);
}

// ---- Levenberg-Marquardt over the penalty residuals ----

struct Slot {
  bool complex = false;
  int var = 0;
};

Assignment assignment_of(const std::vector<Slot>& slots, const Eigen::VectorXd& x) {
  Assignment rho;
  for (std::size_t i = 0, k = 0; i < slots.size(); ++i) {
    if (slots[i].complex) {
      rho.complexes[slots[i].var] = Complex(x[k], x[k + 1]);
      k += 2;
    } else {
      rho.reals[slots[i].var] = x[k++];
    }
  }
  return rho;
}

// Residuals as a function of the free coordinates; the others stay at `base`.
struct Penalty {
  using Scalar = double;
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

  const ConstraintSystem* sys;
  const std::vector<Slot>* slots;
  Eigen::VectorXd base;
  std::vector<int> free;
  int m;

  int inputs() const { return static_cast<int>(free.size()); }
  int values() const { return m; }

  Eigen::VectorXd full(const Eigen::VectorXd& x) const {
    Eigen::VectorXd y = base;
    for (std::size_t i = 0; i < free.size(); ++i) y[free[i]] = x[static_cast<Eigen::Index>(i)];
    return y;
  }

  int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& fvec) const {
    const auto r = residuals(*sys, assignment_of(*slots, full(x)));
    fvec.setZero(m);
    for (std::size_t i = 0; i < r.size(); ++i) fvec[static_cast<Eigen::Index>(i)] = r[i];
    return 0;
  }
};

double max_abs(const std::vector<double>& r) {
  double best = 0;
  for (double x : r) best = std::max(best, std::abs(x));
  return best;
}

}  // namespace

// ---- DNF and cubes ----

std::vector<MolecularFormula> quantum_dnf(const Ptr& gamma, const QubitSet& f, std::size_t atom_budget) {
  require_over(gamma, f);
  const Ptr core = quantum_core(gamma);
  const auto atoms = quantum_atoms(core);
  if (atoms.size() > atom_budget)
    throw AtomBudgetExceeded("formula has " + std::to_string(atoms.size()) + " quantum atoms, budget is " +
                             std::to_string(atom_budget));
  RowEvaluator ev(atoms);
  const std::uint64_t rows = std::uint64_t{1} << atoms.size();
  std::vector<MolecularFormula> out;
  for (std::uint64_t word = 0; word * 64 < rows; ++word) {
    std::uint64_t bits = ev.eval(core, word);
    if (rows < 64) bits &= (std::uint64_t{1} << rows) - 1;
    for (int b = 0; b < 64; ++b) {
      if (!(bits >> b & 1U)) continue;
      const std::uint64_t row = word * 64 + b;
      MolecularFormula m{atoms, {}};
      for (std::size_t k = 0; k < atoms.size(); ++k) m.positive.push_back(row >> k & 1U);
      out.push_back(std::move(m));
    }
  }
  return out;
}

std::vector<MolecularFormula> implicant_cubes(const Ptr& gamma, std::size_t limit) {
  std::vector<MolecularFormula> out;
  Tableau(limit, out).run(quantum_core(gamma));
  return out;
}

Ptr eliminate_nonentanglement(const MolecularFormula& m, const QubitSet& f) {
  std::vector<Ptr> lits;
  for (std::size_t i = 0; i < m.atoms.size(); ++i) {
    Ptr a = m.atoms[i];
    if (a->kind == Kind::NonEtg) a = expand(cond_non_etg(a->set_a, f));
    lits.push_back(m.positive[i] ? a : qneg(a));
  }
  return big_qand(lits);
}

// ---- Henkin completion ----

std::vector<Completion> henkin_complete(const MolecularFormula& m, const QubitSet& f, std::size_t max_sets) {
  std::vector<Ptr> must, must_not, arithmetic;
  std::vector<std::pair<QubitSet, bool>> entanglement;
  for (std::size_t i = 0; i < m.atoms.size(); ++i) {
    const Ptr& a = m.atoms[i];
    if (is_classical(*a)) {
      (m.positive[i] ? must : must_not).push_back(a);
    } else if (a->kind == Kind::NonEtg) {
      entanglement.emplace_back(a->set_a, m.positive[i]);
    } else if (a->kind == Kind::Leq) {
      arithmetic.push_back(m.positive[i] ? a : qneg(a));
    } else {
      throw CategoryError("molecular formula over a non-core atom: " + render(a));
    }
  }

  std::vector<Mask> top = all_valuations(f);
  for (const auto& a : must) top = restrict_to(top, f, a, true);
  if (top.empty()) throw AllBranchesInconsistent("the asserted classical formulas have no common model");
  for (const auto& a : must_not)
    if (restrict_to(top, f, a, false).empty())
      throw AllBranchesInconsistent("no admissible valuation can refute " + render(a));

  // Close the largest admissible set under the guards of alternative terms.
  std::vector<Ptr> guards;
  for (const auto& l : arithmetic) collect_guards(l, guards);
  std::set<std::vector<Mask>> sets{top};
  std::vector<std::vector<Mask>> frontier{top};
  const std::size_t cap = 8 * std::max<std::size_t>(max_sets, 1);
  while (!frontier.empty() && sets.size() < cap) {
    std::vector<std::vector<Mask>> next;
    for (const auto& s : frontier)
      for (const auto& g : guards) {
        auto r = restrict_to(s, f, g, true);
        if (!r.empty() && sets.insert(r).second) next.push_back(std::move(r));
      }
    frontier = std::move(next);
  }
  std::vector<std::vector<Mask>> ordered(sets.begin(), sets.end());
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });

  std::vector<Completion> out;
  for (const auto& v : ordered) {
    if (out.size() >= max_sets) break;
    const bool witnessed = std::all_of(must_not.begin(), must_not.end(),
                                       [&](const Ptr& a) { return !holds_on(v, f, a); });
    if (!witnessed) continue;
    Completion c{v, {}, entanglement};
    for (const auto& l : arithmetic) c.arithmetic.push_back(resolve(l, v, f));
    if (std::none_of(c.arithmetic.begin(), c.arithmetic.end(), ground_false)) out.push_back(std::move(c));
  }
  return out;
}

std::vector<std::vector<QubitSet>> partition_search(const Completion& c, const QubitSet& f) {
  if (f.size() > 8) throw Error("partition search supports at most 8 qubits");
  std::vector<std::vector<QubitSet>> all;
  std::vector<QubitSet> cur;
  set_partitions(f, 0, cur, all);
  for (auto& p : all) std::sort(p.begin(), p.end());
  std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() > b.size() : a < b;
  });
  std::vector<std::vector<QubitSet>> out;
  for (const auto& p : all) {
    const bool ok = std::all_of(c.entanglement.begin(), c.entanglement.end(),
                                [&](const auto& e) { return is_union(e.first, p) == e.second; });
    if (ok) out.push_back(p);
  }
  return out;
}

// ---- constraint system ----

ConstraintSystem emit_system(const Completion& c, const QubitSet& f, const std::vector<QubitSet>& partition) {
  ConstraintSystem sys;
  sys.frame = f;
  sys.admissible = c.admissible;
  sys.partition = partition;
  for (const auto& l : c.arithmetic) {
    const Symbols s = free_symbols(l);
    sys.real_vars.insert(s.real_vars.begin(), s.real_vars.end());
    sys.complex_vars.insert(s.complex_vars.begin(), s.complex_vars.end());
  }
  int next = sys.complex_vars.empty() ? 1 : *sys.complex_vars.rbegin() + 1;
  auto fresh = [&](const QubitSet& g, const QubitSet& a, bool block) {
    sys.amp_vars.push_back({g, a, next, block});
    sys.complex_vars.insert(next);
    return complex_var(next++);
  };

  // Block amplitudes; a valuation of a block that no admissible valuation
  // extends has amplitude 0.
  std::map<std::pair<QubitSet, QubitSet>, Ptr> block_term;
  for (const auto& b : partition) {
    const auto seen = project_valuations(f, c.admissible, b, Side::Inside);
    for (const auto& a : all_subsets(b))
      block_term[{b, a}] = std::binary_search(seen.begin(), seen.end(), valuation_of(b, a))
                               ? fresh(b, a, true)
                               : complex_const(0);
  }
  std::map<std::pair<QubitSet, QubitSet>, Ptr> overrides;
  auto amplitude = [&](const QubitSet& g, const QubitSet& a) -> Ptr {
    if (is_union(g, partition)) {
      Ptr acc;
      for (const auto& b : partition) {
        if (!is_subset(b, g)) continue;
        const Ptr z = block_term.at({b, set_intersection(a, b)});
        acc = acc ? cmul(acc, z) : z;
      }
      return acc ? acc : complex_const(1);
    }
    auto [it, inserted] = overrides.emplace(std::make_pair(g, a), nullptr);
    if (inserted) it->second = fresh(g, a, false);
    return it->second;
  };
  auto is_zero = [](const Ptr& u) { return equal(u, complex_const(0)); };

  std::vector<Ptr> lits;
  for (const auto& l : c.arithmetic) {
    lits.push_back(rewrite(l, [&](const Ptr& n) -> Ptr {
      if (n->kind == Kind::Amp) return amplitude(n->set_a, n->set_b);
      if (n->kind == Kind::Prob || n->kind == Kind::Ite || n->kind == Kind::AmpOf || n->kind == Kind::SumSq)
        throw Error("unresolved term in completed formula: " + render(n));
      return n;
    }));
  }
  // (a <= b) together with (b <= a) is solved as the equation (a = b).
  std::vector<bool> used(lits.size(), false);
  for (std::size_t i = 0; i < lits.size(); ++i) {
    if (used[i]) continue;
    const Ptr& l = lits[i];
    Ptr merged;
    if (l->kind == Kind::Leq)
      for (std::size_t j = i + 1; j < lits.size() && !merged; ++j)
        if (!used[j] && lits[j]->kind == Kind::Leq && equal(lits[j]->args[0], l->args[1]) &&
            equal(lits[j]->args[1], l->args[0])) {
          used[j] = true;
          merged = eq(l->args[0], l->args[1]);
        }
    sys.constraints.push_back(merged ? merged : l);
  }
  for (const auto& b : partition) {
    std::vector<Ptr> parts;
    for (const auto& a : all_subsets(b))
      if (const Ptr& z = block_term.at({b, a}); !is_zero(z)) parts.push_back(squared_modulus(z));
    sys.constraints.push_back(eq(sum_or_zero(parts), num(1)));
  }
  for (Mask v = 0; v < (Mask{1} << f.size()); ++v) {
    if (std::binary_search(c.admissible.begin(), c.admissible.end(), v)) continue;
    const QubitSet a = subset_from_mask(f, v);
    bool vanishes = false;
    for (const auto& b : partition) vanishes = vanishes || is_zero(block_term.at({b, set_intersection(a, b)}));
    if (!vanishes) sys.constraints.push_back(ceq(amplitude(f, a), complex_const(0)));
  }
  return sys;
}

std::vector<double> residuals(const ConstraintSystem& sys, const Assignment& values) {
  const Evaluator ev(nullptr, values);
  std::vector<double> out;
  for (const auto& c : sys.constraints) {
    const auto& a = c->args;
    try {
      switch (c->kind) {
        case Kind::Leq: out.push_back(std::max(0.0, ev.real(*a[0]) - ev.real(*a[1]))); break;
        case Kind::QNot: {
          const auto& b = a[0]->args;
          out.push_back(std::max(0.0, ev.real(*b[1]) - ev.real(*b[0]) + kStrictSlack));
          break;
        }
        case Kind::Eq: out.push_back(ev.real(*a[0]) - ev.real(*a[1])); break;
        case Kind::CEq: {
          const Complex d = ev.complex(*a[0]) - ev.complex(*a[1]);
          out.push_back(d.real());
          out.push_back(d.imag());
          break;
        }
        default: throw Error("not a constraint: " + render(c));
      }
    } catch (const UnboundVariable&) {
      throw;
    } catch (const std::exception&) {
      out.push_back(1e6);  // outside the domain of some operation
    }
  }
  return out;
}

SolveResult solve(const ConstraintSystem& sys, const SolverConfig& config) {
  SolveResult result;
  for (const auto& c : sys.constraints)
    if (ground_false(c)) {
      result.status = SolveResult::Status::Inconsistent;
      result.reason = "constraint " + render(c) + " is false";
      return result;
    }
  // Exact refutation first: the oracle proves the negated system valid.
  {
    std::vector<Ptr> parts;
    for (const auto& c : sys.constraints) parts.push_back(is_literal(*c) ? c : expand(c));
    const OracleVerdict v = oracle_check(qneg(big_qand(parts)), config.oracle);
    if (v.verdict == Verdict::Valid) {
      result.status = SolveResult::Status::Inconsistent;
      result.reason = "constraints refuted (" + v.reason + ")";
      return result;
    }
  }

  std::vector<Slot> slots;
  for (int k : sys.real_vars) slots.push_back({false, k});
  for (int k : sys.complex_vars) slots.push_back({true, k});
  std::map<int, int> offset;  // complex variable -> position of its real part
  int n = 0;
  for (const auto& s : slots) {
    if (s.complex) offset[s.var] = n;
    n += s.complex ? 2 : 1;
  }
  std::map<QubitSet, std::vector<int>> block_vars;
  std::vector<int> amp_offsets;
  for (const auto& z : sys.amp_vars) {
    if (z.block) block_vars[z.g].push_back(z.var);
    amp_offsets.push_back(offset[z.var]);
  }

  const int m = std::max<int>(n, static_cast<int>(residuals(sys, assignment_of(slots, Eigen::VectorXd::Zero(n))).size()));
  auto score = [&](const Eigen::VectorXd& x) { return max_abs(residuals(sys, assignment_of(slots, x))); };
  // Minimizes over the coordinates not in `fixed`, in place.
  auto descend = [&](Eigen::VectorXd& x, const std::set<int>& fixed) {
    Penalty penalty{&sys, &slots, x, {}, m};
    for (int i = 0; i < n; ++i)
      if (!fixed.count(i)) penalty.free.push_back(i);
    if (penalty.free.empty()) return;
    Eigen::VectorXd y(penalty.free.size());
    for (std::size_t i = 0; i < penalty.free.size(); ++i) y[static_cast<Eigen::Index>(i)] = x[penalty.free[i]];
    Eigen::NumericalDiff<Penalty> diff(penalty);
    Eigen::LevenbergMarquardt<Eigen::NumericalDiff<Penalty>> lm(diff);
    lm.parameters.maxfev = 200 * (n + 1);
    lm.parameters.ftol = 1e-15;
    lm.parameters.xtol = 1e-15;
    lm.parameters.gtol = 0;
    lm.minimize(y);
    x = penalty.full(y);
  };

  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> normal;
  result.residual = std::numeric_limits<double>::infinity();
  for (int r = 0; r < std::max(config.restarts, 1); ++r) {
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x[i] = normal(rng);
    for (const auto& [g, vars] : block_vars) {
      double norm = 0;
      for (int v : vars) norm += x[offset[v]] * x[offset[v]] + x[offset[v] + 1] * x[offset[v] + 1];
      for (int v : vars) {
        x[offset[v]] /= std::sqrt(norm);
        x[offset[v] + 1] /= std::sqrt(norm);
      }
    }
    descend(x, {});
    double res = score(x);
    // Amplitudes forced to vanish converge slowly; pin the small ones to 0.
    if (res > kPolishTarget) {
      Eigen::VectorXd y = x;
      std::set<int> fixed;
      for (int k : amp_offsets)
        if (std::hypot(y[k], y[k + 1]) < kSnapRadius) {
          y[k] = y[k + 1] = 0;
          fixed.insert(k);
          fixed.insert(k + 1);
        }
      if (!fixed.empty()) {
        descend(y, fixed);
        if (const double polished = score(y); polished < res) {
          x = y;
          res = polished;
        }
      }
    }
    if (res < result.residual) {
      result.residual = res;
      result.values = assignment_of(slots, x);
    }
    if (result.residual <= config.tol) {
      result.status = SolveResult::Status::Solution;
      return result;
    }
    if (n == 0) break;
  }
  std::ostringstream why;
  why << "no solution found, best residual " << result.residual;
  result.reason = why.str();
  return result;
}

// ---- model reconstruction ----

std::pair<QuantumStructure, Assignment> build_model(const ConstraintSystem& sys, const Assignment& values) {
  QuantumStructure w;
  w.frame = sys.frame;
  w.admissible = sys.admissible;
  std::map<std::pair<QubitSet, QubitSet>, int> var_of;
  std::set<int> amp_indices;
  for (const auto& z : sys.amp_vars) {
    var_of[{z.g, z.a}] = z.var;
    amp_indices.insert(z.var);
  }

  std::vector<StateVector> todo;
  for (const auto& b : sys.partition) {
    StateVector s{b, std::vector<Complex>(std::size_t{1} << b.size())};
    for (const auto& a : all_subsets(b)) {
      auto it = var_of.find({b, a});
      Complex z = it == var_of.end() ? Complex{} : values.complex(it->second);
      if (std::abs(z) < kZeroAmplitude) z = 0;
      s.amps[valuation_of(b, a)] = z;
    }
    const double norm = s.norm();
    if (norm == 0) throw ValidationFailed("block " + show(b) + " has no amplitude");
    for (auto& z : s.amps) z /= norm;
    todo.push_back(std::move(s));
  }
  // Split factorizable blocks until every block is entangled.
  std::vector<StateVector> blocks;
  while (!todo.empty()) {
    StateVector s = std::move(todo.back());
    todo.pop_back();
    bool split = false;
    const QubitSet tail(s.carrier.begin() + (s.carrier.empty() ? 0 : 1), s.carrier.end());
    for (const auto& t : all_subsets(tail)) {
      if (t.size() == tail.size()) continue;
      QubitSet part = t;
      part.insert(part.begin(), s.carrier.front());
      const Factorization fz = schmidt_factor(s, part);
      if (fz.factorizable) {
        todo.push_back(*fz.left);
        todo.push_back(*fz.right);
        split = true;
        break;
      }
    }
    if (!split) blocks.push_back(std::move(s));
  }
  std::sort(blocks.begin(), blocks.end(), [](const auto& a, const auto& b) { return a.carrier < b.carrier; });
  for (auto& s : blocks) {
    w.partition.push_back(s.carrier);
    w.blocks.push_back(std::move(s));
  }
  for (const auto& z : sys.amp_vars)
    if (!z.block && !w.is_union_of_blocks(z.g)) w.nu_overrides[{z.g, z.a}] = values.complex(z.var);

  const auto diags = validate_structure(w);
  if (!diags.empty()) {
    std::string msg = "reconstructed structure is invalid:";
    for (const auto& d : diags) msg += " " + std::string(diagnostic_name(d.kind)) + " (" + d.message + ")";
    throw ValidationFailed(msg);
  }
  Assignment rho;
  for (int k : sys.real_vars) rho.reals[k] = values.real(k);
  for (int k : sys.complex_vars)
    if (!amp_indices.count(k)) rho.complexes[k] = values.complex(k);
  return {std::move(w), std::move(rho)};
}

// ---- driver ----

std::string_view status_name(FindResult::Status s) {
  switch (s) {
    case FindResult::Status::Model: return "Model";
    case FindResult::Status::NoModelFound: return "NoModelFound";
    case FindResult::Status::Inconsistent: return "Inconsistent";
  }
  return "?";
}

namespace {

std::string show_partition(const std::vector<QubitSet>& p) {
  std::string s = "{";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + show(p[i]);
  return s + "}";
}

// Exact refutation of a cube from its arithmetic literals alone, with every
// non-arithmetical term read as an unknown.
std::optional<std::string> refute_arithmetic(const MolecularFormula& m, const OracleConfig& oracle) {
  std::vector<Ptr> lits;
  for (std::size_t i = 0; i < m.atoms.size(); ++i)
    if (m.atoms[i]->kind == Kind::Leq) lits.push_back(m.positive[i] ? m.atoms[i] : qneg(m.atoms[i]));
  if (lits.empty()) return std::nullopt;
  const Ptr conj = big_qand(lits);
  const Ptr abstracted = detail::Abstraction(conj).formula(conj);
  const OracleVerdict v = oracle_check(qneg(abstracted), oracle);
  if (v.verdict == Verdict::Valid) return "arithmetic literals are contradictory (" + v.reason + ")";
  return std::nullopt;
}

}  // namespace

FindResult find_model(const Ptr& gamma, const QubitSet& f, const FinderConfig& config) {
  require_over(gamma, f);
  FindResult result;
  const Symbols syms = free_symbols(gamma);
  auto cubes = implicant_cubes(gamma, config.max_cubes + 1);
  const bool truncated = cubes.size() > config.max_cubes;
  if (truncated) cubes.resize(config.max_cubes);
  if (cubes.empty()) {
    result.status = FindResult::Status::Inconsistent;
    result.reason = "the formula is a propositional contradiction over its quantum atoms";
    return result;
  }

  bool all_refuted = !truncated;
  std::size_t systems = 0;
  std::vector<std::string> refutations;
  for (std::size_t k = 0; k < cubes.size(); ++k) {
    const std::string tag = "cube " + std::to_string(k + 1) + ": ";
    if (auto why = refute_arithmetic(cubes[k], config.solver.oracle)) {
      result.report.push_back(tag + "refuted, " + *why);
      refutations.push_back(*why);
      continue;
    }
    std::vector<Completion> completions;
    try {
      completions = henkin_complete(cubes[k], f, config.max_sets);
    } catch (const AllBranchesInconsistent& e) {
      result.report.push_back(tag + "refuted, " + e.what());
      refutations.push_back(e.what());
      continue;
    }
    if (completions.empty()) {
      result.report.push_back(tag + "no admissible set survives the resolved literals");
      all_refuted = false;
      continue;
    }
    const auto partitions = partition_search(completions.front(), f);
    if (partitions.empty()) {
      const std::string why = "no partition of F meets the [G] literals";
      result.report.push_back(tag + "refuted, " + why);
      refutations.push_back(why);
      continue;
    }
    all_refuted = false;
    for (const auto& c : completions) {
      for (const auto& p : partitions) {
        if (systems >= config.max_systems) {
          result.report.push_back(tag + "solver budget exhausted");
          result.reason = "solver budget exhausted";
          return result;
        }
        ++systems;
        ConstraintSystem sys = emit_system(c, f, p);
        sys.real_vars.insert(syms.real_vars.begin(), syms.real_vars.end());
        sys.complex_vars.insert(syms.complex_vars.begin(), syms.complex_vars.end());
        std::string line = tag + "|V|=" + std::to_string(c.admissible.size()) + " partition " + show_partition(p) + ": ";
        // A solution can still miss the formula (e.g. a block state that
        // factorizes); a few reseeded attempts are made before giving up.
        SolverConfig solver = config.solver;
        std::string outcome;
        for (int attempt = 0; attempt < kVerifyAttempts; ++attempt, solver.seed += 7919) {
          const SolveResult r = solve(sys, solver);
          if (r.status != SolveResult::Status::Solution) {
            outcome = r.reason;
            break;
          }
          try {
            auto [w, rho] = build_model(sys, r.values);
            if (satisfies(w, rho, gamma)) {
              result.report.push_back(line + "model found");
              result.status = FindResult::Status::Model;
              result.structure = std::move(w);
              result.assignment = std::move(rho);
              return result;
            }
            outcome = "solution does not satisfy the formula";
          } catch (const Error& e) {
            outcome = e.what();
          }
        }
        result.report.push_back(line + outcome);
      }
    }
  }
  if (all_refuted) {
    result.status = FindResult::Status::Inconsistent;
    result.reason = refutations.empty() ? "every branch is refuted" : refutations.front();
  } else {
    result.reason = "no model found in the explored branches";
  }
  return result;
}

}  // namespace eqpl
