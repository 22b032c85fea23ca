#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "eqpl/qubit_set.hpp"

namespace eqpl {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& msg, int line, int column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// The text is well formed, but in a different syntactic category.
class CategoryError : public Error {
 public:
  using Error::Error;
};

// A side condition on sets (A ⊆ F, QB(α) ⊆ F, ...) does not hold.
class ProvisoViolation : public Error {
 public:
  using Error::Error;
};

enum class Category : std::uint8_t { Classical, Real, Complex, Quantum };

std::string_view category_name(Category c);

enum class Kind : std::uint8_t {
  // classical formulae
  Qubit,
  Top,
  Not,
  Imp,
  And,
  Or,
  Iff,
  Bot,
  Molecular,  // (/\_F A)
  // real terms
  RealVar,
  Num,    // decimal literal, text kept verbatim
  Pi,
  Euler,
  Sqrt,
  Div,
  Prob,
  RAdd,
  RMul,
  Re,
  Im,
  Arg,
  Abs,
  SumSq,  // sum over A ⊆ F of |amp{F}{A}[alpha]|^2
  // complex terms
  CVar,
  Amp,     // |top>_FA
  AmpOf,   // |alpha>_FA
  Cart,
  Polar,
  Conj,
  CAdd,
  CMul,
  Ite,
  // quantum formulae
  Leq,
  NonEtg,
  QNot,
  QImp,
  QOr,
  QAnd,
  QIff,
  Lt,
  Eq,
  CEq,
  CondNonEtg,  // [G|F]
  Entangled,   // (qb_i ~_F qb_j)
  Poss,        // poss{F}(alpha1 : u1, ...)
  Dia,
  Box,
  // schema metavariable (calculus templates only)
  Meta,
};

struct SourcePos {
  int line = 0;
  int column = 0;
};

struct Node;
using Ptr = std::shared_ptr<const Node>;

// Immutable AST node shared by all four syntactic categories.
//
// Field use per kind:
//   Qubit: index            RealVar/CVar: index        Num: text
//   Molecular/Amp/AmpOf: set_a = F, set_b = A          SumSq: set_a = F
//   NonEtg/Poss: set_a = F  CondNonEtg: set_a = G, set_b = F
//   Entangled: index = i, index2 = j, set_a = F
//   Meta: index = metavariable id, index2 = Category
//   Poss: args alternate alpha_1, u_1, alpha_2, u_2, ...
struct Node {
  Kind kind;
  std::vector<Ptr> args;
  QubitSet set_a;
  QubitSet set_b;
  int index = 0;
  int index2 = 0;
  std::string text;
  SourcePos pos;
};

// Structural equality (source positions ignored).
bool equal(const Node& a, const Node& b);
bool equal(const Ptr& a, const Ptr& b);
// Strict weak order consistent with `equal`.
bool less(const Ptr& a, const Ptr& b);

struct PtrLess {
  bool operator()(const Ptr& a, const Ptr& b) const { return less(a, b); }
};

Category category_of(const Node& n);
bool is_classical(const Node& n);
bool is_core(const Node& n);  // whole tree free of sugar

namespace ast {
Ptr qubit(int k);
Ptr top();
Ptr bot();
Ptr neg(Ptr a);
Ptr imp(Ptr a, Ptr b);
Ptr conj_c(Ptr a, Ptr b);  // classical /\.
Ptr disj_c(Ptr a, Ptr b);
Ptr iff_c(Ptr a, Ptr b);
Ptr molecular(QubitSet f, QubitSet a);

Ptr real_var(int k);
Ptr num(std::string text);
Ptr num(long long v);
Ptr pi();
Ptr euler();
Ptr sqrt_c(Ptr c);
Ptr div_c(Ptr a, Ptr b);
Ptr prob(Ptr alpha);
Ptr radd(Ptr a, Ptr b);
Ptr rmul(Ptr a, Ptr b);
Ptr re(Ptr u);
Ptr im(Ptr u);
Ptr arg(Ptr u);
Ptr abs(Ptr u);
Ptr sumsq(QubitSet f, Ptr alpha);

Ptr complex_var(int k);
Ptr amp(QubitSet f, QubitSet a);
Ptr amp_of(QubitSet f, QubitSet a, Ptr alpha);
Ptr cart(Ptr t1, Ptr t2);
Ptr polar(Ptr t1, Ptr t2);
Ptr conj(Ptr u);
Ptr cadd(Ptr a, Ptr b);
Ptr cmul(Ptr a, Ptr b);
Ptr ite(Ptr alpha, Ptr u1, Ptr u2);
Ptr complex_const(long long re, long long im = 0);

Ptr leq(Ptr t1, Ptr t2);
Ptr non_etg(QubitSet f);
Ptr qneg(Ptr g);
Ptr qimp(Ptr g, Ptr h);
Ptr qor(Ptr g, Ptr h);
Ptr qand(Ptr g, Ptr h);
Ptr qiff(Ptr g, Ptr h);
Ptr lt(Ptr t1, Ptr t2);
Ptr eq(Ptr t1, Ptr t2);
Ptr ceq(Ptr u1, Ptr u2);
Ptr cond_non_etg(QubitSet g, QubitSet f);
Ptr entangled(int i, int j, QubitSet f);
Ptr poss(QubitSet f, std::vector<std::pair<Ptr, Ptr>> items);
Ptr dia(Ptr alpha);
Ptr box(Ptr alpha);
Ptr meta(int id, Category c);

// Right-folded big connectives; the empty conjunction is top and the empty
// quantum disjunction is (! top).
Ptr big_and(const std::vector<Ptr>& xs);
Ptr big_qand(const std::vector<Ptr>& xs);
Ptr big_qor(const std::vector<Ptr>& xs);
Ptr big_radd(const std::vector<Ptr>& xs);

// Quantum molecular formula (⊓_Q D): atoms in D positive, the rest negated.
// Built eagerly as a quantum conjunction, atom order preserved.
Ptr quantum_molecular(const std::vector<Ptr>& atoms, const std::vector<bool>& positive);

// Amplitude vector terms over F, one component per A ⊆ F in subset order.
using VectorTerm = std::vector<Ptr>;
VectorTerm amp_vector(const QubitSet& f, const Ptr& alpha);
VectorTerm zero_vector(const QubitSet& f);
VectorTerm scale(const Ptr& u, const VectorTerm& w);
VectorTerm vsum(const VectorTerm& a, const VectorTerm& b);
Ptr vector_eq(const VectorTerm& a, const VectorTerm& b);
Ptr vector_subset(const VectorTerm& a, const VectorTerm& b);
}  // namespace ast

// Qubit aliases (cati -> 0). Names not in the table must be spelled qbN.
class AliasTable {
 public:
  void add(const std::string& name, int qubit);
  std::optional<int> lookup(std::string_view name) const;
  std::optional<std::string> name_of(int qubit) const;
  bool empty() const { return by_name_.empty(); }
  const std::map<std::string, int, std::less<>>& entries() const { return by_name_; }

 private:
  std::map<std::string, int, std::less<>> by_name_;
  std::map<int, std::string> by_index_;
};

// Parses `alias name = qbN` preamble lines (and `#` comments) off the front of
// `text`, registering them in `aliases`; returns the remaining text.
std::string strip_alias_preamble(std::string_view text, AliasTable& aliases);

Ptr parse(std::string_view text, Category category, const AliasTable& aliases = {});
std::string render(const Ptr& node, const AliasTable* aliases = nullptr);

// Replaces every sugared node by its definition; the result is core.
Ptr expand(const Ptr& node);

struct Symbols {
  QubitSet qubits;
  std::set<int> real_vars;
  std::set<int> complex_vars;
};
Symbols free_symbols(const Ptr& node);
QubitSet qubits_of(const Ptr& node);

// Maximal quantum atoms (classical formulae, comparisons, [F]) of a core
// quantum formula, in first-occurrence order, deduplicated structurally.
std::vector<Ptr> quantum_atoms(const Ptr& core_formula);

// Post-order rebuild helper: applies `f` to every node bottom-up.
template <typename F>
Ptr rewrite(const Ptr& n, F&& f);

}  // namespace eqpl

#include "eqpl/syntax_inl.hpp"
