#include <cassert>
#include <sstream>

#include "eqpl/syntax.hpp"

namespace eqpl {

std::string_view category_name(Category c) {
  switch (c) {
    case Category::Classical: return "classical";
    case Category::Real: return "real";
    case Category::Complex: return "complex";
    case Category::Quantum: return "quantum";
  }
  return "?";
}

bool equal(const Node& a, const Node& b) {
  if (a.kind != b.kind || a.index != b.index || a.index2 != b.index2 || a.text != b.text ||
      a.set_a != b.set_a || a.set_b != b.set_b || a.args.size() != b.args.size())
    return false;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!equal(*a.args[i], *b.args[i])) return false;
  return true;
}

bool equal(const Ptr& a, const Ptr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return equal(*a, *b);
}

namespace {
int compare(const Node& a, const Node& b) {
  if (&a == &b) return 0;
  if (a.kind != b.kind) return a.kind < b.kind ? -1 : 1;
  if (a.index != b.index) return a.index < b.index ? -1 : 1;
  if (a.index2 != b.index2) return a.index2 < b.index2 ? -1 : 1;
  if (int c = a.text.compare(b.text); c != 0) return c < 0 ? -1 : 1;
  if (a.set_a != b.set_a) return a.set_a < b.set_a ? -1 : 1;
  if (a.set_b != b.set_b) return a.set_b < b.set_b ? -1 : 1;
  if (a.args.size() != b.args.size()) return a.args.size() < b.args.size() ? -1 : 1;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (int c = compare(*a.args[i], *b.args[i]); c != 0) return c;
  return 0;
}
}  // namespace

bool less(const Ptr& a, const Ptr& b) { return compare(*a, *b) < 0; }

Category category_of(const Node& n) {
  switch (n.kind) {
    case Kind::Qubit:
    case Kind::Top:
    case Kind::Not:
    case Kind::Imp:
    case Kind::And:
    case Kind::Or:
    case Kind::Iff:
    case Kind::Bot:
    case Kind::Molecular: return Category::Classical;
    case Kind::RealVar:
    case Kind::Num:
    case Kind::Pi:
    case Kind::Euler:
    case Kind::Sqrt:
    case Kind::Div:
    case Kind::Prob:
    case Kind::RAdd:
    case Kind::RMul:
    case Kind::Re:
    case Kind::Im:
    case Kind::Arg:
    case Kind::Abs:
    case Kind::SumSq: return Category::Real;
    case Kind::CVar:
    case Kind::Amp:
    case Kind::AmpOf:
    case Kind::Cart:
    case Kind::Polar:
    case Kind::Conj:
    case Kind::CAdd:
    case Kind::CMul:
    case Kind::Ite: return Category::Complex;
    case Kind::Meta: return static_cast<Category>(n.index2);
    default: return Category::Quantum;
  }
}

bool is_classical(const Node& n) { return category_of(n) == Category::Classical; }

bool is_core(const Node& n) {
  switch (n.kind) {
    case Kind::And:
    case Kind::Or:
    case Kind::Iff:
    case Kind::Bot:
    case Kind::Molecular:
    case Kind::SumSq:
    case Kind::AmpOf:
    case Kind::QOr:
    case Kind::QAnd:
    case Kind::QIff:
    case Kind::Lt:
    case Kind::Eq:
    case Kind::CEq:
    case Kind::CondNonEtg:
    case Kind::Entangled:
    case Kind::Poss:
    case Kind::Dia:
    case Kind::Box: return false;
    default: break;
  }
  for (const auto& a : n.args)
    if (!is_core(*a)) return false;
  return true;
}

namespace ast {
namespace {
Ptr make(Kind k, std::vector<Ptr> args = {}) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->args = std::move(args);
  return n;
}
Ptr make_sets(Kind k, QubitSet a, QubitSet b, std::vector<Ptr> args = {}) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->set_a = std::move(a);
  n->set_b = std::move(b);
  n->args = std::move(args);
  return n;
}
}  // namespace

Ptr qubit(int k) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Qubit;
  n->index = k;
  return n;
}
Ptr top() { return make(Kind::Top); }
Ptr bot() { return make(Kind::Bot); }
Ptr neg(Ptr a) { return make(Kind::Not, {std::move(a)}); }
Ptr imp(Ptr a, Ptr b) { return make(Kind::Imp, {std::move(a), std::move(b)}); }
Ptr conj_c(Ptr a, Ptr b) { return make(Kind::And, {std::move(a), std::move(b)}); }
Ptr disj_c(Ptr a, Ptr b) { return make(Kind::Or, {std::move(a), std::move(b)}); }
Ptr iff_c(Ptr a, Ptr b) { return make(Kind::Iff, {std::move(a), std::move(b)}); }
Ptr molecular(QubitSet f, QubitSet a) { return make_sets(Kind::Molecular, std::move(f), std::move(a)); }

Ptr real_var(int k) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::RealVar;
  n->index = k;
  return n;
}
Ptr num(std::string text) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Num;
  n->text = std::move(text);
  return n;
}
Ptr num(long long v) { return num(std::to_string(v)); }
Ptr pi() { return make(Kind::Pi); }
Ptr euler() { return make(Kind::Euler); }
Ptr sqrt_c(Ptr c) { return make(Kind::Sqrt, {std::move(c)}); }
Ptr div_c(Ptr a, Ptr b) { return make(Kind::Div, {std::move(a), std::move(b)}); }
Ptr prob(Ptr alpha) { return make(Kind::Prob, {std::move(alpha)}); }
Ptr radd(Ptr a, Ptr b) { return make(Kind::RAdd, {std::move(a), std::move(b)}); }
Ptr rmul(Ptr a, Ptr b) { return make(Kind::RMul, {std::move(a), std::move(b)}); }
Ptr re(Ptr u) { return make(Kind::Re, {std::move(u)}); }
Ptr im(Ptr u) { return make(Kind::Im, {std::move(u)}); }
Ptr arg(Ptr u) { return make(Kind::Arg, {std::move(u)}); }
Ptr abs(Ptr u) { return make(Kind::Abs, {std::move(u)}); }
Ptr sumsq(QubitSet f, Ptr alpha) { return make_sets(Kind::SumSq, std::move(f), {}, {std::move(alpha)}); }

Ptr complex_var(int k) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::CVar;
  n->index = k;
  return n;
}
Ptr amp(QubitSet f, QubitSet a) { return make_sets(Kind::Amp, std::move(f), std::move(a)); }
Ptr amp_of(QubitSet f, QubitSet a, Ptr alpha) {
  return make_sets(Kind::AmpOf, std::move(f), std::move(a), {std::move(alpha)});
}
Ptr cart(Ptr t1, Ptr t2) { return make(Kind::Cart, {std::move(t1), std::move(t2)}); }
Ptr polar(Ptr t1, Ptr t2) { return make(Kind::Polar, {std::move(t1), std::move(t2)}); }
Ptr conj(Ptr u) { return make(Kind::Conj, {std::move(u)}); }
Ptr cadd(Ptr a, Ptr b) { return make(Kind::CAdd, {std::move(a), std::move(b)}); }
Ptr cmul(Ptr a, Ptr b) { return make(Kind::CMul, {std::move(a), std::move(b)}); }
Ptr ite(Ptr alpha, Ptr u1, Ptr u2) { return make(Kind::Ite, {std::move(alpha), std::move(u1), std::move(u2)}); }
Ptr complex_const(long long re, long long im) { return cart(num(re), num(im)); }

Ptr leq(Ptr t1, Ptr t2) { return make(Kind::Leq, {std::move(t1), std::move(t2)}); }
Ptr non_etg(QubitSet f) { return make_sets(Kind::NonEtg, std::move(f), {}); }
Ptr qneg(Ptr g) { return make(Kind::QNot, {std::move(g)}); }
Ptr qimp(Ptr g, Ptr h) { return make(Kind::QImp, {std::move(g), std::move(h)}); }
Ptr qor(Ptr g, Ptr h) { return make(Kind::QOr, {std::move(g), std::move(h)}); }
Ptr qand(Ptr g, Ptr h) { return make(Kind::QAnd, {std::move(g), std::move(h)}); }
Ptr qiff(Ptr g, Ptr h) { return make(Kind::QIff, {std::move(g), std::move(h)}); }
Ptr lt(Ptr t1, Ptr t2) { return make(Kind::Lt, {std::move(t1), std::move(t2)}); }
Ptr eq(Ptr t1, Ptr t2) { return make(Kind::Eq, {std::move(t1), std::move(t2)}); }
Ptr ceq(Ptr u1, Ptr u2) { return make(Kind::CEq, {std::move(u1), std::move(u2)}); }
Ptr cond_non_etg(QubitSet g, QubitSet f) { return make_sets(Kind::CondNonEtg, std::move(g), std::move(f)); }
Ptr entangled(int i, int j, QubitSet f) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Entangled;
  n->index = i;
  n->index2 = j;
  n->set_a = std::move(f);
  return n;
}
Ptr poss(QubitSet f, std::vector<std::pair<Ptr, Ptr>> items) {
  std::vector<Ptr> args;
  for (auto& [a, u] : items) {
    args.push_back(std::move(a));
    args.push_back(std::move(u));
  }
  return make_sets(Kind::Poss, std::move(f), {}, std::move(args));
}
Ptr dia(Ptr alpha) { return make(Kind::Dia, {std::move(alpha)}); }
Ptr box(Ptr alpha) { return make(Kind::Box, {std::move(alpha)}); }
Ptr meta(int id, Category c) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Meta;
  n->index = id;
  n->index2 = static_cast<int>(c);
  return n;
}

namespace {
template <typename Op>
Ptr fold_right(const std::vector<Ptr>& xs, Op op) {
  Ptr acc = xs.back();
  for (std::size_t i = xs.size() - 1; i-- > 0;) acc = op(xs[i], acc);
  return acc;
}
}  // namespace

Ptr big_and(const std::vector<Ptr>& xs) { return xs.empty() ? top() : fold_right(xs, conj_c); }
Ptr big_qand(const std::vector<Ptr>& xs) { return xs.empty() ? top() : fold_right(xs, qand); }
Ptr big_qor(const std::vector<Ptr>& xs) { return xs.empty() ? qneg(top()) : fold_right(xs, qor); }
Ptr big_radd(const std::vector<Ptr>& xs) {
  assert(!xs.empty());
  return fold_right(xs, radd);
}

Ptr quantum_molecular(const std::vector<Ptr>& atoms, const std::vector<bool>& positive) {
  std::vector<Ptr> lits;
  for (std::size_t i = 0; i < atoms.size(); ++i) lits.push_back(positive[i] ? atoms[i] : qneg(atoms[i]));
  return big_qand(lits);
}

VectorTerm amp_vector(const QubitSet& f, const Ptr& alpha) {
  VectorTerm w;
  for (auto& a : all_subsets(f)) w.push_back(amp_of(f, a, alpha));
  return w;
}

VectorTerm zero_vector(const QubitSet& f) { return scale(complex_const(0), amp_vector(f, top())); }

VectorTerm scale(const Ptr& u, const VectorTerm& w) {
  VectorTerm r;
  for (auto& c : w) r.push_back(cmul(u, c));
  return r;
}

VectorTerm vsum(const VectorTerm& a, const VectorTerm& b) {
  if (a.size() != b.size()) throw ProvisoViolation("vector terms over different qubit sets");
  VectorTerm r;
  for (std::size_t i = 0; i < a.size(); ++i) r.push_back(cadd(a[i], b[i]));
  return r;
}

Ptr vector_eq(const VectorTerm& a, const VectorTerm& b) {
  if (a.size() != b.size()) throw ProvisoViolation("vector terms over different qubit sets");
  std::vector<Ptr> parts;
  for (std::size_t i = 0; i < a.size(); ++i) parts.push_back(ceq(a[i], b[i]));
  return big_qand(parts);
}

Ptr vector_subset(const VectorTerm& a, const VectorTerm& b) {
  if (a.size() != b.size()) throw ProvisoViolation("vector terms over different qubit sets");
  std::vector<Ptr> parts;
  for (std::size_t i = 0; i < a.size(); ++i)
    parts.push_back(qimp(qneg(ceq(a[i], complex_const(0))), ceq(a[i], b[i])));
  return big_qand(parts);
}
}  // namespace ast

void AliasTable::add(const std::string& name, int qubit) {
  if (auto it = by_name_.find(name); it != by_name_.end() && it->second != qubit)
    throw Error("alias '" + name + "' declared twice");
  if (auto it = by_index_.find(qubit); it != by_index_.end() && it->second != name)
    throw Error("qubit qb" + std::to_string(qubit) + " already has alias '" + it->second + "'");
  by_name_[name] = qubit;
  by_index_[qubit] = name;
}

std::optional<int> AliasTable::lookup(std::string_view name) const {
  if (auto it = by_name_.find(name); it != by_name_.end()) return it->second;
  return std::nullopt;
}

std::optional<std::string> AliasTable::name_of(int qubit) const {
  if (auto it = by_index_.find(qubit); it != by_index_.end()) return it->second;
  return std::nullopt;
}

}  // namespace eqpl
