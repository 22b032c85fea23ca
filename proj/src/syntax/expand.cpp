#include "eqpl/syntax.hpp"

namespace eqpl {
namespace {

using namespace ast;

void require(bool ok, const std::string& what) {
  if (!ok) throw ProvisoViolation(what);
}

std::string show(const QubitSet& s) { return render(non_etg(s)); }

Ptr rebuild(const Ptr& n, std::vector<Ptr> args) {
  auto copy = std::make_shared<Node>(*n);
  copy->args = std::move(args);
  return copy;
}

Ptr expand_node(const Ptr& n);

Ptr expand_children(const Ptr& n) {
  std::vector<Ptr> args;
  args.reserve(n->args.size());
  bool changed = false;
  for (const auto& a : n->args) {
    args.push_back(expand_node(a));
    changed = changed || args.back() != a;
  }
  return changed ? rebuild(n, std::move(args)) : n;
}

Ptr zero() { return complex_const(0); }

Ptr single_possibility(const QubitSet& f, const Ptr& alpha, const Ptr& u) {
  std::vector<Ptr> options;
  for (const auto& a : all_subsets(f)) options.push_back(ceq(amp_of(f, a, alpha), u));
  return big_qand({non_etg(f), lt(num(0), abs(u)), big_qor(options)});
}

Ptr expand_node(const Ptr& n) {
  const auto& a = n->args;
  switch (n->kind) {
    case Kind::And: return expand_node(neg(imp(a[0], neg(a[1]))));
    case Kind::Or: return expand_node(imp(neg(a[0]), a[1]));
    case Kind::Iff: return expand_node(conj_c(imp(a[0], a[1]), imp(a[1], a[0])));
    case Kind::Bot: return neg(top());
    case Kind::Molecular: {
      require(is_subset(n->set_b, n->set_a), "molecular formula needs A ⊆ F, got A=" + show(n->set_b) +
                                                 " F=" + show(n->set_a));
      std::vector<Ptr> lits;
      for (int q : n->set_a) lits.push_back(contains(n->set_b, q) ? qubit(q) : neg(qubit(q)));
      return expand_node(big_and(lits));
    }
    case Kind::Amp:
      require(is_subset(n->set_b, n->set_a), "amplitude term needs A ⊆ F");
      return n;
    case Kind::AmpOf: {
      require(is_subset(n->set_b, n->set_a), "amplitude term needs A ⊆ F");
      require(is_subset(qubits_of(a[0]), n->set_a), "amplitude term |alpha>_FA needs QB(alpha) ⊆ F");
      // |top>_FA is the primitive amplitude itself.
      if (a[0]->kind == Kind::Top) return amp(n->set_a, n->set_b);
      return expand_node(ite(imp(molecular(n->set_a, n->set_b), a[0]), amp(n->set_a, n->set_b), zero()));
    }
    case Kind::SumSq: {
      require(is_subset(qubits_of(a[0]), n->set_a), "sumsq{F}[alpha] needs QB(alpha) ⊆ F");
      std::vector<Ptr> terms;
      for (const auto& s : all_subsets(n->set_a)) {
        Ptr c = amp_of(n->set_a, s, a[0]);
        terms.push_back(rmul(abs(c), abs(c)));
      }
      return expand_node(big_radd(terms));
    }
    case Kind::QOr: return expand_node(qimp(qneg(a[0]), a[1]));
    case Kind::QAnd: return expand_node(qneg(qor(qneg(a[0]), qneg(a[1]))));
    case Kind::QIff: return expand_node(qand(qimp(a[0], a[1]), qimp(a[1], a[0])));
    case Kind::Lt: return expand_node(qand(leq(a[0], a[1]), qneg(leq(a[1], a[0]))));
    case Kind::Eq: return expand_node(qand(leq(a[0], a[1]), leq(a[1], a[0])));
    case Kind::CEq: return expand_node(qand(eq(re(a[0]), re(a[1])), eq(im(a[0]), im(a[1]))));
    case Kind::CondNonEtg: {
      const QubitSet& g = n->set_a;
      const QubitSet& f = n->set_b;
      require(is_subset(g, f), "[G|F] needs G ⊆ F");
      const QubitSet rest = set_minus(f, g);
      std::vector<Ptr> eqs;
      for (const auto& a1 : all_subsets(g))
        for (const auto& a2 : all_subsets(rest))
          eqs.push_back(ceq(amp(f, set_union(a1, a2)), cmul(amp(g, a1), amp(rest, a2))));
      return expand_node(big_qand(eqs));
    }
    case Kind::Entangled: {
      const QubitSet& f = n->set_a;
      require(contains(f, n->index) && contains(f, n->index2) && n->index != n->index2,
              "entanglement formula needs two distinct qubits of F");
      std::vector<Ptr> splits;
      for (const auto& g : all_subsets(f))
        if (contains(g, n->index) && !contains(g, n->index2)) splits.push_back(non_etg(g));
      return expand_node(qneg(big_qor(splits)));
    }
    case Kind::Poss: {
      std::vector<Ptr> parts;
      for (std::size_t i = 0; i < a.size(); i += 2) {
        require(is_subset(qubits_of(a[i]), n->set_a), "possibility formula needs QB(alpha) ⊆ F");
        parts.push_back(single_possibility(n->set_a, a[i], a[i + 1]));
      }
      return expand_node(big_qand(parts));
    }
    case Kind::Dia: return expand_node(lt(num(0), prob(a[0])));
    case Kind::Box: return expand_node(eq(num(1), prob(a[0])));
    default: return expand_children(n);
  }
}

void collect(const Node& n, Symbols& s, std::vector<int>& qs) {
  switch (n.kind) {
    case Kind::Qubit: qs.push_back(n.index); break;
    case Kind::RealVar: s.real_vars.insert(n.index); break;
    case Kind::CVar: s.complex_vars.insert(n.index); break;
    case Kind::Molecular:
    case Kind::Amp:
    case Kind::AmpOf:
    case Kind::SumSq:
    case Kind::NonEtg:
    case Kind::Poss: qs.insert(qs.end(), n.set_a.begin(), n.set_a.end()); break;
    case Kind::CondNonEtg:
      qs.insert(qs.end(), n.set_a.begin(), n.set_a.end());
      qs.insert(qs.end(), n.set_b.begin(), n.set_b.end());
      break;
    case Kind::Entangled:
      // Matches the expansion: the union of the separating sets is F minus qb_j.
      for (int q : n.set_a)
        if (q != n.index2) qs.push_back(q);
      qs.push_back(n.index);
      break;
    default: break;
  }
  for (const auto& a : n.args) collect(*a, s, qs);
}

void atoms_of(const Ptr& n, std::vector<Ptr>& out, std::set<Ptr, PtrLess>& seen) {
  if (n->kind == Kind::QNot || n->kind == Kind::QImp) {
    for (const auto& a : n->args) atoms_of(a, out, seen);
    return;
  }
  if (seen.insert(n).second) out.push_back(n);
}

}  // namespace

Ptr expand(const Ptr& node) { return expand_node(node); }

Symbols free_symbols(const Ptr& node) {
  Symbols s;
  std::vector<int> qs;
  collect(*node, s, qs);
  s.qubits = make_set(std::move(qs));
  return s;
}

QubitSet qubits_of(const Ptr& node) { return free_symbols(node).qubits; }

std::vector<Ptr> quantum_atoms(const Ptr& core_formula) {
  std::vector<Ptr> out;
  std::set<Ptr, PtrLess> seen;
  atoms_of(core_formula, out, seen);
  return out;
}

}  // namespace eqpl
