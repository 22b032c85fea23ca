#include "logic/sat.hpp"

#include <cstdlib>

namespace eqpl::detail {
namespace {

class Dpll {
 public:
  explicit Dpll(const Cnf& cnf) : cnf_(cnf), value_(cnf.vars + 1, 0) {}

  bool run() { return search(); }
  std::vector<bool> model() const {
    std::vector<bool> m(value_.size(), false);
    for (std::size_t v = 1; v < value_.size(); ++v) m[v] = value_[v] > 0;
    return m;
  }

 private:
  const Cnf& cnf_;
  std::vector<int> value_;  // +1 true, -1 false, 0 open
  std::vector<int> trail_;

  int lit_value(int l) const { return l > 0 ? value_[l] : -value_[-l]; }

  void assign(int l) {
    value_[std::abs(l)] = l > 0 ? 1 : -1;
    trail_.push_back(std::abs(l));
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      value_[trail_.back()] = 0;
      trail_.pop_back();
    }
  }

  // Unit propagation to a fixpoint; false on a conflict.
  bool propagate() {
    for (bool changed = true; changed;) {
      changed = false;
      for (const auto& c : cnf_.clauses) {
        int open = 0, unit = 0;
        bool sat = false;
        for (int l : c) {
          const int v = lit_value(l);
          if (v > 0) {
            sat = true;
            break;
          }
          if (v == 0) {
            ++open;
            unit = l;
          }
        }
        if (sat) continue;
        if (open == 0) return false;
        if (open == 1) {
          assign(unit);
          changed = true;
        }
      }
    }
    return true;
  }

  bool search() {
    const std::size_t mark = trail_.size();
    if (!propagate()) {
      undo(mark);
      return false;
    }
    int pick = 0;
    for (const auto& c : cnf_.clauses) {
      bool sat = false;
      int open = 0;
      for (int l : c) {
        if (lit_value(l) > 0) sat = true;
        if (lit_value(l) == 0 && !open) open = l;
      }
      if (!sat && open) {
        pick = open;
        break;
      }
    }
    if (!pick) return true;
    for (int l : {pick, -pick}) {
      const std::size_t inner = trail_.size();
      assign(l);
      if (search()) return true;
      undo(inner);
    }
    undo(mark);
    return false;
  }
};

}  // namespace

std::optional<std::vector<bool>> solve_sat(const Cnf& cnf) {
  Dpll d(cnf);
  if (!d.run()) return std::nullopt;
  return d.model();
}

int Tseitin::literal(const Ptr& n) {
  const Kind neg = quantum_ ? Kind::QNot : Kind::Not, imp = quantum_ ? Kind::QImp : Kind::Imp;
  if (n->kind == neg) return -literal(n->args[0]);
  if (auto it = by_address_.find(n.get()); it != by_address_.end()) return it->second;
  if (auto it = by_structure_.find(n); it != by_structure_.end()) return by_address_[n.get()] = it->second;
  int v;
  if (n->kind == imp) {
    const int a = literal(n->args[0]), b = literal(n->args[1]);
    v = ++cnf_.vars;
    cnf_.clauses.push_back({-v, -a, b});
    cnf_.clauses.push_back({v, a});
    cnf_.clauses.push_back({v, -b});
  } else if (!quantum_ && n->kind == Kind::Top) {
    if (!top_) {
      top_ = ++cnf_.vars;
      cnf_.clauses.push_back({top_});
    }
    v = top_;
  } else {
    v = ++cnf_.vars;
    letters_.emplace_back(n, v);
  }
  by_structure_[n] = v;
  by_address_[n.get()] = v;
  return v;
}

}  // namespace eqpl::detail
