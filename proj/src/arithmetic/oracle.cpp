#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <unistd.h>

#include "eqpl/arithmetic.hpp"
#include "linear.hpp"
#include "poly.hpp"

namespace eqpl {

using detail::FmResult;
using detail::LinearConstraint;
using detail::Monomial;
using detail::Poly;
using detail::PolyBuilder;
using detail::Rational;
using detail::SymbolInfo;

bool is_arithmetical(const Node& phi) {
  switch (phi.kind) {
    case Kind::RealVar:
    case Kind::Num:
    case Kind::Pi:
    case Kind::Euler:
    case Kind::Sqrt:
    case Kind::Div:
    case Kind::RAdd:
    case Kind::RMul:
    case Kind::Re:
    case Kind::Im:
    case Kind::Arg:
    case Kind::Abs:
    case Kind::CVar:
    case Kind::Cart:
    case Kind::Polar:
    case Kind::Conj:
    case Kind::CAdd:
    case Kind::CMul:
    case Kind::Leq:
    case Kind::QNot:
    case Kind::QImp:
    case Kind::QOr:
    case Kind::QAnd:
    case Kind::QIff:
    case Kind::Lt:
    case Kind::Eq:
    case Kind::CEq: break;
    default: return false;
  }
  for (const auto& a : phi.args)
    if (!is_arithmetical(*a)) return false;
  return true;
}

bool eval_arith(const Ptr& phi, const Assignment& rho, const Tolerances& tol) {
  return Evaluator(nullptr, rho, tol).satisfies(*phi);
}

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Valid: return "VALID";
    case Verdict::Invalid: return "INVALID";
    case Verdict::Unknown: return "UNKNOWN";
  }
  return "?";
}

std::string format_assignment(const Assignment& rho) {
  std::ostringstream out;
  out.precision(17);
  bool first = true;
  auto sep = [&] {
    if (!first) out << ' ';
    first = false;
  };
  for (const auto& [k, v] : rho.reals) {
    sep();
    out << 'x' << k << '=' << v;
  }
  for (const auto& [k, v] : rho.complexes) {
    sep();
    out << 'z' << k << "=(" << v.real() << ',' << v.imag() << ')';
  }
  return out.str();
}

Assignment parse_assignment(std::string_view text) {
  Assignment rho;
  std::istringstream in{std::string(text)};
  std::string item;
  while (in >> item) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq < 2 || (item[0] != 'x' && item[0] != 'z'))
      throw Error("bad assignment entry '" + item + "'");
    const int k = std::stoi(item.substr(1, eq - 1));
    const std::string value = item.substr(eq + 1);
    if (item[0] == 'x') {
      rho.reals[k] = std::stod(value);
    } else {
      const auto comma = value.find(',');
      if (value.size() < 5 || value.front() != '(' || value.back() != ')' || comma == std::string::npos)
        throw Error("bad complex value '" + value + "'");
      rho.complexes[k] = {std::stod(value.substr(1, comma - 1)), std::stod(value.substr(comma + 1))};
    }
  }
  return rho;
}

namespace {

// ---- tiers 1 and 2: atom enumeration + Fourier-Motzkin ----

enum class Tri { False, True, Unknown };

Tri eval3(const Node& n, const std::map<Ptr, Tri, PtrLess>& atoms) {
  switch (n.kind) {
    case Kind::QNot: {
      Tri a = eval3(*n.args[0], atoms);
      return a == Tri::Unknown ? a : (a == Tri::True ? Tri::False : Tri::True);
    }
    case Kind::QImp: {
      Tri a = eval3(*n.args[0], atoms), b = eval3(*n.args[1], atoms);
      if (a == Tri::False || b == Tri::True) return Tri::True;
      if (a == Tri::True && b == Tri::False) return Tri::False;
      return Tri::Unknown;
    }
    default: return atoms.at(std::make_shared<Node>(n));
  }
}

class LinearDecider {
 public:
  LinearDecider(const Ptr& core, std::size_t budget) : core_(core), budget_(budget) {
    atoms_ = quantum_atoms(core);
    for (const auto& a : atoms_) {
      if (a->kind != Kind::Leq) throw detail::NotArithmetical("unexpected atom " + render(a));
      polys_.push_back(builder_.sub(builder_.real(*a->args[1]), builder_.real(*a->args[0])));
    }
    pure_ = !builder_.uses_opaque();
    for (const auto& p : polys_)
      for (const auto& [m, c] : p) {
        if (m.empty()) continue;
        if (m.size() > 1 || m[0].second > 1) pure_ = false;
        columns_.emplace(m, 0);
      }
    int k = 0;
    for (auto& [m, idx] : columns_) idx = k++;
    if (!pure_) add_side_facts();
  }

  bool pure() const { return pure_; }
  std::size_t atom_count() const { return atoms_.size(); }

  // Unsatisfiable: no falsifying row (Valid). Satisfiable: witness found
  // (only meaningful when pure). BudgetExceeded: undecided.
  FmResult search(std::vector<Rational>& witness) {
    std::map<Ptr, Tri, PtrLess> state;
    for (const auto& a : atoms_) state[a] = Tri::Unknown;
    std::vector<LinearConstraint> literals;
    return branch(0, state, literals, witness);
  }

  // Values of the variables of a pure problem, keyed by symbol.
  Assignment assignment(const std::vector<Rational>& values) const {
    Assignment rho;
    for (const auto& [m, idx] : columns_) {
      const SymbolInfo& s = builder_.symbols()[m[0].first];
      const double v = static_cast<double>(values[idx]);
      switch (s.type) {
        case SymbolInfo::Type::RealVar: rho.reals[s.var] = v; break;
        case SymbolInfo::Type::ReZ: rho.complexes[s.var].real(v); break;
        case SymbolInfo::Type::ImZ: rho.complexes[s.var].imag(v); break;
        case SymbolInfo::Type::Opaque: break;
      }
    }
    return rho;
  }

 private:
  Ptr core_;
  std::size_t budget_;
  std::size_t runs_ = 0;
  std::vector<Ptr> atoms_;
  std::vector<Poly> polys_;
  PolyBuilder builder_;
  std::map<Monomial, int> columns_;
  std::vector<LinearConstraint> facts_;
  bool pure_ = true;

  LinearConstraint constraint(const Poly& p, bool negate) const {
    // p >= 0, or its negation -p > 0.
    LinearConstraint c;
    c.strict = negate;
    for (const auto& [m, x] : p) {
      const Rational v = negate ? Rational(-x) : x;
      if (m.empty())
        c.constant = v;
      else
        c.coeffs[columns_.at(m)] = v;
    }
    return c;
  }

  void add_side_facts() {
    for (const auto& [m, idx] : columns_) {
      bool even = true;
      for (const auto& [s, p] : m) even = even && p % 2 == 0;
      if (even) facts_.push_back({{{idx, Rational(1)}}, Rational(0), false});
      if (m.size() != 1 || m[0].second != 1) continue;
      const SymbolInfo& s = builder_.symbols()[m[0].first];
      if (s.nonnegative) facts_.push_back({{{idx, Rational(1)}}, Rational(0), false});
      if (s.interval) {
        facts_.push_back({{{idx, Rational(1)}}, -s.interval->first, false});
        facts_.push_back({{{idx, Rational(-1)}}, s.interval->second, false});
      }
    }
  }

  FmResult run(const std::vector<LinearConstraint>& literals, std::vector<Rational>& witness) {
    if (++runs_ > budget_) return FmResult::BudgetExceeded;
    std::vector<LinearConstraint> cs = literals;
    cs.insert(cs.end(), facts_.begin(), facts_.end());
    auto out = detail::fourier_motzkin(std::move(cs), static_cast<int>(columns_.size()));
    if (out.result == FmResult::Satisfiable) witness = std::move(out.witness);
    return out.result;
  }

  FmResult branch(std::size_t i, std::map<Ptr, Tri, PtrLess>& state, std::vector<LinearConstraint>& literals,
                  std::vector<Rational>& witness) {
    const Tri value = eval3(*core_, state);
    if (value == Tri::True) return FmResult::Unsatisfiable;
    if (value == Tri::False) return run(literals, witness);
    // Prune branches whose literals are already contradictory.
    if (!literals.empty()) {
      std::vector<Rational> scratch;
      FmResult r = run(literals, scratch);
      if (r != FmResult::Satisfiable) return r;
    }
    bool exceeded = false;
    for (bool truth : {true, false}) {
      state[atoms_[i]] = truth ? Tri::True : Tri::False;
      literals.push_back(constraint(polys_[i], !truth));
      FmResult r = branch(i + 1, state, literals, witness);
      literals.pop_back();
      state[atoms_[i]] = Tri::Unknown;
      if (r == FmResult::Satisfiable) return r;
      exceeded = exceeded || r == FmResult::BudgetExceeded;
    }
    return exceeded ? FmResult::BudgetExceeded : FmResult::Unsatisfiable;
  }
};

// ---- tier 2: schema table ----

struct Schema {
  std::string name;
  Ptr core;
};

bool closed_term(const Node& n) {
  if (n.kind == Kind::Meta) return false;
  if (category_of(n) != Category::Real && category_of(n) != Category::Complex) return false;
  const Symbols s = free_symbols(std::make_shared<Node>(n));
  if (!s.real_vars.empty() || !s.complex_vars.empty()) return false;
  for (const auto& a : n.args)
    if (!closed_term(*a)) return false;
  return true;
}

bool same_constant(const Node& p, const Node& t) {
  try {
    PolyBuilder b;
    auto vp = PolyBuilder::as_constant(b.real(p)), vt = PolyBuilder::as_constant(b.real(t));
    return vp && vt && *vp == *vt;
  } catch (const Error&) {
    return false;
  }
}

bool match(const Node& p, const Ptr& t, std::map<int, Ptr>& bound) {
  if (p.kind == Kind::Meta) {
    auto [it, fresh] = bound.emplace(p.index, t);
    return fresh || equal(it->second, t);
  }
  if (category_of(p) == Category::Real && closed_term(p) && closed_term(*t))
    return equal(*t, p) || same_constant(p, *t);
  if (p.kind != t->kind || p.index != t->index || p.index2 != t->index2 || p.text != t->text ||
      p.set_a != t->set_a || p.set_b != t->set_b || p.args.size() != t->args.size())
    return false;
  for (std::size_t i = 0; i < p.args.size(); ++i)
    if (!match(*p.args[i], t->args[i], bound)) return false;
  return true;
}

const std::vector<Schema>& schemas() {
  using namespace ast;
  static const std::vector<Schema> table = [] {
    Ptr u = meta(0, Category::Complex);
    Ptr i = cart(num(0), num(1)), minus_i = cart(num(0), num(-1));
    std::vector<Schema> t;
    // Square roots of -1: ((u u) = -1) ⊐ ((u = i) ⊔ (u = -i)).
    t.push_back({"sqrt(-1)", expand(qimp(ceq(cmul(u, u), cart(num(-1), num(0))), qor(ceq(u, i), ceq(u, minus_i))))});
    // Vanishing modulus: (|u| = 0) ⊐ (u = 0).
    t.push_back({"zero modulus", expand(qimp(eq(abs(u), num(0)), ceq(u, complex_const(0))))});
    // Zero product: ((u1 u2) = 0) ⊐ ((u1 = 0) ⊔ (u2 = 0)).
    Ptr u2 = meta(1, Category::Complex);
    t.push_back({"zero product", expand(qimp(ceq(cmul(u, u2), complex_const(0)),
                                             qor(ceq(u, complex_const(0)), ceq(u2, complex_const(0)))))});
    return t;
  }();
  return table;
}

// ---- tier 3: falsification search ----

class Falsifier {
 public:
  Falsifier(const Ptr& phi, const OracleConfig& config) : phi_(phi), config_(config), rng_(config.seed) {
    const Symbols s = free_symbols(phi);
    reals_.assign(s.real_vars.begin(), s.real_vars.end());
    complexes_.assign(s.complex_vars.begin(), s.complex_vars.end());
  }

  std::optional<Assignment> search() {
    std::size_t used = 0;
    Assignment best;
    double best_margin = std::numeric_limits<double>::infinity();
    while (used < config_.samples) {
      Assignment rho = sample(used);
      ++used;
      if (!eval_arith(phi_, rho)) return rho;
      const double m = margin(*phi_, rho);
      if (m < best_margin) {
        best_margin = m;
        best = rho;
      }
      // Every 64 samples, spend a few steps descending from the best point.
      if (used % 64 == 0) {
        for (int step = 0; step < 32 && used < config_.samples; ++step, ++used) {
          Assignment next = perturb(best, step);
          if (!eval_arith(phi_, next)) return next;
          const double nm = margin(*phi_, next);
          if (nm < best_margin) {
            best_margin = nm;
            best = next;
          }
        }
      }
    }
    return std::nullopt;
  }

 private:
  Ptr phi_;
  const OracleConfig& config_;
  std::mt19937_64 rng_;
  std::vector<int> reals_, complexes_;

  double draw(std::size_t round) {
    std::normal_distribution<double> n;
    switch ((round + rng_()) % 6) {
      case 0: return 0.0;
      case 1: return std::uniform_int_distribution<int>(-1, 1)(rng_);
      case 2: return std::uniform_int_distribution<int>(-3, 3)(rng_);
      case 3: return n(rng_);
      case 4: return 10 * n(rng_);
      default: return std::uniform_real_distribution<double>(-100, 100)(rng_);
    }
  }

  Assignment sample(std::size_t round) {
    Assignment rho;
    for (int k : reals_) rho.reals[k] = draw(round);
    for (int k : complexes_) rho.complexes[k] = {draw(round), draw(round)};
    return rho;
  }

  Assignment perturb(const Assignment& from, int step) {
    Assignment rho = from;
    std::normal_distribution<double> n(0.0, std::pow(0.5, step % 8));
    for (auto& [k, v] : rho.reals) v += n(rng_);
    for (auto& [k, v] : rho.complexes) v += Complex(n(rng_), n(rng_));
    return rho;
  }

  // Signed truth margin: positive when satisfied with room to spare.
  double margin(const Node& g, const Assignment& rho) const {
    Evaluator e(nullptr, rho);
    switch (g.kind) {
      case Kind::QNot: return -margin(*g.args[0], rho);
      case Kind::QImp: return std::max(-margin(*g.args[0], rho), margin(*g.args[1], rho));
      case Kind::QOr: return std::max(margin(*g.args[0], rho), margin(*g.args[1], rho));
      case Kind::QAnd: return std::min(margin(*g.args[0], rho), margin(*g.args[1], rho));
      case Kind::QIff: {
        const double a = margin(*g.args[0], rho), b = margin(*g.args[1], rho);
        return std::max(std::min(a, b), std::min(-a, -b));
      }
      case Kind::Leq: return e.real(*g.args[1]) - e.real(*g.args[0]);
      case Kind::Lt: return e.real(*g.args[1]) - e.real(*g.args[0]);
      case Kind::Eq: return -std::abs(e.real(*g.args[1]) - e.real(*g.args[0]));
      case Kind::CEq: return -std::abs(e.complex(*g.args[1]) - e.complex(*g.args[0]));
      default: return 0.0;
    }
  }
};

}  // namespace

OracleVerdict oracle_check(const Ptr& phi, const OracleConfig& config) {
  if (!is_arithmetical(*phi)) return {Verdict::Unknown, {}, "not an arithmetical formula"};
  const Ptr core = expand(phi);
  std::string undecided = "no tier decided the formula";

  try {
    LinearDecider decider(core, config.eliminations);
    if (decider.atom_count() <= 24) {
      std::vector<Rational> values;
      const FmResult r = decider.search(values);
      if (r == FmResult::Unsatisfiable)
        return {Verdict::Valid, {}, decider.pure() ? "tier 1: exact linear arithmetic" : "tier 2: polynomial abstraction"};
      if (r == FmResult::Satisfiable && decider.pure()) {
        Assignment rho = decider.assignment(values);
        const Symbols s = free_symbols(phi);
        for (int k : s.real_vars) rho.reals.try_emplace(k, 0.0);
        for (int k : s.complex_vars) rho.complexes.try_emplace(k, Complex{});
        if (!eval_arith(phi, rho)) return {Verdict::Invalid, rho, "tier 1: exact linear arithmetic"};
      }
      if (r == FmResult::BudgetExceeded) undecided = "elimination budget exhausted";
    }
  } catch (const detail::NotArithmetical& e) {
    undecided = e.what();
  }

  for (const auto& s : schemas()) {
    std::map<int, Ptr> bound;
    if (match(*s.core, core, bound)) return {Verdict::Valid, {}, "tier 2: schema " + s.name};
  }

  if (auto rho = Falsifier(phi, config).search()) return {Verdict::Invalid, *rho, "tier 3: falsification search"};

  if (!config.command.empty()) {
    OracleVerdict ext = run_oracle_command(config.command, phi);
    if (ext.verdict != Verdict::Unknown) return ext;
  }
  return {Verdict::Unknown, {}, undecided};
}

OracleVerdict run_oracle_command(const std::string& command, const Ptr& phi) {
  char path[] = "/tmp/eqpl-oracle-XXXXXX";
  const int fd = mkstemp(path);
  if (fd < 0) return {Verdict::Unknown, {}, "cannot create a temporary file for the external oracle"};
  close(fd);
  {
    std::ofstream out(path);
    out << render(phi) << '\n';
  }
  std::string output;
  if (FILE* p = popen(("(" + command + ") < " + path).c_str(), "r")) {
    std::array<char, 512> buf{};
    while (fgets(buf.data(), buf.size(), p)) output += buf.data();
    pclose(p);
  }
  std::remove(path);

  std::istringstream in(output);
  std::string word;
  in >> word;
  if (word == "VALID") return {Verdict::Valid, {}, "external oracle"};
  if (word == "INVALID") {
    std::string rest;
    std::getline(in, rest);
    try {
      Assignment rho = parse_assignment(rest);
      if (!eval_arith(phi, rho)) return {Verdict::Invalid, rho, "external oracle"};
      return {Verdict::Unknown, {}, "external oracle witness does not falsify the formula"};
    } catch (const Error& e) {
      return {Verdict::Unknown, {}, std::string("external oracle witness rejected: ") + e.what()};
    }
  }
  return {Verdict::Unknown, {}, "external oracle: " + (word.empty() ? std::string("no answer") : word)};
}

}  // namespace eqpl
