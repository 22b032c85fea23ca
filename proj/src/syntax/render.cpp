#include "eqpl/syntax.hpp"

namespace eqpl {
namespace {

class Renderer {
 public:
  explicit Renderer(const AliasTable* aliases) : aliases_(aliases) {}

  std::string operator()(const Node& n) const {
    std::string out;
    emit(n, out);
    return out;
  }

 private:
  const AliasTable* aliases_;

  std::string qubit(int q) const {
    if (aliases_)
      if (auto name = aliases_->name_of(q)) return *name;
    return "qb" + std::to_string(q);
  }

  std::string list(const QubitSet& s) const {
    std::string r;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (i) r += ',';
      r += qubit(s[i]);
    }
    return r;
  }

  void binary(const Node& n, std::string_view op, std::string& out) const {
    out += '(';
    emit(*n.args[0], out);
    out += ' ';
    out += op;
    out += ' ';
    emit(*n.args[1], out);
    out += ')';
  }

  void call(std::string_view f, const Node& n, std::string& out) const {
    out += f;
    out += '(';
    emit(*n.args[0], out);
    out += ')';
  }

  void emit(const Node& n, std::string& out) const {
    switch (n.kind) {
      case Kind::Qubit: out += qubit(n.index); return;
      case Kind::Top: out += "top"; return;
      case Kind::Bot: out += "bot"; return;
      case Kind::Not:
        out += "~ ";
        emit(*n.args[0], out);
        return;
      case Kind::Imp: return binary(n, "->", out);
      case Kind::And: return binary(n, "/\\", out);
      case Kind::Or: return binary(n, "\\/", out);
      case Kind::Iff: return binary(n, "<->", out);
      case Kind::Molecular: out += "mol{" + list(n.set_a) + "}{" + list(n.set_b) + "}"; return;
      case Kind::RealVar: out += "x" + std::to_string(n.index); return;
      case Kind::Num: out += n.text; return;
      case Kind::Pi: out += "pi"; return;
      case Kind::Euler: out += "e"; return;
      case Kind::Sqrt: return call("sqrt", n, out);
      case Kind::Div:
        emit(*n.args[0], out);
        out += '/';
        emit(*n.args[1], out);
        return;
      case Kind::Prob: return call("Pr", n, out);
      case Kind::RAdd: return binary(n, "+", out);
      case Kind::RMul: return binary(n, "*", out);
      case Kind::Re: return call("re", n, out);
      case Kind::Im: return call("im", n, out);
      case Kind::Arg: return call("arg", n, out);
      case Kind::Abs: return call("abs", n, out);
      case Kind::SumSq:
        out += "sumsq{" + list(n.set_a) + "}[";
        emit(*n.args[0], out);
        out += ']';
        return;
      case Kind::CVar: out += "z" + std::to_string(n.index); return;
      case Kind::Amp: out += "amp{" + list(n.set_a) + "}{" + list(n.set_b) + "}"; return;
      case Kind::AmpOf:
        out += "amp{" + list(n.set_a) + "}{" + list(n.set_b) + "}[";
        emit(*n.args[0], out);
        out += ']';
        return;
      case Kind::Cart:
        out += '(';
        emit(*n.args[0], out);
        out += " + i ";
        emit(*n.args[1], out);
        out += ')';
        return;
      case Kind::Polar:
        emit(*n.args[0], out);
        out += " e^{i ";
        emit(*n.args[1], out);
        out += '}';
        return;
      case Kind::Conj: return call("conj", n, out);
      case Kind::CAdd: return binary(n, "+", out);
      case Kind::CMul: return binary(n, "*", out);
      case Kind::Ite:
        out += "ite(";
        emit(*n.args[0], out);
        out += "; ";
        emit(*n.args[1], out);
        out += "; ";
        emit(*n.args[2], out);
        out += ')';
        return;
      case Kind::Leq: return binary(n, "<=", out);
      case Kind::Lt: return binary(n, "<", out);
      case Kind::Eq:
      case Kind::CEq: return binary(n, "=", out);
      case Kind::NonEtg: out += "[" + list(n.set_a) + "]"; return;
      case Kind::CondNonEtg: out += "[" + list(n.set_a) + " // " + list(n.set_b) + "]"; return;
      case Kind::QNot:
        out += "! ";
        emit(*n.args[0], out);
        return;
      case Kind::QImp: return binary(n, "==>", out);
      case Kind::QOr: return binary(n, "||", out);
      case Kind::QAnd: return binary(n, "&&", out);
      case Kind::QIff: return binary(n, "<=>", out);
      case Kind::Entangled:
        out += '(' + qubit(n.index) + " ~{" + list(n.set_a) + "} " + qubit(n.index2) + ')';
        return;
      case Kind::Poss:
        out += "poss{" + list(n.set_a) + "}(";
        for (std::size_t i = 0; i < n.args.size(); i += 2) {
          if (i) out += ", ";
          emit(*n.args[i], out);
          out += " : ";
          emit(*n.args[i + 1], out);
        }
        out += ')';
        return;
      case Kind::Dia: return call("dia", n, out);
      case Kind::Box: return call("box", n, out);
      case Kind::Meta: out += "?" + std::to_string(n.index); return;
    }
  }
};

}  // namespace

std::string render(const Ptr& node, const AliasTable* aliases) { return Renderer(aliases)(*node); }

}  // namespace eqpl
