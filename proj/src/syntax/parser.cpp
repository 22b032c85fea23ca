#include <cctype>
#include <charconv>
#include <functional>

#include "eqpl/syntax.hpp"

namespace eqpl {
namespace {

enum class Tok { Ident, Number, Sym, End };

struct Token {
  Tok type;
  std::string text;
  int line;
  int column;
};

// Longest match first.
constexpr std::string_view kSymbols[] = {"<=>", "<->", "==>", "e^{", "<=", "->", "/\\", "\\/", "&&", "||", "//",
                                         "(",   ")",   "{",   "}",   "[",  "]",  ",",   ";",   ":",  "~",  "!",
                                         "<",   "=",   "+",   "*",   "/"};

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < s.size() && s[i] != '\n') advance(1);
      continue;
    }
    const int tl = line, tc = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      if (c == 'e' && s.substr(i, 3) == "e^{") {
        out.push_back({Tok::Sym, "e^{", tl, tc});
        advance(3);
        continue;
      }
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      out.push_back({Tok::Ident, std::string(s.substr(i, j - i)), tl, tc});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '-' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
      std::size_t j = i + 1;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      if (j + 1 < s.size() && s[j] == '.' && std::isdigit(static_cast<unsigned char>(s[j + 1]))) {
        ++j;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      }
      out.push_back({Tok::Number, std::string(s.substr(i, j - i)), tl, tc});
      advance(j - i);
      continue;
    }
    bool matched = false;
    for (auto sym : kSymbols) {
      if (s.substr(i, sym.size()) == sym) {
        out.push_back({Tok::Sym, std::string(sym), tl, tc});
        advance(sym.size());
        matched = true;
        break;
      }
    }
    if (!matched) throw SyntaxError(std::string("unexpected character '") + c + "'", tl, tc);
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

std::optional<int> indexed_name(std::string_view id, std::string_view prefix) {
  if (id.size() <= prefix.size() || id.substr(0, prefix.size()) != prefix) return std::nullopt;
  auto digits = id.substr(prefix.size());
  if (digits.size() > 1 && digits[0] == '0') return std::nullopt;
  int v = 0;
  auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
  if (ec != std::errc() || p != digits.data() + digits.size()) return std::nullopt;
  return v;
}

bool is_classical_op(std::string_view t) { return t == "->" || t == "/\\" || t == "\\/" || t == "<->"; }
bool is_quantum_op(std::string_view t) { return t == "==>" || t == "&&" || t == "||" || t == "<=>"; }
bool is_comparison(std::string_view t) { return t == "<=" || t == "<" || t == "="; }

class Parser {
 public:
  Parser(std::vector<Token> toks, const AliasTable& aliases) : toks_(std::move(toks)), aliases_(aliases) {}

  Ptr parse_top(Category c) {
    Ptr r = parse_category(c);
    if (peek().type != Tok::End) fail("unexpected '" + peek().text + "' after end of " + std::string(category_name(c)));
    return r;
  }

 private:
  std::vector<Token> toks_;
  const AliasTable& aliases_;
  std::size_t pos_ = 0;

  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool at_sym(std::string_view s, std::size_t k = 0) const { return peek(k).type == Tok::Sym && peek(k).text == s; }
  bool at_ident(std::string_view s, std::size_t k = 0) const {
    return peek(k).type == Tok::Ident && peek(k).text == s;
  }
  [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(msg, peek().line, peek().column); }
  void expect(std::string_view s) {
    if (!at_sym(s)) fail("expected '" + std::string(s) + "', found '" + peek().text + "'");
    ++pos_;
  }
  void expect_ident(std::string_view s) {
    if (!at_ident(s)) fail("expected '" + std::string(s) + "', found '" + peek().text + "'");
    ++pos_;
  }
  SourcePos here() const { return {peek().line, peek().column}; }
  static Ptr at(Ptr p, SourcePos sp) {
    std::const_pointer_cast<Node>(p)->pos = sp;
    return p;
  }

  Ptr parse_category(Category c) {
    switch (c) {
      case Category::Classical: return classical();
      case Category::Real: return real();
      case Category::Complex: return complex();
      case Category::Quantum: return quantum();
    }
    return nullptr;
  }

  // Index of the main binary operator inside the parenthesis opened at
  // `open`, or npos when there is none.
  std::size_t main_op(std::size_t open) const {
    int depth = 0;
    for (std::size_t j = open + 1; j < toks_.size(); ++j) {
      const Token& t = toks_[j];
      if (t.type == Tok::End) break;
      if (t.type != Tok::Sym) continue;
      const auto& s = t.text;
      if (s == "(" || s == "[" || s == "{" || s == "e^{") {
        ++depth;
      } else if (s == ")" || s == "]" || s == "}") {
        if (depth == 0) break;
        --depth;
      } else if (depth == 0) {
        if (s == "~") {
          if (j + 1 < toks_.size() && toks_[j + 1].type == Tok::Sym && toks_[j + 1].text == "{") return j;
          continue;
        }
        if (is_classical_op(s) || is_quantum_op(s) || is_comparison(s) || s == "+" || s == "*") return j;
      }
    }
    return std::string::npos;
  }

  int qubit_name() {
    if (peek().type != Tok::Ident) fail("expected qubit symbol, found '" + peek().text + "'");
    const auto& id = peek().text;
    std::optional<int> q = indexed_name(id, "qb");
    if (!q) q = aliases_.lookup(id);
    if (!q) fail("unknown qubit symbol '" + id + "'");
    ++pos_;
    return *q;
  }

  QubitSet qubit_list(std::string_view close) {
    std::vector<int> xs;
    if (at_sym(close) || at_sym("//")) return {};
    while (true) {
      SourcePos sp = here();
      int q = qubit_name();
      for (int x : xs)
        if (x == q) throw SyntaxError("duplicate qubit in set", sp.line, sp.column);
      xs.push_back(q);
      if (!at_sym(",")) break;
      ++pos_;
    }
    return make_set(std::move(xs));
  }

  QubitSet braced_set() {
    expect("{");
    QubitSet s = qubit_list("}");
    expect("}");
    return s;
  }

  // ---- classical ----
  Ptr classical() {
    SourcePos sp = here();
    if (at_sym("~")) {
      ++pos_;
      return at(ast::neg(classical()), sp);
    }
    if (at_ident("top")) {
      ++pos_;
      return at(ast::top(), sp);
    }
    if (at_ident("bot")) {
      ++pos_;
      return at(ast::bot(), sp);
    }
    if (at_ident("mol") && at_sym("{", 1)) {
      ++pos_;
      QubitSet f = braced_set();
      QubitSet a = braced_set();
      return at(ast::molecular(std::move(f), std::move(a)), sp);
    }
    if (at_sym("(")) {
      std::size_t op = main_op(pos_);
      if (op == std::string::npos || !is_classical_op(toks_[op].text)) fail("expected classical connective");
      ++pos_;
      Ptr l = classical();
      std::string o = peek().text;
      expect(o);
      Ptr r = classical();
      expect(")");
      if (o == "->") return at(ast::imp(l, r), sp);
      if (o == "/\\") return at(ast::conj_c(l, r), sp);
      if (o == "\\/") return at(ast::disj_c(l, r), sp);
      return at(ast::iff_c(l, r), sp);
    }
    return at(ast::qubit(qubit_name()), sp);
  }

  // ---- constants and real terms ----
  Ptr const_primary() {
    SourcePos sp = here();
    if (peek().type == Tok::Number) {
      std::string t = peek().text;
      ++pos_;
      return at(ast::num(t), sp);
    }
    if (at_ident("pi")) {
      ++pos_;
      return at(ast::pi(), sp);
    }
    if (at_ident("e")) {
      ++pos_;
      return at(ast::euler(), sp);
    }
    if (at_ident("sqrt") && at_sym("(", 1)) {
      pos_ += 2;
      Ptr c = constant();
      expect(")");
      return at(ast::sqrt_c(c), sp);
    }
    fail("expected constant, found '" + peek().text + "'");
  }

  Ptr constant() {
    SourcePos sp = here();
    Ptr c = const_primary();
    while (at_sym("/")) {
      ++pos_;
      c = at(ast::div_c(c, const_primary()), sp);
    }
    return c;
  }

  bool at_constant() const {
    return peek().type == Tok::Number || at_ident("pi") || at_ident("e") || (at_ident("sqrt") && at_sym("(", 1));
  }

  Ptr real() {
    SourcePos sp = here();
    if (at_constant()) return constant();
    if (peek().type == Tok::Ident) {
      const auto id = peek().text;
      if (auto k = indexed_name(id, "x")) {
        ++pos_;
        return at(ast::real_var(*k), sp);
      }
      if (id == "Pr" && at_sym("(", 1)) {
        pos_ += 2;
        Ptr a = classical();
        expect(")");
        return at(ast::prob(a), sp);
      }
      if ((id == "re" || id == "im" || id == "arg" || id == "abs") && at_sym("(", 1)) {
        pos_ += 2;
        Ptr u = complex();
        expect(")");
        if (id == "re") return at(ast::re(u), sp);
        if (id == "im") return at(ast::im(u), sp);
        if (id == "arg") return at(ast::arg(u), sp);
        return at(ast::abs(u), sp);
      }
      if (id == "sumsq" && at_sym("{", 1)) {
        ++pos_;
        QubitSet f = braced_set();
        expect("[");
        Ptr a = classical();
        expect("]");
        return at(ast::sumsq(std::move(f), a), sp);
      }
    }
    if (at_sym("(")) {
      std::size_t op = main_op(pos_);
      if (op == std::string::npos || (toks_[op].text != "+" && toks_[op].text != "*"))
        fail("expected real term");
      if (toks_[op].text == "+" && op + 1 < toks_.size() && toks_[op + 1].type == Tok::Ident &&
          toks_[op + 1].text == "i")
        fail("cartesian form is a complex term");
      ++pos_;
      Ptr l = real();
      std::string o = peek().text;
      expect(o);
      Ptr r = real();
      expect(")");
      return at(o == "+" ? ast::radd(l, r) : ast::rmul(l, r), sp);
    }
    fail("expected real term, found '" + peek().text + "'");
  }

  // ---- complex terms ----
  template <typename F>
  std::optional<Ptr> attempt(F&& f) {
    std::size_t save = pos_;
    try {
      return f();
    } catch (const SyntaxError&) {
      pos_ = save;
      return std::nullopt;
    }
  }

  Ptr complex() {
    SourcePos sp = here();
    if (auto t = attempt([&] { return real(); })) {
      if (at_sym("e^{")) {
        ++pos_;
        expect_ident("i");
        Ptr phase = real();
        expect("}");
        return at(ast::polar(*t, phase), sp);
      }
      return at(ast::cart(*t, ast::num(0)), sp);
    }
    if (peek().type == Tok::Ident) {
      const auto id = peek().text;
      if (auto k = indexed_name(id, "z")) {
        ++pos_;
        return at(ast::complex_var(*k), sp);
      }
      if (id == "amp" && at_sym("{", 1)) {
        ++pos_;
        QubitSet f = braced_set();
        QubitSet a = braced_set();
        if (at_sym("[")) {
          ++pos_;
          Ptr alpha = classical();
          expect("]");
          return at(ast::amp_of(std::move(f), std::move(a), alpha), sp);
        }
        return at(ast::amp(std::move(f), std::move(a)), sp);
      }
      if (id == "conj" && at_sym("(", 1)) {
        pos_ += 2;
        Ptr u = complex();
        expect(")");
        return at(ast::conj(u), sp);
      }
      if (id == "ite" && at_sym("(", 1)) {
        pos_ += 2;
        Ptr a = classical();
        expect(";");
        Ptr u1 = complex();
        expect(";");
        Ptr u2 = complex();
        expect(")");
        return at(ast::ite(a, u1, u2), sp);
      }
    }
    if (at_sym("(")) {
      std::size_t op = main_op(pos_);
      if (op == std::string::npos || (toks_[op].text != "+" && toks_[op].text != "*")) fail("expected complex term");
      const bool cartesian = toks_[op].text == "+" && op + 1 < toks_.size() && toks_[op + 1].type == Tok::Ident &&
                             toks_[op + 1].text == "i";
      ++pos_;
      if (cartesian) {
        Ptr t1 = real();
        expect("+");
        expect_ident("i");
        Ptr t2 = real();
        expect(")");
        return at(ast::cart(t1, t2), sp);
      }
      Ptr l = complex();
      std::string o = peek().text;
      expect(o);
      Ptr r = complex();
      expect(")");
      return at(o == "+" ? ast::cadd(l, r) : ast::cmul(l, r), sp);
    }
    fail("expected complex term, found '" + peek().text + "'");
  }

  // ---- amplitude vector terms (expanded on the spot) ----
  ast::VectorTerm vector_term(const QubitSet& f) {
    if (at_ident("amp")) {
      ++pos_;
      Ptr alpha = ast::top();
      if (at_sym("[")) {
        ++pos_;
        alpha = classical();
        expect("]");
      }
      return ast::amp_vector(f, alpha);
    }
    if (at_ident("zero")) {
      ++pos_;
      return ast::zero_vector(f);
    }
    if (at_sym("(")) {
      std::size_t op = main_op(pos_);
      if (op != std::string::npos && toks_[op].text == "*") {
        ++pos_;
        Ptr u = complex();
        expect("*");
        auto w = vector_term(f);
        expect(")");
        return ast::scale(u, w);
      }
      if (op != std::string::npos && toks_[op].text == "+") {
        ++pos_;
        auto a = vector_term(f);
        expect("+");
        auto b = vector_term(f);
        expect(")");
        return ast::vsum(a, b);
      }
    }
    fail("expected amplitude vector term");
  }

  // ---- quantum formulae ----
  Ptr quantum() {
    SourcePos sp = here();
    if (at_sym("!")) {
      ++pos_;
      return at(ast::qneg(quantum()), sp);
    }
    if (at_sym("[")) {
      ++pos_;
      QubitSet g = qubit_list("]");
      if (at_sym("//")) {
        ++pos_;
        QubitSet f = qubit_list("]");
        expect("]");
        return at(ast::cond_non_etg(std::move(g), std::move(f)), sp);
      }
      expect("]");
      return at(ast::non_etg(std::move(g)), sp);
    }
    if (peek().type == Tok::Ident) {
      const auto id = peek().text;
      if (id == "poss" && at_sym("{", 1)) {
        ++pos_;
        QubitSet f = braced_set();
        expect("(");
        std::vector<std::pair<Ptr, Ptr>> items;
        while (true) {
          Ptr a = classical();
          expect(":");
          Ptr u = complex();
          items.emplace_back(a, u);
          if (!at_sym(",")) break;
          ++pos_;
        }
        expect(")");
        return at(ast::poss(std::move(f), std::move(items)), sp);
      }
      if ((id == "dia" || id == "box") && at_sym("(", 1)) {
        pos_ += 2;
        Ptr a = classical();
        expect(")");
        return at(id == "dia" ? ast::dia(a) : ast::box(a), sp);
      }
      if ((id == "veq" || id == "vsub") && at_sym("{", 1)) {
        ++pos_;
        QubitSet f = braced_set();
        expect("(");
        auto a = vector_term(f);
        expect(",");
        auto b = vector_term(f);
        expect(")");
        return at(id == "veq" ? ast::vector_eq(a, b) : ast::vector_subset(a, b), sp);
      }
    }
    if (at_sym("(")) {
      std::size_t op = main_op(pos_);
      if (op == std::string::npos) fail("expected binary connective or comparison");
      const std::string o = toks_[op].text;
      if (is_quantum_op(o)) {
        ++pos_;
        Ptr l = quantum();
        expect(o);
        Ptr r = quantum();
        expect(")");
        if (o == "==>") return at(ast::qimp(l, r), sp);
        if (o == "&&") return at(ast::qand(l, r), sp);
        if (o == "||") return at(ast::qor(l, r), sp);
        return at(ast::qiff(l, r), sp);
      }
      if (o == "~") {
        ++pos_;
        int i = qubit_name();
        expect("~");
        QubitSet f = braced_set();
        int j = qubit_name();
        expect(")");
        return at(ast::entangled(i, j, std::move(f)), sp);
      }
      if (is_comparison(o)) {
        ++pos_;
        auto real_cmp = attempt([&]() -> Ptr {
          Ptr l = real();
          expect(o);
          Ptr r = real();
          expect(")");
          if (o == "<=") return ast::leq(l, r);
          if (o == "<") return ast::lt(l, r);
          return ast::eq(l, r);
        });
        if (real_cmp) return at(*real_cmp, sp);
        if (o != "=") fail("expected real term in comparison");
        Ptr l = complex();
        expect("=");
        Ptr r = complex();
        expect(")");
        return at(ast::ceq(l, r), sp);
      }
    }
    return classical();
  }
};

}  // namespace

Ptr parse(std::string_view text, Category category, const AliasTable& aliases) {
  auto toks = lex(text);
  try {
    Parser p(toks, aliases);
    return p.parse_top(category);
  } catch (const SyntaxError&) {
    for (Category other : {Category::Classical, Category::Real, Category::Complex, Category::Quantum}) {
      if (other == category) continue;
      try {
        Parser p(toks, aliases);
        p.parse_top(other);
      } catch (const SyntaxError&) {
        continue;
      }
      throw CategoryError("text is a " + std::string(category_name(other)) + " expression, expected " +
                          std::string(category_name(category)));
    }
    throw;
  }
}

std::string strip_alias_preamble(std::string_view text, AliasTable& aliases) {
  std::string rest;
  std::size_t start = 0;
  int line_no = 0;
  bool in_preamble = true;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    std::size_t b = line.find_first_not_of(" \t\r");
    std::string_view trimmed = b == std::string_view::npos ? std::string_view{} : line.substr(b);
    if (in_preamble && (trimmed.empty() || trimmed.front() == '#')) {
      rest += '\n';
    } else if (in_preamble && trimmed.substr(0, 6) == "alias ") {
      auto toks = lex(trimmed.substr(6));
      // name = qbN [;]
      if (toks.size() < 4 || toks[0].type != Tok::Ident || toks[1].text != "=" || toks[2].type != Tok::Ident)
        throw SyntaxError("malformed alias declaration", line_no, 1);
      auto q = indexed_name(toks[2].text, "qb");
      if (!q) throw SyntaxError("alias target must be a qubit symbol qbN", line_no, toks[2].column + 6);
      aliases.add(toks[0].text, *q);
      rest += '\n';
    } else {
      in_preamble = false;
      rest.append(line);
      if (end < text.size()) rest += '\n';
    }
    if (end == text.size()) break;
    start = end + 1;
  }
  return rest;
}

}  // namespace eqpl
