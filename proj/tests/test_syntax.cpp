#include "doctest.h"
#include "eqpl/syntax.hpp"
#include "support/random_ast.hpp"

using namespace eqpl;
using namespace eqpl::ast;

namespace {

AliasTable cat_aliases() {
  AliasTable t;
  t.add("cati", 0);
  t.add("cata", 1);
  t.add("catm", 2);
  return t;
}

// Core forms written out from the definitions, independent of expand().
Ptr core_qand(Ptr g, Ptr h) { return qneg(qimp(qneg(qneg(std::move(g))), qneg(std::move(h)))); }
Ptr core_eq(Ptr a, Ptr b) { return core_qand(leq(a, b), leq(b, a)); }
Ptr core_ceq(const Ptr& u1, const Ptr& u2) { return core_qand(core_eq(re(u1), re(u2)), core_eq(im(u1), im(u2))); }

}  // namespace

TEST_CASE("parse: classical identity implication") {
  CHECK(equal(parse("(qb1 -> qb1)", Category::Classical), imp(qubit(1), qubit(1))));
}

TEST_CASE("parse: probability equation with aliases") {
  auto t = cat_aliases();
  Ptr p = parse("(Pr(cata) = 1/3)", Category::Quantum, t);
  CHECK(equal(p, eq(prob(qubit(1)), div_c(num(1), num(3)))));
}

TEST_CASE("parse: non-entanglement of the cat qubits") {
  auto t = cat_aliases();
  CHECK(equal(parse("[cati,cata,catm]", Category::Quantum, t), non_etg({0, 1, 2})));
}

TEST_CASE("parse: sugared forms") {
  auto t = cat_aliases();
  SUBCASE("possibility with polar constant") {
    Ptr p = parse(
        "poss{cata,catm}((cata /\\ catm) : 1/sqrt(6), (cata /\\ ~ catm) : 1/sqrt(6),"
        " (~ cata /\\ ~ catm) : sqrt(2/3) e^{i pi/3})",
        Category::Quantum, t);
    REQUIRE(p->kind == Kind::Poss);
    CHECK(p->args.size() == 6);
    CHECK(equal(p->args[1], cart(div_c(num(1), sqrt_c(num(6))), num(0))));
    CHECK(equal(p->args[5], polar(sqrt_c(div_c(num(2), num(3))), div_c(pi(), num(3)))));
  }
  SUBCASE("conditional non-entanglement and entanglement") {
    CHECK(equal(parse("[qb0 // qb0,qb1]", Category::Quantum), cond_non_etg({0}, {0, 1})));
    CHECK(equal(parse("(qb0 ~{qb0,qb1} qb1)", Category::Quantum), entangled(0, 1, {0, 1})));
  }
  SUBCASE("alternative term") {
    Symbols s = free_symbols(parse("ite(qb0; z1; (x2 + i 0))", Category::Complex));
    CHECK(s.qubits == QubitSet{0});
    CHECK(s.real_vars == std::set<int>{2});
    CHECK(s.complex_vars == std::set<int>{1});
  }
  SUBCASE("complex equality falls back from real") {
    Ptr p = parse("(amp{qb0}{} = 0)", Category::Quantum);
    CHECK(equal(p, ceq(amp({0}, {}), complex_const(0))));
  }
  SUBCASE("vector terms expand eagerly") {
    Ptr p = parse("veq{qb0}((amp[qb0] + amp[~ qb0]), amp)", Category::Quantum);
    CHECK(p->kind == Kind::QAnd);
    CHECK(equal(p, vector_eq(vsum(amp_vector({0}, qubit(0)), amp_vector({0}, neg(qubit(0)))),
                             amp_vector({0}, top()))));
  }
}

TEST_CASE("parse: errors") {
  CHECK_THROWS_AS(parse("(x1 <= x2)", Category::Classical), CategoryError);
  CHECK_THROWS_AS(parse("z1", Category::Real), CategoryError);
  CHECK_THROWS_AS(parse("[qb0,qb0]", Category::Quantum), SyntaxError);
  try {
    parse("(qb0 ->\n  qb1", Category::Classical);
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 6);
  }
  CHECK_THROWS_AS(parse("cati", Category::Classical), SyntaxError);
}

TEST_CASE("alias preamble") {
  AliasTable t;
  std::string rest = strip_alias_preamble("# cat\nalias cati = qb0\nalias cata = qb1\n(cati -> cata)\n", t);
  CHECK(t.lookup("cata") == 1);
  CHECK(equal(parse(rest, Category::Classical, t), imp(qubit(0), qubit(1))));
}

TEST_CASE("render") {
  CHECK(render(imp(qubit(1), qubit(1))) == "(qb1 -> qb1)");
  CHECK(render(non_etg({0})) == "[qb0]");
  CHECK(render(polar(num(1), div_c(pi(), num(3)))) == "1 e^{i pi/3}");
  auto t = cat_aliases();
  CHECK(render(non_etg({0, 1, 2}), &t) == "[cati,cata,catm]");
}

TEST_CASE("expand: definitions") {
  Ptr g1 = leq(real_var(1), real_var(2));
  Ptr g2 = non_etg({0});
  CHECK(equal(expand(qor(g1, g2)), qimp(qneg(g1), g2)));

  Ptr u1 = complex_var(1), u2 = complex_var(2);
  CHECK(equal(expand(ceq(u1, u2)), core_ceq(u1, u2)));

  SUBCASE("[empty|F] for |F| = 1") {
    Ptr e0 = core_ceq(amp({0}, {}), cmul(amp({}, {}), amp({0}, {})));
    Ptr e1 = core_ceq(amp({0}, {0}), cmul(amp({}, {}), amp({0}, {0})));
    CHECK(equal(expand(cond_non_etg({}, {0})), core_qand(e0, e1)));
  }
  SUBCASE("amplitude of a formula") {
    Ptr expected = ite(imp(neg(qubit(0)), qubit(0)), amp({0}, {}), complex_const(0));
    CHECK(equal(expand(amp_of({0}, {}, qubit(0))), expected));
    CHECK(equal(expand(amp_of({0}, {0}, top())), amp({0}, {0})));
  }
  SUBCASE("modalities") {
    CHECK(equal(expand(dia(qubit(0))), expand(lt(num(0), prob(qubit(0))))));
    CHECK(equal(expand(box(qubit(0))), expand(eq(num(1), prob(qubit(0))))));
  }
  SUBCASE("provisos") {
    CHECK_THROWS_AS(expand(amp_of({0}, {}, qubit(1))), ProvisoViolation);
    CHECK_THROWS_AS(expand(molecular({0}, {1})), ProvisoViolation);
    CHECK_THROWS_AS(expand(cond_non_etg({2}, {0, 1})), ProvisoViolation);
    CHECK_THROWS_AS(expand(entangled(0, 0, {0, 1})), ProvisoViolation);
  }
}

TEST_CASE("free symbols") {
  CHECK(qubits_of(imp(qubit(0), neg(qubit(2)))) == QubitSet{0, 2});
  Symbols s = free_symbols(prob(conj_c(qubit(1), qubit(3))));
  CHECK(s.qubits == QubitSet{1, 3});
  CHECK(s.real_vars.empty());
  CHECK(s.complex_vars.empty());
}

TEST_CASE("property: render/parse round trip, expansion idempotent and QB-preserving") {
  testing::AstGen gen(20261019, {0, 1, 2});
  for (int i = 0; i < 400; ++i) {
    Ptr a = gen.quantum(3);
    std::string text = render(a);
    Ptr back = parse(text, Category::Quantum);
    REQUIRE_MESSAGE(equal(back, a), text);
    Ptr e = expand(a);
    CHECK(is_core(*e));
    CHECK(equal(expand(e), e));
    CHECK_MESSAGE(qubits_of(e) == qubits_of(a), text);
    CHECK(equal(parse(render(e), Category::Quantum), e));
  }
  for (int i = 0; i < 200; ++i) {
    Ptr t = gen.complex(3);
    REQUIRE_MESSAGE(equal(parse(render(t), Category::Complex), t), render(t));
    Ptr r = gen.real(3);
    REQUIRE_MESSAGE(equal(parse(render(r), Category::Real), r), render(r));
  }
}
