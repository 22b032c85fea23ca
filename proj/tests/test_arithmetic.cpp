#include <cmath>

#include "doctest.h"
#include "eqpl/arithmetic.hpp"
#include "support/random_arith.hpp"

using namespace eqpl;

namespace {

Ptr q(std::string_view text) { return parse(text, Category::Quantum); }

const char* kTransitivity = "(((x1 <= x2) && (x2 <= x3)) ==> (x1 <= x3))";
const char* kRootsOfMinusOne = "(((z1 * z1) = -1) ==> ((z1 = (0 + i 1)) || (z1 = (0 + i -1))))";

// Independent falsification attempt: plain random sampling.
bool survives_sampling(const Ptr& phi, std::mt19937_64& rng, int samples) {
  std::normal_distribution<double> n;
  std::uniform_int_distribution<int> small(-3, 3);
  const Symbols s = free_symbols(phi);
  for (int i = 0; i < samples; ++i) {
    Assignment rho;
    const bool discrete = i % 2 == 0;
    for (int k : s.real_vars) rho.reals[k] = discrete ? small(rng) : 5 * n(rng);
    for (int k : s.complex_vars) rho.complexes[k] = discrete ? Complex(small(rng), small(rng)) : Complex(n(rng), n(rng));
    if (!eval_arith(phi, rho)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("eval_arith") {
  std::mt19937_64 rng(41);
  std::normal_distribution<double> n;
  for (int i = 0; i < 50; ++i) {
    Assignment rho;
    for (int k = 1; k <= 3; ++k) rho.reals[k] = n(rng);
    CHECK(eval_arith(q(kTransitivity), rho));
    CHECK_FALSE(eval_arith(q("(x1 < x1)"), rho));
  }
  Assignment i_val;
  i_val.complexes[1] = Complex(0, 1);
  CHECK(eval_arith(q(kRootsOfMinusOne), i_val));
  CHECK_THROWS_AS(eval_arith(q("(x4 <= 0)"), {}), UnboundVariable);
  CHECK(is_arithmetical(*q(kTransitivity)));
  CHECK_FALSE(is_arithmetical(*q("(Pr(qb0) <= 1)")));
}

TEST_CASE("oracle: the two universal arithmetical formulas") {
  OracleVerdict t = oracle_check(q(kTransitivity));
  CHECK(t.verdict == Verdict::Valid);
  CHECK(t.reason.find("tier 1") != std::string::npos);
  OracleVerdict r = oracle_check(q(kRootsOfMinusOne));
  CHECK(r.verdict == Verdict::Valid);
  CHECK(r.reason.find("schema") != std::string::npos);
}

TEST_CASE("oracle: linear examples") {
  CHECK(oracle_check(q("(x1 <= (x1 + 1))")).verdict == Verdict::Valid);
  OracleVerdict v = oracle_check(q("(x1 <= x2)"));
  REQUIRE(v.verdict == Verdict::Invalid);
  CHECK(v.witness.reals.at(1) == 1.0);
  CHECK(v.witness.reals.at(2) == 0.0);
  CHECK(oracle_check(q("((x1 = x2) ==> ((x2 = 1) ==> (x1 = 1)))")).verdict == Verdict::Valid);
  CHECK(oracle_check(q("((re(z1) <= 0) || (0 < re(z1)))")).verdict == Verdict::Valid);
  CHECK(oracle_check(q("(z1 = conj(conj(z1)))")).verdict == Verdict::Valid);
}

TEST_CASE("oracle: polynomial abstraction") {
  CHECK(oracle_check(q("((abs(z1) * abs(z1)) = ((re(z1) * re(z1)) + (im(z1) * im(z1))))")).verdict == Verdict::Valid);
  CHECK(oracle_check(q("(0 <= (x1 * x1))")).verdict == Verdict::Valid);
  CHECK(oracle_check(q("(((x1 + x2) * (x1 + x2)) = (((x1 * x1) + (2 * (x1 * x2))) + (x2 * x2)))")).verdict ==
        Verdict::Valid);
  CHECK(oracle_check(q("(3 <= pi)")).verdict == Verdict::Valid);
  CHECK(oracle_check(q("((1/sqrt(6) * 1/sqrt(6)) = 1/6)")).verdict == Verdict::Valid);
  CHECK(oracle_check(q("(arg(z1) <= 4)")).verdict == Verdict::Valid);
  CHECK(oracle_check(q("(pi <= 3)")).verdict == Verdict::Invalid);
}

TEST_CASE("oracle: falsification and unknown") {
  OracleVerdict v = oracle_check(q("(((x1 * x1) * x1) <= 5)"));
  REQUIRE(v.verdict == Verdict::Invalid);
  CHECK_FALSE(eval_arith(q("(((x1 * x1) * x1) <= 5)"), v.witness));
  OracleVerdict u = oracle_check(q("((((x1 * x1) * x1) = 8) ==> (x1 = 2))"));
  CHECK(u.verdict == Verdict::Unknown);
  CHECK(oracle_check(q("(Pr(qb0) <= 1)")).verdict == Verdict::Unknown);
}

TEST_CASE("oracle: deterministic given the seed") {
  const Ptr phi = q("((x1 * x2) <= (x1 + x2))");
  OracleVerdict a = oracle_check(phi), b = oracle_check(phi);
  REQUIRE(a.verdict == Verdict::Invalid);
  CHECK(format_assignment(a.witness) == format_assignment(b.witness));
}

TEST_CASE("assignment text round trip") {
  Assignment rho;
  rho.reals[1] = 0.25;
  rho.complexes[2] = Complex(1, -3.5);
  Assignment back = parse_assignment(format_assignment(rho));
  CHECK(back.reals == rho.reals);
  CHECK(back.complexes == rho.complexes);
  CHECK_THROWS_AS(parse_assignment("y1=3"), Error);
}

TEST_CASE("external oracle command") {
  const Ptr phi = q("(x1 <= 2)");
  CHECK(run_oracle_command("cat >/dev/null; echo 'INVALID x1=5'", phi).verdict == Verdict::Invalid);
  CHECK(run_oracle_command("cat >/dev/null; echo 'INVALID x1=0'", phi).verdict == Verdict::Unknown);
  CHECK(run_oracle_command("cat >/dev/null; echo VALID", phi).verdict == Verdict::Valid);
  CHECK(run_oracle_command("cat >/dev/null; echo UNKNOWN", phi).verdict == Verdict::Unknown);
  // The formula reaches the command on stdin.
  CHECK(run_oracle_command("grep -q 'x1 <= 2' && echo VALID", phi).verdict == Verdict::Valid);
  OracleConfig config;
  config.command = "cat >/dev/null; echo VALID";
  CHECK(oracle_check(q("((((x1 * x1) * x1) = 8) ==> (x1 = 2))"), config).verdict == Verdict::Valid);
}

TEST_CASE("property: oracle verdicts are sound") {
  testing::ArithGen gen(42);
  std::mt19937_64 rng(43);
  OracleConfig config;
  config.samples = 400;
  int valid = 0, invalid = 0;
  for (int i = 0; i < 300; ++i) {
    const Ptr phi = i % 3 == 0 ? gen.valid() : gen.formula(2, i % 3 == 1);
    OracleVerdict v = oracle_check(phi, config);
    if (v.verdict == Verdict::Invalid) {
      ++invalid;
      CHECK_MESSAGE(!eval_arith(phi, v.witness), render(phi));
    } else if (v.verdict == Verdict::Valid) {
      ++valid;
      CHECK_MESSAGE(survives_sampling(phi, rng, 1000), render(phi));
    }
  }
  CHECK(valid > 60);
  CHECK(invalid > 60);
}
