#include <cmath>
#include <numbers>

#include "doctest.h"
#include "eqpl/structures.hpp"
#include "support/fixtures.hpp"
#include "support/random_structure.hpp"
#include "support/rank_oracle.hpp"

using namespace eqpl;
using eqpl::testing::bell;

namespace {

Mask b(std::string_view s) { return parse_bitstring(s); }

bool same(const StateVector& x, const StateVector& y, double eps) {
  if (x.carrier != y.carrier || x.amps.size() != y.amps.size()) return false;
  for (std::size_t i = 0; i < x.amps.size(); ++i)
    if (std::abs(x.amps[i] - y.amps[i]) > eps) return false;
  return true;
}

bool has(const std::vector<Diagnostic>& ds, DiagnosticKind k) {
  for (const auto& d : ds)
    if (d.kind == k) return true;
  return false;
}

}  // namespace

TEST_CASE("make_vector") {
  CHECK_NOTHROW(bell());
  CHECK(make_vector({0}, {{b("0"), 1.0}}).amplitude(b("0")) == Complex(1.0));
  try {
    make_vector({0}, {{b("0"), 1.0}, {b("1"), 1.0}});
    FAIL("expected NotUnitNorm");
  } catch (const NotUnitNorm& e) {
    CHECK(e.actual() == doctest::Approx(std::sqrt(2.0)));
  }
}

TEST_CASE("tensor") {
  const double h = 1 / std::sqrt(2.0);
  StateVector zero = make_vector({0}, {{b("0"), 1.0}});
  StateVector one = make_vector({1}, {{b("1"), 1.0}});
  StateVector plus = make_vector({1}, {{b("0"), h}, {b("1"), h}});

  StateVector t = tensor(zero, one);
  CHECK(t.carrier == QubitSet{0, 1});
  CHECK(same(t, make_vector({0, 1}, {{b("01"), 1.0}}), 0));
  CHECK(same(tensor(zero, plus), make_vector({0, 1}, {{b("00"), h}, {b("01"), h}}), 1e-15));

  // Bell (x) |0> over qb2: only 000 and 110 survive.
  StateVector g = tensor(bell(), make_vector({2}, {{b("0"), 1.0}}));
  for (Mask v = 0; v < 8; ++v) {
    const bool expected = v == b("000") || v == b("110");
    CHECK(std::abs(g.amplitude(v)) == doctest::Approx(expected ? h : 0.0));
  }
  CHECK_THROWS_AS(tensor(bell(), zero), OverlappingCarriers);
  CHECK(same(tensor(unit_scalar(), plus), plus, 0));
}

TEST_CASE("project_valuations") {
  const QubitSet frame{0, 1};
  CHECK(project_valuations(frame, {b("00"), b("01"), b("10")}, {0}, Side::Inside) ==
        std::vector<Mask>{b("0"), b("1")});
  CHECK(project_valuations(frame, {b("00"), b("01")}, {0}, Side::Inside) == std::vector<Mask>{b("0")});
  CHECK(project_valuations(frame, {b("00"), b("11")}, {0}, Side::Outside) == std::vector<Mask>{b("0"), b("1")});
}

TEST_CASE("schmidt_factor") {
  CHECK_FALSE(schmidt_factor(bell(), {0}).factorizable);

  const double h = 1 / std::sqrt(2.0);
  StateVector v = make_vector({0, 1}, {{b("00"), h}, {b("01"), h}});
  Factorization f = schmidt_factor(v, {0});
  REQUIRE(f.factorizable);
  CHECK(same(*f.left, make_vector({0}, {{b("0"), 1.0}}), 1e-12));
  CHECK(same(*f.right, make_vector({1}, {{b("0"), h}, {b("1"), h}}), 1e-12));

  const double s6 = 1 / std::sqrt(6.0);
  StateVector cat = make_vector({0, 1, 2}, {{b("000"), s6},
                                            {b("010"), s6},
                                            {b("101"), std::polar(std::sqrt(2.0 / 3.0), std::numbers::pi / 3)}});
  CHECK_FALSE(schmidt_factor(cat, {1}).factorizable);
  CHECK(testing::rank1_residual(cat, {1}) > 0.1);
}

TEST_CASE("validate_structure") {
  CHECK(validate_structure(testing::cat_structure()).empty());

  const double h = 1 / std::sqrt(2.0);
  QuantumStructure product;
  product.frame = {0, 1};
  product.admissible = {0, 1, 2, 3};
  product.partition = {{0, 1}};
  product.blocks = {make_vector({0, 1}, {{b("00"), h}, {b("01"), h}})};
  auto ds = validate_structure(product);
  CHECK(ds.size() == 1);
  CHECK(has(ds, DiagnosticKind::NonFactorizableBlockViolation));

  QuantumStructure excluded;
  excluded.frame = {0, 1};
  excluded.admissible = {b("00"), b("10"), b("01")};
  excluded.partition = {{0}, {1}};
  excluded.blocks = {make_vector({0}, {{b("0"), h}, {b("1"), h}}), make_vector({1}, {{b("0"), h}, {b("1"), h}})};
  ds = validate_structure(excluded);
  CHECK(ds.size() == 1);
  CHECK(has(ds, DiagnosticKind::AdmissibilityViolation));

  QuantumStructure broken = excluded;
  broken.partition = {{0}, {0, 1}};
  CHECK(has(validate_structure(broken), DiagnosticKind::PartitionViolation));
  broken = excluded;
  broken.admissible.clear();
  CHECK(has(validate_structure(broken), DiagnosticKind::EmptyAdmissibleSet));
  broken = excluded;
  broken.nu_overrides[{{0}, {}}] = 1.0;
  CHECK(has(validate_structure(broken), DiagnosticKind::OverrideOnUnionOfBlocks));
}

TEST_CASE("nu") {
  QuantumStructure w = testing::cat_structure();
  CHECK(w.nu({}, {}) == Complex(1.0));
  CHECK(std::abs(w.nu({1, 2}, {1}) - 1 / std::sqrt(6.0)) < 1e-15);
  CHECK(w.nu({1}, {1}) == Complex{});  // not a union of blocks, no default
  w.nu_overrides[{{1}, {1}}] = Complex(0.5, 0.5);
  CHECK(w.nu({1}, {1}) == Complex(0.5, 0.5));
  CHECK_THROWS_AS(w.nu({7}, {}), OutOfFrame);
}

TEST_CASE("property: tensor norms and associativity") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const int na = 1 + static_cast<int>(rng() % 3), nb = 1 + static_cast<int>(rng() % 3);
    QubitSet ca, cb, cc{10};
    for (int k = 0; k < na; ++k) ca.push_back(k);
    for (int k = 0; k < nb; ++k) cb.push_back(3 + k);
    StateVector a = testing::random_vector(rng, ca), bv = testing::random_vector(rng, cb);
    StateVector c = testing::random_vector(rng, cc);
    CHECK(std::abs(tensor(a, bv).norm() - a.norm() * bv.norm()) < 1e-8);
    StateVector l = tensor(tensor(a, bv), c), r = tensor(a, tensor(bv, c));
    CHECK(same(l, r, 1e-15));
  }
}

TEST_CASE("property: schmidt_factor agrees with the rank-1 search and reconstructs products") {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 150; ++i) {
    const int np = 1 + static_cast<int>(rng() % 3), nq = 1 + static_cast<int>(rng() % 3);
    QubitSet part, rest;
    for (int k = 0; k < np; ++k) part.push_back(2 * k);
    for (int k = 0; k < nq; ++k) rest.push_back(2 * k + 1);
    const bool product = i % 2 == 0;
    StateVector v = product ? tensor(testing::random_vector(rng, part, 0.3), testing::random_vector(rng, rest, 0.3))
                            : testing::random_vector(rng, set_union(part, rest), i % 3 == 0 ? 0.5 : 0.0);
    const bool oracle = testing::rank1_residual(v, part) < 1e-7;
    Factorization f = schmidt_factor(v, part);
    REQUIRE(f.factorizable == oracle);
    if (product) CHECK(f.factorizable);
    if (!f.factorizable) continue;
    StateVector back = tensor(*f.left, *f.right);
    CHECK(same(back, v, 1e-7));
    CHECK(std::abs(f.left->norm() - 1) < 1e-9);
    CHECK(std::abs(f.right->norm() - 1) < 1e-9);
  }
}

TEST_CASE("property: amplitudes of unions of blocks have unit norm") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 60; ++i) {
    QuantumStructure w = testing::random_structure(rng, {0, 1, 2, 3});
    for (const auto& g : all_subsets(w.frame)) {
      if (!w.is_union_of_blocks(g)) continue;
      double s = 0;
      for (const auto& a : all_subsets(g)) s += std::norm(w.nu(g, a));
      CHECK(std::abs(s - 1) < 1e-9);
    }
  }
}
