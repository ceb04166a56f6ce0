#include "doctest.h"

#include <stdexcept>

#include "emv/algebra.hpp"
#include "emv/backends.hpp"
#include "emv/core_ops.hpp"
#include "emv/rational.hpp"
#include "oracles.hpp"

using namespace emv;

namespace {

Element by_label(const FiniteAlgebra& a, const std::string& label) {
  auto i = a.element_by_label(label);
  REQUIRE(i.has_value());
  return a.element(*i);
}

std::shared_ptr<const FiniteAlgebra> corrupted_chain2() {
  // chain(2) with oplus(1,1) flipped from 2 to 1.
  std::vector<std::vector<std::size_t>> oplus = {{0, 1, 2}, {1, 1, 2}, {2, 2, 2}};
  std::vector<std::vector<std::size_t>> join = {{0, 1, 2}, {1, 1, 2}, {2, 2, 2}};
  return FiniteAlgebra::from_tables("chain(2)-corrupt", {"0", "1", "2"}, 0, oplus, join,
                                    std::nullopt);
}

}  // namespace

TEST_CASE("rationals are exact and normalized") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(-1, -2) == Rational(1, 2));
  CHECK((Rational(1, 3) + Rational(1, 6)) == Rational(1, 2));
  CHECK((Rational(1, 2) * Rational(2, 3)) == Rational(1, 3));
  CHECK(Rational(1, 2) < Rational(2, 3));
  CHECK(Rational(5, 6).oplus1(Rational(1, 2)) == Rational(1));
  CHECK(Rational(5, 6).odot1(Rational(1, 2)) == Rational(1, 3));
  CHECK(Rational::parse("3/6") == Rational(1, 2));
  CHECK(Rational::parse("2") == Rational(2));
  CHECK(Rational(7, 3).str() == "7/3");
  CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
}

TEST_CASE("chain backend basics") {
  auto c2 = FiniteAlgebra::chain(2);
  CHECK(c2->size() == 3);
  CHECK(c2->has_top());
  CHECK(c2->format(c2->top()) == "2");
  CHECK(c2->oplus(c2->element(1), c2->element(1)) == c2->element(2));
  CHECK(nscale(*c2, 3, c2->element(1)) == c2->element(2));
  CHECK(nscale(*c2, 0, c2->element(1)) == c2->element(0));

  auto idems = idempotents(*c2);
  REQUIRE(idems.size() == 2);
  CHECK(idems[0] == c2->element(0));
  CHECK(idems[1] == c2->element(2));

  // lambda_2(1) = 1: least z with z + 1 = 2.
  CHECK(c2->lambda(c2->element(2), c2->element(1)) == c2->element(1));
  CHECK(c2->lambda(c2->element(2), c2->element(0)) == c2->element(2));
  CHECK(*oracle::lambda_scan(*c2, c2->element(2), c2->element(1)) == c2->element(1));
  CHECK_THROWS_AS(c2->lambda(c2->element(1), c2->element(0)), std::invalid_argument);

  // Trivial algebra: one element which is both bottom and top.
  auto c0 = FiniteAlgebra::chain(0);
  CHECK(c0->size() == 1);
  CHECK(c0->has_top());
  CHECK(c0->top() == c0->zero());
}

TEST_CASE("product backend and frozen example values") {
  auto p = FiniteAlgebra::product(FiniteAlgebra::chain(1), FiniteAlgebra::chain(2));
  CHECK(p->size() == 6);

  auto idems = idempotents(*p);
  REQUIRE(idems.size() == 4);
  CHECK(p->format(idems[0]) == "(0,0)");
  CHECK(p->format(idems[1]) == "(0,2)");
  CHECK(p->format(idems[2]) == "(1,0)");
  CHECK(p->format(idems[3]) == "(1,2)");

  Element x01 = by_label(*p, "(0,1)");
  Element a12 = by_label(*p, "(1,2)");
  CHECK(p->format(p->lambda(a12, x01)) == "(1,1)");
  CHECK(p->format(p->idempotent_cover(x01)) == "(0,2)");

  Element x11 = by_label(*p, "(1,1)");
  CHECK(p->format(npower(*p, 2, x11)) == "(1,0)");
  CHECK(npower(*p, 1, x11) == x11);
  CHECK(p->format(npower(*p, 0, x11)) == "(1,2)");

  CHECK(p->format(p->upper_idempotent_hull(x01)) == "(0,2)");
  CHECK(p->format(p->lower_idempotent_hull(x11)) == "(1,0)");
}

TEST_CASE("local sections satisfy the interval identities exhaustively") {
  // x (.) lambda_a(y) = x (.) lambda_a(x ^ y) and x = (x ^ y) (+) (x (.) lambda_a(y)).
  for (auto alg : {FiniteAlgebra::chain(4),
                   FiniteAlgebra::product(FiniteAlgebra::chain(2), FiniteAlgebra::chain(3))}) {
    for (const Element& a : idempotents(*alg))
      for (std::size_t i = 0; i < alg->size(); ++i)
        for (std::size_t j = 0; j < alg->size(); ++j) {
          Element x = alg->element(i), y = alg->element(j);
          if (!alg->leq(x, a) || !alg->leq(y, a)) continue;
          Element viaY = odot_in(*alg, a, x, alg->lambda(a, y));
          Element viaMeet = odot_in(*alg, a, x, alg->lambda(a, alg->meet(x, y)));
          CHECK(viaY == viaMeet);
          CHECK(alg->oplus(alg->meet(x, y), viaY) == x);
        }
  }
}

TEST_CASE("odot does not depend on the idempotent cover") {
  auto p = FiniteAlgebra::product(FiniteAlgebra::chain(2), FiniteAlgebra::chain(2));
  auto idems = idempotents(*p);
  for (std::size_t i = 0; i < p->size(); ++i)
    for (std::size_t j = 0; j < p->size(); ++j) {
      Element x = p->element(i), y = p->element(j);
      std::optional<Element> expected;
      for (const Element& a : idems) {
        if (!p->leq(x, a) || !p->leq(y, a)) continue;
        Element v = odot_in(*p, a, x, y);
        if (!expected) expected = v;
        CHECK(*expected == v);
      }
      REQUIRE(expected.has_value());
      CHECK(odot(*p, x, y) == *expected);
    }
}

TEST_CASE("lambda agrees with the top-route on algebras with top") {
  // In an MV-algebra, lambda_a(x) = a (.) lambda_top(x).
  auto p = FiniteAlgebra::product(FiniteAlgebra::chain(1), FiniteAlgebra::chain(2));
  Element top = p->top();
  for (const Element& a : idempotents(*p))
    for (std::size_t i = 0; i < p->size(); ++i) {
      Element x = p->element(i);
      if (!p->leq(x, a)) continue;
      Element via_top = odot_in(*p, top, a, p->lambda(top, x));
      CHECK(p->lambda(a, x) == via_top);
    }
}

TEST_CASE("axiom checker accepts the stock constructions") {
  for (std::size_t n = 1; n <= 6; ++n) {
    AxiomReport r = check_emv_axioms(*FiniteAlgebra::chain(n));
    CHECK(r.ok());
    CHECK(r.exhaustive);
  }
  auto p = FiniteAlgebra::product(FiniteAlgebra::chain(3), FiniteAlgebra::chain(4));
  CHECK(check_emv_axioms(*p).ok());
}

TEST_CASE("axiom checker rejects the corrupted chain with a witness") {
  auto bad = corrupted_chain2();
  AxiomReport r = check_emv_axioms(*bad);
  CHECK_FALSE(r.ok());
  bool involution_failed = false;
  for (const auto& c : r.checks)
    if (c.law == "interval.lambda_involution" && !c.pass) {
      involution_failed = true;
      // witness carries the interval bound and the offending element
      REQUIRE(c.witness.size() >= 2);
      CHECK(c.witness[0] == "2");
      CHECK(c.witness[1] == "1");
    }
  CHECK(involution_failed);

  // product() refuses a factor that fails the axioms
  CHECK_THROWS_AS(FiniteAlgebra::product(bad, FiniteAlgebra::chain(1)),
                  std::invalid_argument);
}

TEST_CASE("idempotent hulls match the idempotent-scan oracle") {
  for (auto alg : {FiniteAlgebra::chain(5),
                   FiniteAlgebra::product(FiniteAlgebra::chain(2), FiniteAlgebra::chain(4)),
                   FiniteAlgebra::product(FiniteAlgebra::chain(1), FiniteAlgebra::chain(1))}) {
    for (std::size_t i = 0; i < alg->size(); ++i) {
      Element x = alg->element(i);
      CHECK(alg->upper_idempotent_hull(x) == *oracle::upper_hull_scan(*alg, x));
      CHECK(alg->lower_idempotent_hull(x) == *oracle::lower_hull_scan(*alg, x));
      CHECK(alg->idempotent_cover(x) == *oracle::upper_hull_scan(*alg, x));
      CHECK(alg->leq(alg->lower_idempotent_hull(x), x));
      CHECK(alg->leq(x, alg->upper_idempotent_hull(x)));
    }
  }
}

TEST_CASE("finite families fold to exact sups and infs") {
  auto p = FiniteAlgebra::product(FiniteAlgebra::chain(2), FiniteAlgebra::chain(2));
  Element a = by_label(*p, "(1,0)");
  Element b = by_label(*p, "(0,2)");
  SupResult s = sup_of(*p, ElementSequence::finite({a, b}));
  REQUIRE(s.verdict == SupResult::Verdict::Exists);
  CHECK(p->format(*s.value) == "(1,2)");
  SupResult m = inf_of(*p, ElementSequence::finite({a, b}));
  REQUIRE(m.verdict == SupResult::Verdict::Exists);
  CHECK(p->format(*m.value) == "(0,0)");
  CHECK_THROWS_AS(sup_of(*p, ElementSequence::finite({})), std::invalid_argument);
}

TEST_CASE("tables can be described by order pairs instead of joins") {
  std::vector<std::vector<std::size_t>> oplus = {{0, 1, 2}, {1, 2, 2}, {2, 2, 2}};
  auto via_le = FiniteAlgebra::from_tables(
      "chain2-le", {"0", "1", "2"}, 0, oplus, std::nullopt,
      std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {1, 2}});
  auto direct = FiniteAlgebra::chain(2);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(via_le->join(via_le->element(i), via_le->element(j)) ==
            direct->join(direct->element(i), direct->element(j)));
      CHECK(via_le->meet(via_le->element(i), via_le->element(j)) ==
            direct->meet(direct->element(i), direct->element(j)));
    }
  CHECK(check_emv_axioms(*via_le).ok());
}

TEST_CASE("probe sets stay valid for every support bound") {
  // bounds that collide with the fixed wide-element indices must not
  // produce duplicate coordinates
  auto fs = FinSupportAlgebra::make(2);
  for (std::uint32_t bound : {0u, 1u, 2u, 3u, 4u, 8u}) {
    ProbeOptions opts;
    opts.support_bound = bound;
    std::vector<Element> pool = probe_elements(*fs, opts);
    CHECK(pool.size() > 20);
    for (const Element& x : pool) CHECK(fs->leq(fs->zero(), x));
  }
}

TEST_CASE("interval subalgebras are MV-algebras with the bound as top") {
  auto p = FiniteAlgebra::product(FiniteAlgebra::chain(2), FiniteAlgebra::chain(3));
  Element a = by_label(*p, "(2,0)");
  auto box = p->interval(a);
  CHECK(box->size() == 3);
  CHECK(box->has_top());
  CHECK(box->format(box->top()) == "(2,0)");
  CHECK(check_emv_axioms(*box).ok());
  CHECK_THROWS_AS(p->interval(by_label(*p, "(1,0)")), std::invalid_argument);
}
