#include "doctest.h"

#include <algorithm>
#include <stdexcept>

#include "emv/backends.hpp"
#include "emv/core_ops.hpp"
#include "emv/error.hpp"
#include "emv/ideals.hpp"
#include "emv/states.hpp"
#include "emv/tribes.hpp"

using namespace emv;

namespace {

FuzzySet fz(std::vector<Rational> v) { return FuzzySet{std::move(v)}; }

Rational h(long long n, long long d) { return Rational(n, d); }

bool audits_ok(const Tribe& t) {
  return clan_audit(t).ok() && tribe_audit(t).ok() && n_set_calculus(t).ok();
}

std::vector<std::string> law_names(const AxiomReport& rep) {
  std::vector<std::string> out;
  for (const LawCheck& c : rep.checks) out.push_back(c.law);
  return out;
}

}  // namespace

TEST_CASE("pointwise fuzzy-set operations") {
  FuzzySet chi = fz_characteristic(4, {1, 3});
  CHECK(chi.values == std::vector<Rational>{Rational(0), Rational(1), Rational(0), Rational(1)});
  CHECK_THROWS_AS(fz_characteristic(4, {4}), std::invalid_argument);

  CHECK(fz_in_unit(fz({h(1, 2), Rational(1)})));
  CHECK_FALSE(fz_in_unit(fz({h(3, 2)})));
  CHECK(fz_is_characteristic(chi));
  CHECK_FALSE(fz_is_characteristic(fz({h(1, 2)})));

  FuzzySet f = fz({h(1, 2), h(3, 4)});
  FuzzySet g = fz({h(1, 4), h(3, 4)});
  CHECK(fz_leq(g, f));
  CHECK_FALSE(fz_leq(f, g));

  FuzzySet one = fz_full(2);
  CHECK(fz_oplus(f, g, one) == fz({h(3, 4), Rational(1)}));
  CHECK(fz_odot(f, g, one) == fz({Rational(0), h(1, 2)}));
  CHECK(fz_star(f, g) == fz({h(1, 4), Rational(0)}));
  CHECK(fz_join(f, g) == f);
  CHECK(fz_meet(f, g) == g);
  CHECK(fz_minus(one, f) == fz({h(1, 2), h(1, 4)}));
  CHECK_THROWS_AS(fz_minus(fz_zero(2), f), std::invalid_argument);

  // cap must be characteristic and dominating
  CHECK_THROWS_AS(fz_oplus(f, g, fz({h(1, 2), Rational(1)})), std::invalid_argument);
  CHECK_THROWS_AS(fz_oplus(f, g, fz_characteristic(2, {0})), std::invalid_argument);

  CHECK(fz_str(fz({Rational(0), h(1, 2), Rational(1)})) == "(0,1/2,1)");
  CHECK(n_set(fz({Rational(0), h(1, 2), Rational(0), Rational(1)})) ==
        std::vector<std::uint32_t>{1, 3});
  CHECK(n_set_between(f, g) == std::vector<std::uint32_t>{0});
  CHECK(n_set_between(f, f).empty());
}

TEST_CASE("countable sums follow the min rule and ignore the cap choice") {
  FuzzySet half = fz({h(1, 2), Rational(0)});
  FuzzySet cap = fz_characteristic(2, {0});
  FuzzySet wide = fz_full(2);

  FuzzySet s = countable_oplus({half, half, half}, cap);
  CHECK(s == fz({Rational(1), Rational(0)}));  // 3/2 truncated at the cap
  CHECK(countable_oplus({half, half, half}, wide) == s);
  CHECK(countable_oplus({half, half}, cap) == fz({Rational(1), Rational(0)}));
  CHECK(countable_oplus({half}, cap) == half);
  CHECK(countable_oplus({}, cap) == fz_zero(2));

  CHECK_THROWS_AS(countable_oplus({fz_full(2)}, cap), std::invalid_argument);
  CHECK_THROWS_AS(countable_oplus({half}, half), std::invalid_argument);
}

TEST_CASE("tribe kinds, membership, and dominators") {
  Tribe zo = Tribe::all_zero_one(2);
  CHECK(zo.kind() == Tribe::Kind::AllZeroOne);
  CHECK(zo.omega() == 2);
  CHECK(zo.contains(fz_characteristic(2, {0})));
  CHECK_FALSE(zo.contains(fz({h(1, 2), Rational(0)})));
  CHECK(zo.dominator(fz_characteristic(2, {1})) == fz_characteristic(2, {1}));
  CHECK(zo.describe() == "all 0/1 functions on a 2-point domain");
  CHECK(zo.members().empty());

  Tribe ar = Tribe::all_rational(3);
  CHECK(ar.contains(fz({h(1, 3), h(2, 3), Rational(1)})));
  CHECK_FALSE(ar.contains(fz({h(4, 3), Rational(0), Rational(0)})));
  CHECK(ar.dominator(fz({h(1, 2), Rational(0), h(1, 7)})) == fz_characteristic(3, {0, 2}));
  CHECK(ar.describe() == "all rational fuzzy sets on a 3-point domain");

  CHECK_THROWS_AS(Tribe::from_members(2, {fz_zero(3)}), std::invalid_argument);
  CHECK_THROWS_AS(Tribe::from_members(1, {fz({h(3, 2)})}), std::invalid_argument);

  Tribe fm = Tribe::from_members(2, {fz_zero(2), fz_characteristic(2, {0})});
  CHECK(fm.contains(fz_zero(2)));
  CHECK_FALSE(fm.contains(fz_full(2)));
  CHECK(fm.dominator(fz_zero(2)) == fz_zero(2));
  CHECK_THROWS_AS(fm.dominator(fz_full(2)), std::invalid_argument);
  CHECK(fm.describe() == "2 listed fuzzy sets on a 2-point domain");

  Tribe hat = Tribe::hat_image(FiniteAlgebra::chain(2));
  CHECK(hat.kind() == Tribe::Kind::HatImage);
  CHECK(hat.omega() == 1);
  CHECK(hat.members().size() == 3);
  CHECK(hat.contains(fz({h(1, 2)})));
  CHECK_FALSE(hat.contains(fz({h(1, 3)})));
  CHECK(hat.dominator(fz({h(1, 2)})) == fz({Rational(1)}));
  CHECK(hat.describe() == "hat image with 3 members on a 1-point domain");
}

TEST_CASE("stock tribes pass the clan, tribe, and n-set audits") {
  Tribe zo2 = Tribe::all_zero_one(2);
  CHECK(audits_ok(zo2));
  CHECK(audits_ok(Tribe::all_zero_one(0)));
  CHECK(audits_ok(Tribe::all_rational(3)));
  CHECK(audits_ok(Tribe::hat_image(FiniteAlgebra::chain(3))));
  CHECK(audits_ok(Tribe::hat_image(
      FiniteAlgebra::product(FiniteAlgebra::chain(1), FiniteAlgebra::chain(2)))));

  AxiomReport cl = clan_audit(zo2);
  CHECK(law_names(cl) == std::vector<std::string>{"clan.zero", "clan.dominator",
                                                  "clan.complement", "clan.oplus", "clan.lattice",
                                                  "clan.attains_one"});
  CHECK_FALSE(cl.exhaustive);  // oracle-backed, no finite member list

  AxiomReport tr = tribe_audit(zo2);
  CHECK(law_names(tr) == std::vector<std::string>{"tribe.countable_oplus", "tribe.cap_independent",
                                                  "tribe.pointwise_inf", "tribe.sup_rule"});

  AxiomReport ns = n_set_calculus(Tribe::all_rational(2));
  CHECK(law_names(ns) == std::vector<std::string>{"nset.oplus_union", "nset.star",
                                                  "nset.star_sum", "nset.symmetric_difference",
                                                  "nset.monotone", "nset.odot"});

  AxiomReport hat = clan_audit(Tribe::hat_image(FiniteAlgebra::chain(3)));
  CHECK(hat.exhaustive);  // every member fits in the probe pool
}

TEST_CASE("defective member lists fail the right clan law") {
  Tribe no_zero = Tribe::from_members(1, {fz({Rational(1)})});
  AxiomReport rep = clan_audit(no_zero);
  CHECK_FALSE(rep.ok());
  REQUIRE(rep.first_failure());
  CHECK(rep.first_failure()->law == "clan.zero");

  // zero and the two point masses, but no join to hold them
  Tribe no_join = Tribe::from_members(
      2, {fz_zero(2), fz_characteristic(2, {0}), fz_characteristic(2, {1})});
  AxiomReport rep2 = clan_audit(no_join);
  CHECK_FALSE(rep2.ok());
  REQUIRE(rep2.first_failure());
  CHECK(rep2.first_failure()->law == "clan.lattice");
}

TEST_CASE("ls_construct on a chain") {
  auto alg = FiniteAlgebra::chain(2);
  LsWitness w = ls_construct(alg);
  CHECK(w.omega == 1);
  CHECK(w.states.size() == 1);
  REQUIRE(w.hat.size() == 3);
  CHECK(w.hat[0] == fz({Rational(0)}));
  CHECK(w.hat[1] == fz({h(1, 2)}));
  CHECK(w.hat[2] == fz({Rational(1)}));
  CHECK(w.tribe.members().size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(w.h(w.hat[i]) == alg->element(i));
  CHECK_THROWS_AS(w.h(fz({h(1, 4)})), std::invalid_argument);
  CHECK(w.note.find("meager sets are empty") != std::string::npos);
}

TEST_CASE("ls_construct on a product separates coordinates") {
  auto alg = FiniteAlgebra::product(FiniteAlgebra::chain(1), FiniteAlgebra::chain(2));
  LsWitness w = ls_construct(alg);
  CHECK(w.omega == 2);
  CHECK(w.tribe.members().size() == 6);

  auto hat_of = [&](const char* label) {
    auto idx = alg->element_by_label(label);
    REQUIRE(idx.has_value());
    return w.hat[*idx];
  };
  // state 0 kills the first coordinate, state 1 the second
  CHECK(hat_of("(0,1)") == fz({h(1, 2), Rational(0)}));
  CHECK(hat_of("(0,2)") == fz({Rational(1), Rational(0)}));
  CHECK(hat_of("(1,0)") == fz({Rational(0), Rational(1)}));
  CHECK(hat_of("(1,2)") == fz({Rational(1), Rational(1)}));

  Element back = w.h(fz({h(1, 2), Rational(1)}));
  CHECK(alg->format(back) == "(1,1)");
}

TEST_CASE("ls_construct accepts every finite corpus member and inverts hat") {
  std::vector<std::shared_ptr<const FiniteAlgebra>> corpus = {
      FiniteAlgebra::chain(1),
      FiniteAlgebra::chain(4),
      FiniteAlgebra::product(FiniteAlgebra::chain(2), FiniteAlgebra::chain(3)),
      FiniteAlgebra::product(FiniteAlgebra::chain(1),
                             FiniteAlgebra::product(FiniteAlgebra::chain(1),
                                                    FiniteAlgebra::chain(2))),
  };
  for (const auto& alg : corpus) {
    LsWitness w = ls_construct(alg);
    CHECK(w.omega == maximal_ideals(*alg).ideals.size());
    CHECK(w.tribe.members().size() == alg->size());  // hat injective: semisimple
    CHECK(w.h(w.hat[alg->index_of(alg->top())]) == alg->top());
    CHECK(audits_ok(w.tribe));
  }
}

TEST_CASE("the trivial algebra gives the empty domain") {
  LsWitness w = ls_construct(FiniteAlgebra::chain(0));
  CHECK(w.omega == 0);
  CHECK(w.states.empty());
  REQUIRE(w.hat.size() == 1);
  CHECK(w.hat[0].values.empty());
  CHECK(w.h(FuzzySet{}) == w.algebra->zero());

  SigmaRing r = sigma_ring_extract(w);
  REQUIRE(r.sets.size() == 1);
  CHECK(r.sets[0].empty());
  CHECK(r.images[0] == w.algebra->zero());
  CHECK(r.audit.ok());
}

TEST_CASE("the sigma ring slices out the idempotents") {
  {
    LsWitness w = ls_construct(FiniteAlgebra::chain(2));
    SigmaRing r = sigma_ring_extract(w);
    REQUIRE(r.sets.size() == 2);
    CHECK(r.sets[0] == std::vector<std::uint32_t>{});
    CHECK(r.sets[1] == std::vector<std::uint32_t>{0});
    CHECK(w.algebra->format(r.images[0]) == "0");
    CHECK(w.algebra->format(r.images[1]) == "2");
    CHECK(r.audit.ok());
    CHECK(r.audit.exhaustive);
  }
  {
    auto alg = FiniteAlgebra::product(FiniteAlgebra::chain(1), FiniteAlgebra::chain(2));
    LsWitness w = ls_construct(alg);
    SigmaRing r = sigma_ring_extract(w);
    REQUIRE(r.sets.size() == 4);
    CHECK(r.sets == std::vector<std::vector<std::uint32_t>>{{}, {0}, {1}, {0, 1}});
    CHECK(alg->format(r.images[0]) == "(0,0)");
    CHECK(alg->format(r.images[1]) == "(0,2)");
    CHECK(alg->format(r.images[2]) == "(1,0)");
    CHECK(alg->format(r.images[3]) == "(1,2)");
    CHECK(r.images.size() == idempotents(*alg).size());
    CHECK(law_names(r.audit) ==
          std::vector<std::string>{"ring.empty", "ring.union", "ring.difference",
                                   "ring.countable_union", "ring.hom", "ring.idempotent",
                                   "ring.surjective"});
  }
  {
    LsWitness wide;
    wide.omega = 17;
    CHECK_THROWS_AS(sigma_ring_extract(wide), std::invalid_argument);
  }
}

TEST_CASE("the restriction quotient is sigma-homomorphic with the expected kernel") {
  LsQuotient q = ls_quotient_example(3, {0, 1});
  CHECK(q.kernel == "functions vanishing on {0,1}");
  CHECK(q.audit.ok());
  CHECK(law_names(q.audit) ==
        std::vector<std::string>{"quotient.zero", "quotient.oplus", "quotient.lattice",
                                 "quotient.star", "quotient.countable", "quotient.surjective",
                                 "quotient.kernel"});

  FuzzySet chi2 = fz_characteristic(3, {2});
  CHECK(q.apply(chi2) == fz_zero(2));
  CHECK(q.in_kernel(chi2));
  CHECK_FALSE(q.in_kernel(fz_characteristic(3, {1})));
  CHECK(q.apply(fz_full(3)) == fz_full(2));
  CHECK(q.apply(fz({h(1, 3), h(2, 3), Rational(1)})) == fz({h(1, 3), h(2, 3)}));

  // a sum living entirely on the dropped point stays in the kernel
  FuzzySet twice = countable_oplus({chi2, chi2}, chi2);
  CHECK(twice == chi2);
  CHECK(q.in_kernel(twice));

  CHECK_THROWS_AS(ls_quotient_example(0, {0}), std::invalid_argument);
  CHECK_THROWS_AS(ls_quotient_example(3, {}), std::invalid_argument);
  CHECK_THROWS_AS(ls_quotient_example(3, {3}), std::invalid_argument);
}

TEST_CASE("the non-semisimple backend would collapse hat rows") {
  // the single state kills every Small, so zero and the Smalls share a row
  auto alg = ChangAlgebra::make();
  StateList st = state_morphisms(alg);
  REQUIRE(st.states.size() == 1);
  FuzzySet row_zero = fz({st.states[0].value(*alg, alg->zero())});
  FuzzySet row_small = fz({st.states[0].value(*alg, Element::small(3))});
  FuzzySet row_big = fz({st.states[0].value(*alg, Element::big(3))});
  CHECK(row_zero == row_small);
  CHECK(row_small == fz({Rational(0)}));
  CHECK(row_big == fz({Rational(1)}));
}
