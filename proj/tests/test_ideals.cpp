#include <algorithm>
#include <set>
#include <vector>

#include "doctest.h"
#include "emv/backends.hpp"
#include "emv/core_ops.hpp"
#include "emv/error.hpp"
#include "emv/ideals.hpp"
#include "oracles.hpp"

using namespace emv;

namespace {

std::set<std::set<std::size_t>> as_index_sets(const IdealList& list) {
  std::set<std::set<std::size_t>> out;
  for (const Ideal& id : list.ideals)
    out.insert(std::set<std::size_t>(id.members.begin(), id.members.end()));
  return out;
}

std::set<std::string> label_set(const Algebra& alg, const std::vector<std::size_t>& members) {
  std::set<std::string> out;
  for (std::size_t i : members) out.insert(alg.format(alg.element(i)));
  return out;
}

}  // namespace

TEST_CASE("chains have only the zero ideal and the whole algebra") {
  for (std::size_t n = 1; n <= 5; ++n) {
    auto c = FiniteAlgebra::chain(n);
    IdealList all = enumerate_ideals(*c);
    CHECK(!all.symbolic);
    CHECK(all.ideals.size() == 2);
    auto oracle_sets = oracle::ideals_powerset(*c);
    CHECK(as_index_sets(all) ==
          std::set<std::set<std::size_t>>(oracle_sets.begin(), oracle_sets.end()));

    IdealList mx = maximal_ideals(*c);
    REQUIRE(mx.ideals.size() == 1);
    CHECK(mx.ideals[0].members == std::vector<std::size_t>{c->index_of(c->zero())});
    CHECK(mx.ideals[0].proper);
    CHECK(mx.ideals[0].maximal);
  }
  auto trivial = FiniteAlgebra::chain(0);
  CHECK(enumerate_ideals(*trivial).ideals.size() == 1);
  CHECK(maximal_ideals(*trivial).ideals.empty());
}

TEST_CASE("product ideal catalogs match the powerset oracle") {
  auto c1 = FiniteAlgebra::chain(1);
  auto c2 = FiniteAlgebra::chain(2);
  auto p = FiniteAlgebra::product(c1, c2);

  IdealList all = enumerate_ideals(*p);
  auto oracle_sets = oracle::ideals_powerset(*p);
  CHECK(as_index_sets(all) ==
        std::set<std::set<std::size_t>>(oracle_sets.begin(), oracle_sets.end()));
  CHECK(all.ideals.size() == 4);
  CHECK(oracle_sets.size() == 4);

  IdealList mx = maximal_ideals(*p);
  REQUIRE(mx.ideals.size() == 2);
  std::set<std::set<std::string>> got;
  for (const Ideal& id : mx.ideals) got.insert(label_set(*p, id.members));
  std::set<std::set<std::string>> want{{"(0,0)", "(0,1)", "(0,2)"}, {"(0,0)", "(1,0)"}};
  CHECK(got == want);

  // Ideals of a product are products of ideals, so two-chain products always
  // carry 4 ideals and a triple product carries 8.
  auto q = FiniteAlgebra::product(c2, FiniteAlgebra::chain(3));
  CHECK(enumerate_ideals(*q).ideals.size() == 4);
  CHECK(oracle::ideals_powerset(*q).size() == 4);
  CHECK(maximal_ideals(*q).ideals.size() == 2);

  auto t = FiniteAlgebra::product(FiniteAlgebra::product(c1, c1), c1);
  CHECK(enumerate_ideals(*t).ideals.size() == 8);
  CHECK(oracle::ideals_powerset(*t).size() == 8);
  CHECK(maximal_ideals(*t).ideals.size() == 3);
}

TEST_CASE("generated ideals are the least ideals containing their seeds") {
  auto p = FiniteAlgebra::product(FiniteAlgebra::chain(2), FiniteAlgebra::chain(3));
  auto oracle_sets = oracle::ideals_powerset(*p);
  for (std::size_t i = 0; i < p->size(); ++i) {
    Element e = p->element(i);
    Ideal gen = generated_ideal(*p, {e});
    std::set<std::size_t> gen_set(gen.members.begin(), gen.members.end());
    CHECK(gen_set.count(i) == 1);
    CHECK(std::find(oracle_sets.begin(), oracle_sets.end(), gen_set) != oracle_sets.end());
    for (const auto& s : oracle_sets) {
      if (!s.count(i)) continue;
      CHECK(std::includes(s.begin(), s.end(), gen_set.begin(), gen_set.end()));
    }
  }
  Ideal zero = generated_ideal(*p, {});
  CHECK(zero.members == std::vector<std::size_t>{p->index_of(p->zero())});
}

TEST_CASE("maximal filters and the ideals they induce") {
  auto c2 = FiniteAlgebra::chain(2);
  {
    // The only proper filter of the chain 0 < 1 < 2 is {2}: the set {1,2}
    // fails because 1 (.) 1 = 0.
    auto all = oracle::filters_powerset(*c2);
    REQUIRE(all.size() == 2);
    FilterList mx = maximal_filters(*c2);
    REQUIRE(mx.filters.size() == 1);
    CHECK(label_set(*c2, mx.filters[0].members) == std::set<std::string>{"2"});

    Ideal induced = ideal_of_filter(*c2, mx.filters[0]);
    CHECK(label_set(*c2, induced.members) == std::set<std::string>{"0"});
    CHECK(induced.maximal);
  }
  {
    auto p = FiniteAlgebra::product(FiniteAlgebra::chain(1), c2);
    FilterList mx = maximal_filters(*p);
    REQUIRE(mx.filters.size() == 2);
    std::set<std::set<std::string>> got;
    for (const Filter& f : mx.filters) got.insert(label_set(*p, f.members));
    std::set<std::set<std::string>> want{{"(1,0)", "(1,1)", "(1,2)"}, {"(0,2)", "(1,2)"}};
    CHECK(got == want);

    // f |-> I_f matches maximal filters with maximal ideals one for one.
    std::set<std::set<std::size_t>> induced;
    for (const Filter& f : mx.filters) {
      Ideal id = ideal_of_filter(*p, f);
      CHECK(id.maximal);
      induced.insert(std::set<std::size_t>(id.members.begin(), id.members.end()));
    }
    CHECK(induced == as_index_sets(maximal_ideals(*p)));
  }
}

TEST_CASE("ideal_of_filter refuses a non-filter whose image is not an ideal") {
  auto c2 = FiniteAlgebra::chain(2);
  Filter fake;
  fake.kind = Filter::Kind::Explicit;
  fake.members = {1, 2};
  // Complements of {1,2} give {0,1}, which is not (+)-closed.
  CHECK_THROWS_AS(ideal_of_filter(*c2, fake), ConsistencyError);
}

TEST_CASE("radical: the multiples formula agrees with the maximal-ideal intersection") {
  for (std::size_t n = 1; n <= 4; ++n) {
    RadicalReport rep = radical(*FiniteAlgebra::chain(n));
    CHECK(rep.agree);
    CHECK(rep.semisimple);
    CHECK(rep.via_formula.members.size() == 1);
  }
  auto p = FiniteAlgebra::product(FiniteAlgebra::chain(2), FiniteAlgebra::chain(3));
  RadicalReport rp = radical(*p);
  CHECK(rp.agree);
  CHECK(rp.semisimple);
  CHECK(is_semisimple(*p));

  for (int order : {1, 2, 3}) {
    auto fs = FinSupportAlgebra::make(order);
    RadicalReport rf = radical(*fs);
    CHECK(rf.agree);
    CHECK(rf.semisimple);
    CHECK(rf.via_formula.kind == Ideal::Kind::Zero);
  }

  auto chang = ChangAlgebra::make();
  RadicalReport rc = radical(*chang);
  CHECK(rc.agree);
  CHECK(!rc.semisimple);
  CHECK(rc.via_formula.kind == Ideal::Kind::Radical);
  CHECK(rc.via_intersection.contains(*chang, Element::small(BigInt("123456789012345678901234567890"))));
  CHECK(!rc.via_intersection.contains(*chang, Element::big(3)));
  CHECK(!is_semisimple(*chang));
}

TEST_CASE("quotients by maximal ideals are canonical chains") {
  auto p = FiniteAlgebra::product(FiniteAlgebra::chain(2), FiniteAlgebra::chain(3));
  IdealList mx = maximal_ideals(*p);
  REQUIRE(mx.ideals.size() == 2);
  std::set<std::size_t> levels_seen;
  for (const Ideal& id : mx.ideals) {
    QuotientChain q = quotient_chain(p, id);
    levels_seen.insert(q.levels);
    CHECK(q.chain->size() == q.levels + 1);
    // The class map is the projection onto the surviving coordinate.
    for (std::size_t i = 0; i < p->size(); ++i) {
      std::string label = p->labels()[i];
      std::size_t first = label[1] - '0', second = label[3] - '0';
      CHECK(q.class_of[i] == (q.levels == 2 ? first : second));
    }
  }
  CHECK(levels_seen == std::set<std::size_t>{2, 3});

  // Quotient by the zero ideal of a chain is the identity relabelling.
  auto c4 = FiniteAlgebra::chain(4);
  Ideal zero = maximal_ideals(*c4).ideals[0];
  QuotientChain qz = quotient_chain(c4, zero);
  CHECK(qz.levels == 4);
  for (std::size_t i = 0; i <= 4; ++i) CHECK(qz.class_of[i] == i);

  // A proper but non-maximal ideal does not give a chain.
  Ideal corner = generated_ideal(*p, {});
  CHECK(corner.proper);
  CHECK(!corner.maximal);
  CHECK_THROWS_AS(quotient_chain(p, corner), std::invalid_argument);
  Ideal improper;
  improper.kind = Ideal::Kind::Full;
  CHECK_THROWS_AS(quotient_chain(p, improper), std::invalid_argument);
}

TEST_CASE("lazy backends expose symbolic ideal catalogs") {
  auto fs2 = FinSupportAlgebra::make(2);
  ProbeOptions opts;
  opts.support_bound = 4;

  IdealList all = enumerate_ideals(*fs2, opts);
  CHECK(all.symbolic);
  REQUIRE(all.ideals.size() == 2 + 2 + 4);
  CHECK(all.ideals.front().kind == Ideal::Kind::Zero);
  CHECK(all.ideals.back().kind == Ideal::Kind::Full);

  IdealList mx = maximal_ideals(*fs2, opts);
  REQUIRE(mx.ideals.size() == 4);
  for (std::uint32_t i = 0; i < 4; ++i) {
    const Ideal& id = mx.ideals[i];
    CHECK(id.kind == Ideal::Kind::Coordinate);
    CHECK(id.maximal);
    CHECK(!id.contains(*fs2, fs2->singleton(i, 1)));
    CHECK(id.contains(*fs2, fs2->singleton(i + 1, 2)));
  }
  CHECK(mx.ideals[3].describe(*fs2) == "{x : x(3) = 0}");

  FilterList mf = maximal_filters(*fs2, opts);
  REQUIRE(mf.filters.size() == 4);
  CHECK(mf.filters[1].contains(*fs2, fs2->singleton(1, 2)));
  CHECK(!mf.filters[1].contains(*fs2, fs2->singleton(1, 1)));
  Ideal from_f = ideal_of_filter(*fs2, mf.filters[1], opts);
  CHECK(from_f.kind == Ideal::Kind::Coordinate);
  CHECK(from_f.coordinate == 1);

  Ideal gen = generated_ideal(*fs2, {fs2->singleton(2, 1), fs2->singleton(5, 2)});
  CHECK(gen.kind == Ideal::Kind::DownSet);
  CHECK(gen.contains(*fs2, fs2->make_element({{2, 1}, {5, 1}})));
  CHECK(!gen.contains(*fs2, fs2->singleton(3, 1)));
  CHECK(gen.describe(*fs2) == "{x : supp(x) within supp({2:2,5:2})}");

  auto chang = ChangAlgebra::make();
  IdealList call = enumerate_ideals(*chang);
  REQUIRE(call.ideals.size() == 3);
  CHECK(call.ideals[0].kind == Ideal::Kind::Zero);
  CHECK(call.ideals[1].kind == Ideal::Kind::Radical);
  CHECK(call.ideals[1].maximal);
  CHECK(call.ideals[2].kind == Ideal::Kind::Full);
  CHECK(call.ideals[1].describe(*chang) == "radical (all Small elements)");

  REQUIRE(maximal_ideals(*chang).ideals.size() == 1);
  FilterList cf = maximal_filters(*chang);
  REQUIRE(cf.filters.size() == 1);
  CHECK(cf.filters[0].kind == Filter::Kind::Bigs);
  CHECK(ideal_of_filter(*chang, cf.filters[0]).kind == Ideal::Kind::Radical);

  CHECK(generated_ideal(*chang, {Element::small(4)}).kind == Ideal::Kind::Radical);
  CHECK(generated_ideal(*chang, {Element::big(7)}).kind == Ideal::Kind::Full);
  CHECK(generated_ideal(*chang, {Element::small(0)}).kind == Ideal::Kind::Zero);
}
