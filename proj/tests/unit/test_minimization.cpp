#include <doctest.h>

#include "antimatroid/closure.hpp"
#include "antimatroid/errors.hpp"
#include "antimatroid/minimization.hpp"
#include "antimatroid/oracle.hpp"
#include "helpers.hpp"

using namespace antimatroid;
using testing::rule;

TEST_CASE("critical rules of small examples") {
  CHECK(critical_rules(testing::r2()) == testing::r2().canonical());

  RuleSet r(3);
  r.add({0}, 1);
  r.add({0, 2}, 1);
  const RuleSet c = critical_rules(r);
  REQUIRE(c.size() == 1);
  CHECK(c[0] == rule(3, {0}, 1));

  CHECK(critical_rules(RuleSet(4)).empty());

  RuleSet t(3);
  t.add({1}, 1);
  t.add({0, 2}, 2);
  CHECK(critical_rules(t).empty());
}

// K(R) and K(R*) are not nested in general: here K(R) = {{}, {0,1}} while
// the critical rules force both elements out of every member.
TEST_CASE("K of the critical rules need not contain K(R)") {
  RuleSet r(2);
  r.add({0}, 1);
  r.add({1}, 0);
  const RuleSet c = critical_rules(r);
  CHECK(c.rules() == std::vector<HornRule>{rule(2, {}, 0), rule(2, {}, 1)});
  CHECK(oracle::brute_k_family(r).size() == 2);
  CHECK(oracle::brute_k_family(c).size() == 1);
  CHECK_FALSE(oracle::brute_k_family(r).is_subfamily_of(oracle::brute_k_family(c)));
  CHECK(oracle::brute_a_family(c) == oracle::brute_a_family(r));
}

TEST_CASE("labels survive minimization") {
  RuleSet r = testing::r2();
  r.set_labels({"a", "b", "c", "d"});
  CHECK(critical_rules(r).labels() == r.labels());
}

TEST_CASE("equivalence") {
  RuleSet plus = testing::r2();
  plus.add({2, 3}, 0);
  CHECK(same_antimatroid(testing::r2(), plus));
  RuleSet one(4);
  one.add({0, 2}, 1);
  CHECK_FALSE(same_antimatroid(testing::r2(), one));
  CHECK(same_antimatroid(RuleSet(3), RuleSet(3)));
  CHECK_THROWS_AS(same_antimatroid(RuleSet(3), RuleSet(4)), InputError);
}

TEST_CASE("critical rules agree with the definitional critical circuits") {
  std::mt19937_64 rng(31);
  for (int iter = 0; iter < 250; ++iter) {
    const RuleSet r = testing::random_instance(rng);
    const RuleSet c = critical_rules(r);
    const auto a = oracle::brute_a_family(r);

    std::vector<RootedSet> mine;
    for (const HornRule& h : c) mine.push_back(to_rooted_set(h));
    std::sort(mine.begin(), mine.end());
    CHECK(mine == oracle::brute_critical_circuits(a));

    CHECK(oracle::brute_a_family(c) == a);
    CHECK(a.is_subfamily_of(oracle::brute_k_family(r)));
    CHECK(a.is_subfamily_of(oracle::brute_k_family(c)));
    CHECK(rule_size(c) <= rule_size(r));
    CHECK(c.size() <= r.size());
    CHECK(critical_rules(c) == c);

    for (const HornRule& h : c) {
      const bool witnessed = std::any_of(r.begin(), r.end(), [&](const HornRule& g) {
        return g.consequent == h.consequent && h.antecedent.is_subset_of(g.antecedent);
      });
      CHECK(witnessed);
    }
  }
}

TEST_CASE("equivalence agrees with family equality") {
  std::mt19937_64 rng(32);
  int equal = 0;
  for (int iter = 0; iter < 300; ++iter) {
    const RuleSet r1 = testing::random_instance(rng, 5, 6);
    RuleSet r2(r1.ground_size());
    if (iter % 2 == 0) {
      // An equivalent presentation: the critical rules with some implicates added.
      r2 = critical_rules(r1);
      const ClosureEngine e(r1);
      for (int j = 0; j < 3; ++j) {
        const HornRule h(testing::random_subset(rng, r1.ground_size()),
                         static_cast<Element>(rng() % r1.ground_size()));
        if (e.implicate_a(h)) r2.add(h);
      }
    } else {
      for (const HornRule& h : testing::random_instance(rng, 5, 6)) {
        if (h.ground_size() == r1.ground_size()) r2.add(h);
      }
    }
    const bool same = same_antimatroid(r1, r2);
    equal += same;
    CHECK(same == (oracle::brute_a_family(r1) == oracle::brute_a_family(r2)));
  }
  CHECK(equal > 100);
}
