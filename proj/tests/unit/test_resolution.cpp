#include <doctest.h>

#include <set>

#include "antimatroid/closure.hpp"
#include "antimatroid/errors.hpp"
#include "antimatroid/oracle.hpp"
#include "antimatroid/resolution.hpp"
#include "helpers.hpp"

using namespace antimatroid;
using testing::rule;
using testing::S;

namespace {

// Every nontrivial implicate of A(R), by scanning all rules.
std::set<HornRule> brute_implicates(const RuleSet& r) {
  const auto a = oracle::brute_a_family(r);
  std::set<HornRule> out;
  for (const ElementSet& ant : testing::all_subsets(r.ground_size())) {
    for (Element q = 0; q < r.ground_size(); ++q) {
      const HornRule h(ant, q);
      if (!is_trivial(h) && oracle::brute_implicate(a, h)) out.insert(h);
    }
  }
  return out;
}

std::set<HornRule> as_set(const RuleSet& r) { return {r.begin(), r.end()}; }

}  // namespace

TEST_CASE("resolve") {
  auto [x, y] = resolve(rule(4, {0, 2}, 1), rule(4, {1, 3}, 0));
  CHECK(x == rule(4, {2, 3}, 1));
  CHECK(y == rule(4, {2, 3}, 0));
  auto [u, v] = resolve(rule(4, {0}, 1), rule(4, {0}, 1));
  CHECK(u == rule(4, {0}, 1));
  CHECK(v == rule(4, {0}, 1));
  auto [s, t] = resolve(rule(4, {1, 2}, 0), rule(4, {0, 3}, 2));
  CHECK(s == rule(4, {1, 3}, 0));
  CHECK(t == rule(4, {1, 3}, 2));
  CHECK_THROWS_AS(resolve(rule(4, {1}, 1), rule(4, {0}, 2)), PreconditionError);
}

TEST_CASE("implicates of small examples") {
  const RuleSet all = all_nontrivial_implicates(testing::r2(), 10'000);
  CHECK(as_set(all) == brute_implicates(testing::r2()));
  CHECK(as_set(all).count(rule(4, {2, 3}, 0)) == 1);
  CHECK(as_set(all).count(rule(4, {2, 3}, 1)) == 1);

  RuleSet one(2);
  one.add({0}, 1);
  CHECK(all_nontrivial_implicates(one).rules() == one.rules());
  CHECK(all_nontrivial_implicates(RuleSet(3)).empty());

  std::set<HornRule> prime{rule(4, {0, 2}, 1), rule(4, {1, 3}, 0), rule(4, {2, 3}, 0), rule(4, {2, 3}, 1)};
  CHECK(as_set(prime_implicates(testing::r2())) == prime);
  CHECK(prime_implicates(one).rules() == one.rules());
  CHECK(prime_implicates(RuleSet(3)).empty());

  const std::vector<RootedSet> expected{{S(4, {0, 1, 3}), 0}, {S(4, {0, 2, 3}), 0}, {S(4, {0, 1, 2}), 1},
                                        {S(4, {1, 2, 3}), 1}};
  CHECK(circuits(testing::r2()) == expected);
  CHECK(circuits(RuleSet(3)).empty());
  CHECK(circuits(one) == std::vector<RootedSet>{{S(2, {0, 1}), 1}});
}

TEST_CASE("the raw resolution closure may miss enlarged antecedents") {
  RuleSet r(3);
  r.add({0}, 1);
  const RuleSet closure = resolution_closure(r);
  CHECK(as_set(closure).count(rule(3, {0, 2}, 1)) == 0);
  CHECK(as_set(all_nontrivial_implicates(r)).count(rule(3, {0, 2}, 1)) == 1);
}

TEST_CASE("cap") {
  RuleSet r(8);
  for (Element q = 0; q < 8; ++q) r.add(HornRule(ElementSet(8, {static_cast<Element>((q + 1) % 8)}), q));
  try {
    all_nontrivial_implicates(r, 25);
    FAIL("expected the cap to trip");
  } catch (const ResourceLimitError& e) {
    CHECK(e.partial_size() > 25);
  }
}

TEST_CASE("implicate generation agrees with the oracle") {
  std::mt19937_64 rng(8);
  for (int iter = 0; iter < 200; ++iter) {
    const RuleSet r = testing::random_instance(rng, 7, 8);
    const auto a = oracle::brute_a_family(r);
    const std::set<HornRule> truth = brute_implicates(r);

    const RuleSet all = all_nontrivial_implicates(r);
    CHECK(as_set(all) == truth);
    CHECK(oracle::brute_k_family(all) == a);

    const RuleSet closure = resolution_closure(r);
    CHECK(oracle::brute_k_family(closure) == a);
    for (const HornRule& h : closure) CHECK(truth.count(h) == 1);

    const RuleSet prime = prime_implicates(r);
    const ClosureEngine e(r);
    for (const HornRule& h : prime) {
      CHECK(e.implicate_a(h));
      CHECK(as_set(closure).count(h) == 1);
      h.antecedent.for_each([&](Element x) { CHECK_FALSE(e.implicate_a(HornRule(h.antecedent.without(x), h.consequent))); });
    }
    for (const HornRule& h : truth) {
      const bool minimal = [&] {
        bool m = true;
        h.antecedent.for_each([&](Element x) { m = m && !truth.count(HornRule(h.antecedent.without(x), h.consequent)); });
        return m;
      }();
      CHECK(minimal == (as_set(prime).count(h) == 1));
    }

    const auto c = circuits(r);
    CHECK(c == oracle::brute_circuits(a));
    RuleSet from_circuits(r.ground_size());
    for (const RootedSet& rs : c) from_circuits.add(from_rooted_set(rs));
    CHECK(oracle::brute_k_family(from_circuits) == a);
    CHECK(oracle::brute_a_family(from_circuits) == a);
  }
}

TEST_CASE("single resolution steps are sound") {
  std::mt19937_64 rng(9);
  for (int iter = 0; iter < 200; ++iter) {
    const RuleSet r = testing::random_instance(rng, 7);
    const std::size_t n = r.ground_size();
    const ClosureEngine e(r);
    std::vector<HornRule> imps;
    for (int j = 0; j < 200 && imps.size() < 12; ++j) {
      const HornRule h(testing::random_subset(rng, n), static_cast<Element>(rng() % n));
      if (!is_trivial(h) && e.implicate_a(h)) imps.push_back(h);
    }
    for (const HornRule& x : imps) {
      for (const HornRule& y : imps) {
        auto [u, v] = resolve(x, y);
        CHECK(e.implicate_a(u));
        CHECK(e.implicate_a(v));
      }
    }
  }
}

TEST_CASE("the resolution closure plus trivial rules satisfies anti-exchange") {
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 100; ++iter) {
    const RuleSet r = testing::random_instance(rng, 7, 8);
    const std::size_t n = r.ground_size();
    const std::set<HornRule> closure = as_set(resolution_closure(r));
    auto entails = [&](const ElementSet& x, Element q) { return x.contains(q) || closure.count(HornRule(x, q)) == 1; };
    for (int j = 0; j < 300; ++j) {
      const ElementSet x = testing::random_subset(rng, n);
      const auto y = static_cast<Element>(rng() % n), z = static_cast<Element>(rng() % n);
      if (y == z) continue;
      if (entails(x.with(y), z) && entails(x.with(z), y)) {
        CHECK(entails(x, y));
        CHECK(entails(x, z));
      }
    }
  }
}

TEST_CASE("implicates plus trivial rules satisfy anti-exchange") {
  std::mt19937_64 rng(10);
  for (int iter = 0; iter < 100; ++iter) {
    const RuleSet r = testing::random_instance(rng, 7, 8);
    const std::size_t n = r.ground_size();
    const std::set<HornRule> imps = as_set(all_nontrivial_implicates(r));
    auto entails = [&](const ElementSet& x, Element q) { return x.contains(q) || imps.count(HornRule(x, q)) == 1; };
    for (int j = 0; j < 300; ++j) {
      const ElementSet x = testing::random_subset(rng, n);
      const auto y = static_cast<Element>(rng() % n), z = static_cast<Element>(rng() % n);
      if (y == z) continue;
      if (entails(x.with(y), z) && entails(x.with(z), y)) {
        CHECK(entails(x, y));
        CHECK(entails(x, z));
      }
    }
  }
}
