#include <doctest.h>

#include <set>

#include "antimatroid/closure.hpp"
#include "antimatroid/errors.hpp"
#include "antimatroid/oracle.hpp"
#include "helpers.hpp"

using namespace antimatroid;
using namespace antimatroid::oracle;
using testing::rule;
using testing::S;

namespace {

Family family_of(std::size_t n, std::initializer_list<std::initializer_list<Element>> sets) {
  std::vector<Mask> masks;
  for (auto s : sets) masks.push_back(to_mask(ElementSet(n, s)));
  return Family(n, masks);
}

bool union_closed(const Family& f) {
  for (Mask a : f.masks()) {
    for (Mask b : f.masks()) {
      if (!f.contains(a | b)) return false;
    }
  }
  return true;
}

// Every query of stage 0 and 1 on four elements, then the stage-2 no-answers
// given to the two-rule target before ({0,3},2) comes up.
std::vector<HornRule> table_prefix_negatives() {
  std::vector<HornRule> n;
  for (Element q = 0; q < 4; ++q) n.push_back(HornRule(ElementSet(4), q));
  for (Element a = 0; a < 4; ++a) {
    for (Element q = 0; q < 4; ++q) {
      if (a != q) n.push_back(rule(4, {a}, q));
    }
  }
  n.push_back(rule(4, {0, 1}, 2));
  n.push_back(rule(4, {0, 1}, 3));
  n.push_back(rule(4, {0, 2}, 3));
  n.push_back(rule(4, {0, 3}, 1));
  return n;
}

bool listed(const std::vector<HornRule>& v, const HornRule& h) { return std::find(v.begin(), v.end(), h) != v.end(); }

}  // namespace

TEST_CASE("families of small examples") {
  CHECK(brute_k_family(testing::r2()).size() == 12);
  CHECK(brute_a_family(testing::r2()).size() == 11);
  CHECK(brute_k_family(RuleSet(2)).size() == 4);
  CHECK(brute_a_family(RuleSet(2)).size() == 4);
  CHECK(brute_k_family(RuleSet(0)).size() == 1);
  CHECK_FALSE(brute_a_family(testing::r2()).contains(S(4, {0, 1})));
  CHECK(brute_k_family(testing::r2()).contains(S(4, {0, 1})));
}

TEST_CASE("antimatroid verification") {
  CHECK(verify_antimatroid(brute_a_family(testing::r2())));
  CHECK_FALSE(verify_antimatroid(family_of(2, {{}, {0, 1}})));
  CHECK_FALSE(verify_antimatroid(family_of(2, {{}, {0}, {1}})));
  CHECK_FALSE(verify_antimatroid(family_of(2, {{0}, {0, 1}})));
  CHECK(verify_antimatroid(family_of(2, {{}, {0}, {0, 1}})));
  CHECK(verify_antimatroid(family_of(3, {{}})));
}

TEST_CASE("brute operators") {
  const Family a = brute_a_family(testing::r2());
  CHECK(brute_interior(a, to_mask(S(4, {0, 1}))) == 0);
  CHECK(brute_interior(a, to_mask(S(4, {0, 1, 2}))) == to_mask(S(4, {0, 1, 2})));
  CHECK(brute_interior(brute_k_family(testing::r2()), to_mask(S(4, {0, 1}))) == to_mask(S(4, {0, 1})));
  CHECK(brute_implicate(a, rule(4, {2, 3}, 0)));
  CHECK_FALSE(brute_implicate(brute_k_family(testing::r2()), rule(4, {2, 3}, 0)));
  CHECK(brute_tau(a, to_mask(S(4, {2, 3}))) == to_mask(S(4, {0, 1, 2, 3})));
  CHECK(is_free(a, to_mask(S(4, {0, 1}))));
  CHECK_FALSE(is_free(a, to_mask(S(4, {0, 1, 3}))));
}

TEST_CASE("critical circuits") {
  const std::vector<RootedSet> r2{{S(4, {0, 1, 3}), 0}, {S(4, {0, 1, 2}), 1}};
  CHECK(brute_critical_circuits(brute_a_family(testing::r2())) == r2);
  CHECK(brute_critical_circuits(brute_a_family(RuleSet(3))).empty());
  RuleSet one(2);
  one.add({0}, 1);
  CHECK(brute_critical_circuits(brute_a_family(one)) == std::vector<RootedSet>{{S(2, {0, 1}), 1}});
}

TEST_CASE("guard") {
  CHECK_THROWS_AS(Family(kMaxGroundSize + 1, {}), GuardError);
  CHECK_THROWS_AS(brute_k_family(RuleSet(kMaxGroundSize + 1)), GuardError);
  CHECK_NOTHROW(Family(kMaxGroundSize, {0}));
}

TEST_CASE("structural properties of random families") {
  std::mt19937_64 rng(77);
  for (int iter = 0; iter < 300; ++iter) {
    const RuleSet r = testing::random_instance(rng);
    const Family k = brute_k_family(r);
    const Family a = brute_a_family(r);
    CHECK(union_closed(k));
    CHECK(a.is_subfamily_of(k));
    CHECK(a == reachable_subfamily(k));
    CHECK(verify_antimatroid(a));
    CHECK(a.contains(Mask{0}));

    const auto circ = brute_circuits(a);
    RuleSet back(r.ground_size());
    for (const RootedSet& c : circ) back.add(from_rooted_set(c));
    CHECK(brute_k_family(back) == a);

    const auto crit = brute_critical_circuits(a);
    RuleSet crit_rules(r.ground_size());
    for (const RootedSet& c : crit) {
      CHECK(std::binary_search(circ.begin(), circ.end(), c));
      crit_rules.add(from_rooted_set(c));
    }
    CHECK(brute_a_family(crit_rules) == a);
    // Critical circuits cannot be dropped.
    for (std::size_t i = 0; i < crit_rules.size(); ++i) {
      RuleSet fewer(r.ground_size());
      for (std::size_t j = 0; j < crit_rules.size(); ++j) {
        if (j != i) fewer.add(crit_rules[j]);
      }
      CHECK_FALSE(brute_a_family(fewer) == a);
    }
  }
}

TEST_CASE("negative inference examples") {
  RuleSet p(4);
  p.add({0, 2}, 1);
  const auto negatives = table_prefix_negatives();
  const auto original = brute_negative_inferences(p, negatives, InferenceMode::Original);
  const auto revised = brute_negative_inferences(p, negatives, InferenceMode::Revised);
  CHECK(listed(original, rule(4, {0, 3}, 2)));
  CHECK_FALSE(listed(original, rule(4, {1, 2}, 0)));
  CHECK(listed(revised, rule(4, {1, 2}, 0)));
  CHECK_FALSE(listed(revised, rule(4, {1, 3}, 0)));
  CHECK_FALSE(listed(revised, rule(4, {2, 3}, 0)));
  for (const HornRule& h : negatives) CHECK(listed(original, h));
  for (const HornRule& h : original) CHECK(listed(revised, h));
}

// Three one-step syntactic rules for deriving a no from earlier answers,
// where yes means an implicate of K(P). Each conclusion must be something
// the semantic test also derives.
TEST_CASE("syntactic negative inferences are semantically sound") {
  std::mt19937_64 rng(5);
  std::size_t fired = 0;
  for (int iter = 0; iter < 60; ++iter) {
    const std::size_t n = 2 + rng() % 3;
    RuleSet p(n);
    for (std::size_t j = rng() % 4; j > 0; --j) {
      const HornRule h(testing::random_subset(rng, n), static_cast<Element>(rng() % n));
      if (!is_trivial(h)) p.add(h);
    }
    const ClosureEngine e(p);
    const auto subsets = testing::all_subsets(n);

    std::set<HornRule> no;
    for (int j = 0; j < 6; ++j) {
      const HornRule h(testing::random_subset(rng, n), static_cast<Element>(rng() % n));
      if (!is_trivial(h) && !e.implicate_k(h)) no.insert(h);
    }
    const std::vector<HornRule> nvec(no.begin(), no.end());
    const auto derived = brute_negative_inferences(p, nvec, InferenceMode::Original);
    auto yes = [&](const ElementSet& x, Element y) { return e.implicate_k(HornRule(x, y)); };
    auto all_yes = [&](const ElementSet& x, const ElementSet& ys) {
      bool ok = true;
      ys.for_each([&](Element y) { ok = ok && yes(x, y); });
      return ok;
    };
    auto check = [&](const ElementSet& b, Element q) {
      if (b.contains(q)) return;
      ++fired;
      CHECK_MESSAGE(listed(derived, HornRule(b, q)), HornRule(b, q).to_string());
    };

    for (const ElementSet& a : subsets) {
      for (const ElementSet& b : subsets) {
        for (Element pe = 0; pe < n; ++pe) {
          for (Element q = 0; q < n; ++q) {
            if (yes(a, pe) && no.count(HornRule(a, q)) && all_yes(a.with(pe), b)) check(b, q);
            if (yes(a, pe) && no.count(HornRule(b, pe)) && all_yes(b.with(q), a)) check(b, q);
            if (no.count(HornRule(a, pe)) && yes(b.with(q), pe) && all_yes(a, b)) check(b, q);
          }
        }
      }
    }
  }
  CHECK(fired > 100);
}
