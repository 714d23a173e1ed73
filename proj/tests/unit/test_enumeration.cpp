#include <doctest.h>

#include <set>

#include "antimatroid/closure.hpp"
#include "antimatroid/enumeration.hpp"
#include "antimatroid/errors.hpp"
#include "antimatroid/oracle.hpp"
#include "helpers.hpp"

using namespace antimatroid;
using testing::S;

TEST_CASE("fringes on the two-rule target") {
  const RuleSet r = testing::r2();
  CHECK(outer_fringe(r, S(4, {})) == S(4, {2, 3}));
  CHECK(outer_fringe(r, ElementSet::full(4)).empty());
  CHECK(outer_fringe(r, S(4, {2})) == S(4, {1, 3}));
  CHECK(inner_fringe(r, ElementSet::full(4)) == ElementSet::full(4));
  CHECK(inner_fringe(r, S(4, {2})) == S(4, {2}));
  CHECK(inner_fringe(r, S(4, {1, 2})) == S(4, {1}));
  CHECK_THROWS_AS(outer_fringe(r, S(4, {0, 1})), PreconditionError);
  CHECK_THROWS_AS(inner_fringe(r, S(4, {0})), PreconditionError);
}

TEST_CASE("phi on the two-rule target") {
  const RuleSet r = testing::r2();
  CHECK(phi(r, S(4, {0, 3})) == 0);
  CHECK(phi(r, S(4, {2})) == 2);
  CHECK(phi(r, S(4, {3})) == 3);
  CHECK(phi(r, S(4, {1, 2})) == 1);
  CHECK_THROWS_AS(phi(r, S(4, {})), PreconditionError);
  CHECK_THROWS_AS(phi(r, S(4, {0, 1})), PreconditionError);
}

TEST_CASE("enumeration of small families") {
  std::vector<ElementSet> got;
  enumerate_members(testing::r2(), [&](const ElementSet& x) {
    got.push_back(x);
    return true;
  });
  CHECK(got.size() == 11);
  CHECK(got.front().empty());
  CHECK(std::find(got.begin(), got.end(), S(4, {0, 1})) == got.end());
  CHECK(count_members(RuleSet(3)) == 8);
  CHECK(count_members(RuleSet(5)) == 32);
  CHECK(count_members(testing::r2()) == 11);
}

TEST_CASE("enumeration order is depth first with ascending children") {
  std::vector<std::string> got;
  enumerate_members(testing::r2(), [&](const ElementSet& x) {
    got.push_back(x.to_string());
    return true;
  });
  const std::vector<std::string> expected{"{}",        "{2}",   "{1,2}", "{0,1,2}", "{0,1,2,3}", "{1,2,3}",
                                          "{2,3}",     "{0,2,3}", "{3}",   "{0,3}",   "{0,1,3}"};
  CHECK(got == expected);
}

TEST_CASE("sink can stop the traversal") {
  std::size_t seen = 0;
  const auto delivered = enumerate_members(testing::r2(), [&](const ElementSet&) { return ++seen < 3; });
  CHECK(delivered == 3);
  CHECK(seen == 3);
}

TEST_CASE("enumeration matches the brute-force family and the tree structure") {
  std::mt19937_64 rng(77);
  for (int iter = 0; iter < 250; ++iter) {
    const RuleSet r = testing::random_instance(rng);
    const ClosureEngine e(r);
    const auto family = oracle::brute_a_family(r);
    std::vector<oracle::Mask> emitted;
    std::set<oracle::Mask> seen;
    bool parents_ok = true, children_ok = true;
    enumerate_members(r, [&](const ElementSet& x) {
      const auto m = oracle::to_mask(x);
      if (!x.empty()) {
        const Element p = phi(e, x);
        parents_ok = parents_ok && e.member_a(x.without(p)) && seen.count(oracle::to_mask(x.without(p))) == 1;
        CHECK(inner_fringe(e, x).contains(p));
      }
      const ElementSet outer = outer_fringe(e, x);
      x.complement().for_each([&](Element y) {
        const bool in_f = e.member_a(x.with(y)) && phi(e, x.with(y)) == y;
        if (in_f) children_ok = children_ok && outer.contains(y);
      });
      seen.insert(m);
      emitted.push_back(m);
      return true;
    });
    CHECK(parents_ok);
    CHECK(children_ok);
    CHECK(emitted.size() == seen.size());
    std::sort(emitted.begin(), emitted.end());
    CHECK(emitted == family.masks());
  }
}

TEST_CASE("enumerator reports depth") {
  MemberEnumerator it(RuleSet(3));
  std::size_t max_depth = 0;
  while (it.next()) max_depth = std::max(max_depth, it.depth());
  CHECK(max_depth == 4);
  CHECK_FALSE(it.next().has_value());
}
