#include <doctest.h>

#include <set>

#include "antimatroid/element_set.hpp"
#include "antimatroid/errors.hpp"
#include "helpers.hpp"

using namespace antimatroid;
using testing::S;

TEST_CASE("membership, insertion and size") {
  ElementSet s(5);
  CHECK(s.empty());
  s.insert(3);
  s.insert(0);
  s.insert(3);
  CHECK(s.size() == 2);
  CHECK(s.contains(0));
  CHECK(s.contains(3));
  CHECK_FALSE(s.contains(1));
  CHECK_FALSE(s.contains(99));
  s.erase(0);
  CHECK(s.elements() == std::vector<Element>{3});
  CHECK_THROWS_AS(s.insert(5), InputError);
  CHECK_THROWS_AS(ElementSet(3, {0, 3}), InputError);
}

TEST_CASE("iteration crosses word boundaries") {
  ElementSet s(200, {0, 63, 64, 127, 128, 199});
  CHECK(s.first() == 0);
  CHECK(s.last() == 199);
  CHECK(s.next_after(63) == 64);
  CHECK(s.next_after(128) == 199);
  CHECK(s.next_after(199) == kNoElement);
  std::vector<Element> seen;
  s.for_each([&](Element x) { seen.push_back(x); });
  CHECK(seen == std::vector<Element>{0, 63, 64, 127, 128, 199});
  CHECK(ElementSet(10).first() == kNoElement);
  CHECK(ElementSet(10).last() == kNoElement);
}

TEST_CASE("set algebra") {
  const ElementSet a = S(6, {0, 1, 2});
  const ElementSet b = S(6, {2, 3});
  CHECK((a | b) == S(6, {0, 1, 2, 3}));
  CHECK((a & b) == S(6, {2}));
  CHECK((a - b) == S(6, {0, 1}));
  CHECK(a.complement() == S(6, {3, 4, 5}));
  CHECK(ElementSet::full(70).complement().empty());
  CHECK(ElementSet::full(70).size() == 70);
  CHECK(a.with(5) == S(6, {0, 1, 2, 5}));
  CHECK(a.without(1) == S(6, {0, 2}));
  CHECK(S(6, {0, 2}).is_subset_of(a));
  CHECK_FALSE(b.is_subset_of(a));
  CHECK(a.intersects(b));
  CHECK_FALSE(S(6, {0}).intersects(S(6, {1})));
  CHECK_THROWS_AS(a | S(7, {0}), InputError);
}

TEST_CASE("order is lexicographic over sorted members") {
  CHECK(S(4, {}) < S(4, {0}));
  CHECK(S(4, {0, 3}) < S(4, {1}));
  CHECK(S(4, {0, 1}) < S(4, {0, 2}));
  CHECK(S(4, {0, 1}) < S(4, {0, 1, 2}));
  CHECK(S(3, {2}) < S(4, {0}));
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    const ElementSet x = testing::random_subset(rng, 9), y = testing::random_subset(rng, 9);
    CHECK((x < y) == (x.elements() < y.elements()));
    CHECK((x == y) == (x.hash() == y.hash() && x.elements() == y.elements()));
  }
}

TEST_CASE("text form") {
  CHECK(S(5, {0, 2, 4}).to_string() == "{0,2,4}");
  CHECK(ElementSet(3).to_string() == "{}");
}
