#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

#include "antimatroid/oracle.hpp"
#include "antimatroid/query.hpp"
#include "antimatroid/rules.hpp"

namespace testing {

using namespace antimatroid;

inline ElementSet S(std::size_t n, std::initializer_list<Element> xs) { return ElementSet(n, xs); }

inline HornRule rule(std::size_t n, std::initializer_list<Element> a, Element q) {
  return HornRule(ElementSet(n, a), q);
}

// The two-rule target on four elements used throughout the query examples.
inline RuleSet r2() {
  RuleSet r(4);
  r.add({0, 2}, 1);
  r.add({1, 3}, 0);
  return r;
}

// Twelve rules on seven elements.
inline RuleSet twelve_rules() {
  RuleSet r(7);
  r.add({0, 1, 2, 3}, 6);
  r.add({0, 1, 3, 5, 6}, 2);
  r.add({0, 3, 4, 5, 6}, 2);
  r.add({0, 3, 5, 6}, 1);
  r.add({0, 5, 6}, 4);
  r.add({1, 2, 3}, 0);
  r.add({1, 4, 5}, 2);
  r.add({1, 5}, 4);
  r.add({2, 3, 4}, 1);
  r.add({2, 3, 6}, 4);
  r.add({2, 5, 6}, 4);
  r.add({2, 6}, 3);
  return r;
}

// Random rule set with n in [1, max_n], m in [0, max_m], antecedent sizes
// anywhere in [0, n-1], and an occasional trivial or duplicate rule.
inline RuleSet random_instance(std::mt19937_64& rng, std::size_t max_n = 8, std::size_t max_m = 10) {
  std::uniform_int_distribution<std::size_t> dn(1, max_n), dm(0, max_m);
  const std::size_t n = dn(rng);
  const std::size_t m = dm(rng);
  std::uniform_int_distribution<std::size_t> dmax(0, n - 1);
  RandomRuleSpec spec{n, m, 0, dmax(rng), rng()};
  RuleSet r = random_rule_set(spec);
  std::bernoulli_distribution coin(0.15);
  if (n >= 2 && coin(rng)) {
    std::uniform_int_distribution<Element> de(0, static_cast<Element>(n - 1));
    const Element q = de(rng);
    r.add(HornRule(ElementSet(n, {q, de(rng)}), q));
  }
  if (!r.empty() && coin(rng)) r.add(r[0]);
  return r;
}

inline ElementSet random_subset(std::mt19937_64& rng, std::size_t n) {
  ElementSet s(n);
  std::bernoulli_distribution coin(0.5);
  for (Element x = 0; x < n; ++x) {
    if (coin(rng)) s.insert(x);
  }
  return s;
}

inline std::vector<ElementSet> all_subsets(std::size_t n) {
  std::vector<ElementSet> out;
  for (oracle::Mask m = 0; m < (oracle::Mask{1} << n); ++m) out.push_back(oracle::from_mask(m, n));
  return out;
}

}  // namespace testing
