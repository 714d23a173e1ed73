#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "antimatroid/element_set.hpp"

namespace antimatroid {

// A Horn rule (A, q): "if q is present then A is hit". It accepts X iff
// q is not in X or A meets X.
struct HornRule {
  ElementSet antecedent;
  Element consequent = 0;

  HornRule() = default;
  HornRule(ElementSet a, Element q) : antecedent(std::move(a)), consequent(q) {}

  std::size_t ground_size() const noexcept { return antecedent.ground_size(); }

  bool operator==(const HornRule&) const = default;

  // Canonical order: by consequent, then antecedent lexicographically.
  std::strong_ordering operator<=>(const HornRule& other) const {
    if (auto c = consequent <=> other.consequent; c != 0) return c;
    return antecedent <=> other.antecedent;
  }

  std::size_t hash() const noexcept { return antecedent.hash() * 31 + consequent; }

  // "({0,2},1)"
  std::string to_string() const;
};

struct HornRuleHash {
  std::size_t operator()(const HornRule& r) const noexcept { return r.hash(); }
};

// Korte-Lovasz rooted set (C, r) with r in C.
struct RootedSet {
  ElementSet carrier;
  Element root = 0;

  bool operator==(const RootedSet&) const = default;
  std::strong_ordering operator<=>(const RootedSet& other) const {
    if (auto c = root <=> other.root; c != 0) return c;
    return carrier <=> other.carrier;
  }

  std::string to_string() const;
};

// An ordered list of rules over the ground set {0..n-1}, with optional
// display labels. Antecedents are sets, so duplicate ids in the input
// collapse; duplicate rules are kept.
class RuleSet {
 public:
  RuleSet() = default;
  explicit RuleSet(std::size_t ground_size) : ground_size_(ground_size) {}
  RuleSet(std::size_t ground_size, std::vector<HornRule> rules);

  std::size_t ground_size() const noexcept { return ground_size_; }
  const std::vector<HornRule>& rules() const noexcept { return rules_; }
  std::size_t size() const noexcept { return rules_.size(); }
  bool empty() const noexcept { return rules_.empty(); }

  const HornRule& operator[](std::size_t i) const { return rules_[i]; }
  auto begin() const { return rules_.begin(); }
  auto end() const { return rules_.end(); }

  // Throws InputError if the rule lives on another ground set or its
  // consequent is out of range.
  void add(HornRule rule);
  void add(const std::vector<Element>& antecedent, Element consequent);

  // Empty, or exactly one label per element.
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  void set_labels(std::vector<std::string> labels);
  std::string label(Element x) const;

  // Sorted canonically with duplicates removed.
  RuleSet canonical() const;

  bool operator==(const RuleSet&) const = default;

 private:
  std::size_t ground_size_ = 0;
  std::vector<HornRule> rules_;
  std::vector<std::string> labels_;
};

enum class InferenceMode {
  Original,  // reason about K(P)
  Revised,   // reason about A(P)
};

bool accepts(const HornRule& rule, const ElementSet& x);
bool is_trivial(const HornRule& rule);

// (A, q) -> (A + q, q). Throws PreconditionError on trivial rules.
RootedSet to_rooted_set(const HornRule& rule);
HornRule from_rooted_set(const RootedSet& rooted);

// Coding length l(R) = sum over rules of |A| + 1.
std::size_t rule_size(const RuleSet& rules);

// R + (A, q) without mutating R.
RuleSet with_rule(const RuleSet& rules, const HornRule& extra);

}  // namespace antimatroid
