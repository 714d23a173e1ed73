#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "antimatroid/element_set.hpp"
#include "antimatroid/rules.hpp"

namespace antimatroid {

// Immutable occurrence index over a rule set, built in O(l(R) + n).
class RuleIndex {
 public:
  using RuleId = std::uint32_t;

  explicit RuleIndex(const RuleSet& rules);

  std::size_t ground_size() const noexcept { return ground_size_; }
  std::size_t rule_count() const noexcept { return consequent_.size(); }

  Element consequent(RuleId i) const { return consequent_[i]; }
  bool trivial(RuleId i) const { return trivial_[i] != 0; }
  std::span<const Element> antecedent(RuleId i) const {
    return {antecedent_elems_.data() + antecedent_offsets_[i],
            antecedent_offsets_[i + 1] - antecedent_offsets_[i]};
  }
  // Rules whose antecedent contains x.
  std::span<const RuleId> containing(Element x) const {
    return {containing_rules_.data() + containing_offsets_[x],
            containing_offsets_[x + 1] - containing_offsets_[x]};
  }

 private:
  std::size_t ground_size_;
  std::vector<Element> consequent_;
  std::vector<std::uint8_t> trivial_;
  std::vector<std::size_t> antecedent_offsets_;
  std::vector<Element> antecedent_elems_;
  std::vector<std::size_t> containing_offsets_;
  std::vector<RuleId> containing_rules_;
};

// Working state for one run of the interior computation:
//   S      current member of K(R), grown one element at a time
//   H_x    RuleIndex::containing(x), filtered to live rules
//   T_x    live rules with consequent x; only its size is ever needed, so
//          it is kept as a counter
//   E      elements of X \ S whose T list is empty (min-heap, so the
//          smallest id is added first)
// A rule is retired the first time S meets its antecedent and never
// touched again. live_consequent packs "is live" and the consequent into one
// word so the inner loop does a single random access per occurrence.
struct PropagationState {
  ElementSet members;
  std::vector<Element> live_consequent;  // kNoElement once retired
  std::vector<std::uint32_t> live_count;
  std::vector<Element> ready;  // heap ordered by std::greater

  void reset(const RuleIndex& index, const ElementSet& x);
};

struct ClosureResult {
  ElementSet interior;
  // Order in which elements were added; every prefix is a member of K(R).
  std::vector<Element> addition_order;
};

// Closure and interior operators of A(R) and K(R) for a fixed rule set.
// Thread-safe for concurrent const use.
class ClosureEngine {
 public:
  explicit ClosureEngine(const RuleSet& rules) : index_(rules) {}

  std::size_t ground_size() const noexcept { return index_.ground_size(); }
  const RuleIndex& index() const noexcept { return index_; }

  // Largest member of A(R) inside x, in O(l(R) + n log n).
  ClosureResult interior_a(const ElementSet& x) const;
  ClosureResult interior_a(const ElementSet& x, PropagationState& scratch) const;
  bool member_a(const ElementSet& x) const;
  bool implicate_a(const HornRule& rule) const;
  // Closure operator of the dual convex geometry: Q \ (Q \ x)°.
  ElementSet tau_a(const ElementSet& x) const;

  bool member_k(const ElementSet& x) const;
  // Largest member of K(R) inside x.
  ElementSet interior_k(const ElementSet& x) const;
  bool implicate_k(const HornRule& rule) const;
  // Forward-chaining closure: smallest superset of x closed under
  // "A inside T implies q in T" for every rule.
  ElementSet tau_k(const ElementSet& x) const;

 private:
  void check_ground(const ElementSet& x) const;

  RuleIndex index_;
};

ClosureResult interior_a(const RuleSet& rules, const ElementSet& x);
bool member_a(const RuleSet& rules, const ElementSet& x);
bool implicate_a(const RuleSet& rules, const HornRule& rule);
ElementSet tau_a(const RuleSet& rules, const ElementSet& x);
bool member_k(const RuleSet& rules, const ElementSet& x);
ElementSet interior_k(const RuleSet& rules, const ElementSet& x);
bool implicate_k(const RuleSet& rules, const HornRule& rule);

}  // namespace antimatroid
