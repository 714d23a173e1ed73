#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "antimatroid/closure.hpp"

namespace antimatroid {

// Fringes of a member X of A(R). Both throw PreconditionError if X is not
// a member.
ElementSet outer_fringe(const ClosureEngine& engine, const ElementSet& x);
ElementSet inner_fringe(const ClosureEngine& engine, const ElementSet& x);

// The element added last when computing the interior of X; this is the
// parent pointer of the reverse-search tree (X -> X - phi(X)).
// Requires X nonempty and in A(R).
Element phi(const ClosureEngine& engine, const ElementSet& x);

ElementSet outer_fringe(const RuleSet& rules, const ElementSet& x);
ElementSet inner_fringe(const RuleSet& rules, const ElementSet& x);
Element phi(const RuleSet& rules, const ElementSet& x);

// Pull-based reverse-search enumeration of A(R).
//
// Members come out in depth-first order of the tree rooted at the empty
// set, children visited by ascending element. Each call to next() costs
// O(n l) time; the frame stack holds at most n + 1 frames of n bits each.
class MemberEnumerator {
 public:
  explicit MemberEnumerator(const RuleSet& rules);

  std::optional<ElementSet> next();

  std::size_t depth() const noexcept { return frames_.size(); }

 private:
  struct Frame {
    Element via;        // element added to reach this node (kNoElement at the root)
    ElementSet children;  // F(X): x such that X + x in A and phi(X + x) = x
    Element cursor;     // last child descended into
  };

  ElementSet children_of(const ElementSet& x);

  ClosureEngine engine_;
  PropagationState scratch_;
  ElementSet current_;
  std::vector<Frame> frames_;
  bool started_ = false;
};

// Streams every member to `sink`; returning false from the sink stops the
// traversal. Returns the number of members delivered.
std::uint64_t enumerate_members(const RuleSet& rules,
                                const std::function<bool(const ElementSet&)>& sink);

std::uint64_t count_members(const RuleSet& rules);

}  // namespace antimatroid
