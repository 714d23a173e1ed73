#include "antimatroid/enumeration.hpp"

#include "antimatroid/errors.hpp"

namespace antimatroid {

namespace {

void require_member(const ClosureEngine& engine, const ElementSet& x) {
  if (!engine.member_a(x)) {
    throw PreconditionError("set " + x.to_string() + " is not a member of A(R)");
  }
}

}  // namespace

ElementSet outer_fringe(const ClosureEngine& engine, const ElementSet& x) {
  require_member(engine, x);
  ElementSet out(x.ground_size());
  x.complement().for_each([&](Element e) {
    if (engine.member_a(x.with(e))) out.insert(e);
  });
  return out;
}

ElementSet inner_fringe(const ClosureEngine& engine, const ElementSet& x) {
  require_member(engine, x);
  ElementSet out(x.ground_size());
  x.for_each([&](Element e) {
    if (engine.member_a(x.without(e))) out.insert(e);
  });
  return out;
}

Element phi(const ClosureEngine& engine, const ElementSet& x) {
  if (x.empty()) throw PreconditionError("phi is undefined on the empty set");
  const ClosureResult r = engine.interior_a(x);
  if (r.addition_order.size() != x.size()) {
    throw PreconditionError("set " + x.to_string() + " is not a member of A(R)");
  }
  return r.addition_order.back();
}

ElementSet outer_fringe(const RuleSet& rules, const ElementSet& x) {
  return outer_fringe(ClosureEngine(rules), x);
}
ElementSet inner_fringe(const RuleSet& rules, const ElementSet& x) {
  return inner_fringe(ClosureEngine(rules), x);
}
Element phi(const RuleSet& rules, const ElementSet& x) { return phi(ClosureEngine(rules), x); }

MemberEnumerator::MemberEnumerator(const RuleSet& rules)
    : engine_(rules), current_(rules.ground_size()) {}

ElementSet MemberEnumerator::children_of(const ElementSet& x) {
  ElementSet children(x.ground_size());
  x.complement().for_each([&](Element e) {
    const ElementSet candidate = x.with(e);
    const ClosureResult r = engine_.interior_a(candidate, scratch_);
    if (r.addition_order.size() == candidate.size() && r.addition_order.back() == e) {
      children.insert(e);
    }
  });
  return children;
}

std::optional<ElementSet> MemberEnumerator::next() {
  if (!started_) {
    started_ = true;
    frames_.push_back(Frame{kNoElement, children_of(current_), kNoElement});
    return current_;
  }
  while (!frames_.empty()) {
    Frame& top = frames_.back();
    const Element child = top.children.next_after(top.cursor);
    if (child != kNoElement) {
      top.cursor = child;
      current_.insert(child);
      ElementSet grandchildren = children_of(current_);
      frames_.push_back(Frame{child, std::move(grandchildren), kNoElement});
      return current_;
    }
    // Backtrack: the element that led here is phi(current_), recorded on
    // the frame, so no recomputation is needed.
    const Element via = top.via;
    frames_.pop_back();
    if (via != kNoElement) current_.erase(via);
  }
  return std::nullopt;
}

std::uint64_t enumerate_members(const RuleSet& rules,
                                const std::function<bool(const ElementSet&)>& sink) {
  MemberEnumerator it(rules);
  std::uint64_t delivered = 0;
  while (auto member = it.next()) {
    ++delivered;
    if (!sink(*member)) break;
  }
  return delivered;
}

std::uint64_t count_members(const RuleSet& rules) {
  MemberEnumerator it(rules);
  std::uint64_t total = 0;
  while (it.next()) ++total;
  return total;
}

}  // namespace antimatroid
