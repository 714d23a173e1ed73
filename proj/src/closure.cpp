#include "antimatroid/closure.hpp"

#include <algorithm>
#include <functional>

#include "antimatroid/errors.hpp"

namespace antimatroid {

RuleIndex::RuleIndex(const RuleSet& rules) : ground_size_(rules.ground_size()) {
  const std::size_t m = rules.size();
  consequent_.reserve(m);
  trivial_.reserve(m);
  antecedent_offsets_.reserve(m + 1);
  antecedent_offsets_.push_back(0);
  std::vector<std::size_t> occurrences(ground_size_ + 1, 0);
  for (const HornRule& r : rules) {
    consequent_.push_back(r.consequent);
    trivial_.push_back(is_trivial(r) ? 1 : 0);
    r.antecedent.for_each([&](Element a) {
      antecedent_elems_.push_back(a);
      ++occurrences[a + 1];
    });
    antecedent_offsets_.push_back(antecedent_elems_.size());
  }
  for (std::size_t x = 0; x < ground_size_; ++x) occurrences[x + 1] += occurrences[x];
  containing_offsets_ = occurrences;
  containing_rules_.resize(antecedent_elems_.size());
  std::vector<std::size_t> cursor(occurrences.begin(), occurrences.end() - 1);
  for (RuleId i = 0; i < m; ++i) {
    for (Element a : antecedent(i)) containing_rules_[cursor[a]++] = i;
  }
}

void PropagationState::reset(const RuleIndex& index, const ElementSet& x) {
  const std::size_t n = index.ground_size();
  const std::size_t m = index.rule_count();
  members = ElementSet(n);
  live_consequent.resize(m);
  live_count.assign(n, 0);
  ready.clear();

  for (RuleIndex::RuleId i = 0; i < m; ++i) {
    const Element q = index.consequent(i);
    // Rules concluding outside x, and trivial rules, never constrain S.
    if (!x.contains(q) || index.trivial(i)) {
      live_consequent[i] = kNoElement;
    } else {
      live_consequent[i] = q;
      ++live_count[q];
    }
  }
  x.for_each([&](Element e) {
    if (live_count[e] == 0) ready.push_back(e);
  });
  std::make_heap(ready.begin(), ready.end(), std::greater<>{});
}

void ClosureEngine::check_ground(const ElementSet& x) const {
  if (x.ground_size() != index_.ground_size()) {
    throw InputError("set over ground size " + std::to_string(x.ground_size()) +
                     " used with rules over " + std::to_string(index_.ground_size()));
  }
}

ClosureResult ClosureEngine::interior_a(const ElementSet& x) const {
  PropagationState scratch;
  return interior_a(x, scratch);
}

ClosureResult ClosureEngine::interior_a(const ElementSet& x, PropagationState& state) const {
  check_ground(x);
  state.reset(index_, x);
  ClosureResult result;
  result.addition_order.reserve(x.size());
  while (!state.ready.empty()) {
    std::pop_heap(state.ready.begin(), state.ready.end(), std::greater<>{});
    const Element q = state.ready.back();
    state.ready.pop_back();
    state.members.insert(q);
    result.addition_order.push_back(q);
    for (RuleIndex::RuleId i : index_.containing(q)) {
      const Element c = state.live_consequent[i];
      if (c == kNoElement) continue;
      state.live_consequent[i] = kNoElement;
      if (--state.live_count[c] == 0) {
        state.ready.push_back(c);
        std::push_heap(state.ready.begin(), state.ready.end(), std::greater<>{});
      }
    }
  }
  result.interior = std::move(state.members);
  return result;
}

bool ClosureEngine::member_a(const ElementSet& x) const {
  return interior_a(x).addition_order.size() == x.size();
}

bool ClosureEngine::implicate_a(const HornRule& rule) const {
  check_ground(rule.antecedent);
  if (is_trivial(rule)) return true;
  return !interior_a(rule.antecedent.complement()).interior.contains(rule.consequent);
}

ElementSet ClosureEngine::tau_a(const ElementSet& x) const {
  check_ground(x);
  return interior_a(x.complement()).interior.complement();
}

bool ClosureEngine::member_k(const ElementSet& x) const {
  check_ground(x);
  for (RuleIndex::RuleId i = 0; i < index_.rule_count(); ++i) {
    if (!x.contains(index_.consequent(i))) continue;
    const auto a = index_.antecedent(i);
    if (std::none_of(a.begin(), a.end(), [&](Element e) { return x.contains(e); })) return false;
  }
  return true;
}

ElementSet ClosureEngine::tau_k(const ElementSet& x) const {
  check_ground(x);
  const std::size_t m = index_.rule_count();
  std::vector<std::size_t> missing(m);
  ElementSet closed = x;
  std::vector<Element> queue = x.elements();
  for (RuleIndex::RuleId i = 0; i < m; ++i) {
    missing[i] = index_.antecedent(i).size();
    if (missing[i] == 0 && !closed.contains(index_.consequent(i))) {
      closed.insert(index_.consequent(i));
      queue.push_back(index_.consequent(i));
    }
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    for (RuleIndex::RuleId i : index_.containing(queue[head])) {
      if (--missing[i] == 0 && !closed.contains(index_.consequent(i))) {
        closed.insert(index_.consequent(i));
        queue.push_back(index_.consequent(i));
      }
    }
  }
  return closed;
}

ElementSet ClosureEngine::interior_k(const ElementSet& x) const {
  check_ground(x);
  return tau_k(x.complement()).complement();
}

bool ClosureEngine::implicate_k(const HornRule& rule) const {
  check_ground(rule.antecedent);
  if (is_trivial(rule)) return true;
  return tau_k(rule.antecedent).contains(rule.consequent);
}

ClosureResult interior_a(const RuleSet& rules, const ElementSet& x) {
  return ClosureEngine(rules).interior_a(x);
}
bool member_a(const RuleSet& rules, const ElementSet& x) { return ClosureEngine(rules).member_a(x); }
bool implicate_a(const RuleSet& rules, const HornRule& rule) {
  return ClosureEngine(rules).implicate_a(rule);
}
ElementSet tau_a(const RuleSet& rules, const ElementSet& x) { return ClosureEngine(rules).tau_a(x); }
bool member_k(const RuleSet& rules, const ElementSet& x) { return ClosureEngine(rules).member_k(x); }
ElementSet interior_k(const RuleSet& rules, const ElementSet& x) {
  return ClosureEngine(rules).interior_k(x);
}
bool implicate_k(const RuleSet& rules, const HornRule& rule) {
  return ClosureEngine(rules).implicate_k(rule);
}

}  // namespace antimatroid
