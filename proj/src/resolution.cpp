#include "antimatroid/resolution.hpp"

#include <algorithm>
#include <unordered_set>

#include "antimatroid/closure.hpp"
#include "antimatroid/errors.hpp"

namespace antimatroid {

namespace {

class RuleStore {
 public:
  RuleStore(std::size_t cap, const char* what) : cap_(cap), what_(what) {}

  bool insert(HornRule rule) {
    if (!seen_.insert(rule).second) return false;
    if (seen_.size() > cap_) {
      throw ResourceLimitError(std::string(what_) + " exceeded cap of " + std::to_string(cap_) +
                                   " rules",
                               seen_.size());
    }
    order_.push_back(std::move(rule));
    return true;
  }

  std::size_t size() const { return order_.size(); }
  const HornRule& operator[](std::size_t i) const { return order_[i]; }

  RuleSet to_rule_set(std::size_t n) && {
    RuleSet out(n, std::move(order_));
    return out.canonical();
  }

 private:
  std::size_t cap_;
  const char* what_;
  std::unordered_set<HornRule, HornRuleHash> seen_;
  std::vector<HornRule> order_;
};

}  // namespace

std::pair<HornRule, HornRule> resolve(const HornRule& a, const HornRule& b) {
  if (is_trivial(a) || is_trivial(b)) {
    throw PreconditionError("resolution needs nontrivial rules");
  }
  ElementSet merged = a.antecedent | b.antecedent;
  merged.erase(a.consequent);
  merged.erase(b.consequent);
  return {HornRule(merged, a.consequent), HornRule(merged, b.consequent)};
}

RuleSet resolution_closure(const RuleSet& rules, std::size_t cap) {
  RuleStore store(cap, "resolution closure");
  for (const HornRule& r : rules) {
    if (!is_trivial(r)) store.insert(r);
  }
  // Every pair (j, i) with j <= i is resolved exactly once, when i is
  // processed; rules appended later get their turn too.
  for (std::size_t i = 0; i < store.size(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      auto [left, right] = resolve(store[i], store[j]);
      if (!is_trivial(left)) store.insert(std::move(left));
      if (!is_trivial(right)) store.insert(std::move(right));
    }
  }
  RuleSet out = std::move(store).to_rule_set(rules.ground_size());
  out.set_labels(rules.labels());
  return out;
}

RuleSet all_nontrivial_implicates(const RuleSet& rules, std::size_t cap) {
  const RuleSet closure = resolution_closure(rules, cap);
  RuleStore store(cap, "implicate set");
  for (const HornRule& r : closure) store.insert(r);
  for (std::size_t i = 0; i < store.size(); ++i) {
    const HornRule base = store[i];
    const ElementSet room = (base.antecedent.with(base.consequent)).complement();
    room.for_each([&](Element e) { store.insert(HornRule(base.antecedent.with(e), base.consequent)); });
  }
  RuleSet out = std::move(store).to_rule_set(rules.ground_size());
  out.set_labels(rules.labels());
  return out;
}

RuleSet prime_implicates(const RuleSet& rules, std::size_t cap) {
  const RuleSet closure = resolution_closure(rules, cap);
  const ClosureEngine engine(rules);
  std::unordered_set<HornRule, HornRuleHash> primes;
  for (const HornRule& r : closure) {
    HornRule candidate = r;
    for (Element a : r.antecedent.elements()) {
      HornRule smaller(candidate.antecedent.without(a), candidate.consequent);
      if (engine.implicate_a(smaller)) candidate = std::move(smaller);
    }
    primes.insert(std::move(candidate));
  }
  RuleSet out(rules.ground_size(), std::vector<HornRule>(primes.begin(), primes.end()));
  out = out.canonical();
  out.set_labels(rules.labels());
  return out;
}

std::vector<RootedSet> circuits(const RuleSet& rules, std::size_t cap) {
  std::vector<RootedSet> out;
  for (const HornRule& r : prime_implicates(rules, cap)) out.push_back(to_rooted_set(r));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace antimatroid
