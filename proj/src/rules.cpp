#include "antimatroid/rules.hpp"

#include <algorithm>

#include "antimatroid/errors.hpp"

namespace antimatroid {

std::string HornRule::to_string() const {
  return "(" + antecedent.to_string() + "," + std::to_string(consequent) + ")";
}

std::string RootedSet::to_string() const {
  return "(" + carrier.to_string() + "," + std::to_string(root) + ")";
}

RuleSet::RuleSet(std::size_t ground_size, std::vector<HornRule> rules)
    : ground_size_(ground_size) {
  rules_.reserve(rules.size());
  for (HornRule& r : rules) add(std::move(r));
}

void RuleSet::add(HornRule rule) {
  if (rule.ground_size() != ground_size_) {
    throw InputError("rule " + rule.to_string() + " is over a ground set of size " +
                     std::to_string(rule.ground_size()) + ", expected " +
                     std::to_string(ground_size_));
  }
  if (rule.consequent >= ground_size_) {
    throw InputError("consequent " + std::to_string(rule.consequent) +
                     " outside ground set of size " + std::to_string(ground_size_));
  }
  rules_.push_back(std::move(rule));
}

void RuleSet::add(const std::vector<Element>& antecedent, Element consequent) {
  add(HornRule(ElementSet(ground_size_, antecedent), consequent));
}

void RuleSet::set_labels(std::vector<std::string> labels) {
  if (!labels.empty() && labels.size() != ground_size_) {
    throw InputError("expected " + std::to_string(ground_size_) + " labels, got " +
                     std::to_string(labels.size()));
  }
  labels_ = std::move(labels);
}

std::string RuleSet::label(Element x) const {
  if (x < labels_.size()) return labels_[x];
  return std::to_string(x);
}

RuleSet RuleSet::canonical() const {
  RuleSet out(ground_size_);
  out.rules_ = rules_;
  std::sort(out.rules_.begin(), out.rules_.end());
  out.rules_.erase(std::unique(out.rules_.begin(), out.rules_.end()), out.rules_.end());
  out.labels_ = labels_;
  return out;
}

bool accepts(const HornRule& rule, const ElementSet& x) {
  if (rule.ground_size() != x.ground_size()) {
    throw InputError("rule and set live on different ground sets");
  }
  if (rule.consequent >= x.ground_size()) {
    throw InputError("consequent " + std::to_string(rule.consequent) + " out of range");
  }
  return !x.contains(rule.consequent) || rule.antecedent.intersects(x);
}

bool is_trivial(const HornRule& rule) { return rule.antecedent.contains(rule.consequent); }

RootedSet to_rooted_set(const HornRule& rule) {
  if (is_trivial(rule)) {
    throw PreconditionError("trivial rule " + rule.to_string() + " has no rooted set");
  }
  return RootedSet{rule.antecedent.with(rule.consequent), rule.consequent};
}

HornRule from_rooted_set(const RootedSet& rooted) {
  if (!rooted.carrier.contains(rooted.root)) {
    throw PreconditionError("root " + std::to_string(rooted.root) + " not in carrier");
  }
  return HornRule(rooted.carrier.without(rooted.root), rooted.root);
}

std::size_t rule_size(const RuleSet& rules) {
  std::size_t total = 0;
  for (const HornRule& r : rules) total += r.antecedent.size() + 1;
  return total;
}

RuleSet with_rule(const RuleSet& rules, const HornRule& extra) {
  RuleSet out = rules;
  out.add(extra);
  return out;
}

}  // namespace antimatroid
