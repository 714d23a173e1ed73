#include "antimatroid/minimization.hpp"

#include <vector>

#include "antimatroid/closure.hpp"
#include "antimatroid/errors.hpp"

namespace antimatroid {

namespace {

RuleSet live_rules(std::size_t n, const std::vector<HornRule>& rules,
                   const std::vector<bool>& alive, std::size_t skip) {
  RuleSet out(n);
  for (std::size_t j = 0; j < rules.size(); ++j) {
    if (alive[j] && j != skip) out.add(rules[j]);
  }
  return out;
}

}  // namespace

RuleSet critical_rules(const RuleSet& rules) {
  const std::size_t n = rules.ground_size();
  std::vector<HornRule> working;
  working.reserve(rules.size());
  for (const HornRule& r : rules) {
    if (!is_trivial(r)) working.push_back(r);
  }
  std::vector<bool> alive(working.size(), true);
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  for (std::size_t i = 0; i < working.size(); ++i) {
    for (Element a : working[i].antecedent.elements()) {
      const HornRule shrunk(working[i].antecedent.without(a), working[i].consequent);
      if (implicate_a(live_rules(n, working, alive, kNone), shrunk)) {
        working[i] = shrunk;
      }
    }
    if (implicate_a(live_rules(n, working, alive, i), working[i])) alive[i] = false;
  }

  RuleSet out = live_rules(n, working, alive, kNone).canonical();
  out.set_labels(rules.labels());
  return out;
}

bool same_antimatroid(const RuleSet& r1, const RuleSet& r2) {
  if (r1.ground_size() != r2.ground_size()) {
    throw InputError("rule sets over different ground sets (" + std::to_string(r1.ground_size()) +
                     " vs " + std::to_string(r2.ground_size()) + ")");
  }
  return critical_rules(r1).rules() == critical_rules(r2).rules();
}

}  // namespace antimatroid
