#pragma once

#include "antimatroid/rules.hpp"

namespace antimatroid {

// The unique minimal rule set R* with A(R*) = A(R): the critical rules of
// A(R). Each rule is first shrunk to a prime implicate (antecedent elements
// tried in ascending order) and then dropped if the remaining rules already
// imply it. O(l^2). The result is in canonical order.
RuleSet critical_rules(const RuleSet& rules);

// A(r1) == A(r2). Throws InputError on ground-size mismatch.
bool same_antimatroid(const RuleSet& r1, const RuleSet& r2);

}  // namespace antimatroid
