#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "antimatroid/rules.hpp"

namespace antimatroid {

inline constexpr std::size_t kDefaultImplicateCap = 1'000'000;

// Antimatroidal resolution of (A, q) and (A', q'):
//   ((A | A') - q - q', q)  and  ((A | A') - q - q', q').
// Throws PreconditionError if either input is trivial.
std::pair<HornRule, HornRule> resolve(const HornRule& a, const HornRule& b);

// Closure of the nontrivial rules of R under antimatroidal resolution.
// K(closure) = A(R) and the closure contains every prime implicate of A(R),
// but not necessarily every enlargement of one. Throws ResourceLimitError
// once more than `cap` rules have been produced.
RuleSet resolution_closure(const RuleSet& rules, std::size_t cap = kDefaultImplicateCap);

// Every nontrivial implicate of A(R): the resolution closure together with
// all antecedent enlargements (A' > A, q not in A') of its rules.
RuleSet all_nontrivial_implicates(const RuleSet& rules, std::size_t cap = kDefaultImplicateCap);

// Nontrivial implicates (A, q) of A(R) with no implicate (A - a, q).
RuleSet prime_implicates(const RuleSet& rules, std::size_t cap = kDefaultImplicateCap);

// Rooted-set images (A + q, q) of the prime implicates, i.e. the circuits.
std::vector<RootedSet> circuits(const RuleSet& rules, std::size_t cap = kDefaultImplicateCap);

}  // namespace antimatroid
