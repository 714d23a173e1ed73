#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "antimatroid/rules.hpp"

// Brute-force reference implementations over explicit families of subsets.
// Everything here works on bit masks of the ground set and deliberately
// shares no code with the linear-time engines it is used to check.
namespace antimatroid::oracle {

inline constexpr std::size_t kMaxGroundSize = 20;

using Mask = std::uint32_t;

Mask to_mask(const ElementSet& s);
ElementSet from_mask(Mask m, std::size_t ground_size);

// An explicit family of subsets of {0..n-1}, kept sorted by mask value.
class Family {
 public:
  Family() = default;
  // Throws GuardError for n > kMaxGroundSize. Duplicates are dropped.
  Family(std::size_t ground_size, std::vector<Mask> members);

  std::size_t ground_size() const noexcept { return ground_size_; }
  std::size_t size() const noexcept { return members_.size(); }
  const std::vector<Mask>& masks() const noexcept { return members_; }

  bool contains(Mask m) const { return m < present_.size() && present_[m]; }
  bool contains(const ElementSet& s) const { return contains(to_mask(s)); }

  bool is_subfamily_of(const Family& other) const;
  std::vector<ElementSet> members() const;

  bool operator==(const Family& other) const {
    return ground_size_ == other.ground_size_ && members_ == other.members_;
  }

 private:
  std::size_t ground_size_ = 0;
  std::vector<Mask> members_;
  std::vector<bool> present_;
};

// K(R): every subset accepted by every rule.
Family brute_k_family(const RuleSet& rules);

// A(R): members of K(R) reachable from the empty set by single-element
// additions that stay inside K(R).
Family brute_a_family(const RuleSet& rules);

// Tight-path closure of an arbitrary family (members reachable from the
// empty set one element at a time).
Family reachable_subfamily(const Family& family);

// Contains the empty set, union-closed, accessible.
bool verify_antimatroid(const Family& family);

bool brute_implicate(const Family& family, const HornRule& rule);

// Largest member contained in x (family must be union-closed).
Mask brute_interior(const Family& family, Mask x);

// Closure operator of the dual family {Q - K}: the intersection of all
// dual members containing x.
Mask brute_tau(const Family& family, Mask x);

// X is free iff {X & K : K in family} is all of 2^X.
bool is_free(const Family& family, Mask x);

// Circuits (minimal non-free sets) with their roots. Requires an
// antimatroid; throws PreconditionError otherwise.
std::vector<RootedSet> brute_circuits(const Family& family);

// Rooted sets (C, r) with tau(C) - r not dual and tau(C) - r - s dual for
// every s in C - r.
std::vector<RootedSet> brute_critical_circuits(const Family& family);

// Every nontrivial query (A, q) for which some rule of `negatives` is an
// implicate of K(P + (A, q)) (Original) or A(P + (A, q)) (Revised).
std::vector<HornRule> brute_negative_inferences(const RuleSet& positives,
                                                const std::vector<HornRule>& negatives,
                                                InferenceMode mode);

}  // namespace antimatroid::oracle
