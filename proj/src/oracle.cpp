#include "antimatroid/oracle.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <string>

#include "antimatroid/errors.hpp"

namespace antimatroid::oracle {

namespace {

void guard(std::size_t n) {
  if (n > kMaxGroundSize) {
    throw GuardError("brute-force oracle limited to n <= " + std::to_string(kMaxGroundSize) +
                     ", got n=" + std::to_string(n));
  }
}

Mask full_mask(std::size_t n) { return n == 0 ? 0 : static_cast<Mask>((std::uint64_t{1} << n) - 1); }

bool has(Mask m, Element x) { return ((m >> x) & 1u) != 0; }

struct MaskRule {
  Mask antecedent;
  Element consequent;
};

std::vector<MaskRule> to_mask_rules(const RuleSet& rules) {
  std::vector<MaskRule> out;
  out.reserve(rules.size());
  for (const HornRule& r : rules) out.push_back({to_mask(r.antecedent), r.consequent});
  return out;
}

bool accepted_by_all(const std::vector<MaskRule>& rules, Mask x) {
  for (const MaskRule& r : rules) {
    if (has(x, r.consequent) && (x & r.antecedent) == 0) return false;
  }
  return true;
}

void require_antimatroid(const Family& family) {
  if (!verify_antimatroid(family)) {
    throw PreconditionError("family is not an antimatroid");
  }
}

}  // namespace

Mask to_mask(const ElementSet& s) {
  guard(s.ground_size());
  Mask m = 0;
  s.for_each([&](Element x) { m |= Mask{1} << x; });
  return m;
}

ElementSet from_mask(Mask m, std::size_t ground_size) {
  ElementSet s(ground_size);
  for (Element x = 0; x < ground_size; ++x) {
    if (has(m, x)) s.insert(x);
  }
  return s;
}

Family::Family(std::size_t ground_size, std::vector<Mask> members)
    : ground_size_(ground_size), members_(std::move(members)) {
  guard(ground_size);
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  present_.assign(std::size_t{1} << ground_size, false);
  for (Mask m : members_) {
    if (m > full_mask(ground_size)) {
      throw InputError("family member outside ground set of size " + std::to_string(ground_size));
    }
    present_[m] = true;
  }
}

bool Family::is_subfamily_of(const Family& other) const {
  return std::all_of(members_.begin(), members_.end(), [&](Mask m) { return other.contains(m); });
}

std::vector<ElementSet> Family::members() const {
  std::vector<ElementSet> out;
  out.reserve(members_.size());
  for (Mask m : members_) out.push_back(from_mask(m, ground_size_));
  return out;
}

Family brute_k_family(const RuleSet& rules) {
  const std::size_t n = rules.ground_size();
  guard(n);
  const auto mask_rules = to_mask_rules(rules);
  std::vector<Mask> members;
  for (Mask x = 0; x <= full_mask(n); ++x) {
    if (accepted_by_all(mask_rules, x)) members.push_back(x);
    if (x == full_mask(n)) break;
  }
  return Family(n, std::move(members));
}

Family reachable_subfamily(const Family& family) {
  const std::size_t n = family.ground_size();
  if (!family.contains(Mask{0})) return Family(n, {});
  std::vector<bool> seen(std::size_t{1} << n, false);
  std::vector<Mask> frontier{0};
  std::vector<Mask> reached{0};
  seen[0] = true;
  while (!frontier.empty()) {
    std::vector<Mask> next;
    for (Mask x : frontier) {
      for (Element e = 0; e < n; ++e) {
        const Mask y = x | (Mask{1} << e);
        if (y == x || seen[y] || !family.contains(y)) continue;
        seen[y] = true;
        next.push_back(y);
        reached.push_back(y);
      }
    }
    frontier = std::move(next);
  }
  return Family(n, std::move(reached));
}

Family brute_a_family(const RuleSet& rules) { return reachable_subfamily(brute_k_family(rules)); }

bool verify_antimatroid(const Family& family) {
  if (!family.contains(Mask{0})) return false;
  const auto& m = family.masks();
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = i + 1; j < m.size(); ++j) {
      if (!family.contains(m[i] | m[j])) return false;
    }
  }
  for (Mask x : m) {
    if (x == 0) continue;
    bool accessible = false;
    for (Mask bits = x; bits != 0 && !accessible; bits &= bits - 1) {
      accessible = family.contains(x & ~(bits & (~bits + 1)));
    }
    if (!accessible) return false;
  }
  return true;
}

bool brute_implicate(const Family& family, const HornRule& rule) {
  const Mask a = to_mask(rule.antecedent);
  for (Mask x : family.masks()) {
    if (has(x, rule.consequent) && (x & a) == 0) return false;
  }
  return true;
}

Mask brute_interior(const Family& family, Mask x) {
  Mask best = 0;
  for (Mask k : family.masks()) {
    if ((k & ~x) == 0 && std::popcount(k) > std::popcount(best)) best = k;
  }
  return best;
}

Mask brute_tau(const Family& family, Mask x) {
  const Mask full = full_mask(family.ground_size());
  Mask closure = full;
  for (Mask k : family.masks()) {
    const Mask dual = full & ~k;
    if ((x & ~dual) == 0) closure &= dual;
  }
  return closure;
}

bool is_free(const Family& family, Mask x) {
  std::set<Mask> traces;
  for (Mask k : family.masks()) traces.insert(k & x);
  return traces.size() == (std::size_t{1} << std::popcount(x));
}

std::vector<RootedSet> brute_circuits(const Family& family) {
  require_antimatroid(family);
  const std::size_t n = family.ground_size();
  const Mask full = full_mask(n);
  auto dual_member = [&](Mask y) { return family.contains(full & ~y); };

  std::vector<RootedSet> out;
  for (Mask c = 1; c <= full && c != 0; ++c) {
    if (is_free(family, c)) continue;
    bool minimal = true;
    for (Mask bits = c; bits != 0 && minimal; bits &= bits - 1) {
      minimal = is_free(family, c & ~(bits & (~bits + 1)));
    }
    if (!minimal) continue;
    const Mask closure = brute_tau(family, c);
    std::vector<Element> roots;
    for (Element r = 0; r < n; ++r) {
      if (!has(c, r) || dual_member(closure & ~(Mask{1} << r))) continue;
      bool others_removable = true;
      for (Element s = 0; s < n && others_removable; ++s) {
        if (s != r && has(c, s)) others_removable = dual_member(closure & ~(Mask{1} << s));
      }
      if (others_removable) roots.push_back(r);
    }
    if (roots.size() != 1) {
      throw PreconditionError("circuit " + from_mask(c, n).to_string() +
                              " does not have a unique root");
    }
    out.push_back(RootedSet{from_mask(c, n), roots.front()});
    if (c == full) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<RootedSet> brute_critical_circuits(const Family& family) {
  require_antimatroid(family);
  const std::size_t n = family.ground_size();
  const Mask full = full_mask(n);
  auto dual_member = [&](Mask y) { return family.contains(full & ~y); };

  std::vector<RootedSet> out;
  for (const RootedSet& circuit : brute_circuits(family)) {
    const Mask c = to_mask(circuit.carrier);
    const Mask base = brute_tau(family, c) & ~(Mask{1} << circuit.root);
    if (dual_member(base)) continue;
    bool critical = true;
    for (Element s = 0; s < n && critical; ++s) {
      if (s != circuit.root && has(c, s)) critical = dual_member(base & ~(Mask{1} << s));
    }
    if (critical) out.push_back(circuit);
  }
  return out;
}

std::vector<HornRule> brute_negative_inferences(const RuleSet& positives,
                                                const std::vector<HornRule>& negatives,
                                                InferenceMode mode) {
  const std::size_t n = positives.ground_size();
  guard(n);
  std::vector<HornRule> out;
  if (negatives.empty()) return out;
  for (Element q = 0; q < n; ++q) {
    for (Mask a = 0; a <= full_mask(n); ++a) {
      if (!has(a, q)) {
        const HornRule query(from_mask(a, n), q);
        RuleSet extended = positives;
        extended.add(query);
        const Family family =
            mode == InferenceMode::Original ? brute_k_family(extended) : brute_a_family(extended);
        if (std::any_of(negatives.begin(), negatives.end(),
                        [&](const HornRule& b) { return brute_implicate(family, b); })) {
          out.push_back(query);
        }
      }
      if (a == full_mask(n)) break;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace antimatroid::oracle
