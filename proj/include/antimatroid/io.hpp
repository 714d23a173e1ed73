#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "antimatroid/rules.hpp"

namespace antimatroid {

// Rule files come in two flavours.
//
// Line format:
//
//   # comment
//   n=4
//   labels=a b c d        (optional, one label per element)
//   1 <- 0 2
//   0 <- 1 3
//   2 <-                  (empty antecedent)
//
// JSON format:
//
//   {"n": 4, "labels": ["a", ...], "rules": [{"if": [0, 2], "then": 1}, ...]}
//
// Element tokens may be ids or labels. The ground size comes from, in order
// of precedence: ParseOptions::ground_size, the `n=` header / "n" key, the
// label count, and finally 1 + the largest id mentioned.
enum class RuleFormat { Line, Json };

struct ParseOptions {
  std::optional<std::size_t> ground_size;
  std::vector<std::string> labels;
};

// Detects the format from the first non-blank character ('{' means JSON).
RuleSet parse_rule_set(std::string_view text, const ParseOptions& options = {});
RuleSet parse_rule_set(std::string_view text, RuleFormat format,
                       const ParseOptions& options = {});

std::string serialize_rule_set(const RuleSet& rules, RuleFormat format = RuleFormat::Line);

RuleSet read_rule_file(const std::filesystem::path& path, const ParseOptions& options = {});
void write_rule_file(const std::filesystem::path& path, const RuleSet& rules,
                     RuleFormat format = RuleFormat::Line);

// DIMACS CNF, variables 1-indexed: rule (A, q) becomes the clause
// "-a1 -a2 ... q 0". Trivial rules are emitted as tautologies.
std::string export_horn_cnf(const RuleSet& rules);

// Parses "0,2,5" (ids or labels) into a set. Empty string is the empty set.
ElementSet parse_element_list(std::string_view text, std::size_t ground_size,
                              const std::vector<std::string>& labels = {});

std::string format_element_list(const ElementSet& set, const std::vector<std::string>& labels = {});

}  // namespace antimatroid
