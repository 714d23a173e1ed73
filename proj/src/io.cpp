#include "antimatroid/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "antimatroid/errors.hpp"

namespace antimatroid {

namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_tokens(std::string_view s) {
  std::vector<std::string> out;
  std::string current;
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == ',' || c == '\r') {
      if (!current.empty()) out.push_back(std::move(current));
      current.clear();
    } else {
      current += c;
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

class TokenResolver {
 public:
  explicit TokenResolver(const std::vector<std::string>& labels) {
    for (std::size_t i = 0; i < labels.size(); ++i) {
      by_label_.emplace(labels[i], static_cast<Element>(i));
    }
  }

  // Returns the raw integer value (possibly >= n). Throws on garbage.
  long long resolve(const std::string& token, std::size_t line) const {
    if (auto it = by_label_.find(token); it != by_label_.end()) return it->second;
    long long value = 0;
    const char* begin = token.data();
    const char* end = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) {
      throw ParseError(line, "unknown element '" + token + "'");
    }
    if (value < 0) throw ParseError(line, "negative element id " + token);
    return value;
  }

 private:
  std::unordered_map<std::string, Element> by_label_;
};

struct RawRule {
  std::size_t line;
  long long consequent;
  std::vector<long long> antecedent;
};

RuleSet build_rule_set(const std::vector<RawRule>& raw, std::optional<std::size_t> header_n,
                       std::vector<std::string> labels, const ParseOptions& options) {
  std::optional<std::size_t> n = options.ground_size;
  if (!n) n = header_n;
  if (!n && !labels.empty()) n = labels.size();
  if (!n) {
    long long max_id = -1;
    for (const RawRule& r : raw) {
      max_id = std::max(max_id, r.consequent);
      for (long long a : r.antecedent) max_id = std::max(max_id, a);
    }
    n = static_cast<std::size_t>(max_id + 1);
  }
  RuleSet out(*n);
  for (const RawRule& r : raw) {
    auto check = [&](long long id) {
      if (id >= static_cast<long long>(*n)) {
        throw ParseError(r.line, "element " + std::to_string(id) + " >= n=" + std::to_string(*n));
      }
      return static_cast<Element>(id);
    };
    ElementSet antecedent(*n);
    for (long long a : r.antecedent) antecedent.insert(check(a));
    out.add(HornRule(std::move(antecedent), check(r.consequent)));
  }
  if (!labels.empty() && labels.size() != *n) {
    throw InputError("label table has " + std::to_string(labels.size()) +
                     " entries but n=" + std::to_string(*n));
  }
  out.set_labels(std::move(labels));
  return out;
}

RuleSet parse_line_format(std::string_view text, const ParseOptions& options) {
  std::optional<std::size_t> header_n;
  std::vector<std::string> labels = options.labels;
  struct PendingLine {
    std::size_t line;
    std::string consequent;
    std::vector<std::string> antecedent;
  };
  std::vector<PendingLine> pending;

  std::vector<std::string_view> lines;
  for (std::size_t pos = 0; pos <= text.size();) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    lines.push_back(text.substr(pos, eol - pos));
    pos = eol + 1;
  }

  std::size_t line_no = 0;
  for (std::string_view line : lines) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    if (const auto arrow = line.find("<-"); arrow != std::string_view::npos) {
      auto head = split_tokens(line.substr(0, arrow));
      if (head.size() != 1) throw ParseError(line_no, "expected exactly one consequent");
      pending.push_back({line_no, head.front(), split_tokens(line.substr(arrow + 2))});
      continue;
    }
    if (line.starts_with("n=") || line.starts_with("n =")) {
      const std::string_view value = trim(line.substr(line.find('=') + 1));
      std::size_t n = 0;
      auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), n);
      if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw ParseError(line_no, "bad ground size header");
      }
      header_n = n;
      continue;
    }
    if (line.starts_with("labels=") || line.starts_with("labels =")) {
      if (options.labels.empty()) labels = split_tokens(line.substr(line.find('=') + 1));
      continue;
    }
    throw ParseError(line_no, "expected 'CONSEQUENT <- ANTECEDENT...'");
  }

  const TokenResolver resolver(labels);
  std::vector<RawRule> raw;
  raw.reserve(pending.size());
  for (const PendingLine& p : pending) {
    RawRule r{p.line, resolver.resolve(p.consequent, p.line), {}};
    for (const std::string& tok : p.antecedent) r.antecedent.push_back(resolver.resolve(tok, p.line));
    raw.push_back(std::move(r));
  }
  return build_rule_set(raw, header_n, std::move(labels), options);
}

std::size_t line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + offset, '\n'));
}

RuleSet parse_json_format(std::string_view text, const ParseOptions& options) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(line_of_offset(text, e.byte), e.what());
  }
  if (!doc.is_object()) throw ParseError(1, "top-level JSON value must be an object");

  std::optional<std::size_t> header_n;
  std::vector<std::string> labels = options.labels;
  try {
    if (doc.contains("n")) header_n = doc.at("n").get<std::size_t>();
    if (doc.contains("labels") && options.labels.empty()) {
      labels = doc.at("labels").get<std::vector<std::string>>();
    }
  } catch (const json::exception& e) {
    throw ParseError(1, e.what());
  }

  const TokenResolver resolver(labels);
  auto token_of = [](const json& v, std::size_t index) -> std::string {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    throw ParseError(index, "element must be an integer id or a label");
  };

  std::vector<RawRule> raw;
  if (doc.contains("rules")) {
    const json& rules = doc.at("rules");
    if (!rules.is_array()) throw ParseError(1, "\"rules\" must be an array");
    // Rules are numbered from 1 in diagnostics.
    for (std::size_t i = 0; i < rules.size(); ++i) {
      const json& r = rules[i];
      if (!r.is_object() || !r.contains("then")) {
        throw ParseError(i + 1, "rule needs a \"then\" field");
      }
      RawRule out{i + 1, resolver.resolve(token_of(r.at("then"), i + 1), i + 1), {}};
      if (r.contains("if")) {
        if (!r.at("if").is_array()) throw ParseError(i + 1, "\"if\" must be an array");
        for (const json& a : r.at("if")) {
          out.antecedent.push_back(resolver.resolve(token_of(a, i + 1), i + 1));
        }
      }
      raw.push_back(std::move(out));
    }
  }
  return build_rule_set(raw, header_n, std::move(labels), options);
}

}  // namespace

RuleSet parse_rule_set(std::string_view text, const ParseOptions& options) {
  const std::string_view body = trim(text);
  const RuleFormat format =
      !body.empty() && body.front() == '{' ? RuleFormat::Json : RuleFormat::Line;
  return parse_rule_set(text, format, options);
}

RuleSet parse_rule_set(std::string_view text, RuleFormat format, const ParseOptions& options) {
  return format == RuleFormat::Json ? parse_json_format(text, options)
                                    : parse_line_format(text, options);
}

std::string serialize_rule_set(const RuleSet& rules, RuleFormat format) {
  if (format == RuleFormat::Json) {
    json doc;
    doc["n"] = rules.ground_size();
    if (!rules.labels().empty()) doc["labels"] = rules.labels();
    json list = json::array();
    for (const HornRule& r : rules) {
      list.push_back({{"if", r.antecedent.elements()}, {"then", r.consequent}});
    }
    doc["rules"] = std::move(list);
    return doc.dump() + "\n";
  }
  std::ostringstream out;
  out << "n=" << rules.ground_size() << '\n';
  if (!rules.labels().empty()) {
    out << "labels=";
    for (std::size_t i = 0; i < rules.labels().size(); ++i) {
      out << (i ? " " : "") << rules.labels()[i];
    }
    out << '\n';
  }
  for (const HornRule& r : rules) {
    out << r.consequent << " <-";
    r.antecedent.for_each([&](Element a) { out << ' ' << a; });
    out << '\n';
  }
  return out.str();
}

RuleSet read_rule_file(const std::filesystem::path& path, const ParseOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open rule file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_rule_set(buffer.str(), options);
}

void write_rule_file(const std::filesystem::path& path, const RuleSet& rules, RuleFormat format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write rule file " + path.string());
  out << serialize_rule_set(rules, format);
}

std::string export_horn_cnf(const RuleSet& rules) {
  std::ostringstream out;
  out << "c Horn CNF: one clause per rule (A,q), -a for each a in A, then +q.\n"
      << "c Variable i+1 stands for element i. K(R) is the family of 0-supports\n"
      << "c {i : x_i = 0} of the satisfying assignments.\n";
  out << "p cnf " << rules.ground_size() << ' ' << rules.size() << '\n';
  for (const HornRule& r : rules) {
    r.antecedent.for_each([&](Element a) { out << '-' << (a + 1) << ' '; });
    out << (r.consequent + 1) << " 0\n";
  }
  return out.str();
}

ElementSet parse_element_list(std::string_view text, std::size_t ground_size,
                              const std::vector<std::string>& labels) {
  const TokenResolver resolver(labels);
  ElementSet out(ground_size);
  std::string_view body = trim(text);
  if (body.size() >= 2 && body.front() == '{' && body.back() == '}') {
    body = body.substr(1, body.size() - 2);
  }
  for (const std::string& tok : split_tokens(body)) {
    const long long id = resolver.resolve(tok, 1);
    if (id >= static_cast<long long>(ground_size)) {
      throw InputError("element " + tok + " outside ground set of size " +
                       std::to_string(ground_size));
    }
    out.insert(static_cast<Element>(id));
  }
  return out;
}

std::string format_element_list(const ElementSet& set, const std::vector<std::string>& labels) {
  std::string out;
  set.for_each([&](Element x) {
    if (!out.empty()) out += ',';
    out += x < labels.size() ? labels[x] : std::to_string(x);
  });
  return out;
}

}  // namespace antimatroid
