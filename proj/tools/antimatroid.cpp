// Command-line front end. Exit codes:
//   0  success / predicate true
//   1  predicate false
//   2  usage error
//   3  input error (bad file, bad set literal, resource cap hit)
//   4  --oracle found a divergence between an engine and the brute-force oracle

#include <algorithm>
#include <atomic>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "antimatroid/closure.hpp"
#include "antimatroid/enumeration.hpp"
#include "antimatroid/errors.hpp"
#include "antimatroid/http.hpp"
#include "antimatroid/io.hpp"
#include "antimatroid/minimization.hpp"
#include "antimatroid/oracle.hpp"
#include "antimatroid/query.hpp"
#include "antimatroid/resolution.hpp"
#include "antimatroid/service.hpp"

using namespace antimatroid;
using nlohmann::json;

namespace {

constexpr int kTrue = 0;
constexpr int kFalse = 1;
constexpr int kUsage = 2;
constexpr int kInput = 3;
constexpr int kDivergence = 4;

struct Divergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string rules_path;
  bool json = false;
  bool oracle = false;
};

RuleSet load(const std::string& path) {
  if (path == "-") {
    std::stringstream buf;
    buf << std::cin.rdbuf();
    return parse_rule_set(buf.str());
  }
  return read_rule_file(path);
}

std::string show(const ElementSet& s, const RuleSet& r) { return "{" + format_element_list(s, r.labels()) + "}"; }

std::string show(const HornRule& rule, const RuleSet& r) {
  std::string label = r.label(rule.consequent);
  return "(" + show(rule.antecedent, r) + "," + label + ")";
}

json rule_json(const HornRule& r) { return json{{"if", r.antecedent.elements()}, {"then", r.consequent}}; }

json rules_json(const RuleSet& rs) {
  json a = json::array();
  for (const HornRule& r : rs) a.push_back(rule_json(r));
  return a;
}

void require_oracle_size(const RuleSet& r) {
  if (r.ground_size() > oracle::kMaxGroundSize) {
    throw InputError("--oracle needs n <= " + std::to_string(oracle::kMaxGroundSize));
  }
}

void agree(bool ok, const std::string& what) {
  if (!ok) throw Divergence("oracle divergence: " + what);
}

std::string env_or(const char* name, const std::string& fallback) {
  const char* v = std::getenv(name);
  return v && *v ? std::string(v) : fallback;
}

json stats_json(const SessionStats& s) {
  return json{{"posed", s.posed},
              {"yes", s.yes_count},
              {"no", s.no_count},
              {"inferred_positive", s.inferred_positive},
              {"inferred_negative", s.inferred_negative},
              {"guard_rejected", s.guard_rejected},
              {"terminated", std::string(to_string(s.terminated))}};
}

std::string short_class(Classification c) {
  switch (c) {
    case Classification::PosedYes: return "posed:YES";
    case Classification::PosedNo: return "posed:NO";
    case Classification::GuardRejected: return "posed:YES(rejected)";
    case Classification::PositiveInference: return "posinf";
    case Classification::NegativeInference: return "negainf";
    case Classification::Unreached: return "";
  }
  return "?";
}

HttpServer* g_server = nullptr;
void on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Antimatroids given by Horn rules: closures, enumeration, minimization, query sessions"};
  app.require_subcommand(1);
  Common common;

  auto add_rules = [&](CLI::App* sub, bool required = true) {
    auto* opt = sub->add_option("--rules,-r", common.rules_path, "Rule file (line or JSON format; - for stdin)");
    if (required) opt->required();
    sub->add_flag("--json", common.json, "Machine-readable output");
  };
  auto add_oracle = [&](CLI::App* sub) {
    sub->add_flag("--oracle", common.oracle, "Cross-check against the brute-force oracle (small n)");
  };

  std::string set_text, if_text, then_text, other_path, out_path, format = "line";
  bool k_family = false;

  auto* interior = app.add_subcommand("interior", "Largest member of A(R) (or K(R)) inside a set");
  add_rules(interior);
  add_oracle(interior);
  interior->add_option("--set,-s", set_text, "Comma-separated ids or labels")->required();
  interior->add_flag("--k", k_family, "Use K(R) instead of A(R)");

  auto* member = app.add_subcommand("member", "Exit 0 iff the set is a member of A(R) (or K(R))");
  add_rules(member);
  add_oracle(member);
  member->add_option("--set,-s", set_text, "Comma-separated ids or labels")->required();
  member->add_flag("--k", k_family, "Use K(R) instead of A(R)");

  auto* infer = app.add_subcommand("infer", "Exit 0 iff (A, q) is an implicate of A(R) (or K(R))");
  add_rules(infer);
  add_oracle(infer);
  infer->add_option("--if", if_text, "Antecedent A")->required();
  infer->add_option("--then", then_text, "Consequent q")->required();
  infer->add_flag("--k", k_family, "Use K(R) instead of A(R)");

  std::optional<std::uint64_t> limit;
  bool count_only = false;
  auto* enumerate = app.add_subcommand("enum", "List the members of A(R)");
  add_rules(enumerate);
  add_oracle(enumerate);
  enumerate->add_option("--limit", limit, "Stop after this many members");
  enumerate->add_flag("--count", count_only, "Print only the number of members");

  auto* critical = app.add_subcommand("critical", "Minimum rule set with the same antimatroid");
  add_rules(critical);
  add_oracle(critical);
  critical->add_option("--out,-o", out_path, "Write the result to a file");
  critical->add_option("--format", format, "line or json")->check(CLI::IsMember({"line", "json"}));

  auto* equiv = app.add_subcommand("equiv", "Exit 0 iff two rule sets give the same antimatroid");
  add_rules(equiv);
  add_oracle(equiv);
  equiv->add_option("--other", other_path, "Second rule file")->required();

  bool prime = false, resolution_only = false;
  std::size_t cap = kDefaultImplicateCap;
  auto* implicates = app.add_subcommand("implicates", "Nontrivial implicates of A(R)");
  add_rules(implicates);
  add_oracle(implicates);
  implicates->add_flag("--prime", prime, "Only prime implicates");
  implicates->add_flag("--resolution", resolution_only, "The raw resolution closure, without enlargements");
  implicates->add_option("--cap", cap, "Abort beyond this many rules");

  auto* circuits_cmd = app.add_subcommand("circuits", "Circuits (C, r) of A(R)");
  add_rules(circuits_cmd);
  add_oracle(circuits_cmd);
  circuits_cmd->add_option("--cap", cap, "Abort beyond this many rules");

  std::string target_path, mode = "both", policy = "asc";
  std::uint64_t seed = 1;
  std::size_t repeat = 0, jobs = 1;
  RandomRuleSpec spec;
  bool trace = false, criticalize = false, proper_guard = false, koppen = false;
  auto* simulate = app.add_subcommand("simulate", "Run QUERY against an idealistic expert");
  simulate->add_option("--target,-t", target_path, "Target rule file (omit to use a random target)");
  simulate->add_option("--mode", mode, "original, revised or both")
      ->check(CLI::IsMember({"original", "revised", "both"}));
  simulate->add_option("--policy", policy, "asc or desc")->check(CLI::IsMember({"asc", "desc"}));
  simulate->add_option("--seed", seed, "Seed of the (first) random target");
  simulate->add_option("--repeat", repeat, "Simulate this many random targets (seeds seed, seed+1, ...)");
  simulate->add_option("--jobs,-j", jobs, "Worker threads for --repeat")->check(CLI::PositiveNumber);
  simulate->add_option("--n", spec.ground_size, "Random target: ground size");
  simulate->add_option("--m", spec.rule_count, "Random target: number of rules");
  std::optional<std::size_t> min_size, max_size;
  simulate->add_option("--min-size", min_size, "Random target: smallest antecedent (default 1)");
  simulate->add_option("--max-size", max_size, "Random target: largest antecedent (default n-1)");
  simulate->add_flag("--trace", trace, "Print the per-query classification table");
  simulate->add_flag("--criticalize", criticalize, "Minimize P after every yes");
  simulate->add_flag("--proper-guard", proper_guard, "Reject yes answers that make Q unreachable");
  simulate->add_flag("--koppen", koppen, "Stop when a whole stage is already determined");
  simulate->add_flag("--json", common.json, "Machine-readable output");

  auto* gen = app.add_subcommand("gen", "Random rule set");
  gen->add_option("--n", spec.ground_size, "Ground size");
  gen->add_option("--m", spec.rule_count, "Number of rules");
  gen->add_option("--min-size", min_size, "Smallest antecedent (default 1)");
  gen->add_option("--max-size", max_size, "Largest antecedent (default n-1)");
  gen->add_option("--seed", seed, "Seed");
  gen->add_option("--out,-o", out_path, "Write to a file instead of stdout");
  gen->add_option("--format", format, "line or json")->check(CLI::IsMember({"line", "json"}));

  auto* cnf = app.add_subcommand("export-cnf", "Horn CNF whose models are K(R) in DIMACS form");
  add_rules(cnf);
  cnf->add_option("--out,-o", out_path, "Write to a file instead of stdout");

  std::string bind = env_or("ANTIMATROID_BIND", "127.0.0.1:8080");
  std::string data_dir = env_or("ANTIMATROID_DATA_DIR", "sessions");
  auto* serve = app.add_subcommand("serve", "Run the HTTP session service");
  serve->add_option("--bind", bind, "host:port (env ANTIMATROID_BIND)");
  serve->add_option("--data-dir", data_dir, "Session log directory (env ANTIMATROID_DATA_DIR)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  auto emit_set_result = [&](bool value, const char* key) {
    if (common.json) {
      std::cout << json{{key, value}}.dump() << "\n";
    } else {
      std::cout << (value ? "true" : "false") << "\n";
    }
    return value ? kTrue : kFalse;
  };

  try {
    if (*interior) {
      const RuleSet rules = load(common.rules_path);
      const ClosureEngine engine(rules);
      const ElementSet x = parse_element_list(set_text, rules.ground_size(), rules.labels());
      ElementSet result(rules.ground_size());
      std::vector<Element> order;
      if (k_family) {
        result = engine.interior_k(x);
      } else {
        ClosureResult r = engine.interior_a(x);
        result = r.interior;
        order = std::move(r.addition_order);
      }
      if (common.oracle) {
        require_oracle_size(rules);
        const auto fam = k_family ? oracle::brute_k_family(rules) : oracle::brute_a_family(rules);
        agree(oracle::to_mask(result) == oracle::brute_interior(fam, oracle::to_mask(x)), "interior of " + x.to_string());
      }
      if (common.json) {
        json j{{"interior", result.elements()}};
        if (!k_family) j["addition_order"] = order;
        std::cout << j.dump() << "\n";
      } else {
        std::cout << show(result, rules) << "\n";
      }
      return kTrue;
    }

    if (*member) {
      const RuleSet rules = load(common.rules_path);
      const ClosureEngine engine(rules);
      const ElementSet x = parse_element_list(set_text, rules.ground_size(), rules.labels());
      const bool in = k_family ? engine.member_k(x) : engine.member_a(x);
      if (common.oracle) {
        require_oracle_size(rules);
        const auto fam = k_family ? oracle::brute_k_family(rules) : oracle::brute_a_family(rules);
        agree(in == fam.contains(x), "membership of " + x.to_string());
      }
      return emit_set_result(in, "member");
    }

    if (*infer) {
      const RuleSet rules = load(common.rules_path);
      const ClosureEngine engine(rules);
      const ElementSet a = parse_element_list(if_text, rules.ground_size(), rules.labels());
      const ElementSet q = parse_element_list(then_text, rules.ground_size(), rules.labels());
      if (q.size() != 1) throw InputError("--then needs exactly one element");
      const HornRule rule(a, q.first());
      const bool yes = k_family ? engine.implicate_k(rule) : engine.implicate_a(rule);
      if (common.oracle) {
        require_oracle_size(rules);
        const auto fam = k_family ? oracle::brute_k_family(rules) : oracle::brute_a_family(rules);
        agree(yes == oracle::brute_implicate(fam, rule), "implicate " + rule.to_string());
      }
      return emit_set_result(yes, "implicate");
    }

    if (*enumerate) {
      const RuleSet rules = load(common.rules_path);
      std::optional<oracle::Family> fam;
      std::vector<oracle::Mask> seen;
      if (common.oracle) {
        require_oracle_size(rules);
        fam = oracle::brute_a_family(rules);
      }
      std::uint64_t printed = 0;
      json members = json::array();
      const std::uint64_t total = enumerate_members(rules, [&](const ElementSet& m) {
        if (fam) seen.push_back(oracle::to_mask(m));
        if (!count_only && (!limit || printed < *limit)) {
          if (common.json) {
            members.push_back(m.elements());
          } else {
            std::cout << show(m, rules) << "\n";
          }
          ++printed;
        }
        return fam || count_only || !limit || printed < *limit;
      });
      if (fam) {
        const std::size_t before = seen.size();
        std::sort(seen.begin(), seen.end());
        agree(std::unique(seen.begin(), seen.end()) == seen.end(), "enumeration emitted a duplicate");
        agree(before == fam->size() && seen == fam->masks(), "enumeration differs from the brute-force family");
      }
      if (common.json) {
        json j{{"count", total}};
        if (!count_only) j["members"] = members;
        std::cout << j.dump() << "\n";
      } else if (count_only) {
        std::cout << total << "\n";
      }
      return kTrue;
    }

    if (*critical) {
      const RuleSet rules = load(common.rules_path);
      const RuleSet result = critical_rules(rules);
      if (common.oracle) {
        require_oracle_size(rules);
        std::vector<RootedSet> mine;
        for (const HornRule& r : result) mine.push_back(to_rooted_set(r));
        std::sort(mine.begin(), mine.end());
        agree(mine == oracle::brute_critical_circuits(oracle::brute_a_family(rules)),
              "critical rules differ from the critical circuits");
      }
      const RuleFormat f = format == "json" ? RuleFormat::Json : RuleFormat::Line;
      if (!out_path.empty()) {
        write_rule_file(out_path, result, f);
      } else if (common.json) {
        std::cout << serialize_rule_set(result, RuleFormat::Json) << "\n";
      } else {
        std::cout << serialize_rule_set(result, f);
      }
      return kTrue;
    }

    if (*equiv) {
      const RuleSet a = load(common.rules_path);
      const RuleSet b = load(other_path);
      const bool same = same_antimatroid(a, b);
      if (common.oracle) {
        require_oracle_size(a);
        agree(same == (oracle::brute_a_family(a) == oracle::brute_a_family(b)), "antimatroid equivalence");
      }
      return emit_set_result(same, "equivalent");
    }

    if (*implicates) {
      const RuleSet rules = load(common.rules_path);
      RuleSet result = prime ? prime_implicates(rules, cap)
                       : resolution_only ? resolution_closure(rules, cap)
                                         : all_nontrivial_implicates(rules, cap);
      result = result.canonical();
      result.set_labels(rules.labels());
      if (common.oracle) {
        require_oracle_size(rules);
        const auto fam = oracle::brute_a_family(rules);
        for (const HornRule& r : result) agree(oracle::brute_implicate(fam, r), r.to_string() + " is not an implicate");
        agree(oracle::brute_k_family(result) == fam, "K(implicates) differs from A(R)");
      }
      if (common.json) {
        std::cout << json{{"count", result.size()}, {"rules", rules_json(result)}}.dump() << "\n";
      } else {
        for (const HornRule& r : result) std::cout << show(r, rules) << "\n";
      }
      return kTrue;
    }

    if (*circuits_cmd) {
      const RuleSet rules = load(common.rules_path);
      const std::vector<RootedSet> result = circuits(rules, cap);
      if (common.oracle) {
        require_oracle_size(rules);
        agree(result == oracle::brute_circuits(oracle::brute_a_family(rules)), "circuits differ");
      }
      if (common.json) {
        json a = json::array();
        for (const RootedSet& c : result) a.push_back(json{{"carrier", c.carrier.elements()}, {"root", c.root}});
        std::cout << json{{"count", result.size()}, {"circuits", a}}.dump() << "\n";
      } else {
        for (const RootedSet& c : result) std::cout << "(" << show(c.carrier, rules) << "," << rules.label(c.root) << ")\n";
      }
      return kTrue;
    }

    auto finish_spec = [&] {
      spec.seed = seed;
      if (spec.ground_size < 2) throw InputError("--n must be at least 2");
      spec.min_antecedent = min_size.value_or(1);
      spec.max_antecedent = max_size.value_or(spec.ground_size - 1);
    };

    if (*gen) {
      finish_spec();
      const RuleSet rules = random_rule_set(spec);
      const RuleFormat f = format == "json" ? RuleFormat::Json : RuleFormat::Line;
      if (!out_path.empty()) {
        write_rule_file(out_path, rules, f);
      } else {
        std::cout << serialize_rule_set(rules, f);
      }
      return kTrue;
    }

    if (*simulate) {
      SimulationConfig cfg;
      cfg.policy.direction = policy == "asc" ? Direction::Ascending : Direction::Descending;
      cfg.options = SessionOptions{criticalize, proper_guard, koppen};
      std::vector<InferenceMode> modes;
      if (mode != "revised") modes.push_back(InferenceMode::Original);
      if (mode != "original") modes.push_back(InferenceMode::Revised);

      if (repeat > 0) {
        if (!target_path.empty()) throw InputError("--repeat uses random targets; drop --target");
        finish_spec();
        const RandomRuleSpec base = spec;
        std::vector<std::vector<std::uint64_t>> posed(repeat, std::vector<std::uint64_t>(modes.size()));
        std::atomic<std::size_t> next{0};
        std::mutex err_mu;
        std::exception_ptr failure;
        auto worker = [&] {
          for (std::size_t i; (i = next++) < repeat;) {
            try {
              RandomRuleSpec s = base;
              s.seed = base.seed + i;
              const RuleSet target = random_rule_set(s);
              for (std::size_t k = 0; k < modes.size(); ++k) {
                SimulationConfig c = cfg;
                c.mode = modes[k];
                c.fill_unreached = false;
                posed[i][k] = run_simulation(target, c).stats.posed;
              }
            } catch (...) {
              std::lock_guard lock(err_mu);
              failure = std::current_exception();
            }
          }
        };
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < std::min(jobs, repeat); ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
        if (failure) std::rethrow_exception(failure);

        json summary{{"instances", repeat}, {"n", base.ground_size}, {"m", base.rule_count},
                     {"antecedent_sizes", {base.min_antecedent, base.max_antecedent}},
                     {"policy", policy}, {"first_seed", base.seed}};
        std::vector<double> sums(modes.size(), 0.0);
        for (const auto& row : posed) {
          for (std::size_t k = 0; k < modes.size(); ++k) sums[k] += static_cast<double>(row[k]);
        }
        for (std::size_t k = 0; k < modes.size(); ++k) {
          summary[modes[k] == InferenceMode::Original ? "mean_posed_original" : "mean_posed_revised"] =
              sums[k] / static_cast<double>(repeat);
        }
        if (modes.size() == 2) {
          double rate_sum = 0.0;
          std::size_t violations = 0;
          for (const auto& row : posed) {
            rate_sum += cut_rate(row[0], row[1]);
            if (row[1] > row[0]) ++violations;
          }
          summary["mean_cut_rate"] = rate_sum / static_cast<double>(repeat);
          summary["cut_rate_of_means"] = cut_rate(static_cast<std::uint64_t>(sums[0]), static_cast<std::uint64_t>(sums[1]));
          summary["dominance_violations"] = violations;
        }
        std::cout << summary.dump(common.json ? -1 : 2) << "\n";
        return kTrue;
      }

      RuleSet target;
      if (target_path.empty()) {
        finish_spec();
        target = random_rule_set(spec);
      } else {
        target = load(target_path);
      }
      std::vector<SimulationResult> results;
      for (InferenceMode m : modes) {
        SimulationConfig c = cfg;
        c.mode = m;
        results.push_back(run_simulation(target, c));
      }
      json out = json::object();
      for (std::size_t k = 0; k < modes.size(); ++k) {
        out[modes[k] == InferenceMode::Original ? "original" : "revised"] = stats_json(results[k].stats);
      }
      if (modes.size() == 2 && results[0].stats.posed > 0) {
        out["cut_rate"] = cut_rate(results[0].stats.posed, results[1].stats.posed);
      }
      std::cout << out.dump(common.json ? -1 : 2) << "\n";
      if (trace) {
        std::cout << std::left << std::setw(24) << "query";
        for (InferenceMode m : modes) std::cout << std::setw(22) << (m == InferenceMode::Original ? "original" : "revised");
        std::cout << "\n";
        const std::size_t rows = results.front().trace.size();
        for (std::size_t i = 0; i < rows; ++i) {
          std::cout << std::setw(24) << show(results.front().trace[i].query, target);
          for (const SimulationResult& r : results) std::cout << std::setw(22) << short_class(r.trace[i].classification);
          std::cout << "\n";
        }
      }
      return kTrue;
    }

    if (*cnf) {
      const RuleSet rules = load(common.rules_path);
      const std::string text = export_horn_cnf(rules);
      if (out_path.empty()) {
        std::cout << text;
      } else {
        std::ofstream(out_path) << text;
      }
      return kTrue;
    }

    if (*serve) {
      SessionService service(ServiceOptions{data_dir});
      for (const std::string& e : service.load_errors()) std::cerr << "warning: " << e << "\n";
      HttpServer server(service);
      const BindAddress addr = parse_bind_address(bind);
      const int port = server.bind(addr);
      std::cerr << "listening on " << addr.host << ":" << port << " (data in " << data_dir << ", "
                << service.session_ids().size() << " sessions restored)\n";
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      server.run();
      g_server = nullptr;
      return kTrue;
    }
  } catch (const Divergence& e) {
    std::cerr << e.what() << "\n";
    return kDivergence;
  } catch (const ResourceLimitError& e) {
    std::cerr << "error: " << e.what() << " (" << e.partial_size() << " rules so far)\n";
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  }
  return kUsage;
}
