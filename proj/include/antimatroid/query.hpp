#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "antimatroid/closure.hpp"
#include "antimatroid/rules.hpp"

namespace antimatroid {

// A query (A, q) asks the expert whether every learner who fails all of A
// also fails q. Queries are always nontrivial (q not in A).
using Query = HornRule;

inline std::size_t stage(const Query& q) { return q.antecedent.size(); }

enum class Direction { Ascending, Descending };

// Queries are grouped into stages by |A| (ascending or descending); inside a
// stage they are ordered by antecedent (lexicographic on the sorted element
// list), then by consequent.
struct SelectionPolicy {
  Direction direction = Direction::Ascending;
};

// Walks the n * 2^(n-1) nontrivial queries in policy order without
// materializing them.
class QueryCursor {
 public:
  QueryCursor(std::size_t ground_size, SelectionPolicy policy);

  bool at_end() const noexcept { return at_end_; }
  // Position of the current query in policy order.
  std::uint64_t index() const noexcept { return index_; }
  std::size_t current_stage() const noexcept { return stage_; }
  Query current() const;
  void advance();

  static std::uint64_t universe_size(std::size_t ground_size);

 private:
  bool start_stage(std::size_t k);
  bool next_combination();
  bool seek_consequent(Element from);

  std::size_t n_;
  SelectionPolicy policy_;
  std::size_t stage_ = 0;
  std::vector<Element> combination_;
  ElementSet antecedent_;
  Element consequent_ = 0;
  std::uint64_t index_ = 0;
  bool at_end_ = false;
};

std::vector<Query> query_universe(std::size_t ground_size, SelectionPolicy policy = {});

enum class Classification {
  PosedYes,
  PosedNo,
  GuardRejected,  // expert said yes, but the answer would have made Q unreachable
  PositiveInference,
  NegativeInference,
  Unreached,
};

std::string_view to_string(Classification c);

struct TraceEntry {
  std::uint64_t query_id = 0;
  Query query;
  Classification classification = Classification::Unreached;
  // For negative inferences: the no-answer that is an implicate of the
  // enlarged family.
  std::optional<Query> witness;
};

struct SessionOptions {
  bool criticalize = false;   // replace P by its critical rules after each yes
  bool proper_guard = false;  // accept a yes only if Q stays in A(P + query)
  bool koppen_stop = false;   // stop when a whole new stage is already determined
};

struct SessionConfig {
  std::size_t ground_size = 0;
  InferenceMode mode = InferenceMode::Revised;
  SelectionPolicy policy;
  SessionOptions options;
};

enum class DoneReason { None, Exhausted, KoppenCriterion, TargetReached };

std::string_view to_string(DoneReason r);

struct SessionCounters {
  std::uint64_t posed = 0;
  std::uint64_t yes = 0;
  std::uint64_t no = 0;
  std::uint64_t inferred_positive = 0;
  std::uint64_t inferred_negative = 0;
  std::uint64_t guard_rejected = 0;

  bool operator==(const SessionCounters&) const = default;
};

struct PendingQuery {
  std::uint64_t id = 0;
  Query query;
};

// State machine of the QUERY protocol: P (yes answers), N (no answers) and a
// cursor over the query universe. Inference is evaluated lazily at cursor
// time: a query is skipped as a positive inference when it is an implicate
// of K(P) / A(P), and as a negative inference when some rule of N is an
// implicate of K(P + query) / A(P + query).
class QuerySession {
 public:
  explicit QuerySession(SessionConfig config);
  ~QuerySession();
  QuerySession(QuerySession&&) noexcept;
  QuerySession& operator=(QuerySession&&) noexcept;

  const SessionConfig& config() const noexcept { return config_; }
  const RuleSet& positives() const noexcept { return positives_; }
  const std::vector<Query>& negatives() const noexcept { return negatives_; }
  const SessionCounters& counters() const noexcept { return counters_; }
  const std::vector<TraceEntry>& trace() const noexcept { return trace_; }
  const std::optional<PendingQuery>& pending() const noexcept { return pending_; }
  bool done() const noexcept { return reason_ != DoneReason::None; }
  DoneReason done_reason() const noexcept { return reason_; }
  // Bumped whenever P changes.
  std::uint64_t positives_version() const noexcept { return positives_version_; }

  bool is_positive_inference(const Query& query) const;
  std::optional<Query> negative_witness(const Query& query) const;
  bool is_negative_inference(const Query& query) const { return negative_witness(query).has_value(); }

  // Returns the pending query if one is outstanding; otherwise classifies and
  // skips inferred queries and returns the first undetermined one. Returns
  // nullopt once the session is done.
  std::optional<PendingQuery> next_query();

  // Throws StateError unless query_id is the pending query.
  Classification record_answer(std::uint64_t query_id, bool yes);

  // Ends the session early (used by simulations once the target is found).
  void finish(DoneReason reason);

  // Stage-ahead scan used by Koppen's stopping rule.
  bool stage_has_undetermined(std::size_t stage) const;

  // Once done: the queries the cursor never reached, as Unreached entries.
  std::vector<TraceEntry> unreached() const;

 private:
  class InferenceCache;

  void validate_query(const Query& query) const;
  InferenceCache& cache() const;

  SessionConfig config_;
  RuleSet positives_;
  std::vector<Query> negatives_;
  SessionCounters counters_;
  std::vector<TraceEntry> trace_;
  std::optional<PendingQuery> pending_;
  QueryCursor cursor_;
  DoneReason reason_ = DoneReason::None;
  std::uint64_t positives_version_ = 0;
  std::size_t koppen_checked_stage_ = 0;
  mutable std::unique_ptr<InferenceCache> cache_;
};

struct SessionStats {
  std::uint64_t posed = 0;
  std::uint64_t yes_count = 0;
  std::uint64_t no_count = 0;
  std::uint64_t inferred_positive = 0;
  std::uint64_t inferred_negative = 0;
  std::uint64_t guard_rejected = 0;
  DoneReason terminated = DoneReason::None;
};

SessionStats stats_of(const QuerySession& session);

struct SimulationConfig {
  InferenceMode mode = InferenceMode::Revised;
  SelectionPolicy policy;
  SessionOptions options;
  // Append Unreached entries for the rest of the universe after stopping.
  bool fill_unreached = true;
};

struct SimulationResult {
  SessionStats stats;
  std::vector<TraceEntry> trace;
  RuleSet positives;
};

// Runs QUERY against an idealistic expert who says yes exactly to the
// implicates of A(target). Stops when K(P) = A(target) (Original) or
// A(P) = A(target) (Revised), checked after every answer. Brute-force
// family comparison limits this to n <= 20.
SimulationResult run_simulation(const RuleSet& target, const SimulationConfig& config);

struct RandomRuleSpec {
  std::size_t ground_size = 10;
  std::size_t rule_count = 10;
  std::size_t min_antecedent = 1;
  std::size_t max_antecedent = 9;
  std::uint64_t seed = 0;
};

// m nontrivial rules: consequent uniform, antecedent size uniform in the
// range, antecedent drawn without replacement from Q - q. Deterministic in
// the seed on every platform.
RuleSet random_rule_set(const RandomRuleSpec& spec);

// (n1 - n2) / n1 * 100. Throws InputError when n1 == 0.
double cut_rate(std::uint64_t n1, std::uint64_t n2);

}  // namespace antimatroid
