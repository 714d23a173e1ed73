#include "antimatroid/query.hpp"

#include <limits>
#include <numeric>
#include <random>
#include <utility>

#include "antimatroid/errors.hpp"
#include "antimatroid/minimization.hpp"
#include "antimatroid/oracle.hpp"

namespace antimatroid {

// ---- cursor ---------------------------------------------------------------

QueryCursor::QueryCursor(std::size_t ground_size, SelectionPolicy policy)
    : n_(ground_size), policy_(policy), antecedent_(ground_size) {
  if (n_ == 0) {
    at_end_ = true;
    return;
  }
  at_end_ = !start_stage(policy_.direction == Direction::Ascending ? 0 : n_ - 1);
}

std::uint64_t QueryCursor::universe_size(std::size_t ground_size) {
  if (ground_size == 0) return 0;
  if (ground_size > 63) throw InputError("query universe too large for n=" + std::to_string(ground_size));
  return static_cast<std::uint64_t>(ground_size) << (ground_size - 1);
}

Query QueryCursor::current() const {
  if (at_end_) throw StateError("query cursor is exhausted");
  return Query(antecedent_, consequent_);
}

bool QueryCursor::start_stage(std::size_t k) {
  stage_ = k;
  combination_.resize(k);
  std::iota(combination_.begin(), combination_.end(), Element{0});
  antecedent_ = ElementSet(n_, combination_);
  return seek_consequent(0);
}

bool QueryCursor::next_combination() {
  const std::size_t k = combination_.size();
  for (std::size_t i = k; i-- > 0;) {
    if (combination_[i] < n_ - k + i) {
      ++combination_[i];
      for (std::size_t j = i + 1; j < k; ++j) combination_[j] = combination_[j - 1] + 1;
      antecedent_ = ElementSet(n_, combination_);
      return true;
    }
  }
  return false;
}

bool QueryCursor::seek_consequent(Element from) {
  for (Element q = from; q < n_; ++q) {
    if (!antecedent_.contains(q)) {
      consequent_ = q;
      return true;
    }
  }
  return false;
}

void QueryCursor::advance() {
  if (at_end_) return;
  ++index_;
  if (seek_consequent(consequent_ + 1)) return;
  if (next_combination() && seek_consequent(0)) return;
  if (policy_.direction == Direction::Ascending) {
    if (stage_ + 1 < n_ && start_stage(stage_ + 1)) return;
  } else {
    if (stage_ > 0 && start_stage(stage_ - 1)) return;
  }
  at_end_ = true;
}

std::vector<Query> query_universe(std::size_t ground_size, SelectionPolicy policy) {
  std::vector<Query> out;
  out.reserve(QueryCursor::universe_size(ground_size));
  for (QueryCursor c(ground_size, policy); !c.at_end(); c.advance()) out.push_back(c.current());
  return out;
}

std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::PosedYes: return "posed:yes";
    case Classification::PosedNo: return "posed:no";
    case Classification::GuardRejected: return "posed:yes-rejected";
    case Classification::PositiveInference: return "inferred:positive";
    case Classification::NegativeInference: return "inferred:negative";
    case Classification::Unreached: return "unreached";
  }
  return "unknown";
}

std::string_view to_string(DoneReason r) {
  switch (r) {
    case DoneReason::None: return "running";
    case DoneReason::Exhausted: return "universe determined";
    case DoneReason::KoppenCriterion: return "stage fully inferred";
    case DoneReason::TargetReached: return "target reached";
  }
  return "unknown";
}

// ---- inference cache ------------------------------------------------------

// Per-P state reused across queries. For every no-answer (B, p) we keep
// what its implicate test looks like under P alone; adding the candidate
// (A, q) to P usually leaves that picture untouched, which is detected in
// O(|A|) without rerunning a closure.
class QuerySession::InferenceCache {
 public:
  InferenceCache(const RuleSet& positives, InferenceMode mode)
      : positives_(positives), engine_(positives), mode_(mode) {}

  bool positive(const Query& query) const {
    return mode_ == InferenceMode::Original ? engine_.implicate_k(query) : engine_.implicate_a(query);
  }

  void sync(const std::vector<Query>& negatives) {
    while (witnesses_.size() < negatives.size()) add_witness(negatives[witnesses_.size()]);
  }

  std::optional<Query> negative(const Query& query) const {
    std::optional<ClosureEngine> extended;  // engine for P + query, built on demand
    for (const Witness& w : witnesses_) {
      if (w.already_implied) return w.rule;
      if (mode_ == InferenceMode::Original) {
        // w.base = tau_P(B) misses p. The new rule can only fire if A is
        // inside that closure; then the closure grows by q and is rerun.
        if (!query.antecedent.is_subset_of(w.base)) continue;
        if (engine_.tau_k(w.base.with(query.consequent)).contains(w.rule.consequent)) return w.rule;
      } else {
        // w.base = interior_P(Q - B) contains p. If the recorded addition
        // order already adds some element of A before q, it stays valid
        // under P + query and the interior is unchanged.
        const Element q = query.consequent;
        const std::uint32_t pq = w.position[q];
        if (pq == kUnplaced) continue;
        bool order_survives = false;
        query.antecedent.for_each([&](Element a) {
          if (w.position[a] < pq) order_survives = true;
        });
        if (order_survives) continue;
        if (!extended) extended.emplace(with_rule(positives_, query));
        if (!extended->interior_a(w.outside).interior.contains(w.rule.consequent)) return w.rule;
      }
    }
    return std::nullopt;
  }

 private:
  static constexpr std::uint32_t kUnplaced = std::numeric_limits<std::uint32_t>::max();

  struct Witness {
    Query rule;
    ElementSet base;
    ElementSet outside;                   // Q - B (revised mode)
    std::vector<std::uint32_t> position;  // addition index in base (revised mode)
    bool already_implied = false;
  };

  void add_witness(const Query& rule) {
    Witness w;
    w.rule = rule;
    if (mode_ == InferenceMode::Original) {
      w.base = engine_.tau_k(rule.antecedent);
      w.already_implied = w.base.contains(rule.consequent);
    } else {
      w.outside = rule.antecedent.complement();
      ClosureResult r = engine_.interior_a(w.outside);
      w.position.assign(positives_.ground_size(), kUnplaced);
      for (std::uint32_t i = 0; i < r.addition_order.size(); ++i) w.position[r.addition_order[i]] = i;
      w.already_implied = !r.interior.contains(rule.consequent);
      w.base = std::move(r.interior);
    }
    witnesses_.push_back(std::move(w));
  }

  RuleSet positives_;
  ClosureEngine engine_;
  InferenceMode mode_;
  std::vector<Witness> witnesses_;
};

// ---- session --------------------------------------------------------------

QuerySession::QuerySession(SessionConfig config)
    : config_(config),
      positives_(config.ground_size),
      cursor_(config.ground_size, config.policy) {
  if (config_.ground_size == 0) throw InputError("ground set must be nonempty");
}

QuerySession::~QuerySession() = default;
QuerySession::QuerySession(QuerySession&&) noexcept = default;
QuerySession& QuerySession::operator=(QuerySession&&) noexcept = default;

QuerySession::InferenceCache& QuerySession::cache() const {
  if (!cache_) cache_ = std::make_unique<InferenceCache>(positives_, config_.mode);
  cache_->sync(negatives_);
  return *cache_;
}

void QuerySession::validate_query(const Query& query) const {
  if (query.ground_size() != config_.ground_size || query.consequent >= config_.ground_size) {
    throw InputError("query " + query.to_string() + " is not over the session's ground set");
  }
  if (is_trivial(query)) throw PreconditionError("query " + query.to_string() + " is trivial");
}

bool QuerySession::is_positive_inference(const Query& query) const {
  validate_query(query);
  return cache().positive(query);
}

std::optional<Query> QuerySession::negative_witness(const Query& query) const {
  validate_query(query);
  if (negatives_.empty()) return std::nullopt;
  return cache().negative(query);
}

bool QuerySession::stage_has_undetermined(std::size_t s) const {
  QueryCursor scan(config_.ground_size, config_.policy);
  while (!scan.at_end() && scan.current_stage() != s) scan.advance();
  for (; !scan.at_end() && scan.current_stage() == s; scan.advance()) {
    const Query q = scan.current();
    if (!is_positive_inference(q) && !is_negative_inference(q)) return true;
  }
  return false;
}

std::optional<PendingQuery> QuerySession::next_query() {
  if (done()) return std::nullopt;
  if (pending_) return pending_;
  while (true) {
    if (cursor_.at_end()) {
      reason_ = DoneReason::Exhausted;
      return std::nullopt;
    }
    const std::size_t s = cursor_.current_stage();
    if (config_.options.koppen_stop && config_.policy.direction == Direction::Ascending && s >= 2 &&
        s != koppen_checked_stage_) {
      koppen_checked_stage_ = s;
      if (!stage_has_undetermined(s)) {
        reason_ = DoneReason::KoppenCriterion;
        return std::nullopt;
      }
    }
    Query q = cursor_.current();
    if (is_positive_inference(q)) {
      trace_.push_back({cursor_.index(), std::move(q), Classification::PositiveInference, std::nullopt});
      ++counters_.inferred_positive;
    } else if (auto witness = negative_witness(q)) {
      trace_.push_back({cursor_.index(), std::move(q), Classification::NegativeInference, std::move(witness)});
      ++counters_.inferred_negative;
    } else {
      pending_ = PendingQuery{cursor_.index(), std::move(q)};
      return pending_;
    }
    cursor_.advance();
  }
}

Classification QuerySession::record_answer(std::uint64_t query_id, bool yes) {
  if (done()) throw StateError("session is finished");
  if (!pending_) throw StateError("no query is pending");
  if (pending_->id != query_id) {
    throw StateError("query " + std::to_string(query_id) + " is not pending (pending is " +
                     std::to_string(pending_->id) + ")");
  }
  Query q = std::move(pending_->query);
  pending_.reset();

  Classification c;
  ++counters_.posed;
  if (yes) {
    ++counters_.yes;
    RuleSet candidate = with_rule(positives_, q);
    if (config_.options.proper_guard &&
        !ClosureEngine(candidate).member_a(ElementSet::full(config_.ground_size))) {
      ++counters_.guard_rejected;
      c = Classification::GuardRejected;
    } else {
      positives_ = config_.options.criticalize ? critical_rules(candidate) : std::move(candidate);
      ++positives_version_;
      cache_.reset();
      c = Classification::PosedYes;
    }
  } else {
    ++counters_.no;
    negatives_.push_back(q);
    c = Classification::PosedNo;
  }
  trace_.push_back({query_id, std::move(q), c, std::nullopt});
  cursor_.advance();
  return c;
}

void QuerySession::finish(DoneReason reason) {
  if (reason == DoneReason::None) throw PreconditionError("finish needs a reason");
  if (done()) return;
  pending_.reset();
  reason_ = reason;
}

std::vector<TraceEntry> QuerySession::unreached() const {
  std::vector<TraceEntry> out;
  if (!done()) return out;
  for (QueryCursor c = cursor_; !c.at_end(); c.advance()) {
    out.push_back({c.index(), c.current(), Classification::Unreached, std::nullopt});
  }
  return out;
}

SessionStats stats_of(const QuerySession& session) {
  const SessionCounters& c = session.counters();
  return SessionStats{c.posed,         c.yes,          c.no, c.inferred_positive, c.inferred_negative,
                      c.guard_rejected, session.done_reason()};
}

// ---- simulation -----------------------------------------------------------

SimulationResult run_simulation(const RuleSet& target, const SimulationConfig& config) {
  const std::size_t n = target.ground_size();
  QuerySession session(SessionConfig{n, config.mode, config.policy, config.options});
  const ClosureEngine expert(target);

  std::optional<oracle::Family> target_family;
  std::optional<RuleSet> target_critical;
  if (config.mode == InferenceMode::Original) {
    target_family = oracle::brute_a_family(target);
  } else {
    target_critical = critical_rules(target);
  }
  auto reached = [&] {
    if (target_family) return oracle::brute_k_family(session.positives()) == *target_family;
    return critical_rules(session.positives()).rules() == target_critical->rules();
  };

  std::optional<std::uint64_t> checked_version;
  while (auto q = session.next_query()) {
    session.record_answer(q->id, expert.implicate_a(q->query));
    if (checked_version == session.positives_version()) continue;
    checked_version = session.positives_version();
    if (reached()) session.finish(DoneReason::TargetReached);
  }

  SimulationResult result{stats_of(session), session.trace(), session.positives()};
  if (config.fill_unreached) {
    auto rest = session.unreached();
    result.trace.insert(result.trace.end(), std::make_move_iterator(rest.begin()),
                        std::make_move_iterator(rest.end()));
  }
  return result;
}

// ---- generators -----------------------------------------------------------

namespace {

// Unbiased draw from [0, bound) using only the engine's raw output, so the
// sequence is identical across standard libraries.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % bound;
}

}  // namespace

RuleSet random_rule_set(const RandomRuleSpec& spec) {
  const std::size_t n = spec.ground_size;
  if (n == 0) throw InputError("ground set must be nonempty");
  if (spec.min_antecedent > spec.max_antecedent || spec.max_antecedent > n - 1) {
    throw InputError("antecedent sizes must satisfy min <= max <= n-1");
  }
  std::mt19937_64 rng(spec.seed);
  RuleSet out(n);
  std::vector<Element> pool;
  for (std::size_t i = 0; i < spec.rule_count; ++i) {
    const auto q = static_cast<Element>(uniform_below(rng, n));
    const std::size_t k =
        spec.min_antecedent + uniform_below(rng, spec.max_antecedent - spec.min_antecedent + 1);
    pool.clear();
    for (Element x = 0; x < n; ++x) {
      if (x != q) pool.push_back(x);
    }
    for (std::size_t j = 0; j < k; ++j) {
      const std::size_t pick = j + uniform_below(rng, pool.size() - j);
      std::swap(pool[j], pool[pick]);
    }
    out.add(HornRule(ElementSet(n, std::span<const Element>(pool.data(), k)), q));
  }
  return out;
}

double cut_rate(std::uint64_t n1, std::uint64_t n2) {
  if (n1 == 0) throw InputError("cut rate is undefined when the baseline count is 0");
  return (static_cast<double>(n1) - static_cast<double>(n2)) / static_cast<double>(n1) * 100.0;
}

}  // namespace antimatroid
