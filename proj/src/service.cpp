#include "antimatroid/service.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <fstream>
#include <mutex>
#include <random>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "antimatroid/enumeration.hpp"
#include "antimatroid/errors.hpp"
#include "antimatroid/io.hpp"
#include "antimatroid/query.hpp"

namespace antimatroid {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

ServiceResponse error_response(int status, const std::string& message) {
  return {status, json{{"error", message}, {"status", status}}.dump()};
}

ServiceResponse ok(const json& body, int status = 200) { return {status, body.dump()}; }

std::string timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  const auto ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  char out[40];
  std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(ms));
  return out;
}

std::string new_session_id() {
  static std::mutex mu;
  static std::mt19937_64 rng{std::random_device{}()};
  std::lock_guard lock(mu);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(rng()));
  return buf;
}

// Appends one line and forces it to stable storage before returning.
void append_durably(const fs::path& path, const std::string& line) {
  const int fd = ::open(path.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
  if (fd < 0) throw std::runtime_error("open " + path.string() + ": " + std::strerror(errno));
  std::string data = line + "\n";
  const char* p = data.data();
  std::size_t left = data.size();
  while (left > 0) {
    const ssize_t w = ::write(fd, p, left);
    if (w < 0) {
      if (errno == EINTR) continue;
      const int err = errno;
      ::close(fd);
      throw std::runtime_error("write " + path.string() + ": " + std::strerror(err));
    }
    p += w;
    left -= static_cast<std::size_t>(w);
  }
  if (::fsync(fd) != 0) {
    const int err = errno;
    ::close(fd);
    throw std::runtime_error("fsync " + path.string() + ": " + std::strerror(err));
  }
  ::close(fd);
}

void sync_directory(const fs::path& dir) {
  const int fd = ::open(dir.c_str(), O_RDONLY | O_DIRECTORY | O_CLOEXEC);
  if (fd < 0) return;
  ::fsync(fd);
  ::close(fd);
}

std::string mode_name(InferenceMode m) { return m == InferenceMode::Original ? "original" : "revised"; }
std::string policy_name(Direction d) { return d == Direction::Ascending ? "asc" : "desc"; }

std::vector<Element> ids(const ElementSet& s) { return s.elements(); }

std::string label_of(const std::vector<std::string>& labels, Element x) {
  return x < labels.size() ? labels[x] : std::to_string(x);
}

json rule_json(const HornRule& r) { return json{{"if", ids(r.antecedent)}, {"then", r.consequent}}; }

HornRule rule_from_json(const json& j, std::size_t n) {
  ElementSet a(n);
  for (const auto& x : j.at("if")) a.insert(x.get<Element>());
  const auto q = j.at("then").get<Element>();
  if (q >= n) throw InputError("consequent out of range");
  return HornRule(std::move(a), q);
}

json query_json(std::uint64_t id, const Query& q, const std::vector<std::string>& labels) {
  std::vector<std::string> antecedent_labels;
  q.antecedent.for_each([&](Element x) { antecedent_labels.push_back(label_of(labels, x)); });
  const std::string consequent_label = label_of(labels, q.consequent);
  return json{{"id", id},
              {"stage", stage(q)},
              {"antecedent", ids(q.antecedent)},
              {"consequent", q.consequent},
              {"antecedent_labels", antecedent_labels},
              {"consequent_label", consequent_label},
              {"prompt", render_prompt(antecedent_labels, consequent_label)}};
}

json trace_json(const TraceEntry& e) {
  json j{{"query_id", e.query_id}, {"query", rule_json(e.query)},
         {"classification", std::string(to_string(e.classification))}};
  if (e.witness) j["witness"] = rule_json(*e.witness);
  return j;
}

bool is_posed(Classification c) {
  return c == Classification::PosedYes || c == Classification::PosedNo ||
         c == Classification::GuardRejected;
}

}  // namespace

std::string render_prompt(const std::vector<std::string>& antecedent_labels,
                          const std::string& consequent_label) {
  if (antecedent_labels.empty()) {
    return "Is question " + consequent_label + " failed by every learner?";
  }
  std::string list;
  for (std::size_t i = 0; i < antecedent_labels.size(); ++i) {
    if (i > 0) list += i + 1 == antecedent_labels.size() ? " and " : ", ";
    list += antecedent_labels[i];
  }
  const char* noun = antecedent_labels.size() == 1 ? "question " : "questions ";
  return "Suppose a learner gets " + std::string(noun) + list +
         " wrong. Must that learner also get question " + consequent_label + " wrong?";
}

// ---- session entries ------------------------------------------------------

struct Snapshot {
  std::string state;
  std::string next;
  RuleSet positives;
};

struct SessionService::Entry {
  Entry(std::string id_, fs::path path, json config_, SessionConfig session_config,
        std::vector<std::string> labels_)
      : id(std::move(id_)),
        log_path(std::move(path)),
        config(std::move(config_)),
        labels(std::move(labels_)),
        session(session_config) {}

  std::string id;
  fs::path log_path;
  json config;
  std::vector<std::string> labels;

  std::mutex write_mutex;
  QuerySession session;
  std::size_t logged_trace = 0;  // trace entries already present in the log
  bool removed = false;

  std::shared_ptr<const Snapshot> snapshot;

  std::shared_ptr<const Snapshot> read() const { return std::atomic_load(&snapshot); }
};

namespace {

using Entry = SessionService::Entry;

json progress_json(const QuerySession& s) {
  const std::uint64_t universe = QueryCursor::universe_size(s.config().ground_size);
  const std::uint64_t classified = s.trace().size();
  return json{{"universe", universe},
              {"classified", classified},
              {"remaining", universe - classified},
              {"posed", s.counters().posed}};
}

json next_json(const Entry& e) {
  const QuerySession& s = e.session;
  json j{{"progress", progress_json(s)}};
  if (const auto& p = s.pending()) {
    j["done"] = false;
    j["query"] = query_json(p->id, p->query, e.labels);
  } else {
    j["done"] = true;
    j["reason"] = std::string(to_string(s.done_reason()));
  }
  return j;
}

json state_json(const Entry& e, std::size_t recent) {
  const QuerySession& s = e.session;
  const SessionCounters& c = s.counters();
  json positives = json::array();
  for (const HornRule& r : s.positives()) positives.push_back(rule_json(r));
  json negatives = json::array();
  for (const HornRule& r : s.negatives()) negatives.push_back(rule_json(r));
  std::vector<const TraceEntry*> inferred;
  for (const TraceEntry& t : s.trace()) {
    if (!is_posed(t.classification)) inferred.push_back(&t);
  }
  json recent_log = json::array();
  const std::size_t from = inferred.size() > recent ? inferred.size() - recent : 0;
  for (std::size_t i = from; i < inferred.size(); ++i) recent_log.push_back(trace_json(*inferred[i]));

  json j{{"id", e.id},
         {"config", e.config},
         {"done", s.done()},
         {"reason", std::string(to_string(s.done_reason()))},
         {"positives", positives},
         {"negatives", negatives},
         {"counters",
          {{"posed", c.posed},
           {"yes", c.yes},
           {"no", c.no},
           {"inferred_positive", c.inferred_positive},
           {"inferred_negative", c.inferred_negative},
           {"guard_rejected", c.guard_rejected}}},
         {"progress", progress_json(s)},
         {"recent_inferences", recent_log}};
  j["pending"] = s.pending() ? query_json(s.pending()->id, s.pending()->query, e.labels) : json(nullptr);
  return j;
}

void publish(Entry& e, std::size_t recent) {
  auto snap = std::make_shared<Snapshot>();
  snap->state = state_json(e, recent).dump();
  snap->next = next_json(e).dump();
  snap->positives = e.session.positives();
  if (!e.labels.empty()) snap->positives.set_labels(e.labels);
  std::atomic_store(&e.snapshot, std::shared_ptr<const Snapshot>(std::move(snap)));
}

// Moves the cursor to the next undetermined query and logs every query it
// skipped on the way.
void advance_and_log(Entry& e) {
  e.session.next_query();
  const auto& trace = e.session.trace();
  for (; e.logged_trace < trace.size(); ++e.logged_trace) {
    json ev = trace_json(trace[e.logged_trace]);
    ev["type"] = "inferred";
    ev["timestamp"] = timestamp();
    append_durably(e.log_path, ev.dump());
  }
}

struct ParsedConfig {
  SessionConfig session;
  std::vector<std::string> labels;
  json canonical;
};

ParsedConfig parse_config(const json& body, std::size_t max_n) {
  if (!body.is_object()) throw InputError("session config must be a JSON object");
  ParsedConfig out;
  if (body.contains("labels") && !body.at("labels").is_null()) {
    const json& l = body.at("labels");
    if (!l.is_array()) throw InputError("labels must be an array of strings");
    std::set<std::string> seen;
    for (const auto& x : l) {
      if (!x.is_string()) throw InputError("labels must be strings");
      std::string s = x.get<std::string>();
      if (s.empty()) throw InputError("labels must be nonempty");
      if (s.find_first_of(" \t\r\n,#{}") != std::string::npos) {
        throw InputError("label '" + s + "' contains whitespace, ',', '#' or braces");
      }
      if (!seen.insert(s).second) throw InputError("duplicate label '" + s + "'");
      out.labels.push_back(std::move(s));
    }
  }
  std::size_t n = out.labels.size();
  if (body.contains("n")) {
    const json& jn = body.at("n");
    if (!jn.is_number_integer() || jn.get<long long>() < 0) throw InputError("n must be a positive integer");
    n = jn.get<std::size_t>();
    if (!out.labels.empty() && out.labels.size() != n) {
      throw InputError("expected " + std::to_string(n) + " labels, got " + std::to_string(out.labels.size()));
    }
  }
  if (n == 0) throw InputError("n must be at least 1 (give n or a nonempty label list)");
  if (n > max_n) throw InputError("n must be at most " + std::to_string(max_n));

  const std::string mode = body.value("mode", std::string("revised"));
  if (mode == "original") {
    out.session.mode = InferenceMode::Original;
  } else if (mode == "revised") {
    out.session.mode = InferenceMode::Revised;
  } else {
    throw InputError("mode must be 'original' or 'revised'");
  }
  const std::string policy = body.value("policy", std::string("asc"));
  if (policy == "asc" || policy == "ascending") {
    out.session.policy.direction = Direction::Ascending;
  } else if (policy == "desc" || policy == "descending") {
    out.session.policy.direction = Direction::Descending;
  } else {
    throw InputError("policy must be 'asc' or 'desc'");
  }
  if (body.contains("options")) {
    const json& o = body.at("options");
    if (!o.is_object()) throw InputError("options must be an object");
    auto flag = [&](const char* key) {
      if (!o.contains(key)) return false;
      if (!o.at(key).is_boolean()) throw InputError(std::string("option ") + key + " must be boolean");
      return o.at(key).get<bool>();
    };
    out.session.options.criticalize = flag("criticalize");
    out.session.options.proper_guard = flag("proper_guard");
    out.session.options.koppen_stop = flag("koppen_stop");
  }
  out.session.ground_size = n;
  out.canonical = json{{"n", n},
                       {"labels", out.labels},
                       {"mode", mode_name(out.session.mode)},
                       {"policy", policy_name(out.session.policy.direction)},
                       {"options",
                        {{"criticalize", out.session.options.criticalize},
                         {"proper_guard", out.session.options.proper_guard},
                         {"koppen_stop", out.session.options.koppen_stop}}}};
  return out;
}

std::optional<bool> parse_answer(const json& a) {
  if (a.is_boolean()) return a.get<bool>();
  if (a.is_string()) {
    const std::string s = a.get<std::string>();
    if (s == "yes" || s == "YES" || s == "y") return true;
    if (s == "no" || s == "NO" || s == "n") return false;
  }
  return std::nullopt;
}

json answer_json(std::uint64_t query_id, bool yes, Classification c, const Entry& e) {
  return json{{"query_id", query_id},
              {"answer", yes ? "yes" : "no"},
              {"classification", std::string(to_string(c))},
              {"next", next_json(e)}};
}

}  // namespace

// ---- service --------------------------------------------------------------

SessionService::SessionService(ServiceOptions options) : options_(std::move(options)) {
  fs::create_directories(options_.data_dir);
  load_all();
}

SessionService::~SessionService() = default;

std::shared_ptr<SessionService::Entry> SessionService::find(const std::string& id) const {
  std::shared_lock lock(sessions_mutex_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

std::vector<std::string> SessionService::session_ids() const {
  std::shared_lock lock(sessions_mutex_);
  std::vector<std::string> out;
  for (const auto& [id, _] : sessions_) out.push_back(id);
  return out;
}

void SessionService::load_all() {
  for (const auto& file : fs::directory_iterator(options_.data_dir)) {
    if (file.path().extension() != ".jsonl") continue;
    const std::string id = file.path().stem().string();
    try {
      std::ifstream in(file.path(), std::ios::binary);
      std::stringstream buf;
      buf << in.rdbuf();
      const std::string text = buf.str();

      // A final line without its newline is a write that was never
      // acknowledged; drop it so later appends start on a clean line.
      std::size_t good = text.size();
      if (!text.empty() && text.back() != '\n') {
        const std::size_t nl = text.rfind('\n');
        good = nl == std::string::npos ? 0 : nl + 1;
        fs::resize_file(file.path(), good);
      }

      std::vector<json> events;
      std::size_t start = 0;
      while (start < good) {
        const std::size_t nl = text.find('\n', start);
        const std::string line = text.substr(start, nl - start);
        start = nl + 1;
        if (!line.empty()) events.push_back(json::parse(line));
      }
      if (events.empty() || events.front().value("type", "") != "config") {
        throw InputError("missing config record");
      }
      ParsedConfig cfg = parse_config(events.front().at("config"), options_.max_ground_size);
      auto entry = std::make_shared<Entry>(id, file.path(), cfg.canonical, cfg.session, cfg.labels);
      std::size_t logged = 0;
      for (std::size_t i = 1; i < events.size(); ++i) {
        const json& ev = events[i];
        const std::string type = ev.value("type", "");
        if (type == "inferred") {
          ++logged;
          continue;
        }
        if (type != "answer") throw InputError("unknown record type '" + type + "'");
        const auto qid = ev.at("query_id").get<std::uint64_t>();
        const auto pending = entry->session.next_query();
        if (!pending || pending->id != qid ||
            !(pending->query == rule_from_json(ev.at("query"), cfg.session.ground_size))) {
          throw InputError("answer to query " + std::to_string(qid) + " does not match the replayed session");
        }
        entry->session.record_answer(qid, ev.at("answer").get<bool>());
        ++logged;
      }
      entry->session.next_query();
      entry->logged_trace = std::min(logged, entry->session.trace().size());
      advance_and_log(*entry);
      publish(*entry, options_.recent_inferences);
      sessions_.emplace(id, std::move(entry));
    } catch (const std::exception& ex) {
      load_errors_.push_back(file.path().string() + ": " + ex.what());
    }
  }
}

ServiceResponse SessionService::create_session(const std::string& body) {
  ParsedConfig cfg;
  try {
    cfg = parse_config(body.empty() ? json::object() : json::parse(body), options_.max_ground_size);
  } catch (const json::exception& ex) {
    return error_response(400, std::string("invalid JSON: ") + ex.what());
  } catch (const InputError& ex) {
    return error_response(400, ex.what());
  }

  std::string id;
  fs::path path;
  do {
    id = new_session_id();
    path = options_.data_dir / (id + ".jsonl");
  } while (fs::exists(path));

  auto entry = std::make_shared<Entry>(id, path, cfg.canonical, cfg.session, cfg.labels);
  std::lock_guard write(entry->write_mutex);
  try {
    append_durably(path, json{{"type", "config"}, {"config", cfg.canonical}, {"timestamp", timestamp()}}.dump());
    sync_directory(options_.data_dir);
    advance_and_log(*entry);
  } catch (const std::exception& ex) {
    return error_response(500, ex.what());
  }
  publish(*entry, options_.recent_inferences);
  {
    std::unique_lock lock(sessions_mutex_);
    sessions_.emplace(id, entry);
  }
  return ok(json{{"id", id}, {"config", cfg.canonical}, {"next", next_json(*entry)}}, 201);
}

ServiceResponse SessionService::next(const std::string& id) const {
  auto e = find(id);
  if (!e) return error_response(404, "no session '" + id + "'");
  return {200, e->read()->next};
}

ServiceResponse SessionService::state(const std::string& id) const {
  auto e = find(id);
  if (!e) return error_response(404, "no session '" + id + "'");
  return {200, e->read()->state};
}

ServiceResponse SessionService::answer(const std::string& id, const std::string& body) {
  auto e = find(id);
  if (!e) return error_response(404, "no session '" + id + "'");

  std::uint64_t qid = 0;
  bool yes = false;
  try {
    const json j = json::parse(body);
    if (!j.is_object() || !j.contains("query_id") || !j.at("query_id").is_number_unsigned()) {
      return error_response(400, "body needs an unsigned integer 'query_id'");
    }
    qid = j.at("query_id").get<std::uint64_t>();
    const auto a = j.contains("answer") ? parse_answer(j.at("answer")) : std::nullopt;
    if (!a) return error_response(400, "'answer' must be true/false or \"yes\"/\"no\"");
    yes = *a;
  } catch (const json::exception& ex) {
    return error_response(400, std::string("invalid JSON: ") + ex.what());
  }

  std::lock_guard lock(e->write_mutex);
  if (e->removed) return error_response(404, "no session '" + id + "'");
  QuerySession& s = e->session;

  if (s.pending() && s.pending()->id == qid) {
    const Query q = s.pending()->query;
    Classification c;
    try {
      append_durably(e->log_path, json{{"type", "answer"},
                                       {"query_id", qid},
                                       {"query", rule_json(q)},
                                       {"answer", yes},
                                       {"timestamp", timestamp()}}
                                      .dump());
      c = s.record_answer(qid, yes);
      ++e->logged_trace;
      advance_and_log(*e);
    } catch (const std::exception& ex) {
      return error_response(500, ex.what());
    }
    publish(*e, options_.recent_inferences);
    return ok(answer_json(qid, yes, c, *e));
  }

  // A repeated delivery of an answer we already recorded is acknowledged
  // again without touching the session.
  for (const TraceEntry& t : s.trace()) {
    if (t.query_id != qid) continue;
    if (!is_posed(t.classification)) {
      return error_response(409, "query " + std::to_string(qid) + " was " +
                                     std::string(to_string(t.classification)) + " and never posed");
    }
    const bool recorded_yes = t.classification != Classification::PosedNo;
    if (recorded_yes != yes) {
      return error_response(409, "query " + std::to_string(qid) + " was already answered " +
                                     (recorded_yes ? "yes" : "no"));
    }
    return ok(answer_json(qid, yes, t.classification, *e));
  }
  if (s.done()) return error_response(409, "session is finished");
  return error_response(409, "query " + std::to_string(qid) + " is not pending (pending is " +
                                 std::to_string(s.pending()->id) + ")");
}

ServiceResponse SessionService::family(const std::string& id, std::optional<std::size_t> limit) const {
  auto e = find(id);
  if (!e) return error_response(404, "no session '" + id + "'");
  const auto snap = e->read();
  const std::size_t cap = limit.value_or(50);
  json members = json::array();
  std::uint64_t seen = 0;
  MemberEnumerator it(snap->positives);
  while (seen < options_.count_budget) {
    auto m = it.next();
    if (!m) break;
    if (seen < cap) members.push_back(ids(*m));
    ++seen;
  }
  const bool exhausted = seen < options_.count_budget || !it.next();
  json j{{"members", members}, {"limit", cap}, {"truncated", seen > cap || !exhausted}};
  if (exhausted) j["count"] = seen;
  return ok(j);
}

ServiceResponse SessionService::export_session(const std::string& id, const std::string& format) const {
  auto e = find(id);
  if (!e) return error_response(404, "no session '" + id + "'");
  const auto snap = e->read();
  if (format.empty() || format == "rules") return {200, serialize_rule_set(snap->positives), "text/plain"};
  if (format == "json") return {200, serialize_rule_set(snap->positives, RuleFormat::Json)};
  if (format == "cnf") return {200, export_horn_cnf(snap->positives), "text/plain"};
  return error_response(400, "format must be rules, json or cnf");
}

ServiceResponse SessionService::remove(const std::string& id) {
  std::shared_ptr<Entry> e;
  {
    std::unique_lock lock(sessions_mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) return error_response(404, "no session '" + id + "'");
    e = it->second;
    sessions_.erase(it);
  }
  std::lock_guard lock(e->write_mutex);
  e->removed = true;
  std::error_code ec;
  fs::remove(e->log_path, ec);
  if (ec) return error_response(500, "could not remove log: " + ec.message());
  sync_directory(options_.data_dir);
  return ok(json{{"deleted", id}});
}

ServiceResponse SessionService::list() const {
  json j = json::array();
  for (const std::string& id : session_ids()) j.push_back(id);
  return ok(json{{"sessions", j}});
}

}  // namespace antimatroid
