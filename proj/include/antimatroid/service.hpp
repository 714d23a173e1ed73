#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

namespace antimatroid {

// Outcome of one service call, independent of the transport.
struct ServiceResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

struct ServiceOptions {
  std::filesystem::path data_dir = "sessions";
  std::size_t max_ground_size = 20;
  // Family counts stop (and are omitted) beyond this many members.
  std::uint64_t count_budget = 1'000'000;
  // Number of trailing inference entries reported by GET state.
  std::size_t recent_inferences = 20;
};

// Hosts interactive query sessions. Each session is persisted as an
// append-only JSON-lines log (<data_dir>/<id>.jsonl): a config record, then
// one record per answer and per skipped (inferred) query. Sessions are
// rebuilt by replaying the answers on construction.
//
// Mutations of one session are serialized by a per-session mutex; reads
// go through an immutable snapshot that is swapped atomically after every
// mutation, so they never wait on a writer.
class SessionService {
 public:
  explicit SessionService(ServiceOptions options);
  ~SessionService();

  ServiceResponse create_session(const std::string& body);
  ServiceResponse next(const std::string& id) const;
  ServiceResponse answer(const std::string& id, const std::string& body);
  ServiceResponse state(const std::string& id) const;
  ServiceResponse family(const std::string& id, std::optional<std::size_t> limit) const;
  ServiceResponse export_session(const std::string& id, const std::string& format) const;
  ServiceResponse remove(const std::string& id);
  ServiceResponse list() const;

  std::vector<std::string> session_ids() const;
  // Logs that could not be replayed on startup, with the reason.
  const std::vector<std::string>& load_errors() const noexcept { return load_errors_; }

  struct Entry;  // defined in service.cpp

 private:
  std::shared_ptr<Entry> find(const std::string& id) const;
  void load_all();

  ServiceOptions options_;
  mutable std::shared_mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::vector<std::string> load_errors_;
};

// Natural-language rendering of a query for the expert.
std::string render_prompt(const std::vector<std::string>& antecedent_labels,
                          const std::string& consequent_label);

}  // namespace antimatroid
