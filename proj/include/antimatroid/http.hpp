#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "antimatroid/service.hpp"

namespace antimatroid {

struct BindAddress {
  std::string host = "127.0.0.1";
  int port = 8080;
};

// "host:port", ":port" or "port". Throws InputError on malformed input.
BindAddress parse_bind_address(std::string_view text);

// HTTP/JSON front end for a SessionService:
//
//   GET    /sessions
//   POST   /sessions
//   GET    /sessions/{id}/next
//   POST   /sessions/{id}/answer
//   GET    /sessions/{id}/state
//   GET    /sessions/{id}/family?limit=K
//   GET    /sessions/{id}/export?format=rules|json|cnf
//   DELETE /sessions/{id}
class HttpServer {
 public:
  explicit HttpServer(SessionService& service);
  ~HttpServer();

  // Port 0 binds an ephemeral port. Returns the bound port.
  int bind(const BindAddress& address);
  // Blocks until stop() is called from another thread.
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace antimatroid
