#include "antimatroid/http.hpp"

#include <charconv>
#include <stdexcept>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "antimatroid/errors.hpp"

namespace antimatroid {

namespace {

void reply(httplib::Response& res, const ServiceResponse& r) {
  res.status = r.status;
  res.set_content(r.body, r.content_type);
}

int parse_port(std::string_view s) {
  int port = -1;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), port);
  if (ec != std::errc() || ptr != s.data() + s.size() || port < 0 || port > 65535) {
    throw InputError("invalid port '" + std::string(s) + "'");
  }
  return port;
}

}  // namespace

BindAddress parse_bind_address(std::string_view text) {
  BindAddress out;
  const auto colon = text.rfind(':');
  if (colon == std::string_view::npos) {
    out.port = parse_port(text);
    return out;
  }
  if (colon > 0) out.host = std::string(text.substr(0, colon));
  out.port = parse_port(text.substr(colon + 1));
  return out;
}

struct HttpServer::Impl {
  SessionService& service;
  httplib::Server server;
  bool bound = false;

  explicit Impl(SessionService& s) : service(s) { routes(); }

  void routes() {
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
    server.Options(R"(/sessions.*)", [](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
      res.status = 204;
    });
    server.Get("/sessions", [this](const httplib::Request&, httplib::Response& res) {
      reply(res, service.list());
    });
    server.Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) {
      reply(res, service.create_session(req.body));
    });
    server.Get(R"(/sessions/([A-Za-z0-9_-]+)/next)", [this](const httplib::Request& req, httplib::Response& res) {
      reply(res, service.next(req.matches[1]));
    });
    server.Post(R"(/sessions/([A-Za-z0-9_-]+)/answer)",
                [this](const httplib::Request& req, httplib::Response& res) {
                  reply(res, service.answer(req.matches[1], req.body));
                });
    server.Get(R"(/sessions/([A-Za-z0-9_-]+)/state)", [this](const httplib::Request& req, httplib::Response& res) {
      reply(res, service.state(req.matches[1]));
    });
    server.Get(R"(/sessions/([A-Za-z0-9_-]+)/family)",
               [this](const httplib::Request& req, httplib::Response& res) {
                 std::optional<std::size_t> limit;
                 if (req.has_param("limit")) {
                   const std::string v = req.get_param_value("limit");
                   std::size_t k = 0;
                   const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), k);
                   if (ec != std::errc() || ptr != v.data() + v.size()) {
                     res.status = 400;
                     res.set_content(R"({"error":"limit must be a nonnegative integer","status":400})",
                                     "application/json");
                     return;
                   }
                   limit = k;
                 }
                 reply(res, service.family(req.matches[1], limit));
               });
    server.Get(R"(/sessions/([A-Za-z0-9_-]+)/export)",
               [this](const httplib::Request& req, httplib::Response& res) {
                 reply(res, service.export_session(req.matches[1], req.get_param_value("format")));
               });
    server.Delete(R"(/sessions/([A-Za-z0-9_-]+))", [this](const httplib::Request& req, httplib::Response& res) {
      reply(res, service.remove(req.matches[1]));
    });
    server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
      std::string what = "internal error";
      try {
        std::rethrow_exception(ep);
      } catch (const std::exception& ex) {
        what = ex.what();
      } catch (...) {
      }
      res.status = 500;
      res.set_content(nlohmann::json{{"error", what}, {"status", 500}}.dump(), "application/json");
    });
  }
};

HttpServer::HttpServer(SessionService& service) : impl_(std::make_unique<Impl>(service)) {}
HttpServer::~HttpServer() = default;

int HttpServer::bind(const BindAddress& address) {
  int port = address.port;
  if (port == 0) {
    port = impl_->server.bind_to_any_port(address.host);
  } else if (!impl_->server.bind_to_port(address.host, port)) {
    port = -1;
  }
  if (port < 0) {
    throw std::runtime_error("cannot bind " + address.host + ":" + std::to_string(address.port));
  }
  impl_->bound = true;
  return port;
}

void HttpServer::run() {
  if (!impl_->bound) throw StateError("bind() must be called before run()");
  impl_->server.listen_after_bind();
}

void HttpServer::stop() { impl_->server.stop(); }

}  // namespace antimatroid
