#include <doctest.h>

#include <filesystem>
#include <random>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "antimatroid/closure.hpp"
#include "antimatroid/errors.hpp"
#include "antimatroid/http.hpp"
#include "helpers.hpp"

using namespace antimatroid;
using nlohmann::json;
namespace fs = std::filesystem;

TEST_CASE("bind addresses") {
  auto a = parse_bind_address("0.0.0.0:9000");
  CHECK(a.host == "0.0.0.0");
  CHECK(a.port == 9000);
  CHECK(parse_bind_address(":81").port == 81);
  CHECK(parse_bind_address(":81").host == "127.0.0.1");
  CHECK(parse_bind_address("8081").port == 8081);
  CHECK_THROWS_AS(parse_bind_address("host:"), InputError);
  CHECK_THROWS_AS(parse_bind_address("host:99999"), InputError);
  CHECK_THROWS_AS(parse_bind_address("x:y"), InputError);
}

TEST_CASE("end to end over HTTP") {
  std::random_device rd;
  const fs::path dir = fs::temp_directory_path() / ("antimatroid-http-" + std::to_string(rd()));
  fs::create_directories(dir);
  {
    ServiceOptions o;
    o.data_dir = dir;
    SessionService svc(o);
    HttpServer server(svc);
    const int port = server.bind({"127.0.0.1", 0});
    REQUIRE(port > 0);
    std::thread t([&] { server.run(); });

    httplib::Client cli("127.0.0.1", port);
    cli.set_connection_timeout(5);
    cli.set_read_timeout(30);

    auto created = cli.Post("/sessions", R"({"n":4})", "application/json");
    REQUIRE(created);
    CHECK(created->status == 201);
    const json c = json::parse(created->body);
    const std::string id = c.at("id");

    auto bad = cli.Post("/sessions", R"({"n":0})", "application/json");
    REQUIRE(bad);
    CHECK(bad->status == 400);
    CHECK(json::parse(bad->body).contains("error"));

    auto missing = cli.Get("/sessions/unknown/state");
    REQUIRE(missing);
    CHECK(missing->status == 404);

    const ClosureEngine expert(testing::r2());
    int posed = 0;
    for (;;) {
      auto next = cli.Get("/sessions/" + id + "/next");
      REQUIRE(next);
      REQUIRE(next->status == 200);
      const json j = json::parse(next->body);
      if (j.at("done").get<bool>()) break;
      const json& q = j.at("query");
      ElementSet a(4);
      for (const auto& x : q.at("antecedent")) a.insert(x.get<Element>());
      const bool yes = expert.implicate_a(HornRule(a, q.at("consequent").get<Element>()));
      auto ans = cli.Post("/sessions/" + id + "/answer", json{{"query_id", q.at("id")}, {"answer", yes}}.dump(),
                          "application/json");
      REQUIRE(ans);
      REQUIRE(ans->status == 200);
      ++posed;
    }
    CHECK(posed == 22);

    auto state = cli.Get("/sessions/" + id + "/state");
    REQUIRE(state);
    CHECK(json::parse(state->body).at("counters").at("posed") == 22);

    auto fam = cli.Get("/sessions/" + id + "/family?limit=4");
    REQUIRE(fam);
    CHECK(json::parse(fam->body).at("members").size() == 4);
    CHECK(json::parse(fam->body).at("count") == 11);
    auto badlimit = cli.Get("/sessions/" + id + "/family?limit=x");
    REQUIRE(badlimit);
    CHECK(badlimit->status == 400);

    auto cnf = cli.Get("/sessions/" + id + "/export?format=cnf");
    REQUIRE(cnf);
    CHECK(cnf->status == 200);
    CHECK(cnf->body.find("p cnf 4 2") != std::string::npos);

    auto list = cli.Get("/sessions");
    REQUIRE(list);
    CHECK(json::parse(list->body).at("sessions") == json::array({id}));

    auto del = cli.Delete("/sessions/" + id);
    REQUIRE(del);
    CHECK(del->status == 200);
    auto gone = cli.Get("/sessions/" + id + "/next");
    REQUIRE(gone);
    CHECK(gone->status == 404);

    server.stop();
    t.join();
  }
  fs::remove_all(dir);
}
