#include <gtest/gtest.h>

#include "httplib.h"
#include "retroai/service.hpp"
#include "support/fixtures.hpp"

namespace retroai {
namespace {

const Instant kNow = parse_instant("2025-03-10T12:00:00Z");

class ApiTest : public ::testing::Test {
 protected:
  ApiTest() : api_(store_, config()) {}

  static ApiConfig config() {
    ApiConfig c;
    c.clock = [] { return kNow; };
    return c;
  }

  ApiResponse call(const std::string& method, const std::string& path, const Json& body = nullptr,
                   std::map<std::string, std::string> query = {}) {
    return api_.handle({method, path, body.is_null() ? "" : body.dump(), std::move(query)});
  }

  // P1 planned at ideal velocity into two sprints starting 2025-03-03.
  void seed_planned() {
    ASSERT_EQ(call("POST", "/projects",
                   {{"id", "p1"}, {"name", "P1"}, {"expected_sprint_count", 2}}).status, 201);
    Project p = testing::make_p1();
    p.version = 1;
    ASSERT_EQ(call("PUT", "/projects/p1", p).status, 200);
    auto r = call("POST", "/projects/p1/plan", {{"start_date", "2025-03-03"}});
    ASSERT_EQ(r.status, 200) << r.text();
  }

  std::int64_t version() { return store_.load(ProjectId{"p1"}).version; }

  MemoryStore store_;
  Api api_;
};

std::vector<std::string> codes(const Json& body) {
  std::vector<std::string> out;
  for (const auto& i : body.at("issues")) out.push_back(i.at("rule").get<std::string>());
  return out;
}

TEST_F(ApiTest, CreateListAndGet) {
  auto r = call("POST", "/projects", {{"name", "Zeta"}});
  EXPECT_EQ(r.status, 201);
  EXPECT_EQ(r.body.at("id"), "p1");
  EXPECT_EQ(r.body.at("version"), 1);
  call("POST", "/projects", {{"name", "Alpha"}, {"expected_sprint_count", 3}});
  r = call("GET", "/projects");
  ASSERT_EQ(r.status, 200);
  ASSERT_EQ(r.body.size(), 2u);
  EXPECT_EQ(r.body[0].at("name"), "Alpha");
  EXPECT_EQ(r.body[0].at("status").at("glyph"), "–");
  EXPECT_EQ(call("GET", "/projects/p2").body.at("expected_sprint_count"), 3);
  EXPECT_EQ(call("GET", "/projects/nope").status, 404);
  EXPECT_EQ(call("POST", "/projects", {{"name", "x"}, {"expected_sprint_count", 0}}).status, 400);
  EXPECT_EQ(call("POST", "/projects", {{"id", "p1"}, {"name", "dup"}}).status, 409);
  EXPECT_EQ(call("GET", "/nowhere").status, 404);
}

TEST_F(ApiTest, PlanAppliesGoldenAllocation) {
  seed_planned();
  Project p = store_.load(ProjectId{"p1"});
  ASSERT_EQ(p.sprints.size(), 2u);
  EXPECT_EQ(get_item(p, ItemId{"A"}).sprint_id, SprintId{"S1"});
  EXPECT_EQ(get_item(p, ItemId{"C"}).sprint_id, SprintId{"S1"});
  for (const char* id : {"B", "D", "E", "F"}) EXPECT_EQ(get_item(p, ItemId{id}).sprint_id, SprintId{"S2"});
  EXPECT_EQ(call("GET", "/projects/p1/validation").body, Json::array());

  auto preview = call("POST", "/projects/p1/plan", {{"apply", false}, {"capacity", 8}});
  EXPECT_EQ(preview.body.at("plan").at("sprint_count"), 3);
  EXPECT_EQ(version(), 3);
}

TEST_F(ApiTest, DependencyRulesReturn422) {
  seed_planned();
  auto r = call("POST", "/projects/p1/items/A/dependencies", {{"prerequisite_id", "E"}});
  EXPECT_EQ(r.status, 422);
  EXPECT_EQ(r.body.at("error"), "constraint_violation");
  EXPECT_EQ(codes(r.body), std::vector<std::string>{"DEP_PRIORITY"});

  r = call("POST", "/projects/p1/items/E/dependencies", {{"prerequisite_id", "F"}});
  EXPECT_EQ(codes(r.body), (std::vector<std::string>{"DEP_CYCLE"}));

  r = call("POST", "/projects/p1/items/C/dependencies", {{"prerequisite_id", "A"}});
  EXPECT_EQ(r.status, 201);
  EXPECT_EQ(call("GET", "/projects/p1/items/D/allowed-prerequisites").body,
            (Json{"A", "B", "C"}));
  EXPECT_EQ(call("DELETE", "/projects/p1/items/C/dependencies/A").status, 200);
  EXPECT_EQ(call("DELETE", "/projects/p1/items/C/dependencies/A").status, 404);
  EXPECT_EQ(call("POST", "/projects/p1/items/C/dependencies", {{"prerequisite_id", "C"}}).status, 400);
}

TEST_F(ApiTest, PriorityLock) {
  seed_planned();
  auto r = call("PATCH", "/projects/p1/items/A", {{"priority", "Low"}});
  EXPECT_EQ(r.status, 422);
  EXPECT_EQ(codes(r.body), (std::vector<std::string>{"PRIORITY_LOCKED"}));
  r = call("PATCH", "/projects/p1/items/C", {{"priority", "Critical"}, {"title", "Checkout"}});
  EXPECT_EQ(r.status, 200);
  EXPECT_EQ(get_item(store_.load(ProjectId{"p1"}), ItemId{"C"}).title, "Checkout");
}

TEST_F(ApiTest, StaleVersionConflicts) {
  seed_planned();
  const auto v = version();
  EXPECT_EQ(call("PATCH", "/projects/p1/items/C", {{"title", "x"}, {"version", v}}).status, 200);
  auto r = call("PATCH", "/projects/p1/items/C", {{"title", "y"}, {"version", v}});
  EXPECT_EQ(r.status, 409);
  EXPECT_EQ(r.body.at("error"), "version_conflict");
  Project stale = store_.load(ProjectId{"p1"});
  stale.version = v;
  EXPECT_EQ(call("PUT", "/projects/p1", stale).status, 409);
}

TEST_F(ApiTest, BoardMovesCheckCapacity) {
  seed_planned();
  // S1 is full (10 of 10): moving B in is over capacity.
  Json move{{"item_id", "B"}, {"destination", {{"sprint_id", "S1"}, {"status", "InProgress"}}}};
  auto r = call("POST", "/projects/p1/moves", move);
  EXPECT_EQ(r.status, 422);
  EXPECT_EQ(codes(r.body), std::vector<std::string>{"C2_CAPACITY"});
  move["force"] = true;
  r = call("POST", "/projects/p1/moves", move);
  ASSERT_EQ(r.status, 200) << r.text();
  ASSERT_EQ(r.body.at("warnings").size(), 1u);
  EXPECT_EQ(r.body.at("warnings")[0].at("rule"), "C2_CAPACITY");
  Project p = store_.load(ProjectId{"p1"});
  EXPECT_EQ(get_item(p, ItemId{"B"}).status, Status::InProgress);
  ASSERT_EQ(p.events.size(), 1u);
  EXPECT_EQ(p.events[0].timestamp, kNow);

  r = call("POST", "/projects/p1/moves", {{"item_id", "B"}, {"destination", "backlog"}});
  EXPECT_EQ(r.status, 200);
  EXPECT_FALSE(get_item(store_.load(ProjectId{"p1"}), ItemId{"B"}).sprint_id);
  EXPECT_EQ(call("POST", "/projects/p1/moves", {{"item_id", "B"}, {"destination", 3}}).status, 400);
  EXPECT_EQ(call("POST", "/projects/p1/moves",
                 {{"item_id", "B"}, {"destination", {{"sprint_id", "S7"}}}}).status, 404);
}

TEST_F(ApiTest, SprintsBurndownStatusReport) {
  seed_planned();
  auto r = call("POST", "/projects/p1/sprints", {{"start_date", "2025-04-10"}, {"end_date", "2025-04-01"}});
  EXPECT_EQ(r.status, 422);
  EXPECT_EQ(codes(r.body), std::vector<std::string>{"C4_DATES"});
  r = call("POST", "/projects/p1/sprints", {{"start_date", "2025-03-31"}, {"end_date", "2025-04-13"}});
  EXPECT_EQ(r.status, 201);

  call("PATCH", "/projects/p1/items/A", {{"status", "Done"}});
  r = call("GET", "/projects/p1/sprints/S1/burndown");
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(r.body.at("committed"), 10);
  EXPECT_EQ(r.body.at("remaining")[7], 5);
  EXPECT_EQ(r.body.at("ideal")[0], 10);
  r = call("GET", "/projects/p1/sprints/S1/burndown", nullptr, {{"format", "csv"}});
  EXPECT_EQ(r.content_type, "text/csv");
  EXPECT_EQ(r.text().rfind("day,remaining,ideal\n2025-03-03,10,10\n", 0), 0u);
  EXPECT_EQ(call("GET", "/projects/p1/sprints/S9/burndown").status, 404);

  r = call("GET", "/projects/p1/status", nullptr, {{"as_of", "2025-03-20T00:00:00Z"}});
  EXPECT_EQ(r.body.at("state"), "AtRisk");
  EXPECT_EQ(r.body.at("glyph"), "!");

  r = call("POST", "/projects/p1/sprints/S1/report", {{"offline", true}});
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(r.body.at("degraded"), true);
  EXPECT_EQ(r.body.at("summary"), fallback_report(store_.load(ProjectId{"p1"}), SprintId{"S1"}).summary);
}

TEST_F(ApiTest, MalformedInput) {
  seed_planned();
  EXPECT_EQ(call("POST", "/projects/p1/items", nullptr).status, 400);
  auto r = api_.handle({"POST", "/projects/p1/items", "{not json", {}});
  EXPECT_EQ(r.status, 400);
  r = call("POST", "/projects/p1/items", {{"title", "t"}, {"priority", "Huge"}, {"story_points", 1}});
  EXPECT_EQ(r.status, 400);
  r = call("POST", "/projects/p1/items", {{"title", "t"}, {"priority", "Low"}, {"story_points", 2}});
  EXPECT_EQ(r.status, 201);
  EXPECT_EQ(r.body.at("item_id"), "I7");
  EXPECT_EQ(call("GET", "/palettes").body.size(), 9u);
  EXPECT_EQ(call("OPTIONS", "/projects").status, 204);
}

TEST(Server, ServesOverHttp) {
  MemoryStore store;
  ServiceConfig config;
  config.port = 0;
  auto server = serve(store, config);
  ASSERT_GT(server->port(), 0);

  httplib::Client client("127.0.0.1", server->port());
  auto res = client.Post("/projects", R"({"id":"p1","name":"P1","expected_sprint_count":2})",
                         "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 201);
  EXPECT_EQ(res->get_header_value("Access-Control-Allow-Origin"), "*");

  res = client.Get("/projects/p1/sprints/S1/burndown");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 404);

  Project p = testing::make_p1();
  client.Put("/projects/p1", Json(p).dump(), "application/json");
  res = client.Post("/projects/p1/items/A/dependencies", R"({"prerequisite_id":"E"})", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 422);
  EXPECT_EQ(Json::parse(res->body).at("issues")[0].at("rule"), "DEP_PRIORITY");

  res = client.Put("/projects/p1", Json(p).dump(), "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 409);
  server->stop();
}

}  // namespace
}  // namespace retroai
