#ifndef RETROAI_SERVICE_HPP
#define RETROAI_SERVICE_HPP

#include <algorithm>
#include <atomic>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "httplib.h"
#include "retroai/analytics.hpp"
#include "retroai/constraints.hpp"
#include "retroai/domain.hpp"
#include "retroai/http_provider.hpp"
#include "retroai/json_io.hpp"
#include "retroai/planner.hpp"
#include "retroai/reporting.hpp"
#include "retroai/store.hpp"

namespace retroai {

// ---------------------------------------------------------------------------
// Board moves

struct BacklogDestination {};

struct SprintDestination {
  SprintId sprint_id;
  Status status = Status::Todo;
};

struct BoardMove {
  ItemId item_id;
  std::variant<BacklogDestination, SprintDestination> destination;
  bool force = false;
};

struct MoveResult {
  Project project;
  std::vector<ValidationIssue> warnings;
};

// Appends a status event, keeping each item's log chronological.
inline void record_status(Project& p, const ItemId& id, Status new_status, Instant now) {
  auto& item = get_item(p, id);
  if (item.status == new_status) return;
  for (const auto& e : p.events) {
    if (e.item_id == id && e.timestamp > now) now = e.timestamp;
  }
  p.events.push_back({id, now, item.status, new_status});
  item.status = new_status;
}

// Applies the move and re-validates. Throws ConstraintViolation when the
// result carries an Error, or when the destination sprint goes over the ideal
// velocity and `force` is not set. Returns the new project (version + 1)
// with the capacity warnings a forced move produced.
inline MoveResult apply_board_move(const Project& p, const BoardMove& move, Instant now) {
  Project next = p;
  auto& item = get_item(next, move.item_id);
  std::optional<SprintId> entered;
  if (const auto* dest = std::get_if<SprintDestination>(&move.destination)) {
    get_sprint(next, dest->sprint_id);
    if (item.sprint_id != dest->sprint_id) entered = dest->sprint_id;
    item.sprint_id = dest->sprint_id;
    record_status(next, move.item_id, dest->status, now);
  } else {
    item.sprint_id.reset();
  }
  next.version = p.version + 1;

  auto issues = validate_project(next);
  std::vector<ValidationIssue> errors;
  std::copy_if(issues.begin(), issues.end(), std::back_inserter(errors),
               [](const ValidationIssue& i) { return i.severity == Severity::Error; });
  if (!errors.empty()) throw ConstraintViolation(std::move(errors));

  std::vector<ValidationIssue> capacity;
  if (entered) {
    for (auto& i : check_sprint_capacity(next)) {
      if (i.rule == Rule::C2Capacity && i.sprint_ids == std::vector<SprintId>{*entered}) {
        capacity.push_back(std::move(i));
      }
    }
  }
  if (!capacity.empty() && !move.force) throw ConstraintViolation(std::move(capacity));
  return {std::move(next), std::move(capacity)};
}

// ---------------------------------------------------------------------------
// Request handling, independent of the HTTP transport.

struct ApiRequest {
  std::string method;
  std::string path;
  std::string body;
  std::map<std::string, std::string> query;
};

struct ApiResponse {
  ApiResponse(int status_code, Json json) : status(status_code), body(std::move(json)) {}
  ApiResponse(int status_code, std::string content, std::string type)
      : status(status_code), content_type(std::move(type)), raw(std::move(content)) {}

  int status = 200;
  Json body;
  std::string content_type = "application/json";
  std::string raw;  // used instead of `body` when non-empty

  std::string text() const { return raw.empty() ? body.dump() : raw; }
};

struct ApiConfig {
  std::function<Instant()> clock = now_utc;
  std::function<std::unique_ptr<ReportProvider>()> provider = [] {
    return std::make_unique<OfflineProvider>();
  };
  std::chrono::milliseconds report_timeout{30000};
  int sprint_length_days = 14;
};

class Api {
 public:
  Api(ProjectStore& store, ApiConfig config = {}) : store_(store), config_(std::move(config)) {}

  ApiResponse handle(const ApiRequest& req) {
    try {
      return route(req);
    } catch (const ConstraintViolation& e) {
      return {422, Json{{"error", "constraint_violation"}, {"message", e.what()}, {"issues", e.issues()}}};
    } catch (const NotFoundError& e) {
      return error(404, "not_found", e.what());
    } catch (const VersionConflictError& e) {
      return error(409, "version_conflict", e.what());
    } catch (const InvalidArgumentError& e) {
      return error(400, "invalid_argument", e.what());
    } catch (const InvariantError& e) {
      return error(400, "invalid_project", e.what());
    } catch (const SchemaError& e) {
      return error(400, "invalid_project", e.what());
    } catch (const nlohmann::json::exception& e) {
      return error(400, "bad_request", e.what());
    } catch (const Error& e) {
      return error(500, "internal", e.what());
    }
  }

 private:
  using Segments = std::vector<std::string>;

  static ApiResponse error(int status, const char* code, const std::string& message) {
    return {status, Json{{"error", code}, {"message", message}}};
  }

  static Segments split(const std::string& path) {
    Segments out;
    std::size_t pos = 0;
    while (pos <= path.size()) {
      auto next = path.find('/', pos);
      if (next == std::string::npos) next = path.size();
      if (next > pos) out.push_back(path.substr(pos, next - pos));
      pos = next + 1;
    }
    return out;
  }

  static Json parse_body(const ApiRequest& req) {
    if (req.body.empty()) return Json::object();
    Json j = Json::parse(req.body);
    if (!j.is_object()) throw InvalidArgumentError("request body must be a JSON object");
    return j;
  }

  ApiResponse route(const ApiRequest& req) {
    const Segments s = split(req.path);
    const std::string& m = req.method;
    if (m == "OPTIONS") return {204, nullptr};
    if (s.size() == 1 && s[0] == "palettes" && m == "GET") {
      return {200, Json(std::vector<Palette>(kPalettes.begin(), kPalettes.end()))};
    }
    if (s.empty() || s[0] != "projects") return error(404, "not_found", "no route for " + req.path);
    if (s.size() == 1) {
      if (m == "GET") return list_projects();
      if (m == "POST") return create_project(parse_body(req));
    } else {
      const ProjectId pid{s[1]};
      if (s.size() == 2) {
        if (m == "GET") return {200, store_.load(pid)};
        if (m == "PUT") return replace_project(pid, parse_body(req));
      } else if (s[2] == "items") {
        if (s.size() == 3 && m == "POST") return add_item(pid, parse_body(req));
        if (s.size() == 4 && m == "PATCH") return patch_item(pid, ItemId{s[3]}, parse_body(req));
        if (s.size() == 5 && s[4] == "dependencies" && m == "POST") {
          return add_dependency(pid, ItemId{s[3]}, parse_body(req));
        }
        if (s.size() == 6 && s[4] == "dependencies" && m == "DELETE") {
          return remove_dependency(pid, ItemId{s[3]}, ItemId{s[5]}, parse_body(req));
        }
        if (s.size() == 5 && s[4] == "allowed-prerequisites" && m == "GET") {
          return {200, allowed_prerequisites(store_.load(pid), ItemId{s[3]})};
        }
      } else if (s[2] == "sprints") {
        if (s.size() == 3 && m == "POST") return add_sprint(pid, parse_body(req));
        if (s.size() == 5 && s[4] == "burndown" && m == "GET") {
          auto series = burndown_series(store_.load(pid), SprintId{s[3]});
          if (auto f = req.query.find("format"); f != req.query.end() && f->second == "csv") {
            return {200, to_csv(series), "text/csv"};
          }
          return {200, Json(series)};
        }
        if (s.size() == 5 && s[4] == "report" && m == "POST") {
          return report(pid, SprintId{s[3]}, parse_body(req));
        }
      } else if (s.size() == 3) {
        if (s[2] == "plan" && m == "POST") return plan(pid, parse_body(req));
        if (s[2] == "moves" && m == "POST") return move(pid, parse_body(req));
        if (s[2] == "status" && m == "GET") {
          Instant as_of = config_.clock();
          if (auto a = req.query.find("as_of"); a != req.query.end()) as_of = parse_instant(a->second);
          return {200, project_status(store_.load(pid), as_of)};
        }
        if (s[2] == "validation" && m == "GET") return {200, validate_project(store_.load(pid))};
      }
    }
    return error(404, "not_found", "no route for " + m + " " + req.path);
  }

  // Loads, checks the client's base version, mutates, re-validates and saves.
  template <class Fn>
  Project mutate(const ProjectId& pid, const Json& body, Fn&& fn) {
    const Project current = store_.load(pid);
    if (body.contains("version") && body.at("version").get<std::int64_t>() != current.version) {
      throw VersionConflictError("project '" + pid.value + "' is at version " +
                                 std::to_string(current.version));
    }
    Project next = current;
    fn(next);
    next.version = current.version + 1;
    commit(next);
    return next;
  }

  void commit(const Project& p) {
    check_structure(p);
    auto issues = validate_project(p);
    std::vector<ValidationIssue> errors;
    std::copy_if(issues.begin(), issues.end(), std::back_inserter(errors),
                 [](const ValidationIssue& i) { return i.severity == Severity::Error; });
    if (!errors.empty()) throw ConstraintViolation(std::move(errors));
    store_.save(p);
  }

  ApiResponse list_projects() {
    Json out = Json::array();
    for (const auto& s : store_.list_projects(config_.clock())) {
      out.push_back(Json{{"id", s.id}, {"name", s.name}, {"status", s.status}});
    }
    return {200, out};
  }

  ApiResponse create_project(const Json& body) {
    Project p;
    p.name = body.at("name").get<std::string>();
    p.expected_sprint_count = body.value("expected_sprint_count", 1);
    p.utc_offset_minutes = body.value("utc_offset_minutes", 0);
    if (p.expected_sprint_count < 1) throw InvalidArgumentError("expected_sprint_count must be >= 1");
    if (body.contains("id")) {
      p.id = body.at("id").get<ProjectId>();
      if (store_.exists(p.id)) throw VersionConflictError("project '" + p.id.value + "' exists");
    } else {
      auto taken = store_.ids();
      for (std::size_t n = taken.size() + 1;; ++n) {
        p.id = ProjectId{"p" + std::to_string(n)};
        if (std::find(taken.begin(), taken.end(), p.id) == taken.end()) break;
      }
    }
    p.version = 1;
    commit(p);
    return {201, p};
  }

  ApiResponse replace_project(const ProjectId& pid, const Json& body) {
    Project incoming = body.get<Project>();
    if (incoming.id != pid) throw InvalidArgumentError("project id in body does not match the URL");
    const Project current = store_.load(pid);
    if (incoming.version != current.version) {
      throw VersionConflictError("project '" + pid.value + "' is at version " +
                                 std::to_string(current.version));
    }
    incoming.version = current.version + 1;
    commit(incoming);
    return {200, incoming};
  }

  ApiResponse add_item(const ProjectId& pid, const Json& body) {
    std::vector<ValidationIssue> warnings;
    ItemId created;
    Project p = mutate(pid, body, [&](Project& next) {
      ProductBacklogItem item;
      if (body.contains("id")) {
        item.id = body.at("id").get<ItemId>();
        if (find_item(next, item.id)) throw InvalidArgumentError("item '" + item.id.value + "' exists");
      } else {
        for (std::size_t n = next.backlog.size() + 1;; ++n) {
          item.id = ItemId{"I" + std::to_string(n)};
          if (!find_item(next, item.id)) break;
        }
      }
      if (item.id.value.empty()) throw InvalidArgumentError("item id must not be empty");
      item.title = body.at("title").get<std::string>();
      item.description = body.value("description", std::string{});
      item.priority = body.at("priority").get<Priority>();
      item.story_points = body.at("story_points").get<int>();
      if (item.story_points < 0) throw InvalidArgumentError("story_points must be >= 0");
      item.is_epic = body.value("is_epic", false);
      std::int64_t last = 0;
      for (const auto& i : next.backlog) last = std::max(last, i.inserted_at);
      item.inserted_at = last + 1;
      created = item.id;
      next.backlog.push_back(item);
      for (const auto& dep : body.value("depends_on", std::vector<ItemId>{})) {
        auto decision = validate_dependency_addition(next, created, dep);
        if (!decision.accepted) throw ConstraintViolation(decision.issues);
        get_item(next, created).depends_on.insert(dep);
      }
      if (body.contains("sprint_id") && !body.at("sprint_id").is_null()) {
        BoardMove mv{created, SprintDestination{body.at("sprint_id").get<SprintId>(), Status::Todo},
                     body.value("force", false)};
        auto result = apply_board_move(next, mv, config_.clock());
        warnings = std::move(result.warnings);
        next = std::move(result.project);
      }
    });
    return {201, Json{{"project", p}, {"item_id", created}, {"warnings", warnings}}};
  }

  ApiResponse patch_item(const ProjectId& pid, const ItemId& iid, const Json& body) {
    Project p = mutate(pid, body, [&](Project& next) {
      auto& item = get_item(next, iid);
      if (body.contains("priority")) {
        auto priority = body.at("priority").get<Priority>();
        auto decision = validate_priority_change(next, iid, priority);
        if (!decision.accepted) throw ConstraintViolation(decision.issues);
        item.priority = priority;
      }
      if (body.contains("title")) item.title = body.at("title").get<std::string>();
      if (body.contains("description")) item.description = body.at("description").get<std::string>();
      if (body.contains("is_epic")) item.is_epic = body.at("is_epic").get<bool>();
      if (body.contains("story_points")) {
        int sp = body.at("story_points").get<int>();
        if (sp < 0) throw InvalidArgumentError("story_points must be >= 0");
        item.story_points = sp;
      }
      if (body.contains("status")) {
        record_status(next, iid, body.at("status").get<Status>(), config_.clock());
      }
    });
    return {200, Json{{"project", p}, {"warnings", Json::array()}}};
  }

  ApiResponse add_dependency(const ProjectId& pid, const ItemId& iid, const Json& body) {
    const ItemId pre = body.at("prerequisite_id").get<ItemId>();
    Project p = mutate(pid, body, [&](Project& next) {
      auto decision = validate_dependency_addition(next, iid, pre);
      if (!decision.accepted) throw ConstraintViolation(decision.issues);
      get_item(next, iid).depends_on.insert(pre);
    });
    return {201, Json{{"project", p}, {"warnings", Json::array()}}};
  }

  ApiResponse remove_dependency(const ProjectId& pid, const ItemId& iid, const ItemId& pre,
                                const Json& body) {
    Project p = mutate(pid, body, [&](Project& next) {
      if (get_item(next, iid).depends_on.erase(pre) == 0) {
        throw NotFoundError("'" + iid.value + "' does not depend on '" + pre.value + "'");
      }
    });
    return {200, Json{{"project", p}, {"warnings", Json::array()}}};
  }

  ApiResponse add_sprint(const ProjectId& pid, const Json& body) {
    Project p = mutate(pid, body, [&](Project& next) {
      Sprint s;
      s.ordinal = static_cast<int>(next.sprints.size()) + 1;
      if (body.contains("id")) {
        s.id = body.at("id").get<SprintId>();
        if (find_sprint(next, s.id)) throw InvalidArgumentError("sprint '" + s.id.value + "' exists");
      } else {
        for (int n = s.ordinal;; ++n) {
          s.id = SprintId{"S" + std::to_string(n)};
          if (!find_sprint(next, s.id)) break;
        }
      }
      if (s.id.value.empty()) throw InvalidArgumentError("sprint id must not be empty");
      s.name = body.value("name", "Sprint " + std::to_string(s.ordinal));
      s.start_date = parse_date(body.at("start_date").get<std::string>());
      s.end_date = parse_date(body.at("end_date").get<std::string>());
      if (!(s.start_date < s.end_date)) {
        throw ConstraintViolation({*check_sprint_date(s)});
      }
      if (!next.sprints.empty() && s.start_date < next.sprints.back().start_date) {
        throw ConstraintViolation({make_issue(
            Rule::C4Dates, {}, {s.id},
            "sprint '" + s.name + "' cannot start before sprint '" + next.sprints.back().name + "'")});
      }
      next.sprints.push_back(std::move(s));
    });
    return {201, Json{{"project", p}, {"warnings", Json::array()}}};
  }

  ApiResponse plan(const ProjectId& pid, const Json& body) {
    PlanOptions options;
    if (body.contains("capacity")) {
      const auto& c = body.at("capacity");
      if (c.is_number_integer()) {
        options.capacity = Rational{c.get<std::int64_t>()};
      } else {
        // Accept decimals to 1e-6.
        options.capacity = Rational{static_cast<std::int64_t>(c.get<double>() * 1000000.0 + 0.5), 1000000};
      }
    }
    options.respect_existing = body.value("respect_existing", true);
    if (body.contains("max_sprints")) options.max_sprints = body.at("max_sprints").get<int>();
    const bool apply = body.value("apply", true);

    SprintPlan result;
    auto make_plan = [&](const Project& p) {
      try {
        return plan_sprints(p, options);
      } catch (const PreconditionError& e) {
        std::vector<ValidationIssue> cycles;
        for (auto& c : detect_cycles(p)) {
          cycles.push_back(make_issue(Rule::DepCycle, c, {}, "circular dependency: " + describe_cycle(c)));
        }
        if (cycles.empty()) throw InvalidArgumentError(e.what());
        throw ConstraintViolation(std::move(cycles));
      }
    };
    if (!apply) {
      result = make_plan(store_.load(pid));
      return {200, Json{{"plan", result}}};
    }
    Project p = mutate(pid, body, [&](Project& next) {
      result = make_plan(next);
      SprintLayout layout{today_utc(), config_.sprint_length_days};
      if (body.contains("start_date")) layout.first_start = parse_date(body.at("start_date").get<std::string>());
      if (body.contains("sprint_length_days")) layout.length_days = body.at("sprint_length_days").get<int>();
      next = apply_plan(next, result, layout);
    });
    return {200, Json{{"plan", result}, {"project", p}}};
  }

  ApiResponse move(const ProjectId& pid, const Json& body) {
    BoardMove mv;
    mv.item_id = body.at("item_id").get<ItemId>();
    mv.force = body.value("force", false);
    const auto& dest = body.at("destination");
    if (dest.is_string() && dest.get<std::string>() == "backlog") {
      mv.destination = BacklogDestination{};
    } else if (dest.is_object()) {
      mv.destination = SprintDestination{dest.at("sprint_id").get<SprintId>(),
                                         dest.contains("status") ? dest.at("status").get<Status>()
                                                                 : Status::Todo};
    } else {
      throw InvalidArgumentError("destination must be \"backlog\" or {sprint_id, status}");
    }
    std::vector<ValidationIssue> warnings;
    Project p = mutate(pid, body, [&](Project& next) {
      auto result = apply_board_move(next, mv, config_.clock());
      warnings = std::move(result.warnings);
      next = std::move(result.project);
    });
    return {200, Json{{"project", p}, {"warnings", warnings}}};
  }

  ApiResponse report(const ProjectId& pid, const SprintId& sid, const Json& body) {
    Project p = store_.load(pid);
    get_sprint(p, sid);
    ReportOptions options{config_.report_timeout, config_.clock};
    if (body.value("offline", false)) {
      OfflineProvider offline;
      return {200, generate_sprint_report(p, sid, offline, options)};
    }
    auto provider = config_.provider();
    return {200, generate_sprint_report(p, sid, *provider, options)};
  }

  ProjectStore& store_;
  ApiConfig config_;
};

// ---------------------------------------------------------------------------
// HTTP transport

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::string cors_origin = "*";
  ApiConfig api;
};

// Running HTTP service. The listener runs on a background thread until
// stop() or destruction.
class Server {
 public:
  Server(ProjectStore& store, ServiceConfig config)
      : config_(std::move(config)), api_(store, config_.api) {
    auto handler = [this](const httplib::Request& req, httplib::Response& res) {
      ApiRequest r{req.method, req.path, req.body, {}};
      for (const auto& [k, v] : req.params) r.query[k] = v;
      ApiResponse out = api_.handle(r);
      res.status = out.status;
      if (out.status != 204) res.set_content(out.text(), out.content_type);
    };
    http_.Get(".*", handler);
    http_.Post(".*", handler);
    http_.Put(".*", handler);
    http_.Patch(".*", handler);
    http_.Delete(".*", handler);
    http_.Options(".*", handler);
    http_.set_default_headers({{"Access-Control-Allow-Origin", config_.cors_origin},
                               {"Access-Control-Allow-Methods", "GET, POST, PUT, PATCH, DELETE, OPTIONS"},
                               {"Access-Control-Allow-Headers", "Content-Type"}});
    if (config_.port == 0) {
      port_ = http_.bind_to_any_port(config_.host);
    } else if (http_.bind_to_port(config_.host, config_.port)) {
      port_ = config_.port;
    }
    if (port_ <= 0) {
      throw IoError("cannot bind " + config_.host + ":" + std::to_string(config_.port));
    }
    thread_ = std::thread([this] { http_.listen_after_bind(); });
    http_.wait_until_ready();
  }

  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;
  ~Server() { stop(); }

  int port() const { return port_; }

  void stop() {
    if (stopped_.exchange(true)) return;
    http_.stop();
    if (thread_.joinable()) thread_.join();
  }

 private:
  ServiceConfig config_;
  Api api_;
  httplib::Server http_;
  int port_ = -1;
  std::thread thread_;
  std::atomic<bool> stopped_{false};
};

inline std::unique_ptr<Server> serve(ProjectStore& store, ServiceConfig config) {
  return std::make_unique<Server>(store, std::move(config));
}

}  // namespace retroai

#endif  // RETROAI_SERVICE_HPP
