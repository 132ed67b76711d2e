#ifndef RETROAI_JSON_IO_HPP
#define RETROAI_JSON_IO_HPP

// JSON mapping of the domain model: snake_case field names, ISO-8601 dates
// and UTC timestamps, enums as their names.

#include <string>

#include "json.hpp"
#include "retroai/analytics.hpp"
#include "retroai/constraints.hpp"
#include "retroai/domain.hpp"
#include "retroai/planner.hpp"
#include "retroai/reporting.hpp"

namespace retroai {

using Json = nlohmann::json;

template <class Tag>
void to_json(Json& j, const Id<Tag>& id) {
  j = id.value;
}
template <class Tag>
void from_json(const Json& j, Id<Tag>& id) {
  id.value = j.get<std::string>();
}

inline void to_json(Json& j, Priority p) { j = std::string(to_string(p)); }
inline void from_json(const Json& j, Priority& p) { p = parse_priority(j.get<std::string>()); }
inline void to_json(Json& j, Status s) { j = std::string(to_string(s)); }
inline void from_json(const Json& j, Status& s) { s = parse_status(j.get<std::string>()); }
inline void to_json(Json& j, Rule r) { j = std::string(to_string(r)); }
inline void from_json(const Json& j, Rule& r) { r = parse_rule(j.get<std::string>()); }
inline void to_json(Json& j, Severity s) { j = std::string(to_string(s)); }
inline void from_json(const Json& j, Severity& s) { s = parse_severity(j.get<std::string>()); }

inline Json date_json(const Date& d) { return format_date(d); }
inline Date date_from(const Json& j) { return parse_date(j.get<std::string>()); }

inline void to_json(Json& j, const ProductBacklogItem& i) {
  j = Json{{"id", i.id},
           {"title", i.title},
           {"description", i.description},
           {"priority", i.priority},
           {"story_points", i.story_points},
           {"status", i.status},
           {"is_epic", i.is_epic},
           {"depends_on", i.depends_on},
           {"sprint_id", i.sprint_id ? Json(*i.sprint_id) : Json(nullptr)},
           {"inserted_at", i.inserted_at}};
}

inline void from_json(const Json& j, ProductBacklogItem& i) {
  j.at("id").get_to(i.id);
  i.title = j.value("title", std::string{});
  i.description = j.value("description", std::string{});
  j.at("priority").get_to(i.priority);
  j.at("story_points").get_to(i.story_points);
  i.status = j.contains("status") ? j.at("status").get<Status>() : Status::Todo;
  i.is_epic = j.value("is_epic", false);
  i.depends_on.clear();
  if (j.contains("depends_on")) j.at("depends_on").get_to(i.depends_on);
  i.sprint_id.reset();
  if (j.contains("sprint_id") && !j.at("sprint_id").is_null()) i.sprint_id = j.at("sprint_id").get<SprintId>();
  i.inserted_at = j.value("inserted_at", std::int64_t{0});
}

inline void to_json(Json& j, const Sprint& s) {
  j = Json{{"id", s.id},
           {"name", s.name},
           {"start_date", date_json(s.start_date)},
           {"end_date", date_json(s.end_date)},
           {"ordinal", s.ordinal}};
}

inline void from_json(const Json& j, Sprint& s) {
  j.at("id").get_to(s.id);
  s.name = j.value("name", std::string{});
  s.start_date = date_from(j.at("start_date"));
  s.end_date = date_from(j.at("end_date"));
  j.at("ordinal").get_to(s.ordinal);
}

inline void to_json(Json& j, const StatusEvent& e) {
  j = Json{{"item_id", e.item_id},
           {"timestamp", format_instant(e.timestamp)},
           {"old_status", e.old_status},
           {"new_status", e.new_status}};
}

inline void from_json(const Json& j, StatusEvent& e) {
  j.at("item_id").get_to(e.item_id);
  e.timestamp = parse_instant(j.at("timestamp").get<std::string>());
  j.at("old_status").get_to(e.old_status);
  j.at("new_status").get_to(e.new_status);
}

inline void to_json(Json& j, const Project& p) {
  j = Json{{"id", p.id},
           {"name", p.name},
           {"expected_sprint_count", p.expected_sprint_count},
           {"version", p.version},
           {"utc_offset_minutes", p.utc_offset_minutes},
           {"backlog", p.backlog},
           {"sprints", p.sprints},
           {"events", p.events}};
}

inline void from_json(const Json& j, Project& p) {
  j.at("id").get_to(p.id);
  p.name = j.value("name", std::string{});
  j.at("expected_sprint_count").get_to(p.expected_sprint_count);
  p.version = j.value("version", std::int64_t{0});
  p.utc_offset_minutes = j.value("utc_offset_minutes", 0);
  p.backlog = j.value("backlog", std::vector<ProductBacklogItem>{});
  p.sprints = j.value("sprints", std::vector<Sprint>{});
  p.events = j.value("events", std::vector<StatusEvent>{});
}

inline void to_json(Json& j, const ValidationIssue& i) {
  j = Json{{"rule", i.rule},
           {"severity", i.severity},
           {"item_ids", i.item_ids},
           {"sprint_ids", i.sprint_ids},
           {"message", i.message}};
}

inline void from_json(const Json& j, ValidationIssue& i) {
  j.at("rule").get_to(i.rule);
  j.at("severity").get_to(i.severity);
  i.item_ids = j.value("item_ids", std::vector<ItemId>{});
  i.sprint_ids = j.value("sprint_ids", std::vector<SprintId>{});
  i.message = j.value("message", std::string{});
}

inline Json rational_json(const Rational& r) {
  if (r.den() == 1) return r.num();
  return r.to_double();
}

inline void to_json(Json& j, const SprintPlan& plan) {
  Json assignments = Json::object();
  for (const auto& [id, ord] : plan.assignments) assignments[id.value] = ord;
  j = Json{{"assignments", assignments},
           {"sprint_count", plan.sprint_count},
           {"capacity", rational_json(plan.capacity)},
           {"warnings", plan.warnings},
           {"excluded", plan.excluded}};
}

inline void to_json(Json& j, const BurndownSeries& b) {
  Json labels = Json::array();
  for (const auto& d : b.day_labels) labels.push_back(date_json(d));
  Json ideal = Json::array();
  for (const auto& r : b.ideal) ideal.push_back(rational_json(r));
  j = Json{{"sprint_id", b.sprint_id},
           {"committed", b.committed},
           {"day_labels", labels},
           {"remaining", b.remaining},
           {"ideal", ideal}};
}

inline void to_json(Json& j, const StatusLight& s) {
  j = Json{{"state", std::string(to_string(s.state))},
           {"glyph", s.glyph},
           {"ratio", s.ratio ? Json(s.ratio->to_double()) : Json(nullptr)}};
}

inline void to_json(Json& j, const Palette& p) {
  j = Json{{"category", std::string(p.key)},
           {"label", std::string(p.label)},
           {"on_track", std::string(p.on_track)},
           {"attention", std::string(p.attention)},
           {"at_risk", std::string(p.at_risk)}};
}

inline void to_json(Json& j, const SprintReport& r) {
  j = Json{{"summary", r.summary},
           {"plan_feedback", r.plan_feedback},
           {"degraded", r.degraded},
           {"generated_at", format_instant(r.generated_at)}};
}

}  // namespace retroai

#endif  // RETROAI_JSON_IO_HPP
