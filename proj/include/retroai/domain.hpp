#ifndef RETROAI_DOMAIN_HPP
#define RETROAI_DOMAIN_HPP

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "retroai/error.hpp"
#include "retroai/rational.hpp"
#include "retroai/time.hpp"

namespace retroai {

// Tagged string identifier; distinct tags do not convert into each other.
template <class Tag>
struct Id {
  std::string value;

  Id() = default;
  explicit Id(std::string v) : value(std::move(v)) {}
  explicit Id(const char* v) : value(v) {}

  const std::string& str() const noexcept { return value; }
  friend auto operator<=>(const Id&, const Id&) = default;
  friend std::ostream& operator<<(std::ostream& os, const Id& id) { return os << id.value; }
};

using ItemId = Id<struct ItemIdTag>;
using SprintId = Id<struct SprintIdTag>;
using ProjectId = Id<struct ProjectIdTag>;

// Ordinal encoding: comparing priorities is an integer comparison.
enum class Priority : int { Low = 0, Medium = 1, High = 2, Critical = 3 };

inline constexpr Priority kAllPriorities[] = {Priority::Critical, Priority::High,
                                              Priority::Medium, Priority::Low};

inline constexpr int ordinal(Priority p) noexcept { return static_cast<int>(p); }

inline std::string_view to_string(Priority p) {
  switch (p) {
    case Priority::Critical: return "Critical";
    case Priority::High: return "High";
    case Priority::Medium: return "Medium";
    case Priority::Low: return "Low";
  }
  return "?";
}

inline Priority parse_priority(std::string_view s) {
  for (Priority p : kAllPriorities) {
    if (to_string(p) == s) return p;
  }
  throw InvalidArgumentError("unknown priority '" + std::string(s) + "'");
}

inline std::ostream& operator<<(std::ostream& os, Priority p) { return os << to_string(p); }

enum class Status { Todo, InProgress, Done };

inline std::string_view to_string(Status s) {
  switch (s) {
    case Status::Todo: return "Todo";
    case Status::InProgress: return "InProgress";
    case Status::Done: return "Done";
  }
  return "?";
}

inline Status parse_status(std::string_view s) {
  for (Status st : {Status::Todo, Status::InProgress, Status::Done}) {
    if (to_string(st) == s) return st;
  }
  throw InvalidArgumentError("unknown status '" + std::string(s) + "'");
}

inline std::ostream& operator<<(std::ostream& os, Status s) { return os << to_string(s); }

struct ProductBacklogItem {
  ItemId id;
  std::string title;
  std::string description;
  Priority priority = Priority::Medium;
  int story_points = 0;
  Status status = Status::Todo;
  bool is_epic = false;
  std::set<ItemId> depends_on;  // prerequisites of this item
  std::optional<SprintId> sprint_id;
  std::int64_t inserted_at = 0;

  friend bool operator==(const ProductBacklogItem&, const ProductBacklogItem&) = default;
};

struct Sprint {
  SprintId id;
  std::string name;
  Date start_date;
  Date end_date;
  int ordinal = 1;  // 1-based position in the project

  friend bool operator==(const Sprint&, const Sprint&) = default;
};

// Builds a sprint, refusing an empty or inverted date range.
inline Sprint make_sprint(SprintId id, std::string name, Date start, Date end, int ordinal) {
  if (!(start < end)) {
    throw InvalidArgumentError("sprint " + id.value + ": end date " + format_date(end) +
                               " must be after start date " + format_date(start));
  }
  return Sprint{std::move(id), std::move(name), start, end, ordinal};
}

struct StatusEvent {
  ItemId item_id;
  Instant timestamp;
  Status old_status = Status::Todo;
  Status new_status = Status::Todo;

  friend bool operator==(const StatusEvent&, const StatusEvent&) = default;
};

struct Project {
  ProjectId id;
  std::string name;
  std::vector<ProductBacklogItem> backlog;
  std::vector<Sprint> sprints;  // ordered by ordinal
  int expected_sprint_count = 1;
  std::vector<StatusEvent> events;
  std::int64_t version = 0;
  // Zone used to bucket timestamps into calendar days.
  int utc_offset_minutes = 0;

  friend bool operator==(const Project&, const Project&) = default;
};

// ---------------------------------------------------------------------------
// Lookup

inline const ProductBacklogItem* find_item(const Project& p, const ItemId& id) {
  auto it = std::find_if(p.backlog.begin(), p.backlog.end(),
                         [&](const ProductBacklogItem& i) { return i.id == id; });
  return it == p.backlog.end() ? nullptr : &*it;
}

inline const ProductBacklogItem& get_item(const Project& p, const ItemId& id) {
  if (const auto* item = find_item(p, id)) return *item;
  throw NotFoundError("unknown item '" + id.value + "'");
}

inline ProductBacklogItem& get_item(Project& p, const ItemId& id) {
  return const_cast<ProductBacklogItem&>(get_item(std::as_const(p), id));
}

inline const Sprint* find_sprint(const Project& p, const SprintId& id) {
  auto it = std::find_if(p.sprints.begin(), p.sprints.end(),
                         [&](const Sprint& s) { return s.id == id; });
  return it == p.sprints.end() ? nullptr : &*it;
}

inline const Sprint& get_sprint(const Project& p, const SprintId& id) {
  if (const auto* s = find_sprint(p, id)) return *s;
  throw NotFoundError("unknown sprint '" + id.value + "'");
}

// Sprint ordinal of an item, or nullopt when it sits in the backlog.
inline std::optional<int> sprint_ordinal_of(const Project& p, const ProductBacklogItem& item) {
  if (!item.sprint_id) return std::nullopt;
  if (const auto* s = find_sprint(p, *item.sprint_id)) return s->ordinal;
  return std::nullopt;
}

// Selected(k), in insertion order.
inline std::vector<const ProductBacklogItem*> sprint_items(const Project& p, const SprintId& id) {
  std::vector<const ProductBacklogItem*> out;
  for (const auto& item : p.backlog) {
    if (item.sprint_id == id) out.push_back(&item);
  }
  std::stable_sort(out.begin(), out.end(), [](const auto* a, const auto* b) {
    return a->inserted_at < b->inserted_at;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Status history

// Status of an item before any recorded event.
inline Status initial_status(const Project& p, const ProductBacklogItem& item) {
  for (const auto& e : p.events) {
    if (e.item_id == item.id) return e.old_status;
  }
  return item.status;
}

// Status of `item` taking into account only events strictly before `t`.
inline Status status_at(const Project& p, const ProductBacklogItem& item, Instant t) {
  Status s = initial_status(p, item);
  for (const auto& e : p.events) {
    if (e.item_id == item.id && e.timestamp < t) s = e.new_status;
  }
  return s;
}

// Replays the whole log from each item's initial status.
inline std::map<ItemId, Status> replay_statuses(const Project& p) {
  std::map<ItemId, Status> out;
  for (const auto& item : p.backlog) out[item.id] = initial_status(p, item);
  for (const auto& e : p.events) out[e.item_id] = e.new_status;
  return out;
}

// ---------------------------------------------------------------------------
// Velocities

inline std::int64_t total_story_points(const Project& p) {
  std::int64_t sum = 0;
  for (const auto& item : p.backlog) sum += item.story_points;
  return sum;
}

// Total backlog effort divided by the expected sprint count; exact.
inline Rational ideal_velocity(const Project& p) {
  if (p.expected_sprint_count < 1) {
    throw InvalidArgumentError("expected_sprint_count must be >= 1");
  }
  return Rational{total_story_points(p), p.expected_sprint_count};
}

inline std::int64_t expected_velocity(const Project& p, const SprintId& sprint) {
  get_sprint(p, sprint);
  std::int64_t sum = 0;
  for (const auto* item : sprint_items(p, sprint)) sum += item->story_points;
  return sum;
}

// Story points of the sprint's items that are Done as of `as_of` (default:
// the end of the sprint's last day).
inline std::int64_t actual_velocity(const Project& p, const SprintId& sprint,
                                    std::optional<Instant> as_of = std::nullopt) {
  const Sprint& s = get_sprint(p, sprint);
  Instant t = as_of.value_or(end_of_day(s.end_date, p.utc_offset_minutes));
  std::int64_t sum = 0;
  for (const auto* item : sprint_items(p, sprint)) {
    if (status_at(p, *item, t) == Status::Done) sum += item->story_points;
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Structural invariants

// Throws InvariantError on the first violated structural invariant. Business
// rules (dates, priorities, cycles) are reported by the constraint checks,
// not here.
inline void check_structure(const Project& p) {
  auto fail = [&](const std::string& msg) {
    throw InvariantError("project '" + p.id.value + "': " + msg);
  };
  if (p.expected_sprint_count < 1) fail("expected_sprint_count must be >= 1");

  std::set<SprintId> sprint_ids;
  for (std::size_t k = 0; k < p.sprints.size(); ++k) {
    const Sprint& s = p.sprints[k];
    if (!sprint_ids.insert(s.id).second) fail("duplicate sprint id '" + s.id.value + "'");
    if (s.ordinal != static_cast<int>(k) + 1) {
      fail("sprint '" + s.id.value + "' has ordinal " + std::to_string(s.ordinal) +
           ", expected " + std::to_string(k + 1));
    }
    if (k > 0 && s.start_date < p.sprints[k - 1].start_date) {
      fail("sprint '" + s.id.value + "' starts before the preceding sprint");
    }
  }

  std::set<ItemId> item_ids;
  for (const auto& item : p.backlog) {
    if (!item_ids.insert(item.id).second) fail("duplicate item id '" + item.id.value + "'");
    if (item.story_points < 0) fail("item '" + item.id.value + "' has negative story points");
    if (item.sprint_id && !sprint_ids.count(*item.sprint_id)) {
      fail("item '" + item.id.value + "' references unknown sprint '" + item.sprint_id->value +
           "'");
    }
  }
  for (const auto& item : p.backlog) {
    for (const auto& dep : item.depends_on) {
      if (dep == item.id) fail("item '" + item.id.value + "' depends on itself");
      if (!item_ids.count(dep)) {
        fail("item '" + item.id.value + "' depends on unknown item '" + dep.value + "'");
      }
    }
  }

  std::map<ItemId, const StatusEvent*> last;
  for (const auto& e : p.events) {
    if (!item_ids.count(e.item_id)) fail("event for unknown item '" + e.item_id.value + "'");
    if (auto it = last.find(e.item_id); it != last.end()) {
      if (e.timestamp < it->second->timestamp) {
        fail("events of item '" + e.item_id.value + "' are not chronological");
      }
      if (e.old_status != it->second->new_status) {
        fail("events of item '" + e.item_id.value + "' do not chain");
      }
    }
    last[e.item_id] = &e;
  }
  for (const auto& [id, e] : last) {
    if (get_item(p, id).status != e->new_status) {
      fail("item '" + id.value + "' status disagrees with its event log");
    }
  }
}

}  // namespace retroai

#endif  // RETROAI_DOMAIN_HPP
