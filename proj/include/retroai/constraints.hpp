#ifndef RETROAI_CONSTRAINTS_HPP
#define RETROAI_CONSTRAINTS_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "retroai/domain.hpp"

namespace retroai {

// Rule codes are part of the wire contract; to_string yields the stable code.
enum class Rule {
  C1Ordering,
  C2Capacity,
  C3Epic,
  C4Dates,
  DepPriority,
  DepCycle,
  PriorityLocked,
  UnderUtilized,
};

inline constexpr Rule kAllRules[] = {Rule::C1Ordering,  Rule::C2Capacity,  Rule::C3Epic,
                                     Rule::C4Dates,     Rule::DepPriority, Rule::DepCycle,
                                     Rule::PriorityLocked, Rule::UnderUtilized};

inline std::string_view to_string(Rule r) {
  switch (r) {
    case Rule::C1Ordering: return "C1_ORDERING";
    case Rule::C2Capacity: return "C2_CAPACITY";
    case Rule::C3Epic: return "C3_EPIC";
    case Rule::C4Dates: return "C4_DATES";
    case Rule::DepPriority: return "DEP_PRIORITY";
    case Rule::DepCycle: return "DEP_CYCLE";
    case Rule::PriorityLocked: return "PRIORITY_LOCKED";
    case Rule::UnderUtilized: return "UNDER_UTILIZED";
  }
  return "?";
}

inline Rule parse_rule(std::string_view s) {
  for (Rule r : kAllRules) {
    if (to_string(r) == s) return r;
  }
  throw InvalidArgumentError("unknown rule code '" + std::string(s) + "'");
}

enum class Severity { Error, Warning, Info };

inline std::string_view to_string(Severity s) {
  switch (s) {
    case Severity::Error: return "Error";
    case Severity::Warning: return "Warning";
    case Severity::Info: return "Info";
  }
  return "?";
}

inline Severity parse_severity(std::string_view s) {
  for (Severity v : {Severity::Error, Severity::Warning, Severity::Info}) {
    if (to_string(v) == s) return v;
  }
  throw InvalidArgumentError("unknown severity '" + std::string(s) + "'");
}

// Fixed rule -> severity table. The one exception is the epic note: an item
// flagged as epic that exceeds the ideal velocity yields C3_EPIC at Info.
inline constexpr Severity severity_of(Rule r) {
  switch (r) {
    case Rule::DepPriority:
    case Rule::DepCycle:
    case Rule::PriorityLocked:
    case Rule::C4Dates: return Severity::Error;
    case Rule::C1Ordering:
    case Rule::C2Capacity:
    case Rule::C3Epic: return Severity::Warning;
    case Rule::UnderUtilized: return Severity::Info;
  }
  return Severity::Error;
}

struct ValidationIssue {
  Rule rule = Rule::C1Ordering;
  Severity severity = Severity::Warning;
  std::vector<ItemId> item_ids;
  std::vector<SprintId> sprint_ids;
  std::string message;

  friend bool operator==(const ValidationIssue&, const ValidationIssue&) = default;
};

inline ValidationIssue make_issue(Rule rule, std::vector<ItemId> items,
                                  std::vector<SprintId> sprints, std::string message) {
  return {rule, severity_of(rule), std::move(items), std::move(sprints), std::move(message)};
}

struct ValidationDecision {
  bool accepted = true;
  std::vector<ValidationIssue> issues;
};

inline bool has_severity(const std::vector<ValidationIssue>& issues, Severity s) {
  return std::any_of(issues.begin(), issues.end(),
                     [s](const ValidationIssue& i) { return i.severity == s; });
}

// Thrown when an operation is refused because of Error-severity issues.
class ConstraintViolation : public Error {
 public:
  explicit ConstraintViolation(std::vector<ValidationIssue> issues)
      : Error(issues.empty() ? std::string("constraint violation") : issues.front().message),
        issues_(std::move(issues)) {}
  const std::vector<ValidationIssue>& issues() const noexcept { return issues_; }

 private:
  std::vector<ValidationIssue> issues_;
};

inline ValidationDecision make_decision(std::vector<ValidationIssue> issues) {
  bool accepted = !has_severity(issues, Severity::Error);
  return {accepted, std::move(issues)};
}

// Story points rendered without a trailing ".0" when integral.
inline std::string format_points(const Rational& r) {
  return r.den() == 1 ? std::to_string(r.num()) : r.to_decimal();
}

struct CapacityThresholds {
  // Non-empty sprints planned below this fraction of the ideal velocity get
  // an UNDER_UTILIZED note.
  Rational under_utilized = Rational{3, 5};
};

namespace detail {

// Dependency graph over backlog indices; edge u -> v means u depends on v.
struct DependencyGraph {
  std::vector<ItemId> ids;  // sorted
  std::map<ItemId, std::size_t> index;
  std::vector<std::vector<std::size_t>> prereqs;
  std::vector<std::vector<std::size_t>> dependents;

  explicit DependencyGraph(const Project& p) {
    for (const auto& item : p.backlog) ids.push_back(item.id);
    std::sort(ids.begin(), ids.end());
    for (std::size_t i = 0; i < ids.size(); ++i) index[ids[i]] = i;
    prereqs.resize(ids.size());
    dependents.resize(ids.size());
    for (const auto& item : p.backlog) {
      std::size_t u = index.at(item.id);
      for (const auto& dep : item.depends_on) {
        auto it = index.find(dep);
        if (it == index.end() || it->second == u) continue;
        prereqs[u].push_back(it->second);
        dependents[it->second].push_back(u);
      }
    }
    for (auto& v : prereqs) std::sort(v.begin(), v.end());
    for (auto& v : dependents) std::sort(v.begin(), v.end());
  }

  std::size_t size() const { return ids.size(); }

  // Vertices reachable from `from` along `edges` (excluding `from` unless on a cycle).
  std::vector<bool> reachable_from(std::size_t from,
                                   const std::vector<std::vector<std::size_t>>& edges) const {
    std::vector<bool> seen(size(), false);
    std::vector<std::size_t> stack{from};
    while (!stack.empty()) {
      std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t v : edges[u]) {
        if (!seen[v]) {
          seen[v] = true;
          stack.push_back(v);
        }
      }
    }
    return seen;
  }
};

// Johnson's elementary-circuit enumeration. Each circuit is reported starting
// at its least vertex.
class CircuitFinder {
 public:
  explicit CircuitFinder(const DependencyGraph& g) : g_(g) {}

  std::vector<std::vector<std::size_t>> run() {
    const std::size_t n = g_.size();
    blocked_.assign(n, false);
    block_map_.assign(n, {});
    for (start_ = 0; start_ < n; ++start_) {
      for (std::size_t v = start_; v < n; ++v) {
        blocked_[v] = false;
        block_map_[v].clear();
      }
      circuit(start_);
    }
    return std::move(out_);
  }

 private:
  bool circuit(std::size_t v) {
    bool found = false;
    path_.push_back(v);
    blocked_[v] = true;
    for (std::size_t w : g_.prereqs[v]) {
      if (w < start_) continue;
      if (w == start_) {
        out_.push_back(path_);
        found = true;
      } else if (!blocked_[w] && circuit(w)) {
        found = true;
      }
    }
    if (found) {
      unblock(v);
    } else {
      for (std::size_t w : g_.prereqs[v]) {
        if (w >= start_) block_map_[w].insert(v);
      }
    }
    path_.pop_back();
    return found;
  }

  void unblock(std::size_t u) {
    blocked_[u] = false;
    auto pending = std::move(block_map_[u]);
    block_map_[u].clear();
    for (std::size_t w : pending) {
      if (blocked_[w]) unblock(w);
    }
  }

  const DependencyGraph& g_;
  std::size_t start_ = 0;
  std::vector<bool> blocked_;
  std::vector<std::set<std::size_t>> block_map_;
  std::vector<std::size_t> path_;
  std::vector<std::vector<std::size_t>> out_;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// C1: an item must not sit in an earlier sprint than a higher-priority item.

inline std::vector<ValidationIssue> check_backlog_ordering(const Project& p) {
  // Bucket assigned items by sprint ordinal, then sweep sprints in order
  // keeping earlier items grouped by priority.
  std::map<int, std::vector<const ProductBacklogItem*>> by_sprint;
  for (const auto& item : p.backlog) {
    if (auto ord = sprint_ordinal_of(p, item)) by_sprint[*ord].push_back(&item);
  }
  std::vector<const ProductBacklogItem*> earlier[4];
  std::vector<ValidationIssue> out;
  for (const auto& [ord, items] : by_sprint) {
    for (const auto* later : items) {
      for (int q = 0; q < ordinal(later->priority); ++q) {
        for (const auto* early : earlier[q]) {
          out.push_back(make_issue(
              Rule::C1Ordering, {early->id, later->id}, {*early->sprint_id, *later->sprint_id},
              std::string(to_string(early->priority)) + " item '" + early->id.value +
                  "' is planned before " + std::string(to_string(later->priority)) + " item '" +
                  later->id.value + "'"));
        }
      }
    }
    for (const auto* item : items) earlier[ordinal(item->priority)].push_back(item);
  }
  std::sort(out.begin(), out.end(),
            [](const ValidationIssue& a, const ValidationIssue& b) { return a.item_ids < b.item_ids; });
  return out;
}

// ---------------------------------------------------------------------------
// C2: planned effort of each sprint must not exceed the ideal velocity.

inline std::vector<ValidationIssue> check_sprint_capacity(const Project& p,
                                                          const CapacityThresholds& t = {}) {
  std::vector<ValidationIssue> out;
  const Rational ideal = ideal_velocity(p);
  for (const auto& s : p.sprints) {
    auto items = sprint_items(p, s.id);
    const Rational planned{expected_velocity(p, s.id)};
    if (planned > ideal) {
      std::vector<ItemId> ids;
      for (const auto* item : items) ids.push_back(item->id);
      out.push_back(make_issue(Rule::C2Capacity, std::move(ids), {s.id},
                               "sprint '" + s.name + "' is over capacity: " +
                                   format_points(planned) + " > " + format_points(ideal)));
    } else if (!items.empty() && planned < t.under_utilized * ideal) {
      out.push_back(make_issue(Rule::UnderUtilized, {}, {s.id},
                               "sprint '" + s.name + "' is under-utilised: " +
                                   format_points(planned) + " of " + format_points(ideal)));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// C3: a single item must not exceed the ideal velocity unless marked as epic.

inline std::vector<ValidationIssue> check_epic_threshold(const Project& p) {
  std::vector<ValidationIssue> out;
  const Rational ideal = ideal_velocity(p);
  for (const auto& item : p.backlog) {
    if (Rational{item.story_points} <= ideal) continue;
    std::string size = std::to_string(item.story_points) + " > " + format_points(ideal);
    if (item.is_epic) {
      ValidationIssue note = make_issue(
          Rule::C3Epic, {item.id}, {},
          "epic '" + item.id.value + "' (" + size + ") must be decomposed before planning");
      note.severity = Severity::Info;
      out.push_back(std::move(note));
    } else {
      out.push_back(make_issue(Rule::C3Epic, {item.id}, {},
                               "item '" + item.id.value + "' is too large (" + size +
                                   "); decompose it or label it as an epic"));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// C4: every sprint starts strictly before it ends.

inline std::optional<ValidationIssue> check_sprint_date(const Sprint& s) {
  if (s.start_date < s.end_date) return std::nullopt;
  return make_issue(Rule::C4Dates, {}, {s.id},
                    "sprint '" + s.name + "' ends (" + format_date(s.end_date) +
                        ") before it starts (" + format_date(s.start_date) + ")");
}

inline std::vector<ValidationIssue> check_sprint_dates(const Project& p) {
  std::vector<ValidationIssue> out;
  for (const auto& s : p.sprints) {
    if (auto issue = check_sprint_date(s)) out.push_back(std::move(*issue));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Dependency and priority rules

// Would making `dependent` depend on `prerequisite` keep the backlog valid?
// Rejects lower-priority prerequisites and any edge closing a directed cycle.
inline ValidationDecision validate_dependency_addition(const Project& p, const ItemId& dependent,
                                                       const ItemId& prerequisite) {
  const auto& dep = get_item(p, dependent);
  const auto& pre = get_item(p, prerequisite);
  if (dependent == prerequisite) {
    throw InvalidArgumentError("item '" + dependent.value + "' cannot depend on itself");
  }
  std::vector<ValidationIssue> issues;
  if (pre.priority < dep.priority) {
    issues.push_back(make_issue(
        Rule::DepPriority, {dependent, prerequisite}, {},
        std::string(to_string(dep.priority)) + " item '" + dependent.value +
            "' can depend only on items with " + std::string(to_string(dep.priority)) +
            " or higher priority; '" + prerequisite.value + "' is " +
            std::string(to_string(pre.priority))));
  }
  detail::DependencyGraph g(p);
  if (g.reachable_from(g.index.at(prerequisite), g.prereqs)[g.index.at(dependent)]) {
    issues.push_back(make_issue(Rule::DepCycle, {dependent, prerequisite}, {},
                                "'" + prerequisite.value + "' already depends on '" +
                                    dependent.value + "'; the dependency would form a cycle"));
  }
  return make_decision(std::move(issues));
}

// An item's priority must stay at or above every dependent's priority and at
// or below every prerequisite's priority.
inline ValidationDecision validate_priority_change(const Project& p, const ItemId& item_id,
                                                   Priority new_priority) {
  const auto& item = get_item(p, item_id);
  std::vector<ValidationIssue> issues;
  for (const auto& other : p.backlog) {
    if (other.id == item_id) continue;
    if (other.depends_on.count(item_id) && new_priority < other.priority) {
      issues.push_back(make_issue(Rule::PriorityLocked, {item_id, other.id}, {},
                                  "'" + item_id.value + "' cannot be lowered to " +
                                      std::string(to_string(new_priority)) + ": " +
                                      std::string(to_string(other.priority)) + " item '" +
                                      other.id.value + "' depends on it"));
    }
  }
  for (const auto& pre_id : item.depends_on) {
    const auto* pre = find_item(p, pre_id);
    if (pre && new_priority > pre->priority) {
      issues.push_back(make_issue(Rule::PriorityLocked, {item_id, pre_id}, {},
                                  "'" + item_id.value + "' cannot be raised to " +
                                      std::string(to_string(new_priority)) +
                                      ": it depends on " + std::string(to_string(pre->priority)) +
                                      " item '" + pre_id.value + "'"));
    }
  }
  return make_decision(std::move(issues));
}

// Every item `item_id` may start depending on: equal or higher priority, and
// not already (transitively) depending on `item_id`.
inline std::set<ItemId> allowed_prerequisites(const Project& p, const ItemId& item_id) {
  const auto& item = get_item(p, item_id);
  detail::DependencyGraph g(p);
  auto upstream = g.reachable_from(g.index.at(item_id), g.dependents);
  std::set<ItemId> out;
  for (const auto& other : p.backlog) {
    if (other.id == item_id || other.priority < item.priority) continue;
    if (upstream[g.index.at(other.id)]) continue;
    out.insert(other.id);
  }
  return out;
}

// All elementary cycles of the dependency graph, each rotated to start at its
// least id and following "depends on" edges; the list is sorted.
inline std::vector<std::vector<ItemId>> detect_cycles(const Project& p) {
  detail::DependencyGraph g(p);
  std::vector<std::vector<ItemId>> out;
  for (const auto& c : detail::CircuitFinder(g).run()) {
    std::vector<ItemId> ids;
    ids.reserve(c.size());
    for (std::size_t v : c) ids.push_back(g.ids[v]);
    out.push_back(std::move(ids));
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::string describe_cycle(const std::vector<ItemId>& cycle) {
  std::string s;
  for (const auto& id : cycle) s += id.value + " -> ";
  return s + (cycle.empty() ? std::string{} : cycle.front().value);
}

// Every check over the whole project, ordered by rule code then item ids.
inline std::vector<ValidationIssue> validate_project(const Project& p,
                                                     const CapacityThresholds& t = {}) {
  std::vector<ValidationIssue> out;
  auto append = [&](std::vector<ValidationIssue> v) {
    out.insert(out.end(), std::make_move_iterator(v.begin()), std::make_move_iterator(v.end()));
  };
  append(check_backlog_ordering(p));
  append(check_sprint_capacity(p, t));
  append(check_epic_threshold(p));
  append(check_sprint_dates(p));
  for (auto& cycle : detect_cycles(p)) {
    std::string msg = "circular dependency: " + describe_cycle(cycle);
    out.push_back(make_issue(Rule::DepCycle, std::move(cycle), {}, std::move(msg)));
  }
  for (const auto& item : p.backlog) {
    for (const auto& pre_id : item.depends_on) {
      const auto* pre = find_item(p, pre_id);
      if (pre && pre->priority < item.priority) {
        out.push_back(make_issue(Rule::DepPriority, {item.id, pre_id}, {},
                                 std::string(to_string(item.priority)) + " item '" +
                                     item.id.value + "' depends on lower-priority " +
                                     std::string(to_string(pre->priority)) + " item '" +
                                     pre_id.value + "'"));
      }
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const ValidationIssue& a, const ValidationIssue& b) {
    return std::forward_as_tuple(to_string(a.rule), a.item_ids, a.sprint_ids) <
           std::forward_as_tuple(to_string(b.rule), b.item_ids, b.sprint_ids);
  });
  return out;
}

}  // namespace retroai

#endif  // RETROAI_CONSTRAINTS_HPP
