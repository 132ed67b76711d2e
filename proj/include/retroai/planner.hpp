#ifndef RETROAI_PLANNER_HPP
#define RETROAI_PLANNER_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "retroai/constraints.hpp"
#include "retroai/domain.hpp"

namespace retroai {

struct PlanOptions {
  // Story points per sprint; defaults to the project's ideal velocity.
  std::optional<Rational> capacity;
  // Done items keep their sprint and consume its capacity.
  bool respect_existing = true;
  // Items that do not fit into this many sprints are excluded.
  std::optional<int> max_sprints;
};

struct SprintPlan {
  std::map<ItemId, int> assignments;  // item -> sprint ordinal
  int sprint_count = 0;
  std::vector<ValidationIssue> warnings;
  std::vector<ItemId> excluded;
  Rational capacity;

  // Items planned into sprint `ordinal`, sorted by id.
  std::vector<ItemId> sprint(int ordinal) const {
    std::vector<ItemId> out;
    for (const auto& [id, ord] : assignments) {
      if (ord == ordinal) out.push_back(id);
    }
    return out;
  }
};

// Dependency-aware priority-ordered greedy packing.
//
// Items whose prerequisites are all placed are "available". The next item is
// the available one with the highest priority, then most story points, then
// earliest insertion. If it does not fit the current sprint, the first
// available item of the same priority that fits is taken instead; when none
// fits the sprint is closed. Because every pick has the highest priority
// still remaining (prerequisites never have lower priority than their
// dependents in a valid backlog), priorities never increase from one sprint
// to the next.
inline SprintPlan plan_sprints(const Project& p, const PlanOptions& options = {}) {
  if (auto cycles = detect_cycles(p); !cycles.empty()) {
    throw PreconditionError("cannot plan a backlog with circular dependencies: " +
                            describe_cycle(cycles.front()));
  }
  SprintPlan plan;
  if (options.capacity) {
    if (*options.capacity <= Rational{0}) throw InvalidArgumentError("capacity must be positive");
    plan.capacity = *options.capacity;
  } else {
    plan.capacity = ideal_velocity(p);
  }
  if (options.max_sprints && *options.max_sprints < 1) {
    throw InvalidArgumentError("max_sprints must be at least 1");
  }
  const Rational cap = plan.capacity;

  std::map<int, std::int64_t> fixed_load;
  std::set<ItemId> placed;
  for (const auto& item : p.backlog) {
    if (item.status != Status::Done) continue;
    placed.insert(item.id);
    if (!options.respect_existing) continue;
    if (auto ord = sprint_ordinal_of(p, item)) {
      plan.assignments[item.id] = *ord;
      fixed_load[*ord] += item.story_points;
    }
  }

  std::vector<const ProductBacklogItem*> pending;
  std::set<ItemId> excluded;
  for (const auto& item : p.backlog) {
    if (item.status == Status::Done) continue;
    if (Rational{item.story_points} > cap) {
      excluded.insert(item.id);
      plan.warnings.push_back(make_issue(
          Rule::C3Epic, {item.id}, {},
          "item '" + item.id.value + "' (" + std::to_string(item.story_points) +
              ") exceeds the sprint capacity " + format_points(cap) + " and was not planned"));
    } else {
      pending.push_back(&item);
    }
  }
  // Anything waiting on an excluded item can never become available.
  for (bool changed = true; changed;) {
    changed = false;
    for (auto it = pending.begin(); it != pending.end();) {
      const auto* item = *it;
      auto blocker = std::find_if(item->depends_on.begin(), item->depends_on.end(),
                                  [&](const ItemId& d) { return excluded.count(d) > 0; });
      if (blocker == item->depends_on.end()) {
        ++it;
        continue;
      }
      excluded.insert(item->id);
      plan.warnings.push_back(make_issue(Rule::C3Epic, {item->id, *blocker}, {},
                                         "item '" + item->id.value +
                                             "' depends on unplanned item '" + blocker->value +
                                             "' and was not planned"));
      it = pending.erase(it);
      changed = true;
    }
  }

  auto pick_order = [](const ProductBacklogItem* a, const ProductBacklogItem* b) {
    return std::make_tuple(-ordinal(a->priority), -a->story_points, a->inserted_at, a->id) <
           std::make_tuple(-ordinal(b->priority), -b->story_points, b->inserted_at, b->id);
  };
  std::sort(pending.begin(), pending.end(), pick_order);

  int sprint = 1;
  Rational used{fixed_load[1]};
  while (!pending.empty()) {
    if (options.max_sprints && sprint > *options.max_sprints) {
      for (const auto* item : pending) {
        excluded.insert(item->id);
        plan.warnings.push_back(make_issue(
            Rule::C2Capacity, {item->id}, {},
            "item '" + item->id.value + "' does not fit into " +
                std::to_string(*options.max_sprints) + " sprints and was not planned"));
      }
      pending.clear();
      break;
    }
    // `pending` stays sorted, so the first available entry is the top pick.
    auto available = [&](const ProductBacklogItem* item) {
      return std::all_of(item->depends_on.begin(), item->depends_on.end(),
                         [&](const ItemId& d) { return placed.count(d) > 0; });
    };
    auto top = std::find_if(pending.begin(), pending.end(), available);
    if (top == pending.end()) {
      throw PreconditionError("item '" + pending.front()->id.value +
                              "' depends on an item outside the backlog");
    }
    auto chosen = pending.end();
    for (auto it = top; it != pending.end() && (*it)->priority == (*top)->priority; ++it) {
      if (available(*it) && used + Rational{(*it)->story_points} <= cap) {
        chosen = it;
        break;
      }
    }
    if (chosen == pending.end()) {
      ++sprint;
      used = Rational{fixed_load[sprint]};
      continue;
    }
    const auto* item = *chosen;
    plan.assignments[item->id] = sprint;
    placed.insert(item->id);
    used = used + Rational{item->story_points};
    pending.erase(chosen);
  }

  for (const auto& [id, ord] : plan.assignments) plan.sprint_count = std::max(plan.sprint_count, ord);
  plan.excluded.assign(excluded.begin(), excluded.end());

  if (plan.sprint_count > p.expected_sprint_count) {
    plan.warnings.push_back(make_issue(
        Rule::C2Capacity, {}, {},
        "plan needs " + std::to_string(plan.sprint_count) + " sprints but the project expects " +
            std::to_string(p.expected_sprint_count) +
            "; consider reducing the scope or extending the project"));
  }
  for (const auto& item : p.backlog) {
    for (const auto& pre_id : item.depends_on) {
      const auto* pre = find_item(p, pre_id);
      if (pre && pre->priority < item.priority) {
        plan.warnings.push_back(make_issue(Rule::DepPriority, {item.id, pre_id}, {},
                                           "item '" + item.id.value +
                                               "' depends on lower-priority item '" +
                                               pre_id.value + "'; the plan may break ordering"));
      }
    }
  }
  return plan;
}

// Calendar layout used when a plan needs sprints the project does not have yet.
struct SprintLayout {
  Date first_start;       // start of sprint 1 when the project has no sprints
  int length_days = 14;   // calendar days per new sprint, inclusive
};

// Writes a plan into the project: creates missing sprints, moves every
// planned item and returns excluded items to the backlog. Done items are
// never moved. Returns a new project value with version + 1.
inline Project apply_plan(const Project& p, const SprintPlan& plan, const SprintLayout& layout) {
  if (layout.length_days < 2) throw InvalidArgumentError("sprint length must be >= 2 days");
  Project out = p;
  std::set<SprintId> taken;
  for (const auto& s : out.sprints) taken.insert(s.id);
  while (static_cast<int>(out.sprints.size()) < plan.sprint_count) {
    int ord = static_cast<int>(out.sprints.size()) + 1;
    Date start = out.sprints.empty() ? layout.first_start
                                     : add_days(out.sprints.back().end_date, 1);
    if (!out.sprints.empty() && start < out.sprints.back().start_date) {
      start = out.sprints.back().start_date;
    }
    SprintId id{"S" + std::to_string(ord)};
    for (int n = 2; taken.count(id); ++n) id = SprintId{"S" + std::to_string(ord) + "-" + std::to_string(n)};
    taken.insert(id);
    out.sprints.push_back(
        make_sprint(id, "Sprint " + std::to_string(ord), start, add_days(start, layout.length_days - 1), ord));
  }
  for (auto& item : out.backlog) {
    if (item.status == Status::Done) continue;
    if (auto it = plan.assignments.find(item.id); it != plan.assignments.end()) {
      item.sprint_id = out.sprints.at(static_cast<std::size_t>(it->second - 1)).id;
    } else {
      item.sprint_id.reset();
    }
  }
  out.version = p.version + 1;
  return out;
}

}  // namespace retroai

#endif  // RETROAI_PLANNER_HPP
