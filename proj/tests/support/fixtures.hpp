#ifndef RETROAI_TESTS_FIXTURES_HPP
#define RETROAI_TESTS_FIXTURES_HPP

#include <initializer_list>
#include <string>

#include "retroai/domain.hpp"

namespace retroai::testing {

inline ProductBacklogItem make_item(const std::string& id, Priority priority, int points,
                                    std::initializer_list<const char*> deps = {},
                                    std::int64_t inserted_at = 0) {
  ProductBacklogItem item;
  item.id = ItemId{id};
  item.title = "Story " + id;
  item.priority = priority;
  item.story_points = points;
  for (const char* d : deps) item.depends_on.insert(ItemId{d});
  item.inserted_at = inserted_at;
  return item;
}

inline Sprint make_test_sprint(const std::string& id, const char* start, const char* end, int ordinal) {
  return Sprint{SprintId{id}, "Sprint " + std::to_string(ordinal), parse_date(start), parse_date(end),
                ordinal};
}

// Six items, 20 story points, two expected sprints, no sprints yet.
inline Project make_p1() {
  Project p;
  p.id = ProjectId{"p1"};
  p.name = "P1";
  p.expected_sprint_count = 2;
  p.version = 1;
  p.backlog = {
      make_item("A", Priority::Critical, 5, {}, 1),
      make_item("B", Priority::High, 3, {"A"}, 2),
      make_item("C", Priority::High, 5, {}, 3),
      make_item("D", Priority::Medium, 2, {"B"}, 4),
      make_item("E", Priority::Low, 3, {}, 5),
      make_item("F", Priority::Low, 2, {"E"}, 6),
  };
  return p;
}

}  // namespace retroai::testing

#endif  // RETROAI_TESTS_FIXTURES_HPP
