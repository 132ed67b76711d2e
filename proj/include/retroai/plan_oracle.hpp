#ifndef RETROAI_PLAN_ORACLE_HPP
#define RETROAI_PLAN_ORACLE_HPP

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "retroai/constraints.hpp"
#include "retroai/domain.hpp"

namespace retroai {

inline constexpr std::size_t kOracleMaxItems = 12;

struct OracleResult {
  std::optional<int> min_sprints;  // nullopt when infeasible
  std::vector<ItemId> witness;     // offending items when infeasible
  std::string reason;

  bool feasible() const { return min_sprints.has_value(); }
};

// Exact minimum number of sprints for the open (non-Done) backlog items such
// that every sprint holds at most `capacity` points, no item sits in an
// earlier sprint than a higher-priority item, and prerequisites are in the
// same or an earlier sprint.
//
// A plan is an ordered sequence of disjoint item sets. Dynamic programming
// over the set of already-scheduled items: the next sprint S may follow the
// scheduled set P when S fits, all prerequisites of S lie in P or S, and the
// lowest priority in P is at least the highest priority in S.
inline OracleResult exhaustive_plan_oracle(const Project& p, const Rational& capacity) {
  std::vector<const ProductBacklogItem*> items;
  for (const auto& item : p.backlog) {
    if (item.status != Status::Done) items.push_back(&item);
  }
  if (items.size() > kOracleMaxItems) {
    throw SizeError("oracle is limited to " + std::to_string(kOracleMaxItems) + " items, got " +
                    std::to_string(items.size()));
  }
  OracleResult result;
  for (const auto* item : items) {
    if (Rational{item->story_points} > capacity) result.witness.push_back(item->id);
  }
  if (!result.witness.empty()) {
    result.reason = "items exceed the sprint capacity";
    return result;
  }
  if (auto cycles = detect_cycles(p); !cycles.empty()) {
    result.witness = cycles.front();
    result.reason = "circular dependency";
    return result;
  }

  const std::size_t n = items.size();
  const std::uint32_t full = (1u << n) - 1;
  std::vector<std::uint32_t> prereq_mask(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (items[i]->depends_on.count(items[j]->id)) prereq_mask[i] |= 1u << j;
    }
  }
  std::vector<std::int64_t> points(full + 1, 0);
  std::vector<int> max_prio(full + 1, -1);
  std::vector<int> min_prio(full + 1, 4);
  std::vector<std::uint32_t> needs(full + 1, 0);
  for (std::uint32_t s = 1; s <= full; ++s) {
    std::size_t low = static_cast<std::size_t>(__builtin_ctz(s));
    std::uint32_t rest = s & (s - 1);
    points[s] = points[rest] + items[low]->story_points;
    max_prio[s] = std::max(max_prio[rest], ordinal(items[low]->priority));
    min_prio[s] = std::min(min_prio[rest], ordinal(items[low]->priority));
    needs[s] = needs[rest] | prereq_mask[low];
  }

  constexpr int kInf = std::numeric_limits<int>::max();
  std::vector<int> best(full + 1, kInf);
  best[0] = 0;
  // Subsets are visited in increasing numeric order, and every successor
  // P | S is numerically larger than P.
  for (std::uint32_t done = 0; done < full; ++done) {
    if (best[done] == kInf) continue;
    const std::uint32_t open = full & ~done;
    for (std::uint32_t s = open; s != 0; s = (s - 1) & open) {
      if (Rational{points[s]} > capacity) continue;
      if ((needs[s] & ~(done | s)) != 0) continue;
      if (done != 0 && min_prio[done] < max_prio[s]) continue;
      best[done | s] = std::min(best[done | s], best[done] + 1);
    }
  }
  if (best[full] == kInf) {
    for (const auto* item : items) result.witness.push_back(item->id);
    result.reason = "no ordering satisfies priorities, prerequisites and capacity together";
    return result;
  }
  result.min_sprints = best[full];
  return result;
}

}  // namespace retroai

#endif  // RETROAI_PLAN_ORACLE_HPP
