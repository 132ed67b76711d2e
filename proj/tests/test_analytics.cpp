#include <gtest/gtest.h>

#include <random>
#include <set>

#include "retroai/analytics.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

namespace retroai {
namespace {

using testing::make_item;
using testing::make_test_sprint;

Project burndown_fixture() {
  Project p;
  p.id = ProjectId{"b"};
  p.expected_sprint_count = 1;
  p.sprints = {make_test_sprint("S1", "2025-03-03", "2025-03-07", 1)};
  p.backlog = {make_item("a", Priority::High, 5), make_item("b", Priority::High, 3),
               make_item("c", Priority::Low, 2)};
  for (auto& i : p.backlog) i.sprint_id = SprintId{"S1"};
  get_item(p, ItemId{"a"}).status = Status::Done;
  get_item(p, ItemId{"b"}).status = Status::Done;
  p.events = {
      {ItemId{"a"}, parse_instant("2025-03-04T09:00:00Z"), Status::Todo, Status::Done},
      {ItemId{"b"}, parse_instant("2025-03-05T09:00:00Z"), Status::Todo, Status::InProgress},
      {ItemId{"b"}, parse_instant("2025-03-06T23:59:59Z"), Status::InProgress, Status::Done},
  };
  return p;
}

TEST(Burndown, DailyRemainingAndIdealLine) {
  auto s = burndown_series(burndown_fixture(), SprintId{"S1"});
  EXPECT_EQ(s.committed, 10);
  EXPECT_EQ(s.remaining, (std::vector<std::int64_t>{10, 5, 5, 2, 2}));
  ASSERT_EQ(s.ideal.size(), 5u);
  EXPECT_EQ(s.ideal.front(), Rational(10));
  EXPECT_EQ(s.ideal[1], Rational(15, 2));
  EXPECT_EQ(s.ideal.back(), Rational(0));
  EXPECT_EQ(to_csv(s),
            "day,remaining,ideal\n"
            "2025-03-03,10,10\n"
            "2025-03-04,5,7.5\n"
            "2025-03-05,5,5\n"
            "2025-03-06,2,2.5\n"
            "2025-03-07,2,0\n");
}

TEST(Burndown, ProjectUtcOffsetShiftsDayBoundary) {
  Project p = burndown_fixture();
  p.utc_offset_minutes = 60;  // 23:59:59Z is already the next local day
  auto s = burndown_series(p, SprintId{"S1"});
  EXPECT_EQ(s.remaining, (std::vector<std::int64_t>{10, 5, 5, 5, 2}));
}

TEST(Burndown, ReopenRaisesRemaining) {
  Project p = burndown_fixture();
  get_item(p, ItemId{"a"}).status = Status::InProgress;
  p.events.push_back({ItemId{"a"}, parse_instant("2025-03-07T08:00:00Z"), Status::Done, Status::InProgress});
  auto s = burndown_series(p, SprintId{"S1"});
  EXPECT_EQ(s.remaining.back(), 7);
}

TEST(Burndown, EmptySprintAndErrors) {
  Project p = burndown_fixture();
  p.sprints.push_back(make_test_sprint("S2", "2025-03-10", "2025-03-14", 2));
  auto s = burndown_series(p, SprintId{"S2"});
  EXPECT_EQ(s.committed, 0);
  EXPECT_EQ(s.remaining, std::vector<std::int64_t>(5, 0));
  EXPECT_THROW(burndown_series(p, SprintId{"nope"}), NotFoundError);
  p.sprints[1].end_date = p.sprints[1].start_date;
  try {
    burndown_series(p, SprintId{"S2"});
    FAIL() << "expected a C4 violation";
  } catch (const ConstraintViolation& e) {
    ASSERT_EQ(e.issues().size(), 1u);
    EXPECT_EQ(e.issues()[0].rule, Rule::C4Dates);
  }
}

TEST(Burndown, MatchesSweepOracle) {
  std::mt19937 rng(8);
  testing::GenOptions o;
  o.with_events = true;
  for (int n = 0; n < 200; ++n) {
    Project p = testing::random_project(rng, o);
    p.utc_offset_minutes = std::uniform_int_distribution<int>(-600, 600)(rng);
    for (const auto& s : p.sprints) {
      auto series = burndown_series(p, s.id);
      EXPECT_EQ(series.remaining, testing::oracle_burndown(p, s));
      EXPECT_EQ(series.ideal.front(), Rational(series.committed));
      EXPECT_EQ(series.ideal.back(), Rational(0));
    }
  }
}

Project status_fixture(std::int64_t done_points) {
  Project p;
  p.expected_sprint_count = 2;
  p.sprints = {make_test_sprint("S1", "2025-03-03", "2025-03-14", 1),
               make_test_sprint("S2", "2025-03-17", "2025-03-28", 2)};
  p.backlog = {make_item("a", Priority::High, static_cast<int>(done_points)),
               make_item("b", Priority::High, static_cast<int>(20 - done_points))};
  // ideal velocity 10; sprint 1 completes `done_points`.
  for (auto& i : p.backlog) i.sprint_id = SprintId{"S1"};
  get_item(p, ItemId{"a"}).status = Status::Done;
  p.events = {{ItemId{"a"}, parse_instant("2025-03-10T12:00:00Z"), Status::Todo, Status::Done}};
  return p;
}

TEST(Status, ThresholdsAndGlyphs) {
  const Instant later = parse_instant("2025-03-20T00:00:00Z");
  auto on = project_status(status_fixture(9), later);
  EXPECT_EQ(on.state, StatusState::OnTrack);
  EXPECT_EQ(on.glyph, "✓");
  EXPECT_EQ(*on.ratio, Rational(9, 10));
  auto att = project_status(status_fixture(7), later);
  EXPECT_EQ(att.state, StatusState::Attention);
  EXPECT_EQ(att.glyph, "?");
  auto risk = project_status(status_fixture(6), later);
  EXPECT_EQ(risk.state, StatusState::AtRisk);
  EXPECT_EQ(risk.glyph, "!");

  auto early = project_status(status_fixture(9), parse_instant("2025-03-10T00:00:00Z"));
  EXPECT_EQ(early.state, StatusState::Unknown);
  EXPECT_EQ(early.glyph, "–");
  EXPECT_FALSE(early.ratio);

  Project empty;
  EXPECT_EQ(project_status(empty, later).state, StatusState::Unknown);
}

TEST(Status, GlyphMappingIsTotalAndDistinct) {
  std::set<std::string_view> glyphs;
  for (auto s : {StatusState::OnTrack, StatusState::Attention, StatusState::AtRisk, StatusState::Unknown}) {
    glyphs.insert(glyph_for(s));
  }
  EXPECT_EQ(glyphs.size(), 4u);
}

TEST(Palettes, NineDistinctPalettes) {
  ASSERT_EQ(kPalettes.size(), 9u);
  std::set<std::string_view> keys;
  for (const auto& p : kPalettes) {
    keys.insert(p.key);
    EXPECT_NE(p.on_track, p.attention);
    EXPECT_NE(p.attention, p.at_risk);
    EXPECT_NE(p.on_track, p.at_risk);
    EXPECT_EQ(&palette_for(p.category), &p);
  }
  EXPECT_EQ(keys.size(), 9u);
  EXPECT_EQ(palette_for("Green-Blind").category, VisionCategory::Deuteranopia);
  EXPECT_EQ(palette_for("red weak").category, VisionCategory::Protanomaly);
  EXPECT_EQ(palette_for("TRITANOPIA").category, VisionCategory::Tritanopia);
  EXPECT_THROW(palette_for("ultraviolet"), InvalidArgumentError);
}

}  // namespace
}  // namespace retroai
