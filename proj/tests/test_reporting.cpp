#include <gtest/gtest.h>

#include "retroai/planner.hpp"
#include "retroai/reporting.hpp"
#include "support/fixtures.hpp"

namespace retroai {
namespace {

Project planned_p1() {
  Project p = testing::make_p1();
  p = apply_plan(p, plan_sprints(p), {parse_date("2025-03-03"), 14});
  auto& a = get_item(p, ItemId{"A"});
  a.status = Status::Done;
  p.events = {{ItemId{"A"}, parse_instant("2025-03-05T10:00:00Z"), Status::Todo, Status::Done}};
  get_item(p, ItemId{"C"}).status = Status::InProgress;
  p.events.push_back({ItemId{"C"}, parse_instant("2025-03-06T10:00:00Z"), Status::Todo, Status::InProgress});
  return p;
}

bool starts_with(const std::string& s, std::string_view prefix) {
  return s.compare(0, prefix.size(), prefix) == 0;
}

TEST(Prompt, SummaryLayout) {
  Project p = planned_p1();
  std::string prompt = build_report_prompt(p, SprintId{"S1"});
  EXPECT_TRUE(starts_with(prompt, kSummaryInstruction));
  EXPECT_TRUE(starts_with(prompt,
                          "Write a 150 word long summary about a sprint with the following details, "
                          "including planned vs actual statistics.Mention where estimates were "
                          "accurate and where they should be adjusted. Give an introduction and "
                          "conclusion. Do not give a task by task break down."));
  EXPECT_EQ(prompt.substr(kSummaryInstruction.size()),
            "\nideal velocity: 10.0\n"
            "planned effort: 10\n"
            "actual velocity: 5\n"
            "sprint Sprint 1, 2025-03-03..2025-03-16, 2 tasks\n"
            " Tasks: \n"
            "Story A (status: Done, priority: Critical, story points: 5), "
            "Story C (status: InProgress, priority: High, story points: 5)");
  EXPECT_EQ(prompt, build_report_prompt(p, SprintId{"S1"}));
}

TEST(Prompt, PlanFeedbackShowsInitialBacklog) {
  Project p = planned_p1();
  std::string prompt = build_plan_feedback_prompt(p, SprintId{"S1"});
  EXPECT_TRUE(starts_with(prompt, kPlanFeedbackInstruction));
  EXPECT_NE(prompt.find(" Initial sprint backlog: \nStory A (status: Todo"), std::string::npos);
  EXPECT_NE(prompt.find(" Tasks: \nStory A (status: Done"), std::string::npos);
}

TEST(Prompt, UnknownSprint) {
  EXPECT_THROW(build_report_prompt(planned_p1(), SprintId{"S9"}), NotFoundError);
}

TEST(Report, ProviderTextIsUsed) {
  Project p = planned_p1();
  std::vector<std::string> prompts;
  FunctionProvider provider([&](std::string_view prompt, std::chrono::milliseconds) {
    prompts.emplace_back(prompt);
    return std::string("model text ") + std::to_string(prompts.size());
  });
  const Instant at = parse_instant("2025-04-01T00:00:00Z");
  auto r = generate_sprint_report(p, SprintId{"S1"}, provider, {std::chrono::milliseconds{5}, [at] { return at; }});
  EXPECT_FALSE(r.degraded);
  EXPECT_EQ(r.summary, "model text 1");
  EXPECT_EQ(r.plan_feedback, "model text 2");
  EXPECT_EQ(r.generated_at, at);
  ASSERT_EQ(prompts.size(), 2u);
  EXPECT_EQ(prompts[0], build_report_prompt(p, SprintId{"S1"}));
  EXPECT_EQ(prompts[1], build_plan_feedback_prompt(p, SprintId{"S1"}));
}

TEST(Report, FailingProviderFallsBack) {
  Project p = planned_p1();
  OfflineProvider offline;
  auto r = generate_sprint_report(p, SprintId{"S1"}, offline);
  auto fb = fallback_report(p, SprintId{"S1"});
  EXPECT_TRUE(r.degraded);
  EXPECT_EQ(r.summary, fb.summary);
  EXPECT_EQ(r.plan_feedback, fb.plan_feedback);
  EXPECT_EQ(fb, fallback_report(p, SprintId{"S1"}));
  EXPECT_NE(fb.summary.find("planned 10 story points, actual 5 story points"), std::string::npos);
  EXPECT_NE(fb.summary.find("Verdict: below plan."), std::string::npos);
  EXPECT_NE(fb.plan_feedback.find("Carried over: Story C (5)."), std::string::npos);
}

TEST(Report, PartialFailureAndEmptyReply) {
  Project p = planned_p1();
  int calls = 0;
  FunctionProvider flaky([&](std::string_view, std::chrono::milliseconds) -> std::string {
    if (++calls == 1) return "";
    throw std::runtime_error("timeout");
  });
  auto r = generate_sprint_report(p, SprintId{"S1"}, flaky);
  EXPECT_TRUE(r.degraded);
  EXPECT_EQ(r.summary, fallback_report(p, SprintId{"S1"}).summary);
}

TEST(Report, FallbackForSprintMeetingPlan) {
  Project p = planned_p1();
  get_item(p, ItemId{"C"}).status = Status::Done;
  p.events.push_back({ItemId{"C"}, parse_instant("2025-03-07T10:00:00Z"), Status::InProgress, Status::Done});
  auto fb = fallback_report(p, SprintId{"S1"});
  EXPECT_NE(fb.summary.find("Completion 100%"), std::string::npos);
  EXPECT_NE(fb.summary.find("Verdict: met plan."), std::string::npos);
  EXPECT_NE(fb.plan_feedback.find("Nothing was carried over."), std::string::npos);
  EXPECT_EQ(fb.generated_at, parse_instant("2025-03-17T00:00:00Z"));
}

}  // namespace
}  // namespace retroai
