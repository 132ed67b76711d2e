#ifndef RETROAI_REPORTING_HPP
#define RETROAI_REPORTING_HPP

#include <chrono>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "retroai/domain.hpp"
#include "retroai/error.hpp"

namespace retroai {

struct SprintReport {
  std::string summary;
  std::string plan_feedback;
  bool degraded = false;  // true when the offline template was used
  Instant generated_at;

  friend bool operator==(const SprintReport&, const SprintReport&) = default;
};

// Text-completion backend. complete() either returns the model's text or
// throws ProviderError (including on timeout). Implementations must not touch
// project data.
class ReportProvider {
 public:
  virtual ~ReportProvider() = default;
  virtual std::string complete(std::string_view prompt, std::chrono::milliseconds timeout) = 0;
};

// Provider backed by a callable; used for tests and for offline mode.
class FunctionProvider final : public ReportProvider {
 public:
  using Fn = std::function<std::string(std::string_view, std::chrono::milliseconds)>;
  explicit FunctionProvider(Fn fn) : fn_(std::move(fn)) {}
  std::string complete(std::string_view prompt, std::chrono::milliseconds timeout) override {
    return fn_(prompt, timeout);
  }

 private:
  Fn fn_;
};

// Always fails, forcing the fallback report.
class OfflineProvider final : public ReportProvider {
 public:
  std::string complete(std::string_view, std::chrono::milliseconds) override {
    throw ProviderError("offline mode: no report provider configured");
  }
};

inline constexpr std::string_view kSummaryInstruction =
    "Write a 150 word long summary about a sprint with the following details, including planned "
    "vs actual statistics."
    "Mention where estimates were accurate and where they should be adjusted. Give an "
    "introduction and conclusion. Do not give a task by task break down.";

inline constexpr std::string_view kPlanFeedbackInstruction =
    "Write a Sprint Plan Feedback of at most 150 words that analyses the results achieved in the "
    "sprint with respect to the sprint backlog initially planned for it. Name what was delivered "
    "as planned, what was carried over, and how the next sprint plan should be adjusted. Do not "
    "give a task by task break down.";

// "<title> (status: <s>, priority: <p>, story points: <n>)"
inline std::string task_for_report(const ProductBacklogItem& item, Status status) {
  return item.title + " (status: " + std::string(to_string(status)) +
         ", priority: " + std::string(to_string(item.priority)) +
         ", story points: " + std::to_string(item.story_points) + ")";
}

inline std::string board_for_report(const Project& p, const Sprint& s) {
  return "sprint " + s.name + ", " + format_date(s.start_date) + ".." + format_date(s.end_date) +
         ", " + std::to_string(sprint_items(p, s.id).size()) + " tasks";
}

namespace detail {

inline std::string effort_lines(const Project& p, const Sprint& s) {
  return "ideal velocity: " + ideal_velocity(p).to_decimal() + "\n" +
         "planned effort: " + std::to_string(expected_velocity(p, s.id)) + "\n" +
         "actual velocity: " + std::to_string(actual_velocity(p, s.id)) + "\n" +
         board_for_report(p, s);
}

inline std::string join_tasks(const Project& p, const Sprint& s, std::optional<Instant> as_of) {
  std::string out;
  for (const auto* item : sprint_items(p, s.id)) {
    if (!out.empty()) out += ", ";
    out += task_for_report(*item, as_of ? status_at(p, *item, *as_of) : item->status);
  }
  return out;
}

}  // namespace detail

// Summary prompt: instruction text, velocity lines, board line, then the
// comma-joined task list. Pure function of its inputs.
inline std::string build_report_prompt(const Project& p, const SprintId& sprint_id) {
  const Sprint& s = get_sprint(p, sprint_id);
  return std::string(kSummaryInstruction) + "\n" + detail::effort_lines(p, s) + "\n Tasks: \n" +
         detail::join_tasks(p, s, std::nullopt);
}

// Plan-feedback prompt: same data plus the sprint backlog as it stood when
// the sprint started.
inline std::string build_plan_feedback_prompt(const Project& p, const SprintId& sprint_id) {
  const Sprint& s = get_sprint(p, sprint_id);
  Instant start = end_of_day(add_days(s.start_date, -1), p.utc_offset_minutes);
  return std::string(kPlanFeedbackInstruction) + "\n" + detail::effort_lines(p, s) +
         "\n Initial sprint backlog: \n" + detail::join_tasks(p, s, start) + "\n Tasks: \n" +
         detail::join_tasks(p, s, std::nullopt);
}

// Deterministic template report from the same figures the prompt carries.
inline SprintReport fallback_report(const Project& p, const SprintId& sprint_id) {
  const Sprint& s = get_sprint(p, sprint_id);
  const Instant end = end_of_day(s.end_date, p.utc_offset_minutes);
  const std::int64_t planned = expected_velocity(p, sprint_id);
  const std::int64_t actual = actual_velocity(p, sprint_id, end);
  const auto items = sprint_items(p, sprint_id);

  std::vector<const ProductBacklogItem*> carried;
  for (const auto* item : items) {
    if (status_at(p, *item, end) != Status::Done) carried.push_back(item);
  }
  const std::int64_t percent = planned == 0 ? 100 : (actual * 100 + planned / 2) / planned;
  const char* verdict = actual == planned ? "met plan" : actual < planned ? "below plan"
                                                                          : "above plan";

  SprintReport r;
  r.degraded = true;
  r.generated_at = end;
  r.summary = s.name + " (" + format_date(s.start_date) + " to " +
              format_date(s.end_date) + "): planned " + std::to_string(planned) +
              " story points, actual " + std::to_string(actual) +
              " story points, ideal velocity " + ideal_velocity(p).to_decimal() + ". Completion " +
              std::to_string(percent) + "% of planned effort across " +
              std::to_string(items.size()) + " tasks; " + std::to_string(carried.size()) +
              " carried over. Verdict: " + verdict + ".";
  r.plan_feedback = "Plan feedback for " + s.name + ": " +
                    std::to_string(items.size() - carried.size()) + " of " +
                    std::to_string(items.size()) + " planned tasks completed (actual " +
                    std::to_string(actual) + " of planned " + std::to_string(planned) + ").";
  if (carried.empty()) {
    r.plan_feedback += " Nothing was carried over.";
  } else {
    r.plan_feedback += " Carried over:";
    for (std::size_t i = 0; i < carried.size(); ++i) {
      r.plan_feedback += (i == 0 ? " " : ", ") + carried[i]->title + " (" +
                         std::to_string(carried[i]->story_points) + ")";
    }
    r.plan_feedback += ".";
  }
  r.plan_feedback += std::string(" Verdict: ") + verdict + ".";
  return r;
}

struct ReportOptions {
  std::chrono::milliseconds timeout{30000};
  std::function<Instant()> clock = now_utc;
};

// Asks the provider for the summary and the plan feedback. Each part that
// fails or comes back empty is replaced by the fallback text; never throws
// because of the provider.
inline SprintReport generate_sprint_report(const Project& p, const SprintId& sprint_id,
                                           ReportProvider& provider,
                                           const ReportOptions& options = {}) {
  const SprintReport fallback = fallback_report(p, sprint_id);
  auto ask = [&](const std::string& prompt, const std::string& fallback_text, bool& degraded) {
    try {
      std::string text = provider.complete(prompt, options.timeout);
      if (!text.empty()) return text;
    } catch (const std::exception&) {
    }
    degraded = true;
    return fallback_text;
  };
  SprintReport r;
  r.summary = ask(build_report_prompt(p, sprint_id), fallback.summary, r.degraded);
  r.plan_feedback = ask(build_plan_feedback_prompt(p, sprint_id), fallback.plan_feedback, r.degraded);
  r.generated_at = options.clock();
  return r;
}

}  // namespace retroai

#endif  // RETROAI_REPORTING_HPP
