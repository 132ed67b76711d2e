#ifndef RETROAI_CLI_HPP
#define RETROAI_CLI_HPP

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <pthread.h>

#include "CLI11.hpp"
#include "retroai/analytics.hpp"
#include "retroai/constraints.hpp"
#include "retroai/http_provider.hpp"
#include "retroai/planner.hpp"
#include "retroai/reporting.hpp"
#include "retroai/service.hpp"
#include "retroai/store.hpp"

namespace retroai::cli {

enum ExitCode : int { kOk = 0, kFindings = 1, kUsage = 2 };

inline std::string describe(const ValidationIssue& i) {
  std::string s = std::string(to_string(i.severity)) + " " + std::string(to_string(i.rule));
  if (!i.item_ids.empty()) {
    s += " items=";
    for (std::size_t k = 0; k < i.item_ids.size(); ++k) s += (k ? "," : "") + i.item_ids[k].value;
  }
  if (!i.sprint_ids.empty()) {
    s += " sprints=";
    for (std::size_t k = 0; k < i.sprint_ids.size(); ++k) s += (k ? "," : "") + i.sprint_ids[k].value;
  }
  return s + ": " + i.message;
}

inline Rational parse_capacity(const std::string& text) {
  auto dot = text.find('.');
  try {
    if (dot == std::string::npos) return Rational{std::stoll(text)};
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    std::int64_t den = 1;
    for (std::size_t i = dot + 1; i < text.size(); ++i) den *= 10;
    return Rational{std::stoll(digits), den};
  } catch (const std::exception&) {
    throw InvalidArgumentError("invalid capacity '" + text + "'");
  }
}

// Blocks SIGINT/SIGTERM, serves until one arrives, then shuts down.
inline int serve_until_signal(const std::string& host, int port, const std::string& data_dir,
                              std::ostream& out) {
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  FileStore store(data_dir);
  ServiceConfig config;
  config.host = host;
  config.port = port;
  const LlmConfig llm = LlmConfig::from_env();
  config.api.report_timeout = llm.timeout;
  config.api.provider = [llm] { return make_provider(llm); };
  auto server = serve(store, config);
  out << "serving on http://" << host << ":" << server->port() << " (data: " << data_dir << ")"
      << std::endl;
  int sig = 0;
  sigwait(&signals, &sig);
  out << "shutting down" << std::endl;
  server->stop();
  return kOk;
}

// Runs one command line (args[0] is the program name).
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sprint planning and retrospective analytics"};
  app.require_subcommand(1);

  std::string file;
  std::string sprint;

  auto* validate = app.add_subcommand("validate", "Check a project against all planning rules");
  validate->add_option("project-file", file)->required();

  std::optional<std::string> capacity;
  std::optional<int> max_sprints;
  std::string start;
  int sprint_length = 14;
  bool write = false;
  auto* plan = app.add_subcommand("plan", "Allocate backlog items to sprints");
  plan->add_option("project-file", file)->required();
  plan->add_option("--capacity", capacity, "Story points per sprint (default: ideal velocity)");
  plan->add_option("--max-sprints", max_sprints, "Upper bound on the number of sprints");
  plan->add_option("--start", start, "Start date of new sprints if the project has none (YYYY-MM-DD)");
  plan->add_option("--sprint-length", sprint_length, "Length of new sprints in days");
  plan->add_flag("--write", write, "Apply the plan and write the project file back");

  std::string csv;
  auto* burndown = app.add_subcommand("burndown", "Print the burndown series of a sprint");
  burndown->add_option("project-file", file)->required();
  burndown->add_option("--sprint", sprint)->required();
  burndown->add_option("--csv", csv, "Write day,remaining,ideal rows to this file");

  bool offline = false;
  auto* report = app.add_subcommand("report", "Generate the sprint summary and plan feedback");
  report->add_option("project-file", file)->required();
  report->add_option("--sprint", sprint)->required();
  report->add_flag("--offline", offline, "Do not call the LLM; use the template report");

  int port = 8080;
  std::string host = "127.0.0.1";
  std::string data_dir = std::getenv("RETROAI_DATA_DIR") ? std::getenv("RETROAI_DATA_DIR") : "data";
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
  serve_cmd->add_option("--port", port);
  serve_cmd->add_option("--host", host);
  serve_cmd->add_option("--data-dir", data_dir);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  if (argv.empty()) argv.push_back("retroai");
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << app.help();
    return kUsage;
  }

  try {
    if (validate->parsed()) {
      Project p = read_document(file);
      auto issues = validate_project(p);
      for (const auto& i : issues) out << describe(i) << "\n";
      bool findings = has_severity(issues, Severity::Error) || has_severity(issues, Severity::Warning);
      if (!findings) out << "ok: no errors or warnings\n";
      return findings ? kFindings : kOk;
    }
    if (plan->parsed()) {
      Project p = read_document(file);
      PlanOptions options;
      if (capacity) options.capacity = parse_capacity(*capacity);
      options.max_sprints = max_sprints;
      SprintPlan result;
      try {
        result = plan_sprints(p, options);
      } catch (const PreconditionError& e) {
        err << e.what() << "\n";
        return kFindings;
      }
      out << "capacity " << format_points(result.capacity) << ", " << result.sprint_count
          << " sprint(s)\n";
      for (int k = 1; k <= result.sprint_count; ++k) {
        std::int64_t load = 0;
        out << "sprint " << k << ":";
        for (const auto& id : result.sprint(k)) {
          out << " " << id;
          load += get_item(p, id).story_points;
        }
        out << " (" << load << " SP)\n";
      }
      for (const auto& id : result.excluded) out << "excluded: " << id << "\n";
      for (const auto& w : result.warnings) out << describe(w) << "\n";
      if (write) {
        SprintLayout layout{start.empty() ? today_utc() : parse_date(start), sprint_length};
        write_document(file, apply_plan(p, result, layout));
        out << "written: " << file << "\n";
      }
      return kOk;
    }
    if (burndown->parsed()) {
      Project p = read_document(file);
      auto series = burndown_series(p, SprintId{sprint});
      std::string table = to_csv(series);
      out << table;
      if (!csv.empty()) {
        std::ofstream f(csv, std::ios::binary | std::ios::trunc);
        if (!(f << table)) throw IoError("cannot write '" + csv + "'");
      }
      return kOk;
    }
    if (report->parsed()) {
      Project p = read_document(file);
      SprintId sid{sprint};
      SprintReport r;
      if (offline) {
        r = fallback_report(p, sid);
      } else {
        LlmConfig llm = LlmConfig::from_env();
        auto provider = make_provider(llm);
        r = generate_sprint_report(p, sid, *provider, {llm.timeout, now_utc});
      }
      out << "Sprint summary" << (r.degraded ? " (offline template)" : "") << ":\n"
          << r.summary << "\n\nSprint plan feedback:\n"
          << r.plan_feedback << "\n";
      return kOk;
    }
    if (serve_cmd->parsed()) return serve_until_signal(host, port, data_dir, out);
  } catch (const ConstraintViolation& e) {
    for (const auto& i : e.issues()) err << describe(i) << "\n";
    return kFindings;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace retroai::cli

#endif  // RETROAI_CLI_HPP
