// imde: batch front end for the memory and limit solvers.
//
//   imde constants  --config cfg.json [--out dir] [--format csv|json]
//   imde run-memory --config cfg.json [--out dir]
//   imde run-limit  --config cfg.json [--out dir]
//   imde study      --config cfg.json [--out dir] [--h-list 0.4,0.2,0.1,0.05]
//   imde check      --config cfg.json [--out dir] [--h-list ...]
//
// Exit codes: 0 success, 2 config error, 3 solver failure, 4 bound violation.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "imde/analysis.hpp"
#include "imde/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kSolverFailure = 3;
constexpr int kBoundViolation = 4;

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buffer;
}

std::vector<double> parse_h_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw imde::ConfigError("--h-list: cannot parse '" + item + "'");
    }
  }
  if (out.empty()) throw imde::ConfigError("--h-list is empty");
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (!(out[i] < out[i - 1])) throw imde::ConfigError("--h-list must be strictly descending");
  }
  for (double h : out) {
    if (!(h > 0)) throw imde::ConfigError("--h-list entries must be > 0");
  }
  return out;
}

/// Collects emitted files and writes manifest.json last.
class Session {
 public:
  Session(std::string command, fs::path out, imde::Format format, const imde::RunConfig& config)
      : command_(std::move(command)),
        out_(std::move(out)),
        format_(format),
        config_(config),
        started_(utc_now()),
        clock_(std::chrono::steady_clock::now()) {
    fs::create_directories(out_);
  }

  void write(const std::string& stem, const imde::Table& table) {
    outputs_.push_back(imde::write_table(out_, stem, table, format_));
  }
  void warn(const std::string& text) {
    std::cerr << "warning: " << text << '\n';
    warnings_.push_back(text);
  }
  json& extra() { return extra_; }

  void finish(int exit_code) {
    json manifest;
    manifest["tool"] = "imde";
    manifest["version"] = IMDE_VERSION;
    manifest["command"] = command_;
    manifest["config"] = imde::to_json(config_);
    manifest["format"] = format_ == imde::Format::csv ? "csv" : "json";
    manifest["started_at"] = started_;
    manifest["finished_at"] = utc_now();
    manifest["wall_clock_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - clock_).count();
    manifest["outputs"] = outputs_;
    manifest["warnings"] = warnings_;
    manifest["exit_code"] = exit_code;
    for (const auto& item : extra_.items()) manifest[item.key()] = item.value();
    std::ofstream(out_ / "manifest.json") << manifest.dump(2) << '\n';
  }

 private:
  std::string command_;
  fs::path out_;
  imde::Format format_;
  imde::RunConfig config_;
  std::string started_;
  std::chrono::steady_clock::time_point clock_;
  std::vector<std::string> outputs_;
  std::vector<std::string> warnings_;
  json extra_ = json::object();
};

void print_table(const imde::Table& table) { std::cout << imde::to_csv(table); }

int cmd_constants(Session& session, const imde::RunConfig& config) {
  const imde::ConstantSet constants =
      imde::compute_constants(config.solver.profile, config.delta);
  const imde::Table table = imde::constants_table(constants);
  print_table(table);
  session.write("constants", table);
  return kOk;
}

int cmd_run(Session& session, const imde::RunConfig& config, bool memory) {
  const std::string stem = memory ? "trajectory_memory" : "trajectory_limit";
  if (memory && !config.solver.h) {
    throw imde::ConfigError("run-memory needs a numeric h in the config");
  }
  try {
    imde::SolveResult result =
        memory ? imde::solve_memory(config.solver) : imde::solve_limit(config.solver);
    for (const auto& w : result.warnings) session.warn(w);
    imde::Table table = imde::trajectory_table(result);
    if (result.truncated) table.notes.push_back("TRUNCATED: " + result.diagnostic);
    session.write(stem, table);
    std::cout << stem << ": " << result.trajectory.size() << " nodes, |xi(T)| = "
              << result.trajectory.back().norm() << '\n';
    if (result.truncated) {
      std::cerr << "error: " << result.diagnostic << '\n';
      return kSolverFailure;
    }
    return kOk;
  } catch (const imde::FixedPointError& e) {
    for (const auto& w : e.partial().warnings) session.warn(w);
    imde::Table table = imde::trajectory_table(e.partial());
    table.notes.push_back(std::string("FAILED: ") + e.what());
    session.write(stem, table);
    std::cerr << "error: " << e.what() << '\n';
    return kSolverFailure;
  }
}

struct CheckOutcome {
  std::vector<imde::BoundReport> reports;
  bool violated = false;
};

// Bound reports for the limit run and for the memory run at h.
CheckOutcome run_checks(Session& session, const imde::RunConfig& config,
                        const imde::SolveResult& limit, const imde::SolveResult& memory, double h,
                        const std::vector<double>& h_list) {
  const imde::SolverConfig& solver = config.solver;
  const imde::ConstantSet constants = imde::compute_constants(solver.profile, config.delta);
  CheckOutcome out;
  out.reports.push_back(imde::check_decay(limit.trajectory));
  out.reports.push_back(imde::sandwich_envelopes(limit.trajectory, solver.profile, constants));
  out.reports.push_back(imde::check_derivative_bound(memory.trajectory, constants));
  out.reports.push_back(imde::check_avg_control(memory.trajectory, h, constants));
  std::vector<double> times;
  for (int i = 1; i <= 10; ++i) times.push_back(memory.trajectory.horizon() * i / 10);
  const imde::LemmaReports lemmas = imde::check_lemma_envelopes(
      solver.xi0, {solver.T}, h_list, solver.profile, constants, memory.trajectory, h, times,
      solver.quad, solver.squad);
  out.reports.push_back(lemmas.frozen_vs_limit.report);
  out.reports.push_back(lemmas.memory_vs_frozen);
  session.extra()["lemma_frozen_vs_limit_slope"] = lemmas.frozen_vs_limit.slopes.front();
  for (const auto& report : out.reports) {
    session.write("report_" + report.name, imde::report_table(report));
    if (!report.passed()) out.violated = true;
  }
  return out;
}

int cmd_study(Session& session, const imde::RunConfig& config, bool check_only) {
  const std::vector<double>& h_list = config.h_list;
  const imde::StudyTable study = imde::convergence_study(config.solver, h_list, config.delta);

  json rows = json::array();
  for (const auto& row : study.rows) {
    rows.push_back({{"h", row.h}, {"runtime_seconds", row.runtime_seconds}, {"ok", row.ok}});
    if (row.solution) {
      for (const auto& w : row.solution->warnings) session.warn("h = " + std::to_string(row.h) + ": " + w);
    }
  }
  session.extra()["rows"] = rows;
  if (!check_only) session.write("study", imde::study_table(study));

  const imde::StudyRow* finest = nullptr;
  for (const auto& row : study.rows) {
    if (row.ok) finest = &row;
  }
  if (finest == nullptr) {
    std::cerr << "error: every study row failed\n";
    return kSolverFailure;
  }
  const imde::SolveResult limit = imde::solve_limit(config.solver);
  session.write("trajectory_limit", imde::trajectory_table(limit));
  session.write("trajectory_memory", imde::trajectory_table(*finest->solution));

  CheckOutcome checks = run_checks(session, config, limit, *finest->solution, finest->h, h_list);
  checks.reports.push_back(study.gronwall);
  session.write("report_gronwall", imde::report_table(study.gronwall));
  if (!study.gronwall.passed()) checks.violated = true;
  session.write("reports_summary", imde::reports_summary_table(checks.reports));

  print_table(imde::study_table(study));
  for (const auto& r : checks.reports) {
    std::cout << (r.passed() ? "PASS " : "FAIL ") << r.name << " max_ratio=" << r.max_ratio << '\n';
  }
  bool failed_row = false;
  for (const auto& row : study.rows) failed_row |= !row.ok;
  if (check_only && checks.violated) return kBoundViolation;
  if (failed_row) return kSolverFailure;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Solver and bound checker for the memory integro-differential equation"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir = "out";
  std::string format_name = "csv";
  std::string h_list_text;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--format", format_name, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  };
  CLI::App* constants = app.add_subcommand("constants", "compute the proof constants");
  CLI::App* run_memory = app.add_subcommand("run-memory", "solve the memory equation");
  CLI::App* run_limit = app.add_subcommand("run-limit", "solve the limit equation");
  CLI::App* study = app.add_subcommand("study", "h-convergence study with bound reports");
  CLI::App* check = app.add_subcommand("check", "bound checks; exit 4 on violation");
  for (CLI::App* sub : {constants, run_memory, run_limit, study, check}) add_common(sub);
  for (CLI::App* sub : {study, check}) {
    sub->add_option("--h-list", h_list_text, "comma-separated descending h values");
  }
  CLI11_PARSE(app, argc, argv);

  CLI::App* chosen = app.get_subcommands().front();
  imde::RunConfig config;
  try {
    config = imde::load_config(config_path);
    if (!h_list_text.empty()) config.h_list = parse_h_list(h_list_text);
  } catch (const imde::InputError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }

  const imde::Format format = format_name == "json" ? imde::Format::json : imde::Format::csv;
  Session session(chosen->get_name(), out_dir, format, config);
  int code = kOk;
  try {
    if (chosen == constants) {
      code = cmd_constants(session, config);
    } else if (chosen == run_memory) {
      code = cmd_run(session, config, true);
    } else if (chosen == run_limit) {
      code = cmd_run(session, config, false);
    } else {
      code = cmd_study(session, config, chosen == check);
    }
  } catch (const imde::SolverError& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    code = kSolverFailure;
  } catch (const imde::InputError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    code = kConfigError;
  }
  session.finish(code);
  return code;
}
