// Acceptance run: one PASS/FAIL line per criterion on the baseline
// configuration (d = 3, radial Gaussian A = 1, s = 1, xi0 = e1, T = 1,
// dt = 1/256).  Exit status is non-zero when any criterion fails.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include <json.hpp>

#include "imde/analysis.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace imde;
using Eigen::VectorXd;

namespace {

int failures = 0;

void verdict(bool ok, const std::string& name, const std::string& detail) {
  std::cout << (ok ? "PASS " : "FAIL ") << name << ": " << detail << std::endl;
  if (!ok) ++failures;
}

std::string fmt(const char* format, auto... args) {
  char buffer[512];
  std::snprintf(buffer, sizeof buffer, format, args...);
  return buffer;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// CSV body without comment lines.
std::string csv_body(const fs::path& path) {
  std::istringstream in(slurp(path));
  std::string line, out;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') out += line + '\n';
  }
  return out;
}

const Profile<double> baseline = Profile<double>::centered(3, 1.0, 1.0);
const std::vector<double> h_list{0.4, 0.2, 0.1, 0.05};

}  // namespace

int main() {
  const ConstantSet constants = compute_constants(baseline, 0.05);
  SolverConfig config;

  // Decay on the limit run.
  auto start = std::chrono::steady_clock::now();
  const SolveResult limit = solve_limit(config);
  const BoundReport decay = check_decay(limit.trajectory, 1e-12);
  double elapsed = seconds_since(start);
  verdict(decay.passed() && !limit.truncated && elapsed < 60, "decay",
          fmt("%zu steps, max |xi_{k+1}|/|xi_k| = %.6f, %.2f s", decay.samples.size(),
              decay.max_ratio, elapsed));

  // Sandwich envelopes from the comparison ODE at step 1e-5.
  start = std::chrono::steady_clock::now();
  const BoundReport sandwich = sandwich_envelopes(limit.trajectory, baseline, constants, 1e-5);
  elapsed = seconds_since(start);
  double min_gap = std::numeric_limits<double>::infinity();
  for (const auto& s : sandwich.samples) min_gap = std::min(min_gap, s.observed - s.lower);
  verdict(sandwich.applicable && sandwich.passed() && elapsed < 120, "sandwich",
          fmt("max |xi|^2/upper = %.4f, min (|xi|^2 - lower) = %.3e, %.2f s", sandwich.max_ratio,
              min_gap, elapsed));

  // Memory run at h = 0.1.
  SolverConfig memory_config = config;
  memory_config.h = 0.1;
  const SolveResult memory = solve_memory(memory_config);

  const BoundReport derivative = check_derivative_bound(memory.trajectory, constants, 0.05);
  verdict(derivative.passed(), "derivative_bound",
          fmt("max |xi'| / (2 C1) = %.4f (C1 = %.4f)", derivative.max_ratio, constants.C1_g));

  const BoundReport averaging = check_avg_control(memory.trajectory, 0.1, constants, 20, 20);
  verdict(averaging.passed() && averaging.samples.size() == 400, "avg_control",
          fmt("400 samples, max ratio = %.4f", averaging.max_ratio));

  // First lemma at u = xi0, t = 1.
  const FrozenLimitReport lemma1 =
      check_frozen_vs_limit(config.xi0, {1.0}, h_list, baseline, constants, {}, {}, 0.0);
  std::string diffs;
  for (const auto& s : lemma1.report.samples) diffs += fmt(" %.4g", s.observed);
  verdict(lemma1.report.passed() && lemma1.slopes[0] >= 0.4, "lemma_frozen_vs_limit",
          fmt("differences%s, slope = %.3f, max ratio to C3 (h/t)^{1/2} = %.4f", diffs.c_str(),
              lemma1.slopes[0], lemma1.report.max_ratio));

  // Second lemma along the memory trajectory.
  std::vector<double> times;
  for (int i = 1; i <= 10; ++i) times.push_back(0.1 * i);
  const BoundReport lemma2 =
      check_memory_vs_frozen(memory.trajectory, 0.1, times, baseline, constants, {}, 0.0);
  verdict(lemma2.passed() && lemma2.samples.size() == 10, "lemma_memory_vs_frozen",
          fmt("10 times, max ratio to C2 h^{0.2} = %.3e", lemma2.max_ratio));

  // Uniform convergence and the Gronwall post-check.
  start = std::chrono::steady_clock::now();
  const StudyTable study = convergence_study(config, h_list, 0.05);
  elapsed = seconds_since(start);
  std::string errors;
  for (const auto& row : study.rows) errors += fmt(" %.4f", row.sup_error);
  const double finest = study.rows.back().sup_error;
  verdict(study.monotone && finest <= 0.05 * config.xi0.norm() && elapsed < 900,
          "uniform_convergence",
          fmt("sup errors%s (monotone: %s), error at h = 0.05 is %.4f against 0.05, %.1f s",
              errors.c_str(), study.monotone ? "yes" : "no", finest, elapsed));

  double worst = 0;
  for (const auto& row : study.rows) worst = std::max(worst, row.sup_error / row.gronwall_bound);
  verdict(study.gronwall.passed() && study.rows.size() == h_list.size(), "gronwall",
          fmt("L = %.3f on [%.3f, %.3f], max error/bound = %.3e", study.lipschitz.L,
              study.lipschitz.inner, study.lipschitz.outer, worst));

  // Cross-oracle agreement.
  std::mt19937 rng(20240611);
  std::normal_distribution<double> normal;
  double worst_radial = 0;
  for (int i = 0; i < 5; ++i) {
    const VectorXd u = Eigen::Vector3d(normal(rng), normal(rng), normal(rng));
    const VectorXd expected = -eval_F0_radial_coeff(u.norm(), baseline) * u.normalized();
    worst_radial = std::max(worst_radial, (eval_F0(u, baseline) - expected).norm() / expected.norm());
  }
  std::uniform_real_distribution<double> unit(-1, 1), ratio(1, 8), hs(0.05, 0.5), amp(0.5, 1.5),
      width(0.7, 1.3);
  double worst_frozen = 0;
  for (int i = 0; i < 10; ++i) {
    // Every other input uses a shifted, rescaled profile.
    const Profile<double> p =
        i % 2 ? Profile<double>(3, amp(rng), Eigen::Vector3d(0.3 * unit(rng), 0.3 * unit(rng), 0.3 * unit(rng)), width(rng))
              : baseline;
    const VectorXd u = Eigen::Vector3d(unit(rng), unit(rng), unit(rng));
    const double h = hs(rng), t = h * ratio(rng);
    const VectorXd slow = oracle::frozen_field(p, u, t, h);
    worst_frozen = std::max(worst_frozen, (eval_F_h_frozen(u, t, h, p) - slow).norm() / slow.norm());
  }
  verdict(worst_radial <= 1e-9 && worst_frozen <= 1e-6, "cross_oracle",
          fmt("sphere vs radial %.2e (tol 1e-9), frozen vs brute force %.2e (tol 1e-6)",
              worst_radial, worst_frozen));

  // Two CLI study runs with identical configs.
  const fs::path work = IMDE_TEST_WORKDIR;
  fs::remove_all(work);
  fs::create_directories(work);
  std::ofstream(work / "baseline.json") << nlohmann::json::object().dump();
  bool identical = true;
  int codes[2] = {-1, -1};
  for (int run = 0; run < 2; ++run) {
    const std::string command = std::string(IMDE_CLI_PATH) + " study --config " +
                                (work / "baseline.json").string() + " --out " +
                                (work / ("run" + std::to_string(run))).string() + " > " +
                                (work / ("run" + std::to_string(run) + ".log")).string() + " 2>&1";
    const int status = std::system(command.c_str());
    codes[run] = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  int compared = 0;
  if (fs::exists(work / "run0")) {
    for (const auto& entry : fs::directory_iterator(work / "run0")) {
      if (entry.path().extension() != ".csv") continue;
      ++compared;
      const fs::path twin = work / "run1" / entry.path().filename();
      if (!fs::exists(twin) || csv_body(entry.path()) != csv_body(twin)) identical = false;
    }
  }
  verdict(codes[0] == 0 && codes[1] == 0 && compared > 0 && identical, "determinism",
          fmt("%d CSV files compared, exit codes %d/%d, %s", compared, codes[0], codes[1],
              identical ? "byte-identical" : "differ"));

  std::cout << (failures ? std::to_string(failures) + " criteria failed" : "all criteria passed")
            << std::endl;
  return failures ? 1 : 0;
}
