#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "imde/analysis.hpp"
#include "imde/errors.hpp"
#include "imde/integrators.hpp"
#include "imde/profile.hpp"

namespace imde {

class ConfigError : public InputError {
 public:
  using InputError::InputError;
};

/// Everything a CLI run needs, read from one flat JSON object.
///
/// Keys: dimension, amplitude, center, width, xi0, h (number or "LIMIT"), T,
/// dt, delta, h_list, eta_radius, eta_nodes_per_axis,
/// r_substeps_per_history_step, tail_tolerance, r_panel_length, r_order,
/// rho_nodes, circle_nodes, fp_tol, fp_max_iter.  Missing keys take the
/// baseline defaults; unknown keys are rejected.
struct RunConfig {
  SolverConfig solver;
  double delta = 0.05;
  std::vector<double> h_list{0.4, 0.2, 0.1, 0.05};
};

RunConfig parse_config(const nlohmann::json& document);
RunConfig load_config(const std::filesystem::path& path);
/// Fully resolved flat echo; parse_config(to_json(c)) reproduces c.
nlohmann::json to_json(const RunConfig& config);

/// Fixed 17-significant-digit scientific notation.
std::string format_number(double value);

using Cell = std::variant<double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  /// Emitted after the rows as `# ...` lines in CSV, as "notes" in JSON.
  std::vector<std::string> notes;
};

std::string to_csv(const Table& table);
nlohmann::json table_json(const Table& table);

enum class Format { csv, json };
/// Writes `stem`.csv or `stem`.json into `directory`; returns the file name.
std::string write_table(const std::filesystem::path& directory, const std::string& stem,
                        const Table& table, Format format);

Table constants_table(const ConstantSet& constants);
/// Columns t, xi_1..xi_d, norm, F_1..F_d, dxi_norm (forward difference; the
/// last row repeats the backward difference).
Table trajectory_table(const SolveResult& result);
Table report_table(const BoundReport& report);
Table reports_summary_table(const std::vector<BoundReport>& reports);
Table study_table(const StudyTable& study);

}  // namespace imde
