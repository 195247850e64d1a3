#include "imde/io.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace imde {

namespace {

using nlohmann::json;

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "dimension", "amplitude", "center", "width", "xi0", "h", "T", "dt", "delta", "h_list",
      "eta_radius", "eta_nodes_per_axis", "r_substeps_per_history_step", "tail_tolerance",
      "r_panel_length", "r_order", "rho_nodes", "circle_nodes", "fp_tol", "fp_max_iter"};
  return keys;
}

template <typename T>
T get_or(const json& doc, const char* key, T fallback) {
  if (!doc.contains(key)) return fallback;
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

Eigen::VectorXd get_vector(const json& doc, const char* key, Eigen::VectorXd fallback) {
  if (!doc.contains(key)) return fallback;
  const auto values = get_or<std::vector<double>>(doc, key, {});
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

std::string quote_csv(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& item : doc.items()) {
    if (!known_keys().contains(item.key())) throw ConfigError("unknown config key '" + item.key() + "'");
  }

  RunConfig config;
  SolverConfig& solver = config.solver;
  const int d = get_or<int>(doc, "dimension", 3);
  if (d < 1) throw ConfigError("dimension must be >= 1");
  try {
    solver.profile = Profile<double>(d, get_or<double>(doc, "amplitude", 1.0),
                                     get_vector(doc, "center", Eigen::VectorXd::Zero(d)),
                                     get_or<double>(doc, "width", 1.0));
  } catch (const ConfigError&) {
    throw;
  } catch (const InputError& e) {
    throw ConfigError(e.what());
  }
  solver.xi0 = get_vector(doc, "xi0", Eigen::VectorXd::Unit(d, 0));
  if (doc.contains("h")) {
    const json& h = doc.at("h");
    if (h.is_string()) {
      if (h.get<std::string>() != "LIMIT") throw ConfigError("h must be a number or \"LIMIT\"");
      solver.h.reset();
    } else {
      solver.h = get_or<double>(doc, "h", 0.0);
    }
  }
  solver.T = get_or<double>(doc, "T", 1.0);
  solver.dt = get_or<double>(doc, "dt", 1.0 / 256);
  config.delta = get_or<double>(doc, "delta", 0.05);
  config.h_list = get_or<std::vector<double>>(doc, "h_list", config.h_list);

  QuadratureSpec& quad = solver.quad;
  quad.eta_radius = get_or<double>(doc, "eta_radius", quad.eta_radius);
  quad.eta_nodes_per_axis = get_or<int>(doc, "eta_nodes_per_axis", quad.eta_nodes_per_axis);
  quad.r_substeps_per_history_step =
      get_or<int>(doc, "r_substeps_per_history_step", quad.r_substeps_per_history_step);
  quad.tail_tolerance = get_or<double>(doc, "tail_tolerance", quad.tail_tolerance);
  quad.r_panel_length = get_or<double>(doc, "r_panel_length", quad.r_panel_length);
  quad.r_order = get_or<int>(doc, "r_order", quad.r_order);
  solver.squad.rho_nodes = get_or<int>(doc, "rho_nodes", solver.squad.rho_nodes);
  solver.squad.circle_nodes = get_or<int>(doc, "circle_nodes", solver.squad.circle_nodes);
  solver.fp_tol = get_or<double>(doc, "fp_tol", solver.fp_tol);
  solver.fp_max_iter = get_or<int>(doc, "fp_max_iter", solver.fp_max_iter);

  if (quad.eta_nodes_per_axis < 8) throw ConfigError("eta_nodes_per_axis must be >= 8");
  if (quad.r_substeps_per_history_step < 1) throw ConfigError("r_substeps_per_history_step must be >= 1");
  if (quad.r_order < 1) throw ConfigError("r_order must be >= 1");
  if (!(quad.tail_tolerance > 0)) throw ConfigError("tail_tolerance must be > 0");
  if (!(quad.r_panel_length > 0)) throw ConfigError("r_panel_length must be > 0");
  if (quad.eta_radius < 0) throw ConfigError("eta_radius must be >= 0");
  if (solver.squad.rho_nodes < 8 || solver.squad.circle_nodes < 8) {
    throw ConfigError("rho_nodes and circle_nodes must be >= 8");
  }
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

json to_json(const RunConfig& config) {
  const SolverConfig& s = config.solver;
  auto vec = [](const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  json doc;
  doc["dimension"] = s.profile.dimension();
  doc["amplitude"] = s.profile.amplitude();
  doc["center"] = vec(s.profile.center());
  doc["width"] = s.profile.width();
  doc["xi0"] = vec(s.xi0);
  if (s.h) {
    doc["h"] = *s.h;
  } else {
    doc["h"] = "LIMIT";
  }
  doc["T"] = s.T;
  doc["dt"] = s.dt;
  doc["delta"] = config.delta;
  doc["h_list"] = config.h_list;
  doc["eta_radius"] = s.quad.eta_radius;
  doc["eta_nodes_per_axis"] = s.quad.eta_nodes_per_axis;
  doc["r_substeps_per_history_step"] = s.quad.r_substeps_per_history_step;
  doc["tail_tolerance"] = s.quad.tail_tolerance;
  doc["r_panel_length"] = s.quad.r_panel_length;
  doc["r_order"] = s.quad.r_order;
  doc["rho_nodes"] = s.squad.rho_nodes;
  doc["circle_nodes"] = s.squad.circle_nodes;
  doc["fp_tol"] = s.fp_tol;
  doc["fp_max_iter"] = s.fp_max_iter;
  return doc;
}

std::string format_number(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.16e", value);
  return buffer;
}

std::string to_csv(const Table& table) {
  std::ostringstream out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out << (i ? "," : "") << quote_csv(table.columns[i]);
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      if (const double* number = std::get_if<double>(&row[i])) {
        out << format_number(*number);
      } else {
        out << quote_csv(std::get<std::string>(row[i]));
      }
    }
    out << '\n';
  }
  for (const auto& note : table.notes) out << "# " << note << '\n';
  return out.str();
}

json table_json(const Table& table) {
  json rows = json::array();
  for (const auto& row : table.rows) {
    json entry = json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::visit([&](const auto& value) { entry[table.columns[i]] = value; }, row[i]);
    }
    rows.push_back(std::move(entry));
  }
  return json{{"columns", table.columns}, {"rows", rows}, {"notes", table.notes}};
}

std::string write_table(const std::filesystem::path& directory, const std::string& stem,
                        const Table& table, Format format) {
  const std::string name = stem + (format == Format::csv ? ".csv" : ".json");
  std::ofstream out(directory / name, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + (directory / name).string() + "'");
  if (format == Format::csv) {
    out << to_csv(table);
  } else {
    out << table_json(table).dump(2) << '\n';
  }
  return name;
}

Table constants_table(const ConstantSet& c) {
  Table table{{"name", "value"}, {}, {}};
  auto add = [&](const char* name, double value) { table.rows.push_back({std::string(name), value}); };
  add("dimension", c.dimension);
  add("delta", c.delta);
  add("nu", c.nu);
  add("C_g", c.C_g);
  add("norm_g_L1", c.norm_g_L1);
  add("norm_ghat_L1", c.norm_ghat_L1);
  add("norm_ghat_prime_L1", c.norm_ghat_prime_L1);
  add("C1_g", c.C1_g);
  add("C2_g", c.C2_g);
  add("C3_g", c.C3_g);
  add("C_d", c.C_d);
  return table;
}

Table trajectory_table(const SolveResult& result) {
  const Trajectory& path = result.trajectory;
  const int d = path.dimension();
  Table table;
  table.columns.push_back("t");
  for (int i = 1; i <= d; ++i) table.columns.push_back("xi_" + std::to_string(i));
  table.columns.push_back("norm");
  for (int i = 1; i <= d; ++i) table.columns.push_back("F_" + std::to_string(i));
  table.columns.push_back("dxi_norm");
  for (std::size_t k = 0; k < path.size(); ++k) {
    std::vector<Cell> row;
    row.push_back(path.time(k));
    for (int i = 0; i < d; ++i) row.push_back(path.value(k)[i]);
    row.push_back(path.value(k).norm());
    for (int i = 0; i < d; ++i) {
      row.push_back(k < result.field.size() ? result.field[k][i]
                                            : std::numeric_limits<double>::quiet_NaN());
    }
    double derivative = 0;
    if (path.size() > 1) {
      const std::size_t left = k + 1 < path.size() ? k : k - 1;
      derivative = (path.value(left + 1) - path.value(left)).norm() / path.dt();
    }
    row.push_back(derivative);
    table.rows.push_back(std::move(row));
  }
  return table;
}

Table report_table(const BoundReport& report) {
  Table table{{report.abscissa_label, "observed", "envelope", "lower", "ratio", "violated"}, {}, {}};
  for (const BoundSample& s : report.samples) {
    const bool violated = s.observed > s.envelope * (1 + report.slack) ||
                          (std::isfinite(s.lower) && s.observed < s.lower * (1 - report.slack));
    table.rows.push_back({s.abscissa, s.observed, s.envelope,
                          std::isfinite(s.lower) ? Cell(s.lower) : Cell(std::string("")),
                          s.envelope > 0 ? s.observed / s.envelope : 0.0,
                          std::string(violated ? "1" : "0")});
  }
  if (!report.applicable) table.notes.push_back("not applicable: " + report.note);
  return table;
}

Table reports_summary_table(const std::vector<BoundReport>& reports) {
  Table table{{"report", "applicable", "violated", "max_ratio", "slack", "samples"}, {}, {}};
  for (const BoundReport& r : reports) {
    table.rows.push_back({r.name, std::string(r.applicable ? "1" : "0"),
                          std::string(r.violated ? "1" : "0"), r.max_ratio, r.slack,
                          std::to_string(r.samples.size())});
  }
  return table;
}

Table study_table(const StudyTable& study) {
  Table table{{"h", "sup_error", "gronwall_bound", "gronwall_ok", "status", "message"}, {}, {}};
  for (const StudyRow& row : study.rows) {
    table.rows.push_back({row.h, row.ok ? Cell(row.sup_error) : Cell(std::string("")),
                          row.gronwall_bound,
                          std::string(row.ok && row.sup_error <= row.gronwall_bound ? "1" : "0"),
                          std::string(row.ok ? "ok" : "failed"), row.message});
  }
  table.notes.push_back(std::string("monotone=") + (study.monotone ? "1" : "0") +
                        " lipschitz=" + format_number(study.lipschitz.L) +
                        " ring=[" + format_number(study.lipschitz.inner) + "," +
                        format_number(study.lipschitz.outer) + "]");
  return table;
}

}  // namespace imde
