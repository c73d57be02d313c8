#include "qrabi/cli.hpp"

#include "qrabi/darkstates.hpp"
#include "qrabi/models.hpp"
#include "qrabi/symmetry.hpp"
#include "qrabi/tolerances.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace qrabi::cli {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fnv1a_hex(const std::string& text) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void atomic_write(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    }
    out << content;
    if (!out.good()) {
      throw std::runtime_error("write failed for " + tmp.string());
    }
  }
  fs::rename(tmp, path);
}

[[noreturn]] void fail_config(const std::string& msg) {
  throw config_error(msg);
}

void check_keys(const json& j, const char* context,
                std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) {
    fail_config(std::string(context) + " must be a JSON object");
  }
  for (const auto& item : j.items()) {
    bool ok = false;
    for (std::string_view k : allowed) {
      if (item.key() == k) ok = true;
    }
    if (!ok) {
      fail_config("unknown key '" + item.key() + "' in " + context);
    }
  }
}

double need_number(const json& j, const char* context, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    fail_config(std::string(context) + " needs numeric field '" + key + "'");
  }
  return j.at(key).get<double>();
}

double opt_number(const json& j, const char* context, const char* key,
                  double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) {
    fail_config(std::string(context) + " field '" + key + "' must be numeric");
  }
  return j.at(key).get<double>();
}

int opt_int(const json& j, const char* context, const char* key, int fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number_integer()) {
    fail_config(std::string(context) + " field '" + key + "' must be an integer");
  }
  return j.at(key).get<int>();
}

std::string opt_string(const json& j, const char* context, const char* key,
                       const std::string& fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_string()) {
    fail_config(std::string(context) + " field '" + key + "' must be a string");
  }
  return j.at(key).get<std::string>();
}

// ---------------------------------------------------------------------------
// Config model
// ---------------------------------------------------------------------------

struct EpsField {
  double value = 0.0;
  bool from_condition = false;
};

struct ModelSpec {
  std::string family;
  double omega = 1.0;
  std::vector<double> omegas;
  double delta1 = 0.0;
  double delta2 = 0.0;
  double g2_over_g1 = 1.0;
  double g_scale = 1.0;
  std::vector<double> coupling_weights;
  EpsField eps1;
  EpsField eps2;
  std::optional<int> sector;

  bool multimode() const {
    return family == "multimode" || family == "multimode_transformed";
  }
  double base_omega() const { return multimode() ? omegas.at(0) : omega; }
};

struct SweepSpec {
  double from = 0.0;
  double to = 1.0;
  int points = 101;
  int keep = 8;
};

struct TaskSpec {
  std::string type;
  std::string panel;
  std::string branch = "plus";
  double g_ref = 0.5;
  std::string detector = "dark";
  std::string label = "none";
  std::string op;
  std::optional<int> margin;
  double threshold = 1e-10;
  std::vector<double> g_values;
  std::vector<int> cutoffs;
  int k = 10;
  double tolerance = 1e-8;
  double g = 1.0;
};

struct RunConfig {
  std::optional<ModelSpec> model;
  std::vector<int> cutoffs;
  SweepSpec sweep;
  std::vector<TaskSpec> tasks;
  bool emit_csv = true;
  bool emit_json = true;
  std::string canonical;
};

EpsField parse_eps(const json& j, const char* context, const char* key) {
  EpsField out;
  if (!j.contains(key)) return out;
  const json& v = j.at(key);
  if (v.is_number()) {
    out.value = v.get<double>();
  } else if (v.is_string() && v.get<std::string>() == "dark-condition") {
    out.from_condition = true;
  } else {
    fail_config(std::string(context) + " field '" + key +
                "' must be a number or the string \"dark-condition\"");
  }
  return out;
}

std::vector<double> parse_number_list(const json& j, const char* context,
                                      const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    fail_config(std::string(context) + " needs array field '" + key + "'");
  }
  std::vector<double> out;
  for (const json& v : j.at(key)) {
    if (!v.is_number()) {
      fail_config(std::string(context) + " field '" + key +
                  "' must contain numbers only");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

ModelSpec parse_model(const json& j) {
  ModelSpec m;
  m.family = opt_string(j, "model", "family", "");
  if (m.family == "aqrm2") {
    check_keys(j, "model",
               {"family", "omega", "delta1", "delta2", "g2_over_g1", "g_scale",
                "eps1", "eps2"});
    m.omega = opt_number(j, "model", "omega", 1.0);
    m.eps1 = parse_eps(j, "model", "eps1");
    m.eps2 = parse_eps(j, "model", "eps2");
  } else if (m.family == "jc2") {
    check_keys(j, "model",
               {"family", "omega", "delta1", "delta2", "g2_over_g1", "g_scale",
                "sector"});
    m.omega = opt_number(j, "model", "omega", 1.0);
    if (j.contains("sector")) {
      m.sector = opt_int(j, "model", "sector", 0);
    }
  } else if (m.family == "multimode" || m.family == "multimode_transformed") {
    check_keys(j, "model",
               {"family", "omegas", "delta1", "delta2", "g2_over_g1", "g_scale",
                "coupling_weights", "eps1", "eps2"});
    m.omegas = parse_number_list(j, "model", "omegas");
    if (j.contains("coupling_weights")) {
      m.coupling_weights = parse_number_list(j, "model", "coupling_weights");
    } else {
      m.coupling_weights.assign(m.omegas.size(), 1.0);
    }
    if (m.coupling_weights.size() != m.omegas.size()) {
      fail_config("model coupling_weights must have one entry per mode");
    }
    m.eps1 = parse_eps(j, "model", "eps1");
    m.eps2 = parse_eps(j, "model", "eps2");
  } else {
    fail_config(
        "model family must be one of aqrm2, jc2, multimode, "
        "multimode_transformed");
  }
  m.delta1 = need_number(j, "model", "delta1");
  m.delta2 = need_number(j, "model", "delta2");
  m.g2_over_g1 = opt_number(j, "model", "g2_over_g1", 1.0);
  m.g_scale = opt_number(j, "model", "g_scale", 1.0);
  return m;
}

void resolve_eps(ModelSpec& m) {
  if (m.family == "jc2") return;
  const double w = m.base_omega();
  if (m.eps1.from_condition) {
    m.eps1.value = w * epsilon_condition(m.delta1 / w, m.delta2 / w);
  }
  if (m.eps2.from_condition) {
    const double s = m.g2_over_g1 < 0.0 ? -1.0 : 1.0;
    m.eps2.value =
        m.eps1.from_condition
            ? s * m.eps1.value
            : s * w * epsilon_condition(m.delta1 / w, m.delta2 / w);
  }
}

TaskSpec parse_task(const json& j, size_t pos) {
  const std::string context = "tasks[" + std::to_string(pos) + "]";
  if (!j.is_object()) fail_config(context + " must be an object");
  TaskSpec t;
  t.type = opt_string(j, context.c_str(), "type", "");
  if (t.type == "spectrum") {
    check_keys(j, context.c_str(), {"type"});
  } else if (t.type == "dark_state") {
    check_keys(j, context.c_str(), {"type", "branch", "g_ref"});
    t.branch = opt_string(j, context.c_str(), "branch", "plus");
    t.g_ref = opt_number(j, context.c_str(), "g_ref", 0.5);
    if (t.branch != "plus" && t.branch != "minus") {
      fail_config(context + " branch must be plus or minus");
    }
  } else if (t.type == "crossings") {
    check_keys(j, context.c_str(), {"type", "detector", "label"});
    t.detector = opt_string(j, context.c_str(), "detector", "dark");
    t.label = opt_string(j, context.c_str(), "label", "none");
    if (t.detector != "dark" && t.detector != "gap") {
      fail_config(context + " detector must be dark or gap");
    }
  } else if (t.type == "symmetry_check") {
    check_keys(j, context.c_str(),
               {"type", "op", "margin", "threshold", "g_values", "branch"});
    t.op = opt_string(j, context.c_str(), "op", "");
    if (j.contains("margin")) {
      t.margin = opt_int(j, context.c_str(), "margin", 0);
    }
    t.threshold = opt_number(j, context.c_str(), "threshold", 1e-10);
    t.g_values = parse_number_list(j, context.c_str(), "g_values");
    t.branch = opt_string(j, context.c_str(), "branch", "plus");
    if (t.g_values.empty()) fail_config(context + " g_values must be non-empty");
  } else if (t.type == "convergence") {
    check_keys(j, context.c_str(), {"type", "cutoffs", "k", "tolerance", "g"});
    for (double c : parse_number_list(j, context.c_str(), "cutoffs")) {
      t.cutoffs.push_back(static_cast<int>(c));
    }
    t.k = opt_int(j, context.c_str(), "k", 10);
    t.tolerance = opt_number(j, context.c_str(), "tolerance", 1e-8);
    t.g = opt_number(j, context.c_str(), "g", 1.0);
  } else if (t.type == "figure") {
    check_keys(j, context.c_str(), {"type", "panel"});
    t.panel = opt_string(j, context.c_str(), "panel", "");
    static const std::vector<std::string> panels = {"1a", "1b", "2a", "2b",
                                                    "3a", "3b", "3c", "3d"};
    if (std::find(panels.begin(), panels.end(), t.panel) == panels.end()) {
      fail_config(context + " panel must be one of 1a,1b,2a,2b,3a,3b,3c,3d");
    }
  } else {
    fail_config(context +
                " type must be one of spectrum, dark_state, crossings, "
                "symmetry_check, convergence, figure");
  }
  return t;
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail_config(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(j, "config", {"model", "truncation", "sweep", "tasks", "output"});
  RunConfig cfg;
  if (j.contains("model")) {
    cfg.model = parse_model(j.at("model"));
  }
  if (j.contains("truncation")) {
    const json& tr = j.at("truncation");
    check_keys(tr, "truncation", {"cutoffs"});
    for (double c : parse_number_list(tr, "truncation", "cutoffs")) {
      cfg.cutoffs.push_back(static_cast<int>(c));
    }
    if (cfg.cutoffs.empty()) fail_config("truncation cutoffs must be non-empty");
    for (int c : cfg.cutoffs) {
      if (c < 2) fail_config("truncation cutoffs must be at least 2");
    }
    for (int c : cfg.cutoffs) {
      if (c != cfg.cutoffs[0]) {
        fail_config("per-mode cutoffs must be equal for swept models");
      }
    }
  }
  if (j.contains("sweep")) {
    const json& sw = j.at("sweep");
    check_keys(sw, "sweep", {"from", "to", "points", "keep"});
    cfg.sweep.from = opt_number(sw, "sweep", "from", 0.0);
    cfg.sweep.to = opt_number(sw, "sweep", "to", 1.0);
    cfg.sweep.points = opt_int(sw, "sweep", "points", 101);
    cfg.sweep.keep = opt_int(sw, "sweep", "keep", 8);
    if (cfg.sweep.points < 2 || !(cfg.sweep.to > cfg.sweep.from)) {
      fail_config("sweep needs points >= 2 and to > from");
    }
    if (cfg.sweep.keep < 1) fail_config("sweep keep must be at least 1");
  }
  if (!j.contains("tasks") || !j.at("tasks").is_array()) {
    fail_config("config needs a 'tasks' array");
  }
  size_t pos = 0;
  for (const json& t : j.at("tasks")) {
    cfg.tasks.push_back(parse_task(t, pos++));
  }
  if (j.contains("output")) {
    const json& out = j.at("output");
    check_keys(out, "output", {"formats"});
    if (out.contains("formats")) {
      if (!out.at("formats").is_array()) {
        fail_config("output formats must be an array");
      }
      cfg.emit_csv = false;
      cfg.emit_json = false;
      for (const json& f : out.at("formats")) {
        const std::string s = f.is_string() ? f.get<std::string>() : "";
        if (s == "csv") {
          cfg.emit_csv = true;
        } else if (s == "json") {
          cfg.emit_json = true;
        } else {
          fail_config("output formats entries must be 'csv' or 'json'");
        }
      }
    }
  }
  cfg.canonical = j.dump(2);
  if (cfg.model) resolve_eps(*cfg.model);
  return cfg;
}

// ---------------------------------------------------------------------------
// Model adaptation
// ---------------------------------------------------------------------------

Aqrm2Params aqrm2_at(const ModelSpec& m, double gp) {
  Aqrm2Params p;
  p.omega = m.omega;
  p.delta1 = m.delta1;
  p.delta2 = m.delta2;
  p.g1 = m.g_scale * gp;
  p.g2 = m.g2_over_g1 * p.g1;
  p.eps1 = m.eps1.value;
  p.eps2 = m.eps2.value;
  return p;
}

Jc2Params jc2_at(const ModelSpec& m, double gp) {
  Jc2Params p;
  p.omega = m.omega;
  p.delta1 = m.delta1;
  p.delta2 = m.delta2;
  p.g1 = m.g_scale * gp;
  p.g2 = m.g2_over_g1 * p.g1;
  return p;
}

MultimodeParams multimode_at(const ModelSpec& m, double gp) {
  MultimodeParams p;
  p.omegas = m.omegas;
  p.delta1 = m.delta1;
  p.delta2 = m.delta2;
  p.eps1 = m.eps1.value;
  p.eps2 = m.eps2.value;
  for (double w : m.coupling_weights) {
    p.g_col1.push_back(m.g_scale * gp * w);
    p.g_col2.push_back(m.g2_over_g1 * m.g_scale * gp * w);
  }
  return p;
}

bool unit_ratio(const ModelSpec& m) {
  return std::abs(std::abs(m.g2_over_g1) - 1.0) <= tol::precondition_abs;
}

Branch ratio_branch(const ModelSpec& m) {
  return m.g2_over_g1 < 0.0 ? Branch::minus : Branch::plus;
}

enum class DarkKind { none, biased, unbiased, jc, multimode };

DarkKind dark_kind(const ModelSpec& m) {
  const double t = tol::precondition_abs;
  const double w = m.base_omega();
  if (m.family == "jc2") {
    if (m.sector && *m.sector >= 2 &&
        std::abs(m.delta1 + m.delta2 - w) <= t) {
      return DarkKind::jc;
    }
    return DarkKind::none;
  }
  if (!unit_ratio(m)) return DarkKind::none;
  const double s = branch_sign(ratio_branch(m));
  const bool eps_branch = std::abs(m.eps2.value - s * m.eps1.value) <= t;
  if (m.family == "aqrm2") {
    if (eps_branch) {
      if (std::abs(m.delta1 - m.delta2) <= t) return DarkKind::biased;
      try {
        if (std::abs(std::abs(m.eps1.value / w) -
                     epsilon_condition(m.delta1 / w, m.delta2 / w)) <= t) {
          return DarkKind::biased;
        }
      } catch (const no_dark_bias_error&) {
      }
    }
    if (std::abs(m.eps1.value) <= t && std::abs(m.eps2.value) <= t &&
        std::abs(m.delta1 + m.delta2 - w) <= t) {
      return DarkKind::unbiased;
    }
    return DarkKind::none;
  }
  if (m.family == "multimode") {
    if (!eps_branch) return DarkKind::none;
    if (std::abs(m.delta1 - m.delta2) <= t) return DarkKind::multimode;
    try {
      if (std::abs(std::abs(m.eps1.value / w) -
                   epsilon_condition(m.delta1 / w, m.delta2 / w)) <= t) {
        return DarkKind::multimode;
      }
    } catch (const no_dark_bias_error&) {
    }
  }
  return DarkKind::none;
}

SweepModel make_sweep_model(const ModelSpec& m) {
  SweepModel sm;
  sm.name = m.family;
  if (m.family == "aqrm2") {
    sm.hamiltonian = [m](double g, int n) { return build_aqrm2(aqrm2_at(m, g), n); };
  } else if (m.family == "jc2") {
    sm.hamiltonian = [m](double g, int n) { return build_jc2(jc2_at(m, g), n); };
    if (m.sector) {
      const int value = *m.sector;
      if (value < 0) {
        throw config_error("sector value must be non-negative");
      }
      sm.sector = [value](int n) {
        return excitation_sector_indices(n, value);
      };
    }
  } else if (m.family == "multimode") {
    sm.hamiltonian = [m](double g, int n) {
      std::vector<int> cuts(m.omegas.size(), n);
      return build_multimode(multimode_at(m, g), cuts);
    };
  } else if (m.family == "multimode_transformed") {
    sm.hamiltonian = [m](double g, int n) {
      std::vector<int> rest(m.omegas.size() - 1, n);
      return build_transformed_multimode(multimode_at(m, g), n, rest);
    };
  } else {
    throw config_error("unsupported model family '" + m.family + "'");
  }

  switch (dark_kind(m)) {
    case DarkKind::biased: {
      const Branch br = ratio_branch(m);
      sm.dark_state = [m, br](double g, int n) {
        return dark_state_aqrm2(aqrm2_at(m, g), br, n).state;
      };
      sm.dark_energy = m.omega;
      break;
    }
    case DarkKind::unbiased: {
      const Branch br = ratio_branch(m);
      sm.dark_state = [m, br](double g, int n) {
        return dark_state_aqrm2_unbiased(aqrm2_at(m, g), br, n).state;
      };
      sm.dark_energy = m.omega;
      break;
    }
    case DarkKind::jc: {
      const int n_exc = *m.sector - 2;
      sm.dark_state = [m, n_exc](double g, int n) {
        return jc_dark_state(n_exc, jc2_at(m, g), n).state;
      };
      sm.dark_energy = (n_exc + 1.0) * m.omega;
      break;
    }
    case DarkKind::multimode: {
      const Branch br = ratio_branch(m);
      sm.dark_state = [m, br](double g, int n) {
        std::vector<int> cuts(m.omegas.size(), n);
        return dark_state_multimode(multimode_at(m, g), br, cuts).state;
      };
      sm.dark_energy = m.omegas.at(0);
      break;
    }
    case DarkKind::none:
      break;
  }
  return sm;
}

// ---------------------------------------------------------------------------
// Emission helpers
// ---------------------------------------------------------------------------

std::string render_csv(const std::string& title,
                       const std::vector<std::string>& columns,
                       const std::vector<std::vector<double>>& rows) {
  std::ostringstream out;
  out << "# " << title << "\n";
  out << "# columns: ";
  for (size_t i = 0; i < columns.size(); ++i) {
    out << (i ? ", " : "") << columns[i];
  }
  out << "\n";
  for (size_t i = 0; i < columns.size(); ++i) {
    out << (i ? "," : "") << columns[i];
  }
  out << "\n";
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      out << (i ? "," : "") << fmt17(row[i]);
    }
    out << "\n";
  }
  return out.str();
}

json event_json(const CrossingEvent& ev) {
  json e;
  e["g_star"] = ev.g_star;
  e["energy"] = ev.energy;
  e["levels"] = {ev.level_indices.first, ev.level_indices.second};
  e["kind"] = to_string(ev.kind);
  e["gap"] = ev.gap;
  if (ev.labels) {
    e["labels"] = {ev.labels->first, ev.labels->second};
  }
  return e;
}

json model_echo(const ModelSpec& m) {
  json j;
  j["family"] = m.family;
  if (m.multimode()) {
    j["omegas"] = m.omegas;
    j["coupling_weights"] = m.coupling_weights;
  } else {
    j["omega"] = m.omega;
  }
  j["delta1"] = m.delta1;
  j["delta2"] = m.delta2;
  j["g2_over_g1"] = m.g2_over_g1;
  j["g_scale"] = m.g_scale;
  if (m.family != "jc2") {
    j["eps1"] = m.eps1.value;
    j["eps2"] = m.eps2.value;
  }
  if (m.sector) j["sector"] = *m.sector;
  return j;
}

std::vector<double> make_grid(const SweepSpec& s) {
  std::vector<double> grid(s.points);
  for (int i = 0; i < s.points; ++i) {
    grid[i] = s.from + (s.to - s.from) * i / (s.points - 1);
  }
  return grid;
}

json tolerances_json() {
  json t;
  t["hermiticity"] = tol::hermiticity;
  t["eig_residual_rel"] = tol::eig_residual_rel;
  t["nullspace_rel"] = tol::nullspace_rel;
  t["precondition_abs"] = tol::precondition_abs;
  t["dark_residual"] = tol::dark_residual;
  t["crossing_energy"] = tol::crossing_energy;
  t["avoided_gap"] = tol::avoided_gap;
  t["bisection_energy"] = tol::bisection_energy;
  t["bisection_interval"] = tol::bisection_interval;
  t["degeneracy_cluster"] = tol::degeneracy_cluster;
  t["ratio_cross_product"] = tol::ratio_cross_product;
  return t;
}

struct Artifact {
  std::string task_label;
  std::vector<std::string> files;
  std::string verdict;
  json measures = json::object();
};

struct PanelData {
  std::vector<double> grid;
  RealMatrix levels;
  RealMatrix nb;
  bool has_nb = false;
};

struct Runner {
  RunConfig cfg;
  fs::path out_dir;
  std::vector<Artifact> artifacts;
  std::map<std::string, PanelData> panels;
  std::map<std::string, int> name_counts;

  std::string unique_name(const std::string& base) {
    const int n = ++name_counts[base];
    return n == 1 ? base : base + "_" + std::to_string(n);
  }

  void write_text(const std::string& filename, const std::string& content,
                  Artifact& art) {
    atomic_write(out_dir / filename, content);
    art.files.push_back(filename);
  }

  void write_json(const std::string& filename, const json& j, Artifact& art) {
    if (!cfg.emit_json) return;
    write_text(filename, j.dump(2) + "\n", art);
  }

  void write_csv(const std::string& filename, const std::string& title,
                 const std::vector<std::string>& columns,
                 const std::vector<std::vector<double>>& rows, Artifact& art) {
    if (!cfg.emit_csv) return;
    write_text(filename, render_csv(title, columns, rows), art);
  }

  const ModelSpec& require_model(const char* task) const {
    if (!cfg.model) {
      throw config_error(std::string(task) +
                         " task needs a model block in the config");
    }
    if (cfg.cutoffs.empty()) {
      throw config_error(std::string(task) +
                         " task needs a truncation block in the config");
    }
    return *cfg.model;
  }

  void run_all();
  void run_task(const TaskSpec& t);
  void task_spectrum(const TaskSpec& t);
  void task_dark_state(const TaskSpec& t);
  void task_crossings(const TaskSpec& t);
  void task_symmetry_check(const TaskSpec& t);
  void task_convergence(const TaskSpec& t);
  void task_figure(const TaskSpec& t);
  void emit_comparison(const std::string& multi, const std::string& single);
  void write_manifest();
};

// Levels plus optional pinned-level column assembled into CSV rows. The
// pinned column reports the eigenvalue of the level with the largest overlap
// against the registered state.
std::vector<std::vector<double>> level_rows(
    const SweepResult& res, int keep_out,
    const std::vector<double>& front_extra_scale, bool dark_col,
    const RealMatrix* labels) {
  std::vector<std::vector<double>> rows;
  for (size_t i = 0; i < res.g_grid.size(); ++i) {
    std::vector<double> row;
    row.push_back(res.g_grid[i]);
    for (double s : front_extra_scale) {
      row.push_back(s * res.g_grid[i]);
    }
    for (int k = 0; k < keep_out; ++k) row.push_back(res.levels(i, k));
    if (dark_col) {
      Index pin = 0;
      res.dark_overlaps.row(i).maxCoeff(&pin);
      row.push_back(res.levels(i, pin));
    }
    if (labels) {
      for (int k = 0; k < keep_out; ++k) row.push_back((*labels)(i, k));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::string> level_columns(const std::string& x,
                                       const std::vector<std::string>& extra_x,
                                       int keep, bool dark_col,
                                       const char* label_prefix) {
  std::vector<std::string> cols{x};
  cols.insert(cols.end(), extra_x.begin(), extra_x.end());
  for (int k = 1; k <= keep; ++k) cols.push_back("level_" + std::to_string(k));
  if (dark_col) cols.push_back("dark_level");
  if (label_prefix) {
    for (int k = 1; k <= keep; ++k) {
      cols.push_back(std::string(label_prefix) + "_" + std::to_string(k));
    }
  }
  return cols;
}

void Runner::task_spectrum(const TaskSpec&) {
  const ModelSpec& m = require_model("spectrum");
  const SweepModel sm = make_sweep_model(m);
  const std::vector<double> grid = make_grid(cfg.sweep);
  const SweepResult res = sweep(sm, grid, cfg.cutoffs[0], cfg.sweep.keep);

  Artifact art;
  art.task_label = "spectrum";
  const std::string base = unique_name("spectrum");
  const bool dark = sm.has_dark_state();
  write_csv(base + ".csv", "energy levels over the coupling sweep",
            level_columns("g", {}, res.keep, dark, nullptr),
            level_rows(res, res.keep, {}, dark, nullptr), art);
  json side;
  side["model"] = model_echo(m);
  side["truncation"] = cfg.cutoffs;
  side["keep"] = res.keep;
  if (dark) {
    side["pinned_energy"] = sm.dark_energy;
    json gaps = json::array();
    for (size_t i = 0; i < grid.size(); ++i) {
      double best = std::abs(res.levels(i, 0) - sm.dark_energy);
      for (int k = 1; k < res.keep; ++k) {
        best = std::min(best, std::abs(res.levels(i, k) - sm.dark_energy));
      }
      gaps.push_back(best);
    }
    side["pinned_gap"] = gaps;
  }
  write_json(base + ".json", side, art);
  art.verdict = "ok";
  artifacts.push_back(std::move(art));
}

void Runner::task_dark_state(const TaskSpec& t) {
  const ModelSpec& m = require_model("dark_state");
  const Branch br = t.branch == "minus" ? Branch::minus : Branch::plus;
  const std::vector<double> grid = make_grid(cfg.sweep);
  const int cutoff = cfg.cutoffs[0];

  auto construct = [&](double g) -> DarkStateResult {
    if (m.family == "aqrm2") {
      const DarkKind kind = dark_kind(m);
      if (kind == DarkKind::unbiased) {
        return dark_state_aqrm2_unbiased(aqrm2_at(m, g), br, cutoff);
      }
      return dark_state_aqrm2(aqrm2_at(m, g), br, cutoff);
    }
    if (m.family == "multimode") {
      std::vector<int> cuts(m.omegas.size(), cutoff);
      return dark_state_multimode(multimode_at(m, g), br, cuts);
    }
    if (m.family == "jc2") {
      if (!m.sector || *m.sector < 2) {
        throw precondition_error(
            "jc2 dark state needs a sector value of at least 2");
      }
      return jc_dark_state(*m.sector - 2, jc2_at(m, g), cutoff);
    }
    throw precondition_error("no closed-form dark state for family '" +
                             m.family + "'");
  };
  const SweepModel sm = make_sweep_model(m);

  Artifact art;
  art.task_label = "dark_state";
  json side;
  side["model"] = model_echo(m);
  side["branch"] = t.branch;
  double max_res = 0.0;
  json per_point = json::array();
  for (double g : grid) {
    const DarkStateResult ds = construct(g);
    const Operator h = sm.hamiltonian(g, cutoff);
    const double r = residual(h, ds.state, ds.energy);
    max_res = std::max(max_res, r);
    per_point.push_back(json{{"g", g}, {"residual", r}});
  }
  const DarkStateResult ref = construct(t.g_ref);
  side["energy"] = ref.energy;
  side["construction"] =
      ref.construction == Construction::closed_form ? "closed_form"
                                                    : "nullspace_solve";
  side["g_ref"] = t.g_ref;
  json amps = json::array();
  for (Index i = 0; i < ref.state.amplitudes.size(); ++i) {
    const Complex a = ref.state.amplitudes(i);
    if (std::abs(a) > 0.0) {
      amps.push_back(json{{"index", i}, {"re", a.real()}, {"im", a.imag()}});
    }
  }
  side["amplitudes_at_g_ref"] = amps;
  side["max_residual"] = max_res;
  side["residuals"] = per_point;
  const std::string base = unique_name("dark_state");
  write_json(base + ".json", side, art);
  art.verdict = max_res <= tol::dark_residual ? "ok" : "residual-above-tolerance";
  art.measures["max_residual"] = max_res;
  artifacts.push_back(std::move(art));
}

void Runner::task_crossings(const TaskSpec& t) {
  const ModelSpec& m = require_model("crossings");
  const SweepModel sm = make_sweep_model(m);
  const std::vector<double> grid = make_grid(cfg.sweep);
  const int cutoff = cfg.cutoffs[0];
  const SweepResult res = sweep(sm, grid, cutoff, cfg.sweep.keep);

  std::vector<CrossingEvent> events;
  if (t.detector == "dark") {
    if (!sm.has_dark_state()) {
      throw precondition_error(
          "dark crossing detection needs parameters satisfying a dark-state "
          "condition");
    }
    events = detect_dark_crossings(res, sm.dark_energy);
  } else {
    events = detect_level_crossings(res, nullptr);
    if (t.label == "hidden_j" || t.label == "hidden_j_multimode") {
      for (CrossingEvent& ev : events) {
        if (ev.gap >= tol::crossing_energy || ev.g_star <= 1e-3) continue;
        Operator j =
            t.label == "hidden_j"
                ? hidden_symmetry_J(aqrm2_at(m, ev.g_star), cutoff)
                : hidden_symmetry_J_multimode(
                      multimode_at(m, ev.g_star), cutoff,
                      std::vector<int>(m.omegas.size() - 1, cutoff));
        ev = classify_crossing(sm, ev.g_star, ev.level_indices, cutoff,
                               cfg.sweep.keep, &j);
      }
    } else if (t.label != "none") {
      throw config_error("crossings label must be hidden_j, "
                         "hidden_j_multimode or none");
    }
  }

  Artifact art;
  art.task_label = "crossings";
  json side;
  side["model"] = model_echo(m);
  side["detector"] = t.detector;
  json evs = json::array();
  std::map<std::string, int> counts;
  for (const CrossingEvent& ev : events) {
    evs.push_back(event_json(ev));
    counts[to_string(ev.kind)]++;
  }
  side["events"] = evs;
  side["counts"] = counts;
  const std::string base = unique_name("crossings");
  write_json(base + ".json", side, art);
  art.verdict = "ok";
  art.measures["event_count"] = events.size();
  artifacts.push_back(std::move(art));
}

void Runner::task_symmetry_check(const TaskSpec& t) {
  const ModelSpec& m = require_model("symmetry_check");
  const SweepModel sm = make_sweep_model(m);
  const int cutoff = cfg.cutoffs[0];

  Artifact art;
  art.task_label = "symmetry_check";
  json reports = json::array();
  bool all_ok = true;
  for (double g : t.g_values) {
    std::vector<std::pair<std::string, Operator>> ops;
    Operator h = sm.hamiltonian(g, cutoff);
    int default_margin = 2;
    if (t.op == "parity") {
      ops.emplace_back("parity", parity_op(cutoff));
      default_margin = 0;
    } else if (t.op == "excitation_number") {
      ops.emplace_back("excitation_number", excitation_number_op(cutoff));
      default_margin = 0;
    } else if (t.op == "hidden_j") {
      ops.emplace_back("hidden_j", hidden_symmetry_J(aqrm2_at(m, g), cutoff));
    } else if (t.op == "hidden_j_multimode") {
      std::vector<int> rest(m.omegas.size() - 1, cutoff);
      ops.emplace_back(
          "hidden_j_multimode",
          hidden_symmetry_J_multimode(multimode_at(m, g), cutoff, rest));
      h = build_transformed_multimode(multimode_at(m, g), cutoff, rest);
    } else if (t.op == "mode_number") {
      const RealMatrix tmat = bogoliubov_coeffs(m.coupling_weights);
      std::vector<int> cuts(m.omegas.size(), cutoff);
      const std::vector<Operator> nb = mode_number_ops(tmat, cuts);
      for (size_t jx = 0; jx < nb.size(); ++jx) {
        ops.emplace_back("mode_number_" + std::to_string(jx + 2), nb[jx]);
      }
    } else if (t.op == "dark_projector") {
      const Branch br = t.branch == "minus" ? Branch::minus : Branch::plus;
      StateVector psi =
          m.family == "multimode"
              ? dark_state_multimode(multimode_at(m, g), br,
                                     std::vector<int>(m.omegas.size(), cutoff))
                    .state
              : dark_state_aqrm2(aqrm2_at(m, g), br, cutoff).state;
      ops.emplace_back("dark_projector", dark_projector(psi));
      default_margin = 0;
    } else {
      throw config_error(
          "symmetry_check op must be one of parity, excitation_number, "
          "hidden_j, hidden_j_multimode, mode_number, dark_projector");
    }
    const int margin = t.margin.value_or(default_margin);
    for (const auto& [name, op] : ops) {
      const SymmetryReport rep =
          check_symmetry(name, op, h, margin, t.threshold);
      all_ok = all_ok && rep.commutes;
      reports.push_back(json{{"operator", rep.operator_name},
                             {"g", g},
                             {"margin", rep.margin},
                             {"threshold", rep.threshold},
                             {"commutator_norm", rep.commutator_norm},
                             {"commutes", rep.commutes}});
    }
  }
  json side;
  side["model"] = model_echo(m);
  side["reports"] = reports;
  const std::string base = unique_name("symmetry_check");
  write_json(base + ".json", side, art);
  art.verdict = all_ok ? "ok" : "commutator-above-threshold";
  artifacts.push_back(std::move(art));
}

void Runner::task_convergence(const TaskSpec& t) {
  const ModelSpec& m = require_model("convergence");
  const SweepModel sm = make_sweep_model(m);
  const ConvergenceReport rep =
      convergence_check(sm, t.g, t.cutoffs, t.k, t.tolerance);

  Artifact art;
  art.task_label = "convergence";
  json side;
  side["model"] = model_echo(m);
  side["g"] = t.g;
  side["cutoffs"] = rep.cutoffs;
  side["k"] = rep.k;
  side["tolerance"] = rep.tolerance;
  side["changes"] = rep.changes;
  side["converged"] = rep.converged;
  const std::string base = unique_name("convergence");
  write_json(base + ".json", side, art);
  art.verdict = rep.converged ? "ok" : "not-converged";
  art.measures["final_change"] = rep.changes.back();
  artifacts.push_back(std::move(art));
}

// ---------------------------------------------------------------------------
// Figure presets
// ---------------------------------------------------------------------------

struct PanelPreset {
  ModelSpec model;
  std::vector<int> cutoffs;
  SweepSpec sweep;
};

PanelPreset panel_preset(const std::string& panel) {
  PanelPreset p;
  if (panel == "1a") {
    p.model.family = "aqrm2";
    p.model.delta1 = 0.6;
    p.model.delta2 = 0.3;
    p.model.eps1.from_condition = true;
    p.model.eps2.from_condition = true;
    p.cutoffs = {40};
    p.sweep = {0.0, 1.0, 101, 12};
  } else if (panel == "1b") {
    p.model.family = "aqrm2";
    p.model.delta1 = 0.8;
    p.model.delta2 = 0.8;
    p.model.eps1.value = 0.5;
    p.model.eps2.value = 0.0;
    p.cutoffs = {30};
    p.sweep = {0.0, 1.0, 101, 12};
  } else if (panel == "2a" || panel == "2b") {
    p.model.family = "jc2";
    p.model.delta1 = 0.55;
    p.model.delta2 = 0.45;
    p.model.g2_over_g1 = panel == "2a" ? 0.1 : 1.0;
    p.model.sector = 2;
    p.cutoffs = {8};
    p.sweep = {0.0, 1.0, 101, 4};
  } else if (panel == "3a" || panel == "3c") {
    p.model.family = "multimode";
    p.model.omegas = {1.0, 1.0};
    p.model.coupling_weights = {1.0, 1.0};
    if (panel == "3a") {
      p.model.delta1 = 0.5;
      p.model.delta2 = 0.2;
      p.model.eps1.from_condition = true;
      p.model.eps2.from_condition = true;
    } else {
      p.model.delta1 = 0.3;
      p.model.delta2 = 0.3;
      p.model.eps1.value = 0.5;
      p.model.eps2.value = 0.0;
    }
    p.cutoffs = {12, 12};
    p.sweep = {0.0, 0.7, 36, 12};
  } else if (panel == "3b" || panel == "3d") {
    p.model.family = "aqrm2";
    p.model.g_scale = std::sqrt(2.0);
    if (panel == "3b") {
      p.model.delta1 = 0.5;
      p.model.delta2 = 0.2;
      p.model.eps1.from_condition = true;
      p.model.eps2.from_condition = true;
    } else {
      p.model.delta1 = 0.3;
      p.model.delta2 = 0.3;
      p.model.eps1.value = 0.5;
      p.model.eps2.value = 0.0;
    }
    p.cutoffs = {24};
    p.sweep = {0.0, 0.7, 36, 12};
  } else {
    throw config_error("unknown figure panel '" + panel + "'");
  }
  resolve_eps(p.model);
  return p;
}

void Runner::task_figure(const TaskSpec& t) {
  const PanelPreset preset = panel_preset(t.panel);
  const ModelSpec& m = preset.model;
  const int cutoff = preset.cutoffs[0];
  const SweepModel sm = make_sweep_model(m);
  const std::vector<double> grid = make_grid(preset.sweep);
  const bool dark = sm.has_dark_state();
  const bool multimode = m.multimode();
  const bool scaled = std::abs(m.g_scale - 1.0) > 0.0;
  const int keep = preset.sweep.keep;

  // Crossing detection needs levels above the pinned energy in view even
  // when the plotted window has sunk below it, so track a wider window.
  int dim = 0;
  if (sm.has_sector()) {
    dim = static_cast<int>(sm.sector(cutoff).size());
  } else if (multimode) {
    dim = static_cast<int>(
        BasisDescriptor::multi_mode(std::vector<int>(m.omegas.size(), cutoff))
            .dimension());
  } else {
    dim = static_cast<int>(BasisDescriptor::single_mode(cutoff).dimension());
  }
  const int keep_detect =
      dark ? std::min(dim, keep + (multimode ? 48 : 12)) : keep;
  const SweepResult res = sweep(sm, grid, cutoff, keep_detect);

  Artifact art;
  art.task_label = "figure:" + t.panel;
  json side;
  side["panel"] = t.panel;
  side["model"] = model_echo(m);
  side["truncation"] = preset.cutoffs;
  side["sweep"] = json{{"from", preset.sweep.from},
                       {"to", preset.sweep.to},
                       {"points", preset.sweep.points},
                       {"keep", preset.sweep.keep}};
  side["keep_detect"] = keep_detect;

  // Residual-mode occupations for the multimode panels.
  RealMatrix nb_labels;
  const RealMatrix* labels_ptr = nullptr;
  if (multimode) {
    const RealMatrix tmat = bogoliubov_coeffs(m.coupling_weights);
    std::vector<int> cuts(m.omegas.size(), cutoff);
    const Operator nb2 = collective_number_op(tmat, 1, cuts);
    nb_labels = expectation_labels(res, nb2, tol::degeneracy_cluster);
    labels_ptr = &nb_labels;
    side["occupation_cluster_tolerance"] = tol::degeneracy_cluster;
  }

  const std::string x = multimode || scaled ? "gprime" : "g";
  std::vector<std::string> extra_x;
  std::vector<double> extra_scale;
  if (scaled) {
    extra_x.push_back("g");
    extra_scale.push_back(m.g_scale);
  }
  const std::string base = "figure_" + t.panel;
  write_csv(base + ".csv", "figure panel " + t.panel,
            level_columns(x, extra_x, keep, dark, multimode ? "nb" : nullptr),
            level_rows(res, keep, extra_scale, dark, labels_ptr), art);

  // Panel-specific reports.
  std::string verdict = "ok";
  if (t.panel == "1a" || t.panel == "3b" || t.panel == "3a" ||
      t.panel == "2a" || t.panel == "2b") {
    std::vector<CrossingEvent> events;
    if (dark) {
      events = detect_dark_crossings(res, sm.dark_energy);
    }
    json evs = json::array();
    for (const CrossingEvent& ev : events) {
      json e = event_json(ev);
      if (multimode) {
        // Sharp residual-mode occupations of the two crossing levels.
        const SweepPoint pt = eval_point(sm, ev.g_star, cutoff, res.keep);
        const RealMatrix tmat = bogoliubov_coeffs(m.coupling_weights);
        std::vector<int> cuts(m.omegas.size(), cutoff);
        const Operator nb2 = collective_number_op(tmat, 1, cuts);
        const int a = ev.level_indices.first;
        const int span = ev.level_indices.second - a + 1;
        const Matrix block = pt.vectors.middleCols(a, span).adjoint() *
                             nb2.matrix * pt.vectors.middleCols(a, span);
        Eigen::SelfAdjointEigenSolver<Matrix> solver(block);
        json nbv = json::array();
        for (Index c = 0; c < solver.eigenvalues().size(); ++c) {
          nbv.push_back(solver.eigenvalues()(c));
        }
        e["labels_nb"] = nbv;
      }
      evs.push_back(e);
    }
    side["crossings"] = evs;

    if (dark) {
      // Pinning quality: distance of the closest level to the pinned energy,
      // and the dark overlap away from detected crossings. Both bind the
      // verdict only when the registered state is an exact eigenstate.
      const StateVector trial = sm.dark_state(grid.back(), cutoff);
      const Operator h_probe = sm.hamiltonian(grid.back(), cutoff);
      const Vector tv = trial.amplitudes / trial.norm();
      const bool exact =
          (h_probe.matrix * tv - sm.dark_energy * tv).norm() <=
          100.0 * tol::dark_residual;
      double max_dev = 0.0;
      double min_overlap_away = 1.0;
      for (size_t i = 0; i < grid.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        Index pin = 0;
        res.dark_overlaps.row(i).maxCoeff(&pin);
        for (int k = 0; k < res.keep; ++k) {
          best = std::min(best, std::abs(res.levels(i, k) - sm.dark_energy));
        }
        max_dev = std::max(max_dev, best);
        bool near_crossing = false;
        for (const CrossingEvent& ev : events) {
          if (std::abs(grid[i] - ev.g_star) < 1e-3) near_crossing = true;
        }
        if (!near_crossing) {
          double cluster_overlap = 0.0;
          for (int k = 0; k < res.keep; ++k) {
            if (std::abs(res.levels(i, k) - res.levels(i, pin)) <
                tol::degeneracy_cluster) {
              cluster_overlap += res.dark_overlaps(i, k);
            }
          }
          min_overlap_away = std::min(min_overlap_away, cluster_overlap);
        }
      }
      side["pinning"] = json{{"exact_eigenstate", exact},
                             {"max_abs_deviation", max_dev},
                             {"min_overlap_away_from_crossings",
                              min_overlap_away}};
      if (exact &&
          (max_dev > tol::crossing_energy || min_overlap_away < 1.0 - 1e-6)) {
        verdict = "pinning-outside-tolerance";
      }
    }
  }
  if (t.panel == "1a") {
    const ConvergenceReport conv =
        convergence_check(sm, 1.0, std::vector<int>{30, 40}, 10, 1e-8);
    side["convergence"] = json{{"cutoffs", conv.cutoffs},
                               {"k", conv.k},
                               {"tolerance", conv.tolerance},
                               {"changes", conv.changes},
                               {"converged", conv.converged}};
    if (!conv.converged) verdict = "not-converged";
    json baselines = json::array();
    for (int n = 0; n <= 3; ++n) {
      json plus = json::array();
      json minus = json::array();
      for (double g : grid) {
        const auto [hi, lo] =
            baseline_energy(n, g, m.eps1.value, m.omega);
        plus.push_back(hi);
        minus.push_back(lo);
      }
      baselines.push_back(json{{"n", n}, {"plus", plus}, {"minus", minus}});
    }
    side["baselines"] = baselines;
  }
  if (t.panel == "1b" || t.panel == "3d") {
    std::vector<CrossingEvent> events = detect_level_crossings(res, nullptr);
    for (CrossingEvent& ev : events) {
      if (ev.gap >= tol::crossing_energy || ev.g_star <= 1e-3) continue;
      const Operator jop = hidden_symmetry_J(aqrm2_at(m, ev.g_star), cutoff);
      ev = classify_crossing(sm, ev.g_star, ev.level_indices, cutoff,
                             res.keep, &jop);
    }
    json evs = json::array();
    for (const CrossingEvent& ev : events) evs.push_back(event_json(ev));
    side["crossings"] = evs;
  }
  if (t.panel == "1b") {
    json checks = json::array();
    bool all_ok = true;
    for (double g : {0.1, 0.5, 1.0}) {
      const Operator jop = hidden_symmetry_J(aqrm2_at(m, g), cutoff);
      const Operator h = sm.hamiltonian(g, cutoff);
      const SymmetryReport rep = check_symmetry("hidden_j", jop, h, 2, 1e-10);
      all_ok = all_ok && rep.commutes;
      checks.push_back(json{{"operator", rep.operator_name},
                            {"g", g},
                            {"margin", rep.margin},
                            {"commutator_norm", rep.commutator_norm},
                            {"commutes", rep.commutes}});
    }
    side["symmetry_checks"] = checks;
    if (!all_ok) verdict = "commutator-above-threshold";
  }
  if (t.panel == "3c") {
    json checks = json::array();
    bool all_ok = true;
    std::vector<int> rest(m.omegas.size() - 1, cutoff);
    std::vector<int> cuts(m.omegas.size(), cutoff);
    for (double g : {0.1, 0.35, 0.7}) {
      const Operator jop =
          hidden_symmetry_J_multimode(multimode_at(m, g), cutoff, rest);
      const Operator ht =
          build_transformed_multimode(multimode_at(m, g), cutoff, rest);
      const SymmetryReport rj =
          check_symmetry("hidden_j_multimode", jop, ht, 2, 1e-10);
      all_ok = all_ok && rj.commutes;
      checks.push_back(json{{"operator", rj.operator_name},
                            {"g", g},
                            {"margin", rj.margin},
                            {"commutator_norm", rj.commutator_norm},
                            {"commutes", rj.commutes}});
      const Operator h = sm.hamiltonian(g, cutoff);
      const RealMatrix tmat = bogoliubov_coeffs(m.coupling_weights);
      for (const Operator& nb : mode_number_ops(tmat, cuts)) {
        const SymmetryReport rn = check_symmetry("mode_number", nb, h, 2, 1e-10);
        all_ok = all_ok && rn.commutes;
        checks.push_back(json{{"operator", rn.operator_name},
                              {"g", g},
                              {"margin", rn.margin},
                              {"commutator_norm", rn.commutator_norm},
                              {"commutes", rn.commutes}});
      }
    }
    side["symmetry_checks"] = checks;
    if (!all_ok) verdict = "commutator-above-threshold";
  }
  if (m.family == "jc2") {
    side["sector_dimension"] =
        excitation_sector_indices(cutoff, *m.sector).size();
  }

  write_json(base + ".json", side, art);
  art.verdict = verdict;

  PanelData pd;
  pd.grid = grid;
  pd.levels = res.levels;
  if (multimode) {
    pd.nb = nb_labels;
    pd.has_nb = true;
  }
  panels[t.panel] = std::move(pd);
  artifacts.push_back(std::move(art));
}

void Runner::emit_comparison(const std::string& multi,
                             const std::string& single) {
  const PanelData& a = panels.at(multi);
  const PanelData& b = panels.at(single);
  FilteredLadderInputs in;
  in.grid = a.grid;
  in.multi_levels = a.levels;
  in.multi_nb = a.nb;
  in.single_levels = b.levels;
  const LadderCompareReport rep = compare_filtered_ladders(in, 8, 1e-6, 1e-6);

  Artifact art;
  art.task_label = "comparison:" + multi + "-" + single;
  json side;
  side["panels"] = {multi, single};
  side["keep"] = rep.keep;
  side["level_tolerance"] = rep.level_tol;
  side["occupation_tolerance"] = rep.occupation_tol;
  json pts = json::array();
  for (const LadderComparePoint& p : rep.points) {
    pts.push_back(json{{"gprime", p.gprime},
                       {"survivors", p.survivors},
                       {"max_diff", p.max_diff},
                       {"pass", p.pass}});
  }
  side["points"] = pts;
  side["worst_diff"] = rep.worst_diff;
  side["pass"] = rep.pass;
  write_json("comparison_" + multi + "_" + single + ".json", side, art);
  art.verdict = rep.pass ? "ok" : "levels-disagree";
  art.measures["worst_diff"] = rep.worst_diff;
  artifacts.push_back(std::move(art));
}

void Runner::write_manifest() {
  json man;
  man["config_hash"] = fnv1a_hex(cfg.canonical);
  man["model_family"] = cfg.model ? json(cfg.model->family) : json(nullptr);
  man["truncation"] = cfg.cutoffs;
  man["tolerances"] = tolerances_json();
  json tasks = json::array();
  for (const Artifact& a : artifacts) {
    json t;
    t["task"] = a.task_label;
    t["files"] = a.files;
    t["verdict"] = a.verdict;
    if (!a.measures.empty()) t["measures"] = a.measures;
    tasks.push_back(t);
  }
  man["tasks"] = tasks;
  atomic_write(out_dir / "manifest.json", man.dump(2) + "\n");
}

void Runner::run_task(const TaskSpec& t) {
  if (t.type == "spectrum") {
    task_spectrum(t);
  } else if (t.type == "dark_state") {
    task_dark_state(t);
  } else if (t.type == "crossings") {
    task_crossings(t);
  } else if (t.type == "symmetry_check") {
    task_symmetry_check(t);
  } else if (t.type == "convergence") {
    task_convergence(t);
  } else if (t.type == "figure") {
    task_figure(t);
  }
}

void Runner::run_all() {
  fs::create_directories(out_dir);
  for (const TaskSpec& t : cfg.tasks) run_task(t);
  if (panels.count("3a") && panels.count("3b")) emit_comparison("3a", "3b");
  if (panels.count("3c") && panels.count("3d")) emit_comparison("3c", "3d");
  write_manifest();
}

}  // namespace

LadderCompareReport compare_filtered_ladders(const FilteredLadderInputs& in,
                                             int keep, double level_tol,
                                             double occupation_tol) {
  const Index points = static_cast<Index>(in.grid.size());
  if (in.multi_levels.rows() != points || in.multi_nb.rows() != points ||
      in.single_levels.rows() != points) {
    throw std::invalid_argument("ladder comparison inputs disagree on grid");
  }
  if (in.multi_levels.cols() != in.multi_nb.cols()) {
    throw std::invalid_argument("occupation matrix shape mismatch");
  }
  if (in.single_levels.cols() < keep || keep < 1) {
    throw std::invalid_argument("not enough single-mode levels to compare");
  }
  LadderCompareReport rep;
  rep.keep = keep;
  rep.level_tol = level_tol;
  rep.occupation_tol = occupation_tol;
  rep.pass = true;
  for (Index i = 0; i < points; ++i) {
    LadderComparePoint pt;
    pt.gprime = in.grid[i];
    std::vector<double> survivors;
    for (Index k = 0; k < in.multi_levels.cols(); ++k) {
      if (in.multi_nb(i, k) < occupation_tol) {
        survivors.push_back(in.multi_levels(i, k));
      }
    }
    pt.survivors = static_cast<int>(survivors.size());
    const int compare_n = std::min<int>(keep, pt.survivors);
    double diff = 0.0;
    for (int k = 0; k < compare_n; ++k) {
      diff = std::max(diff, std::abs(survivors[k] - in.single_levels(i, k)));
    }
    pt.max_diff = diff;
    pt.pass = pt.survivors >= keep && diff <= level_tol;
    rep.worst_diff = std::max(rep.worst_diff, diff);
    rep.pass = rep.pass && pt.pass;
    rep.points.push_back(pt);
  }
  return rep;
}

std::string figure_preset_text(const std::string& panel) {
  const PanelPreset p = panel_preset(panel);
  json j;
  json model = model_echo(p.model);
  // Presets state the bias condition symbolically so the intent is explicit.
  if (p.model.eps1.from_condition) model["eps1"] = "dark-condition";
  if (p.model.eps2.from_condition) model["eps2"] = "dark-condition";
  j["model"] = model;
  j["truncation"] = json{{"cutoffs", p.cutoffs}};
  j["sweep"] = json{{"from", p.sweep.from},
                    {"to", p.sweep.to},
                    {"points", p.sweep.points},
                    {"keep", p.sweep.keep}};
  j["tasks"] = json::array({json{{"type", "figure"}, {"panel", panel}}});
  return j.dump(2) + "\n";
}

void run_config_text(const std::string& config_text,
                     const std::string& out_dir, int threads) {
  if (threads < 1) threads = 1;
  Eigen::setNbThreads(threads);
  Runner runner;
  runner.cfg = parse_config(config_text);
  runner.out_dir = out_dir;
  runner.run_all();
}

namespace {

int resolve_threads(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("QRABI_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw config_error("cannot read config file '" + path + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main_entry(int argc, char** argv) {
  CLI::App app{"two-qubit light-matter spectra toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  int threads = 0;
  CLI::App* run_cmd = app.add_subcommand("run", "execute a JSON config");
  run_cmd->add_option("config", config_path, "config file")->required();
  run_cmd->add_option("--out", out_dir, "output directory");
  run_cmd->add_option("--threads", threads, "worker thread count");

  std::string panel;
  std::string fig_out;
  int fig_threads = 0;
  CLI::App* fig_cmd = app.add_subcommand("figure", "run a figure panel preset");
  fig_cmd->add_option("panel", panel, "panel id (1a..3d)")->required();
  fig_cmd->add_option("--out", fig_out, "output directory");
  fig_cmd->add_option("--threads", fig_threads, "worker thread count");

  std::string preset_panel;
  CLI::App* preset_cmd =
      app.add_subcommand("preset", "print a figure panel config");
  preset_cmd->add_option("panel", preset_panel, "panel id (1a..3d)")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (run_cmd->parsed()) {
      run_config_text(read_file(config_path), out_dir,
                      resolve_threads(threads));
    } else if (fig_cmd->parsed()) {
      const std::string dir = fig_out.empty() ? "out/fig" + panel : fig_out;
      run_config_text(figure_preset_text(panel), dir,
                      resolve_threads(fig_threads));
    } else if (preset_cmd->parsed()) {
      std::fputs(figure_preset_text(preset_panel).c_str(), stdout);
    }
  } catch (const config_error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const precondition_error& e) {
    std::fprintf(stderr, "precondition violated: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 4;
  }
  return 0;
}

}  // namespace qrabi::cli
