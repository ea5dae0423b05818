#include "nhsense/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <regex>
#include <sstream>

namespace nhsense::config {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

// Removes a trailing comment, respecting double-quoted strings.
std::string strip_comment(const std::string& line) {
  bool in_quote = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_quote = !in_quote;
    if (line[i] == '#' && !in_quote) return line.substr(0, i);
  }
  return line;
}

std::string unquote(const std::string& v) {
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return v.substr(1, v.size() - 2);
  return v;
}

}  // namespace

TomlDoc parse_toml(const std::string& text) {
  TomlDoc doc;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("config line " + std::to_string(lineno) + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      doc.sections[section];
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key or value");
    doc.sections[section][key] = value;
  }
  return doc;
}

TomlDoc parse_toml_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_toml(ss.str());
}

bool TomlDoc::has(const std::string& section, const std::string& key) const {
  const auto it = sections.find(section);
  return it != sections.end() && it->second.count(key) > 0;
}

std::string TomlDoc::get_string(const std::string& section, const std::string& key) const {
  const auto it = sections.find(section);
  if (it == sections.end() || !it->second.count(key))
    throw ConfigError("missing config key [" + section + "] " + key);
  return unquote(it->second.at(key));
}

double TomlDoc::get_number(const std::string& section, const std::string& key) const {
  const std::string v = get_string(section, key);
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config key [" + section + "] " + key + ": not a number: " + v);
  }
}

bool TomlDoc::get_bool(const std::string& section, const std::string& key) const {
  const std::string v = get_string(section, key);
  if (v == "true") return true;
  if (v == "false") return false;
  throw ConfigError("config key [" + section + "] " + key + ": not a boolean: " + v);
}

double TomlDoc::get_angle(const std::string& section, const std::string& key) const {
  return parse_angle(get_string(section, key));
}

double parse_angle(const std::string& text) {
  const std::string v = trim(text);
  static const std::regex pi_form(R"(^([+-]?)(\d+\.?\d*|\.\d+)?\s*\*?\s*pi\s*(?:/\s*(\d+\.?\d*))?$)",
                                  std::regex::icase);
  std::smatch m;
  if (std::regex_match(v, m, pi_form)) {
    const double sign = m[1].str() == "-" ? -1.0 : 1.0;
    const double coef = m[2].matched ? std::stod(m[2].str()) : 1.0;
    const double den = m[3].matched ? std::stod(m[3].str()) : 1.0;
    return sign * coef * std::acos(-1.0) / den;
  }
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("not an angle (radians or multiple of pi): " + text);
  }
}

Command parse_command(const std::string& name) {
  if (name == "response") return Command::Response;
  if (name == "scaling") return Command::Scaling;
  if (name == "phase-diagram") return Command::PhaseDiagram;
  if (name == "stability") return Command::Stability;
  if (name == "verify") return Command::Verify;
  throw ConfigError("unknown command: " + name);
}

namespace {

GridAxis load_axis(const TomlDoc& doc, const std::string& prefix) {
  GridAxis ax;
  ax.param = doc.get_string("grid", prefix);
  ax.min = doc.get_number("grid", prefix + "_min");
  ax.max = doc.get_number("grid", prefix + "_max");
  ax.steps = static_cast<int>(doc.get_number("grid", prefix + "_steps"));
  if (ax.steps < 2) throw ConfigError("grid axis " + prefix + ": steps must be >= 2");
  if (ax.param != "N" && ax.param != "t1" && ax.param != "t2")
    throw ConfigError("grid axis " + prefix + ": unsupported parameter " + ax.param);
  return ax;
}

}  // namespace

RunConfig load_run_config(const TomlDoc& doc, const std::string& command_override) {
  RunConfig cfg;
  if (!command_override.empty()) {
    cfg.command = parse_command(command_override);
  } else if (doc.has("", "command")) {
    cfg.command = parse_command(doc.get_string("", "command"));
  } else {
    throw ConfigError("no command given (CLI subcommand or top-level `command` key)");
  }

  if (doc.sections.count("chain")) {
    cfg.chain.n_cells = static_cast<int>(doc.get_number("chain", "n_cells"));
    const std::string parity = doc.has("chain", "parity") ? doc.get_string("chain", "parity") : "odd";
    if (parity == "odd") cfg.chain.parity = Parity::Odd;
    else if (parity == "even") cfg.chain.parity = Parity::Even;
    else throw ConfigError("chain.parity must be \"odd\" or \"even\"");
    cfg.chain.t1 = doc.get_number("chain", "t1");
    cfg.chain.t2 = doc.get_number("chain", "t2");
    cfg.chain.gamma1 = doc.get_number("chain", "gamma1");
    cfg.chain.gamma2 = doc.get_number("chain", "gamma2");
    cfg.chain.kappa = doc.get_number("chain", "kappa");
    if (doc.has("chain", "m")) cfg.chain.m = static_cast<int>(doc.get_number("chain", "m"));
  }

  if (doc.sections.count("drive")) {
    cfg.drive.beta_abs = doc.get_number("drive", "beta_abs");
    cfg.drive.theta = doc.get_angle("drive", "theta");
    cfg.drive.phi_meas = doc.get_angle("drive", "phi_meas");
    cfg.drive.tau = doc.get_number("drive", "tau");
    if (doc.has("drive", "n_th")) cfg.drive.n_th = doc.get_number("drive", "n_th");
  }

  if (doc.sections.count("pert")) {
    const std::string kind = doc.get_string("pert", "kind");
    if (kind == "onsite") cfg.pert.kind = PertKind::OnSite;
    else if (kind == "nhse") cfg.pert.kind = PertKind::Nhse;
    else throw ConfigError("pert.kind must be \"onsite\" or \"nhse\"");
    cfg.pert.epsilon = doc.get_number("pert", "epsilon");
    if (doc.has("pert", "phi")) cfg.pert.phi = doc.get_angle("pert", "phi");
  }

  if (doc.sections.count("grid")) {
    cfg.axis1 = load_axis(doc, "axis1");
    if (doc.has("grid", "axis2")) cfg.axis2 = load_axis(doc, "axis2");
    if (doc.has("grid", "mode")) {
      const std::string mode = doc.get_string("grid", "mode");
      if (mode == "linear") cfg.mode = analysis::ScanMode::Linear;
      else if (mode == "all_orders") cfg.mode = analysis::ScanMode::AllOrders;
      else throw ConfigError("grid.mode must be \"linear\" or \"all_orders\"");
    }
    if (doc.has("grid", "alpha")) cfg.alpha = doc.get_number("grid", "alpha");
  }

  if (doc.sections.count("output")) {
    if (doc.has("output", "path")) cfg.out_path = doc.get_string("output", "path");
    if (doc.has("output", "format")) {
      const std::string fmt = doc.get_string("output", "format");
      if (fmt == "csv") cfg.format = OutputFormat::Csv;
      else if (fmt == "json") cfg.format = OutputFormat::Json;
      else throw ConfigError("output.format must be \"csv\" or \"json\"");
    }
  }

  cfg.validate();
  return cfg;
}

void RunConfig::validate() const {
  const bool needs_grid = command == Command::Scaling || command == Command::PhaseDiagram;
  if (needs_grid && !axis1) throw ConfigError("this command requires a [grid] section");
  if (!needs_grid && axis1) throw ConfigError("this command takes no [grid] section");
  if (command == Command::Scaling && axis1 && axis1->param != "N")
    throw ConfigError("scaling grids sweep the axis \"N\"");
  if (command == Command::PhaseDiagram) {
    if (!axis2) throw ConfigError("phase-diagram grids need axis1 and axis2");
    if (axis1->param != "t1" || axis2->param != "t2")
      throw ConfigError("phase-diagram grids sweep axis1 = \"t1\", axis2 = \"t2\"");
  }
  try {
    chain.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid chain: ") + e.what());
  }
  if (pert.epsilon < 0.0) throw ConfigError("pert.epsilon must be >= 0");
  if (alpha && (*alpha <= 0.0 || *alpha > 1.0)) throw ConfigError("alpha must lie in (0, 1]");
}

}  // namespace nhsense::config
