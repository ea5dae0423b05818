#pragma once

#include <map>
#include <optional>
#include <string>

#include "nhsense/analysis.hpp"

namespace nhsense::config {

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

enum class Command { Response, Scaling, PhaseDiagram, Stability, Verify };

enum class OutputFormat { Csv, Json };

struct GridAxis {
  std::string param;  // "N", "t1" or "t2"
  double min = 0.0;
  double max = 0.0;
  int steps = 2;
};

struct RunConfig {
  Command command = Command::Response;
  ChainSpec chain;
  DriveSpec drive;
  PerturbationSpec pert;
  std::optional<GridAxis> axis1;
  std::optional<GridAxis> axis2;
  analysis::ScanMode mode = analysis::ScanMode::AllOrders;
  std::optional<double> alpha;
  std::string out_path;
  OutputFormat format = OutputFormat::Csv;
  int threads = 0;

  void validate() const;
};

/// Minimal TOML document: [section] headers and key = value pairs holding
/// strings, numbers or booleans. Angle-valued keys additionally accept
/// multiples of pi written as strings ("pi/4", "-0.5*pi", "3pi/2").
struct TomlDoc {
  std::map<std::string, std::map<std::string, std::string>> sections;

  bool has(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section, const std::string& key) const;
  double get_number(const std::string& section, const std::string& key) const;
  bool get_bool(const std::string& section, const std::string& key) const;
  double get_angle(const std::string& section, const std::string& key) const;
};

TomlDoc parse_toml(const std::string& text);
TomlDoc parse_toml_file(const std::string& path);

/// "pi/4", "3pi/2", "-0.25*pi" or a plain number in radians.
double parse_angle(const std::string& text);

/// Builds a RunConfig from a parsed document. `command_override`, when
/// non-empty, wins over the file's `command` key (the CLI subcommand).
RunConfig load_run_config(const TomlDoc& doc, const std::string& command_override = "");

Command parse_command(const std::string& name);

}  // namespace nhsense::config
