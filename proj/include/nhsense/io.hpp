#pragma once

#include <string>
#include <vector>

#include "nhsense/analysis.hpp"
#include "nhsense/config.hpp"

namespace nhsense::io {

/// Shortest-round-trip decimal form (17 significant digits), locale-free.
std::string format_double(double v);

std::string scaling_csv(const std::vector<analysis::ScalingRow>& rows);
std::string phase_diagram_csv(const std::vector<analysis::PhaseCell>& cells);

std::string response_json(const ResponseReport& report);
ResponseReport parse_response_json(const std::string& text);

std::string stability_json(const StabilityReport& report);
std::string error_json(const std::string& code, const std::string& message);

std::string scaling_json(const std::vector<analysis::ScalingRow>& rows);
std::string phase_diagram_json(const std::vector<analysis::PhaseCell>& cells);

void write_file(const std::string& path, const std::string& contents);

}  // namespace nhsense::io
