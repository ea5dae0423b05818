#include "nhsense/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include <json.hpp>

namespace nhsense::io {

namespace {

using ordered_json = nlohmann::ordered_json;

const char* regime_name(analysis::Regime r) {
  switch (r) {
    case analysis::Regime::I: return "I";
    case analysis::Regime::II_e: return "II_e";
    case analysis::Regime::II_o: return "II_o";
    case analysis::Regime::III: return "III";
  }
  return "?";
}

// JSON numbers cannot carry inf/nan; those appear as strings.
ordered_json json_number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double number_from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "nan") return std::nan("");
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw std::runtime_error("not a number: " + s);
  }
  return j.get<double>();
}

ordered_json report_json_obj(const ResponseReport& r) {
  ordered_json j;
  j["signal"] = json_number(r.signal);
  j["noise"] = json_number(r.noise);
  j["n_tot"] = json_number(r.n_tot);
  j["snr"] = json_number(r.snr);
  j["snr_per_photon"] = json_number(r.snr_per_photon);
  j["log10_signal"] = json_number(r.log10_signal);
  j["log10_snr"] = json_number(r.log10_snr);
  j["cond"] = json_number(r.cond);
  j["pole"] = r.pole;
  return j;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string scaling_csv(const std::vector<analysis::ScalingRow>& rows) {
  std::string out =
      "N,m,signal_numeric,signal_analytic,noise_numeric,noise_analytic,"
      "n_tot_numeric,n_tot_analytic,snr,snr_per_photon,log10_signal,log10_snr,flags\n";
  for (const auto& r : rows) {
    out += std::to_string(r.n_cells) + ',' + std::to_string(r.m) + ',';
    out += format_double(r.numeric.signal) + ',';
    out += (r.analytic_valid ? format_double(r.analytic.signal) : "nan") + std::string(",");
    out += format_double(r.numeric.noise) + ',';
    out += (r.analytic_valid ? format_double(r.analytic.noise) : "nan") + std::string(",");
    out += format_double(r.numeric.n_tot) + ',';
    out += (r.analytic_valid ? format_double(r.analytic.n_tot) : "nan") + std::string(",");
    out += format_double(r.numeric.snr) + ',';
    out += format_double(r.numeric.snr_per_photon) + ',';
    out += format_double(r.numeric.log10_signal) + ',';
    out += format_double(r.numeric.log10_snr) + ',';
    out += r.flag + "\n";
  }
  return out;
}

std::string phase_diagram_csv(const std::vector<analysis::PhaseCell>& cells) {
  std::string out = "t1,t2,regime,onsite_winner,nhse_enhanced,stable\n";
  for (const auto& c : cells) {
    out += format_double(c.t1) + ',' + format_double(c.t2) + ',';
    out += regime_name(c.label.regime);
    out += ',';
    out += c.onsite_winner + ',';
    out += c.nhse_enhanced ? "true" : "false";
    out += ',';
    out += c.stable ? "true" : "false";
    out += '\n';
  }
  return out;
}

std::string response_json(const ResponseReport& report) {
  return report_json_obj(report).dump(2) + "\n";
}

ResponseReport parse_response_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  ResponseReport r;
  r.signal = number_from_json(j.at("signal"));
  r.noise = number_from_json(j.at("noise"));
  r.n_tot = number_from_json(j.at("n_tot"));
  r.snr = number_from_json(j.at("snr"));
  r.snr_per_photon = number_from_json(j.at("snr_per_photon"));
  r.log10_signal = number_from_json(j.at("log10_signal"));
  r.log10_snr = number_from_json(j.at("log10_snr"));
  r.cond = number_from_json(j.at("cond"));
  r.pole = j.at("pole").get<bool>();
  return r;
}

std::string stability_json(const StabilityReport& report) {
  ordered_json j;
  j["stable"] = report.stable;
  j["max_real_eigenvalue"] = report.max_real_eigenvalue;
  switch (report.reason) {
    case StabilityReason::AllNegative: j["reason"] = "all_negative"; break;
    case StabilityReason::PositiveRealPart: j["reason"] = "positive_real_part"; break;
    case StabilityReason::MappedToPureParametric: j["reason"] = "mapped_to_pure_parametric"; break;
  }
  return j.dump(2) + "\n";
}

std::string error_json(const std::string& code, const std::string& message) {
  ordered_json j;
  j["error"]["code"] = code;
  j["error"]["message"] = message;
  return j.dump(2) + "\n";
}

std::string scaling_json(const std::vector<analysis::ScalingRow>& rows) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : rows) {
    ordered_json j;
    j["N"] = r.n_cells;
    j["m"] = r.m;
    j["numeric"] = report_json_obj(r.numeric);
    if (r.analytic_valid) j["analytic"] = report_json_obj(r.analytic);
    j["flags"] = r.flag;
    arr.push_back(std::move(j));
  }
  ordered_json top;
  top["rows"] = std::move(arr);
  return top.dump(2) + "\n";
}

std::string phase_diagram_json(const std::vector<analysis::PhaseCell>& cells) {
  ordered_json arr = ordered_json::array();
  for (const auto& c : cells) {
    ordered_json j;
    j["t1"] = c.t1;
    j["t2"] = c.t2;
    j["regime"] = regime_name(c.label.regime);
    j["onsite_winner"] = c.onsite_winner;
    j["nhse_enhanced"] = c.nhse_enhanced;
    j["stable"] = c.stable;
    arr.push_back(std::move(j));
  }
  ordered_json top;
  top["cells"] = std::move(arr);
  return top.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << contents;
}

}  // namespace nhsense::io
