#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "nhsense/io.hpp"
#include "nhsense/verify.hpp"

namespace {

using namespace nhsense;

struct CliArgs {
  std::string config_path;
  std::string out_path;
  std::string format;
  double alpha = -1.0;
  int threads = 0;
};

int thread_count(const CliArgs& args) {
  if (args.threads > 0) return args.threads;
  if (const char* env = std::getenv("NHSENSE_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 0;
}

void emit(const std::string& payload, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << payload;
  } else {
    io::write_file(out_path, payload);
  }
}

int run_command(config::Command command, const CliArgs& args) {
  config::RunConfig cfg;
  if (command == config::Command::Verify && args.config_path.empty()) {
    cfg.command = config::Command::Verify;  // verify has a built-in default setup
  } else {
    if (args.config_path.empty()) throw config::ConfigError("--config is required");
    std::string name;
    switch (command) {
      case config::Command::Response: name = "response"; break;
      case config::Command::Scaling: name = "scaling"; break;
      case config::Command::PhaseDiagram: name = "phase-diagram"; break;
      case config::Command::Stability: name = "stability"; break;
      case config::Command::Verify: name = "verify"; break;
    }
    cfg = config::load_run_config(config::parse_toml_file(args.config_path), name);
  }
  if (!args.out_path.empty()) cfg.out_path = args.out_path;
  if (!args.format.empty()) {
    if (args.format == "csv") cfg.format = config::OutputFormat::Csv;
    else if (args.format == "json") cfg.format = config::OutputFormat::Json;
    else throw config::ConfigError("--format must be csv or json");
  }
  if (args.alpha >= 0.0) cfg.alpha = args.alpha;

  sweep::Options sweep_opts;
  sweep_opts.threads = thread_count(args);

  switch (cfg.command) {
    case config::Command::Response: {
      const ResponseReport rep = compute_report(cfg.chain, cfg.drive, cfg.pert);
      emit(io::response_json(rep), cfg.out_path);
      return 0;
    }
    case config::Command::Stability: {
      emit(io::stability_json(check_stability(cfg.chain)), cfg.out_path);
      return 0;
    }
    case config::Command::Scaling: {
      analysis::ScalingRequest req;
      req.baseline = cfg.chain;
      req.drive = cfg.drive;
      req.pert = cfg.pert;
      req.n_min = static_cast<int>(cfg.axis1->min);
      req.n_max = static_cast<int>(cfg.axis1->max);
      req.mode = cfg.mode;
      req.alpha = cfg.alpha;
      // scanning an unstable baseline is a configuration-level failure
      ChainSpec probe = cfg.chain;
      probe.n_cells = std::max(req.n_min, 1);
      probe.m = std::min(probe.m, probe.n_cells);
      require_stable(probe);
      const auto rows = analysis::scaling_scan(req, sweep_opts);
      emit(cfg.format == config::OutputFormat::Csv ? io::scaling_csv(rows)
                                                   : io::scaling_json(rows),
           cfg.out_path);
      return 0;
    }
    case config::Command::PhaseDiagram: {
      analysis::PhaseDiagramRequest req;
      req.baseline = cfg.chain;
      req.drive = cfg.drive;
      req.t1_min = cfg.axis1->min;
      req.t1_max = cfg.axis1->max;
      req.t1_steps = cfg.axis1->steps;
      req.t2_min = cfg.axis2->min;
      req.t2_max = cfg.axis2->max;
      req.t2_steps = cfg.axis2->steps;
      const auto cells = analysis::phase_diagram_scan(req, sweep_opts);
      emit(cfg.format == config::OutputFormat::Csv ? io::phase_diagram_csv(cells)
                                                   : io::phase_diagram_json(cells),
           cfg.out_path);
      return 0;
    }
    case config::Command::Verify: {
      const auto suites = verify::run_all();
      bool all_ok = true;
      std::string text;
      for (const auto& s : suites) {
        all_ok = all_ok && s.failed == 0;
        text += (s.failed == 0 ? "PASS " : "FAIL ") + s.name +
                ": passed=" + std::to_string(s.passed) + " failed=" + std::to_string(s.failed) +
                " worst=" + io::format_double(s.worst) + "\n";
      }
      emit(text, cfg.out_path);
      return all_ok ? 0 : 1;
    }
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"driven-dissipative squeezed SSH chain sensing toolkit"};
  app.require_subcommand(1);

  CliArgs args;
  config::Command command = config::Command::Verify;

  const auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* opt = sub->add_option("--config", args.config_path, "TOML run configuration");
    if (config_required) opt->required();
    sub->add_option("--out", args.out_path, "output file (default: stdout)");
    sub->add_option("--format", args.format, "csv or json (scaling / phase-diagram)");
    sub->add_option("--alpha", args.alpha, "drive-position coefficient m = floor(alpha N)");
    sub->add_option("--threads", args.threads, "sweep worker threads (or NHSENSE_THREADS)");
  };

  add_common(app.add_subcommand("response", "steady-state report for one parameter point")
                 ->callback([&] { command = config::Command::Response; }),
             true);
  add_common(app.add_subcommand("scaling", "response table against system size")
                 ->callback([&] { command = config::Command::Scaling; }),
             true);
  add_common(app.add_subcommand("phase-diagram", "regime and winner grid over (t1, t2)")
                 ->callback([&] { command = config::Command::PhaseDiagram; }),
             true);
  add_common(app.add_subcommand("stability", "eigenvalue stability report")
                 ->callback([&] { command = config::Command::Stability; }),
             true);
  add_common(app.add_subcommand("verify", "run the cross-validation suites")
                 ->callback([&] { command = config::Command::Verify; }),
             false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (app.exit(e) == 0) return 0;
    std::cerr << nhsense::io::error_json("config", e.what());
    return 2;
  }

  try {
    return run_command(command, args);
  } catch (const config::ConfigError& e) {
    std::cerr << nhsense::io::error_json("config", e.what());
    return 2;
  } catch (const InstabilityError& e) {
    std::cerr << nhsense::io::error_json("instability", e.what());
    return 3;
  } catch (const SingularMatrixError& e) {
    std::cerr << nhsense::io::error_json("singular", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::cerr << nhsense::io::error_json("internal", e.what());
    return 1;
  }
}
