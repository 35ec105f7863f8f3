// Command-line front end: parses flags and optional JSON config, validates,
// dispatches to the library, and writes traces/reports (CSV or JSON).
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dickesim/errors.hpp"
#include "dickesim/hamiltonian.hpp"
#include "dickesim/morris_shore.hpp"
#include "dickesim/propagator.hpp"
#include "dickesim/protocol.hpp"
#include "dickesim/pulse.hpp"
#include "dickesim/run_config.hpp"
#include "dickesim/sector.hpp"
#include "dickesim/trace_io.hpp"

namespace {

using namespace dickesim;

// Every flag is optional so that precedence is: flag > config file > default.
struct Flags {
  std::optional<int> ions, excitations, samples, jobs, trace_samples;
  std::optional<double> omega0T, delta0T, window, center, fluctuation, rel_tol,
      abs_tol, max_step, trap_freq, lamb_dicke, bare_rabi, heating_rate,
      total_time, epsilon;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out, format, config_path, method, axis;
  std::vector<double> values;
  bool dump_config = false;
};

void add_common_options(CLI::App* cmd, Flags& f) {
  cmd->add_option("--ions", f.ions, "number of ions N");
  cmd->add_option("--excitations", f.excitations,
                  "number of shared quanta m (sector label)");
  cmd->add_option("--omega0T", f.omega0T,
                  "peak effective Rabi frequency times T");
  cmd->add_option("--delta0T", f.delta0T, "chirp amplitude times T");
  cmd->add_option("--window", f.window, "stage half-width in units of T");
  cmd->add_option("--center", f.center, "pulse centre in units of T");
  cmd->add_option("--fluctuation", f.fluctuation,
                  "relative intensity fluctuation f for sweeps");
  cmd->add_option("--samples", f.samples, "number of random sweep samples");
  cmd->add_option("--seed", f.seed, "RNG seed for sweeps");
  cmd->add_option("--jobs", f.jobs,
                  "worker threads for sweeps (0 = all cores)");
  cmd->add_option("--axis", f.axis,
                  "sweep axis: intensity, omega0_T, delta0_T or window");
  cmd->add_option("--values", f.values, "parameter values for a sweep axis")
      ->delimiter(',');
  cmd->add_option("--out", f.out, "output file path (default: stdout)");
  cmd->add_option("--format", f.format, "output format: csv or json");
  cmd->add_option("--config", f.config_path, "JSON config file to load");
  cmd->add_flag("--dump-config", f.dump_config,
                "print the effective config as JSON and exit");
  cmd->add_option("--method", f.method,
                  "integrator: adaptive-embedded-RK or "
                  "fixed-step-unitary-midpoint");
  cmd->add_option("--rel-tol", f.rel_tol, "integrator relative tolerance");
  cmd->add_option("--abs-tol", f.abs_tol, "integrator absolute tolerance");
  cmd->add_option("--max-step", f.max_step,
                  "maximum integrator step in units of T");
  cmd->add_option("--trace-samples", f.trace_samples,
                  "number of uniformly spaced trace samples");
  cmd->add_option("--trap-freq", f.trap_freq,
                  "trap frequency (same units as all other rates)");
  cmd->add_option("--lamb-dicke", f.lamb_dicke, "Lamb-Dicke parameter");
  cmd->add_option("--bare-rabi", f.bare_rabi,
                  "peak bare Rabi frequency of one ion");
  cmd->add_option("--heating-rate", f.heating_rate,
                  "phonon heating rate per ion (1/s)");
  cmd->add_option("--total-time", f.total_time,
                  "protocol wall time in seconds (heating estimate)");
  cmd->add_option("--epsilon", f.epsilon, "adiabaticity leakage target");
}

RunConfig merge(const Flags& f, const CLI::App& sub) {
  RunConfig cfg;
  if (f.config_path) {
    std::ifstream is(*f.config_path);
    if (!is) throw InvalidArgs("cannot read config file: " + *f.config_path);
    nlohmann::json j;
    try {
      is >> j;
    } catch (const nlohmann::json::parse_error& e) {
      throw InvalidArgs(std::string("config file is not valid JSON: ") +
                        e.what());
    }
    cfg = config_from_json(j);
  }
  cfg.command = sub.get_name();
  if (f.ions) cfg.ions = *f.ions;
  if (f.excitations) cfg.excitations = *f.excitations;
  if (f.omega0T) cfg.pulse.omega0_T = *f.omega0T;
  if (f.delta0T) cfg.pulse.delta0_T = *f.delta0T;
  if (f.window) cfg.pulse.window_halfwidth = *f.window;
  if (f.center) cfg.pulse.center = *f.center;
  if (f.method) cfg.integrator.method = parse_method(*f.method);
  if (f.rel_tol) cfg.integrator.rel_tol = *f.rel_tol;
  if (f.abs_tol) cfg.integrator.abs_tol = *f.abs_tol;
  if (f.max_step) cfg.integrator.max_step = *f.max_step;
  if (f.trace_samples) cfg.integrator.trace_samples = *f.trace_samples;
  if (f.axis) cfg.sweep_axis = *f.axis;
  if (sub.count("--values") > 0) cfg.sweep_values = f.values;
  if (f.fluctuation) cfg.fluctuation = *f.fluctuation;
  if (f.samples) cfg.samples = *f.samples;
  if (f.seed) cfg.seed = *f.seed;
  if (f.jobs) cfg.jobs = *f.jobs;
  if (f.lamb_dicke) cfg.lab.eta = *f.lamb_dicke;
  if (f.trap_freq) cfg.lab.nu_trap = *f.trap_freq;
  if (f.bare_rabi) cfg.lab.bare_rabi = *f.bare_rabi;
  if (f.heating_rate) cfg.lab.heating_rate = *f.heating_rate;
  if (f.total_time) cfg.total_time = *f.total_time;
  if (f.epsilon) cfg.epsilon = *f.epsilon;
  if (f.out) cfg.out_path = *f.out;
  if (f.format) cfg.format = *f.format;
  cfg.lab.n_ions = cfg.ions;
  return cfg;
}

nlohmann::json wrap(const RunConfig& cfg, nlohmann::json results) {
  nlohmann::json j;
  j["command"] = cfg.command;
  j["config"] = config_to_json(cfg);
  j["results"] = std::move(results);
  return j;
}

void emit(const RunConfig& cfg, const std::string& content,
          const std::string& summary_line) {
  if (cfg.out_path.empty()) {
    std::cout << content;
  } else {
    write_file_atomic(cfg.out_path, content);
    if (!summary_line.empty()) std::cout << summary_line << "\n";
  }
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

int run_verify_ms(const RunConfig& cfg) {
  const auto report = verify_ms_conditions(cfg.ions, cfg.excitations);
  std::cout << to_text(report);
  if (!cfg.out_path.empty()) {
    if (cfg.format == "csv") {
      write_file_atomic(cfg.out_path, to_csv(report));
    } else {
      auto j = wrap(cfg, to_json(report));
      j["residuals"] = j["results"]["residuals"];
      write_file_atomic(cfg.out_path, dump(j));
    }
    std::cout << "report written to " << cfg.out_path << "\n";
  }
  return 0;
}

int run_simulate(const RunConfig& cfg) {
  const auto basis = enumerate_sector(cfg.ions, cfg.excitations);
  const HamiltonianOperator op(basis);
  const auto start = dicke_state(basis, 0);        // |0...0>|m>
  const auto target = dicke_state(basis, cfg.excitations);
  const auto trace = evolve_full(op, cfg.pulse, start, target, cfg.integrator);
  const std::string content = cfg.format == "csv"
                                  ? to_csv(trace)
                                  : dump(to_json(trace));
  emit(cfg, content,
       "final fidelity = " + format_double(trace.fidelity.back()));
  return 0;
}

int run_protocol_cmd(const RunConfig& cfg) {
  const auto result =
      run_protocol(cfg.ions, cfg.excitations, cfg.pulse, cfg.integrator);
  const auto summary = dump(wrap(cfg, to_json(result)));
  if (cfg.out_path.empty()) {
    std::cout << summary;
    return 0;
  }
  const std::filesystem::path p(cfg.out_path);
  std::string ext = p.extension().string();
  if (ext.empty()) ext = cfg.format == "json" ? ".json" : ".csv";
  const auto in_dir = [&](const std::string& name) {
    return (p.parent_path() / name).string();
  };
  const std::string stage1_path = in_dir(p.stem().string() + "_stage1" + ext);
  const std::string summary_path =
      in_dir(p.stem().string() + "_summary.json");
  const auto render = [&](const SimulationTrace& t) {
    return cfg.format == "csv" ? to_csv(t) : dump(to_json(t));
  };
  write_file_atomic(cfg.out_path, render(result.stage2_trace));
  write_file_atomic(stage1_path, render(result.stage1_trace));
  write_file_atomic(summary_path, summary);
  std::cout << "final fidelity = " << format_double(result.final_fidelity)
            << "\n"
            << "stage-2 trace written to " << cfg.out_path << "\n"
            << "stage-1 trace written to " << stage1_path << "\n"
            << "summary written to " << summary_path << "\n";
  return 0;
}

int run_sweep(const RunConfig& cfg) {
  SweepResult result;
  if (cfg.sweep_axis == "intensity") {
    result = sweep_intensity(cfg.ions, cfg.excitations, cfg.pulse,
                             cfg.fluctuation, cfg.samples, cfg.seed,
                             cfg.integrator, cfg.jobs);
  } else {
    result = sweep_parameter(cfg.ions, cfg.excitations, cfg.pulse,
                             parse_axis(cfg.sweep_axis), cfg.sweep_values,
                             cfg.integrator, cfg.jobs);
  }
  const std::string content = cfg.format == "csv"
                                  ? to_csv(result)
                                  : dump(wrap(cfg, to_json(result)));
  emit(cfg, content,
       "fidelity min = " + format_double(result.summary.min) +
           ", median = " + format_double(result.summary.median) +
           ", mean = " + format_double(result.summary.mean));
  return 0;
}

int run_heating(const RunConfig& cfg) {
  const auto estimate = heating_estimate(cfg.lab, cfg.total_time);
  emit(cfg, dump(wrap(cfg, to_json(estimate))),
       "phonons gained = " + format_double(estimate.phonons_gained) +
           ", infidelity estimate = " +
           format_double(estimate.infidelity_estimate));
  return 0;
}

int run_adiabaticity(const RunConfig& cfg) {
  const auto report = adiabaticity_margins(cfg.pulse, cfg.excitations,
                                           cfg.ions, cfg.epsilon);
  nlohmann::json results;
  results["adiabaticity"] = to_json(report);
  const bool have_lab =
      cfg.lab.eta > 0 && cfg.lab.nu_trap > 0 && cfg.lab.bare_rabi > 0;
  if (have_lab) {
    results["trap"] = to_json(trap_constraint_check(cfg.lab));
    results["min_timescale"] =
        min_pulse_timescale(cfg.lab, cfg.pulse.omega0_T);
  }
  std::string summary =
      "left:  " + format_double(report.lhs) +
      " >= " + format_double(report.mid) + "  (ratio " +
      format_double(report.left_ratio) +
      (report.left_ok ? ")  OK" : ")  VIOLATED") + "\nright: " +
      format_double(report.mid) + " >= " + format_double(report.rhs) +
      "  (ratio " + format_double(report.right_ratio) +
      (report.right_ok ? ")  OK" : ")  VIOLATED");
  if (cfg.out_path.empty()) {
    std::cout << summary << "\n";
    std::cout << dump(wrap(cfg, results));
  } else {
    write_file_atomic(cfg.out_path, dump(wrap(cfg, results)));
    std::cout << summary << "\n";
  }
  return 0;
}

int dispatch(const RunConfig& cfg) {
  if (cfg.command == "verify-ms") return run_verify_ms(cfg);
  if (cfg.command == "simulate") return run_simulate(cfg);
  if (cfg.command == "protocol") return run_protocol_cmd(cfg);
  if (cfg.command == "sweep") return run_sweep(cfg);
  if (cfg.command == "heating") return run_heating(cfg);
  if (cfg.command == "adiabaticity") return run_adiabaticity(cfg);
  throw InvalidArgs("unknown command: " + cfg.command);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Adiabatic preparation of symmetric Dicke states of trapped ions "
      "coupled to a shared phonon mode"};
  app.require_subcommand(1);
  Flags flags;
  const std::map<std::string, std::string> subcommands{
      {"verify-ms", "check the Morris-Shore factorisation conditions"},
      {"simulate", "single-stage run: phonon Fock start toward the Dicke "
                   "target"},
      {"protocol", "both stages: Fock-state creation, then Dicke transfer"},
      {"sweep", "fidelity under intensity fluctuations or a parameter scan"},
      {"heating", "bus-mode heating budget estimate"},
      {"adiabaticity", "adiabaticity inequalities and trap-frequency check"}};
  for (const auto& [name, desc] : subcommands)
    add_common_options(app.add_subcommand(name, desc), flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 1;
  }

  try {
    const CLI::App* sub = app.get_subcommands().front();
    const RunConfig cfg = merge(flags, *sub);
    validate(cfg);
    if (flags.dump_config) {
      std::cout << dump(config_to_json(cfg));
      return 0;
    }
    return dispatch(cfg);
  } catch (const IntegrationFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
