#include "dickesim/run_config.hpp"

#include <set>

#include "dickesim/errors.hpp"
#include "dickesim/protocol.hpp"

namespace dickesim {

bool operator==(const PulseParams& a, const PulseParams& b) {
  return a.omega0_T == b.omega0_T && a.delta0_T == b.delta0_T && a.T == b.T &&
         a.window_halfwidth == b.window_halfwidth && a.center == b.center;
}

bool operator==(const IntegratorConfig& a, const IntegratorConfig& b) {
  return a.method == b.method && a.rel_tol == b.rel_tol &&
         a.abs_tol == b.abs_tol && a.max_step == b.max_step &&
         a.trace_samples == b.trace_samples;
}

bool operator==(const LabParams& a, const LabParams& b) {
  return a.eta == b.eta && a.nu_trap == b.nu_trap &&
         a.bare_rabi == b.bare_rabi && a.n_ions == b.n_ions &&
         a.heating_rate == b.heating_rate;
}

nlohmann::json config_to_json(const RunConfig& c) {
  nlohmann::json j;
  j["command"] = c.command;
  j["sector"] = {{"ions", c.ions}, {"excitations", c.excitations}};
  j["pulse"] = {{"omega0_T", c.pulse.omega0_T},
                {"delta0_T", c.pulse.delta0_T},
                {"T", c.pulse.T},
                {"window_halfwidth", c.pulse.window_halfwidth},
                {"center", c.pulse.center}};
  j["integrator"] = {{"method", method_name(c.integrator.method)},
                     {"rel_tol", c.integrator.rel_tol},
                     {"abs_tol", c.integrator.abs_tol},
                     {"max_step", c.integrator.max_step},
                     {"trace_samples", c.integrator.trace_samples}};
  j["sweep"] = {{"axis", c.sweep_axis},
                {"values", c.sweep_values},
                {"fluctuation", c.fluctuation},
                {"samples", c.samples},
                {"seed", c.seed}};
  j["lab"] = {{"lamb_dicke", c.lab.eta},
              {"trap_freq", c.lab.nu_trap},
              {"bare_rabi", c.lab.bare_rabi},
              {"heating_rate", c.lab.heating_rate}};
  j["total_time"] = c.total_time;
  j["epsilon"] = c.epsilon;
  j["jobs"] = c.jobs;
  j["output"] = {{"path", c.out_path}, {"format", c.format}};
  return j;
}

namespace {

// Reads known keys out of one JSON object and rejects everything else, so a
// misspelled key fails instead of silently keeping a default.
class StrictObject {
 public:
  StrictObject(const nlohmann::json& j, std::string prefix)
      : j_(j), prefix_(std::move(prefix)) {
    if (!j.is_object())
      throw InvalidArgs("config section " + label() + " must be an object");
  }

  template <typename T>
  void get(const char* key, T& target) {
    auto it = j_.find(key);
    if (it == j_.end()) return;
    seen_.insert(key);
    try {
      target = it->get<T>();
    } catch (const nlohmann::json::exception&) {
      throw InvalidArgs("config field " + path(key) + " has the wrong type");
    }
  }

  // Returns the nested object for `key` if present, marking it handled.
  const nlohmann::json* section(const char* key) {
    auto it = j_.find(key);
    if (it == j_.end()) return nullptr;
    seen_.insert(key);
    return &*it;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.contains(it.key()))
        throw InvalidArgs("unknown config key: " + path(it.key()));
  }

 private:
  std::string label() const { return prefix_.empty() ? "<root>" : prefix_; }
  std::string path(const std::string& key) const {
    return prefix_.empty() ? key : prefix_ + "." + key;
  }

  const nlohmann::json& j_;
  std::string prefix_;
  std::set<std::string> seen_;
};

}  // namespace

RunConfig config_from_json(const nlohmann::json& j) {
  RunConfig c;
  StrictObject root(j, "");
  root.get("command", c.command);
  if (const auto* s = root.section("sector")) {
    StrictObject sector(*s, "sector");
    sector.get("ions", c.ions);
    sector.get("excitations", c.excitations);
    sector.finish();
  }
  if (const auto* s = root.section("pulse")) {
    StrictObject pulse(*s, "pulse");
    pulse.get("omega0_T", c.pulse.omega0_T);
    pulse.get("delta0_T", c.pulse.delta0_T);
    pulse.get("T", c.pulse.T);
    pulse.get("window_halfwidth", c.pulse.window_halfwidth);
    pulse.get("center", c.pulse.center);
    pulse.finish();
  }
  if (const auto* s = root.section("integrator")) {
    StrictObject integ(*s, "integrator");
    std::string method = method_name(c.integrator.method);
    integ.get("method", method);
    c.integrator.method = parse_method(method);
    integ.get("rel_tol", c.integrator.rel_tol);
    integ.get("abs_tol", c.integrator.abs_tol);
    integ.get("max_step", c.integrator.max_step);
    integ.get("trace_samples", c.integrator.trace_samples);
    integ.finish();
  }
  if (const auto* s = root.section("sweep")) {
    StrictObject sweep(*s, "sweep");
    sweep.get("axis", c.sweep_axis);
    sweep.get("values", c.sweep_values);
    sweep.get("fluctuation", c.fluctuation);
    sweep.get("samples", c.samples);
    sweep.get("seed", c.seed);
    sweep.finish();
  }
  if (const auto* s = root.section("lab")) {
    StrictObject lab(*s, "lab");
    lab.get("lamb_dicke", c.lab.eta);
    lab.get("trap_freq", c.lab.nu_trap);
    lab.get("bare_rabi", c.lab.bare_rabi);
    lab.get("heating_rate", c.lab.heating_rate);
    lab.finish();
  }
  root.get("total_time", c.total_time);
  root.get("epsilon", c.epsilon);
  root.get("jobs", c.jobs);
  if (const auto* s = root.section("output")) {
    StrictObject output(*s, "output");
    output.get("path", c.out_path);
    output.get("format", c.format);
    output.finish();
  }
  root.finish();
  return c;
}

void validate(const RunConfig& c) {
  static const std::set<std::string> commands{
      "verify-ms", "simulate", "protocol", "sweep", "heating", "adiabaticity"};
  if (!commands.contains(c.command))
    throw InvalidArgs("unknown command: " + c.command);
  if (c.ions < 1 || c.ions > 32)
    throw InvalidArgs("ions must be between 1 and 32");
  if (c.excitations < 0) throw InvalidArgs("excitations must be non-negative");
  if (c.excitations > c.ions)
    throw InvalidArgs("excitations must not exceed ions");
  if (!(c.pulse.omega0_T > 0)) throw InvalidArgs("omega0_T must be positive");
  if (!(c.pulse.delta0_T >= 0))
    throw InvalidArgs("delta0_T must be non-negative");
  if (!(c.pulse.T > 0)) throw InvalidArgs("T must be positive");
  if (!(c.pulse.window_halfwidth > 0))
    throw InvalidArgs("window_halfwidth must be positive");
  if (!(c.integrator.rel_tol > 0)) throw InvalidArgs("rel_tol must be positive");
  if (!(c.integrator.abs_tol > 0))
    throw InvalidArgs("abs_tol must be positive");
  if (!(c.integrator.max_step > 0))
    throw InvalidArgs("max_step must be positive");
  if (c.integrator.trace_samples < 2)
    throw InvalidArgs("trace_samples must be at least 2");
  static const std::set<std::string> axes{"intensity", "omega0_T", "delta0_T",
                                          "window"};
  if (!axes.contains(c.sweep_axis))
    throw InvalidArgs("axis must be intensity, omega0_T, delta0_T or window");
  if (!(c.fluctuation >= 0 && c.fluctuation < 1))
    throw InvalidArgs("fluctuation must be in [0, 1)");
  if (c.samples < 1) throw InvalidArgs("samples must be at least 1");
  if (c.jobs < 0) throw InvalidArgs("jobs must be non-negative");
  if (!(c.epsilon > 0 && c.epsilon < 1))
    throw InvalidArgs("epsilon must be in (0, 1)");
  if (!(c.total_time >= 0)) throw InvalidArgs("total_time must be non-negative");
  if (c.format != "csv" && c.format != "json")
    throw InvalidArgs("format must be csv or json");
}

}  // namespace dickesim
