#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dickesim/propagator.hpp"
#include "dickesim/pulse.hpp"
#include "json.hpp"

namespace dickesim {

bool operator==(const PulseParams& a, const PulseParams& b);
bool operator==(const IntegratorConfig& a, const IntegratorConfig& b);
bool operator==(const LabParams& a, const LabParams& b);

// Complete description of one CLI run. Every subcommand reads the subset of
// fields it needs; unknown keys in a config file are rejected so typos fail
// loudly instead of silently falling back to defaults.
struct RunConfig {
  std::string command = "simulate";

  int ions = 6;
  int excitations = 2;

  PulseParams pulse;
  IntegratorConfig integrator;

  // sweep settings
  std::string sweep_axis = "intensity";
  std::vector<double> sweep_values;
  double fluctuation = 0.1;
  int samples = 100;
  std::uint64_t seed = 12345;
  int jobs = 0;

  // laboratory-scale inputs (trap / heating / adiabaticity checks)
  LabParams lab;
  double total_time = 400e-6;  // seconds
  double epsilon = 1e-4;       // adiabaticity leakage target

  std::string out_path;        // empty: print to stdout
  std::string format = "csv";  // csv | json

  bool operator==(const RunConfig&) const = default;
};

nlohmann::json config_to_json(const RunConfig& config);

// Parses a config object produced by config_to_json (or written by hand).
// Missing keys keep their defaults; unknown keys or wrongly typed values
// raise InvalidArgs naming the offending field.
RunConfig config_from_json(const nlohmann::json& j);

// Field-by-field validation; raises InvalidArgs naming the offending field.
void validate(const RunConfig& config);

}  // namespace dickesim
