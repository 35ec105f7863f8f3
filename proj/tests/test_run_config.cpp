#include "dickesim/run_config.hpp"

#include <string>

#include "dickesim/errors.hpp"
#include "doctest.h"

using namespace dickesim;

TEST_CASE("default config survives a JSON round trip unchanged") {
  const RunConfig def;
  const auto parsed = config_from_json(config_to_json(def));
  CHECK(parsed == def);
}

TEST_CASE("non-default fields survive the round trip") {
  RunConfig c;
  c.command = "sweep";
  c.ions = 8;
  c.excitations = 3;
  c.pulse.omega0_T = 12.5;
  c.pulse.delta0_T = 4.0;
  c.pulse.window_halfwidth = 8.0;
  c.pulse.center = -0.5;
  c.integrator.method = IntegrationMethod::kUnitaryMidpoint;
  c.integrator.rel_tol = 1e-8;
  c.integrator.max_step = 0.005;
  c.integrator.trace_samples = 333;
  c.sweep_axis = "window";
  c.sweep_values = {3.0, 5.0, 8.0};
  c.fluctuation = 0.2;
  c.samples = 17;
  c.seed = 987654321;
  c.jobs = 4;
  c.lab.eta = 0.1;
  c.lab.nu_trap = 4e6;
  c.lab.bare_rabi = 2e6;
  c.lab.heating_rate = 5.0;
  c.total_time = 1e-3;
  c.epsilon = 1e-3;
  c.out_path = "out.csv";
  c.format = "json";
  const auto parsed = config_from_json(config_to_json(c));
  CHECK(parsed == c);
}

TEST_CASE("the lab ion count is not a config key of its own") {
  // The sector defines N everywhere; the lab section only carries the
  // per-setup rates, and the front end copies N in before dispatch.
  nlohmann::json j;
  j["sector"] = {{"ions", 9}, {"excitations", 2}};
  j["lab"] = {{"heating_rate", 5.0}};
  const auto c = config_from_json(j);
  CHECK(c.ions == 9);
  CHECK(c.lab.heating_rate == 5.0);
  nlohmann::json bad;
  bad["lab"] = {{"ions", 9}};
  CHECK_THROWS_WITH_AS(config_from_json(bad), "unknown config key: lab.ions",
                       InvalidArgs);
}

TEST_CASE("partial configs keep defaults for everything omitted") {
  nlohmann::json j;
  j["pulse"] = {{"window_halfwidth", 8.0}};
  const auto c = config_from_json(j);
  CHECK(c.pulse.window_halfwidth == 8.0);
  CHECK(c.pulse.omega0_T == 10.0);
  CHECK(c.pulse.delta0_T == 6.0);
  CHECK(c.integrator.trace_samples == 1000);
  CHECK(c.samples == 100);
  CHECK(c.seed == 12345);
  CHECK(c.format == "csv");
}

TEST_CASE("unknown keys are rejected, with their full path") {
  nlohmann::json top;
  top["omega0_T"] = 10.0;  // belongs under "pulse"
  CHECK_THROWS_WITH_AS(config_from_json(top), "unknown config key: omega0_T",
                       InvalidArgs);
  nlohmann::json nested;
  nested["pulse"] = {{"omega0", 10.0}};
  CHECK_THROWS_WITH_AS(config_from_json(nested),
                       "unknown config key: pulse.omega0", InvalidArgs);
}

TEST_CASE("wrongly typed values are rejected, naming the field") {
  nlohmann::json j;
  j["pulse"] = {{"omega0_T", "ten"}};
  CHECK_THROWS_WITH_AS(config_from_json(j),
                       "config field pulse.omega0_T has the wrong type",
                       InvalidArgs);
  nlohmann::json j2;
  j2["sector"] = 4;
  CHECK_THROWS_WITH_AS(config_from_json(j2),
                       "config section sector must be an object", InvalidArgs);
  nlohmann::json j3;
  j3["integrator"] = {{"method", "rk4"}};
  CHECK_THROWS_AS(config_from_json(j3), InvalidArgs);
}

TEST_CASE("validation names the offending field") {
  RunConfig c;
  c.ions = 0;
  CHECK_THROWS_WITH_AS(validate(c), "ions must be between 1 and 32",
                       InvalidArgs);
  c = RunConfig{};
  c.excitations = 7;
  c.ions = 6;
  CHECK_THROWS_WITH_AS(validate(c), "excitations must not exceed ions",
                       InvalidArgs);
  c = RunConfig{};
  c.pulse.omega0_T = 0.0;
  CHECK_THROWS_WITH_AS(validate(c), "omega0_T must be positive", InvalidArgs);
  c = RunConfig{};
  c.pulse.window_halfwidth = -2.0;
  CHECK_THROWS_WITH_AS(validate(c), "window_halfwidth must be positive",
                       InvalidArgs);
  c = RunConfig{};
  c.integrator.abs_tol = 0.0;
  CHECK_THROWS_WITH_AS(validate(c), "abs_tol must be positive", InvalidArgs);
  c = RunConfig{};
  c.integrator.trace_samples = 1;
  CHECK_THROWS_WITH_AS(validate(c), "trace_samples must be at least 2",
                       InvalidArgs);
  c = RunConfig{};
  c.sweep_axis = "phase";
  CHECK_THROWS_WITH_AS(validate(c),
                       "axis must be intensity, omega0_T, delta0_T or window",
                       InvalidArgs);
  c = RunConfig{};
  c.fluctuation = 1.0;
  CHECK_THROWS_WITH_AS(validate(c), "fluctuation must be in [0, 1)",
                       InvalidArgs);
  c = RunConfig{};
  c.samples = 0;
  CHECK_THROWS_WITH_AS(validate(c), "samples must be at least 1", InvalidArgs);
  c = RunConfig{};
  c.jobs = -1;
  CHECK_THROWS_WITH_AS(validate(c), "jobs must be non-negative", InvalidArgs);
  c = RunConfig{};
  c.epsilon = 1.0;
  CHECK_THROWS_WITH_AS(validate(c), "epsilon must be in (0, 1)", InvalidArgs);
  c = RunConfig{};
  c.total_time = -1.0;
  CHECK_THROWS_WITH_AS(validate(c), "total_time must be non-negative",
                       InvalidArgs);
  c = RunConfig{};
  c.format = "xml";
  CHECK_THROWS_WITH_AS(validate(c), "format must be csv or json", InvalidArgs);
  c = RunConfig{};
  c.command = "optimize";
  CHECK_THROWS_WITH_AS(validate(c), "unknown command: optimize", InvalidArgs);
  CHECK_NOTHROW(validate(RunConfig{}));
}

TEST_CASE("validation accepts the full documented command set") {
  for (const char* cmd : {"verify-ms", "simulate", "protocol", "sweep",
                          "heating", "adiabaticity"}) {
    RunConfig c;
    c.command = cmd;
    CHECK_NOTHROW(validate(c));
  }
}
