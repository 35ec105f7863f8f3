#pragma once

#include <string>

#include "json.hpp"

#include "dickesim/morris_shore.hpp"
#include "dickesim/propagator.hpp"
#include "dickesim/protocol.hpp"
#include "dickesim/pulse.hpp"

namespace dickesim {

// Shortest decimal representation that round-trips the exact double.
std::string format_double(double value);

std::string to_csv(const SimulationTrace& trace);
nlohmann::json to_json(const SimulationTrace& trace);

std::string to_csv(const MsVerificationReport& report);
nlohmann::json to_json(const MsVerificationReport& report);

std::string to_csv(const SweepResult& result);
nlohmann::json to_json(const SweepResult& result);

nlohmann::json to_json(const ProtocolResult& result);
nlohmann::json to_json(const HeatingEstimate& estimate);
nlohmann::json to_json(const AdiabaticityReport& report);
nlohmann::json to_json(const TrapCheckReport& report);

// Writes to <path>.tmp first and renames into place, so a failed run never
// leaves a partial output file behind.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace dickesim
