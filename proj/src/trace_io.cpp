#include "dickesim/trace_io.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <system_error>

namespace dickesim {

std::string format_double(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string to_csv(const SimulationTrace& trace) {
  std::string out;
  out += "t_over_T";
  for (std::size_t i = 0; i < trace.n_states; ++i)
    out += ",p_state_" + std::to_string(i);
  for (int mu = 0; mu < trace.n_manifolds; ++mu)
    out += ",p_manifold_" + std::to_string(mu);
  out += ",fidelity\n";
  for (std::size_t s = 0; s < trace.times.size(); ++s) {
    out += format_double(trace.times[s]);
    for (std::size_t i = 0; i < trace.n_states; ++i)
      out += "," + format_double(trace.population(s, i));
    for (int mu = 0; mu < trace.n_manifolds; ++mu)
      out += "," + format_double(trace.manifold_population(s, mu));
    out += "," + format_double(trace.fidelity[s]);
    out += "\n";
  }
  return out;
}

nlohmann::json to_json(const SimulationTrace& trace) {
  nlohmann::json j;
  j["n_states"] = trace.n_states;
  j["n_manifolds"] = trace.n_manifolds;
  j["times"] = trace.times;
  auto rows = nlohmann::json::array();
  for (std::size_t s = 0; s < trace.times.size(); ++s) {
    auto row = nlohmann::json::array();
    for (std::size_t i = 0; i < trace.n_states; ++i)
      row.push_back(trace.population(s, i));
    rows.push_back(std::move(row));
  }
  j["populations"] = std::move(rows);
  auto mrows = nlohmann::json::array();
  for (std::size_t s = 0; s < trace.times.size(); ++s) {
    auto row = nlohmann::json::array();
    for (int mu = 0; mu < trace.n_manifolds; ++mu)
      row.push_back(trace.manifold_population(s, mu));
    mrows.push_back(std::move(row));
  }
  j["manifold_populations"] = std::move(mrows);
  j["fidelity"] = trace.fidelity;
  auto re = nlohmann::json::array();
  auto im = nlohmann::json::array();
  for (const auto& a : trace.final_state.amp) {
    re.push_back(a.real());
    im.push_back(a.imag());
  }
  j["final_state"] = {{"real", std::move(re)}, {"imag", std::move(im)}};
  return j;
}

std::string to_csv(const MsVerificationReport& report) {
  std::string out =
      "mu,commutator_norm,identity_residual,diag_upper_ok,diag_lower_ok,"
      "offdiag_count_ok,offdiag_match_ok\n";
  for (const auto& r : report.per_manifold) {
    out += std::to_string(r.mu) + "," + format_double(r.commutator_norm) +
           "," + format_double(r.identity_residual) + "," +
           (r.diag_upper_ok ? "1" : "0") + "," +
           (r.diag_lower_ok ? "1" : "0") + "," +
           (r.offdiag_count_ok ? "1" : "0") + "," +
           (r.offdiag_match_ok ? "1" : "0") + "\n";
  }
  return out;
}

nlohmann::json to_json(const MsVerificationReport& report) {
  nlohmann::json j;
  j["ions"] = report.n_ions;
  j["excitations"] = report.n_quanta;
  j["sector_dim"] = report.sector_dim;
  j["pass"] = report.pass;
  auto rows = nlohmann::json::array();
  for (const auto& r : report.per_manifold) {
    rows.push_back({{"mu", r.mu},
                    {"commutator_norm", r.commutator_norm},
                    {"identity_residual", r.identity_residual},
                    {"diag_upper_ok", r.diag_upper_ok},
                    {"diag_lower_ok", r.diag_lower_ok},
                    {"offdiag_count_ok", r.offdiag_count_ok},
                    {"offdiag_match_ok", r.offdiag_match_ok}});
  }
  j["residuals"] = std::move(rows);
  return j;
}

std::string to_csv(const SweepResult& result) {
  std::string out;
  const bool intensity =
      !result.samples.empty() && !result.samples.front().gains.empty();
  if (intensity) {
    out = "sample,fidelity";
    for (std::size_t g = 0; g < result.samples.front().gains.size(); ++g)
      out += ",g_" + std::to_string(g);
    out += "\n";
    for (std::size_t s = 0; s < result.samples.size(); ++s) {
      out += std::to_string(s) + "," +
             format_double(result.samples[s].fidelity);
      for (double g : result.samples[s].gains)
        out += "," + format_double(g);
      out += "\n";
    }
  } else {
    out = "sample,value,fidelity\n";
    for (std::size_t s = 0; s < result.samples.size(); ++s)
      out += std::to_string(s) + "," +
             format_double(result.samples[s].value) + "," +
             format_double(result.samples[s].fidelity) + "\n";
  }
  return out;
}

nlohmann::json to_json(const SweepResult& result) {
  nlohmann::json j;
  j["seed"] = result.seed;
  auto rows = nlohmann::json::array();
  for (const auto& s : result.samples) {
    nlohmann::json row;
    if (!s.gains.empty())
      row["gains"] = s.gains;
    else
      row["value"] = s.value;
    row["fidelity"] = s.fidelity;
    rows.push_back(std::move(row));
  }
  j["samples"] = std::move(rows);
  j["summary"] = {{"min", result.summary.min},
                  {"median", result.summary.median},
                  {"mean", result.summary.mean}};
  return j;
}

nlohmann::json to_json(const ProtocolResult& result) {
  nlohmann::json j;
  j["final_fidelity"] = result.final_fidelity;
  j["stage1_final_fidelity"] = result.stage1_trace.fidelity.back();
  j["timeline"] = {
      {"stage1", {result.timeline.stage1_begin, result.timeline.stage1_end}},
      {"stage2", {result.timeline.stage2_begin, result.timeline.stage2_end}}};
  return j;
}

nlohmann::json to_json(const HeatingEstimate& estimate) {
  return {{"total_time_s", estimate.total_time},
          {"phonons_gained", estimate.phonons_gained},
          {"infidelity_estimate", estimate.infidelity_estimate}};
}

nlohmann::json to_json(const AdiabaticityReport& report) {
  return {{"epsilon", report.epsilon},
          {"lhs", report.lhs},
          {"mid", report.mid},
          {"rhs", report.rhs},
          {"left_ok", report.left_ok},
          {"right_ok", report.right_ok},
          {"left_ratio", report.left_ratio},
          {"right_ratio", report.right_ratio}};
}

nlohmann::json to_json(const TrapCheckReport& report) {
  return {{"omega_eff", report.omega_eff},
          {"bound", report.bound},
          {"margin", report.margin},
          {"satisfied", report.satisfied},
          {"validity_ratio", report.validity_ratio}};
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("cannot open output file: " + tmp);
    os << content;
    if (!os.good()) throw Error("cannot write output file: " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error("cannot move output into place: " + path);
  }
}

}  // namespace dickesim
