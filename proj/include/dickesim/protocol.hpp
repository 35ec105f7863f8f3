#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dickesim/propagator.hpp"
#include "dickesim/pulse.hpp"

namespace dickesim {

struct StageTimeline {
  double stage1_begin = 0.0;  // units of T
  double stage1_end = 0.0;
  double stage2_begin = 0.0;
  double stage2_end = 0.0;
};

struct ProtocolResult {
  SimulationTrace stage1_trace;  // m-ion sector: all-excited -> Fock
  SimulationTrace stage2_trace;  // N-ion sector: Fock -> Dicke target
  double final_fidelity = 0.0;
  StageTimeline timeline;
};

// Two-stage preparation. Stage 1 drives the m-ion, m-quantum sector from
// |1...1>|0> to the phonon Fock state |0...0>|m> over [c-2w, c]; stage 2
// drives the N-ion sector from |0...0>|m> (assumed perfectly prepared) to
// the symmetric Dicke target over [c, c+2w]. Both stages use the same
// dimensionless pulse amplitudes in their own effective-Rabi units; c is
// pulse.center and w is pulse.window_halfwidth.
ProtocolResult run_protocol(int n_ions, int n_quanta,
                            const PulseParams& pulse,
                            const IntegratorConfig& cfg);

struct SweepSample {
  std::vector<double> gains;  // intensity sweeps only
  double value = 0.0;         // parameter sweeps only
  double fidelity = 0.0;
};

struct SweepSummary {
  double min = 0.0;
  double median = 0.0;
  double mean = 0.0;
};

struct SweepResult {
  std::vector<SweepSample> samples;
  SweepSummary summary;
  std::uint64_t seed = 0;
};

// Deterministic per-sample gain draw: one independent engine per sample
// index, each gain uniform in [1-f, 1+f]. Stable across platforms.
std::vector<double> draw_gains(int n_ions, double fluctuation,
                               std::uint64_t seed, int sample_index);

// Stage-2 runs (Fock -> Dicke) with random static per-ion gains; fidelity
// recorded per sample. Worker errors surface as IntegrationFailure.
SweepResult sweep_intensity(int n_ions, int n_quanta,
                            const PulseParams& pulse, double fluctuation,
                            int n_samples, std::uint64_t seed,
                            const IntegratorConfig& cfg, int jobs = 0);

enum class SweepAxis { kOmega0T, kDelta0T, kWindow };

SweepAxis parse_axis(const std::string& name);
std::string axis_name(SweepAxis axis);

// Stage-2 fidelity as one pulse parameter takes each listed value.
SweepResult sweep_parameter(int n_ions, int n_quanta,
                            const PulseParams& base_pulse, SweepAxis axis,
                            std::span<const double> values,
                            const IntegratorConfig& cfg, int jobs = 0);

struct HeatingEstimate {
  double total_time = 0.0;       // seconds
  double phonons_gained = 0.0;   // heating_rate * n_ions * total_time
  double infidelity_estimate = 0.0;  // order-of-magnitude rule: == phonons
};

HeatingEstimate heating_estimate(const LabParams& lab, double total_time);

}  // namespace dickesim
