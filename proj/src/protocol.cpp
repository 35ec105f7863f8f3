#include "dickesim/protocol.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>

#include "dickesim/hamiltonian.hpp"

namespace dickesim {

ProtocolResult run_protocol(int n_ions, int n_quanta,
                            const PulseParams& pulse,
                            const IntegratorConfig& cfg) {
  if (n_quanta < 1) throw InvalidArgs("excitations must be at least 1");
  const int m = n_quanta;
  const double w = pulse.window_halfwidth;
  if (!(w > 0.0)) throw InvalidArgs("window must be positive");

  ProtocolResult result;
  result.timeline = {pulse.center - 2.0 * w, pulse.center, pulse.center,
                     pulse.center + 2.0 * w};

  // Stage 1: the m addressed ions with all m quanta ionic, driven down the
  // ladder to the pure-phonon end.
  {
    auto basis = enumerate_sector(m, m);
    HamiltonianOperator op(basis);
    PulseParams stage = pulse;
    stage.center = pulse.center - w;
    const StateVector start =
        product_state(basis, (IonPattern{1} << m) - 1, 0);
    const StateVector target = dicke_state(basis, 0);
    result.stage1_trace = evolve_full(op, stage, start, target, cfg);
  }

  // Stage 2: the full chain, phonon Fock start, Dicke target.
  {
    auto basis = enumerate_sector(n_ions, m);
    HamiltonianOperator op(basis);
    PulseParams stage = pulse;
    stage.center = pulse.center + w;
    const StateVector start = dicke_state(basis, 0);
    const StateVector target = dicke_state(basis, m);
    result.stage2_trace = evolve_full(op, stage, start, target, cfg);
  }

  result.final_fidelity = result.stage2_trace.fidelity.back();
  return result;
}

std::vector<double> draw_gains(int n_ions, double fluctuation,
                               std::uint64_t seed, int sample_index) {
  // One engine per sample, offset by an odd 64-bit constant so streams for
  // different samples never coincide for any base seed.
  std::mt19937_64 rng(seed +
                      0x9e3779b97f4a7c15ULL * std::uint64_t(sample_index + 1));
  std::vector<double> gains(n_ions);
  for (double& g : gains) {
    const double u = double(rng() >> 11) * 0x1.0p-53;  // uniform in [0, 1)
    g = 1.0 - fluctuation + 2.0 * fluctuation * u;
  }
  return gains;
}

namespace {

SweepSummary summarize(const std::vector<SweepSample>& samples) {
  std::vector<double> f;
  f.reserve(samples.size());
  for (const auto& s : samples) f.push_back(s.fidelity);
  std::sort(f.begin(), f.end());
  SweepSummary summary;
  summary.min = f.front();
  const std::size_t n = f.size();
  summary.median =
      n % 2 == 1 ? f[n / 2] : 0.5 * (f[n / 2 - 1] + f[n / 2]);
  double acc = 0.0;
  for (double v : f) acc += v;
  summary.mean = acc / double(n);
  return summary;
}

// Runs body(i) for i in [0, n) on a worker pool; first error wins and is
// rethrown as IntegrationFailure after the loop.
template <typename Body>
void parallel_samples(int n, int jobs, Body&& body) {
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
  bool failed = false;
  std::string message;
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (int i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (const std::exception& e) {
#pragma omp critical
      {
        if (!failed) {
          failed = true;
          message = e.what();
        }
      }
    }
  }
  if (failed) throw IntegrationFailure("sweep sample failed: " + message);
}

}  // namespace

SweepResult sweep_intensity(int n_ions, int n_quanta,
                            const PulseParams& pulse, double fluctuation,
                            int n_samples, std::uint64_t seed,
                            const IntegratorConfig& cfg, int jobs) {
  if (!(fluctuation >= 0.0) || !(fluctuation < 1.0))
    throw InvalidArgs("fluctuation must be in [0, 1)");
  if (n_samples < 1) throw InvalidArgs("samples must be at least 1");
  auto basis = enumerate_sector(n_ions, n_quanta);
  const HamiltonianOperator prototype(basis);
  const StateVector start = dicke_state(basis, 0);
  const StateVector target = dicke_state(basis, n_quanta);
  IntegratorConfig sample_cfg = cfg;
  sample_cfg.trace_samples = 2;  // endpoints only; samples keep the fidelity

  SweepResult result;
  result.seed = seed;
  result.samples.resize(n_samples);
  parallel_samples(n_samples, jobs, [&](int s) {
    std::vector<double> gains = draw_gains(n_ions, fluctuation, seed, s);
    const HamiltonianOperator op = prototype.with_gains(gains);
    const SimulationTrace trace =
        evolve_full(op, pulse, start, target, sample_cfg);
    result.samples[s] = {std::move(gains), 0.0, trace.fidelity.back()};
  });
  result.summary = summarize(result.samples);
  return result;
}

SweepAxis parse_axis(const std::string& name) {
  if (name == "omega0_T") return SweepAxis::kOmega0T;
  if (name == "delta0_T") return SweepAxis::kDelta0T;
  if (name == "window") return SweepAxis::kWindow;
  throw InvalidArgs("axis must be omega0_T, delta0_T or window");
}

std::string axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kOmega0T: return "omega0_T";
    case SweepAxis::kDelta0T: return "delta0_T";
    default: return "window";
  }
}

SweepResult sweep_parameter(int n_ions, int n_quanta,
                            const PulseParams& base_pulse, SweepAxis axis,
                            std::span<const double> values,
                            const IntegratorConfig& cfg, int jobs) {
  if (values.empty()) throw InvalidArgs("values must not be empty");
  for (double v : values)
    if (axis == SweepAxis::kWindow && !(v > 0.0))
      throw InvalidArgs("window values must be positive");
  auto basis = enumerate_sector(n_ions, n_quanta);
  const HamiltonianOperator op(basis);
  const StateVector start = dicke_state(basis, 0);
  const StateVector target = dicke_state(basis, n_quanta);
  IntegratorConfig sample_cfg = cfg;
  sample_cfg.trace_samples = 2;

  SweepResult result;
  result.samples.resize(values.size());
  parallel_samples(static_cast<int>(values.size()), jobs, [&](int s) {
    PulseParams pulse = base_pulse;
    switch (axis) {
      case SweepAxis::kOmega0T: pulse.omega0_T = values[s]; break;
      case SweepAxis::kDelta0T: pulse.delta0_T = values[s]; break;
      case SweepAxis::kWindow: pulse.window_halfwidth = values[s]; break;
    }
    const SimulationTrace trace =
        evolve_full(op, pulse, start, target, sample_cfg);
    result.samples[s] = {{}, values[s], trace.fidelity.back()};
  });
  result.summary = summarize(result.samples);
  return result;
}

HeatingEstimate heating_estimate(const LabParams& lab, double total_time) {
  if (!(lab.heating_rate > 0.0))
    throw InvalidArgs("heating-rate must be positive");
  if (lab.n_ions < 1) throw InvalidArgs("ions must be at least 1");
  if (!(total_time >= 0.0))
    throw InvalidArgs("total-time must be non-negative");
  HeatingEstimate estimate;
  estimate.total_time = total_time;
  estimate.phonons_gained = lab.heating_rate * lab.n_ions * total_time;
  estimate.infidelity_estimate = estimate.phonons_gained;
  return estimate;
}

}  // namespace dickesim
