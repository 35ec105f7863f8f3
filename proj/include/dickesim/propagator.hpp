#pragma once

#include <string>
#include <vector>

#include "dickesim/hamiltonian.hpp"
#include "dickesim/pulse.hpp"
#include "dickesim/sector.hpp"

namespace dickesim {

enum class IntegrationMethod {
  kAdaptive,         // embedded Runge-Kutta 5(4), adaptive step
  kUnitaryMidpoint,  // fixed-step exponential of the midpoint Hamiltonian
};

IntegrationMethod parse_method(const std::string& name);
std::string method_name(IntegrationMethod method);

struct IntegratorConfig {
  IntegrationMethod method = IntegrationMethod::kAdaptive;
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = 0.01;  // units of T
  int trace_samples = 1000;
};

// Uniformly sampled record of one stage. Row-major series: row s covers
// sample time times[s]; population columns follow basis order (or ladder
// level order), manifold columns are phonon numbers 0..m ascending.
struct SimulationTrace {
  std::vector<double> times;  // t/T
  std::size_t n_states = 0;
  int n_manifolds = 0;  // m + 1
  std::vector<double> populations;           // times x n_states
  std::vector<double> manifold_populations;  // times x n_manifolds
  std::vector<double> fidelity;              // vs the stage target
  StateVector final_state;

  double population(std::size_t sample, std::size_t state) const {
    return populations[sample * n_states + state];
  }
  double manifold_population(std::size_t sample, int mu) const {
    return manifold_populations[sample * n_manifolds + mu];
  }
};

double fidelity(const StateVector& a, const StateVector& b);

// Integrates i dpsi/dtau = H(tau) psi over [center - w, center + w] in the
// full sector, recording populations, per-manifold sums and overlap with
// the target at trace_samples uniformly spaced times.
SimulationTrace evolve_full(const HamiltonianOperator& op,
                            const PulseParams& pulse, const StateVector& psi0,
                            const StateVector& target,
                            const IntegratorConfig& cfg);

// Same dynamics reduced to the (m+1)-level symmetric ladder (homogeneous
// gains). Populations are ladder-level populations; the fidelity series
// tracks level m - start_level, the adiabatic image of the start level.
// final_state is expanded back into the full sector basis.
SimulationTrace evolve_ladder(int n_ions, int n_quanta,
                              const PulseParams& pulse, int start_level,
                              const IntegratorConfig& cfg);

}  // namespace dickesim
