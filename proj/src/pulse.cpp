#include "dickesim/pulse.hpp"

#include <cmath>
#include <numbers>

namespace dickesim {

double omega(const PulseParams& pulse, double tau) {
  return pulse.omega0_T / std::cosh(tau - pulse.center);
}

double delta(const PulseParams& pulse, double tau) {
  return pulse.delta0_T * std::tanh(tau - pulse.center);
}

double effective_rabi(const LabParams& lab) {
  if (lab.n_ions < 1) throw InvalidArgs("ions must be at least 1");
  if (lab.eta <= 0.0) throw InvalidArgs("lamb-dicke must be positive");
  if (lab.bare_rabi <= 0.0) throw InvalidArgs("bare-rabi must be positive");
  return lab.eta * lab.bare_rabi / std::sqrt(double(lab.n_ions));
}

AdiabaticityReport adiabaticity_margins(const PulseParams& pulse, int m,
                                        int /*N: absorbed into omega0_T*/,
                                        double epsilon) {
  if (!(epsilon > 0.0) || !(epsilon < 1.0))
    throw InvalidArgs("epsilon must be strictly between 0 and 1");
  if (m < 0) throw InvalidArgs("excitations must be non-negative");
  const double log_inv_eps = std::log(1.0 / epsilon);
  AdiabaticityReport r;
  r.epsilon = epsilon;
  const double pi = std::numbers::pi;
  r.lhs = (pi * pulse.omega0_T) * (pi * pulse.omega0_T) / (2.0 * log_inv_eps);
  r.mid = pi * pulse.delta0_T;
  r.rhs = m * log_inv_eps;
  r.left_ok = r.lhs >= r.mid;
  r.right_ok = r.mid >= r.rhs;
  r.left_ratio = r.lhs / r.mid;
  r.right_ratio = r.mid / r.rhs;
  return r;
}

TrapCheckReport trap_constraint_check(const LabParams& lab) {
  if (lab.nu_trap <= 0.0) throw InvalidArgs("trap-freq must be positive");
  TrapCheckReport r;
  r.omega_eff = effective_rabi(lab);
  r.bound = lab.nu_trap / 10.0;
  r.margin = r.omega_eff / r.bound;
  r.satisfied = r.margin <= 1.0;
  const double s = 2.6 * lab.eta * lab.bare_rabi;
  r.validity_ratio = lab.nu_trap * lab.nu_trap * lab.n_ions / (s * s);
  return r;
}

double min_pulse_timescale(const LabParams& lab, double omega0_T) {
  if (lab.nu_trap <= 0.0) throw InvalidArgs("trap-freq must be positive");
  if (omega0_T <= 0.0) throw InvalidArgs("omega0T must be positive");
  return 10.0 * omega0_T / lab.nu_trap;
}

}  // namespace dickesim
