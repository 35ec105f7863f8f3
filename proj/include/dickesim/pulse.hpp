#pragma once

#include "dickesim/errors.hpp"

namespace dickesim {

// Chirped sech/tanh pulse in dimensionless units: times are measured in units
// of the pulse timescale T, and both omega0_T and delta0_T are the peak values
// multiplied by T. The effective Rabi frequency convention (eta * bare Rabi /
// sqrt(N)) is absorbed into omega0_T; LabParams converts back to lab units.
struct PulseParams {
  double omega0_T = 10.0;         // peak effective Rabi frequency times T
  double delta0_T = 6.0;          // chirp amplitude times T
  double T = 1.0;                 // pulse timescale in lab seconds (optional)
  double window_halfwidth = 5.0;  // stage half-duration, units of T
  double center = 0.0;            // pulse centre within the stage, units of T
};

// Instantaneous Rabi frequency times T at stage-local time tau (units of T).
double omega(const PulseParams& pulse, double tau);

// Instantaneous detuning times T; odd about the centre, zero at the crossing.
double delta(const PulseParams& pulse, double tau);

// Laboratory-scale parameters. All frequencies and rates must be expressed in
// one consistent unit system (e.g. s^-1); only ratios enter the checks.
struct LabParams {
  double eta = 0.0;           // Lamb-Dicke parameter
  double nu_trap = 0.0;       // trap frequency
  double bare_rabi = 0.0;     // peak bare Rabi frequency of one ion
  int n_ions = 0;             // N
  double heating_rate = 0.0;  // phonons per second per ion
};

// Collective coupling unit: eta * bare_rabi / sqrt(N).
double effective_rabi(const LabParams& lab);

// Chain of adiabaticity inequalities in effective units:
//   (pi*Omega0T)^2 / (2 ln(1/eps))  >=  pi*Delta0T  >=  m ln(1/eps).
// left_ratio = lhs/mid, right_ratio = mid/rhs (ratios > 1 mean satisfied with
// margin). The bare-unit form carries eta and sqrt(N); both are absorbed into
// omega0_T here, so n_ions does not enter the arithmetic.
struct AdiabaticityReport {
  double epsilon = 0.0;
  double lhs = 0.0;  // (pi*Omega0T)^2 / (2 ln(1/eps))
  double mid = 0.0;  // pi*Delta0T
  double rhs = 0.0;  // m ln(1/eps)
  bool left_ok = false;
  bool right_ok = false;
  double left_ratio = 0.0;
  double right_ratio = 0.0;
};

AdiabaticityReport adiabaticity_margins(const PulseParams& pulse, int m, int N,
                                        double epsilon);

// Checks that the peak effective Rabi frequency stays a safe factor below the
// trap frequency (margin = omega_eff / (nu_trap/10); satisfied iff <= 1), and
// reports the sideband-model validity ratio nu_trap^2 N / (2.6 eta bare)^2
// (should be >> 1).
struct TrapCheckReport {
  double omega_eff = 0.0;
  double bound = 0.0;  // nu_trap / 10
  double margin = 0.0;
  bool satisfied = false;
  double validity_ratio = 0.0;
};

TrapCheckReport trap_constraint_check(const LabParams& lab);

// Minimum pulse timescale T (in 1/nu_trap units, i.e. seconds when nu_trap is
// in s^-1) such that the dimensionless peak omega0_T respects the trap bound.
double min_pulse_timescale(const LabParams& lab, double omega0_T);

}  // namespace dickesim
