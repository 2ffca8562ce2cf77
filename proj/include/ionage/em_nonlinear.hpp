#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "ionage/decay.hpp"
#include "ionage/errors.hpp"
#include "ionage/units.hpp"

namespace ionage {

/// Idealized trap: the ion is confined within a size l. The blackbody field
/// is the single comparison scalar used by the reach estimate, default
/// 1 kV/m.
struct TrapSetup {
  double size = 0.0;                // m
  double blackbody_field = 1e3;     // V/m
};

/// Two electronic clock levels with their static polarizabilities (atomic
/// units) and the Ramsey interrogation time.
struct ClockSystem {
  double transition_frequency = 0.0;   // Hz
  double polarizability_lower = 0.0;   // a.u.
  double polarizability_upper = 0.0;   // a.u.
  double interrogation_time = 1.0;     // s

  double delta_alpha() const { return polarizability_upper - polarizability_lower; }
};

/// Strengths of the nonlinear sector plus the Stark-estimator convention
/// factor kappa (the literal estimator is kappa = 1).
struct NonlinearCouplings {
  double epsilon_gamma = 0.0;
  double epsilon_n = 0.0;
  double pion_nucleon_g = 13.1;
  double stark_kappa = 1.0;
};

inline void validate(const TrapSetup& trap) {
  if (!(trap.size > 0.0)) throw validation_error("TrapSetup: size must be > 0");
  if (!(trap.blackbody_field >= 0.0)) {
    throw validation_error("TrapSetup: blackbody_field must be >= 0");
  }
}

inline void validate(const ClockSystem& clock) {
  if (!(clock.transition_frequency > 0.0)) {
    throw validation_error("ClockSystem: transition_frequency must be > 0");
  }
  if (!(clock.interrogation_time > 0.0)) {
    throw validation_error("ClockSystem: interrogation_time must be > 0");
  }
  if (!std::isfinite(clock.delta_alpha())) {
    throw validation_error("ClockSystem: polarizabilities must be finite");
  }
}

inline void validate(const NonlinearCouplings& c) {
  if (!(c.stark_kappa > 0.0)) {
    throw validation_error("NonlinearCouplings: stark_kappa must be > 0");
  }
}

/// Bare Coulomb expectation of the trapped component, e^{-Gamma t} e/(4 pi
/// eps0 l), in volts. The nonlinearity strength is applied exactly once, in
/// e_field_nl.
inline double coulomb_expectation(const TrapSetup& trap, const DecayLaw& law, double t) {
  validate(trap);
  return survival_probability(law, t) * phys.coulomb_constant() *
         phys.elementary_charge / trap.size;
}

/// Background electric field sourced by the ion's own charge expectation:
/// E_NL = eps_gamma e^{-Gamma t} e / (4 pi eps0 l^2), in V/m.
inline double e_field_nl(const NonlinearCouplings& couplings, const TrapSetup& trap,
                         const DecayLaw& law, double t) {
  validate(trap);
  return couplings.epsilon_gamma * survival_probability(law, t) *
         phys.coulomb_constant() * phys.elementary_charge / (trap.size * trap.size);
}

/// Second-order Stark shift kappa * alpha * E^2 in joules; alpha in atomic
/// units.
inline double stark_shift(double e_field, double alpha_au, double kappa) {
  if (!std::isfinite(alpha_au)) {
    throw validation_error("stark_shift: alpha must be finite");
  }
  return kappa * alpha_au * phys.atomic_polarizability_unit * (e_field * e_field);
}

/// Instantaneous clock frequency shift kappa * dAlpha * E_NL(t)^2 / h, in Hz.
inline double clock_frequency_shift(const NonlinearCouplings& couplings,
                                    const TrapSetup& trap, const DecayLaw& law,
                                    const ClockSystem& clock, double t) {
  const double field = e_field_nl(couplings, trap, law, t);
  return couplings.stark_kappa * clock.delta_alpha() *
         phys.atomic_polarizability_unit * (field * field) / phys.planck_h;
}

/// Ramsey phase accumulated over the window [start, start+T]. The integrand
/// is proportional to e^{-2 Gamma t}, so the integral has the closed form
/// (e^{-2 Gamma start} - e^{-2 Gamma (start+T)}) / (2 Gamma), with the limit
/// T e^{-2 Gamma start} as Gamma -> 0.
inline double clock_phase_shift(const NonlinearCouplings& couplings, const TrapSetup& trap,
                                const DecayLaw& law, const ClockSystem& clock,
                                double start) {
  validate(trap);
  validate(clock);
  if (!(start >= 0.0)) {
    throw validation_error("clock_phase_shift: start must be >= 0");
  }
  const double field0 = couplings.epsilon_gamma * phys.coulomb_constant() *
                        phys.elementary_charge / (trap.size * trap.size);
  const double two_gamma = 2.0 * law.gamma;
  const double window = clock.interrogation_time;
  double integral;  // of e^{-2 Gamma t} over [start, start+T]
  if (two_gamma > 0.0) {
    integral = std::exp(-two_gamma * start) * (-std::expm1(-two_gamma * window)) / two_gamma;
  } else {
    integral = window;
  }
  return (2.0 * std::numbers::pi / phys.planck_h) * couplings.stark_kappa *
         clock.delta_alpha() * phys.atomic_polarizability_unit * (field0 * field0) *
         integral;
}

/// Smallest eps_gamma whose t=0 nonlinear field equals the trap's blackbody
/// comparison field: eps_gamma = E_bb * 4 pi eps0 l^2 / e. Exact functional
/// inverse of e_field_nl at t = 0.
inline double blackbody_bound(const TrapSetup& trap) {
  validate(trap);
  if (!(trap.blackbody_field > 0.0)) {
    throw validation_error("blackbody_bound: blackbody_field must be > 0");
  }
  return trap.blackbody_field * (trap.size * trap.size) /
         (phys.coulomb_constant() * phys.elementary_charge);
}

struct AgingPoint {
  double t_seconds = 0.0;
  double survival_prob = 0.0;
  double e_nl_v_per_m = 0.0;
  double delta_e_upper_j = 0.0;
  double delta_e_lower_j = 0.0;
  double delta_nu_hz = 0.0;
  double phase_rad = 0.0;
};

struct AgingSeries {
  std::vector<AgingPoint> points;
};

/// Closed-form evaluation of the aging observables on a measurement
/// schedule. The phase column is the Ramsey phase for the window
/// [t, t + interrogation_time].
inline AgingSeries aging_series(const NonlinearCouplings& couplings, const TrapSetup& trap,
                                const DecayLaw& law, const ClockSystem& clock,
                                std::span<const double> schedule) {
  validate(trap);
  validate(clock);
  validate(couplings);
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (!(schedule[i] >= 0.0)) {
      throw validation_error("aging_series: schedule entries must be >= 0");
    }
    if (i > 0 && schedule[i] < schedule[i - 1]) {
      throw validation_error("aging_series: schedule must be sorted ascending");
    }
  }
  AgingSeries series;
  series.points.reserve(schedule.size());
  for (const double t : schedule) {
    AgingPoint p;
    p.t_seconds = t;
    p.survival_prob = survival_probability(law, t);
    p.e_nl_v_per_m = e_field_nl(couplings, trap, law, t);
    p.delta_e_upper_j =
        stark_shift(p.e_nl_v_per_m, clock.polarizability_upper, couplings.stark_kappa);
    p.delta_e_lower_j =
        stark_shift(p.e_nl_v_per_m, clock.polarizability_lower, couplings.stark_kappa);
    p.delta_nu_hz = couplings.stark_kappa * clock.delta_alpha() *
                    phys.atomic_polarizability_unit *
                    (p.e_nl_v_per_m * p.e_nl_v_per_m) / phys.planck_h;
    p.phase_rad = clock_phase_shift(couplings, trap, law, clock, t);
    series.points.push_back(p);
  }
  return series;
}

}  // namespace ionage
