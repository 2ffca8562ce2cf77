#pragma once

#include <cmath>

#include "ionage/decay.hpp"
#include "ionage/em_nonlinear.hpp"
#include "ionage/errors.hpp"
#include "ionage/isotope.hpp"
#include "ionage/units.hpp"

namespace ionage {

/// The printed nuclear-sector mass-shift estimate carries g^2 A^2, which is
/// consistent with the classical pion field only when read as the shift of
/// the whole nucleus (A nucleons, each shifted by g * pi_cl). TotalNuclear is
/// that literal reading and the default; PerNucleon is the g^2 A
/// alternative.
enum class MassShiftReading { TotalNuclear, PerNucleon };

enum class Verdict { Detectable, NotDetectable };

struct QcdShiftResult {
  double pion_field_mev = 0.0;
  double mass_shift_mev = 0.0;
  double relative_mass_shift = 0.0;
  double isotopic_frequency_shift_hz = 0.0;
  Verdict verdict = Verdict::NotDetectable;
};

/// Classical pion field sourced by the A nucleons of the trapped component:
/// pi_cl = e^{-Gamma t} g A eps_N / (l^3 m_pi^2), in MeV. The trap size
/// enters in natural units (MeV^-1).
inline double pion_field(const NonlinearCouplings& couplings, const IsotopeRecord& isotope,
                         const TrapSetup& trap, const DecayLaw& law, double t) {
  validate(trap);
  const double l_nat = convert(trap.size, Unit::Meter, Unit::InverseMeV);
  const double m_pi = phys.neutral_pion_mass_mev;
  return survival_probability(law, t) * couplings.pion_nucleon_g * isotope.mass_number *
         couplings.epsilon_n / (l_nat * l_nat * l_nat * m_pi * m_pi);
}

/// Nuclear mass shift g * pi_cl per nucleon, times A for the total-nucleus
/// reading (the literal g^2 A^2 estimate), in MeV.
inline double mass_shift(const NonlinearCouplings& couplings, const IsotopeRecord& isotope,
                         const TrapSetup& trap, const DecayLaw& law, double t,
                         MassShiftReading reading = MassShiftReading::TotalNuclear) {
  const double per_nucleon =
      couplings.pion_nucleon_g * pion_field(couplings, isotope, trap, law, t);
  return reading == MassShiftReading::TotalNuclear ? per_nucleon * isotope.mass_number
                                                   : per_nucleon;
}

/// Transfer the t=0 nuclear mass shift into an isotopic correction of the
/// electronic levels: relative mass shift times the isotope-shift scale
/// (default 1 GHz), compared against the clock sensitivity (default 1 mHz).
inline QcdShiftResult isotopic_detectability(
    const NonlinearCouplings& couplings, const IsotopeRecord& isotope, const TrapSetup& trap,
    double clock_sensitivity_hz = 1e-3, double isotope_shift_scale_hz = 1e9,
    MassShiftReading reading = MassShiftReading::TotalNuclear) {
  if (!(clock_sensitivity_hz > 0.0)) {
    throw validation_error("isotopic_detectability: clock_sensitivity must be > 0");
  }
  if (!(isotope_shift_scale_hz > 0.0)) {
    throw validation_error("isotopic_detectability: isotope_shift_scale must be > 0");
  }
  const DecayLaw law = decay_law(isotope);
  QcdShiftResult result;
  result.pion_field_mev = pion_field(couplings, isotope, trap, law, 0.0);
  result.mass_shift_mev = mass_shift(couplings, isotope, trap, law, 0.0, reading);
  result.relative_mass_shift =
      result.mass_shift_mev / (isotope.mass_number * phys.nucleon_mass_mev);
  result.isotopic_frequency_shift_hz = result.relative_mass_shift * isotope_shift_scale_hz;
  result.verdict = result.isotopic_frequency_shift_hz >= clock_sensitivity_hz
                       ? Verdict::Detectable
                       : Verdict::NotDetectable;
  return result;
}

}  // namespace ionage
