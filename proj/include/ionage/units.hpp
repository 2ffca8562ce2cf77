#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

#include "ionage/errors.hpp"

namespace ionage {

/// Physical constants used throughout the library. Every other module obtains
/// numbers only from here. SI values for the electromagnetic sector, natural
/// units (MeV, fm) for the nuclear sector; conversion happens through
/// convert() below.
struct PhysicalConstants {
  double elementary_charge = 1.602176634e-19;       // C, exact (SI 2019)
  double vacuum_permittivity = 8.8541878128e-12;    // C^2 J^-1 m^-1, CODATA 2018
  double planck_h = 6.62607015e-34;                 // J s, exact (SI 2019)
  double hbar = 6.62607015e-34 / (2.0 * std::numbers::pi);  // J s
  double atomic_polarizability_unit = 1.64877727436e-41;    // J (V/m)^-2, CODATA 2018
  double hbar_c_mev_fm = 197.3269804;               // MeV fm, CODATA 2018
  double neutral_pion_mass_mev = 134.9768;          // MeV, PDG
  double nucleon_mass_mev = 931.49410242;           // MeV per u, CODATA 2018
  double seconds_per_day = 86400.0;
  double speed_of_light = 299792458.0;              // m/s, exact

  /// 1/(4 pi eps0), N m^2 C^-2.
  constexpr double coulomb_constant() const {
    return 1.0 / (4.0 * std::numbers::pi * vacuum_permittivity);
  }
};

inline constexpr PhysicalConstants phys{};

enum class Unit {
  Second,
  Day,
  Hour,
  Meter,
  Nanometer,
  Femtometer,
  InverseMeV,  // natural-units length, 1/MeV = hbar*c/MeV
  Joule,
  ElectronVolt,
  MeV,
  VoltPerMeter,
  KilovoltPerMeter,
  Hertz,
  Millihertz,
  Gigahertz,
};

enum class Dimension { Time, Length, Energy, Field, Frequency };

constexpr Dimension dimension_of(Unit u) {
  switch (u) {
    case Unit::Second:
    case Unit::Day:
    case Unit::Hour:
      return Dimension::Time;
    case Unit::Meter:
    case Unit::Nanometer:
    case Unit::Femtometer:
    case Unit::InverseMeV:
      return Dimension::Length;
    case Unit::Joule:
    case Unit::ElectronVolt:
    case Unit::MeV:
      return Dimension::Energy;
    case Unit::VoltPerMeter:
    case Unit::KilovoltPerMeter:
      return Dimension::Field;
    case Unit::Hertz:
    case Unit::Millihertz:
    case Unit::Gigahertz:
      return Dimension::Frequency;
  }
  return Dimension::Time;  // unreachable
}

/// Value of one unit expressed in the base unit of its dimension class
/// (s, m, J, V/m, Hz).
constexpr double unit_factor(Unit u) {
  switch (u) {
    case Unit::Second: return 1.0;
    case Unit::Day: return phys.seconds_per_day;
    case Unit::Hour: return 3600.0;
    case Unit::Meter: return 1.0;
    case Unit::Nanometer: return 1e-9;
    case Unit::Femtometer: return 1e-15;
    case Unit::InverseMeV: return phys.hbar_c_mev_fm * 1e-15;
    case Unit::Joule: return 1.0;
    case Unit::ElectronVolt: return phys.elementary_charge;
    case Unit::MeV: return phys.elementary_charge * 1e6;
    case Unit::VoltPerMeter: return 1.0;
    case Unit::KilovoltPerMeter: return 1e3;
    case Unit::Hertz: return 1.0;
    case Unit::Millihertz: return 1e-3;
    case Unit::Gigahertz: return 1e9;
  }
  return 1.0;  // unreachable
}

constexpr std::string_view unit_name(Unit u) {
  switch (u) {
    case Unit::Second: return "s";
    case Unit::Day: return "day";
    case Unit::Hour: return "h";
    case Unit::Meter: return "m";
    case Unit::Nanometer: return "nm";
    case Unit::Femtometer: return "fm";
    case Unit::InverseMeV: return "MeV^-1";
    case Unit::Joule: return "J";
    case Unit::ElectronVolt: return "eV";
    case Unit::MeV: return "MeV";
    case Unit::VoltPerMeter: return "V/m";
    case Unit::KilovoltPerMeter: return "kV/m";
    case Unit::Hertz: return "Hz";
    case Unit::Millihertz: return "mHz";
    case Unit::Gigahertz: return "GHz";
  }
  return "?";
}

inline constexpr std::array<Unit, 15> all_units = {
    Unit::Second,       Unit::Day,       Unit::Hour,
    Unit::Meter,        Unit::Nanometer, Unit::Femtometer,
    Unit::InverseMeV,   Unit::Joule,     Unit::ElectronVolt,
    Unit::MeV,          Unit::VoltPerMeter, Unit::KilovoltPerMeter,
    Unit::Hertz,        Unit::Millihertz,   Unit::Gigahertz,
};

/// Convert a value between two units of the same dimension class.
/// The conversion is the exact composition of the registered factors, so it
/// is linear in the value and round-trips to machine precision.
inline double convert(double value, Unit from, Unit to) {
  if (dimension_of(from) != dimension_of(to)) {
    throw dimension_error(std::string("cannot convert ") +
                          std::string(unit_name(from)) + " to " +
                          std::string(unit_name(to)) +
                          ": incompatible dimension classes");
  }
  return value * (unit_factor(from) / unit_factor(to));
}

}  // namespace ionage
