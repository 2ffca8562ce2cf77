#pragma once

#include <cmath>
#include <limits>

#include "ionage/errors.hpp"
#include "ionage/isotope.hpp"

namespace ionage {

/// Exponential decay law of the trapped parent. The trapped/escaped amplitude
/// pair is (e^{-Gamma t/2}, sqrt(1 - e^{-Gamma t})). Stable species carry
/// gamma = 0 and an infinite half-life.
struct DecayLaw {
  double gamma = 0.0;      // s^-1
  double half_life = std::numeric_limits<double>::infinity();  // s

  static DecayLaw from_half_life(double half_life_s) {
    if (std::isinf(half_life_s)) return {0.0, half_life_s};
    if (!(half_life_s > 0.0)) {
      throw validation_error("DecayLaw: half-life must be positive");
    }
    return {std::log(2.0) / half_life_s, half_life_s};
  }

  bool stable() const { return gamma == 0.0; }
};

inline DecayLaw decay_law(const IsotopeRecord& isotope) {
  return DecayLaw::from_half_life(isotope.half_life_s);
}

/// e^{-Gamma t / 2}, the weight of the undecayed trapped component.
inline double survival_amplitude(const DecayLaw& law, double t) {
  if (!(t >= 0.0)) {
    throw validation_error("survival_amplitude: t must be >= 0");
  }
  return std::exp(-0.5 * law.gamma * t);
}

/// e^{-Gamma t}, the probability of finding the parent undecayed.
inline double survival_probability(const DecayLaw& law, double t) {
  if (!(t >= 0.0)) {
    throw validation_error("survival_probability: t must be >= 0");
  }
  return std::exp(-law.gamma * t);
}

}  // namespace ionage
