#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "ionage/decay.hpp"
#include "ionage/em_nonlinear.hpp"
#include "ionage/errors.hpp"
#include "ionage/units.hpp"

namespace ionage {

/// Minimal level model for the self-consistent evolution: two clock levels of
/// a decaying trapped ion, with the nonlinear Coulomb term recomputed from
/// the current state at every stage. The optional per-level offsets add a
/// constant energy to one or both levels; applying the same offset to both
/// exercises common-mode rejection in the differential phase.
struct LevelModel {
  ClockSystem clock;
  DecayLaw law;
  TrapSetup trap;
  NonlinearCouplings couplings;
  double level_offset_lower_j = 0.0;
  double level_offset_upper_j = 0.0;
};

struct StateVector {
  std::complex<double> amp_lower{1.0, 0.0};
  std::complex<double> amp_upper{0.0, 0.0};
  double escaped_norm = 0.0;

  double trapped_norm() const {
    return std::norm(amp_lower) + std::norm(amp_upper);
  }
  double total_norm() const { return trapped_norm() + escaped_norm; }

  /// Equal superposition of the clock levels, nothing escaped.
  static StateVector equal_superposition() {
    const double r = 1.0 / std::numbers::sqrt2;
    return {{r, 0.0}, {r, 0.0}, 0.0};
  }
};

struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<StateVector> states;
  std::vector<double> phase_series;  // accumulated differential phase per sample
  double differential_phase = 0.0;   // final accumulated value
  AgingSeries samples;               // per-sample observables, CSV-ready
};

struct ConvergenceReport {
  double observed_order = 0.0;
  bool exact_case = false;  // errors at machine epsilon; order not meaningful
  double err_coarse = 0.0;
  double err_half = 0.0;
};

namespace detail {

// Integration variables. The interaction picture removes the optical
// frequency; what remains is level-diagonal, so magnitudes and phases
// decouple: r_i carries the decay, Phi_i the per-level shift phase, Phi_c
// the common-mode Coulomb phase, and phi_d the differential accumulator.
struct DynState {
  double r_lower, r_upper;      // amplitude magnitudes
  double phi_lower, phi_upper;  // accumulated per-level shift phases (rad)
  double phi_common;            // accumulated common-mode phase (rad)
  double phi_diff;              // accumulated differential phase (rad)

  DynState operator+(const DynState& o) const {
    return {r_lower + o.r_lower,     r_upper + o.r_upper, phi_lower + o.phi_lower,
            phi_upper + o.phi_upper, phi_common + o.phi_common, phi_diff + o.phi_diff};
  }
  DynState operator*(double s) const {
    return {r_lower * s,  r_upper * s,  phi_lower * s,
            phi_upper * s, phi_common * s, phi_diff * s};
  }
};

struct DynDerivative {
  const LevelModel* model;
  double alpha_lower_si;
  double alpha_upper_si;
  double field_scale;    // eps_gamma * k_C * e / l^2, V/m per unit trapped norm
  double coulomb_scale;  // eps_gamma * e * k_C * e / l, J per unit trapped norm

  explicit DynDerivative(const LevelModel& m) : model(&m) {
    alpha_lower_si = m.clock.polarizability_lower * phys.atomic_polarizability_unit;
    alpha_upper_si = m.clock.polarizability_upper * phys.atomic_polarizability_unit;
    const double ke = phys.coulomb_constant() * phys.elementary_charge;
    field_scale = m.couplings.epsilon_gamma * ke / (m.trap.size * m.trap.size);
    coulomb_scale = m.couplings.epsilon_gamma * phys.elementary_charge * ke / m.trap.size;
  }

  DynState operator()(const DynState& u) const {
    const double trapped = u.r_lower * u.r_lower + u.r_upper * u.r_upper;
    const double field = field_scale * trapped;
    const double field_sq = field * field;
    const double kappa = model->couplings.stark_kappa;
    const double stark_lower = kappa * alpha_lower_si * field_sq;
    const double stark_upper = kappa * alpha_upper_si * field_sq;
    DynState d;
    d.r_lower = -0.5 * model->law.gamma * u.r_lower;
    d.r_upper = -0.5 * model->law.gamma * u.r_upper;
    d.phi_lower = (stark_lower + model->level_offset_lower_j) / phys.hbar;
    d.phi_upper = (stark_upper + model->level_offset_upper_j) / phys.hbar;
    d.phi_common = coulomb_scale * trapped / phys.hbar;
    // The common-mode term never enters here; the offset difference is an
    // exact floating-point cancellation when the offsets are equal.
    d.phi_diff = (kappa * (alpha_upper_si - alpha_lower_si) * field_sq +
                  (model->level_offset_upper_j - model->level_offset_lower_j)) /
                 phys.hbar;
    return d;
  }
};

inline StateVector to_state(const DynState& u, double theta_lower0, double theta_upper0,
                            double escaped) {
  StateVector s;
  s.amp_lower = std::polar(u.r_lower, theta_lower0 - u.phi_lower - u.phi_common);
  s.amp_upper = std::polar(u.r_upper, theta_upper0 - u.phi_upper - u.phi_common);
  s.escaped_norm = escaped;
  return s;
}

inline AgingPoint to_sample(const DynState& u, double t, const DynDerivative& f) {
  const double trapped = u.r_lower * u.r_lower + u.r_upper * u.r_upper;
  const double field = f.field_scale * trapped;
  const double kappa = f.model->couplings.stark_kappa;
  AgingPoint p;
  p.t_seconds = t;
  p.survival_prob = trapped;
  p.e_nl_v_per_m = field;
  p.delta_e_upper_j = kappa * f.alpha_upper_si * field * field;
  p.delta_e_lower_j = kappa * f.alpha_lower_si * field * field;
  p.delta_nu_hz = kappa * (f.alpha_upper_si - f.alpha_lower_si) * field * field /
                  phys.planck_h;
  p.phase_rad = u.phi_diff;
  return p;
}

}  // namespace detail

/// Integrate the nonlinear evolution with fixed-step classical RK4. The
/// requested dt is rounded so that an integer number of steps tiles
/// [start, end] exactly. Norm drained by the decay term is credited to
/// escaped_norm every step, so the total norm is conserved by construction;
/// a step that makes the trapped norm grow by more than 1e-6 aborts with an
/// integration-failure error.
inline TrajectoryRecord evolve(const LevelModel& model, const StateVector& initial,
                               double t_start, double t_end, double dt,
                               std::size_t record_stride = 1) {
  validate(model.trap);
  validate(model.clock);
  validate(model.couplings);
  if (!(dt > 0.0)) throw validation_error("evolve: dt must be > 0");
  if (!(t_end > t_start)) throw validation_error("evolve: end must exceed start");
  if (std::abs(initial.total_norm() - 1.0) > 1e-9) {
    throw validation_error("evolve: initial state norm must be 1 within 1e-9");
  }
  if (record_stride == 0) record_stride = 1;

  const double span = t_end - t_start;
  const auto n_steps = static_cast<std::size_t>(
      std::max<long long>(1, std::llround(span / dt)));
  const double h = span / static_cast<double>(n_steps);

  const detail::DynDerivative f(model);
  detail::DynState u{std::abs(initial.amp_lower), std::abs(initial.amp_upper),
                     0.0, 0.0, 0.0, 0.0};
  const double theta_lower0 = std::arg(initial.amp_lower);
  const double theta_upper0 = std::arg(initial.amp_upper);
  double escaped = initial.escaped_norm;

  TrajectoryRecord traj;
  const std::size_t n_samples = n_steps / record_stride + 2;
  traj.times.reserve(n_samples);
  traj.states.reserve(n_samples);
  traj.phase_series.reserve(n_samples);
  traj.samples.points.reserve(n_samples);

  const auto record = [&](double t) {
    traj.times.push_back(t);
    traj.states.push_back(detail::to_state(u, theta_lower0, theta_upper0, escaped));
    traj.phase_series.push_back(u.phi_diff);
    traj.samples.points.push_back(detail::to_sample(u, t, f));
  };
  record(t_start);

  for (std::size_t step = 0; step < n_steps; ++step) {
    const double trapped_before = u.r_lower * u.r_lower + u.r_upper * u.r_upper;
    const detail::DynState k1 = f(u);
    const detail::DynState k2 = f(u + k1 * (0.5 * h));
    const detail::DynState k3 = f(u + k2 * (0.5 * h));
    const detail::DynState k4 = f(u + k3 * h);
    u = u + (k1 + (k2 + k3) * 2.0 + k4) * (h / 6.0);

    const double trapped_after = u.r_lower * u.r_lower + u.r_upper * u.r_upper;
    if (!std::isfinite(trapped_after) || trapped_after - trapped_before > 1e-6) {
      throw numerical_error(
          "evolve: integration unstable at step " + std::to_string(step + 1) +
          " (trapped norm grew); reduce dt");
    }
    escaped += trapped_before - trapped_after;

    if ((step + 1) % record_stride == 0 || step + 1 == n_steps) {
      record(t_start + h * static_cast<double>(step + 1));
    }
  }
  traj.differential_phase = u.phi_diff;
  return traj;
}

/// Richardson estimate of the integrator's observed order: evolve at dt and
/// dt/2 against a dt/8 reference and compare endpoint states (amplitude
/// magnitudes, escaped norm, and relative differential phase). For smooth
/// problems the result sits near 4; when all errors are at machine epsilon
/// the case is flagged exact and no order is reported.
inline ConvergenceReport convergence_order(const LevelModel& model,
                                           const StateVector& initial, double t_start,
                                           double t_end, double dt) {
  const auto endpoint = [&](double step) {
    const auto n = static_cast<std::size_t>(
        std::max<long long>(1, std::llround((t_end - t_start) / step)));
    return evolve(model, initial, t_start, t_end, step, n);
  };
  const TrajectoryRecord coarse = endpoint(dt);
  const TrajectoryRecord half = endpoint(dt / 2.0);
  const TrajectoryRecord ref = endpoint(dt / 8.0);

  const auto distance = [](const TrajectoryRecord& a, const TrajectoryRecord& b) {
    const StateVector& sa = a.states.back();
    const StateVector& sb = b.states.back();
    const double phase_scale = std::max(1.0, std::abs(b.differential_phase));
    return std::abs(std::abs(sa.amp_lower) - std::abs(sb.amp_lower)) +
           std::abs(std::abs(sa.amp_upper) - std::abs(sb.amp_upper)) +
           std::abs(sa.escaped_norm - sb.escaped_norm) +
           std::abs(a.differential_phase - b.differential_phase) / phase_scale;
  };

  ConvergenceReport report;
  report.err_coarse = distance(coarse, ref);
  report.err_half = distance(half, ref);
  if (report.err_coarse < 1e-13 || report.err_half <= 0.0) {
    report.exact_case = true;
    return report;
  }
  report.observed_order = std::log2(report.err_coarse / report.err_half);
  return report;
}

}  // namespace ionage
