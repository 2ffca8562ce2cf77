#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ionage/dynamics.hpp"
#include "ionage/em_nonlinear.hpp"
#include "ionage/errors.hpp"
#include "ionage/rng.hpp"

namespace ionage {

/// One simulated measurement campaign: repeated Ramsey interrogations at the
/// scheduled epochs with white Gaussian frequency noise per point.
struct CampaignPlan {
  std::string isotope;
  std::vector<double> schedule_s;     // measurement epochs, strictly increasing
  double interrogation_time_s = 1.0;
  double sigma_nu_hz = 0.0;           // 1-sigma frequency noise per point
  std::uint64_t seed = 0;
  double n_sigma_detect = 5.0;
};

struct FitPoint {
  double t = 0.0;
  double y = 0.0;
  double sigma = 0.0;
};

struct FitResult {
  double offset = 0.0;
  double amplitude = 0.0;
  double amplitude_sigma = 0.0;
  bool condition_flag = false;  // basis near-collinear (schedule span too short)
};

/// Companion fit of the same noise draws with the signal forced to zero,
/// standing in for the stable comparison species.
struct ControlResult {
  std::vector<double> measured_shifts_hz;
  double fitted_amplitude = 0.0;
  double fitted_offset = 0.0;
  double significance = 0.0;
  bool detected = false;
};

struct CampaignResult {
  std::vector<std::pair<double, double>> measured_shifts;  // (epoch s, delta nu Hz)
  std::vector<double> true_shifts_hz;
  double fitted_amplitude = 0.0;
  double fitted_offset = 0.0;
  double amplitude_sigma = 0.0;
  double significance = 0.0;
  bool detected = false;
  double epsilon_gamma_reach = std::numeric_limits<double>::quiet_NaN();
  ControlResult control;
  std::vector<std::string> warnings;
  std::string rng_algorithm;
  std::uint64_t seed = 0;
};

namespace detail {

struct NormalSums {
  double sw = 0.0, swx = 0.0, swxx = 0.0;
  double det() const { return sw * swxx - swx * swx; }
};

inline NormalSums normal_sums(std::span<const double> t, double gamma,
                              std::span<const double> w) {
  NormalSums s;
  for (std::size_t k = 0; k < t.size(); ++k) {
    const double x = std::exp(-2.0 * gamma * t[k]);
    s.sw += w[k];
    s.swx += w[k] * x;
    s.swxx += w[k] * x * x;
  }
  return s;
}

}  // namespace detail

/// Weighted linear least squares in the basis {1, e^{-2 Gamma t}} with Gamma
/// held fixed, solved from the 2x2 normal equations in closed form. With all
/// sigmas zero the fit is unweighted and the reported amplitude error is 0.
inline FitResult fit_aging(std::span<const FitPoint> points, double gamma) {
  if (points.size() < 3) {
    throw validation_error("fit_aging: need at least 3 points");
  }
  bool all_zero = true, all_positive = true;
  for (const auto& p : points) {
    if (p.sigma > 0.0) all_zero = false;
    else all_positive = false;
    if (p.sigma < 0.0) throw validation_error("fit_aging: sigma must be >= 0");
  }
  if (!all_zero && !all_positive) {
    throw validation_error("fit_aging: mix of zero and positive sigmas");
  }

  double sw = 0.0, swx = 0.0, swxx = 0.0, swy = 0.0, swxy = 0.0;
  for (const auto& p : points) {
    const double w = all_zero ? 1.0 : 1.0 / (p.sigma * p.sigma);
    const double x = std::exp(-2.0 * gamma * p.t);
    sw += w;
    swx += w * x;
    swxx += w * x * x;
    swy += w * p.y;
    swxy += w * x * p.y;
  }
  const double det = sw * swxx - swx * swx;
  const double scale = sw * swxx;
  if (!(det > 1e-14 * scale)) {
    throw numerical_error(
        "fit_aging: degenerate schedule (normal equations singular)");
  }
  FitResult fit;
  fit.amplitude = (sw * swxy - swx * swy) / det;
  fit.offset = (swxx * swy - swx * swxy) / det;
  fit.amplitude_sigma = all_zero ? 0.0 : std::sqrt(sw / det);
  // Collinearity of the weighted basis columns: sin^2 of their angle.
  fit.condition_flag = (1.0 - (swx * swx) / scale) < 1e-3;
  return fit;
}

/// Smallest eps_gamma whose noiseless fitted amplitude reaches
/// n_sigma * sigma_A. The signal amplitude scales exactly as eps_gamma^2,
/// so the reach follows analytically from one reference amplitude; it does
/// not depend on the reference chosen.
inline double epsilon_reach(const CampaignPlan& plan, const LevelModel& model) {
  if (model.clock.delta_alpha() == 0.0) {
    throw validation_error("epsilon_reach: no sensitivity (delta alpha is 0)");
  }
  if (plan.schedule_s.size() < 3) {
    throw validation_error("epsilon_reach: need at least 3 epochs");
  }
  if (plan.sigma_nu_hz == 0.0) return 0.0;

  std::vector<double> w(plan.schedule_s.size(), 1.0 / (plan.sigma_nu_hz * plan.sigma_nu_hz));
  const detail::NormalSums sums =
      detail::normal_sums(plan.schedule_s, model.law.gamma, w);
  const double det = sums.det();
  if (!(det > 1e-14 * sums.sw * sums.swxx)) {
    throw numerical_error("epsilon_reach: degenerate schedule");
  }
  const double sigma_amplitude = std::sqrt(sums.sw / det);

  NonlinearCouplings ref = model.couplings;
  if (!(ref.epsilon_gamma > 0.0)) ref.epsilon_gamma = 1e-5;
  const double amplitude_ref = std::abs(
      clock_frequency_shift(ref, model.trap, model.law, model.clock, 0.0));
  if (!(amplitude_ref > 0.0)) {
    throw validation_error("epsilon_reach: reference amplitude is 0");
  }
  return ref.epsilon_gamma *
         std::sqrt(plan.n_sigma_detect * sigma_amplitude / amplitude_ref);
}

/// Simulate the campaign: closed-form true shifts on the schedule, seeded
/// Gaussian noise, aging fit, detection verdict, and a paired control series
/// (identical draws, signal forced to zero). With inject_noise = false the
/// measured values are exactly the true ones while sigma_nu still sets the
/// fit weights, which evaluates the expected significance of a plan.
inline CampaignResult simulate_campaign(const CampaignPlan& plan, const LevelModel& model,
                                        std::optional<std::uint64_t> seed_override = {},
                                        bool inject_noise = true) {
  if (plan.schedule_s.empty()) {
    throw validation_error("simulate_campaign: schedule is empty");
  }
  if (plan.schedule_s.size() < 3) {
    throw validation_error("simulate_campaign: insufficient data (need >= 3 epochs)");
  }
  for (std::size_t i = 0; i < plan.schedule_s.size(); ++i) {
    if (!(plan.schedule_s[i] >= 0.0)) {
      throw validation_error("simulate_campaign: epochs must be >= 0");
    }
    if (i > 0 && !(plan.schedule_s[i] > plan.schedule_s[i - 1])) {
      throw validation_error("simulate_campaign: schedule must be strictly increasing");
    }
  }
  if (!(plan.sigma_nu_hz >= 0.0)) {
    throw validation_error("simulate_campaign: sigma_nu must be >= 0");
  }

  CampaignResult result;
  result.seed = seed_override.value_or(plan.seed);
  result.rng_algorithm = std::string(CampaignRng::algorithm);

  if (model.law.gamma > 0.0) {
    const double span = plan.schedule_s.back() - plan.schedule_s.front();
    if (span < 0.1 * model.law.half_life) {
      result.warnings.push_back(
          "schedule span is below 0.1 half-lives; aging fit is ill-conditioned");
    }
  }

  const AgingSeries truth = aging_series(model.couplings, model.trap, model.law,
                                         model.clock, plan.schedule_s);

  CampaignRng rng(result.seed);
  std::vector<FitPoint> points(plan.schedule_s.size());
  std::vector<FitPoint> control_points(plan.schedule_s.size());
  result.control.measured_shifts_hz.resize(plan.schedule_s.size());
  for (std::size_t k = 0; k < plan.schedule_s.size(); ++k) {
    const double noise =
        plan.sigma_nu_hz > 0.0 ? plan.sigma_nu_hz * rng.gaussian() : 0.0;
    const double truth_k = truth.points[k].delta_nu_hz;
    const double measured = truth_k + (inject_noise ? noise : 0.0);
    result.true_shifts_hz.push_back(truth_k);
    result.measured_shifts.emplace_back(plan.schedule_s[k], measured);
    points[k] = {plan.schedule_s[k], measured, plan.sigma_nu_hz};
    const double control = inject_noise ? noise : 0.0;
    result.control.measured_shifts_hz[k] = control;
    control_points[k] = {plan.schedule_s[k], control, plan.sigma_nu_hz};
  }

  const auto significance_of = [](const FitResult& fit) {
    if (fit.amplitude_sigma > 0.0) return fit.amplitude / fit.amplitude_sigma;
    if (fit.amplitude == 0.0) return 0.0;
    return std::copysign(std::numeric_limits<double>::infinity(), fit.amplitude);
  };

  const FitResult fit = fit_aging(points, model.law.gamma);
  result.fitted_amplitude = fit.amplitude;
  result.fitted_offset = fit.offset;
  result.amplitude_sigma = fit.amplitude_sigma;
  result.significance = significance_of(fit);
  result.detected = result.significance >= plan.n_sigma_detect;
  if (fit.condition_flag) {
    result.warnings.push_back("fit basis near-collinear; widen the schedule span");
  }

  const FitResult control_fit = fit_aging(control_points, model.law.gamma);
  result.control.fitted_amplitude = control_fit.amplitude;
  result.control.fitted_offset = control_fit.offset;
  result.control.significance = significance_of(control_fit);
  result.control.detected = result.control.significance >= plan.n_sigma_detect;

  if (model.clock.delta_alpha() != 0.0 && plan.sigma_nu_hz > 0.0) {
    result.epsilon_gamma_reach = epsilon_reach(plan, model);
  } else if (model.clock.delta_alpha() == 0.0) {
    result.warnings.push_back("no sensitivity: delta alpha is 0; reach undefined");
  }

  return result;
}

}  // namespace ionage
