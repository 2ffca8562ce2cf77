#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ionage/campaign.hpp"
#include "ionage/dynamics.hpp"
#include "ionage/em_nonlinear.hpp"
#include "ionage/errors.hpp"

namespace ionage::io {

inline constexpr std::string_view series_header =
    "t_seconds,survival_prob,e_nl_v_per_m,delta_e_upper_j,delta_e_lower_j,"
    "delta_nu_hz,phase_rad";

/// Scientific notation with 12 significant digits and a minimal exponent:
/// 0 -> "0.00000000000e0", 143.996... -> "1.43996454784e2".
inline std::string format_sci(double value) {
  if (value == 0.0) return "0.00000000000e0";  // normalizes -0
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.11e", value);
  std::string s(buf);
  const auto epos = s.find('e');
  if (epos == std::string::npos) return s;  // nan/inf
  std::string mantissa = s.substr(0, epos);
  std::string exponent = s.substr(epos + 1);
  bool negative_exp = false;
  std::size_t i = 0;
  if (i < exponent.size() && (exponent[i] == '+' || exponent[i] == '-')) {
    negative_exp = exponent[i] == '-';
    ++i;
  }
  while (i + 1 < exponent.size() && exponent[i] == '0') ++i;
  return mantissa + "e" + (negative_exp ? "-" : "") + exponent.substr(i);
}

inline void write_series_csv(std::ostream& out, const AgingSeries& series) {
  out << series_header << '\n';
  for (const auto& p : series.points) {
    out << format_sci(p.t_seconds) << ',' << format_sci(p.survival_prob) << ','
        << format_sci(p.e_nl_v_per_m) << ',' << format_sci(p.delta_e_upper_j) << ','
        << format_sci(p.delta_e_lower_j) << ',' << format_sci(p.delta_nu_hz) << ','
        << format_sci(p.phase_rad) << '\n';
  }
}

inline nlohmann::ordered_json series_to_json(const AgingSeries& series) {
  nlohmann::ordered_json j;
  auto& t = j["t_seconds"] = nlohmann::ordered_json::array();
  auto& sp = j["survival_prob"] = nlohmann::ordered_json::array();
  auto& en = j["e_nl_v_per_m"] = nlohmann::ordered_json::array();
  auto& eu = j["delta_e_upper_j"] = nlohmann::ordered_json::array();
  auto& el = j["delta_e_lower_j"] = nlohmann::ordered_json::array();
  auto& dn = j["delta_nu_hz"] = nlohmann::ordered_json::array();
  auto& ph = j["phase_rad"] = nlohmann::ordered_json::array();
  for (const auto& p : series.points) {
    t.push_back(p.t_seconds);
    sp.push_back(p.survival_prob);
    en.push_back(p.e_nl_v_per_m);
    eu.push_back(p.delta_e_upper_j);
    el.push_back(p.delta_e_lower_j);
    dn.push_back(p.delta_nu_hz);
    ph.push_back(p.phase_rad);
  }
  return j;
}

/// Parse a CSV produced by write_series_csv (round-trip checking, tooling).
inline AgingSeries parse_series_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != series_header) {
    throw parse_error("series CSV: missing or unexpected header");
  }
  AgingSeries series;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    double values[7];
    for (int c = 0; c < 7; ++c) {
      if (!std::getline(row, cell, ',')) {
        throw parse_error("series CSV: line " + std::to_string(lineno) +
                          ": expected 7 columns");
      }
      char* end = nullptr;
      values[c] = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str()) {
        throw parse_error("series CSV: line " + std::to_string(lineno) +
                          ": bad number '" + cell + "'");
      }
    }
    series.points.push_back({values[0], values[1], values[2], values[3], values[4],
                             values[5], values[6]});
  }
  return series;
}

inline void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open '" + path + "' for writing");
  out << content;
  out.flush();
  if (!out) throw io_error("write failed for '" + path + "'");
}

inline std::string series_csv_string(const AgingSeries& series) {
  std::ostringstream out;
  write_series_csv(out, series);
  return out.str();
}

/// Campaign report: result fields plus an echo of the inputs and the
/// generator metadata. Key order is fixed so identical runs are
/// byte-identical.
inline nlohmann::ordered_json campaign_report_json(const CampaignPlan& plan,
                                                   const LevelModel& model,
                                                   const CampaignResult& result) {
  nlohmann::ordered_json j;
  auto& inputs = j["inputs"];
  inputs["isotope"] = plan.isotope;
  inputs["schedule_s"] = plan.schedule_s;
  inputs["interrogation_time_s"] = plan.interrogation_time_s;
  inputs["sigma_nu_hz"] = plan.sigma_nu_hz;
  inputs["n_sigma_detect"] = plan.n_sigma_detect;
  inputs["trap_size_m"] = model.trap.size;
  inputs["blackbody_field_v_per_m"] = model.trap.blackbody_field;
  inputs["epsilon_gamma"] = model.couplings.epsilon_gamma;
  inputs["stark_kappa"] = model.couplings.stark_kappa;
  inputs["gamma_per_s"] = model.law.gamma;
  inputs["transition_frequency_hz"] = model.clock.transition_frequency;
  inputs["polarizability_lower_au"] = model.clock.polarizability_lower;
  inputs["polarizability_upper_au"] = model.clock.polarizability_upper;

  auto& gen = j["generator"];
  gen["algorithm"] = result.rng_algorithm;
  gen["seed"] = result.seed;

  auto& res = j["result"];
  auto& shifts = res["measured_shifts"] = nlohmann::ordered_json::array();
  for (const auto& [epoch, value] : result.measured_shifts) {
    shifts.push_back({epoch, value});
  }
  res["true_shifts_hz"] = result.true_shifts_hz;
  res["fitted_amplitude_hz"] = result.fitted_amplitude;
  res["fitted_offset_hz"] = result.fitted_offset;
  res["amplitude_sigma_hz"] = result.amplitude_sigma;
  res["significance"] = result.significance;
  res["detected"] = result.detected;
  res["epsilon_gamma_reach"] = result.epsilon_gamma_reach;

  auto& control = res["control"];
  control["measured_shifts_hz"] = result.control.measured_shifts_hz;
  control["fitted_amplitude_hz"] = result.control.fitted_amplitude;
  control["fitted_offset_hz"] = result.control.fitted_offset;
  control["significance"] = result.control.significance;
  control["detected"] = result.control.detected;

  res["warnings"] = result.warnings;
  return j;
}

/// Per-epoch campaign series: truth, measured, and the paired control.
inline std::string campaign_series_csv(const CampaignResult& result) {
  std::ostringstream out;
  out << "t_seconds,true_delta_nu_hz,measured_delta_nu_hz,control_delta_nu_hz\n";
  for (std::size_t k = 0; k < result.measured_shifts.size(); ++k) {
    out << format_sci(result.measured_shifts[k].first) << ','
        << format_sci(result.true_shifts_hz[k]) << ','
        << format_sci(result.measured_shifts[k].second) << ','
        << format_sci(result.control.measured_shifts_hz[k]) << '\n';
  }
  return out.str();
}

}  // namespace ionage::io
