#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ionage/campaign.hpp"
#include "ionage/decay.hpp"
#include "ionage/dynamics.hpp"
#include "ionage/em_nonlinear.hpp"
#include "ionage/errors.hpp"
#include "ionage/io.hpp"
#include "ionage/isotope.hpp"
#include "ionage/qcd_nonlinear.hpp"
#include "ionage/units.hpp"

namespace ionage::cli {

enum class Command { Simulate, Dynamics, Bound, Qcd, Campaign, Scan, Isotopes };

inline constexpr double unset = std::numeric_limits<double>::quiet_NaN();

/// Everything the CLI needs to run one command. Values arrive from flags,
/// with a JSON config file (--config) supplying defaults that flags
/// override. Fields that consuming modules require have NaN/empty sentinels
/// so missing inputs produce usage errors naming the flag.
struct RunConfig {
  Command command = Command::Isotopes;

  std::string isotope;
  double trap_size_nm = unset;
  double blackbody_field_v_per_m = 1e3;
  double epsilon_gamma = 0.0;
  double epsilon_n = 0.0;
  double alpha_lower_au = unset;  // polarizabilities have no defaults
  double alpha_upper_au = unset;
  double kappa = 1.0;
  double pion_g = 13.1;
  double interrogation_time_s = 1.0;
  double duration_days = unset;
  int samples = 0;
  int steps = 100000;
  double sigma_nu_mhz = 0.0;
  std::uint64_t seed = 0;
  double n_sigma = 5.0;
  bool no_noise = false;
  double clock_sensitivity_mhz = 1.0;
  double isotope_shift_scale_ghz = 1.0;
  std::string mass_shift_reading = "total";

  std::string observable;  // scan: "bound" or "reach"
  std::string axis_epsilon_gamma;
  std::string axis_trap_size_nm;
  std::string axis_delta_alpha;

  std::string isotopes_action;  // "list", "show", "validate"
  std::string show_name;

  std::string config_path;
  std::string registry_path;
  std::string out_path;
  std::string series_out_path;
  std::string format = "csv";
};

/// Thrown when the user asked for --help; carries the text to print.
struct help_requested {
  std::string text;
};

namespace detail {

inline void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open config file '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw parse_error("config '" + path + "': " + e.what());
  }
  if (!doc.is_object()) {
    throw validation_error("config '" + path + "': top level must be an object");
  }
  const auto num = [&](const nlohmann::json& v, const std::string& key) {
    if (!v.is_number()) {
      throw validation_error("config key '" + key + "' must be a number");
    }
    return v.get<double>();
  };
  const auto str = [&](const nlohmann::json& v, const std::string& key) {
    if (!v.is_string()) {
      throw validation_error("config key '" + key + "' must be a string");
    }
    return v.get<std::string>();
  };
  for (const auto& [key, v] : doc.items()) {
    if (key == "isotope") cfg.isotope = str(v, key);
    else if (key == "trap-size-nm") cfg.trap_size_nm = num(v, key);
    else if (key == "blackbody-field") cfg.blackbody_field_v_per_m = num(v, key);
    else if (key == "epsilon-gamma") cfg.epsilon_gamma = num(v, key);
    else if (key == "epsilon-n") cfg.epsilon_n = num(v, key);
    else if (key == "alpha-lower") cfg.alpha_lower_au = num(v, key);
    else if (key == "alpha-upper") cfg.alpha_upper_au = num(v, key);
    else if (key == "kappa") cfg.kappa = num(v, key);
    else if (key == "pion-g") cfg.pion_g = num(v, key);
    else if (key == "interrogation-time-s") cfg.interrogation_time_s = num(v, key);
    else if (key == "duration-days") cfg.duration_days = num(v, key);
    else if (key == "samples") cfg.samples = static_cast<int>(num(v, key));
    else if (key == "steps") cfg.steps = static_cast<int>(num(v, key));
    else if (key == "sigma-nu-mhz") cfg.sigma_nu_mhz = num(v, key);
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(num(v, key));
    else if (key == "n-sigma") cfg.n_sigma = num(v, key);
    else if (key == "clock-sensitivity-mhz") cfg.clock_sensitivity_mhz = num(v, key);
    else if (key == "isotope-shift-scale-ghz") cfg.isotope_shift_scale_ghz = num(v, key);
    else if (key == "mass-shift-reading") cfg.mass_shift_reading = str(v, key);
    else if (key == "registry") cfg.registry_path = str(v, key);
    else if (key == "out") cfg.out_path = str(v, key);
    else if (key == "series-out") cfg.series_out_path = str(v, key);
    else if (key == "format") cfg.format = str(v, key);
    else if (key == "observable") cfg.observable = str(v, key);
    else if (key == "epsilon-gamma-axis") cfg.axis_epsilon_gamma = str(v, key);
    else if (key == "trap-size-nm-axis") cfg.axis_trap_size_nm = str(v, key);
    else if (key == "delta-alpha-axis") cfg.axis_delta_alpha = str(v, key);
    else throw validation_error("config '" + path + "': unknown key '" + key + "'");
  }
}

inline std::string find_config_path(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return {};
}

inline void require_value(double v, const char* flag, const char* command) {
  if (std::isnan(v)) {
    throw validation_error(std::string(command) + ": missing required " + flag);
  }
}

}  // namespace detail

/// Parse command-line arguments (program name excluded). Throws
/// help_requested when help was asked for, validation_error on usage
/// problems.
inline RunConfig parse_args(const std::vector<std::string>& args) {
  RunConfig cfg;
  const std::string config_path = detail::find_config_path(args);
  if (!config_path.empty()) {
    cfg.config_path = config_path;
    detail::apply_config_file(cfg, config_path);
  }

  CLI::App app{"ionage: aging signatures of trapped radioactive-ion clocks"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--config", cfg.config_path,
                 "JSON file supplying option defaults (flags override)");
  app.add_option("--registry", cfg.registry_path,
                 "JSON registry file merged over the built-in isotopes");
  app.add_option("--out", cfg.out_path, "output file path (default: stdout)");
  app.add_option("--format", cfg.format, "output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", cfg.seed, "seed for the campaign noise generator");

  const auto add_geometry = [&](CLI::App* sub) {
    sub->add_option("--isotope", cfg.isotope, "isotope name, e.g. Lu-177");
    sub->add_option("--trap-size-nm", cfg.trap_size_nm, "trap confinement size l in nm");
  };
  const auto add_clock = [&](CLI::App* sub) {
    sub->add_option("--epsilon-gamma", cfg.epsilon_gamma,
                    "electromagnetic nonlinearity strength");
    sub->add_option("--alpha-lower", cfg.alpha_lower_au,
                    "lower clock level polarizability, atomic units");
    sub->add_option("--alpha-upper", cfg.alpha_upper_au,
                    "upper clock level polarizability, atomic units");
    sub->add_option("--kappa", cfg.kappa, "Stark estimator convention factor");
    sub->add_option("--interrogation-time-s", cfg.interrogation_time_s,
                    "Ramsey interrogation time T in seconds");
  };
  const auto add_schedule = [&](CLI::App* sub) {
    sub->add_option("--duration-days", cfg.duration_days, "campaign span in days");
    sub->add_option("--samples", cfg.samples, "number of schedule points");
  };

  CLI::App* simulate = app.add_subcommand(
      "simulate", "closed-form aging series on a measurement schedule");
  add_geometry(simulate);
  add_clock(simulate);
  add_schedule(simulate);

  CLI::App* dynamics = app.add_subcommand(
      "dynamics", "self-consistent integrator trajectory");
  add_geometry(dynamics);
  add_clock(dynamics);
  add_schedule(dynamics);
  dynamics->add_option("--steps", cfg.steps, "number of integrator steps");

  CLI::App* bound = app.add_subcommand(
      "bound", "blackbody-comparison threshold on epsilon_gamma");
  bound->add_option("--trap-size-nm", cfg.trap_size_nm, "trap confinement size l in nm");
  bound->add_option("--blackbody-field", cfg.blackbody_field_v_per_m,
                    "comparison blackbody field in V/m");

  CLI::App* qcd = app.add_subcommand(
      "qcd", "nuclear-sector shift report and detectability verdict");
  add_geometry(qcd);
  qcd->add_option("--epsilon-n", cfg.epsilon_n, "nucleon nonlinearity strength");
  qcd->add_option("--pion-g", cfg.pion_g, "pion-nucleon coupling g");
  qcd->add_option("--clock-sensitivity-mhz", cfg.clock_sensitivity_mhz,
                  "clock sensitivity in mHz");
  qcd->add_option("--isotope-shift-scale-ghz", cfg.isotope_shift_scale_ghz,
                  "isotopic correction scale in GHz");
  qcd->add_option("--mass-shift-reading", cfg.mass_shift_reading,
                  "mass shift reading: total (g^2 A^2) or per-nucleon (g^2 A)")
      ->check(CLI::IsMember({"total", "per-nucleon"}));

  CLI::App* campaign = app.add_subcommand(
      "campaign", "simulated measurement campaign with detection statistics");
  add_geometry(campaign);
  add_clock(campaign);
  add_schedule(campaign);
  campaign->add_option("--sigma-nu-mhz", cfg.sigma_nu_mhz,
                       "per-point frequency noise, 1 sigma, in mHz");
  campaign->add_option("--n-sigma", cfg.n_sigma, "detection threshold in sigma");
  campaign->add_flag("--no-noise", cfg.no_noise,
                     "skip noise injection (expected-significance mode)");
  campaign->add_option("--series-out", cfg.series_out_path,
                       "write the per-epoch series CSV here");

  CLI::App* scan = app.add_subcommand("scan", "parameter grid scan");
  add_geometry(scan);
  add_clock(scan);
  add_schedule(scan);
  scan->add_option("--observable", cfg.observable, "bound or reach")
      ->check(CLI::IsMember({"bound", "reach"}));
  scan->add_option("--blackbody-field", cfg.blackbody_field_v_per_m,
                   "comparison blackbody field in V/m");
  scan->add_option("--sigma-nu-mhz", cfg.sigma_nu_mhz,
                   "per-point frequency noise for reach scans, mHz");
  scan->add_option("--n-sigma", cfg.n_sigma, "detection threshold in sigma");
  scan->add_option("--epsilon-gamma-axis", cfg.axis_epsilon_gamma,
                   "axis spec: 'a,b,c' or 'lo:hi:n'");
  scan->add_option("--trap-size-nm-axis", cfg.axis_trap_size_nm,
                   "axis spec: 'a,b,c' or 'lo:hi:n'");
  scan->add_option("--delta-alpha-axis", cfg.axis_delta_alpha,
                   "axis spec: 'a,b,c' or 'lo:hi:n'");

  CLI::App* isotopes = app.add_subcommand("isotopes", "registry inspection");
  isotopes->require_subcommand(1);
  CLI::App* iso_list = isotopes->add_subcommand("list", "table of known records");
  CLI::App* iso_show = isotopes->add_subcommand("show", "one record as JSON");
  iso_show->add_option("name", cfg.show_name, "isotope name")->required();
  CLI::App* iso_validate =
      isotopes->add_subcommand("validate", "validate the --registry file");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    CLI::App* target = &app;
    while (!target->get_subcommands().empty()) target = target->get_subcommands().front();
    throw help_requested{target->help()};
  } catch (const CLI::CallForAllHelp&) {
    throw help_requested{app.help("", CLI::AppFormatMode::All)};
  } catch (const CLI::ParseError& e) {
    throw validation_error(std::string("usage error: ") + e.what() +
                           " (see 'ionage --help')");
  }

  if (simulate->parsed()) cfg.command = Command::Simulate;
  else if (dynamics->parsed()) cfg.command = Command::Dynamics;
  else if (bound->parsed()) cfg.command = Command::Bound;
  else if (qcd->parsed()) cfg.command = Command::Qcd;
  else if (campaign->parsed()) cfg.command = Command::Campaign;
  else if (scan->parsed()) cfg.command = Command::Scan;
  else if (isotopes->parsed()) {
    cfg.command = Command::Isotopes;
    if (iso_list->parsed()) cfg.isotopes_action = "list";
    else if (iso_show->parsed()) cfg.isotopes_action = "show";
    else if (iso_validate->parsed()) cfg.isotopes_action = "validate";
  }
  return cfg;
}

/// Axis spec: either an explicit comma list "10,20,40" or a linear range
/// "lo:hi:n".
inline std::vector<double> parse_axis(const std::string& spec) {
  std::vector<double> values;
  const auto to_double = [&](const std::string& cell) {
    try {
      std::size_t used = 0;
      const double v = std::stod(cell, &used);
      if (used != cell.size()) throw std::invalid_argument(cell);
      return v;
    } catch (const std::exception&) {
      throw validation_error("axis spec: bad number '" + cell + "' in '" + spec + "'");
    }
  };
  if (spec.find(':') != std::string::npos) {
    std::istringstream in(spec);
    std::string lo_s, hi_s, n_s;
    if (!std::getline(in, lo_s, ':') || !std::getline(in, hi_s, ':') ||
        !std::getline(in, n_s)) {
      throw validation_error("axis spec '" + spec + "': expected lo:hi:n");
    }
    const double lo = to_double(lo_s);
    const double hi = to_double(hi_s);
    const long n = std::lround(to_double(n_s));
    if (n < 1) throw validation_error("axis spec '" + spec + "': n must be >= 1");
    for (long k = 0; k < n; ++k) {
      values.push_back(n == 1 ? lo
                              : lo + (hi - lo) * static_cast<double>(k) /
                                         static_cast<double>(n - 1));
    }
  } else {
    std::istringstream in(spec);
    std::string cell;
    while (std::getline(in, cell, ',')) values.push_back(to_double(cell));
  }
  if (values.empty()) throw validation_error("axis spec '" + spec + "' is empty");
  if (values.size() > 10000) {
    throw validation_error("axis spec '" + spec +
                           "' exceeds 10000 points (resource limit)");
  }
  return values;
}

struct ModelContext {
  IsotopeRecord isotope;
  DecayLaw law;
  TrapSetup trap;
  ClockSystem clock;
  NonlinearCouplings couplings;

  LevelModel model() const { return {clock, law, trap, couplings, 0.0, 0.0}; }
};

inline ModelContext build_context(const RunConfig& cfg, const Registry& reg,
                                  const char* command) {
  if (cfg.isotope.empty()) {
    throw validation_error(std::string(command) + ": missing required --isotope");
  }
  detail::require_value(cfg.trap_size_nm, "--trap-size-nm", command);
  ModelContext ctx;
  ctx.isotope = lookup(reg, cfg.isotope);
  ctx.law = decay_law(ctx.isotope);
  ctx.trap.size = convert(cfg.trap_size_nm, Unit::Nanometer, Unit::Meter);
  ctx.trap.blackbody_field = cfg.blackbody_field_v_per_m;
  const auto clock_line = ctx.isotope.find_transition(TransitionRole::Clock);
  if (!clock_line) {
    throw validation_error(std::string(command) + ": isotope '" + cfg.isotope +
                           "' has no clock transition recorded");
  }
  ctx.clock.transition_frequency =
      phys.speed_of_light / convert(clock_line->wavelength_nm, Unit::Nanometer, Unit::Meter);
  ctx.clock.polarizability_lower = cfg.alpha_lower_au;
  ctx.clock.polarizability_upper = cfg.alpha_upper_au;
  ctx.clock.interrogation_time = cfg.interrogation_time_s;
  ctx.couplings.epsilon_gamma = cfg.epsilon_gamma;
  ctx.couplings.epsilon_n = cfg.epsilon_n;
  ctx.couplings.pion_nucleon_g = cfg.pion_g;
  ctx.couplings.stark_kappa = cfg.kappa;
  return ctx;
}

inline std::vector<double> build_schedule(const RunConfig& cfg, const char* command) {
  detail::require_value(cfg.duration_days, "--duration-days", command);
  if (cfg.samples < 1) {
    throw validation_error(std::string(command) + ": missing required --samples");
  }
  const double span = convert(cfg.duration_days, Unit::Day, Unit::Second);
  std::vector<double> schedule(static_cast<std::size_t>(cfg.samples));
  for (int k = 0; k < cfg.samples; ++k) {
    schedule[static_cast<std::size_t>(k)] =
        cfg.samples == 1
            ? 0.0
            : span * static_cast<double>(k) / static_cast<double>(cfg.samples - 1);
  }
  return schedule;
}

struct ScanRow {
  double epsilon_gamma = 0.0;
  double trap_size_nm = 0.0;
  double delta_alpha_au = 0.0;
  double value = 0.0;
};

struct ScanTable {
  std::string observable;
  std::vector<ScanRow> rows;
};

/// Evaluate the chosen observable on the lexicographic grid
/// (epsilon_gamma outer, trap size middle, delta alpha inner).
inline ScanTable run_scan(const RunConfig& cfg, const Registry& reg) {
  if (cfg.observable != "bound" && cfg.observable != "reach") {
    throw validation_error("scan: --observable must be 'bound' or 'reach'");
  }
  const auto axis_or = [&](const std::string& spec, double fallback,
                           const char* flag) {
    if (!spec.empty()) return parse_axis(spec);
    if (std::isnan(fallback)) {
      throw validation_error(std::string("scan: provide ") + flag +
                             " or its scalar flag");
    }
    return std::vector<double>{fallback};
  };
  const std::vector<double> eps_axis =
      axis_or(cfg.axis_epsilon_gamma, cfg.epsilon_gamma, "--epsilon-gamma-axis");
  const std::vector<double> trap_axis =
      axis_or(cfg.axis_trap_size_nm, cfg.trap_size_nm, "--trap-size-nm-axis");
  const double fallback_delta =
      (std::isnan(cfg.alpha_lower_au) || std::isnan(cfg.alpha_upper_au))
          ? unset
          : cfg.alpha_upper_au - cfg.alpha_lower_au;
  const std::vector<double> delta_axis =
      cfg.observable == "bound"
          ? (cfg.axis_delta_alpha.empty() ? std::vector<double>{0.0}
                                          : parse_axis(cfg.axis_delta_alpha))
          : axis_or(cfg.axis_delta_alpha, fallback_delta, "--delta-alpha-axis");
  const std::size_t total = eps_axis.size() * trap_axis.size() * delta_axis.size();
  if (total > 1000000) {
    throw validation_error("scan: grid has " + std::to_string(total) +
                           " points, above the 1e6 resource limit");
  }

  ScanTable table;
  table.observable = cfg.observable;
  table.rows.reserve(total);

  std::optional<ModelContext> ctx;
  std::optional<CampaignPlan> plan;
  if (cfg.observable == "reach") {
    RunConfig base = cfg;
    if (std::isnan(base.alpha_lower_au)) base.alpha_lower_au = 0.0;
    if (std::isnan(base.alpha_upper_au)) base.alpha_upper_au = base.alpha_lower_au;
    if (std::isnan(base.trap_size_nm)) base.trap_size_nm = trap_axis.front();
    ctx = build_context(base, reg, "scan");
    plan = CampaignPlan{cfg.isotope, build_schedule(cfg, "scan"),
                        cfg.interrogation_time_s,
                        convert(cfg.sigma_nu_mhz, Unit::Millihertz, Unit::Hertz),
                        cfg.seed, cfg.n_sigma};
  }

  for (const double eps : eps_axis) {
    for (const double trap_nm : trap_axis) {
      for (const double delta : delta_axis) {
        ScanRow row{eps, trap_nm, delta, 0.0};
        if (cfg.observable == "bound") {
          TrapSetup trap{convert(trap_nm, Unit::Nanometer, Unit::Meter),
                         cfg.blackbody_field_v_per_m};
          row.value = blackbody_bound(trap);
        } else {
          LevelModel model = ctx->model();
          model.trap.size = convert(trap_nm, Unit::Nanometer, Unit::Meter);
          model.couplings.epsilon_gamma = eps;
          model.clock.polarizability_upper = model.clock.polarizability_lower + delta;
          row.value = epsilon_reach(*plan, model);
        }
        table.rows.push_back(row);
      }
    }
  }
  return table;
}

inline std::string scan_csv(const ScanTable& table) {
  std::ostringstream out;
  out << "epsilon_gamma,trap_size_nm,delta_alpha_au,"
      << (table.observable == "bound" ? "epsilon_gamma_bound" : "epsilon_gamma_reach")
      << '\n';
  for (const auto& row : table.rows) {
    out << io::format_sci(row.epsilon_gamma) << ',' << io::format_sci(row.trap_size_nm)
        << ',' << io::format_sci(row.delta_alpha_au) << ',' << io::format_sci(row.value)
        << '\n';
  }
  return out.str();
}

inline nlohmann::ordered_json scan_json(const ScanTable& table) {
  nlohmann::ordered_json j;
  j["observable"] = table.observable;
  auto& eps = j["epsilon_gamma"] = nlohmann::ordered_json::array();
  auto& trap = j["trap_size_nm"] = nlohmann::ordered_json::array();
  auto& delta = j["delta_alpha_au"] = nlohmann::ordered_json::array();
  auto& value = j["value"] = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    eps.push_back(row.epsilon_gamma);
    trap.push_back(row.trap_size_nm);
    delta.push_back(row.delta_alpha_au);
    value.push_back(row.value);
  }
  return j;
}

namespace detail {

inline void emit_text(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.out_path.empty()) {
    out << text;
  } else {
    io::write_file(cfg.out_path, text);
  }
}

inline void emit_series(const RunConfig& cfg, const AgingSeries& series,
                        std::ostream& out) {
  const std::string text = cfg.format == "json" ? io::series_to_json(series).dump(2) + "\n"
                                                : io::series_csv_string(series);
  emit_text(cfg, text, out);
  if (!cfg.out_path.empty()) {
    out << series.points.size() << " rows -> " << cfg.out_path << "\n";
  }
}

inline int run_simulate(const RunConfig& cfg, const Registry& reg, std::ostream& out) {
  require_value(cfg.alpha_lower_au, "--alpha-lower", "simulate");
  require_value(cfg.alpha_upper_au, "--alpha-upper", "simulate");
  const ModelContext ctx = build_context(cfg, reg, "simulate");
  const std::vector<double> schedule = build_schedule(cfg, "simulate");
  const AgingSeries series =
      aging_series(ctx.couplings, ctx.trap, ctx.law, ctx.clock, schedule);
  emit_series(cfg, series, out);
  return 0;
}

inline int run_dynamics(const RunConfig& cfg, const Registry& reg, std::ostream& out) {
  require_value(cfg.alpha_lower_au, "--alpha-lower", "dynamics");
  require_value(cfg.alpha_upper_au, "--alpha-upper", "dynamics");
  require_value(cfg.duration_days, "--duration-days", "dynamics");
  if (cfg.steps < 1) throw validation_error("dynamics: --steps must be >= 1");
  const ModelContext ctx = build_context(cfg, reg, "dynamics");
  const double span = convert(cfg.duration_days, Unit::Day, Unit::Second);
  const int samples = cfg.samples > 0 ? cfg.samples : 1000;
  const std::size_t stride = static_cast<std::size_t>(
      std::max(1, cfg.steps / samples));
  const TrajectoryRecord traj =
      evolve(ctx.model(), StateVector::equal_superposition(), 0.0, span,
             span / static_cast<double>(cfg.steps), stride);
  emit_series(cfg, traj.samples, out);
  if (!cfg.out_path.empty()) {
    out << "final differential phase: " << io::format_sci(traj.differential_phase)
        << " rad\n";
  }
  return 0;
}

inline int run_bound(const RunConfig& cfg, std::ostream& out) {
  require_value(cfg.trap_size_nm, "--trap-size-nm", "bound");
  const TrapSetup trap{convert(cfg.trap_size_nm, Unit::Nanometer, Unit::Meter),
                       cfg.blackbody_field_v_per_m};
  const double value = blackbody_bound(trap);
  out << io::format_sci(value) << "\n";
  if (!cfg.out_path.empty()) {
    io::write_file(cfg.out_path, io::format_sci(value) + "\n");
  }
  return 0;
}

inline int run_qcd(const RunConfig& cfg, const Registry& reg, std::ostream& out) {
  if (cfg.isotope.empty()) throw validation_error("qcd: missing required --isotope");
  require_value(cfg.trap_size_nm, "--trap-size-nm", "qcd");
  const IsotopeRecord& iso = lookup(reg, cfg.isotope);
  const TrapSetup trap{convert(cfg.trap_size_nm, Unit::Nanometer, Unit::Meter),
                       cfg.blackbody_field_v_per_m};
  NonlinearCouplings couplings;
  couplings.epsilon_n = cfg.epsilon_n;
  couplings.pion_nucleon_g = cfg.pion_g;
  const MassShiftReading reading = cfg.mass_shift_reading == "per-nucleon"
                                       ? MassShiftReading::PerNucleon
                                       : MassShiftReading::TotalNuclear;
  const QcdShiftResult res = isotopic_detectability(
      couplings, iso, trap,
      convert(cfg.clock_sensitivity_mhz, Unit::Millihertz, Unit::Hertz),
      convert(cfg.isotope_shift_scale_ghz, Unit::Gigahertz, Unit::Hertz), reading);

  nlohmann::ordered_json j;
  j["inputs"] = {{"isotope", cfg.isotope},
                 {"mass_number", iso.mass_number},
                 {"epsilon_n", cfg.epsilon_n},
                 {"pion_g", cfg.pion_g},
                 {"trap_size_nm", cfg.trap_size_nm},
                 {"clock_sensitivity_hz",
                  convert(cfg.clock_sensitivity_mhz, Unit::Millihertz, Unit::Hertz)},
                 {"isotope_shift_scale_hz",
                  convert(cfg.isotope_shift_scale_ghz, Unit::Gigahertz, Unit::Hertz)},
                 {"mass_shift_reading", cfg.mass_shift_reading}};
  j["pion_field_mev"] = res.pion_field_mev;
  j["mass_shift_mev"] = res.mass_shift_mev;
  j["relative_mass_shift"] = res.relative_mass_shift;
  j["isotopic_frequency_shift_hz"] = res.isotopic_frequency_shift_hz;
  j["verdict"] =
      res.verdict == Verdict::Detectable ? "detectable" : "not_detectable";
  if (!cfg.out_path.empty()) io::write_file(cfg.out_path, j.dump(2) + "\n");
  out << "verdict: " << j["verdict"].get<std::string>() << " (shift "
      << io::format_sci(res.isotopic_frequency_shift_hz) << " Hz)\n";
  return 0;
}

inline int run_campaign(const RunConfig& cfg, const Registry& reg, std::ostream& out) {
  require_value(cfg.alpha_lower_au, "--alpha-lower", "campaign");
  require_value(cfg.alpha_upper_au, "--alpha-upper", "campaign");
  const ModelContext ctx = build_context(cfg, reg, "campaign");
  CampaignPlan plan;
  plan.isotope = cfg.isotope;
  plan.schedule_s = build_schedule(cfg, "campaign");
  plan.interrogation_time_s = cfg.interrogation_time_s;
  plan.sigma_nu_hz = convert(cfg.sigma_nu_mhz, Unit::Millihertz, Unit::Hertz);
  plan.seed = cfg.seed;
  plan.n_sigma_detect = cfg.n_sigma;
  const CampaignResult result =
      simulate_campaign(plan, ctx.model(), std::nullopt, !cfg.no_noise);
  const nlohmann::ordered_json report = io::campaign_report_json(plan, ctx.model(), result);
  if (!cfg.out_path.empty()) {
    io::write_file(cfg.out_path, report.dump(2) + "\n");
    out << "report -> " << cfg.out_path << "\n";
  } else {
    out << report.dump(2) << "\n";
  }
  if (!cfg.series_out_path.empty()) {
    io::write_file(cfg.series_out_path, io::campaign_series_csv(result));
    out << "series -> " << cfg.series_out_path << "\n";
  }
  return 0;
}

inline int run_scan_command(const RunConfig& cfg, const Registry& reg,
                            std::ostream& out) {
  const ScanTable table = run_scan(cfg, reg);
  const std::string text = cfg.format == "json" ? scan_json(table).dump(2) + "\n"
                                                : scan_csv(table);
  emit_text(cfg, text, out);
  if (!cfg.out_path.empty()) {
    out << table.rows.size() << " rows -> " << cfg.out_path << "\n";
  }
  return 0;
}

inline int run_isotopes(const RunConfig& cfg, const Registry& reg, std::ostream& out) {
  if (cfg.isotopes_action == "list") {
    out << "name      element  A    half_life_days  mode    daughter  spin  lines\n";
    for (const auto& [name, rec] : reg) {
      char half[32];
      if (rec.stable()) {
        std::snprintf(half, sizeof(half), "%-14s", "stable");
      } else {
        std::snprintf(half, sizeof(half), "%-14.6g", rec.half_life_days());
      }
      char line[160];
      std::snprintf(line, sizeof(line), "%-9s %-8s %-4d %s  %-7s %-9s %-5s %zu\n",
                    rec.name.c_str(), rec.element.c_str(), rec.mass_number, half,
                    std::string(ionage::detail::decay_mode_name(rec.decay_mode)).c_str(),
                    rec.daughter ? rec.daughter->c_str() : "-",
                    rec.nuclear_spin.to_string().c_str(), rec.transitions.size());
      out << line;
    }
    return 0;
  }
  if (cfg.isotopes_action == "show") {
    const IsotopeRecord& rec = lookup(reg, cfg.show_name);
    out << record_to_json(rec).dump(2) << "\n";
    return 0;
  }
  if (cfg.isotopes_action == "validate") {
    if (cfg.registry_path.empty()) {
      throw validation_error("isotopes validate: missing required --registry");
    }
    const Registry merged = load_registry(cfg.registry_path);
    out << "registry OK (" << merged.size() << " records)\n";
    return 0;
  }
  throw validation_error("isotopes: choose list, show, or validate");
}

}  // namespace detail

/// Parse and run. Returns the process exit code: 0 success, 1
/// usage/validation, 2 I/O, 3 numerical failure.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out,
                   std::ostream& err) {
  try {
    const RunConfig cfg = parse_args(args);
    const Registry reg =
        cfg.registry_path.empty() ? builtin_registry() : load_registry(cfg.registry_path);
    switch (cfg.command) {
      case Command::Simulate: return detail::run_simulate(cfg, reg, out);
      case Command::Dynamics: return detail::run_dynamics(cfg, reg, out);
      case Command::Bound: return detail::run_bound(cfg, out);
      case Command::Qcd: return detail::run_qcd(cfg, reg, out);
      case Command::Campaign: return detail::run_campaign(cfg, reg, out);
      case Command::Scan: return detail::run_scan_command(cfg, reg, out);
      case Command::Isotopes: return detail::run_isotopes(cfg, reg, out);
    }
    return 0;
  } catch (const help_requested& h) {
    out << h.text;
    return 0;
  } catch (const io_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const numerical_error& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const ionage::error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace ionage::cli
