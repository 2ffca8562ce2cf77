#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ionage/errors.hpp"
#include "ionage/units.hpp"

namespace ionage {

/// Exact fraction for nuclear spins; "7/2" must round-trip exactly.
struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n, long long d) : num(n), den(d) {
    if (den == 0) throw validation_error("Rational: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  bool operator==(const Rational&) const = default;

  std::string to_string() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
  }

  static Rational parse(std::string_view text) {
    const auto slash = text.find('/');
    try {
      if (slash == std::string_view::npos) {
        return Rational(std::stoll(std::string(text)), 1);
      }
      return Rational(std::stoll(std::string(text.substr(0, slash))),
                      std::stoll(std::string(text.substr(slash + 1))));
    } catch (const std::exception&) {
      throw parse_error("Rational: cannot parse fraction '" + std::string(text) + "'");
    }
  }
};

enum class DecayMode { Beta, Alpha, Stable };
enum class Multipole { E1, M1, E2 };
enum class TransitionRole { Clock, Detection, Pumping };

struct TransitionRecord {
  double wavelength_nm = 0.0;
  Multipole multipole = Multipole::E1;
  TransitionRole role = TransitionRole::Clock;

  bool operator==(const TransitionRecord&) const = default;
};

/// Nuclear and spectroscopic facts for one species.
struct IsotopeRecord {
  std::string name;     // e.g. "Lu-177"
  std::string element;  // e.g. "Lu"
  int mass_number = 0;  // A
  double half_life_s = std::numeric_limits<double>::infinity();  // inf when stable
  DecayMode decay_mode = DecayMode::Stable;
  std::optional<std::string> daughter;
  Rational nuclear_spin;
  int charge_state = 0;
  std::vector<TransitionRecord> transitions;
  std::string notes;

  bool stable() const { return decay_mode == DecayMode::Stable; }

  double half_life_days() const {
    return half_life_s / phys.seconds_per_day;
  }

  /// First transition with the given role, if any.
  std::optional<TransitionRecord> find_transition(TransitionRole role) const {
    for (const auto& tr : transitions) {
      if (tr.role == role) return tr;
    }
    return std::nullopt;
  }

  bool operator==(const IsotopeRecord&) const = default;
};

namespace detail {

[[noreturn]] inline void invariant_failure(const IsotopeRecord& rec,
                                           const std::string& field,
                                           const std::string& what) {
  throw validation_error("isotope record '" + rec.name + "', field '" + field +
                         "': " + what);
}

}  // namespace detail

inline void validate(const IsotopeRecord& rec) {
  if (rec.name.empty()) detail::invariant_failure(rec, "name", "must be nonempty");
  if (rec.element.empty()) detail::invariant_failure(rec, "element", "must be nonempty");
  if (rec.mass_number < 1) {
    detail::invariant_failure(rec, "mass_number", "must be >= 1");
  }
  if (rec.stable()) {
    if (!std::isinf(rec.half_life_s)) {
      detail::invariant_failure(rec, "half_life",
                                "stable species must use the infinite sentinel");
    }
    if (rec.daughter.has_value()) {
      detail::invariant_failure(rec, "daughter", "stable species have no daughter");
    }
  } else {
    if (!(rec.half_life_s > 0.0) || std::isinf(rec.half_life_s)) {
      detail::invariant_failure(rec, "half_life", "must be positive and finite");
    }
    if (!rec.daughter.has_value() || rec.daughter->empty()) {
      detail::invariant_failure(rec, "daughter", "decaying species need a daughter");
    }
  }
  if (rec.nuclear_spin.num < 0) {
    detail::invariant_failure(rec, "nuclear_spin", "must be >= 0");
  }
  if (rec.nuclear_spin.den != 1 && rec.nuclear_spin.den != 2) {
    detail::invariant_failure(rec, "nuclear_spin", "must be a multiple of 1/2");
  }
  for (const auto& tr : rec.transitions) {
    if (!(tr.wavelength_nm > 100.0 && tr.wavelength_nm < 10000.0)) {
      detail::invariant_failure(rec, "transitions",
                                "wavelength must lie in (100, 10000) nm");
    }
  }
}

using Registry = std::map<std::string, IsotopeRecord>;

/// Built-in records for the candidate clock radioisotopes and their
/// production/comparison partners.
inline Registry builtin_registry() {
  const double day = phys.seconds_per_day;
  const std::vector<TransitionRecord> lu_lines = {
      {804.0, Multipole::E2, TransitionRole::Clock},
      {848.0, Multipole::M1, TransitionRole::Clock},
      {646.0, Multipole::E1, TransitionRole::Detection},
      {622.0, Multipole::E1, TransitionRole::Pumping},
      {350.0, Multipole::E1, TransitionRole::Pumping},
  };
  const std::vector<TransitionRecord> ra_lines = {
      {728.0, Multipole::E2, TransitionRole::Clock},
      {828.0, Multipole::E2, TransitionRole::Clock},
  };
  const double inf = std::numeric_limits<double>::infinity();

  Registry reg;
  reg["Lu-177"] = {"Lu-177", "Lu", 177, 6.65 * day, DecayMode::Beta,
                   "Hf-177", Rational(7, 2), +1, lu_lines,
                   "Hyperfine structure not modeled; splitting differs from Lu-176."};
  reg["Lu-176"] = {"Lu-176", "Lu", 176, inf, DecayMode::Stable,
                   std::nullopt, Rational(7, 1), +1, lu_lines,
                   "Treated as stable; the published clock measurements used this isotope."};
  reg["Lu-175"] = {"Lu-175", "Lu", 175, inf, DecayMode::Stable,
                   std::nullopt, Rational(7, 2), +1, lu_lines,
                   "Stable comparison species; nuclear spin matches Lu-177."};
  reg["Yb-177"] = {"Yb-177", "Yb", 177, 1.9 * 3600.0, DecayMode::Beta,
                   "Lu-177", Rational(9, 2), 0, {},
                   "Production intermediate: neutron capture on Yb-176 feeds Lu-177."};
  reg["Ra-223"] = {"Ra-223", "Ra", 223, 11.43 * day, DecayMode::Alpha,
                   "Rn-219", Rational(3, 2), +1, ra_lines,
                   "Pure alpha emitter; spectroscopy established on Ra-226 ions."};
  reg["Er-169"] = {"Er-169", "Er", 169, 9.375 * day, DecayMode::Beta,
                   "Tm-169", Rational(1, 2), +1, {},
                   "Alternative ion-clock radioisotope; no transition data recorded."};
  reg["Yb-175"] = {"Yb-175", "Yb", 175, 4.185 * day, DecayMode::Beta,
                   "Lu-175", Rational(7, 2), +1, {},
                   "Alternative ion-clock radioisotope; no transition data recorded."};
  for (const auto& [name, rec] : reg) validate(rec);
  return reg;
}

inline const IsotopeRecord& lookup(const Registry& reg, const std::string& name) {
  const auto it = reg.find(name);
  if (it == reg.end()) {
    throw validation_error("unknown isotope '" + name + "'");
  }
  return it->second;
}

namespace detail {

inline std::string_view decay_mode_name(DecayMode m) {
  switch (m) {
    case DecayMode::Beta: return "beta";
    case DecayMode::Alpha: return "alpha";
    case DecayMode::Stable: return "stable";
  }
  return "?";
}

inline std::string_view multipole_name(Multipole m) {
  switch (m) {
    case Multipole::E1: return "E1";
    case Multipole::M1: return "M1";
    case Multipole::E2: return "E2";
  }
  return "?";
}

inline std::string_view role_name(TransitionRole r) {
  switch (r) {
    case TransitionRole::Clock: return "clock";
    case TransitionRole::Detection: return "detection";
    case TransitionRole::Pumping: return "pumping";
  }
  return "?";
}

template <typename T>
T parse_enum(const std::string& text, std::initializer_list<std::pair<std::string_view, T>> table,
             const std::string& record, const std::string& field) {
  for (const auto& [name, value] : table) {
    if (text == name) return value;
  }
  throw validation_error("isotope record '" + record + "', field '" + field +
                         "': unknown value '" + text + "'");
}

inline void reject_unknown_keys(const nlohmann::json& obj,
                                std::initializer_list<std::string_view> allowed,
                                const std::string& record) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const auto& a : allowed) {
      if (key == a) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw validation_error("isotope record '" + record + "': unknown key '" + key + "'");
    }
  }
}

inline IsotopeRecord record_from_json(const std::string& name, const nlohmann::json& j) {
  if (!j.is_object()) {
    throw validation_error("isotope record '" + name + "': expected a JSON object");
  }
  reject_unknown_keys(j,
                      {"element", "mass_number", "half_life_days", "decay_mode", "daughter",
                       "nuclear_spin", "charge_state", "transitions", "notes"},
                      name);
  IsotopeRecord rec;
  rec.name = name;
  try {
    rec.element = j.at("element").get<std::string>();
    rec.mass_number = j.at("mass_number").get<int>();
    const auto& hl = j.at("half_life_days");
    if (hl.is_string()) {
      if (hl.get<std::string>() != "inf") {
        throw validation_error("isotope record '" + name +
                               "', field 'half_life_days': expected a number or \"inf\"");
      }
      rec.half_life_s = std::numeric_limits<double>::infinity();
    } else {
      rec.half_life_s = hl.get<double>() * phys.seconds_per_day;
    }
    rec.decay_mode = parse_enum<DecayMode>(j.at("decay_mode").get<std::string>(),
                                           {{"beta", DecayMode::Beta},
                                            {"alpha", DecayMode::Alpha},
                                            {"stable", DecayMode::Stable}},
                                           name, "decay_mode");
    const auto& d = j.at("daughter");
    if (!d.is_null()) rec.daughter = d.get<std::string>();
    rec.nuclear_spin = Rational::parse(j.at("nuclear_spin").get<std::string>());
    rec.charge_state = j.at("charge_state").get<int>();
    for (const auto& tj : j.at("transitions")) {
      reject_unknown_keys(tj, {"wavelength_nm", "multipole", "role"}, name);
      TransitionRecord tr;
      tr.wavelength_nm = tj.at("wavelength_nm").get<double>();
      tr.multipole = parse_enum<Multipole>(tj.at("multipole").get<std::string>(),
                                           {{"E1", Multipole::E1},
                                            {"M1", Multipole::M1},
                                            {"E2", Multipole::E2}},
                                           name, "multipole");
      tr.role = parse_enum<TransitionRole>(tj.at("role").get<std::string>(),
                                           {{"clock", TransitionRole::Clock},
                                            {"detection", TransitionRole::Detection},
                                            {"pumping", TransitionRole::Pumping}},
                                           name, "role");
      rec.transitions.push_back(tr);
    }
    rec.notes = j.at("notes").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw validation_error("isotope record '" + name + "': " + e.what());
  }
  validate(rec);
  return rec;
}

}  // namespace detail

inline nlohmann::ordered_json record_to_json(const IsotopeRecord& rec) {
  nlohmann::ordered_json j;
  j["element"] = rec.element;
  j["mass_number"] = rec.mass_number;
  if (std::isinf(rec.half_life_s)) {
    j["half_life_days"] = "inf";
  } else {
    j["half_life_days"] = rec.half_life_days();
  }
  j["decay_mode"] = std::string(detail::decay_mode_name(rec.decay_mode));
  j["daughter"] = rec.daughter ? nlohmann::ordered_json(*rec.daughter)
                               : nlohmann::ordered_json(nullptr);
  j["nuclear_spin"] = rec.nuclear_spin.to_string();
  j["charge_state"] = rec.charge_state;
  auto& trs = j["transitions"] = nlohmann::ordered_json::array();
  for (const auto& tr : rec.transitions) {
    trs.push_back({{"wavelength_nm", tr.wavelength_nm},
                   {"multipole", std::string(detail::multipole_name(tr.multipole))},
                   {"role", std::string(detail::role_name(tr.role))}});
  }
  j["notes"] = rec.notes;
  return j;
}

/// Parse a registry file and merge it over the built-ins (file entries
/// override built-ins by name). Parse failures report line and column.
inline Registry load_registry(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw io_error("cannot open registry file '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw parse_error("registry '" + path + "': parse error at line " +
                      std::to_string(line) + ", column " + std::to_string(col) +
                      ": " + e.what());
  }
  if (!doc.is_object()) {
    throw validation_error("registry '" + path + "': top level must be an object");
  }

  Registry reg = builtin_registry();
  for (const auto& [name, body] : doc.items()) {
    reg[name] = detail::record_from_json(name, body);
  }
  return reg;
}

}  // namespace ionage
