#pragma once

// Plain-text nested-section key/value config files:
//
//   # comment
//   [synapse.input_geometry]
//   width = 4.0e-7
//
// Section names nest with dots. Values are bare tokens; parse errors carry
// file and line. Profiles, corner sets and MC campaign specs all use this
// format.

#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "neuromac/analysis.hpp"
#include "neuromac/digital.hpp"
#include "neuromac/errors.hpp"
#include "neuromac/msn.hpp"

namespace neuromac {

class ConfigFile {
 public:
  struct Entry {
    std::string value;
    int line = 0;
  };

  static ConfigFile parse(const std::string& text, const std::string& name) {
    ConfigFile cfg;
    cfg.name_ = name;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      const std::string trimmed = trim(line);
      if (trimmed.empty()) continue;
      if (trimmed.front() == '[') {
        if (trimmed.back() != ']') {
          throw ConfigError(name + ":" + std::to_string(lineno) +
                            ": unterminated section header");
        }
        section = trim(trimmed.substr(1, trimmed.size() - 2));
        if (section.empty()) {
          throw ConfigError(name + ":" + std::to_string(lineno) +
                            ": empty section name");
        }
        if (!cfg.sections_.count(section)) cfg.order_.push_back(section);
        cfg.sections_[section];  // create
        continue;
      }
      const auto eq = trimmed.find('=');
      if (eq == std::string::npos) {
        throw ConfigError(name + ":" + std::to_string(lineno) +
                          ": expected key = value");
      }
      const std::string key = trim(trimmed.substr(0, eq));
      const std::string value = trim(trimmed.substr(eq + 1));
      if (key.empty()) {
        throw ConfigError(name + ":" + std::to_string(lineno) + ": empty key");
      }
      if (section.empty()) {
        throw ConfigError(name + ":" + std::to_string(lineno) +
                          ": key outside any [section]");
      }
      auto& sec = cfg.sections_[section];
      if (sec.count(key)) {
        throw ConfigError(name + ":" + std::to_string(lineno) +
                          ": duplicate key '" + key + "'");
      }
      sec[key] = Entry{value, lineno};
    }
    return cfg;
  }

  static ConfigFile load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path);
  }

  bool has_section(const std::string& section) const {
    return sections_.count(section) != 0;
  }

  const std::vector<std::string>& section_order() const { return order_; }

  bool has(const std::string& section, const std::string& key) const {
    auto it = sections_.find(section);
    return it != sections_.end() && it->second.count(key) != 0;
  }

  std::string get_string(const std::string& section, const std::string& key) const {
    return entry(section, key).value;
  }

  std::string get_string_or(const std::string& section, const std::string& key,
                            const std::string& fallback) const {
    return has(section, key) ? get_string(section, key) : fallback;
  }

  double get_double(const std::string& section, const std::string& key) const {
    const Entry& e = entry(section, key);
    try {
      std::size_t pos = 0;
      const double v = std::stod(e.value, &pos);
      if (pos != e.value.size()) throw std::invalid_argument("trailing junk");
      return v;
    } catch (const std::exception&) {
      throw ConfigError(name_ + ":" + std::to_string(e.line) + ": '" + e.value +
                        "' is not a number (key '" + key + "')");
    }
  }

  double get_double_or(const std::string& section, const std::string& key,
                       double fallback) const {
    return has(section, key) ? get_double(section, key) : fallback;
  }

  long long get_int(const std::string& section, const std::string& key) const {
    const Entry& e = entry(section, key);
    try {
      std::size_t pos = 0;
      const long long v = std::stoll(e.value, &pos);
      if (pos != e.value.size()) throw std::invalid_argument("trailing junk");
      return v;
    } catch (const std::exception&) {
      throw ConfigError(name_ + ":" + std::to_string(e.line) + ": '" + e.value +
                        "' is not an integer (key '" + key + "')");
    }
  }

  long long get_int_or(const std::string& section, const std::string& key,
                       long long fallback) const {
    return has(section, key) ? get_int(section, key) : fallback;
  }

  const std::string& name() const { return name_; }

 private:
  static std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
  }

  const Entry& entry(const std::string& section, const std::string& key) const {
    auto it = sections_.find(section);
    if (it == sections_.end()) {
      throw ConfigError(name_ + ": missing section [" + section + "]");
    }
    auto kt = it->second.find(key);
    if (kt == it->second.end()) {
      throw ConfigError(name_ + ": missing key '" + key + "' in [" + section + "]");
    }
    return kt->second;
  }

  std::string name_;
  std::map<std::string, std::map<std::string, Entry>> sections_;
  std::vector<std::string> order_;
};

// ---------------------------------------------------------------------------
// Profile schema
// ---------------------------------------------------------------------------

struct Profile {
  enum class Kind { Msn, Digital };
  Kind kind = Kind::Msn;
  std::string label;
  NeuronConfig neuron;       // kind == Msn
  DigNeuronConfig digital;   // kind == Digital
};

inline DeviceParams load_device_params(const ConfigFile& cfg,
                                       const std::string& section = "device") {
  DeviceParams dev;
  if (!cfg.has_section(section)) return dev;
  dev.eta = cfg.get_double_or(section, "eta", dev.eta);
  dev.v_thermal = cfg.get_double_or(section, "v_thermal", dev.v_thermal);
  dev.q_charge = cfg.get_double_or(section, "q_charge", dev.q_charge);
  dev.a_vth = cfg.get_double_or(section, "a_vth", dev.a_vth);
  dev.s_vth = cfg.get_double_or(section, "s_vth", dev.s_vth);
  dev.flicker_k = cfg.get_double_or(section, "flicker_k", dev.flicker_k);
  dev.flicker_alpha = cfg.get_double_or(section, "flicker_alpha", dev.flicker_alpha);
  dev.i_spec_per_square =
      cfg.get_double_or(section, "i_spec_per_square", dev.i_spec_per_square);
  dev.validate();
  return dev;
}

inline TransistorGeometry load_geometry(const ConfigFile& cfg,
                                        const std::string& section,
                                        const TransistorGeometry& fallback) {
  if (!cfg.has_section(section)) return fallback;
  TransistorGeometry g;
  g.width = cfg.get_double(section, "width");
  g.length = cfg.get_double(section, "length");
  g.distance_dx = cfg.get_double_or(section, "distance_dx", 0.0);
  g.validate();
  return g;
}

inline MsTopology parse_topology(const std::string& s) {
  if (s == "ms_small") return MsTopology::MsSmall;
  if (s == "ms_feedback") return MsTopology::MsFeedback;
  if (s == "ms_large") return MsTopology::MsLarge;
  throw ConfigError("unknown topology '" + s +
                    "' (expected ms_small, ms_feedback or ms_large)");
}

inline MultiplierKind parse_multiplier_kind(const std::string& s) {
  if (s == "wallace_tree") return MultiplierKind::WallaceTree;
  if (s == "array_multiplier") return MultiplierKind::ArrayMultiplier;
  throw ConfigError("unknown multiplier kind '" + s + "'");
}

inline Profile load_profile_config(const ConfigFile& cfg) {
  Profile prof;
  prof.label = cfg.get_string_or("profile", "label", cfg.name());
  const std::string kind = cfg.get_string("profile", "kind");
  if (kind == "msn") {
    prof.kind = Profile::Kind::Msn;
    NeuronConfig& n = prof.neuron;
    n.device = load_device_params(cfg);
    SynapseConfig& s = n.synapse;
    s.precision_n = static_cast<int>(cfg.get_int("synapse", "precision_n"));
    s.i_unit = cfg.get_double("synapse", "i_unit");
    s.c_unit = cfg.get_double("synapse", "c_unit");
    s.c_coupling = cfg.get_double_or("synapse", "c_coupling", s.c_coupling);
    s.c_gg = cfg.get_double_or("synapse", "c_gg", s.c_gg);
    s.c_gd_per_slice = cfg.get_double_or("synapse", "c_gd_per_slice", s.c_gd_per_slice);
    s.vdd_ana = cfg.get_double_or("synapse", "vdd_ana", s.vdd_ana);
    s.swing_diff = cfg.get_double_or("synapse", "swing_diff", s.swing_diff);
    s.v_early_input = cfg.get_double_or("synapse", "v_early_input", s.v_early_input);
    s.v_early_load = cfg.get_double_or("synapse", "v_early_load", s.v_early_load);
    s.input_geometry = load_geometry(cfg, "synapse.input_geometry", s.input_geometry);
    s.load_geometry = load_geometry(cfg, "synapse.load_geometry", s.load_geometry);
    s.feedback_geometry =
        load_geometry(cfg, "synapse.feedback_geometry", s.feedback_geometry);
    s.tail_geometry = load_geometry(cfg, "synapse.tail_geometry", s.tail_geometry);
    n.topology = parse_topology(cfg.get_string("neuron", "topology"));
    n.fan_in_n = static_cast<int>(cfg.get_int_or("neuron", "fan_in_n", 1));
    n.feedback_r = cfg.get_double_or("neuron", "feedback_r", 0.0);
    n.validate();
  } else if (kind == "digital") {
    prof.kind = Profile::Kind::Digital;
    DigNeuronConfig& d = prof.digital;
    d.precision_n = static_cast<int>(cfg.get_int("digital", "precision_n"));
    d.multiplier_kind =
        parse_multiplier_kind(cfg.get_string("digital", "multiplier_kind"));
    d.vdd = cfg.get_double_or("digital", "vdd", d.vdd);
    d.activity_factor = cfg.get_double_or("digital", "activity_factor", d.activity_factor);
    d.switched_cap_total = cfg.get_double("digital", "switched_cap_total");
    d.leakage_per_transistor =
        cfg.get_double_or("digital", "leakage_per_transistor", d.leakage_per_transistor);
    d.beta_p = cfg.get_double_or("digital", "beta_p", d.beta_p);
    d.beta_n = cfg.get_double_or("digital", "beta_n", d.beta_n);
    d.vth_p = cfg.get_double_or("digital", "vth_p", d.vth_p);
    d.vth_n = cfg.get_double_or("digital", "vth_n", d.vth_n);
    d.load_cap = cfg.get_double("digital", "load_cap");
    d.leak_ref_vdd = cfg.get_double_or("digital", "leak_ref_vdd", d.leak_ref_vdd);
    d.validate();
  } else {
    throw ConfigError(cfg.name() + ": [profile] kind must be 'msn' or 'digital'");
  }
  return prof;
}

inline Profile load_profile(const std::string& path) {
  return load_profile_config(ConfigFile::load(path));
}

// Corner files: one [corner.<LABEL>] section per corner, multipliers
// relative to the calibrated nominal profile.
inline std::vector<CornerSet> load_corners(const std::string& path) {
  const ConfigFile cfg = ConfigFile::load(path);
  std::vector<CornerSet> corners;
  for (const auto& section : cfg.section_order()) {
    if (section.rfind("corner.", 0) != 0) continue;
    CornerSet c;
    c.label = section.substr(7);
    c.tail_current_factor = cfg.get_double_or(section, "tail_current_factor", 1.0);
    c.load_gm_factor = cfg.get_double_or(section, "load_gm_factor", 1.0);
    c.input_gm_factor = cfg.get_double_or(section, "input_gm_factor", 1.0);
    c.feedback_g_factor = cfg.get_double_or(section, "feedback_g_factor", 1.0);
    c.vth_sigma_factor = cfg.get_double_or(section, "vth_sigma_factor", 1.0);
    corners.push_back(std::move(c));
  }
  if (corners.empty()) {
    throw ConfigError(path + ": no [corner.<label>] sections found");
  }
  return corners;
}

}  // namespace neuromac
