#pragma once

// Shared test access to the shipped calibration profiles.

#include <string>
#include <vector>

#include "neuromac/config.hpp"

namespace testutil {

inline std::string source_dir() { return NEUROMAC_SOURCE_DIR; }

inline std::string profile_path(const std::string& name) {
  return source_dir() + "/profiles/" + name + ".ini";
}

inline neuromac::Profile profile(const std::string& name) {
  return neuromac::load_profile(profile_path(name));
}

inline neuromac::NeuronConfig msn_profile(const std::string& name) {
  const auto p = profile(name);
  return p.neuron;
}

inline neuromac::DigNeuronConfig dig_profile(const std::string& name) {
  const auto p = profile(name);
  return p.digital;
}

inline std::vector<neuromac::CornerSet> corners() {
  return neuromac::load_corners(profile_path("corners-65nm"));
}

inline neuromac::CornerSet corner(const std::string& label) {
  for (const auto& c : corners()) {
    if (c.label == label) return c;
  }
  throw neuromac::ConfigError("test corner not found: " + label);
}

}  // namespace testutil
