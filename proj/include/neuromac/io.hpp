#pragma once

// CSV/JSON emission. Numbers print in scientific notation with 10
// significant digits; JSON key order is fixed. Timestamps and other
// run-specific metadata go to a sidecar .meta.json so the main artifacts
// are byte-identical across reruns.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "neuromac/analysis.hpp"
#include "neuromac/errors.hpp"
#include "neuromac/montecarlo.hpp"
#include "neuromac/report.hpp"

namespace neuromac {

using ordered_json = nlohmann::ordered_json;

inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9e", v);
  return buf;
}

inline void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write output file: " + path);
  out << body;
}

inline void write_sidecar_metadata(const std::string& path,
                                   const ordered_json& extra) {
  ordered_json meta = extra;
  const auto now = std::chrono::system_clock::now();
  meta["generated_unix_ms"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch())
          .count();
  write_text_file(path + ".meta.json", meta.dump(2) + "\n");
}

// --- NeuronReport ----------------------------------------------------------

inline const std::vector<std::string>& report_fields() {
  static const std::vector<std::string> fields = {
      "label",          "topology",       "gain_db",
      "bandwidth_hz",   "power_w",        "energy_per_mac_j",
      "noise_psd_out",  "integrated_noise_v2", "offset_3sigma_v",
      "pole_hz",        "zero_hz",        "i_unit_a"};
  return fields;
}

inline std::string report_csv_header() {
  std::string line;
  for (const auto& f : report_fields()) {
    if (!line.empty()) line += ',';
    line += f;
  }
  return line + "\n";
}

inline std::string report_csv_row(const NeuronReport& r) {
  std::string line = r.label + ',' + r.topology;
  for (double v : {r.gain_db, r.bandwidth_hz, r.power_w, r.energy_per_mac_j,
                   r.noise_psd_out, r.integrated_noise_v2, r.offset_3sigma_v,
                   r.pole_hz, r.zero_hz, r.i_unit_a}) {
    line += ',' + fmt_double(v);
  }
  return line + "\n";
}

inline ordered_json report_json(const NeuronReport& r) {
  ordered_json j;
  j["label"] = r.label;
  j["topology"] = r.topology;
  j["gain_db"] = fmt_double(r.gain_db);
  j["bandwidth_hz"] = fmt_double(r.bandwidth_hz);
  j["power_w"] = fmt_double(r.power_w);
  j["energy_per_mac_j"] = fmt_double(r.energy_per_mac_j);
  j["noise_psd_out"] = fmt_double(r.noise_psd_out);
  j["integrated_noise_v2"] = fmt_double(r.integrated_noise_v2);
  j["offset_3sigma_v"] = fmt_double(r.offset_3sigma_v);
  j["pole_hz"] = fmt_double(r.pole_hz);
  j["zero_hz"] = fmt_double(r.zero_hz);
  j["i_unit_a"] = fmt_double(r.i_unit_a);
  return j;
}

// --- SweepResult ------------------------------------------------------------

inline std::string sweep_csv(const SweepSeries& s) {
  std::string body = "label,frequency_hz,power_w,energy_j,vdd,feasible\n";
  for (const auto& p : s.points) {
    body += s.label + ',' + fmt_double(p.frequency_hz) + ',' +
            fmt_double(p.power_w) + ',' + fmt_double(p.energy_j) + ',' +
            fmt_double(p.vdd) + ',' + (p.feasible ? "1" : "0") + "\n";
  }
  return body;
}

inline std::string sweep_csv_merged(const SweepResult& r) {
  std::string body = "label,frequency_hz,power_w,energy_j,vdd,feasible\n";
  for (const auto& s : r.series) {
    for (const auto& p : s.points) {
      body += s.label + ',' + fmt_double(p.frequency_hz) + ',' +
              fmt_double(p.power_w) + ',' + fmt_double(p.energy_j) + ',' +
              fmt_double(p.vdd) + ',' + (p.feasible ? "1" : "0") + "\n";
    }
  }
  return body;
}

inline ordered_json sweep_json(const SweepResult& r) {
  ordered_json j;
  for (const auto& s : r.series) {
    ordered_json rows = ordered_json::array();
    for (const auto& p : s.points) {
      ordered_json row;
      row["frequency_hz"] = fmt_double(p.frequency_hz);
      row["power_w"] = fmt_double(p.power_w);
      row["energy_j"] = fmt_double(p.energy_j);
      row["vdd"] = fmt_double(p.vdd);
      row["feasible"] = p.feasible;
      rows.push_back(row);
    }
    j[s.label] = rows;
  }
  return j;
}

// --- McSummary ---------------------------------------------------------------

inline std::string mc_histogram_csv(const McSummary& s) {
  std::string body = "bin_lo,bin_hi,count\n";
  const double width = (s.hist_hi - s.hist_lo) / kHistogramBins;
  for (int b = 0; b < static_cast<int>(s.histogram.size()); ++b) {
    body += fmt_double(s.hist_lo + b * width) + ',' +
            fmt_double(s.hist_lo + (b + 1) * width) + ',' +
            std::to_string(s.histogram[static_cast<std::size_t>(b)]) + "\n";
  }
  return body;
}

inline ordered_json mc_summary_json(const McSummary& s, const std::string& label) {
  ordered_json j;
  j["label"] = label;
  j["trials"] = s.trials;
  j["mean"] = fmt_double(s.mean);
  j["sigma"] = fmt_double(s.sigma);
  j["three_sigma"] = fmt_double(s.three_sigma);
  j["input_referred_three_sigma"] = fmt_double(s.input_referred_three_sigma);
  j["worst_dnl_lsb"] = fmt_double(s.worst_dnl);
  j["worst_inl_lsb"] = fmt_double(s.worst_inl);
  j["no_missing_code"] = s.no_missing_code;
  j["excluded_trials"] = s.excluded_trials;
  j["histogram_lo"] = fmt_double(s.hist_lo);
  j["histogram_hi"] = fmt_double(s.hist_hi);
  j["histogram"] = s.histogram;
  return j;
}

}  // namespace neuromac
