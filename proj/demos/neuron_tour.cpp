// A short tour of the library API: build a mixed-signal neuron in code,
// evaluate its figure of merit, look at the weight-DAC linearity, run a
// small mismatch campaign and print the closed-form energy-ratio constants.
//
//   ./build/demos/neuron_tour [profiles-dir]
//
// With a profiles directory argument the tour also evaluates the shipped
// feedback calibration across its process corners.

#include <cstdio>
#include <string>

#include "neuromac/analysis.hpp"
#include "neuromac/config.hpp"
#include "neuromac/dac.hpp"
#include "neuromac/montecarlo.hpp"
#include "neuromac/report.hpp"

using namespace neuromac;

int main(int argc, char** argv) {
  // An 8-bit small-signal multiplier, assembled field by field.
  NeuronConfig cfg;
  cfg.topology = MsTopology::MsSmall;
  cfg.synapse.precision_n = 8;
  cfg.synapse.i_unit = 100e-12;
  cfg.synapse.c_unit = 0.4e-15;
  cfg.synapse.input_geometry = {0.4e-6, 0.1e-6};
  cfg.synapse.load_geometry = {0.2e-6, 0.4e-6};

  const auto rep = evaluate_neuron(cfg);
  std::printf("small-signal 8-bit at %.0f pA unit current:\n",
              cfg.synapse.i_unit * 1e12);
  std::printf("  gain       %8.3f dB\n", rep.gain_db);
  std::printf("  bandwidth  %8.2f MHz\n", rep.bandwidth_hz / 1e6);
  std::printf("  power      %8.2f nW\n", rep.power_w * 1e9);
  std::printf("  energy     %8.2f fJ/MAC\n", rep.energy_per_mac_j * 1e15);
  std::printf("  noise      %8.3g V^2 in band\n", rep.integrated_noise_v2);
  std::printf("  offset     %8.2f mV (3-sigma)\n", rep.offset_3sigma_v * 1e3);

  // Retarget the same design to 100 MHz: constant energy, rescaled bias.
  const auto fast = evaluate_neuron(cfg, 100e6);
  std::printf("retargeted to 100 MHz: i_unit %.0f pA, energy still %.2f fJ\n",
              fast.i_unit_a * 1e12, fast.energy_per_mac_j * 1e15);

  // Weight-DAC linearity of the binary-weighted slices.
  const auto d = dnl_inl(dac_transfer(cfg));
  std::printf("weight DAC: worst |DNL| %.3f LSB, worst |INL| %.3f LSB\n",
              d.worst_dnl, d.worst_inl);

  // A quick mismatch campaign (threshold-voltage draws, seeded).
  McCampaignSpec mc;
  mc.config = cfg;
  mc.trials = 2000;
  mc.seed = 1;
  const auto offsets = run_offset_mc(mc);
  std::printf("mismatch MC (%d trials): 3-sigma output offset %.1f mV\n",
              mc.trials, offsets.three_sigma * 1e3);

  // Closed-form digital-vs-analog energy ratios at the published operating
  // points.
  RatioInputs in;
  std::printf("iso-frequency ratios: prefactor %.3f, dynamic x%.1f, "
              "with leakage x%.1f\n",
              supply_prefactor(in), ratio_case1_dynamic(in),
              ratio_case1_total(in).value);

  if (argc > 1) {
    const std::string dir = argv[1];
    const auto prof = load_profile(dir + "/msn-feedback-8b-tt.ini");
    const auto corners = load_corners(dir + "/corners-65nm.ini");
    std::printf("\n%s across corners:\n", prof.label.c_str());
    for (const auto& row : corner_analysis(prof.neuron, corners)) {
      if (!row.ok) continue;
      std::printf("  %-5s %6.2f nW  %6.1f MHz  %7.3f dB  %6.1f aJ/MAC\n",
                  row.corner.label.c_str(), row.report.power_w * 1e9,
                  row.report.bandwidth_hz / 1e6, row.report.gain_db,
                  row.report.energy_per_mac_j * 1e18);
    }
  }
  return 0;
}
