// Acceptance suite: one line per criterion, nonzero exit if any fails.
//
// Runs everything from the shipped calibration profiles and a generated
// IDX-format digit corpus, so the binary is self-contained. The network
// criteria train the 784x100x50x10 stack from scratch; expect a few minutes
// of CPU time on one core.

#include <cmath>
#include <limits>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "neuromac/analysis.hpp"
#include "neuromac/config.hpp"
#include "neuromac/dac.hpp"
#include "neuromac/io.hpp"
#include "neuromac/montecarlo.hpp"
#include "neuromac/network/data.hpp"
#include "neuromac/network/sweeps.hpp"
#include "neuromac/network/train.hpp"

using namespace neuromac;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void check(const std::string& name, bool pass, const std::string& detail) {
  std::printf("%s  %-46s %s\n", pass ? "PASS" : "FAIL", name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

bool within(double got, double want, double rel) {
  return std::fabs(got - want) <= rel * std::fabs(want);
}

std::string profiles_dir() {
  return std::string(NEUROMAC_SOURCE_DIR) + "/profiles";
}

NeuronConfig msn(const std::string& name) {
  return load_profile(profiles_dir() + "/" + name + ".ini").neuron;
}

DigNeuronConfig dig(const std::string& name) {
  return load_profile(profiles_dir() + "/" + name + ".ini").digital;
}

char fmt_buf[256];
template <typename... Args>
std::string fmt(const char* f, Args... args) {
  std::snprintf(fmt_buf, sizeof(fmt_buf), f, args...);
  return fmt_buf;
}

// --- 1. golden algebra -------------------------------------------------------

void criterion1() {
  RatioInputs in;
  const double pf = supply_prefactor(in);
  const double total = ratio_case1_total(in).value;
  const double dyn = ratio_case1_dynamic(in);
  RatioInputs ten = in;
  ten.fan_in_n = 10;
  const double case2 = ratio_case2(ten);
  const double snr8 = quantization_noise(8, 1.0).snr_db;
  const double snr3 = quantization_noise(3, 1.0).snr_db;
  const bool pass = std::fabs(pf - 0.75) <= 0.01 && std::fabs(total - 197.0) <= 2.0 &&
                    std::fabs(dyn - 79.0) <= 1.0 && case2 == total / 10.0 &&
                    std::fabs(snr8 - 50.0) <= 0.5 && std::fabs(snr3 - 20.0) <= 0.5;
  check("1 golden-algebra", pass,
        fmt("prefactor=%.4f case1_total=%.2f case1_dyn=%.2f case2x10=%.3f "
            "snr8=%.2f snr3=%.2f",
            pf, total, dyn, case2, snr8, snr3));
}

// --- 2. calibration consistency ----------------------------------------------

void criterion2() {
  const auto rep = evaluate_neuron(msn("msn-feedback-8b-tt"));
  const bool pass = within(rep.power_w, 20.8e-9, 0.05) &&
                    within(rep.bandwidth_hz, 292.2e6, 0.05) &&
                    within(rep.gain_db, -0.457, 0.05) &&
                    within(rep.integrated_noise_v2, 6.3e-8, 0.05) &&
                    rep.energy_per_mac_j == rep.power_w / rep.bandwidth_hz &&
                    within(rep.energy_per_mac_j, 71e-18, 0.05);
  check("2 typical-row-calibration", pass,
        fmt("p=%.3fnW bw=%.1fMHz gain=%.3fdB noise=%.3g e=%.1faJ",
            rep.power_w * 1e9, rep.bandwidth_hz / 1e6, rep.gain_db,
            rep.integrated_noise_v2, rep.energy_per_mac_j * 1e18));
}

// --- 3. noise invariances -----------------------------------------------------

void criterion3() {
  auto cfg = msn("msn-small-8b");
  double int_min = 1e99, int_max = 0.0, psd_rel_err = 0.0;
  double psd_ref = 0.0;
  for (double i_unit = 10e-12; i_unit <= 10.0001e-9; i_unit *= std::pow(10.0, 0.25)) {
    cfg.synapse.i_unit = i_unit;
    cfg.synapse.slice_currents.clear();
    const auto noise = msn_output_noise(cfg);
    int_min = std::min(int_min, noise.integrated_v2);
    int_max = std::max(int_max, noise.integrated_v2);
    const double product = noise.psd_v2_per_hz * i_unit;  // PSD ~ 1/I
    if (psd_ref == 0.0) psd_ref = product;
    psd_rel_err = std::max(psd_rel_err, std::fabs(product / psd_ref - 1.0));
  }
  const double int_var = int_max / int_min - 1.0;
  const bool pass = int_var < 0.01 && psd_rel_err < 0.001;
  check("3 noise-invariances", pass,
        fmt("integrated variation=%.3g, psd*I variation=%.3g", int_var,
            psd_rel_err));
}

// --- 4. energy curves ---------------------------------------------------------

double loglog_slope(const SweepSeries& s) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto& p : s.points) {
    if (!p.feasible) continue;
    const double x = std::log(p.frequency_hz), y = std::log(p.power_w);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void criterion4() {
  std::vector<SweepProfile> profs{{"small", msn("msn-small-8b")},
                                  {"feedback", msn("msn-feedback-8b-tt")}};
  const auto ms = power_frequency_sweep(profs, log_grid(1e5, 1e9, 33));
  bool slopes_ok = true, energy_ok = true;
  for (const auto& s : ms.series) {
    slopes_ok = slopes_ok && std::fabs(loglog_slope(s) - 1.0) <= 1e-3;
    double e_min = 1e99, e_max = 0.0;
    for (const auto& p : s.points) {
      e_min = std::min(e_min, p.energy_j);
      e_max = std::max(e_max, p.energy_j);
    }
    energy_ok = energy_ok && (e_max / e_min - 1.0) < 1e-6;
  }

  const auto am8 = dig("dig-am-8b-65nm");
  const auto dig_sweep =
      power_frequency_sweep({{"am8", am8}}, log_grid(1e6, 1.6e8, 161));
  double best_e = 1e99, best_f = 0.0;
  for (const auto& p : dig_sweep.series[0].points) {
    if (p.feasible && p.energy_j < best_e) {
      best_e = p.energy_j;
      best_f = p.frequency_hz;
    }
  }
  const bool min_ok = best_f >= 5e6 && best_f <= 20e6 && within(best_e, 87e-15, 0.10);

  const auto cross = crossover_frequency(msn("msn-large-8b"), am8);
  const bool cross_ok = cross.has_value() && *cross > 0.0;
  const bool pass = slopes_ok && energy_ok && min_ok && cross_ok;
  check("4 energy-curves", pass,
        fmt("slope_ok=%d const_ok=%d digital min %.1f fJ @ %.1f MHz, crossover=%.3f MHz",
            slopes_ok, energy_ok, best_e * 1e15, best_f / 1e6,
            cross ? *cross / 1e6 : -1.0));
}

// --- 5. Monte-Carlo offsets ---------------------------------------------------

void criterion5() {
  McCampaignSpec small;
  small.config = msn("msn-small-8b");
  small.trials = 10000;
  small.seed = 1;
  const auto s_small = run_offset_mc(small);

  McCampaignSpec fb = small;
  fb.config = msn("msn-feedback-8b-tt");
  const auto s_fb = run_offset_mc(fb);

  McCampaignSpec big = small;
  big.config.synapse.input_geometry.width *= 4.0;
  big.config.synapse.input_geometry.length *= 4.0;
  big.config.synapse.load_geometry.width *= 4.0;
  big.config.synapse.load_geometry.length *= 4.0;
  const auto s_big = run_offset_mc(big);
  const double ratio = s_big.three_sigma / s_small.three_sigma;
  const double se3 = 3.0 / std::sqrt(2.0 * 10000.0);  // 3x relative SE of sigma

  const bool pass = within(s_small.three_sigma, 98e-3, 0.10) &&
                    within(s_fb.three_sigma, 2.5e-3, 0.15) &&
                    std::fabs(ratio - 0.25) <= 0.25 * 2.0 * se3;
  check("5 monte-carlo-offsets", pass,
        fmt("3s(small)=%.2fmV 3s(fb)=%.3fmV area-x16 ratio=%.4f",
            s_small.three_sigma * 1e3, s_fb.three_sigma * 1e3, ratio));
}

// --- 6. DNL/INL ---------------------------------------------------------------

void criterion6() {
  McCampaignSpec spec;
  spec.config = msn("msn-small-8b");
  spec.trials = 500;
  spec.seed = 6;
  const auto s = run_dnl_mc(spec, 3.0);

  auto pure = spec;
  pure.config.device.i_spec_per_square =
      std::numeric_limits<double>::infinity();  // weak-inversion limit
  pure.config.device.a_vth = 0.0;
  pure.config.device.s_vth = 0.0;
  const auto p = run_dnl_mc(pure, 3.0);

  const bool pass = s.worst_dnl <= 0.5 && s.worst_inl <= 0.5 &&
                    s.no_missing_code && s.excluded_trials == 0 &&
                    p.worst_dnl <= 1e-12 && p.worst_inl <= 1e-12;
  check("6 dnl-inl", pass,
        fmt("worst|DNL|=%.3f worst|INL|=%.3f missing=%d pure=(%.1e,%.1e)",
            s.worst_dnl, s.worst_inl, !s.no_missing_code, p.worst_dnl,
            p.worst_inl));
}

// --- 7. THD -------------------------------------------------------------------

void criterion7() {
  const auto cfg = msn("msn-small-8b");
  const double t400 = thd(cfg, 0.4, 10);
  bool monotone = true;
  double prev = 0.0;
  for (double swing = 0.05; swing <= 0.85; swing += 0.05) {
    const double t = thd(cfg, swing, 10);
    monotone = monotone && t >= prev;
    prev = t;
  }
  const bool pass = t400 < 0.05 && monotone;
  check("7 thd", pass, fmt("thd@400mV=%.2f%% monotone=%d", 100 * t400, monotone));
}

// --- 8. pole-zero cancellation --------------------------------------------------

void criterion8() {
  auto cfg = msn("msn-feedback-8b-tt");
  cfg.feedback_r = 0.0;  // auto-solve for cancellation
  const auto pz = feedback_pole_zero(cfg);
  const double rel = std::fabs(pz.pole_hz - pz.zero_hz) /
                     std::max(pz.pole_hz, pz.zero_hz);
  const double bw = feedback_bandwidth(cfg);
  const double ol = open_loop_bandwidth(cfg);
  const bool pass = rel <= 1e-12 && bw > ol;
  check("8 pole-zero-cancellation", pass,
        fmt("pole=zero=%.4g Hz (rel gap %.1e), bw=%.3g > open-loop %.3g",
            pz.pole_hz, rel, bw, ol));
}

// --- 9. network suite -----------------------------------------------------------

struct NetworkArtifacts {
  QuantizedNetwork master;
  Dataset train_ds, test_ds;
};

NetworkArtifacts train_baseline() {
  const auto dir = (fs::temp_directory_path() / "neuromac-acceptance").string();
  fs::create_directories(dir);
  const auto paths = write_synth_corpus(dir, 20260808, 8000, 1500);
  NetworkArtifacts art;
  art.train_ds =
      load_mnist(paths.train_images, paths.train_labels, 0.4, Split::Train);
  art.test_ds = load_mnist(paths.test_images, paths.test_labels, 0.4, Split::Test);
  Hyper hyper;
  hyper.epochs = 30;
  hyper.lr_decay = 0.96;
  hyper.batch = 32;
  hyper.seed = 1;
  art.master = train("mnist_fcn", art.train_ds, hyper);
  return art;
}

void criterion9(const NetworkArtifacts& art) {
  // Frozen regression target for the baseline error on the digit corpus.
  const double master_err =
      evaluate(art.master, art.test_ds).classification_error_pct;
  const bool base_ok = master_err <= 3.5;

  const auto q16 = quantize(art.master, 16);
  const auto q8 = quantize(art.master, 8);
  const auto q2 = quantize(art.master, 2);
  const double e16 = evaluate(q16, art.test_ds).classification_error_pct;
  const double e8 = evaluate(q8, art.test_ds).classification_error_pct;
  const double e2 = evaluate(q2, art.test_ds).classification_error_pct;
  const bool quant_ok = (e8 - e16) <= 1.0 && e2 > 80.0;

  Hyper rh;
  rh.epochs = 3;
  rh.lr = 0.005;
  rh.batch = 32;
  rh.seed = 2;
  const auto q3 = retrain_incremental(art.master, 3, rh, art.train_ds);
  const double e3 = evaluate(q3, art.test_ds).classification_error_pct;

  NoiseModel nip1;
  nip1.nip_override = 1.0;
  const double e8_nip = evaluate(q8, art.test_ds, nip1, 91).classification_error_pct;
  const double e3_nip = evaluate(q3, art.test_ds, nip1, 92).classification_error_pct;
  const bool nip_ok = (e8_nip - e8) <= 2.5 && (e3_nip - e3) <= 6.0;

  std::vector<double> grid;
  for (double nip = 0.0; nip <= 5.001; nip += 0.5) grid.push_back(nip);
  const auto curve8 = nip_sweep(q8, art.test_ds, grid, 3, 17);
  const auto curve3 = nip_sweep(q3, art.test_ds, grid, 3, 17);
  bool ordering_ok = true;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    ordering_ok = ordering_ok && curve8[i].mean_error_pct <= curve3[i].mean_error_pct;
    if (i > 0) {
      // Mean error grows with the non-ideality, within one trial spread.
      const double slack =
          curve8[i].std_error_pct + curve8[i - 1].std_error_pct + 0.1;
      ordering_ok = ordering_ok &&
                    curve8[i].mean_error_pct >= curve8[i - 1].mean_error_pct - slack;
    }
  }

  const bool pass = base_ok && quant_ok && nip_ok && ordering_ok;
  check("9 network-suite", pass,
        fmt("base=%.2f%% e16=%.2f e8=%.2f e2=%.1f e3r=%.2f nip1: e8+%.2f e3+%.2f "
            "order8<3=%d",
            master_err, e16, e8, e2, e3, e8_nip - e8, e3_nip - e3, ordering_ok));
}

// --- 10. equivalence oracles ----------------------------------------------------

void criterion10(const NetworkArtifacts& art) {
  // (a) additive vs weight-scaling forms of the noisy MAC.
  CounterRng rng(7, "triples");
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const double w = 2.0 * rng.gaussian(3 * t);
    double v = 2.0 * rng.gaussian(3 * t + 1);
    if (std::fabs(v) < 1e-6) v = 1e-6;
    const double d = 0.1 * rng.gaussian(3 * t + 2);
    const double additive = w * (v + d);
    const double scaled = w * (1.0 + d / v) * v;
    worst = std::max(worst,
                     std::fabs(additive - scaled) /
                         std::max(std::fabs(additive), 1e-30));
  }
  const bool forms_ok = worst <= 1e-12;

  // (b) backprop versus central finite differences on 100 coordinates.
  QuantizedNetwork net = build_network("mnist_fcn");
  init_weights(&net, 99);
  const int items = 5;
  netdetail::GradBuffers bufs;
  bufs.init(net);
  Workspace ws;
  std::vector<double> dlogits;
  auto loss_of = [&](const QuantizedNetwork& n) {
    Workspace w2;
    std::vector<double> dl;
    double loss = 0.0;
    for (int i = 0; i < items; ++i) {
      forward(n, input_to_norm(n, art.train_ds.images[static_cast<std::size_t>(i)]),
              &w2);
      loss += netdetail::softmax_ce(
          w2.acts.back(), art.train_ds.labels[static_cast<std::size_t>(i)], &dl);
    }
    return loss;
  };
  for (int i = 0; i < items; ++i) {
    forward(net, input_to_norm(net, art.train_ds.images[static_cast<std::size_t>(i)]),
            &ws);
    netdetail::softmax_ce(ws.acts.back(),
                          art.train_ds.labels[static_cast<std::size_t>(i)], &dlogits);
    netdetail::backward(net, ws, dlogits, &bufs);
  }
  CounterRng pick(3, "coords");
  double worst_grad = 0.0;
  int checked = 0;
  for (int t = 0; checked < 100; ++t) {
    const std::size_t li = pick.bits(2 * t) % net.layers.size();
    if (!net.layers[li].has_weights()) continue;
    const std::size_t wi = pick.bits(2 * t + 1) % net.layers[li].w.size();
    const double h = 1e-4;
    QuantizedNetwork plus = net, minus = net;
    plus.layers[li].w[wi] += h;
    plus.layers[li].wq = plus.layers[li].w;
    minus.layers[li].w[wi] -= h;
    minus.layers[li].wq = minus.layers[li].w;
    const double fd = (loss_of(plus) - loss_of(minus)) / (2.0 * h);
    const double bp = bufs.gw[li][wi];
    worst_grad = std::max(worst_grad, std::fabs(fd - bp) /
                                          std::max({std::fabs(fd), std::fabs(bp),
                                                    1e-8}));
    ++checked;
  }
  const bool grad_ok = worst_grad <= 1e-3;

  // (c) determinism across reruns and worker counts, library and CLI level.
  McCampaignSpec spec;
  spec.config = msn("msn-small-8b");
  spec.trials = 500;
  spec.seed = 42;
  const auto mc1 = run_offset_mc(spec, 1);
  const auto mc4 = run_offset_mc(spec, 4);
  bool determinism_ok = mc1.mean == mc4.mean && mc1.sigma == mc4.sigma &&
                        mc1.histogram == mc4.histogram;

  NoiseModel nm;
  nm.nip_override = 2.0;
  Dataset subset = art.test_ds;
  subset.images.resize(300);
  subset.labels.resize(300);
  const auto q8 = quantize(art.master, 8);
  const auto ev1 = evaluate(q8, subset, nm, 5, 1);
  const auto ev3 = evaluate(q8, subset, nm, 5, 3);
  determinism_ok = determinism_ok &&
                   ev1.classification_error_pct == ev3.classification_error_pct;

  const std::string cli = NEUROMAC_CLI_PATH;
  const std::string dir = (fs::temp_directory_path() / "neuromac-acceptance").string();
  const std::string spec_path = dir + "/acc-campaign.ini";
  {
    std::ofstream f(spec_path);
    f << "[campaign]\nprofile = msn-small-8b\ntrials = 300\nseed = 9\noutputs = "
         "offset\n";
  }
  auto run_mc = [&](const std::string& out, int jobs) {
    const std::string cmd = cli + " --profiles " + profiles_dir() + " --jobs " +
                            std::to_string(jobs) + " mc --spec " + spec_path +
                            " --output-dir " + out + " > /dev/null 2>&1";
    return std::system(cmd.c_str()) == 0;
  };
  auto slurp = [](const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  bool cli_ok = run_mc(dir + "/d1", 1) && run_mc(dir + "/d2", 4);
  cli_ok = cli_ok && slurp(dir + "/d1/msn-small-8b.mc.json") ==
                         slurp(dir + "/d2/msn-small-8b.mc.json") &&
           !slurp(dir + "/d1/msn-small-8b.mc.json").empty();

  const bool pass = forms_ok && grad_ok && determinism_ok && cli_ok;
  check("10 equivalence-oracles", pass,
        fmt("forms<=%.1e grad<=%.1e mc/jobs=%d cli/jobs=%d", worst, worst_grad,
            determinism_ok, cli_ok));
}

}  // namespace

int main() {
  std::printf("neuromac acceptance suite\n");
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  const auto artifacts = train_baseline();
  criterion9(artifacts);
  criterion10(artifacts);
  if (g_failures > 0) {
    std::printf("%d criterion(s) FAILED\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
