// neuromac: behavioral design-space exploration for MAC-based neurons.
//
// Subcommands wire the calibrated profiles to the circuit models, the
// Monte-Carlo engines and the quantized-network pipeline, and emit
// plot-ready CSV/JSON. Exit codes: 0 success, 1 internal error, 2
// user/config error, 3 golden-check failure.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "neuromac/analysis.hpp"
#include "neuromac/config.hpp"
#include "neuromac/dac.hpp"
#include "neuromac/io.hpp"
#include "neuromac/montecarlo.hpp"
#include "neuromac/network/checkpoint.hpp"
#include "neuromac/network/data.hpp"
#include "neuromac/network/sweeps.hpp"
#include "neuromac/network/train.hpp"
#include "neuromac/parallel.hpp"

namespace fs = std::filesystem;
using namespace neuromac;

namespace {

std::string resolve_profiles_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("NEUROMAC_PROFILES")) return env;
  for (const char* candidate : {"profiles", "../profiles"}) {
    if (fs::is_directory(candidate)) return candidate;
  }
  throw ConfigError(
      "no profile directory found (use --profiles, NEUROMAC_PROFILES, or run "
      "from the repo root)");
}

std::string resolve_output_dir(const std::string& flag) {
  std::string dir = flag;
  if (dir.empty()) {
    if (const char* env = std::getenv("NEUROMAC_OUTPUT_DIR")) dir = env;
  }
  if (dir.empty()) dir = ".";
  fs::create_directories(dir);
  return dir;
}

Profile load_named_profile(const std::string& dir, const std::string& name) {
  const fs::path path = fs::path(dir) / (name + ".ini");
  if (!fs::exists(path)) {
    throw ConfigError("profile '" + name + "' not found at " + path.string());
  }
  return load_profile(path.string());
}

std::vector<double> parse_grid(const std::string& spec) {
  // "start:stop:step", inclusive endpoints.
  const auto c1 = spec.find(':');
  const auto c2 = spec.find(':', c1 == std::string::npos ? 0 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos) {
    throw ConfigError("grid must be start:stop:step, got '" + spec + "'");
  }
  double start = 0, stop = 0, step = 0;
  try {
    start = std::stod(spec.substr(0, c1));
    stop = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
    step = std::stod(spec.substr(c2 + 1));
  } catch (const std::exception&) {
    throw ConfigError("grid fields must be numbers, got '" + spec + "'");
  }
  if (step <= 0.0 || stop < start) throw ConfigError("bad grid '" + spec + "'");
  std::vector<double> grid;
  for (double v = start; v <= stop + 1e-9 * step; v += step) grid.push_back(v);
  return grid;
}

void emit(const std::string& body, const std::string& out_path,
          const ordered_json& meta) {
  if (out_path.empty()) {
    std::cout << body;
  } else {
    write_text_file(out_path, body);
    write_sidecar_metadata(out_path, meta);
  }
}

int run(int argc, char** argv) {
  CLI::App app{"Behavioral DSE toolkit for MAC-based neuromorphic neurons"};
  app.require_subcommand(1);

  std::string profiles_flag, outdir_flag, format = "csv", out_path;
  int jobs = 0;
  app.add_option("--profiles", profiles_flag, "Profile directory");
  app.add_option("--jobs", jobs, "Worker cap (default: available parallelism)");

  // --- show-defaults
  auto* cmd_defaults = app.add_subcommand("show-defaults",
                                          "Print the built-in device parameters");

  // --- report
  auto* cmd_report = app.add_subcommand("report", "Evaluate one neuron profile");
  std::string rep_profile, rep_corner, rep_corners_file;
  double rep_freq = 0.0;
  cmd_report->add_option("--profile", rep_profile, "Profile name")->required();
  cmd_report->add_option("--freq", rep_freq, "Target frequency (Hz); 0 = nominal bias");
  cmd_report->add_option("--corner", rep_corner, "Corner label (needs --corners)");
  cmd_report->add_option("--corners", rep_corners_file, "Corner file name");
  cmd_report->add_option("--format", format, "csv or json");
  cmd_report->add_option("--out", out_path, "Write to file instead of stdout");

  // --- corners
  auto* cmd_corners = app.add_subcommand("corners", "Corner table for a profile");
  std::string cor_profile, cor_file = "corners-65nm";
  cmd_corners->add_option("--profile", cor_profile, "Profile name")->required();
  cmd_corners->add_option("--corners", cor_file, "Corner file name");
  cmd_corners->add_option("--format", format, "csv or json");
  cmd_corners->add_option("--out", out_path, "Write to file instead of stdout");

  // --- sweep
  auto* cmd_sweep = app.add_subcommand("sweep", "Power/energy frequency sweep");
  std::vector<std::string> sweep_profiles;
  double f_min = 1e4, f_max = 1e9;
  int points = 41;
  cmd_sweep->add_option("--profiles", sweep_profiles, "Profile names")
      ->required()
      ->delimiter(',');
  cmd_sweep->add_option("--fmin", f_min, "Grid start (Hz)");
  cmd_sweep->add_option("--fmax", f_max, "Grid end (Hz)");
  cmd_sweep->add_option("--points", points, "Grid points");
  cmd_sweep->add_option("--format", format, "csv or json");
  cmd_sweep->add_option("--output-dir", outdir_flag, "Output directory");

  // --- mc
  auto* cmd_mc = app.add_subcommand("mc", "Monte-Carlo mismatch campaign");
  std::string mc_spec_path;
  std::optional<std::uint64_t> mc_seed;
  bool mc_worst_case = false;
  cmd_mc->add_option("--spec", mc_spec_path, "Campaign spec file")->required();
  cmd_mc->add_option("--seed", mc_seed, "Override the campaign file's seed");
  cmd_mc->add_flag("--worst-case", mc_worst_case,
                   "Also evaluate sign-extreme mismatch corners (small N)");
  cmd_mc->add_option("--output-dir", outdir_flag, "Output directory");

  // --- golden
  auto* cmd_golden = app.add_subcommand(
      "golden", "Check the closed-form energy-ratio and SNR constants");

  // --- make-synth
  auto* cmd_synth = app.add_subcommand("make-synth",
                                       "Generate the synthetic digit corpus (IDX)");
  std::string synth_dir = "data";
  int synth_train = 6000, synth_test = 1500;
  std::uint64_t synth_seed = 1;
  cmd_synth->add_option("--out", synth_dir, "Output directory");
  cmd_synth->add_option("--train", synth_train, "Training images");
  cmd_synth->add_option("--test", synth_test, "Test images");
  cmd_synth->add_option("--seed", synth_seed, "Corpus seed");

  // --- train
  auto* cmd_train = app.add_subcommand("train", "Train a master network");
  std::string train_arch = "mnist_fcn", train_data_dir, train_out = "model.msnn";
  std::string train_act = "mstanh";
  Hyper hyper;
  cmd_train->add_option("--arch", train_arch, "Architecture tag");
  cmd_train->add_option("--data", train_data_dir, "IDX data directory")->required();
  cmd_train->add_option("--out", train_out, "Checkpoint path");
  cmd_train->add_option("--epochs", hyper.epochs, "Epochs");
  cmd_train->add_option("--lr", hyper.lr, "Learning rate");
  cmd_train->add_option("--batch", hyper.batch, "Minibatch size");
  cmd_train->add_option("--seed", hyper.seed, "Training seed");
  cmd_train->add_option("--activation", train_act, "mstanh or relu");

  // --- quantize
  auto* cmd_quant = app.add_subcommand("quantize", "Quantize a checkpoint");
  std::string quant_in, quant_out;
  int quant_bits = 8;
  bool quant_retrain = false;
  std::string quant_data_dir;
  cmd_quant->add_option("--model", quant_in, "Input checkpoint")->required();
  cmd_quant->add_option("--bits", quant_bits, "Target bit width")->required();
  cmd_quant->add_option("--out", quant_out, "Output checkpoint")->required();
  cmd_quant->add_flag("--retrain", quant_retrain,
                      "Incremental quantization-aware retraining (bits in [3,6])");
  cmd_quant->add_option("--data", quant_data_dir, "Training data for --retrain");
  cmd_quant->add_option("--epochs", hyper.epochs, "Retraining epochs per step");
  cmd_quant->add_option("--lr", hyper.lr, "Retraining learning rate");
  cmd_quant->add_option("--seed", hyper.seed, "Retraining seed");

  // --- eval
  auto* cmd_eval = app.add_subcommand("eval", "Evaluate a checkpoint on test data");
  std::string eval_model, eval_data_dir, eval_noise_profile;
  double eval_nip = 0.0;
  std::uint64_t eval_seed = 1;
  cmd_eval->add_option("--model", eval_model, "Checkpoint")->required();
  cmd_eval->add_option("--data", eval_data_dir, "IDX data directory")->required();
  cmd_eval->add_option("--nip", eval_nip, "Non-ideality percentage");
  cmd_eval->add_option("--noise-profile", eval_noise_profile,
                       "Tie noise/offset to a circuit profile");
  cmd_eval->add_option("--seed", eval_seed, "Noise seed");
  cmd_eval->add_option("--format", format, "csv or json");
  cmd_eval->add_option("--out", out_path, "Write to file instead of stdout");

  // --- nip-sweep
  auto* cmd_nip = app.add_subcommand("nip-sweep", "Error vs non-ideality percentage");
  std::string nip_model, nip_data_dir, nip_grid_spec = "0:5:0.5";
  int nip_bits = 0, nip_trials = 3;
  std::uint64_t nip_seed = 1;
  cmd_nip->add_option("--model", nip_model, "Checkpoint")->required();
  cmd_nip->add_option("--data", nip_data_dir, "IDX data directory")->required();
  cmd_nip->add_option("--bits", nip_bits, "Quantize to this precision first");
  cmd_nip->add_option("--grid", nip_grid_spec, "start:stop:step (percent)");
  cmd_nip->add_option("--trials", nip_trials, "Noise trials per point");
  cmd_nip->add_option("--seed", nip_seed, "Sweep seed");
  cmd_nip->add_option("--format", format, "csv or json");
  cmd_nip->add_option("--out", out_path, "Write to file instead of stdout");

  // --- precision-sweep
  auto* cmd_prec = app.add_subcommand("precision-sweep", "Error vs bit width");
  std::string prec_arch = "mnist_fcn", prec_data_dir;
  std::vector<int> prec_bits{16, 12, 10, 8, 6, 5, 4, 3, 2};
  cmd_prec->add_option("--arch", prec_arch, "Architecture tag");
  cmd_prec->add_option("--data", prec_data_dir, "IDX data directory")->required();
  cmd_prec->add_option("--bits", prec_bits, "Bit widths")->delimiter(',');
  cmd_prec->add_option("--epochs", hyper.epochs, "Training epochs");
  cmd_prec->add_option("--seed", hyper.seed, "Training seed");
  cmd_prec->add_option("--format", format, "csv or json");
  cmd_prec->add_option("--out", out_path, "Write to file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // unknown flags and malformed input are user errors
  }
  if (jobs <= 0) jobs = default_jobs();

  auto load_dataset_pair = [&](const std::string& dir) {
    const auto train_ds =
        load_mnist(dir + "/train-images-idx3-ubyte", dir + "/train-labels-idx1-ubyte",
                   0.4, Split::Train);
    const auto test_ds =
        load_mnist(dir + "/t10k-images-idx3-ubyte", dir + "/t10k-labels-idx1-ubyte",
                   0.4, Split::Test);
    return std::make_pair(train_ds, test_ds);
  };

  if (*cmd_defaults) {
    DeviceParams d;
    ordered_json j;
    j["eta"] = d.eta;
    j["v_thermal"] = d.v_thermal;
    j["q_charge"] = fmt_double(d.q_charge);
    j["a_vth"] = fmt_double(d.a_vth);
    j["s_vth"] = fmt_double(d.s_vth);
    j["flicker_k"] = fmt_double(d.flicker_k);
    j["flicker_alpha"] = d.flicker_alpha;
    j["i_spec_per_square"] = fmt_double(d.i_spec_per_square);
    std::cout << j.dump(2) << "\n";
    return 0;
  }

  if (*cmd_report) {
    const auto dir = resolve_profiles_dir(profiles_flag);
    const auto prof = load_named_profile(dir, rep_profile);
    NeuronReport rep;
    if (prof.kind == Profile::Kind::Msn) {
      CornerSet corner;
      if (!rep_corner.empty()) {
        const auto corners = load_corners(
            (fs::path(dir) / ((rep_corners_file.empty() ? "corners-65nm"
                                                        : rep_corners_file) +
                              ".ini"))
                .string());
        bool found = false;
        for (const auto& c : corners) {
          if (c.label == rep_corner) {
            corner = c;
            found = true;
          }
        }
        if (!found) throw ConfigError("corner '" + rep_corner + "' not found");
      }
      rep = evaluate_neuron(prof.neuron, rep_freq, corner);
    } else {
      rep = evaluate_dig_neuron(prof.digital,
                                rep_freq > 0 ? rep_freq : dig_max_frequency(prof.digital));
    }
    rep.label = prof.label;
    ordered_json meta{{"command", "report"}, {"profile", rep_profile}};
    if (format == "json") {
      emit(report_json(rep).dump(2) + "\n", out_path, meta);
    } else {
      emit(report_csv_header() + report_csv_row(rep), out_path, meta);
    }
    return 0;
  }

  if (*cmd_corners) {
    const auto dir = resolve_profiles_dir(profiles_flag);
    const auto prof = load_named_profile(dir, cor_profile);
    if (prof.kind != Profile::Kind::Msn) {
      throw ConfigError("corners: profile must be mixed-signal");
    }
    const auto corners =
        load_corners((fs::path(dir) / (cor_file + ".ini")).string());
    const auto rows = corner_analysis(prof.neuron, corners);
    std::string csv = report_csv_header();
    ordered_json j = ordered_json::array();
    for (const auto& row : rows) {
      if (!row.ok) {
        throw DegenerateCompensation("corner " + row.corner.label + ": " + row.error);
      }
      csv += report_csv_row(row.report);
      j.push_back(report_json(row.report));
    }
    ordered_json meta{{"command", "corners"}, {"profile", cor_profile}};
    emit(format == "json" ? j.dump(2) + "\n" : csv, out_path, meta);
    return 0;
  }

  if (*cmd_sweep) {
    const auto dir = resolve_profiles_dir(profiles_flag);
    const auto outdir = resolve_output_dir(outdir_flag);
    std::vector<SweepProfile> profs;
    for (const auto& name : sweep_profiles) {
      const auto p = load_named_profile(dir, name);
      if (p.kind == Profile::Kind::Msn) {
        profs.push_back({p.label, p.neuron});
      } else {
        profs.push_back({p.label, p.digital});
      }
    }
    const auto result = power_frequency_sweep(profs, log_grid(f_min, f_max, points));
    ordered_json meta{{"command", "sweep"}};
    for (const auto& series : result.series) {
      const std::string path = outdir + "/sweep-" + series.label + ".csv";
      write_text_file(path, sweep_csv(series));
      write_sidecar_metadata(path, meta);
    }
    const std::string merged = outdir + "/sweep-merged." + format;
    write_text_file(merged, format == "json" ? sweep_json(result).dump(2) + "\n"
                                             : sweep_csv_merged(result));
    write_sidecar_metadata(merged, meta);
    std::cout << "wrote " << result.series.size() << " sweep series to " << outdir
              << "\n";
    return 0;
  }

  if (*cmd_mc) {
    const auto dir = resolve_profiles_dir(profiles_flag);
    const auto outdir = resolve_output_dir(outdir_flag);
    const auto spec_cfg = ConfigFile::load(mc_spec_path);
    const auto prof =
        load_named_profile(dir, spec_cfg.get_string("campaign", "profile"));
    if (prof.kind != Profile::Kind::Msn) {
      throw ConfigError("mc: campaign profile must be mixed-signal");
    }
    McCampaignSpec spec;
    spec.config = prof.neuron;
    spec.label = prof.label;
    spec.trials = static_cast<int>(spec_cfg.get_int_or("campaign", "trials", 1000));
    spec.seed = static_cast<std::uint64_t>(spec_cfg.get_int_or("campaign", "seed", 1));
    if (mc_seed) spec.seed = *mc_seed;
    spec.sigma_clip = spec_cfg.get_double_or("campaign", "sigma_clip", 3.0);
    const std::string outputs = spec_cfg.get_string_or("campaign", "outputs", "offset");

    ordered_json top;
    top["label"] = spec.label;
    top["seed"] = spec.seed;
    top["trials"] = spec.trials;
    auto has = [&](const char* what) {
      return outputs.find(what) != std::string::npos;
    };
    if (has("offset")) {
      const auto s = run_offset_mc(spec, jobs);
      top["offset"] = mc_summary_json(s, spec.label);
      write_text_file(outdir + "/" + spec.label + ".offset-hist.csv",
                      mc_histogram_csv(s));
    }
    if (has("dnl_inl")) {
      const auto s = run_dnl_mc(spec, spec.sigma_clip, jobs);
      top["dnl_inl"] = mc_summary_json(s, spec.label);
    }
    if (has("gain_spread")) {
      const auto s = run_gain_mc(spec, jobs);
      top["gain_spread"] = mc_summary_json(s, spec.label);
    }
    if (mc_worst_case && spec.config.synapse.precision_n <= 4) {
      // Sign-extreme corners of the tail deviations as a clip cross-check.
      const auto geoms = device_geometries(spec.config);
      double worst = 0.0;
      const int n = spec.config.synapse.precision_n;
      for (int mask = 0; mask < (1 << n); ++mask) {
        MismatchSample s;
        for (int j = 1; j <= n; ++j) {
          TransistorGeometry g = geoms.at("tail." + std::to_string(j));
          const double sig = vth_sigma(g, spec.config.device);
          s.delta_vth["tail." + std::to_string(j)] =
              (mask & (1 << (j - 1))) ? 3.0 * sig : -3.0 * sig;
        }
        const auto d = dnl_inl(dac_transfer(spec.config, s));
        worst = std::max(worst, std::max(d.worst_dnl, d.worst_inl));
      }
      top["worst_case_sign_extreme_lsb"] = fmt_double(worst);
    }
    const std::string path = outdir + "/" + spec.label + ".mc.json";
    write_text_file(path, top.dump(2) + "\n");
    write_sidecar_metadata(path, ordered_json{{"command", "mc"}});
    std::cout << top.dump(2) << "\n";
    return 0;
  }

  if (*cmd_golden) {
    RatioInputs in;  // defaults carry the published calibration
    in.c_unit = 0.4e-15;
    struct Check {
      const char* name;
      double got, want;
    };
    const double case1_total = ratio_case1_total(in).value;
    const Check checks[] = {
        {"supply_prefactor", supply_prefactor(in), 0.75},
        {"ratio_case1_dynamic", ratio_case1_dynamic(in), 79.0},
        {"ratio_case1_total", case1_total, 197.0},
        {"snr_8bit_db", quantization_noise(8, 1.0).snr_db, 50.0},
        {"snr_3bit_db", quantization_noise(3, 1.0).snr_db, 20.0},
    };
    bool ok = true;
    for (const auto& c : checks) {
      const double dev = std::fabs(c.got / c.want - 1.0);
      const bool pass = dev <= 0.01;
      ok = ok && pass;
      std::cout << (pass ? "PASS " : "FAIL ") << c.name << " got "
                << fmt_double(c.got) << " want ~" << c.want << " (dev "
                << fmt_double(100 * dev) << "%)\n";
    }
    RatioInputs case2 = in;
    case2.fan_in_n = 10;
    const double r2 = ratio_case2(case2);
    const bool exact = r2 == case1_total / 10.0;
    ok = ok && exact;
    std::cout << (exact ? "PASS " : "FAIL ") << "ratio_case2_divides_exactly got "
              << fmt_double(r2) << "\n";
    const auto cross = ratio_case1_total(in);
    if (!cross.consistent) {
      std::cout << "WARN calibration-mismatch: transistor vs capacitance form "
                   "differ by "
                << fmt_double(100 * cross.relative_gap) << "%\n";
    }
    std::cout << "INFO break-even fan-in (benefit reaches unity): "
              << fmt_double(break_even_fan_in(in)) << "\n";
    return ok ? 0 : 3;
  }

  if (*cmd_synth) {
    fs::create_directories(synth_dir);
    const auto paths = write_synth_corpus(synth_dir, synth_seed, synth_train,
                                          synth_test);
    std::cout << "wrote " << paths.train_images << " (+labels, +test set)\n";
    return 0;
  }

  if (*cmd_train) {
    const auto [train_ds, test_ds] = load_dataset_pair(train_data_dir);
    const ActKind act = train_act == "relu" ? ActKind::Relu : ActKind::MsTanh;
    const auto net = train(train_arch, train_ds, hyper, act);
    save_checkpoint(net, train_out);
    const auto result = evaluate(net, test_ds, {}, 0, jobs);
    std::cout << "trained " << train_arch << ": test error "
              << fmt_double(result.classification_error_pct) << "%\n";
    return 0;
  }

  if (*cmd_quant) {
    auto net = load_checkpoint(quant_in);
    if (quant_retrain) {
      if (quant_data_dir.empty()) {
        throw ConfigError("quantize --retrain needs --data");
      }
      const auto [train_ds, test_ds] = load_dataset_pair(quant_data_dir);
      (void)test_ds;
      net = retrain_incremental(net, quant_bits, hyper, train_ds);
    } else {
      net = quantize(net, quant_bits);
    }
    save_checkpoint(net, quant_out);
    std::cout << "wrote " << quant_out << " at " << quant_bits << " bits\n";
    return 0;
  }

  if (*cmd_eval) {
    const auto net = load_checkpoint(eval_model);
    const auto [train_ds, test_ds] = load_dataset_pair(eval_data_dir);
    (void)train_ds;
    NoiseModel nm;
    if (!eval_noise_profile.empty()) {
      const auto dir = resolve_profiles_dir(profiles_flag);
      const auto prof = load_named_profile(dir, eval_noise_profile);
      if (prof.kind != Profile::Kind::Msn) {
        throw ConfigError("eval: noise profile must be mixed-signal");
      }
      nm = NoiseModel::from_profile(prof.neuron, eval_seed);
    }
    if (eval_nip > 0.0) nm.nip_override = eval_nip;
    const auto result = evaluate(net, test_ds, nm, eval_seed, jobs);
    ordered_json j;
    j["architecture"] = net.architecture_tag;
    j["bit_width"] = result.bit_width;
    j["nip"] = result.nip;
    j["seed"] = result.seed;
    j["items"] = result.items;
    j["classification_error_pct"] = fmt_double(result.classification_error_pct);
    ordered_json per = ordered_json::array();
    for (double e : result.per_class_errors) per.push_back(fmt_double(e));
    j["per_class_errors_pct"] = per;
    if (format == "json") {
      emit(j.dump(2) + "\n", out_path, ordered_json{{"command", "eval"}});
    } else {
      std::string csv = "bit_width,nip,seed,items,classification_error_pct\n";
      csv += std::to_string(result.bit_width) + ',' + fmt_double(result.nip) + ',' +
             std::to_string(result.seed) + ',' + std::to_string(result.items) +
             ',' + fmt_double(result.classification_error_pct) + "\n";
      emit(csv, out_path, ordered_json{{"command", "eval"}});
    }
    return 0;
  }

  if (*cmd_nip) {
    auto net = load_checkpoint(nip_model);
    if (nip_bits > 0) net = quantize(net, nip_bits);
    const auto [train_ds, test_ds] = load_dataset_pair(nip_data_dir);
    (void)train_ds;
    const auto grid = parse_grid(nip_grid_spec);
    const auto points = nip_sweep(net, test_ds, grid, nip_trials, nip_seed, jobs);
    std::string csv = "nip_pct,mean_error_pct,std_error_pct\n";
    ordered_json rows = ordered_json::array();
    for (const auto& p : points) {
      csv += fmt_double(p.nip) + ',' + fmt_double(p.mean_error_pct) + ',' +
             fmt_double(p.std_error_pct) + "\n";
      rows.push_back(ordered_json{{"nip_pct", fmt_double(p.nip)},
                                  {"mean_error_pct", fmt_double(p.mean_error_pct)},
                                  {"std_error_pct", fmt_double(p.std_error_pct)}});
    }
    emit(format == "json" ? rows.dump(2) + "\n" : csv, out_path,
         ordered_json{{"command", "nip-sweep"}});
    return 0;
  }

  if (*cmd_prec) {
    const auto [train_ds, test_ds] = load_dataset_pair(prec_data_dir);
    const auto master = train(prec_arch, train_ds, hyper);
    Hyper retrain_hyper = hyper;
    retrain_hyper.epochs = std::max(2, hyper.epochs / 4);
    const auto points =
        precision_sweep(master, train_ds, test_ds, prec_bits, retrain_hyper, jobs);
    std::string csv = "bits,error_pct,retrained\n";
    ordered_json rows = ordered_json::array();
    for (const auto& p : points) {
      csv += std::to_string(p.bits) + ',' + fmt_double(p.error_pct) + ',' +
             (p.retrained ? "1" : "0") + "\n";
      rows.push_back(ordered_json{{"bits", p.bits},
                                  {"error_pct", fmt_double(p.error_pct)},
                                  {"retrained", p.retrained}});
    }
    emit(format == "json" ? rows.dump(2) + "\n" : csv, out_path,
         ordered_json{{"command", "precision-sweep"}});
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InfeasibleOperatingPoint& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
