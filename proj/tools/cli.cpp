// Copyright 2026 The edgeroof Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "edgeroof/advisor.hpp"
#include "edgeroof/calibration.hpp"
#include "edgeroof/cost_model.hpp"
#include "edgeroof/error.hpp"
#include "edgeroof/model_io.hpp"
#include "edgeroof/report.hpp"
#include "edgeroof/roofline.hpp"
#include "edgeroof/shape_inference.hpp"
#include "edgeroof/svg_plot.hpp"

namespace edgeroof::cli {

namespace {

struct Globals {
  std::string act_costs;
  std::string format = "md";
  std::string out;
};

struct WorkloadArgs {
  std::string model;
  std::int64_t batch = 0;  // 0: model default
  std::string precision;   // empty: model precision
  bool train = false;
  std::int64_t unroll = 1;
};

void add_workload_options(CLI::App* cmd, WorkloadArgs& w, bool positional_model) {
  if (positional_model) {
    cmd->add_option("model", w.model, "Model file (.json IR or .onnx)")->required();
  } else {
    cmd->add_option("--model,-m", w.model, "Model file (.json IR or .onnx)")->required();
  }
  cmd->add_option("--batch,-b", w.batch, "Batch size (default: the model's)")->check(CLI::PositiveNumber);
  cmd->add_option("--precision,-p", w.precision, "Override precision: FP32, TF32, FP16, INT8");
  cmd->add_flag("--train", w.train, "Cost forward plus backward pass");
  cmd->add_option("--unroll", w.unroll, "LSTM weight re-read factor")->check(CLI::PositiveNumber);
}

struct Loaded {
  std::shared_ptr<const ModelGraph> graph;
  std::string name;
  Precision precision;
  CostOptions options;
  CostMode mode = CostMode::Inference;
};

Loaded load(const WorkloadArgs& w, const Globals& g) {
  Loaded l;
  l.graph = std::make_shared<const ModelGraph>(load_model_file(w.model));
  l.name = l.graph->name();
  l.precision = w.precision.empty() ? l.graph->precision() : Precision::parse(w.precision);
  if (!g.act_costs.empty()) l.options.activations = ActivationCostTable::from_json(read_text_file(g.act_costs));
  l.options.lstm_unroll = w.unroll;
  l.mode = w.train ? CostMode::Training : CostMode::Inference;
  return l;
}

WorkloadCost cost_of(const Loaded& l, std::int64_t batch) {
  auto shaped = infer_shapes(l.graph, batch > 0 ? batch : l.graph->default_batch());
  return aggregate_workload(shaped, l.mode, l.precision, l.options);
}

void emit(const std::string& text, const Globals& g, std::ostream& out) {
  if (g.out.empty()) {
    out << text;
  } else {
    write_text_file(g.out, text);
  }
}

WorkloadPoint parse_point(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ',');) parts.push_back(part);
  if (parts.size() < 3 || parts.size() > 4) {
    fail(ErrorCode::InvalidArgument, "--point expects label,ai,flops_per_s[,flops_per_j]");
  }
  WorkloadPoint p;
  p.label = parts[0];
  try {
    p.ai = std::stod(parts[1]);
    p.achieved_perf = std::stod(parts[2]);
    if (parts.size() == 4) p.achieved_eff = std::stod(parts[3]);
  } catch (const std::exception&) {
    fail(ErrorCode::InvalidArgument, "--point '" + text + "' has a malformed number");
  }
  if (!(p.ai > 0) || p.achieved_perf < 0 || p.achieved_eff < 0) {
    fail(ErrorCode::InvalidArgument, "--point '" + text + "' needs ai > 0 and non-negative rates");
  }
  return p;
}

std::string red(const std::string& s, const Environment& env) {
  return env.color ? "\033[31m" + s + "\033[0m" : s;
}

int exit_code_for(ErrorCode code) {
  switch (category_of(code)) {
    case ErrorCategory::Input:
      return kExitInput;
    case ErrorCategory::Infeasible:
      return kExitInfeasible;
    case ErrorCategory::Internal:
      return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace

bool color_allowed_by_env() { return std::getenv("PAGODA_NO_COLOR") == nullptr; }

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const Environment& env) {
  CLI::App app{"Roofline analysis of DNN workloads on edge accelerators", "edgeroof"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", "edgeroof 0.1.0");

  Globals g;
  app.add_option("--act-costs", g.act_costs, "JSON activation cost overrides, e.g. {\"gelu\": 8}");
  app.add_option("--format,-f", g.format, "Report format")->check(CLI::IsMember({"csv", "md", "json"}));
  app.add_option("--out", g.out, "Write the report to this file instead of stdout");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "FLOP, bytes, intensity and roofline predictions for a model");
  WorkloadArgs analyze_w;
  add_workload_options(analyze, analyze_w, true);
  std::vector<std::string> analyze_devices;
  std::string analyze_catalog, analyze_dump;
  analyze->add_option("--device,-d", analyze_devices, "Device config(s) to predict against");
  analyze->add_option("--catalog", analyze_catalog, "Mode catalog directory; one block per mode");
  analyze->add_option("--dump-layers", analyze_dump, "Also write the per-layer CSV here");

  // roofline
  auto* roofline = app.add_subcommand("roofline", "Plot time or energy rooflines as SVG");
  std::vector<std::string> roof_devices;
  std::string roof_catalog, roof_svg, roof_title;
  bool roof_energy = false, roof_no_static = false;
  std::vector<std::string> roof_points;
  std::vector<double> roof_ai_range;
  roofline->add_option("--device,-d", roof_devices, "Device config(s)");
  roofline->add_option("--catalog", roof_catalog, "Plot every mode of a catalog");
  roofline->add_flag("--energy", roof_energy, "Energy roofline instead of time");
  roofline->add_flag("--no-static", roof_no_static, "Energy roofline without static power");
  roofline->add_option("--svg", roof_svg, "SVG output path ('-' for stdout)")->required();
  roofline->add_option("--point", roof_points, "Overlay label,ai,flops_per_s[,flops_per_j]");
  roofline->add_option("--ai-range", roof_ai_range, "lo,hi")->delimiter(',')->expected(2);
  roofline->add_option("--title", roof_title, "Plot title");

  // calibrate
  auto* calibrate_cmd = app.add_subcommand("calibrate", "Fit a device config from measurement CSVs");
  std::string cal_dir, cal_mode, cal_out, cal_precision = "FP32", cal_device = "fitted";
  calibrate_cmd->add_option("--measurements", cal_dir, "Directory of <mode>.csv files, or one CSV")->required();
  calibrate_cmd->add_option("--mode", cal_mode, "Mode key c<cores>_cpu<mhz>_gpu<mhz>_mem<mhz>")->required();
  calibrate_cmd->add_option("-o,--config-out", cal_out, "Device config to write")->required();
  calibrate_cmd->add_option("--precision", cal_precision, "Precision of the measured kernels");
  calibrate_cmd->add_option("--device-name", cal_device, "Device name stored in the config");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Predict a model across every mode of a catalog");
  WorkloadArgs sweep_w;
  std::string sweep_catalog;
  add_workload_options(sweep, sweep_w, false);
  sweep->add_option("--catalog", sweep_catalog, "Mode catalog directory")->required();

  // optimize
  auto* optimize = app.add_subcommand("optimize", "Recommend a power mode under a latency budget");
  WorkloadArgs opt_w;
  std::string opt_catalog, opt_objective = "energy", opt_base, opt_profile;
  std::optional<double> opt_budget_ms;
  add_workload_options(optimize, opt_w, false);
  optimize->add_option("--catalog", opt_catalog, "Mode catalog directory")->required();
  optimize->add_option("--budget", opt_budget_ms, "Latency budget in milliseconds")->check(CLI::PositiveNumber);
  optimize->add_option("--objective", opt_objective, "energy or time")->check(CLI::IsMember({"energy", "time"}));
  optimize->add_option("--base", opt_base, "Reference mode for the slowdown estimate (default: fastest)");
  optimize->add_option("--profile", opt_profile, "Layer profile CSV layer_id,ai,runtime_fraction");

  // batch-sweep
  auto* batch_sweep = app.add_subcommand("batch-sweep", "Arithmetic intensity as batch size grows");
  WorkloadArgs bs_w;
  std::vector<std::int64_t> bs_batches;
  add_workload_options(batch_sweep, bs_w, false);
  batch_sweep->add_option("--batches", bs_batches, "Comma-separated batch sizes")->delimiter(',')->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion& e) {
    out << e.what() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << red("error: ", env) << e.what() << '\n';
    return kExitInput;
  }

  try {
    const auto format = parse_report_format(g.format);

    if (analyze->parsed()) {
      auto l = load(analyze_w, g);
      auto cost = cost_of(l, analyze_w.batch);
      if (!analyze_dump.empty()) write_text_file(analyze_dump, per_layer_csv(cost));
      std::string report;
      if (!analyze_catalog.empty()) {
        report = emit_report(cost, l.name, load_catalog(analyze_catalog, l.precision), format);
      } else {
        std::vector<DeviceRoofline> devices;
        for (const auto& path : analyze_devices) devices.push_back(load_device_config(path));
        report = emit_report(cost, l.name, std::span<const DeviceRoofline>(devices), format);
      }
      emit(report, g, out);
      return kExitOk;
    }

    if (roofline->parsed()) {
      PlotSpec spec;
      for (const auto& path : roof_devices) spec.rooflines.push_back(load_device_config(path));
      if (!roof_catalog.empty()) {
        for (const auto& [mode, d] : load_catalog(roof_catalog)) spec.rooflines.push_back(d);
      }
      if (spec.rooflines.empty()) fail(ErrorCode::EmptySpec, "roofline needs --device or --catalog");
      spec.variant = roof_no_static ? PlotVariant::EnergyNoStatic
                     : roof_energy  ? PlotVariant::Energy
                                    : PlotVariant::Time;
      for (const auto& p : roof_points) spec.points.push_back(parse_point(p));
      if (roof_ai_range.size() == 2) spec.ai_range = AxisRange{roof_ai_range[0], roof_ai_range[1]};
      spec.title = roof_title;
      auto svg = render_roofline_svg(spec);
      if (roof_svg == "-") {
        out << svg;
      } else {
        write_text_file(roof_svg, svg);
        emit(emit_diagnostics(spec.rooflines, format), g, out);
      }
      return kExitOk;
    }

    if (calibrate_cmd->parsed()) {
      auto mode = PowerMode::parse(cal_mode);
      std::filesystem::path src(cal_dir);
      if (std::filesystem::is_directory(src)) src /= cal_mode + ".csv";
      auto samples = load_measurements(src.string());
      auto peaks = fit_peaks(samples);
      auto pi0 = measure_static_power(samples);
      auto fit = fit_energy_coefficients(samples, pi0);
      auto device = build_device_roofline(peaks, pi0, fit, mode, Precision::parse(cal_precision), cal_device);
      write_text_file(cal_out, serialize_device_config(device));
      emit(emit_fit(device, fit, format), g, out);
      return kExitOk;
    }

    if (sweep->parsed()) {
      auto l = load(sweep_w, g);
      auto cost = cost_of(l, sweep_w.batch);
      auto catalog = load_catalog(sweep_catalog, l.precision);
      emit(emit_sweep(sweep_modes(catalog, cost.total), l.name, format), g, out);
      return kExitOk;
    }

    if (optimize->parsed()) {
      auto l = load(opt_w, g);
      auto cost = cost_of(l, opt_w.batch);
      auto catalog = load_catalog(opt_catalog, l.precision);
      auto objective = opt_objective == "time" ? Objective::MinTime : Objective::MinEnergy;
      std::optional<double> budget_s;
      if (opt_budget_ms) budget_s = *opt_budget_ms / 1e3;
      auto rec = recommend_mode(catalog, cost.total, budget_s, objective);

      PowerMode base_mode = opt_base.empty() ? recommend_mode(catalog, cost.total, std::nullopt, Objective::MinTime).row.mode
                                             : PowerMode::parse(opt_base);
      auto base_it = catalog.find(base_mode);
      if (base_it == catalog.end()) fail(ErrorCode::InvalidArgument, "base mode " + base_mode.key() + " is not in the catalog");
      auto profile = opt_profile.empty() ? profile_from_workload(cost, base_it->second)
                                         : parse_layer_profile(read_text_file(opt_profile));
      auto estimate = predict_layerwise_degradation(profile, base_it->second, catalog.at(rec.row.mode));
      emit(emit_recommendation(rec, objective, l.name, estimate, &base_mode, format), g, out);
      return kExitOk;
    }

    if (batch_sweep->parsed()) {
      auto l = load(bs_w, g);
      auto result = batch_ai_sweep(*l.graph, bs_batches, l.mode, l.precision, l.options);
      emit(emit_batch_sweep(result, l.name, format), g, out);
      return kExitOk;
    }
  } catch (const Error& e) {
    err << red("error: ", env) << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << red("internal error: ", env) << e.what() << '\n';
    return kExitInternal;
  }
  err << red("error: ", env) << "no command given\n";
  return kExitInput;
}

}  // namespace edgeroof::cli
