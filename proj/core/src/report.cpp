// Copyright 2026 The edgeroof Authors.
// SPDX-License-Identifier: Apache-2.0

#include "edgeroof/report.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "edgeroof/error.hpp"
#include "edgeroof/format.hpp"

namespace edgeroof {

namespace {

using json = nlohmann::ordered_json;

std::string sig(double v) { return format_sig(v, 6); }
std::string sig4(double v) { return format_sig(v, 4); }

json num(double v, int digits = 6) {
  if (!std::isfinite(v)) return nullptr;
  return std::stod(format_sig(v, digits));
}

std::string csv_cell(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string md_cell(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += '\\';
    out += c;
  }
  return out;
}

class Table {
 public:
  explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  std::string csv() const {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + csv_cell(cells[i]);
      out += '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    return out;
  }

  std::string markdown() const {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
      out += "|";
      for (const auto& c : cells) out += " " + md_cell(c) + " |";
      out += '\n';
    };
    line(header_);
    out += "|";
    for (std::size_t i = 0; i < header_.size(); ++i) out += "---|";
    out += '\n';
    for (const auto& r : rows_) line(r);
    return out;
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

std::string ai_text(const CostBreakdown& c) { return c.mop() > 0 ? sig(arithmetic_intensity(c)) : ""; }

json ai_json(const CostBreakdown& c) { return c.mop() > 0 ? num(arithmetic_intensity(c)) : json(nullptr); }

struct DeviceBlock {
  const DeviceRoofline* device;
  std::optional<EnergyPrediction> prediction;  // absent for an empty workload
  RooflineDiagnostics diag;
  std::optional<Classification> classes;
};

DeviceBlock evaluate(const DeviceRoofline& d, const CostBreakdown& total) {
  DeviceBlock b{&d, std::nullopt, roofline_diagnostics(d), std::nullopt};
  if (total.flop() > 0 || total.mop() > 0) b.prediction = predict_energy(d, total);
  if (total.mop() > 0 && total.flop() > 0) b.classes = classify_workload(d, arithmetic_intensity(total));
  return b;
}

std::string class_text(const std::optional<Classification>& c, bool energy) {
  if (!c) return "";
  return std::string(to_string(energy ? c->energy_class : c->time_class));
}

json device_json(const DeviceBlock& b) {
  const auto& d = *b.device;
  json j;
  j["device"] = d.device;
  j["mode"] = d.mode.key();
  j["provenance"] = std::string(to_string(d.provenance));
  j["precision"] = std::string(d.precision.name());
  j["peak_tflops"] = num(d.peak_flops / 1e12, 4);
  j["peak_gbps"] = num(d.peak_bw / 1e9, 4);
  j["eps_flop_pj"] = num(d.eps_flop * 1e12, 4);
  j["eps_mop_pj"] = num(d.eps_mop * 1e12, 4);
  j["static_w"] = num(d.static_power, 4);
  j["balance"] = {{"beta_tau", num(b.diag.balance.beta_tau)},
                  {"beta_eps", num(b.diag.balance.beta_eps)},
                  {"beta_eps_no_static", num(b.diag.balance.beta_eps_zero)}};
  j["race_to_halt"] = b.diag.race_to_halt;
  j["crossover_regime"] = b.diag.crossover_regime;
  if (b.prediction) {
    const auto& p = *b.prediction;
    j["prediction"] = {{"time_s", num(p.runtime.seconds)},
                       {"time_bound", std::string(to_string(p.runtime.bound))},
                       {"energy_lower_bound_j", num(p.joules)},
                       {"energy_flop_j", num(p.flop_joules)},
                       {"energy_mop_j", num(p.mop_joules)},
                       {"energy_static_j", num(p.static_joules)}};
  } else {
    j["prediction"] = nullptr;
  }
  if (b.classes) {
    j["classification"] = {{"time", std::string(to_string(b.classes->time_class))},
                           {"energy", std::string(to_string(b.classes->energy_class))},
                           {"crossover", b.classes->crossover}};
  } else {
    j["classification"] = nullptr;
  }
  return j;
}

std::string training_note(const WorkloadCost& w) {
  if (w.mode != CostMode::Training || !w.any_extrapolated()) return "";
  return "backward costs for recurrent, attention, embedding, normalization and softmax layers are extrapolated";
}

// Per-layer classes are only meaningful against a single device.
Table layer_table(const WorkloadCost& w, const DeviceRoofline* single) {
  std::vector<std::string> header = {"layer_id", "kind", "W_flop", "Q_bytes", "AI"};
  if (single) {
    header.push_back("time_class");
    header.push_back("energy_class");
  }
  Table t(header);
  for (const auto& l : w.per_layer) {
    auto c = l.total();
    std::vector<std::string> row = {l.id, std::string(to_string(l.kind)), std::to_string(c.flop()),
                                    std::to_string(c.mop()), ai_text(c)};
    if (single) {
      if (c.mop() > 0 && c.flop() > 0) {
        auto cls = classify_workload(*single, arithmetic_intensity(c));
        row.emplace_back(to_string(cls.time_class));
        row.emplace_back(to_string(cls.energy_class));
      } else {
        row.emplace_back("");
        row.emplace_back("");
      }
    }
    t.add(std::move(row));
  }
  return t;
}

}  // namespace

ReportFormat parse_report_format(std::string_view text) {
  if (text == "csv") return ReportFormat::Csv;
  if (text == "md") return ReportFormat::Markdown;
  if (text == "json") return ReportFormat::Json;
  fail(ErrorCode::InvalidArgument, "format must be csv, md or json");
}

std::string emit_report(const WorkloadCost& w, std::string_view model, std::span<const DeviceRoofline> devices,
                        ReportFormat format) {
  std::vector<DeviceBlock> blocks;
  for (const auto& d : devices) blocks.push_back(evaluate(d, w.total));
  const DeviceRoofline* single = devices.size() == 1 ? &devices.front() : nullptr;
  auto note = training_note(w);

  if (format == ReportFormat::Json) {
    json j;
    j["schema"] = "edgeroof.report";
    j["schema_version"] = kReportSchemaVersion;
    j["model"] = std::string(model);
    j["mode"] = std::string(to_string(w.mode));
    j["batch"] = w.batch;
    j["precision"] = std::string(w.precision.name());
    j["totals"] = {{"flop", w.total.flop()},
                   {"mop_bytes", w.total.mop()},
                   {"ai", ai_json(w.total)},
                   {"components",
                    {{"flop_main", w.total.flop_main},
                     {"flop_bias", w.total.flop_bias},
                     {"flop_act", w.total.flop_act},
                     {"bytes_input", w.total.bytes_input},
                     {"bytes_weight", w.total.bytes_weight},
                     {"bytes_bias", w.total.bytes_bias},
                     {"bytes_output", w.total.bytes_output}}}};
    j["backward_extrapolated"] = w.mode == CostMode::Training && w.any_extrapolated();
    j["devices"] = json::array();
    for (const auto& b : blocks) j["devices"].push_back(device_json(b));
    j["layers"] = json::array();
    for (const auto& l : w.per_layer) {
      auto c = l.total();
      json lj = {{"id", l.id},
                 {"kind", std::string(to_string(l.kind))},
                 {"flop", c.flop()},
                 {"mop_bytes", c.mop()},
                 {"ai", ai_json(c)}};
      if (w.mode == CostMode::Training) lj["backward_extrapolated"] = l.backward_extrapolated;
      j["layers"].push_back(std::move(lj));
    }
    return j.dump(2) + "\n";
  }

  std::ostringstream out;
  if (format == ReportFormat::Csv) {
    out << "# model=" << model << " mode=" << to_string(w.mode) << " batch=" << w.batch
        << " precision=" << w.precision.name() << '\n';
    if (!note.empty()) out << "# note: " << note << '\n';
    auto table = layer_table(w, single);
    std::vector<std::string> total = {"TOTAL", "", std::to_string(w.total.flop()), std::to_string(w.total.mop()),
                                      ai_text(w.total)};
    if (single) {
      total.push_back(blocks.front().classes ? class_text(blocks.front().classes, false) : "");
      total.push_back(blocks.front().classes ? class_text(blocks.front().classes, true) : "");
    }
    table.add(total);
    out << table.csv();
    if (!blocks.empty()) {
      Table dev({"mode", "peak_tflops", "peak_gbps", "eps_flop_pj", "eps_mop_pj", "static_w", "beta_tau", "beta_eps",
                 "beta_eps_no_static", "time_s", "energy_lower_bound_j", "time_class", "energy_class", "crossover"});
      for (const auto& b : blocks) {
        const auto& d = *b.device;
        dev.add({d.mode.key(), sig4(d.peak_flops / 1e12), sig4(d.peak_bw / 1e9), sig4(d.eps_flop * 1e12),
                 sig4(d.eps_mop * 1e12), sig4(d.static_power), sig(b.diag.balance.beta_tau),
                 sig(b.diag.balance.beta_eps), sig(b.diag.balance.beta_eps_zero),
                 b.prediction ? sig(b.prediction->runtime.seconds) : "", b.prediction ? sig(b.prediction->joules) : "",
                 class_text(b.classes, false), class_text(b.classes, true),
                 b.classes ? (b.classes->crossover ? "true" : "false") : ""});
      }
      out << '\n' << dev.csv();
    }
    return out.str();
  }

  // Markdown
  out << "# " << model << "\n\n";
  out << "- mode: " << to_string(w.mode) << "\n- batch: " << w.batch << "\n- precision: " << w.precision.name()
      << "\n";
  out << "- total FLOP (W): " << w.total.flop() << "\n- total MOP bytes (Q): " << w.total.mop() << "\n";
  out << "- arithmetic intensity: " << (w.total.mop() > 0 ? sig(arithmetic_intensity(w.total)) : "undefined")
      << " FLOP/byte\n";
  if (!note.empty()) out << "- note: " << note << "\n";

  for (const auto& b : blocks) {
    const auto& d = *b.device;
    out << "\n## " << d.device << " " << d.mode.key() << " (" << to_string(d.provenance) << ")\n\n";
    out << "| quantity | value |\n|---|---|\n";
    out << "| peak | " << sig4(d.peak_flops / 1e12) << " TFLOP/s |\n";
    out << "| bandwidth | " << sig4(d.peak_bw / 1e9) << " GB/s |\n";
    out << "| eps_flop | " << sig4(d.eps_flop * 1e12) << " pJ |\n";
    out << "| eps_mop | " << sig4(d.eps_mop * 1e12) << " pJ |\n";
    out << "| static power | " << sig4(d.static_power) << " W |\n";
    out << "| beta_tau | " << sig(b.diag.balance.beta_tau) << " FLOP/byte |\n";
    out << "| beta_eps | " << sig(b.diag.balance.beta_eps) << " FLOP/byte |\n";
    out << "| beta_eps (no static) | " << sig(b.diag.balance.beta_eps_zero) << " FLOP/byte |\n";
    out << "| race to halt | " << (b.diag.race_to_halt ? "yes" : "no") << " |\n";
    out << "| crossover regime | " << (b.diag.crossover_regime ? "yes" : "no") << " |\n";
    if (b.prediction) {
      const auto& p = *b.prediction;
      out << "| predicted time | " << sig(p.runtime.seconds) << " s |\n";
      out << "| lower-bound energy | " << sig(p.joules) << " J (flop " << sig(p.flop_joules) << ", mop "
          << sig(p.mop_joules) << ", static " << sig(p.static_joules) << ") |\n";
    }
    if (b.classes) {
      out << "| class (time/energy) | " << to_string(b.classes->time_class) << "/"
          << to_string(b.classes->energy_class) << (b.classes->crossover ? ", crossover" : "") << " |\n";
    }
  }

  out << "\n## Layers\n\n" << layer_table(w, single).markdown();
  return out.str();
}

std::string emit_report(const WorkloadCost& w, std::string_view model, const DeviceRoofline& device,
                        ReportFormat format) {
  return emit_report(w, model, std::span<const DeviceRoofline>(&device, 1), format);
}

std::string emit_report(const WorkloadCost& w, std::string_view model, const ModeCatalog& catalog,
                        ReportFormat format) {
  std::vector<DeviceRoofline> devices;
  for (const auto& [mode, d] : catalog) devices.push_back(d);
  return emit_report(w, model, std::span<const DeviceRoofline>(devices), format);
}

std::string emit_diagnostics(std::span<const DeviceRoofline> devices, ReportFormat format) {
  if (format == ReportFormat::Json) {
    json j;
    j["schema"] = "edgeroof.roofline";
    j["schema_version"] = kReportSchemaVersion;
    j["devices"] = json::array();
    for (const auto& d : devices) {
      auto diag = roofline_diagnostics(d);
      auto dj = device_json(DeviceBlock{&d, std::nullopt, diag, std::nullopt});
      dj.erase("prediction");
      dj.erase("classification");
      dj["peak_efficiency_tflop_per_j"] = {
          {"static", d.eps_flop > 0 || d.static_power > 0 ? num(peak_energy_efficiency(d, true) / 1e12) : json(nullptr)},
          {"no_static", d.eps_flop > 0 ? num(peak_energy_efficiency(d, false) / 1e12) : json(nullptr)}};
      j["devices"].push_back(std::move(dj));
    }
    return j.dump(2) + "\n";
  }
  Table t({"device", "mode", "beta_tau", "beta_eps", "beta_eps_no_static", "peak_eff_tflop_per_j",
           "peak_eff_no_static_tflop_per_j", "race_to_halt", "crossover_regime"});
  for (const auto& d : devices) {
    auto diag = roofline_diagnostics(d);
    t.add({d.device, d.mode.key(), sig(diag.balance.beta_tau), sig(diag.balance.beta_eps),
           sig(diag.balance.beta_eps_zero),
           d.eps_flop > 0 || d.static_power > 0 ? sig(peak_energy_efficiency(d, true) / 1e12) : "inf",
           d.eps_flop > 0 ? sig(peak_energy_efficiency(d, false) / 1e12) : "inf",
           diag.race_to_halt ? "true" : "false", diag.crossover_regime ? "true" : "false"});
  }
  return format == ReportFormat::Csv ? t.csv() : "# Roofline diagnostics\n\n" + t.markdown();
}

std::string emit_sweep(const SweepResult& sweep, std::string_view model, ReportFormat format) {
  if (format == ReportFormat::Json) {
    json j;
    j["schema"] = "edgeroof.sweep";
    j["schema_version"] = kReportSchemaVersion;
    j["model"] = std::string(model);
    j["beta_tau_min"] = num(sweep.beta_tau_min);
    j["beta_tau_max"] = num(sweep.beta_tau_max);
    j["modes"] = json::array();
    for (const auto& r : sweep.rows) {
      j["modes"].push_back({{"mode", r.mode.key()},
                            {"ai", num(r.ai)},
                            {"time_s", num(r.prediction.runtime.seconds)},
                            {"energy_lower_bound_j", num(r.prediction.joules)},
                            {"beta_tau", num(r.balance.beta_tau)},
                            {"beta_eps", num(r.balance.beta_eps)},
                            {"time_class", std::string(to_string(r.classes.time_class))},
                            {"energy_class", std::string(to_string(r.classes.energy_class))},
                            {"crossover", r.classes.crossover}});
    }
    return j.dump(2) + "\n";
  }
  Table t({"mode", "time_s", "energy_lower_bound_j", "beta_tau", "beta_eps", "time_class", "energy_class",
           "crossover"});
  for (const auto& r : sweep.rows) {
    t.add({r.mode.key(), sig(r.prediction.runtime.seconds), sig(r.prediction.joules), sig(r.balance.beta_tau),
           sig(r.balance.beta_eps), std::string(to_string(r.classes.time_class)),
           std::string(to_string(r.classes.energy_class)), r.classes.crossover ? "true" : "false"});
  }
  std::ostringstream out;
  if (format == ReportFormat::Csv) {
    out << "# model=" << model << " ai=" << (sweep.rows.empty() ? "" : sig(sweep.rows.front().ai))
        << " beta_tau_min=" << sig(sweep.beta_tau_min) << " beta_tau_max=" << sig(sweep.beta_tau_max) << '\n'
        << t.csv();
  } else {
    out << "# Power-mode sweep: " << model << "\n\n";
    if (!sweep.rows.empty()) out << "- arithmetic intensity: " << sig(sweep.rows.front().ai) << " FLOP/byte\n";
    out << "- beta_tau range: " << sig(sweep.beta_tau_min) << " to " << sig(sweep.beta_tau_max) << " FLOP/byte\n\n"
        << t.markdown();
  }
  return out.str();
}

std::string emit_recommendation(const Recommendation& rec, Objective objective, std::string_view model,
                                const std::optional<DegradationEstimate>& degradation, const PowerMode* base_mode,
                                ReportFormat format) {
  const auto& r = rec.row;
  if (format == ReportFormat::Json) {
    json j;
    j["schema"] = "edgeroof.recommendation";
    j["schema_version"] = kReportSchemaVersion;
    j["model"] = std::string(model);
    j["objective"] = std::string(to_string(objective));
    j["budget_s"] = rec.budget_s ? num(*rec.budget_s) : json(nullptr);
    j["feasible_modes"] = rec.feasible_modes;
    j["mode"] = r.mode.key();
    j["time_s"] = num(r.prediction.runtime.seconds);
    j["energy_lower_bound_j"] = num(r.prediction.joules);
    j["time_class"] = std::string(to_string(r.classes.time_class));
    j["energy_class"] = std::string(to_string(r.classes.energy_class));
    if (degradation && base_mode) {
      j["degradation_estimate"] = {{"base_mode", base_mode->key()},
                                   {"compute_peak_drop", num(degradation->compute_peak_drop)},
                                   {"memory_peak_drop", num(degradation->memory_peak_drop)},
                                   {"compute_bound_share", num(degradation->compute_bound_share)},
                                   {"memory_bound_share", num(degradation->memory_bound_share)},
                                   {"predicted_slowdown", num(degradation->total)}};
    }
    return j.dump(2) + "\n";
  }
  std::vector<std::pair<std::string, std::string>> kv = {
      {"objective", std::string(to_string(objective))},
      {"budget_s", rec.budget_s ? sig(*rec.budget_s) : "none"},
      {"feasible_modes", std::to_string(rec.feasible_modes)},
      {"mode", r.mode.key()},
      {"time_s", sig(r.prediction.runtime.seconds)},
      {"energy_lower_bound_j", sig(r.prediction.joules)},
      {"time_class", std::string(to_string(r.classes.time_class))},
      {"energy_class", std::string(to_string(r.classes.energy_class))}};
  if (degradation && base_mode) {
    kv.emplace_back("base_mode", base_mode->key());
    kv.emplace_back("compute_peak_drop", sig(degradation->compute_peak_drop));
    kv.emplace_back("memory_peak_drop", sig(degradation->memory_peak_drop));
    kv.emplace_back("compute_bound_share", sig(degradation->compute_bound_share));
    kv.emplace_back("memory_bound_share", sig(degradation->memory_bound_share));
    kv.emplace_back("predicted_slowdown", sig(degradation->total));
  }
  Table t({"key", "value"});
  for (auto& [k, v] : kv) t.add({k, v});
  if (format == ReportFormat::Csv) return "# model=" + std::string(model) + "\n" + t.csv();
  std::string out = "# Recommended power mode: " + std::string(model) + "\n\n" + t.markdown();
  if (degradation) {
    out += "\nThe slowdown figure is a coarse estimate from peak shifts and layer boundedness; "
           "observed slowdowns can differ by several percentage points.\n";
  }
  return out;
}

std::string emit_batch_sweep(const BatchSweep& sweep, std::string_view model, ReportFormat format) {
  if (format == ReportFormat::Json) {
    json j;
    j["schema"] = "edgeroof.batch_sweep";
    j["schema_version"] = kReportSchemaVersion;
    j["model"] = std::string(model);
    j["ai_limit"] = num(sweep.ai_limit);
    j["weight_fraction_bs1"] = num(sweep.weight_fraction);
    j["points"] = json::array();
    for (const auto& p : sweep.points) {
      j["points"].push_back({{"batch", p.batch}, {"flop", p.flop}, {"mop_bytes", p.mop}, {"ai", num(p.ai)}});
    }
    return j.dump(2) + "\n";
  }
  Table t({"batch", "W_flop", "Q_bytes", "AI"});
  for (const auto& p : sweep.points) t.add({std::to_string(p.batch), std::to_string(p.flop), std::to_string(p.mop), sig(p.ai)});
  std::ostringstream out;
  if (format == ReportFormat::Csv) {
    out << "# model=" << model << " ai_limit=" << sig(sweep.ai_limit)
        << " weight_fraction_bs1=" << sig(sweep.weight_fraction) << '\n'
        << t.csv();
  } else {
    out << "# Batch sweep: " << model << "\n\n- AI limit (large batch): " << sig(sweep.ai_limit)
        << " FLOP/byte\n- weight fraction at batch 1: " << sig(sweep.weight_fraction) << "\n\n"
        << t.markdown();
  }
  return out.str();
}

std::string emit_fit(const DeviceRoofline& d, const FitResult& fit, ReportFormat format) {
  if (format == ReportFormat::Json) {
    json j;
    j["schema"] = "edgeroof.fit";
    j["schema_version"] = kReportSchemaVersion;
    j["mode"] = d.mode.key();
    j["peak_tflops"] = num(d.peak_flops / 1e12, 4);
    j["peak_gbps"] = num(d.peak_bw / 1e9, 4);
    j["eps_flop_pj"] = num(d.eps_flop * 1e12, 4);
    j["eps_mop_pj"] = num(d.eps_mop * 1e12, 4);
    j["static_w"] = num(d.static_power, 4);
    j["residual_rms"] = num(fit.residual_rms);
    j["n_samples"] = fit.n_samples;
    j["eps_flop_identified"] = fit.eps_flop_identified;
    j["eps_mop_identified"] = fit.eps_mop_identified;
    return j.dump(2) + "\n";
  }
  Table t({"key", "value"});
  t.add({"mode", d.mode.key()});
  t.add({"peak_tflops", sig4(d.peak_flops / 1e12)});
  t.add({"peak_gbps", sig4(d.peak_bw / 1e9)});
  t.add({"eps_flop_pj", fit.eps_flop_identified ? sig4(d.eps_flop * 1e12) : "unidentifiable"});
  t.add({"eps_mop_pj", fit.eps_mop_identified ? sig4(d.eps_mop * 1e12) : "unidentifiable"});
  t.add({"static_w", sig4(d.static_power)});
  t.add({"residual_rms", sig(fit.residual_rms)});
  t.add({"n_samples", std::to_string(fit.n_samples)});
  if (format == ReportFormat::Csv) return t.csv();
  return "# Calibration " + d.mode.key() + "\n\n" + t.markdown();
}

}  // namespace edgeroof
