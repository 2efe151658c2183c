// Copyright 2026 The edgeroof Authors.
// SPDX-License-Identifier: Apache-2.0

#include "edgeroof/advisor.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <limits>
#include <set>

#include "edgeroof/calibration.hpp"
#include "edgeroof/error.hpp"
#include "edgeroof/format.hpp"
#include "edgeroof/model_io.hpp"

namespace edgeroof {

namespace fs = std::filesystem;

void validate_catalog(const ModeCatalog& catalog) {
  if (catalog.empty()) fail(ErrorCode::EmptyCatalog, "mode catalog is empty");
  auto precision = catalog.begin()->second.precision;
  for (const auto& [mode, d] : catalog) {
    if (d.mode != mode) fail(ErrorCode::InvalidDevice, "roofline for " + d.mode.key() + " keyed as " + mode.key());
    if (d.precision != precision) {
      fail(ErrorCode::InvalidDevice, "catalog mixes precisions (" + std::string(precision.name()) + " and " +
                                         std::string(d.precision.name()) + ")");
    }
    d.validate();
  }
}

ModeCatalog load_catalog(const std::string& dir, Precision csv_precision) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) fail(ErrorCode::IoError, "catalog '" + dir + "' is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    auto ext = entry.path().extension();
    if (ext == ".json" || ext == ".csv") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  ModeCatalog catalog;
  for (const auto& path : files) {
    DeviceRoofline d;
    if (path.extension() == ".json") {
      d = load_device_config(path.string());
    } else {
      auto mode = PowerMode::parse(path.stem().string());
      try {
        d = calibrate(load_measurements(path.string()), mode, csv_precision);
      } catch (const Error& e) {
        throw e.with_context(path.string());
      }
    }
    if (!catalog.emplace(d.mode, d).second) {
      fail(ErrorCode::SchemaError, "catalog has two entries for mode " + d.mode.key());
    }
  }
  if (catalog.empty()) fail(ErrorCode::EmptyCatalog, "no device configs or measurement CSVs in '" + dir + "'");
  validate_catalog(catalog);
  return catalog;
}

SweepResult sweep_modes(const ModeCatalog& catalog, const CostBreakdown& cost) {
  validate_catalog(catalog);
  SweepResult out;
  double ai = cost.mop() > 0 ? arithmetic_intensity(cost) : 0.0;
  for (const auto& [mode, d] : catalog) {
    SweepRow row;
    row.mode = mode;
    row.ai = ai;
    row.prediction = predict_energy(d, cost);
    row.balance = roofline_diagnostics(d).balance;
    if (ai > 0) {
      row.classes = classify_workload(d, ai);
    } else {
      row.classes = {cost.mop() > 0 ? Boundedness::MemoryBound : Boundedness::ComputeBound,
                     cost.mop() > 0 ? Boundedness::MemoryBound : Boundedness::ComputeBound, false};
    }
    out.rows.push_back(row);
  }
  auto [lo, hi] = std::minmax_element(out.rows.begin(), out.rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return a.balance.beta_tau < b.balance.beta_tau;
  });
  out.beta_tau_min = lo->balance.beta_tau;
  out.beta_tau_max = hi->balance.beta_tau;
  return out;
}

void validate_profile(const LayerProfile& profile) {
  if (profile.empty()) fail(ErrorCode::ProfileInvalid, "profile is empty");
  double sum = 0.0;
  std::set<std::string> ids;
  for (const auto& e : profile) {
    if (!ids.insert(e.layer_id).second) fail(ErrorCode::ProfileInvalid, "duplicate layer '" + e.layer_id + "'");
    if (!(e.ai >= 0) || !std::isfinite(e.ai)) fail(ErrorCode::ProfileInvalid, "layer '" + e.layer_id + "': ai must be >= 0");
    if (!(e.runtime_fraction >= 0 && e.runtime_fraction <= 1)) {
      fail(ErrorCode::ProfileInvalid, "layer '" + e.layer_id + "': runtime_fraction outside [0, 1]");
    }
    sum += e.runtime_fraction;
  }
  if (std::abs(sum - 1.0) > 1e-6) fail(ErrorCode::ProfileInvalid, "runtime fractions sum to " + format_sig(sum));
}

LayerProfile parse_layer_profile(std::string_view csv) {
  LayerProfile out;
  bool header = false;
  std::size_t line_no = 0;
  while (!csv.empty()) {
    auto nl = csv.find('\n');
    auto line = csv.substr(0, nl);
    csv.remove_prefix(nl == std::string_view::npos ? csv.size() : nl + 1);
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    if (!header) {
      if (line != "layer_id,ai,runtime_fraction") {
        fail(ErrorCode::ProfileInvalid, "profile header must be 'layer_id,ai,runtime_fraction'");
      }
      header = true;
      continue;
    }
    auto c1 = line.find(',');
    auto c2 = c1 == std::string_view::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string_view::npos || line.find(',', c2 + 1) != std::string_view::npos) {
      fail(ErrorCode::ProfileInvalid, "profile line " + std::to_string(line_no) + ": expected 3 columns");
    }
    LayerProfileEntry e;
    e.layer_id = std::string(line.substr(0, c1));
    auto parse = [&](std::string_view cell) {
      double v = 0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size()) {
        fail(ErrorCode::ProfileInvalid, "profile line " + std::to_string(line_no) + ": bad number");
      }
      return v;
    };
    e.ai = parse(line.substr(c1 + 1, c2 - c1 - 1));
    e.runtime_fraction = parse(line.substr(c2 + 1));
    out.push_back(std::move(e));
  }
  validate_profile(out);
  return out;
}

LayerProfile profile_from_workload(const WorkloadCost& cost, const DeviceRoofline& d) {
  LayerProfile out;
  double total = 0.0;
  for (const auto& l : cost.per_layer) {
    auto c = l.total();
    LayerProfileEntry e;
    e.layer_id = l.id;
    if (c.flop() > 0 || c.mop() > 0) {
      e.ai = c.mop() > 0 ? arithmetic_intensity(c) : std::numeric_limits<double>::max();
      e.runtime_fraction = predict_runtime(d, c).seconds;
      total += e.runtime_fraction;
    }
    out.push_back(std::move(e));
  }
  if (total > 0) {
    for (auto& e : out) e.runtime_fraction /= total;
  }
  return out;
}

DegradationEstimate predict_layerwise_degradation(const LayerProfile& profile, const DeviceRoofline& base,
                                                  const DeviceRoofline& target) {
  validate_profile(profile);
  if (base.precision != target.precision) {
    fail(ErrorCode::InvalidArgument, "base and target rooflines differ in precision");
  }
  DegradationEstimate est;
  est.compute_peak_drop = std::max(0.0, 1.0 - target.peak_flops / base.peak_flops);
  est.memory_peak_drop = std::max(0.0, 1.0 - target.peak_bw / base.peak_bw);
  double beta = time_balance_point(base);
  for (const auto& e : profile) {
    // Balanced layers sit on the compute roof.
    if (classify_against(e.ai, beta) == Boundedness::MemoryBound) {
      est.memory_bound_share += e.runtime_fraction;
    } else {
      est.compute_bound_share += e.runtime_fraction;
    }
  }
  est.compute_term = est.compute_peak_drop * est.compute_bound_share;
  est.memory_term = est.memory_peak_drop * est.memory_bound_share;
  est.total = est.compute_term + est.memory_term;
  return est;
}

std::string_view to_string(Objective o) noexcept { return o == Objective::MinTime ? "min-time" : "min-energy"; }

Recommendation recommend_mode(const ModeCatalog& catalog, const CostBreakdown& cost,
                              std::optional<double> latency_budget_s, Objective objective) {
  auto sweep = sweep_modes(catalog, cost);
  Recommendation rec;
  rec.budget_s = latency_budget_s;
  const SweepRow* best = nullptr;
  const SweepRow* fastest = nullptr;
  auto score = [&](const SweepRow& r) {
    return objective == Objective::MinTime ? r.prediction.runtime.seconds : r.prediction.joules;
  };
  for (const auto& row : sweep.rows) {
    if (!fastest || row.prediction.runtime.seconds < fastest->prediction.runtime.seconds) fastest = &row;
    if (latency_budget_s && row.prediction.runtime.seconds > *latency_budget_s) continue;
    ++rec.feasible_modes;
    if (!best || score(row) < score(*best)) best = &row;
  }
  if (!best) {
    fail(ErrorCode::InfeasibleBudget, "no mode meets the " + format_sig(*latency_budget_s) +
                                          " s budget; fastest is " + fastest->mode.key() + " at " +
                                          format_sig(fastest->prediction.runtime.seconds) + " s");
  }
  rec.row = *best;
  return rec;
}

}  // namespace edgeroof
