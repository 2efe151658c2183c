// Copyright 2026 The edgeroof Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "edgeroof/cost_model.hpp"
#include "edgeroof/roofline.hpp"

namespace edgeroof {

/// One roofline per power mode, iterated in ascending mode order.
using ModeCatalog = std::map<PowerMode, DeviceRoofline>;

/// Throws EmptyCatalog when empty, InvalidDevice when precisions differ or a
/// roofline is keyed under a mode other than its own.
void validate_catalog(const ModeCatalog& catalog);

/// Reads every *.json (device config) and *.csv (measurements, calibrated
/// with `csv_precision`; mode taken from the file name) in `dir`. Throws
/// EmptyCatalog when nothing is found, SchemaError on duplicate modes.
ModeCatalog load_catalog(const std::string& dir, Precision csv_precision = kFP32);

struct SweepRow {
  PowerMode mode;
  double ai = 0.0;
  EnergyPrediction prediction;  ///< includes the runtime prediction
  BalancePoints balance;
  Classification classes;
};

struct SweepResult {
  std::vector<SweepRow> rows;  ///< ascending mode order
  double beta_tau_min = 0.0;
  double beta_tau_max = 0.0;
};

/// Throws EmptyCatalog; costing errors propagate.
SweepResult sweep_modes(const ModeCatalog& catalog, const CostBreakdown& cost);

struct LayerProfileEntry {
  std::string layer_id;
  double ai = 0.0;
  double runtime_fraction = 0.0;
};
using LayerProfile = std::vector<LayerProfileEntry>;

/// Throws ProfileInvalid unless fractions lie in [0,1] and sum to 1 +- 1e-6,
/// intensities are >= 0 and ids are unique.
void validate_profile(const LayerProfile& profile);
/// CSV with header layer_id,ai,runtime_fraction.
LayerProfile parse_layer_profile(std::string_view csv);

/// Profile whose fractions are the roofline runtimes of each layer on `d`.
/// Layers that neither compute nor move bytes get fraction 0.
LayerProfile profile_from_workload(const WorkloadCost& cost, const DeviceRoofline& d);

struct DegradationEstimate {
  double compute_peak_drop = 0.0;   ///< max(0, 1 - target.peak_flops / base.peak_flops)
  double memory_peak_drop = 0.0;    ///< max(0, 1 - target.peak_bw / base.peak_bw)
  double compute_bound_share = 0.0; ///< runtime share with ai >= beta_tau(base)
  double memory_bound_share = 0.0;
  double compute_term = 0.0;
  double memory_term = 0.0;
  double total = 0.0;  ///< predicted fractional runtime increase (an estimate)
};

/// Peak-drop times runtime share of the layers bound by that peak, judged
/// against the base mode. Throws ProfileInvalid, InvalidArgument when the
/// precisions differ.
DegradationEstimate predict_layerwise_degradation(const LayerProfile& profile, const DeviceRoofline& base,
                                                  const DeviceRoofline& target);

enum class Objective { MinEnergy, MinTime };
std::string_view to_string(Objective o) noexcept;

struct Recommendation {
  SweepRow row;
  std::optional<double> budget_s;
  std::size_t feasible_modes = 0;
};

/// Argmin of predicted E or T over modes meeting the budget (all modes when
/// none is given); ties go to the lowest mode. Throws EmptyCatalog,
/// InfeasibleBudget (naming the fastest achievable T).
Recommendation recommend_mode(const ModeCatalog& catalog, const CostBreakdown& cost,
                              std::optional<double> latency_budget_s, Objective objective);

}  // namespace edgeroof
