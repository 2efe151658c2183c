// Copyright 2026 The edgeroof Authors.
// SPDX-License-Identifier: Apache-2.0

// Text emissions for workload analyses. All output is deterministic: reals
// are printed with 6 significant digits (device coefficients with 4), integer
// counts exactly, and catalog blocks in ascending mode order.

#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "edgeroof/advisor.hpp"
#include "edgeroof/calibration.hpp"
#include "edgeroof/cost_model.hpp"
#include "edgeroof/roofline.hpp"

namespace edgeroof {

enum class ReportFormat { Csv, Markdown, Json };

/// "csv", "md" or "json". Throws InvalidArgument.
ReportFormat parse_report_format(std::string_view text);

inline constexpr int kReportSchemaVersion = 1;

/// Totals, intensity and per-layer table; for each device also predicted
/// lower-bound T and E, classes and balance points.
std::string emit_report(const WorkloadCost& workload, std::string_view model, std::span<const DeviceRoofline> devices,
                        ReportFormat format);
std::string emit_report(const WorkloadCost& workload, std::string_view model, const DeviceRoofline& device,
                        ReportFormat format);
std::string emit_report(const WorkloadCost& workload, std::string_view model, const ModeCatalog& catalog,
                        ReportFormat format);

/// Balance points, peak efficiencies and regime flags per device.
std::string emit_diagnostics(std::span<const DeviceRoofline> devices, ReportFormat format);

std::string emit_sweep(const SweepResult& sweep, std::string_view model, ReportFormat format);

std::string emit_recommendation(const Recommendation& rec, Objective objective, std::string_view model,
                                const std::optional<DegradationEstimate>& degradation, const PowerMode* base_mode,
                                ReportFormat format);

std::string emit_batch_sweep(const BatchSweep& sweep, std::string_view model, ReportFormat format);

std::string emit_fit(const DeviceRoofline& fitted, const FitResult& fit, ReportFormat format);

}  // namespace edgeroof
