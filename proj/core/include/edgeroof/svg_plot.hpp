// Copyright 2026 The edgeroof Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "edgeroof/roofline.hpp"

namespace edgeroof {

enum class PlotVariant { Time, Energy, EnergyNoStatic };

struct AxisRange {
  double lo = 0.0;
  double hi = 0.0;
};

struct PlotSpec {
  std::vector<DeviceRoofline> rooflines;
  std::vector<WorkloadPoint> points;
  PlotVariant variant = PlotVariant::Time;
  std::optional<AxisRange> ai_range;  ///< auto when absent
  std::optional<AxisRange> y_range;   ///< auto when absent
  bool annotate_balance = true;
  std::string title;
};

/// Auto AI range: [min point AI / 10, max(10*beta_tau, max point AI * 10)],
/// with beta_tau / 100 as the lower end when there are no points.
AxisRange auto_ai_range(const PlotSpec& spec);

/// Minimum number of log-spaced samples for energy curves.
inline constexpr int kEnergyCurveSamples = 256;

/// Log-log SVG. Byte-identical for identical specs. Coordinates and balance
/// points are embedded as data-* attributes. Points outside the axis range or
/// with a non-positive y value are omitted. Throws EmptySpec without
/// rooflines, InvalidArgument for non-positive or empty ranges.
std::string render_roofline_svg(const PlotSpec& spec);

}  // namespace edgeroof
