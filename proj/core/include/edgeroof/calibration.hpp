// Copyright 2026 The edgeroof Authors.
// SPDX-License-Identifier: Apache-2.0

// Roofline coefficients from microbenchmark measurements: peak throughputs by
// median-then-max aggregation, static power from idle samples, and per-op
// energies by non-negative least squares on E - pi0*T = eps_flop*W + eps_mop*Q.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "edgeroof/roofline.hpp"

namespace edgeroof {

enum class SampleKind { Compute, Memory, Idle, Workload };
std::string_view to_string(SampleKind kind) noexcept;

struct MeasurementSample {
  std::int64_t run_id = 0;
  SampleKind kind = SampleKind::Compute;
  std::int64_t size = 0;
  double flop = 0.0;     ///< W
  double mop = 0.0;      ///< Q, bytes
  double time_s = 0.0;   ///< T
  double power_w = 0.0;  ///< mean power over the run

  double energy() const noexcept { return power_w * time_s; }
};

/// Header must be exactly run_id,kind,size,flop,mop_bytes,time_s,power_w.
/// Blank lines and lines starting with '#' are skipped. Throws SchemaError,
/// including for samples that break the per-kind invariants.
std::vector<MeasurementSample> parse_measurements(std::string_view csv);
std::vector<MeasurementSample> load_measurements(const std::string& path);
std::string format_measurements(const std::vector<MeasurementSample>& samples);

struct Peaks {
  double peak_flops = 0.0;
  double peak_bw = 0.0;
};

/// Median throughput per (kind, size), then max across sizes. Throws
/// MissingKind when compute or memory samples are absent.
Peaks fit_peaks(const std::vector<MeasurementSample>& samples);

/// Median power of the idle samples (other kinds are ignored). Throws
/// MissingKind.
double measure_static_power(const std::vector<MeasurementSample>& samples);

struct FitResult {
  double eps_flop = 0.0;      ///< J/FLOP
  double eps_mop = 0.0;       ///< J/byte
  double residual_rms = 0.0;  ///< ||residual|| / ||target||
  std::int64_t n_samples = 0;
  /// False when no sample exercises that term; its coefficient is then 0.
  bool eps_flop_identified = true;
  bool eps_mop_identified = true;
};

/// Unweighted NNLS over compute, memory and workload samples. Throws
/// RankDeficient for collinear or too few rows, NegativeEnergy when most
/// samples use less energy than static power alone explains.
FitResult fit_energy_coefficients(const std::vector<MeasurementSample>& samples, double static_power);

/// Assembles a fitted roofline and validates it.
DeviceRoofline build_device_roofline(const Peaks& peaks, double static_power, const FitResult& fit,
                                     const PowerMode& mode, Precision precision, std::string device = "fitted");

/// Whole pipeline for one mode's samples.
DeviceRoofline calibrate(const std::vector<MeasurementSample>& samples, const PowerMode& mode, Precision precision,
                         std::string device = "fitted");

/// Median with the mean of the two middle values for even counts. Throws
/// InvalidArgument when empty.
double median(std::vector<double> values);

/// Solves min ||A x - b|| subject to x >= 0 (Lawson-Hanson active set).
/// `a` is row-major with `cols` columns.
std::vector<double> nnls(const std::vector<double>& a, std::size_t cols, const std::vector<double>& b);

}  // namespace edgeroof
