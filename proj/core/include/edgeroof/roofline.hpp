// Copyright 2026 The edgeroof Authors.
// SPDX-License-Identifier: Apache-2.0

// Time and energy rooflines for one device power mode.
//
//   T = max(W / peak_flops, Q / peak_bw)
//   E = eps_flop*W + eps_mop*Q + static_power*T
//
// Units are SI throughout: FLOP/s, bytes/s, J/FLOP, J/byte, W.

#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "edgeroof/cost_model.hpp"
#include "edgeroof/model_graph.hpp"

namespace edgeroof {

/// Knob tuple keying a roofline. CPU settings are carried but never change
/// the roofline itself.
struct PowerMode {
  std::int64_t cpu_cores = 1;
  std::int64_t cpu_mhz = 1;
  std::int64_t gpu_mhz = 1;
  std::int64_t mem_mhz = 1;

  /// "c<cores>_cpu<mhz>_gpu<mhz>_mem<mhz>"
  std::string key() const;
  /// Inverse of key(); throws SchemaError.
  static PowerMode parse(std::string_view key);
  /// Throws InvalidDevice unless cores >= 1 and all frequencies > 0.
  void validate() const;

  // Lexicographic over (cores, cpu, gpu, mem).
  friend auto operator<=>(const PowerMode&, const PowerMode&) = default;
};

enum class Provenance { Configured, Fitted };
std::string_view to_string(Provenance p) noexcept;

struct DeviceRoofline {
  std::string device;
  PowerMode mode;
  Precision precision;
  double peak_flops = 0.0;    ///< FLOP/s
  double peak_bw = 0.0;       ///< bytes/s
  double eps_flop = 0.0;      ///< J/FLOP
  double eps_mop = 0.0;       ///< J/byte
  double static_power = 0.0;  ///< W
  Provenance provenance = Provenance::Configured;
  std::string note;

  double tau_flop() const noexcept { return 1.0 / peak_flops; }
  double tau_mop() const noexcept { return 1.0 / peak_bw; }

  /// Throws InvalidDevice on any violated invariant (positive peaks,
  /// non-negative coefficients, all finite).
  void validate() const;

  friend bool operator==(const DeviceRoofline&, const DeviceRoofline&) = default;
};

enum class Boundedness { MemoryBound, ComputeBound, Balanced };
std::string_view to_string(Boundedness b) noexcept;

/// Relative tolerance for Balanced.
inline constexpr double kBalanceTolerance = 1e-9;

/// Compares `ai` to `beta` with kBalanceTolerance.
Boundedness classify_against(double ai, double beta);

struct BalancePoints {
  double beta_tau = 0.0;
  double beta_eps = 0.0;       ///< with static power
  double beta_eps_zero = 0.0;  ///< static power treated as 0
};

double time_balance_point(const DeviceRoofline& d);

/// With static power: (eps_mop + pi0/peak_bw) / (eps_flop + 2*pi0/peak_flops).
/// Without: eps_mop / eps_flop. Throws DegenerateCoefficients on a zero
/// denominator.
double energy_balance_point(const DeviceRoofline& d, bool include_static);

BalancePoints balance_points(const DeviceRoofline& d);

/// min(peak_flops, ai*peak_bw). Throws NegativeAI.
double attainable_performance(const DeviceRoofline& d, double ai);

struct RuntimePrediction {
  double seconds = 0.0;
  double compute_seconds = 0.0;  ///< W / peak_flops
  double memory_seconds = 0.0;   ///< Q / peak_bw
  Boundedness bound = Boundedness::Balanced;
};

/// Throws EmptyWorkload when W = Q = 0.
RuntimePrediction predict_runtime(const DeviceRoofline& d, const CostBreakdown& c);

/// Lower-bound energy: uses the roofline runtime for the static term.
struct EnergyPrediction {
  double joules = 0.0;
  double flop_joules = 0.0;
  double mop_joules = 0.0;
  double static_joules = 0.0;
  RuntimePrediction runtime;
};

EnergyPrediction predict_energy(const DeviceRoofline& d, const CostBreakdown& c);

/// Attainable FLOP/J at `ai`. Throws NonPositiveAI.
double energy_efficiency_bound(const DeviceRoofline& d, double ai, bool include_static);

/// 1/(eps_flop + pi0/peak_flops) or 1/eps_flop. Throws
/// DegenerateCoefficients when that denominator is 0.
double peak_energy_efficiency(const DeviceRoofline& d, bool include_static);

struct Classification {
  Boundedness time_class = Boundedness::Balanced;
  Boundedness energy_class = Boundedness::Balanced;
  /// Compute-bound in energy while memory-bound in time.
  bool crossover = false;
};

/// Throws NonPositiveAI.
Classification classify_workload(const DeviceRoofline& d, double ai);

struct RooflineDiagnostics {
  BalancePoints balance;
  bool race_to_halt = false;      ///< beta_eps (static) <= beta_tau
  bool crossover_regime = false;  ///< beta_eps (no static) > beta_tau
};

/// Never throws for a valid device; a zero eps_flop yields an infinite
/// beta_eps_zero.
RooflineDiagnostics roofline_diagnostics(const DeviceRoofline& d);

/// A measured workload drawn over a roofline.
struct WorkloadPoint {
  std::string label;
  double ai = 0.0;
  double achieved_perf = 0.0;  ///< FLOP/s, W / measured T
  double achieved_eff = 0.0;   ///< FLOP/J, W / measured E; 0 when unknown

  /// From a cost and a measurement. Throws ZeroMemory / InvalidArgument.
  static WorkloadPoint from_measurement(std::string label, const CostBreakdown& c, double seconds, double joules);
};

// Device config files (JSON).
//   {"device", "mode": {"cpu_cores","cpu_mhz","gpu_mhz","mem_mhz"},
//    "precision", "peak_tflops", "peak_gbps", "eps_flop_pj", "eps_mop_pj",
//    "static_w", ["provenance"], ["note"]}

/// Throws SchemaError for malformed documents, InvalidDevice for invalid
/// values.
DeviceRoofline parse_device_config(std::string_view text);
std::string serialize_device_config(const DeviceRoofline& d);
DeviceRoofline load_device_config(const std::string& path);

}  // namespace edgeroof
