// Copyright 2026 The edgeroof Authors.
// SPDX-License-Identifier: Apache-2.0

#include "edgeroof/roofline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "edgeroof/error.hpp"

namespace edgeroof {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_ai_positive(double ai) {
  if (!(ai > 0.0)) fail(ErrorCode::NonPositiveAI, "arithmetic intensity must be > 0");
}

std::int64_t parse_field(std::string_view key, std::string_view& rest, std::string_view prefix, bool last) {
  if (rest.substr(0, prefix.size()) != prefix) fail(ErrorCode::SchemaError, "malformed power-mode key '" + std::string(key) + "'");
  rest.remove_prefix(prefix.size());
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), value);
  if (ec != std::errc() || ptr == rest.data()) {
    fail(ErrorCode::SchemaError, "malformed power-mode key '" + std::string(key) + "'");
  }
  rest.remove_prefix(static_cast<std::size_t>(ptr - rest.data()));
  if (!last) {
    if (rest.empty() || rest.front() != '_') fail(ErrorCode::SchemaError, "malformed power-mode key '" + std::string(key) + "'");
    rest.remove_prefix(1);
  } else if (!rest.empty()) {
    fail(ErrorCode::SchemaError, "malformed power-mode key '" + std::string(key) + "'");
  }
  return value;
}

}  // namespace

std::string PowerMode::key() const {
  return "c" + std::to_string(cpu_cores) + "_cpu" + std::to_string(cpu_mhz) + "_gpu" + std::to_string(gpu_mhz) +
         "_mem" + std::to_string(mem_mhz);
}

PowerMode PowerMode::parse(std::string_view key) {
  auto rest = key;
  PowerMode m;
  m.cpu_cores = parse_field(key, rest, "c", false);
  m.cpu_mhz = parse_field(key, rest, "cpu", false);
  m.gpu_mhz = parse_field(key, rest, "gpu", false);
  m.mem_mhz = parse_field(key, rest, "mem", true);
  return m;
}

void PowerMode::validate() const {
  if (cpu_cores < 1) fail(ErrorCode::InvalidDevice, "cpu_cores must be >= 1");
  if (cpu_mhz <= 0 || gpu_mhz <= 0 || mem_mhz <= 0) fail(ErrorCode::InvalidDevice, "frequencies must be > 0");
}

std::string_view to_string(Provenance p) noexcept { return p == Provenance::Fitted ? "fitted" : "configured"; }

void DeviceRoofline::validate() const {
  mode.validate();
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(peak_flops) || !(peak_flops > 0)) fail(ErrorCode::InvalidDevice, "peak_flops must be > 0");
  if (!finite(peak_bw) || !(peak_bw > 0)) fail(ErrorCode::InvalidDevice, "peak_bw must be > 0");
  if (!finite(eps_flop) || eps_flop < 0) fail(ErrorCode::InvalidDevice, "eps_flop must be >= 0");
  if (!finite(eps_mop) || eps_mop < 0) fail(ErrorCode::InvalidDevice, "eps_mop must be >= 0");
  if (!finite(static_power) || static_power < 0) fail(ErrorCode::InvalidDevice, "static_power must be >= 0");
}

std::string_view to_string(Boundedness b) noexcept {
  switch (b) {
    case Boundedness::MemoryBound:
      return "MemoryBound";
    case Boundedness::ComputeBound:
      return "ComputeBound";
    case Boundedness::Balanced:
      return "Balanced";
  }
  return "Balanced";
}

Boundedness classify_against(double ai, double beta) {
  if (std::isinf(beta)) return std::isinf(ai) ? Boundedness::Balanced : Boundedness::MemoryBound;
  if (std::abs(ai - beta) <= kBalanceTolerance * std::max(std::abs(ai), std::abs(beta))) return Boundedness::Balanced;
  return ai < beta ? Boundedness::MemoryBound : Boundedness::ComputeBound;
}

double time_balance_point(const DeviceRoofline& d) { return d.peak_flops / d.peak_bw; }

double energy_balance_point(const DeviceRoofline& d, bool include_static) {
  double num = d.eps_mop;
  double den = d.eps_flop;
  if (include_static) {
    num += d.static_power / d.peak_bw;
    den += 2.0 * d.static_power / d.peak_flops;
  }
  if (den == 0.0) fail(ErrorCode::DegenerateCoefficients, "energy balance point has a zero denominator");
  return num / den;
}

BalancePoints balance_points(const DeviceRoofline& d) {
  return {time_balance_point(d), energy_balance_point(d, true), energy_balance_point(d, false)};
}

double attainable_performance(const DeviceRoofline& d, double ai) {
  if (ai < 0 || std::isnan(ai)) fail(ErrorCode::NegativeAI, "arithmetic intensity must be >= 0");
  return std::min(d.peak_flops, ai * d.peak_bw);
}

RuntimePrediction predict_runtime(const DeviceRoofline& d, const CostBreakdown& c) {
  if (c.flop() == 0 && c.mop() == 0) fail(ErrorCode::EmptyWorkload, "workload has W = 0 and Q = 0");
  RuntimePrediction r;
  r.compute_seconds = static_cast<double>(c.flop()) / d.peak_flops;
  r.memory_seconds = static_cast<double>(c.mop()) / d.peak_bw;
  r.seconds = std::max(r.compute_seconds, r.memory_seconds);
  // compute < memory is the same test as W/Q < beta_tau.
  r.bound = classify_against(r.compute_seconds, r.memory_seconds);
  return r;
}

EnergyPrediction predict_energy(const DeviceRoofline& d, const CostBreakdown& c) {
  EnergyPrediction e;
  e.runtime = predict_runtime(d, c);
  e.flop_joules = d.eps_flop * static_cast<double>(c.flop());
  e.mop_joules = d.eps_mop * static_cast<double>(c.mop());
  e.static_joules = d.static_power * e.runtime.seconds;
  e.joules = e.flop_joules + e.mop_joules + e.static_joules;
  return e;
}

double energy_efficiency_bound(const DeviceRoofline& d, double ai, bool include_static) {
  check_ai_positive(ai);
  double den;
  if (!include_static) {
    den = d.eps_flop + d.eps_mop / ai;
  } else if (ai < time_balance_point(d)) {
    den = d.eps_flop + (d.eps_mop + d.static_power / d.peak_bw) / ai;
  } else {
    den = d.eps_flop + d.eps_mop / ai + d.static_power / d.peak_flops;
  }
  return den > 0 ? 1.0 / den : kInf;
}

double peak_energy_efficiency(const DeviceRoofline& d, bool include_static) {
  double den = d.eps_flop + (include_static ? d.static_power / d.peak_flops : 0.0);
  if (den == 0.0) fail(ErrorCode::DegenerateCoefficients, "peak energy efficiency is unbounded");
  return 1.0 / den;
}

Classification classify_workload(const DeviceRoofline& d, double ai) {
  check_ai_positive(ai);
  Classification c;
  c.time_class = classify_against(ai, time_balance_point(d));
  c.energy_class = classify_against(ai, energy_balance_point(d, true));
  c.crossover = c.energy_class == Boundedness::ComputeBound && c.time_class == Boundedness::MemoryBound;
  return c;
}

RooflineDiagnostics roofline_diagnostics(const DeviceRoofline& d) {
  auto safe = [&](bool include_static) {
    try {
      return energy_balance_point(d, include_static);
    } catch (const Error&) {
      return kInf;
    }
  };
  RooflineDiagnostics r;
  r.balance = {time_balance_point(d), safe(true), safe(false)};
  r.race_to_halt = r.balance.beta_eps <= r.balance.beta_tau;
  r.crossover_regime = r.balance.beta_eps_zero > r.balance.beta_tau;
  return r;
}

WorkloadPoint WorkloadPoint::from_measurement(std::string label, const CostBreakdown& c, double seconds,
                                              double joules) {
  if (!(seconds > 0)) fail(ErrorCode::InvalidArgument, "measured time must be > 0");
  if (joules < 0) fail(ErrorCode::InvalidArgument, "measured energy must be >= 0");
  WorkloadPoint p;
  p.label = std::move(label);
  p.ai = arithmetic_intensity(c);
  p.achieved_perf = static_cast<double>(c.flop()) / seconds;
  p.achieved_eff = joules > 0 ? static_cast<double>(c.flop()) / joules : 0.0;
  return p;
}

}  // namespace edgeroof
