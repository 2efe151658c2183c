// Copyright 2026 The edgeroof Authors.
// SPDX-License-Identifier: Apache-2.0

#include "edgeroof/calibration.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "support/expect_error.hpp"
#include "support/generators.hpp"

namespace edgeroof {
namespace {

using testing_support::GroundTruth;
using testing_support::synthesize_samples;

MeasurementSample compute(std::int64_t run, std::int64_t size, double w, double t, double p = 30) {
  return {run, SampleKind::Compute, size, w, 0, t, p};
}
MeasurementSample memory(std::int64_t run, std::int64_t size, double q, double t, double p = 30) {
  return {run, SampleKind::Memory, size, 0, q, t, p};
}
MeasurementSample idle(std::int64_t run, double p) { return {run, SampleKind::Idle, 0, 0, 0, 1, p}; }

TEST(Median, OddAndEven) {
  EXPECT_EQ(median({3, 1, 2}), 2);
  EXPECT_EQ(median({4, 1, 3, 2}), 2.5);
  EXPECT_ERROR_CODE(median({}), ErrorCode::InvalidArgument);
}

TEST(FitPeaks, MedianThenMax) {
  std::vector<MeasurementSample> s = {compute(0, 1, 10, 1), compute(1, 1, 14, 1), compute(2, 1, 12, 1),
                                      memory(3, 1, 5, 1)};
  EXPECT_DOUBLE_EQ(fit_peaks(s).peak_flops, 12);
  s.push_back(compute(4, 2, 15, 1));
  EXPECT_DOUBLE_EQ(fit_peaks(s).peak_flops, 15);
  EXPECT_DOUBLE_EQ(fit_peaks(s).peak_bw, 5);
}

TEST(FitPeaks, MissingKinds) {
  try {
    fit_peaks({compute(0, 1, 10, 1)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingKind);
    EXPECT_NE(e.detail().find("memory"), std::string::npos);
  }
}

TEST(FitPeaks, RecoversNoisyMaxnPeaks) {
  auto s = synthesize_samples(GroundTruth{}, 10, 0.03, 42);
  auto p = fit_peaks(s);
  EXPECT_NEAR(p.peak_flops / 14.7e12, 1.0, 0.03);
  EXPECT_NEAR(p.peak_bw / 164.4e9, 1.0, 0.03);
}

TEST(StaticPower, Median) {
  EXPECT_DOUBLE_EQ(measure_static_power({idle(0, 17.8), idle(1, 17.9), idle(2, 18.0)}), 17.9);
  EXPECT_DOUBLE_EQ(measure_static_power({idle(0, 17.9)}), 17.9);
  EXPECT_DOUBLE_EQ(measure_static_power({idle(0, 17.9), idle(1, 17.9), idle(2, 95), idle(3, 17.8), idle(4, 18.0)}),
                   17.9);
  EXPECT_ERROR_CODE(measure_static_power({compute(0, 1, 1, 1)}), ErrorCode::MissingKind);
  auto s = synthesize_samples(GroundTruth{}, 10, 0.01, 3);
  EXPECT_NEAR(measure_static_power(s), 17.9, 0.1);
}

TEST(FitEnergy, TwoNoiselessSamplesDetermined) {
  const double ef = 2e-12, em = 100e-12, p0 = 10;
  auto sample = [&](std::int64_t run, double w, double q, double t) {
    return MeasurementSample{run, SampleKind::Workload, 0, w, q, t, (ef * w + em * q + p0 * t) / t};
  };
  auto fit = fit_energy_coefficients({sample(0, 1e12, 1e9, 0.1), sample(1, 1e10, 5e9, 0.05)}, p0);
  EXPECT_NEAR(fit.eps_flop / ef, 1.0, 1e-9);
  EXPECT_NEAR(fit.eps_mop / em, 1.0, 1e-9);
  EXPECT_NEAR(fit.residual_rms, 0.0, 1e-9);
  EXPECT_EQ(fit.n_samples, 2);
}

TEST(FitEnergy, NoisyRecoveryWithinFivePercent) {
  // 50 samples with 1% multiplicative power noise.
  GroundTruth t;
  testing_support::Rng rng(11);
  std::vector<MeasurementSample> s;
  for (int i = 0; i < 50; ++i) {
    const double w = rng.log_uniform(1e8, 1e12), q = rng.log_uniform(1e7, 1e10);
    const double time = std::max(w / t.peak_flops, q / t.peak_bw);
    const double p = (t.eps_flop * w + t.eps_mop * q + t.static_power * time) / time;
    s.push_back({i, SampleKind::Workload, 0, w, q, time, p * (1 + rng.real_in(-0.01, 0.01))});
  }
  auto fit = fit_energy_coefficients(s, t.static_power);
  EXPECT_NEAR(fit.eps_flop / t.eps_flop, 1.0, 0.05);
  EXPECT_NEAR(fit.eps_mop / t.eps_mop, 1.0, 0.05);
}

TEST(FitEnergy, MemoryOnlyDataLeavesFlopUnidentified) {
  std::vector<MeasurementSample> s;
  for (int i = 1; i <= 4; ++i) {
    const double q = 1e9 * i, time = q / 100e9;
    s.push_back({i, SampleKind::Memory, i, 0, q, time, (100e-12 * q + 5 * time) / time});
  }
  auto fit = fit_energy_coefficients(s, 5);
  EXPECT_FALSE(fit.eps_flop_identified);
  EXPECT_TRUE(fit.eps_mop_identified);
  EXPECT_NEAR(fit.eps_mop / 100e-12, 1.0, 1e-9);
}

TEST(FitEnergy, CollinearRowsAreRankDeficient) {
  std::vector<MeasurementSample> s;
  for (int i = 1; i <= 3; ++i) {
    const double w = 1e9 * i, q = 2e7 * i, time = 0.01 * i;
    s.push_back({i, SampleKind::Workload, 0, w, q, time, 40});
  }
  EXPECT_ERROR_CODE(fit_energy_coefficients(s, 10), ErrorCode::RankDeficient);
}

TEST(FitEnergy, WrongStaticPowerIsNegativeEnergy) {
  auto s = synthesize_samples(GroundTruth{}, 3, 0.0, 1);
  EXPECT_ERROR_CODE(fit_energy_coefficients(s, 500), ErrorCode::NegativeEnergy);
}

TEST(Nnls, ClampsNegativeComponents) {
  // Unconstrained least squares gives x = (1, -1); NNLS must hold x2 at 0.
  const std::vector<double> a = {1, 0, 0, 1, 1, 1};
  const std::vector<double> b = {1, -1, 0};
  auto x = nnls(a, 2, b);
  ASSERT_EQ(x.size(), 2u);
  EXPECT_GE(x[0], 0);
  EXPECT_EQ(x[1], 0);
  EXPECT_NEAR(x[0], 0.5, 1e-12);
}

TEST(Measurements, ParseFormatRoundTrip) {
  auto s = synthesize_samples(GroundTruth{}, 2, 0.01, 5);
  auto text = format_measurements(s);
  auto back = parse_measurements(text);
  ASSERT_EQ(back.size(), s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_EQ(back[i].kind, s[i].kind);
    EXPECT_DOUBLE_EQ(back[i].time_s, s[i].time_s);
    EXPECT_DOUBLE_EQ(back[i].power_w, s[i].power_w);
  }
  EXPECT_EQ(format_measurements(back), text);
}

TEST(Measurements, SchemaChecks) {
  EXPECT_ERROR_CODE(parse_measurements("run,kind\n"), ErrorCode::SchemaError);
  const std::string h = "run_id,kind,size,flop,mop_bytes,time_s,power_w\n";
  EXPECT_NO_THROW(parse_measurements("# comment\n" + h + "0,idle,0,0,0,1,17.9\n"));
  EXPECT_ERROR_CODE(parse_measurements(h + "0,gpu,0,0,0,1,17.9\n"), ErrorCode::SchemaError);
  EXPECT_ERROR_CODE(parse_measurements(h + "0,compute,1,0,10,1,17.9\n"), ErrorCode::SchemaError);
  EXPECT_ERROR_CODE(parse_measurements(h + "0,memory,1,10,0,1,17.9\n"), ErrorCode::SchemaError);
  EXPECT_ERROR_CODE(parse_measurements(h + "0,compute,1,10,10,0,17.9\n"), ErrorCode::SchemaError);
  EXPECT_ERROR_CODE(parse_measurements(h + "0,idle,0,0,0,1,-1\n"), ErrorCode::SchemaError);
  EXPECT_ERROR_CODE(parse_measurements(h + "0,idle,0,0,0,1\n"), ErrorCode::SchemaError);
}

TEST(Calibrate, MaxnPipelineMatchesShippedConstants) {
  auto s = synthesize_samples(GroundTruth{}, 10, 0.01, 7);
  auto d = calibrate(s, PowerMode{12, 2201, 1300, 3200}, kFP32, "orin");
  EXPECT_EQ(d.provenance, Provenance::Fitted);
  EXPECT_NEAR(d.peak_flops / 14.7e12, 1, 0.02);
  EXPECT_NEAR(d.peak_bw / 164.4e9, 1, 0.02);
  EXPECT_NEAR(d.eps_flop / 3.86e-12, 1, 0.05);
  EXPECT_NEAR(d.eps_mop / 141.38e-12, 1, 0.05);
  EXPECT_NEAR(d.static_power, 17.9, 0.1);
}

TEST(Calibrate, BitStableOnRerun) {
  auto s = synthesize_samples(GroundTruth{}, 5, 0.0, 1);
  auto a = calibrate(s, PowerMode{12, 2201, 1300, 3200}, kFP32);
  auto b = calibrate(s, PowerMode{12, 2201, 1300, 3200}, kFP32);
  EXPECT_EQ(serialize_device_config(a), serialize_device_config(b));
}

TEST(Calibrate, ShippedMeasurementFile) {
  auto s = load_measurements(testing_support::data_path("data/measurements/c12_cpu2201_gpu1300_mem3200.csv"));
  auto d = calibrate(s, PowerMode{12, 2201, 1300, 3200}, kFP32);
  EXPECT_NEAR(d.peak_flops / 14.7e12, 1, 0.03);
  EXPECT_NEAR(d.peak_bw / 164.4e9, 1, 0.03);
  EXPECT_NEAR(d.static_power, 17.9, 0.1);
}

}  // namespace
}  // namespace edgeroof
