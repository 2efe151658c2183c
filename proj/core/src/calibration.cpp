// Copyright 2026 The edgeroof Authors.
// SPDX-License-Identifier: Apache-2.0

#include "edgeroof/calibration.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include "edgeroof/error.hpp"
#include "edgeroof/format.hpp"
#include "edgeroof/model_io.hpp"

namespace edgeroof {

namespace {

constexpr std::string_view kHeader = "run_id,kind,size,flop,mop_bytes,time_s,power_w";

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

[[noreturn]] void bad_row(std::size_t line, const std::string& what) {
  fail(ErrorCode::SchemaError, "measurements line " + std::to_string(line) + ": " + what);
}

template <typename T>
T parse_number(std::string_view cell, std::size_t line, const char* column) {
  T value{};
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) {
    bad_row(line, std::string("bad ") + column + " '" + std::string(cell) + "'");
  }
  return value;
}

SampleKind parse_kind(std::string_view cell, std::size_t line) {
  if (cell == "compute") return SampleKind::Compute;
  if (cell == "memory") return SampleKind::Memory;
  if (cell == "idle") return SampleKind::Idle;
  if (cell == "workload") return SampleKind::Workload;
  bad_row(line, "unknown kind '" + std::string(cell) + "'");
}

void check_sample(const MeasurementSample& s, std::size_t line) {
  auto finite = std::isfinite(s.flop) && std::isfinite(s.mop) && std::isfinite(s.time_s) && std::isfinite(s.power_w);
  if (!finite) bad_row(line, "non-finite value");
  if (s.flop < 0 || s.mop < 0) bad_row(line, "flop and mop_bytes must be >= 0");
  if (s.power_w < 0) bad_row(line, "power_w must be >= 0");
  if (s.kind == SampleKind::Idle ? s.time_s < 0 : !(s.time_s > 0)) bad_row(line, "time_s must be > 0");
  if (s.kind == SampleKind::Compute && !(s.flop > 0)) bad_row(line, "compute samples need flop > 0");
  if (s.kind == SampleKind::Memory && !(s.mop > 0)) bad_row(line, "memory samples need mop_bytes > 0");
}

double peak_of(const std::vector<MeasurementSample>& samples, SampleKind kind) {
  std::map<std::int64_t, std::vector<double>> by_size;
  for (const auto& s : samples) {
    if (s.kind != kind) continue;
    double work = kind == SampleKind::Compute ? s.flop : s.mop;
    by_size[s.size].push_back(work / s.time_s);
  }
  if (by_size.empty()) fail(ErrorCode::MissingKind, "no " + std::string(to_string(kind)) + " samples");
  double best = 0.0;
  for (auto& [size, throughputs] : by_size) best = std::max(best, median(std::move(throughputs)));
  return best;
}

}  // namespace

std::string_view to_string(SampleKind kind) noexcept {
  switch (kind) {
    case SampleKind::Compute:
      return "compute";
    case SampleKind::Memory:
      return "memory";
    case SampleKind::Idle:
      return "idle";
    case SampleKind::Workload:
      return "workload";
  }
  return "compute";
}

std::vector<MeasurementSample> parse_measurements(std::string_view csv) {
  std::vector<MeasurementSample> out;
  bool header_seen = false;
  std::size_t line_no = 0;
  while (!csv.empty()) {
    auto nl = csv.find('\n');
    auto line = trim(csv.substr(0, nl));
    csv.remove_prefix(nl == std::string_view::npos ? csv.size() : nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != kHeader) bad_row(line_no, "header must be exactly '" + std::string(kHeader) + "'");
      header_seen = true;
      continue;
    }
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
      auto comma = line.find(',', start);
      cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (cells.size() != 7) bad_row(line_no, "expected 7 columns, got " + std::to_string(cells.size()));
    MeasurementSample s;
    s.run_id = parse_number<std::int64_t>(cells[0], line_no, "run_id");
    s.kind = parse_kind(cells[1], line_no);
    s.size = parse_number<std::int64_t>(cells[2], line_no, "size");
    s.flop = parse_number<double>(cells[3], line_no, "flop");
    s.mop = parse_number<double>(cells[4], line_no, "mop_bytes");
    s.time_s = parse_number<double>(cells[5], line_no, "time_s");
    s.power_w = parse_number<double>(cells[6], line_no, "power_w");
    check_sample(s, line_no);
    out.push_back(s);
  }
  if (!header_seen) fail(ErrorCode::SchemaError, "measurements: missing header");
  return out;
}

std::vector<MeasurementSample> load_measurements(const std::string& path) {
  try {
    return parse_measurements(read_text_file(path));
  } catch (const Error& e) {
    throw e.with_context(path);
  }
}

std::string format_measurements(const std::vector<MeasurementSample>& samples) {
  std::ostringstream out;
  out << kHeader << '\n';
  for (const auto& s : samples) {
    out << s.run_id << ',' << to_string(s.kind) << ',' << s.size << ',' << format_sig(s.flop, 17) << ','
        << format_sig(s.mop, 17) << ',' << format_sig(s.time_s, 17) << ',' << format_sig(s.power_w, 17) << '\n';
  }
  return out.str();
}

double median(std::vector<double> values) {
  if (values.empty()) fail(ErrorCode::InvalidArgument, "median of an empty set");
  std::sort(values.begin(), values.end());
  auto n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

Peaks fit_peaks(const std::vector<MeasurementSample>& samples) {
  return {peak_of(samples, SampleKind::Compute), peak_of(samples, SampleKind::Memory)};
}

double measure_static_power(const std::vector<MeasurementSample>& samples) {
  std::vector<double> powers;
  for (const auto& s : samples) {
    if (s.kind == SampleKind::Idle) powers.push_back(s.power_w);
  }
  if (powers.empty()) fail(ErrorCode::MissingKind, "no idle samples");
  return median(std::move(powers));
}

FitResult fit_energy_coefficients(const std::vector<MeasurementSample>& samples, double static_power) {
  if (!(static_power >= 0)) fail(ErrorCode::InvalidArgument, "static power must be >= 0");
  std::vector<const MeasurementSample*> rows;
  for (const auto& s : samples) {
    if (s.kind != SampleKind::Idle) rows.push_back(&s);
  }
  const auto m = static_cast<Eigen::Index>(rows.size());

  Eigen::MatrixXd A(m, 2);
  Eigen::VectorXd y(m);
  std::size_t below_static = 0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& s = *rows[static_cast<std::size_t>(i)];
    A(i, 0) = s.flop;
    A(i, 1) = s.mop;
    y(i) = s.energy() - static_power * s.time_s;
    below_static += y(i) < 0;
  }
  if (m > 0 && 2 * below_static > static_cast<std::size_t>(m)) {
    fail(ErrorCode::NegativeEnergy, std::to_string(below_static) + " of " + std::to_string(m) +
                                        " samples use less energy than static power alone; check pi0");
  }

  FitResult fit;
  fit.n_samples = m;
  fit.eps_flop_identified = m > 0 && A.col(0).cwiseAbs().maxCoeff() > 0;
  fit.eps_mop_identified = m > 0 && A.col(1).cwiseAbs().maxCoeff() > 0;

  std::vector<Eigen::Index> cols;
  if (fit.eps_flop_identified) cols.push_back(0);
  if (fit.eps_mop_identified) cols.push_back(1);
  if (cols.empty()) fail(ErrorCode::RankDeficient, "no sample has W > 0 or Q > 0");
  if (m < static_cast<Eigen::Index>(cols.size())) {
    fail(ErrorCode::RankDeficient, "need at least " + std::to_string(cols.size()) + " samples");
  }

  // Unit-norm columns keep W (~1e12) and Q (~1e9) comparable.
  Eigen::MatrixXd scaled(m, static_cast<Eigen::Index>(cols.size()));
  std::vector<double> norms;
  for (std::size_t k = 0; k < cols.size(); ++k) {
    double norm = A.col(cols[k]).norm();
    norms.push_back(norm);
    scaled.col(static_cast<Eigen::Index>(k)) = A.col(cols[k]) / norm;
  }
  if (cols.size() == 2) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(scaled);
    auto sv = svd.singularValues();
    if (sv(1) <= 1e-9 * sv(0)) fail(ErrorCode::RankDeficient, "W and Q columns are collinear");
  }

  double y_norm = y.norm();
  Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(2);
  if (y_norm > 0) {
    Eigen::VectorXd yn = y / y_norm;
    std::vector<double> a_rows(static_cast<std::size_t>(m) * cols.size());
    for (Eigen::Index i = 0; i < m; ++i) {
      for (std::size_t k = 0; k < cols.size(); ++k) {
        a_rows[static_cast<std::size_t>(i) * cols.size() + k] = scaled(i, static_cast<Eigen::Index>(k));
      }
    }
    auto z = nnls(a_rows, cols.size(), {yn.data(), yn.data() + m});
    for (std::size_t k = 0; k < cols.size(); ++k) coeffs(cols[k]) = z[k] * y_norm / norms[k];
  }

  fit.eps_flop = coeffs(0);
  fit.eps_mop = coeffs(1);
  Eigen::VectorXd r = y - A * coeffs;
  fit.residual_rms = y_norm > 0 ? r.norm() / y_norm : r.norm();
  return fit;
}

DeviceRoofline build_device_roofline(const Peaks& peaks, double static_power, const FitResult& fit,
                                     const PowerMode& mode, Precision precision, std::string device) {
  DeviceRoofline d;
  d.device = std::move(device);
  d.mode = mode;
  d.precision = precision;
  d.peak_flops = peaks.peak_flops;
  d.peak_bw = peaks.peak_bw;
  d.eps_flop = fit.eps_flop;
  d.eps_mop = fit.eps_mop;
  d.static_power = static_power;
  d.provenance = Provenance::Fitted;
  std::ostringstream note;
  note << "fit over " << fit.n_samples << " samples, relative residual " << format_sig(fit.residual_rms, 4);
  if (!fit.eps_flop_identified) note << "; eps_flop unidentifiable";
  if (!fit.eps_mop_identified) note << "; eps_mop unidentifiable";
  d.note = note.str();
  d.validate();
  return d;
}

DeviceRoofline calibrate(const std::vector<MeasurementSample>& samples, const PowerMode& mode, Precision precision,
                         std::string device) {
  auto peaks = fit_peaks(samples);
  auto pi0 = measure_static_power(samples);
  auto fit = fit_energy_coefficients(samples, pi0);
  return build_device_roofline(peaks, pi0, fit, mode, precision, std::move(device));
}

}  // namespace edgeroof
