// Copyright 2026 The edgeroof Authors.
// SPDX-License-Identifier: Apache-2.0

#include "edgeroof/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "edgeroof/error.hpp"
#include "edgeroof/format.hpp"

namespace edgeroof {

namespace {

constexpr double kWidth = 800, kHeight = 560;
constexpr double kLeft = 90, kRight = 30, kTop = 50, kBottom = 60;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2",
                                    "#17becf"};

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string attr(double v) { return format_sig(v, 10); }

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

double curve(const DeviceRoofline& d, PlotVariant v, double ai) {
  switch (v) {
    case PlotVariant::Time:
      return attainable_performance(d, ai);
    case PlotVariant::Energy:
      return energy_efficiency_bound(d, ai, true);
    case PlotVariant::EnergyNoStatic:
      return energy_efficiency_bound(d, ai, false);
  }
  return 0.0;
}

double point_y(const WorkloadPoint& p, PlotVariant v) {
  return v == PlotVariant::Time ? p.achieved_perf : p.achieved_eff;
}

struct LogAxis {
  double lo, hi, pix_lo, pix_hi;
  double map(double v) const {
    double t = (std::log10(v) - std::log10(lo)) / (std::log10(hi) - std::log10(lo));
    return pix_lo + t * (pix_hi - pix_lo);
  }
};

void check_range(const AxisRange& r, const char* name) {
  if (!(r.lo > 0) || !(r.hi > r.lo) || !std::isfinite(r.hi)) {
    fail(ErrorCode::InvalidArgument, std::string(name) + " range must satisfy 0 < lo < hi");
  }
}

std::vector<double> curve_samples(const DeviceRoofline& d, PlotVariant v, const AxisRange& r) {
  std::vector<double> xs;
  double beta = time_balance_point(d);
  if (v == PlotVariant::Time) {
    xs = {r.lo, r.hi};
  } else {
    const double a = std::log10(r.lo), b = std::log10(r.hi);
    for (int i = 0; i < kEnergyCurveSamples; ++i) {
      xs.push_back(std::pow(10.0, a + (b - a) * i / (kEnergyCurveSamples - 1)));
    }
    xs.front() = r.lo;
    xs.back() = r.hi;
  }
  // The time kink (also the branch switch of the static energy curve).
  if (beta > r.lo && beta < r.hi) xs.push_back(beta);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

}  // namespace

AxisRange auto_ai_range(const PlotSpec& spec) {
  double beta = 0.0;
  for (const auto& d : spec.rooflines) beta = std::max(beta, time_balance_point(d));
  double lo = beta / 100.0;
  double hi = 10.0 * beta;
  bool any = false;
  double pmin = 0.0, pmax = 0.0;
  for (const auto& p : spec.points) {
    if (!(p.ai > 0) || !std::isfinite(p.ai)) continue;
    pmin = any ? std::min(pmin, p.ai) : p.ai;
    pmax = any ? std::max(pmax, p.ai) : p.ai;
    any = true;
  }
  if (any) {
    lo = pmin / 10.0;
    hi = std::max(hi, pmax * 10.0);
  }
  return {lo, hi};
}

std::string render_roofline_svg(const PlotSpec& spec) {
  if (spec.rooflines.empty()) fail(ErrorCode::EmptySpec, "plot needs at least one roofline");
  for (const auto& d : spec.rooflines) d.validate();
  const auto xr = spec.ai_range.value_or(auto_ai_range(spec));
  check_range(xr, "AI");

  std::vector<std::vector<double>> xs;
  double ymin = 0, ymax = 0;
  bool seeded = false;
  auto widen = [&](double y) {
    if (!(y > 0) || !std::isfinite(y)) return;
    ymin = seeded ? std::min(ymin, y) : y;
    ymax = seeded ? std::max(ymax, y) : y;
    seeded = true;
  };
  for (const auto& d : spec.rooflines) {
    xs.push_back(curve_samples(d, spec.variant, xr));
    for (double x : xs.back()) widen(curve(d, spec.variant, x));
  }
  for (const auto& p : spec.points) {
    if (p.ai >= xr.lo && p.ai <= xr.hi) widen(point_y(p, spec.variant));
  }
  AxisRange yr = spec.y_range.value_or(AxisRange{ymin / 2.0, ymax * 2.0});
  if (!seeded && !spec.y_range) yr = {1.0, 10.0};
  check_range(yr, "Y");

  const LogAxis X{xr.lo, xr.hi, kLeft, kWidth - kRight};
  const LogAxis Y{yr.lo, yr.hi, kHeight - kBottom, kTop};
  const char* variant = spec.variant == PlotVariant::Time     ? "time"
                        : spec.variant == PlotVariant::Energy ? "energy"
                                                              : "energy-no-static";
  const char* y_unit = spec.variant == PlotVariant::Time ? "FLOP/s" : "FLOP/J";

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" data-variant=\"" << variant << "\" data-ai-min=\""
      << attr(xr.lo) << "\" data-ai-max=\"" << attr(xr.hi) << "\" data-y-min=\"" << attr(yr.lo) << "\" data-y-max=\""
      << attr(yr.hi) << "\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
  if (!spec.title.empty()) {
    svg << "<text x=\"" << px(kWidth / 2) << "\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"16\">" << xml_escape(spec.title) << "</text>\n";
  }

  // Frame and decade grid.
  svg << "<g class=\"axes\" stroke=\"#444\" fill=\"none\">\n";
  svg << "<rect x=\"" << px(kLeft) << "\" y=\"" << px(kTop) << "\" width=\"" << px(kWidth - kLeft - kRight)
      << "\" height=\"" << px(kHeight - kTop - kBottom) << "\"/>\n</g>\n";
  svg << "<g class=\"ticks\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#444\">\n";
  for (int k = static_cast<int>(std::ceil(std::log10(xr.lo) - 1e-12)); std::pow(10.0, k) <= xr.hi * (1 + 1e-12); ++k) {
    double x = X.map(std::pow(10.0, k));
    svg << "<line x1=\"" << px(x) << "\" y1=\"" << px(kTop) << "\" x2=\"" << px(x) << "\" y2=\""
        << px(kHeight - kBottom) << "\" stroke=\"#ddd\"/>";
    svg << "<text x=\"" << px(x) << "\" y=\"" << px(kHeight - kBottom + 16) << "\" text-anchor=\"middle\">"
        << format_sig(std::pow(10.0, k)) << "</text>\n";
  }
  for (int k = static_cast<int>(std::ceil(std::log10(yr.lo) - 1e-12)); std::pow(10.0, k) <= yr.hi * (1 + 1e-12); ++k) {
    double y = Y.map(std::pow(10.0, k));
    svg << "<line x1=\"" << px(kLeft) << "\" y1=\"" << px(y) << "\" x2=\"" << px(kWidth - kRight) << "\" y2=\""
        << px(y) << "\" stroke=\"#ddd\"/>";
    svg << "<text x=\"" << px(kLeft - 6) << "\" y=\"" << px(y + 4) << "\" text-anchor=\"end\">"
        << format_sig(std::pow(10.0, k)) << "</text>\n";
  }
  svg << "<text x=\"" << px((kLeft + kWidth - kRight) / 2) << "\" y=\"" << px(kHeight - 18)
      << "\" text-anchor=\"middle\">Arithmetic intensity (FLOP/byte)</text>\n";
  svg << "<text x=\"20\" y=\"" << px((kTop + kHeight - kBottom) / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
      << px((kTop + kHeight - kBottom) / 2) << ")\">" << y_unit << "</text>\n";
  svg << "</g>\n";

  svg << "<defs><clipPath id=\"plot-area\"><rect x=\"" << px(kLeft) << "\" y=\"" << px(kTop) << "\" width=\""
      << px(kWidth - kLeft - kRight) << "\" height=\"" << px(kHeight - kTop - kBottom) << "\"/></clipPath></defs>\n";

  for (std::size_t i = 0; i < spec.rooflines.size(); ++i) {
    const auto& d = spec.rooflines[i];
    const char* color = kPalette[i % std::size(kPalette)];
    auto diag = roofline_diagnostics(d);
    double beta_eps = spec.variant == PlotVariant::EnergyNoStatic ? diag.balance.beta_eps_zero : diag.balance.beta_eps;
    svg << "<g class=\"roofline\" data-mode=\"" << d.mode.key() << "\" data-device=\"" << xml_escape(d.device)
        << "\" data-beta-tau=\"" << attr(diag.balance.beta_tau) << "\" data-beta-eps=\"" << attr(beta_eps)
        << "\" data-y-left=\"" << attr(curve(d, spec.variant, xr.lo)) << "\" data-y-right=\""
        << attr(curve(d, spec.variant, xr.hi)) << "\" data-samples=\"" << xs[i].size() << "\">\n";
    svg << "<polyline clip-path=\"url(#plot-area)\" fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"2\" points=\"";
    for (std::size_t k = 0; k < xs[i].size(); ++k) {
      double y = curve(d, spec.variant, xs[i][k]);
      if (!(y > 0)) continue;
      svg << (k ? " " : "") << px(X.map(xs[i][k])) << ',' << px(Y.map(y));
    }
    svg << "\"/>\n";
    if (spec.annotate_balance) {
      auto marker = [&](const char* cls, double beta, const char* dash) {
        if (!(beta > xr.lo && beta < xr.hi)) return;
        double x = X.map(beta);
        svg << "<line class=\"" << cls << "\" data-x=\"" << attr(beta) << "\" x1=\"" << px(x) << "\" y1=\""
            << px(kTop) << "\" x2=\"" << px(x) << "\" y2=\"" << px(kHeight - kBottom) << "\" stroke=\"" << color
            << "\" stroke-dasharray=\"" << dash << "\"/>\n";
      };
      marker("beta-tau", diag.balance.beta_tau, "6 4");
      if (spec.variant != PlotVariant::Time) marker("beta-eps", beta_eps, "2 3");
    }
    svg << "<text x=\"" << px(kLeft + 10) << "\" y=\"" << px(kTop + 16 + 14 * static_cast<double>(i))
        << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << color << "\">" << xml_escape(d.device) << ' '
        << d.mode.key() << "</text>\n";
    svg << "</g>\n";
  }

  svg << "<g class=\"points\" font-family=\"sans-serif\" font-size=\"11\">\n";
  for (const auto& p : spec.points) {
    double y = point_y(p, spec.variant);
    if (!(p.ai >= xr.lo && p.ai <= xr.hi) || !(y >= yr.lo && y <= yr.hi)) continue;
    double cx = X.map(p.ai), cy = Y.map(y);
    svg << "<circle class=\"point\" data-label=\"" << xml_escape(p.label) << "\" data-ai=\"" << attr(p.ai)
        << "\" data-y=\"" << attr(y) << "\" cx=\"" << px(cx) << "\" cy=\"" << px(cy)
        << "\" r=\"4\" fill=\"black\"/>";
    svg << "<text x=\"" << px(cx + 6) << "\" y=\"" << px(cy - 6) << "\">" << xml_escape(p.label) << "</text>\n";
  }
  svg << "</g>\n</svg>\n";
  return svg.str();
}

}  // namespace edgeroof
