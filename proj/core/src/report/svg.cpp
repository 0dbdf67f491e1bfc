// SPDX-License-Identifier: Apache-2.0
#include "kdlca/report/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace kdlca::report::svg {

namespace {

constexpr double kWidth = 760.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 190.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 90.0;

constexpr std::array<std::string_view, 8> kPalette = {
    "#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#76b7b2", "#edc948", "#b07aa1", "#9c755f"};

std::string_view color(std::size_t i) { return kPalette[i % kPalette.size()]; }

std::string num(double v) {
  std::string s = fmt::format("{:.2f}", v);
  if (s == "-0.00") s = "0.00";
  return s;
}

std::string tick_label(double v) {
  if (std::fabs(v) < 1e-12) return "0";
  return fmt::format("{:.4g}", v);
}

struct Frame {
  Scale x;
  Scale y;
};

void draw_axes(Canvas& c, const Frame& f, std::string_view title, std::string_view x_label,
               std::string_view y_label, bool x_ticks) {
  const double x0 = kLeft;
  const double x1 = kWidth - kRight;
  const double y0 = kHeight - kBottom;
  const double y1 = kTop;
  c.text(kWidth / 2, 22, title, 14, "middle");
  for (double t : nice_ticks(f.y.d0, f.y.d1)) {
    const double py = f.y(t);
    c.line(x0, py, x1, py, "#e0e0e0");
    c.text(x0 - 6, py + 4, tick_label(t), 10, "end");
  }
  if (x_ticks) {
    for (double t : nice_ticks(f.x.d0, f.x.d1)) {
      const double px = f.x(t);
      c.line(px, y0, px, y0 + 5, "#333333");
      c.text(px, y0 + 18, tick_label(t), 10, "middle");
    }
  }
  c.line(x0, y0, x1, y0, "#333333");
  c.line(x0, y0, x0, y1, "#333333");
  if (!x_label.empty()) c.text((x0 + x1) / 2, kHeight - 12, x_label, 11, "middle");
  if (!y_label.empty()) c.text(18, (y0 + y1) / 2, y_label, 11, "middle", -90);
}

void legend(Canvas& c, std::size_t row, std::string_view swatch, std::string_view label,
            bool dashed = false) {
  const double x = kWidth - kRight + 16;
  const double y = kTop + 10 + 18 * static_cast<double>(row);
  if (dashed) {
    c.line(x, y, x + 14, y, swatch, 2, true);
  } else {
    c.rect(x, y - 6, 14, 12, swatch);
  }
  c.text(x + 20, y + 4, label, 10);
}

std::pair<double, double> padded(double lo, double hi) {
  if (!(hi > lo)) {
    const double pad = std::max(std::fabs(lo) * 0.1, 1.0);
    return {lo - pad, hi + pad};
  }
  const double pad = (hi - lo) * 0.08;
  return {lo - pad, hi + pad};
}

}  // namespace

Canvas::Canvas(double width, double height) : width_(width), height_(height) {}

void Canvas::rect(double x, double y, double w, double h, std::string_view fill,
                  std::string_view tooltip) {
  body_ += fmt::format(R"(<rect x="{}" y="{}" width="{}" height="{}" fill="{}")", num(x), num(y),
                       num(w), num(h), fill);
  if (tooltip.empty()) {
    body_ += "/>\n";
  } else {
    body_ += fmt::format("><title>{}</title></rect>\n", escape(tooltip));
  }
}

void Canvas::line(double x1, double y1, double x2, double y2, std::string_view stroke,
                  double width, bool dashed, std::string_view extra_attrs) {
  body_ += fmt::format(R"(<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{}" stroke-width="{}")",
                       num(x1), num(y1), num(x2), num(y2), stroke, num(width));
  if (dashed) body_ += R"( stroke-dasharray="6,4")";
  if (!extra_attrs.empty()) body_ += fmt::format(" {}", extra_attrs);
  body_ += "/>\n";
}

void Canvas::polyline(const std::vector<std::pair<double, double>>& points,
                      std::string_view stroke, double width) {
  std::string coords;
  for (const auto& [x, y] : points) {
    if (!coords.empty()) coords += ' ';
    coords += num(x) + ',' + num(y);
  }
  body_ += fmt::format(R"(<polyline points="{}" fill="none" stroke="{}" stroke-width="{}"/>)",
                       coords, stroke, num(width));
  body_ += '\n';
}

void Canvas::circle(double cx, double cy, double r, std::string_view fill,
                    std::string_view tooltip) {
  body_ += fmt::format(R"(<circle cx="{}" cy="{}" r="{}" fill="{}")", num(cx), num(cy), num(r),
                       fill);
  if (tooltip.empty()) {
    body_ += "/>\n";
  } else {
    body_ += fmt::format("><title>{}</title></circle>\n", escape(tooltip));
  }
}

void Canvas::text(double x, double y, std::string_view content, double size,
                  std::string_view anchor, double rotate) {
  body_ += fmt::format(R"(<text x="{}" y="{}" font-size="{}" text-anchor="{}")", num(x), num(y),
                       num(size), anchor);
  if (rotate != 0.0) body_ += fmt::format(" transform=\"rotate({} {} {})\"", num(rotate), num(x), num(y));
  body_ += fmt::format(">{}</text>\n", escape(content));
}

std::string Canvas::str() const {
  return fmt::format(
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
      "viewBox=\"0 0 {0} {1}\" font-family=\"sans-serif\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{2}</svg>\n",
      num(width_), num(height_), body_);
}

double Scale::operator()(double v) const noexcept {
  if (d1 == d0) return (p0 + p1) / 2;
  return p0 + (v - d0) / (d1 - d0) * (p1 - p0);
}

std::vector<double> nice_ticks(double lo, double hi, int target) {
  if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) return {lo};
  const double raw = (hi - lo) / std::max(target, 1);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    step = m * mag;
    if (step >= raw) break;
  }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step) * step; t <= hi + step * 1e-9; t += step) {
    ticks.push_back(std::fabs(t) < step * 1e-9 ? 0.0 : t);
  }
  return ticks;
}

std::string escape(std::string_view text) {
  std::string out;
  for (char ch : text) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

std::string render(const StackedBarChart& chart) {
  Canvas c(kWidth, kHeight);
  double top = 0.0;
  for (const auto& bar : chart.bars) {
    double sum = 0.0;
    for (double v : bar.values) sum += std::max(v, 0.0);
    top = std::max(top, sum);
  }
  if (top <= 0.0) top = 1.0;
  const Frame f{{0, 1, kLeft, kWidth - kRight}, {0, top * 1.05, kHeight - kBottom, kTop}};
  draw_axes(c, f, chart.title, "", chart.y_label, false);

  const double slot = (kWidth - kRight - kLeft) / static_cast<double>(std::max<std::size_t>(chart.bars.size(), 1));
  const double bar_w = slot * 0.6;
  for (std::size_t b = 0; b < chart.bars.size(); ++b) {
    const auto& bar = chart.bars[b];
    const double x = kLeft + slot * static_cast<double>(b) + (slot - bar_w) / 2;
    double base = 0.0;
    for (std::size_t s = 0; s < bar.values.size(); ++s) {
      const double v = std::max(bar.values[s], 0.0);
      if (v <= 0.0) continue;
      const double y_hi = f.y(base + v);
      const double y_lo = f.y(base);
      const std::string name = s < chart.series.size() ? chart.series[s] : std::string();
      c.rect(x, y_hi, bar_w, y_lo - y_hi, color(s),
             fmt::format("{} {}: {:.6g} kgCO2e", bar.label, name, v));
      base += v;
    }
    c.text(x + bar_w / 2, kHeight - kBottom + 14, bar.label, 10, "end", -35);
  }
  for (std::size_t s = 0; s < chart.series.size(); ++s) legend(c, s, color(s), chart.series[s]);
  return c.str();
}

std::string render(const AmortizationChart& chart) {
  Canvas c(kWidth, kHeight);
  const double x_max = chart.x_max > 0.0 ? chart.x_max : 1.0;
  double y_lo = std::numeric_limits<double>::infinity();
  double y_hi = -std::numeric_limits<double>::infinity();
  for (const auto& l : chart.lines) {
    for (double x : {0.0, x_max}) {
      y_lo = std::min(y_lo, l.intercept + l.slope * x);
      y_hi = std::max(y_hi, l.intercept + l.slope * x);
    }
  }
  if (chart.lines.empty()) {
    y_lo = 0.0;
    y_hi = 1.0;
  }
  y_lo = std::min(y_lo, 0.0);
  const auto [d0, d1] = padded(y_lo, y_hi);
  const Frame f{{0, x_max, kLeft, kWidth - kRight}, {std::max(d0, 0.0), d1, kHeight - kBottom, kTop}};
  draw_axes(c, f, chart.title, "served tokens X", "total kgCO2e", true);

  std::size_t colored = 0;
  for (std::size_t i = 0; i < chart.lines.size(); ++i) {
    const auto& l = chart.lines[i];
    const std::string_view stroke = l.reference ? std::string_view("#000000") : color(colored++);
    c.line(f.x(0), f.y(l.intercept), f.x(x_max), f.y(l.intercept + l.slope * x_max), stroke,
           l.reference ? 2.5 : 1.5, l.reference);
    legend(c, i, stroke, l.label, l.reference);
  }
  for (const auto& m : chart.markers) {
    c.circle(f.x(m.x), f.y(m.y), 4, "#d62728", m.label);
  }
  return c.str();
}

std::string render(const FrontierChart& chart) {
  Canvas c(kWidth, kHeight);
  double x_lo = std::numeric_limits<double>::infinity();
  double x_hi = -x_lo;
  double y_lo = x_lo;
  double y_hi = -x_lo;
  for (const auto& p : chart.points) {
    x_lo = std::min(x_lo, p.x);
    x_hi = std::max(x_hi, p.x);
    y_lo = std::min({y_lo, p.y_low, p.y});
    y_hi = std::max({y_hi, p.y_high, p.y});
  }
  if (chart.teacher_quality) {
    y_lo = std::min(y_lo, *chart.teacher_quality);
    y_hi = std::max(y_hi, *chart.teacher_quality);
  }
  if (chart.points.empty()) {
    x_lo = 0;
    x_hi = 1;
    if (!chart.teacher_quality) {
      y_lo = 0;
      y_hi = 1;
    }
  }
  const auto [xd0, xd1] = padded(x_lo, x_hi);
  const auto [yd0, yd1] = padded(y_lo, y_hi);
  const Frame f{{xd0, xd1, kLeft, kWidth - kRight}, {yd0, yd1, kHeight - kBottom, kTop}};
  draw_axes(c, f, chart.title, "production footprint (kgCO2e)", "mean quality", true);

  std::vector<const ScatterPoint*> frontier;
  for (const auto& p : chart.points) {
    if (p.on_frontier) frontier.push_back(&p);
  }
  std::stable_sort(frontier.begin(), frontier.end(),
                   [](const ScatterPoint* a, const ScatterPoint* b) { return a->x < b->x; });
  if (frontier.size() > 1) {
    std::vector<std::pair<double, double>> poly;
    for (const auto* p : frontier) poly.emplace_back(f.x(p->x), f.y(p->y));
    c.polyline(poly, "#d62728", 2);
  }
  if (chart.teacher_quality) {
    const double y = f.y(*chart.teacher_quality);
    c.line(kLeft, y, kWidth - kRight, y, "#555555", 1.5, true,
           fmt::format(R"(data-quality="{}")", *chart.teacher_quality));
  }
  for (const auto& p : chart.points) {
    const double px = f.x(p.x);
    c.line(px, f.y(p.y_low), px, f.y(p.y_high), "#7f7f7f", 1);
    c.line(px - 4, f.y(p.y_low), px + 4, f.y(p.y_low), "#7f7f7f", 1);
    c.line(px - 4, f.y(p.y_high), px + 4, f.y(p.y_high), "#7f7f7f", 1);
    c.circle(px, f.y(p.y), p.on_frontier ? 5 : 3.5, p.on_frontier ? "#d62728" : "#4e79a7",
             fmt::format("{}: {:.6g} kgCO2e, quality {:.6g} [{:.6g}, {:.6g}]", p.label, p.x, p.y,
                         p.y_low, p.y_high));
    c.text(px + 6, f.y(p.y) - 6, p.label, 9);
  }
  legend(c, 0, "#d62728", "Pareto frontier");
  legend(c, 1, "#4e79a7", "dominated");
  if (chart.teacher_quality) legend(c, 2, "#555555", "teacher quality", true);
  return c.str();
}

std::string render(const PairedBarChart& chart) {
  const double row_h = 18.0;
  const double height =
      std::max(kHeight, kTop + 40 + row_h * static_cast<double>(chart.bars.size()) + 30);
  Canvas c(kWidth, height);
  double lo = 0.0;
  double hi = 0.0;
  for (const auto& b : chart.bars) {
    lo = std::min({lo, b.low, b.high});
    hi = std::max({hi, b.low, b.high});
  }
  if (lo == hi) {
    lo = -1.0;
    hi = 1.0;
  }
  const double left = 220.0;
  const double right = kWidth - 40.0;
  const auto [d0, d1] = padded(lo, hi);
  const Scale x{d0, d1, left, right};
  c.text(kWidth / 2, 22, chart.title, 14, "middle");
  const double y_axis_top = kTop;
  const double y_axis_bottom = kTop + row_h * static_cast<double>(chart.bars.size()) + 10;
  for (double t : nice_ticks(d0, d1)) {
    c.line(x(t), y_axis_top, x(t), y_axis_bottom, "#e0e0e0");
    c.text(x(t), y_axis_bottom + 14, tick_label(t), 10, "middle");
  }
  c.line(x(0), y_axis_top, x(0), y_axis_bottom, "#333333", 1.5);
  c.text((left + right) / 2, y_axis_bottom + 32, "Δ kgCO2e vs baseline", 11, "middle");
  for (std::size_t i = 0; i < chart.bars.size(); ++i) {
    const auto& b = chart.bars[i];
    const double y = kTop + 5 + row_h * static_cast<double>(i);
    const double half = (row_h - 4) / 2;
    const auto bar = [&](double v, double yy, std::string_view fill, std::string_view which) {
      const double a = std::min(x(0), x(v));
      const double w = std::fabs(x(v) - x(0));
      c.rect(a, yy, w, half, fill, fmt::format("{} {}: {:+.6g} kgCO2e", b.label, which, v));
    };
    bar(b.low, y, "#4e79a7", "low");
    bar(b.high, y + half, "#f28e2b", "high");
    c.text(left - 8, y + half + 4, b.label, 10, "end");
  }
  c.rect(kWidth - 170, height - 22, 12, 10, "#4e79a7");
  c.text(kWidth - 154, height - 13, "low", 10);
  c.rect(kWidth - 110, height - 22, 12, 10, "#f28e2b");
  c.text(kWidth - 94, height - 13, "high", 10);
  return c.str();
}

}  // namespace kdlca::report::svg
