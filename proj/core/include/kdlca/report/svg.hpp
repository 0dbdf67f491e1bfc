// SPDX-License-Identifier: Apache-2.0
//
// Hand-emitted SVG charts. Output depends only on the inputs, so identical
// data yields byte-identical files.
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace kdlca::report::svg {

class Canvas {
 public:
  Canvas(double width, double height);

  void rect(double x, double y, double w, double h, std::string_view fill,
            std::string_view tooltip = {});
  void line(double x1, double y1, double x2, double y2, std::string_view stroke,
            double width = 1.0, bool dashed = false, std::string_view extra_attrs = {});
  void polyline(const std::vector<std::pair<double, double>>& points, std::string_view stroke,
                double width = 1.5);
  void circle(double cx, double cy, double r, std::string_view fill,
              std::string_view tooltip = {});
  void text(double x, double y, std::string_view content, double size = 11.0,
            std::string_view anchor = "start", double rotate = 0.0);

  [[nodiscard]] std::string str() const;

 private:
  double width_;
  double height_;
  std::string body_;
};

/// Linear map from a data interval onto a pixel interval.
struct Scale {
  double d0 = 0.0;
  double d1 = 1.0;
  double p0 = 0.0;
  double p1 = 1.0;

  [[nodiscard]] double operator()(double v) const noexcept;
};

/// Round tick positions covering [lo, hi].
std::vector<double> nice_ticks(double lo, double hi, int target = 5);

std::string escape(std::string_view text);

struct StackedBar {
  std::string label;
  std::vector<double> values;  ///< one per series, nonnegative
};

struct StackedBarChart {
  std::string title;
  std::string y_label;
  std::vector<std::string> series;
  std::vector<StackedBar> bars;
};

std::string render(const StackedBarChart& chart);

struct CostLine {
  std::string label;
  double intercept = 0.0;
  double slope = 0.0;
  bool reference = false;
};

struct Marker {
  double x = 0.0;
  double y = 0.0;
  std::string label;
};

struct AmortizationChart {
  std::string title;
  double x_max = 1.0;
  std::vector<CostLine> lines;
  std::vector<Marker> markers;
};

std::string render(const AmortizationChart& chart);

struct ScatterPoint {
  std::string label;
  double x = 0.0;
  double y = 0.0;
  double y_low = 0.0;
  double y_high = 0.0;
  bool on_frontier = false;
};

struct FrontierChart {
  std::string title;
  std::vector<ScatterPoint> points;
  std::optional<double> teacher_quality;
};

std::string render(const FrontierChart& chart);

struct PairedBar {
  std::string label;
  double low = 0.0;
  double high = 0.0;
};

struct PairedBarChart {
  std::string title;
  std::vector<PairedBar> bars;
};

std::string render(const PairedBarChart& chart);

}  // namespace kdlca::report::svg
