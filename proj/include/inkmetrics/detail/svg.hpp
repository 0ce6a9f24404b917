#pragma once

#include <string>
#include <utility>
#include <vector>

namespace ink::detail {

/// Minimal deterministic SVG writer. Coordinates render with two decimals
/// so identical inputs always serialize to identical bytes.
class SvgCanvas {
 public:
  SvgCanvas(double width, double height);

  void line(double x1, double y1, double x2, double y2, const std::string& stroke,
            double width = 1.0);
  void rect(double x, double y, double w, double h, const std::string& fill,
            const std::string& stroke = "none");
  void circle(double cx, double cy, double r, const std::string& fill);
  void polyline(const std::vector<std::pair<double, double>>& pts,
                const std::string& stroke, double width = 1.0);
  void text(double x, double y, const std::string& s, double size = 12.0,
            const std::string& anchor = "start", const std::string& fill = "#000000");

  std::string str() const;

 private:
  double width_;
  double height_;
  std::string body_;
};

}  // namespace ink::detail
