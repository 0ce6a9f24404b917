#include "inkmetrics/detail/svg.hpp"

#include <cstdio>

namespace ink::detail {

namespace {

std::string f2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

SvgCanvas::SvgCanvas(double width, double height) : width_(width), height_(height) {}

void SvgCanvas::line(double x1, double y1, double x2, double y2, const std::string& stroke,
                     double width) {
  body_ += "  <line x1=\"" + f2(x1) + "\" y1=\"" + f2(y1) + "\" x2=\"" + f2(x2) +
           "\" y2=\"" + f2(y2) + "\" stroke=\"" + stroke + "\" stroke-width=\"" +
           f2(width) + "\"/>\n";
}

void SvgCanvas::rect(double x, double y, double w, double h, const std::string& fill,
                     const std::string& stroke) {
  body_ += "  <rect x=\"" + f2(x) + "\" y=\"" + f2(y) + "\" width=\"" + f2(w) +
           "\" height=\"" + f2(h) + "\" fill=\"" + fill + "\" stroke=\"" + stroke +
           "\"/>\n";
}

void SvgCanvas::circle(double cx, double cy, double r, const std::string& fill) {
  body_ += "  <circle cx=\"" + f2(cx) + "\" cy=\"" + f2(cy) + "\" r=\"" + f2(r) +
           "\" fill=\"" + fill + "\"/>\n";
}

void SvgCanvas::polyline(const std::vector<std::pair<double, double>>& pts,
                         const std::string& stroke, double width) {
  body_ += "  <polyline points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) body_ += ' ';
    body_ += f2(pts[i].first) + "," + f2(pts[i].second);
  }
  body_ += "\" fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" + f2(width) +
           "\"/>\n";
}

void SvgCanvas::text(double x, double y, const std::string& s, double size,
                     const std::string& anchor, const std::string& fill) {
  body_ += "  <text x=\"" + f2(x) + "\" y=\"" + f2(y) + "\" font-size=\"" + f2(size) +
           "\" font-family=\"monospace\" text-anchor=\"" + anchor + "\" fill=\"" + fill +
           "\">" + xml_escape(s) + "</text>\n";
}

std::string SvgCanvas::str() const {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         f2(width_) + "\" height=\"" + f2(height_) + "\" viewBox=\"0 0 " + f2(width_) +
         " " + f2(height_) + "\">\n" + body_ + "</svg>\n";
}

}  // namespace ink::detail
