#include "inkmetrics/colour.hpp"

#include <cmath>

namespace ink {

ColourSummary colour_summary(const DrawingSession& session) {
  ColourSummary out;

  std::map<int, double> length_by_colour;
  for (const Stroke& st : session.strokes) {
    double len = 0.0;
    for (std::size_t i = 1; i < st.points.size(); ++i) {
      const StrokePoint& a = st.points[i - 1];
      const StrokePoint& b = st.points[i];
      len += std::hypot(b.x_px - a.x_px, b.y_px - a.y_px);
    }
    length_by_colour[st.colour_id] += len;  // taps register with zero length
  }

  out.per_colour_length_px = length_by_colour;
  out.n_colours = static_cast<int>(length_by_colour.size());

  double total = 0.0;
  for (const auto& [colour, len] : length_by_colour) total += len;

  double mean = 0.0;
  double second_moment = 0.0;
  for (const auto& [colour, len] : length_by_colour) {
    double w = total > 0.0 ? len / total
                           : 1.0 / static_cast<double>(length_by_colour.size());
    const auto& rgb = session.palette.entries[static_cast<std::size_t>(colour)].rgb;
    for (int ch = 0; ch < 3; ++ch) {
      double v = static_cast<double>(rgb[static_cast<std::size_t>(ch)]);
      mean += w / 3.0 * v;
      second_moment += w / 3.0 * v * v;
      out.channel_means[static_cast<std::size_t>(ch)] += w * v;
    }
  }
  out.mean_profile = mean;
  double var = second_moment - mean * mean;
  out.sd_profile = var > 0.0 ? std::sqrt(var) : 0.0;
  return out;
}

}  // namespace ink
