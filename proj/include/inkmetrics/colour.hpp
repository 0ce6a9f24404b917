#pragma once

#include <array>
#include <map>

#include "inkmetrics/model.hpp"

namespace ink {

/// Colour usage profile of a drawing, computed analytically from stroke
/// geometry and the palette rather than from rasterized pixels.
struct ColourSummary {
  int n_colours = 0;  // palette entries touched, taps included
  std::map<int, double> per_colour_length_px;
  double mean_profile = 0.0;  // length-weighted mean channel intensity, [0, 255]
  double sd_profile = 0.0;    // pooled channel spread, [0, 127.5]
  std::array<double, 3> channel_means{0.0, 0.0, 0.0};
};

/// Weights each used colour by its share of the inked length; every colour
/// contributes its three channel intensities to the pooled distribution.
/// Tap-only sessions (zero total length) fall back to equal weights.
ColourSummary colour_summary(const DrawingSession& session);

}  // namespace ink
