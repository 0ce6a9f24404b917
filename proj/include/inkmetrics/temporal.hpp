#pragma once

#include <cstdint>
#include <vector>

#include "inkmetrics/model.hpp"

namespace ink {

struct TemporalSummary {
  std::int64_t test_time_ms = 0;     // first to last touch, pauses included
  std::int64_t drawing_time_ms = 0;  // ink time only
  int n_sequences = 0;               // drawing + non-drawing segments
  double speed_px_per_ms = 0.0;
  double drawing_time_proportion = 0.0;  // in [0, 1]
};

TemporalSummary temporal_summary(const DrawingSession& session);

/// Gini of the drawing/non-drawing bit vector. The population formula
/// reduces to 1 - p for a binary series with bit proportion p, which makes
/// the collinearity with drawing-time proportion exact. The unbiased
/// n/(n-1) variant is available behind the flag.
double gini_binary(const BinarySeries& series, bool unbiased = false);

/// Shannon entropy (bits) of the cumulative drawing time sampled at each
/// whole second of the session.
double entropy_cumsum(const DrawingSession& session);

struct HurstEstimate {
  double h_dfa = 0.0;
  double h_rs = 0.0;
};

/// Detrended fluctuation analysis and rescaled-range estimates of the Hurst
/// exponent on a binary series of at least 256 samples. Slopes are clamped
/// to the reporting range [0, 2].
HurstEstimate hurst_estimators(const BinarySeries& series);

/// Dataset-level Hurst index: first principal component of the two
/// estimators across drawings, sign-aligned with h_dfa. Falls back to the
/// per-drawing mean when fewer than 3 drawings are available.
struct HurstIndex {
  std::vector<double> scores;
  bool pca_used = false;
};

HurstIndex hurst_index(const std::vector<HurstEstimate>& per_drawing);

}  // namespace ink
