#pragma once

#include <span>
#include <vector>

#include "inkmetrics/model.hpp"

namespace ink {

/// Step lengths at or below this many pixels are treated as sensor noise
/// (imprecise lines, finger sideslips) and removed.
inline constexpr double kStepFilterPx = 10.0;

enum class SimplifyMethod {
  rdp,              // Ramer-Douglas-Peucker at epsilon_px
  angle_threshold,  // keypoint when cumulative heading change exceeds a limit
  raw,              // keep every recorded point (pre-segmented input)
};

/// Reduce a stroke to its behaviourally meaningful points. The first and
/// last point are always kept.
std::vector<StrokePoint> select_keypoints(const Stroke& stroke, SimplifyMethod method,
                                          double epsilon_px,
                                          double angle_threshold_deg = 30.0);

struct Step {
  double length_px = 0.0;
  double heading_deg = 0.0;  // [0, 360)
  int stroke_id = 0;
};

struct StepSeries {
  std::vector<Step> steps;  // stroke order, grouped by stroke_id
};

struct StrokeKeypoints {
  int stroke_id = 0;
  std::vector<StrokePoint> points;
};

/// Consecutive within-stroke keypoint pairs become steps; steps never span
/// stroke boundaries and lengths <= kStepFilterPx are discarded. An empty
/// result is legal (everything filtered).
StepSeries extract_steps(std::span<const StrokeKeypoints> keypoints);

/// Keypoint selection plus step extraction over a whole session.
StepSeries session_steps(const DrawingSession& session, SimplifyMethod method,
                         double epsilon_px);

struct TurningAngles {
  std::vector<double> angles_deg;  // each in [0, 180]
};

/// Absolute heading change between consecutive steps, folded into [0, 180].
/// Pairs never straddle strokes unless across_strokes is set.
TurningAngles turning_angles(const StepSeries& series, bool across_strokes = false);

}  // namespace ink
