#include "inkmetrics/segment.hpp"

#include <cmath>
#include <stdexcept>

namespace ink {

namespace {

constexpr double kPi = 3.14159265358979323846;

double point_segment_distance(const StrokePoint& p, const StrokePoint& a,
                              const StrokePoint& b) {
  double dx = b.x_px - a.x_px;
  double dy = b.y_px - a.y_px;
  double len2 = dx * dx + dy * dy;
  if (len2 == 0.0) return std::hypot(p.x_px - a.x_px, p.y_px - a.y_px);
  // Perpendicular distance to the infinite chord; RDP uses the chord, not
  // the clamped segment.
  double cross = dx * (p.y_px - a.y_px) - dy * (p.x_px - a.x_px);
  return std::fabs(cross) / std::sqrt(len2);
}

void rdp_recurse(const std::vector<StrokePoint>& pts, std::size_t lo, std::size_t hi,
                 double epsilon, std::vector<bool>& keep) {
  if (hi <= lo + 1) return;
  double best = -1.0;
  std::size_t arg = lo;
  for (std::size_t i = lo + 1; i < hi; ++i) {
    double d = point_segment_distance(pts[i], pts[lo], pts[hi]);
    if (d > best) {
      best = d;
      arg = i;
    }
  }
  if (best > epsilon) {
    keep[arg] = true;
    rdp_recurse(pts, lo, arg, epsilon, keep);
    rdp_recurse(pts, arg, hi, epsilon, keep);
  }
}

double heading_of(const StrokePoint& a, const StrokePoint& b) {
  double h = std::atan2(b.y_px - a.y_px, b.x_px - a.x_px) * 180.0 / kPi;
  if (h < 0.0) h += 360.0;
  if (h >= 360.0) h = 0.0;
  return h;
}

double fold_180(double delta) {
  double d = std::fmod(std::fabs(delta), 360.0);
  return d > 180.0 ? 360.0 - d : d;
}

std::vector<StrokePoint> angle_threshold_keypoints(const std::vector<StrokePoint>& pts,
                                                   double threshold_deg) {
  std::vector<StrokePoint> out;
  out.push_back(pts.front());
  double cumulative = 0.0;
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
    double h_in = heading_of(pts[i - 1], pts[i]);
    double h_out = heading_of(pts[i], pts[i + 1]);
    cumulative += fold_180(h_out - h_in);
    if (cumulative > threshold_deg) {
      out.push_back(pts[i]);
      cumulative = 0.0;
    }
  }
  out.push_back(pts.back());
  return out;
}

}  // namespace

std::vector<StrokePoint> select_keypoints(const Stroke& stroke, SimplifyMethod method,
                                          double epsilon_px, double angle_threshold_deg) {
  const auto& pts = stroke.points;
  if (pts.size() < 2) return pts;
  switch (method) {
    case SimplifyMethod::raw:
      return pts;
    case SimplifyMethod::angle_threshold:
      return angle_threshold_keypoints(pts, angle_threshold_deg);
    case SimplifyMethod::rdp:
      break;
  }
  if (!(epsilon_px > 0.0))
    throw std::invalid_argument("select_keypoints: epsilon_px must be positive");
  std::vector<bool> keep(pts.size(), false);
  keep.front() = keep.back() = true;
  rdp_recurse(pts, 0, pts.size() - 1, epsilon_px, keep);
  std::vector<StrokePoint> out;
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (keep[i]) out.push_back(pts[i]);
  return out;
}

StepSeries extract_steps(std::span<const StrokeKeypoints> keypoints) {
  StepSeries series;
  for (const StrokeKeypoints& sk : keypoints) {
    for (std::size_t i = 1; i < sk.points.size(); ++i) {
      const StrokePoint& a = sk.points[i - 1];
      const StrokePoint& b = sk.points[i];
      double len = std::hypot(b.x_px - a.x_px, b.y_px - a.y_px);
      if (len <= kStepFilterPx) continue;
      series.steps.push_back(Step{len, heading_of(a, b), sk.stroke_id});
    }
  }
  return series;
}

StepSeries session_steps(const DrawingSession& session, SimplifyMethod method,
                         double epsilon_px) {
  std::vector<StrokeKeypoints> kps;
  kps.reserve(session.strokes.size());
  for (const Stroke& st : session.strokes)
    kps.push_back(StrokeKeypoints{st.stroke_id, select_keypoints(st, method, epsilon_px)});
  return extract_steps(kps);
}

TurningAngles turning_angles(const StepSeries& series, bool across_strokes) {
  TurningAngles out;
  for (std::size_t i = 1; i < series.steps.size(); ++i) {
    const Step& prev = series.steps[i - 1];
    const Step& cur = series.steps[i];
    if (!across_strokes && prev.stroke_id != cur.stroke_id) continue;
    out.angles_deg.push_back(fold_180(cur.heading_deg - prev.heading_deg));
  }
  return out;
}

}  // namespace ink
