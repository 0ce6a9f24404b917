#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace ink {

/// One sampled touch point. Times are milliseconds since the session's own
/// clock origin; coordinates are screen pixels.
struct StrokePoint {
  std::int64_t t_ms = 0;
  double x_px = 0.0;
  double y_px = 0.0;
};

/// One continuous pen-down trace, touch-down to touch-up.
struct Stroke {
  int stroke_id = 0;
  int colour_id = 0;  // palette index 0..9
  std::vector<StrokePoint> points;

  std::int64_t first_ms() const { return points.front().t_ms; }
  std::int64_t last_ms() const { return points.back().t_ms; }

  /// Ink duration. Single-point taps are floored to 1 ms so downstream
  /// ratios stay defined.
  std::int64_t duration_ms() const {
    std::int64_t d = last_ms() - first_ms();
    return d > 0 ? d : 1;
  }
};

struct PaletteEntry {
  std::string name;
  std::array<int, 3> rgb{0, 0, 0};
};

/// Exactly ten colours. Pure white is reserved for the background and is
/// never a palette entry.
struct Palette {
  std::array<PaletteEntry, 10> entries;

  /// The ten named colours with documented default RGB values.
  static const Palette& standard();
};

struct DrawingSession {
  std::string session_id;
  std::map<std::string, std::string> labels;
  int screen_w = 0;
  int screen_h = 0;
  Palette palette = Palette::standard();
  std::vector<Stroke> strokes;

  std::int64_t first_ms() const { return strokes.front().first_ms(); }
  std::int64_t last_ms() const { return strokes.back().last_ms(); }
  std::int64_t span_ms() const { return last_ms() - first_ms(); }
  std::size_t total_points() const;
};

enum class SessionFormat { csv, json };

/// Parse a session from its external representation.
///
/// The csv format is the canonical point log and needs the metadata sidecar
/// (screen geometry, labels, optional palette) passed as sidecar_json. The
/// json format is a single self-contained document. Both reject input that
/// breaks any session invariant, naming the offending line where possible.
DrawingSession parse_session(std::string_view content, SessionFormat format,
                             std::string_view sidecar_json = {});

std::string serialize_session_csv(const DrawingSession& session);
std::string serialize_sidecar_json(const DrawingSession& session);
std::string serialize_session_json(const DrawingSession& session);

/// Check every invariant (monotone times, colour range, bounds, ordering);
/// throws ValidationError on the first violation.
void validate_session(const DrawingSession& session);

/// Fixed-rate drawing/non-drawing sampling of a session.
struct BinarySeries {
  std::int64_t dt_ms = 0;
  std::vector<std::uint8_t> bits;
};

/// One bit per dt_ms bin from the session's first to last timestamp; a bit
/// is set when the bin midpoint falls inside any stroke's ink interval.
BinarySeries binary_series(const DrawingSession& session, std::int64_t dt_ms);

enum class SegmentKind { drawing, gap };

struct Segment {
  SegmentKind kind;
  std::int64_t duration_ms;
};

/// Alternating drawing/non-drawing segments. Taps contribute a 1 ms drawing
/// segment; zero-length gaps (pen-up and pen-down on the same millisecond)
/// are dropped.
std::vector<Segment> sequence_segments(const DrawingSession& session);

}  // namespace ink
