#include "inkmetrics/model.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "inkmetrics/detail/textio.hpp"
#include "inkmetrics/errors.hpp"
#include "json.hpp"

namespace ink {

namespace {

using nlohmann::json;
using detail::parse_double;
using detail::parse_int64;

constexpr const char* kCsvHeader = "session_id,stroke_id,colour_id,t_ms,x_px,y_px";

std::string shortest(double v) {
  char buf[40];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, p);
}

[[noreturn]] void fail_line(std::size_t line_no, const std::string& what) {
  throw ValidationError("line " + std::to_string(line_no) + ": " + what);
}

Palette palette_from_rgb(const std::vector<std::array<int, 3>>& rgb) {
  if (rgb.size() != 10)
    throw ValidationError("palette must have exactly 10 entries, got " +
                          std::to_string(rgb.size()));
  Palette p;
  const Palette& std_p = Palette::standard();
  for (std::size_t i = 0; i < 10; ++i) {
    p.entries[i].rgb = rgb[i];
    p.entries[i].name =
        rgb[i] == std_p.entries[i].rgb ? std_p.entries[i].name : "custom_" + std::to_string(i);
  }
  return p;
}

void apply_sidecar(DrawingSession& s, std::string_view sidecar_json) {
  json doc;
  try {
    doc = json::parse(sidecar_json);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("sidecar: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("sidecar: expected a JSON object");
  try {
    std::string sid = doc.at("session_id").get<std::string>();
    if (!s.session_id.empty() && sid != s.session_id)
      throw ValidationError("sidecar session_id '" + sid + "' does not match CSV '" +
                            s.session_id + "'");
    s.session_id = sid;
    s.screen_w = doc.at("screen_w").get<int>();
    s.screen_h = doc.at("screen_h").get<int>();
    if (doc.contains("labels")) {
      for (auto& [k, v] : doc.at("labels").items())
        s.labels[k] = v.get<std::string>();
    }
    if (doc.contains("palette")) {
      std::vector<std::array<int, 3>> rgb;
      for (const auto& entry : doc.at("palette")) {
        if (!entry.is_array() || entry.size() != 3)
          throw ValidationError("sidecar: palette entry is not an [r,g,b] triple");
        rgb.push_back({entry[0].get<int>(), entry[1].get<int>(), entry[2].get<int>()});
      }
      s.palette = palette_from_rgb(rgb);
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("sidecar: ") + e.what());
  }
}

DrawingSession parse_csv(std::string_view content, std::string_view sidecar_json) {
  auto lines = detail::split_lines(content);
  if (lines.empty()) throw ValidationError("empty session file");
  if (lines[0] != kCsvHeader)
    fail_line(1, std::string("expected header '") + kCsvHeader + "'");

  DrawingSession s;
  Stroke* current = nullptr;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty()) continue;
    std::size_t line_no = i + 1;
    auto fields = detail::split_csv_line(line);
    if (fields.size() != 6)
      fail_line(line_no, "expected 6 fields, got " + std::to_string(fields.size()));

    long long stroke_id = 0, colour_id = 0, t_ms = 0;
    double x = 0.0, y = 0.0;
    if (!parse_int64(fields[1], stroke_id)) fail_line(line_no, "bad stroke_id '" + fields[1] + "'");
    if (!parse_int64(fields[2], colour_id)) fail_line(line_no, "bad colour_id '" + fields[2] + "'");
    if (!parse_int64(fields[3], t_ms)) fail_line(line_no, "bad t_ms '" + fields[3] + "'");
    if (!parse_double(fields[4], x)) fail_line(line_no, "bad x_px '" + fields[4] + "'");
    if (!parse_double(fields[5], y)) fail_line(line_no, "bad y_px '" + fields[5] + "'");

    if (s.session_id.empty()) {
      s.session_id = fields[0];
    } else if (fields[0] != s.session_id) {
      fail_line(line_no, "session_id changed mid-file");
    }
    if (colour_id < 0 || colour_id > 9)
      fail_line(line_no, "colour_id " + std::to_string(colour_id) + " outside 0..9");
    if (t_ms < 0) fail_line(line_no, "negative t_ms");

    if (current == nullptr || current->stroke_id != stroke_id) {
      for (const Stroke& prev : s.strokes)
        if (prev.stroke_id == stroke_id)
          fail_line(line_no, "rows of stroke " + std::to_string(stroke_id) + " are not contiguous");
      s.strokes.push_back(Stroke{static_cast<int>(stroke_id), static_cast<int>(colour_id), {}});
      current = &s.strokes.back();
    } else if (current->colour_id != colour_id) {
      fail_line(line_no, "colour_id changed within stroke " + std::to_string(stroke_id));
    }
    if (!current->points.empty() && t_ms <= current->points.back().t_ms)
      fail_line(line_no, "non-monotone time within stroke " + std::to_string(stroke_id));
    current->points.push_back(StrokePoint{t_ms, x, y});
  }

  if (!sidecar_json.empty()) apply_sidecar(s, sidecar_json);
  validate_session(s);
  return s;
}

DrawingSession parse_json_doc(std::string_view content) {
  json doc;
  try {
    doc = json::parse(content);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("invalid JSON: ") + e.what());
  }
  DrawingSession s;
  try {
    s.session_id = doc.at("session_id").get<std::string>();
    s.screen_w = doc.at("screen_w").get<int>();
    s.screen_h = doc.at("screen_h").get<int>();
    if (doc.contains("labels"))
      for (auto& [k, v] : doc.at("labels").items()) s.labels[k] = v.get<std::string>();
    if (doc.contains("palette")) {
      std::vector<std::array<int, 3>> rgb;
      for (const auto& entry : doc.at("palette"))
        rgb.push_back({entry[0].get<int>(), entry[1].get<int>(), entry[2].get<int>()});
      s.palette = palette_from_rgb(rgb);
    }
    for (const auto& js : doc.at("strokes")) {
      Stroke st;
      st.stroke_id = js.at("stroke_id").get<int>();
      st.colour_id = js.at("colour_id").get<int>();
      for (const auto& jp : js.at("points")) {
        if (!jp.is_array() || jp.size() != 3)
          throw ValidationError("stroke point is not a [t_ms,x_px,y_px] triple");
        st.points.push_back(StrokePoint{jp[0].get<std::int64_t>(), jp[1].get<double>(),
                                        jp[2].get<double>()});
      }
      s.strokes.push_back(std::move(st));
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("session JSON: ") + e.what());
  }
  validate_session(s);
  return s;
}

json palette_json(const Palette& p) {
  json arr = json::array();
  for (const auto& e : p.entries) arr.push_back({e.rgb[0], e.rgb[1], e.rgb[2]});
  return arr;
}

}  // namespace

const Palette& Palette::standard() {
  static const Palette p = [] {
    Palette pal;
    // The ten offered colours; RGB values are the documented defaults and
    // can be overridden per session via the sidecar.
    pal.entries = {{{"black", {0x00, 0x00, 0x00}},
                    {"grey", {0x80, 0x80, 0x80}},
                    {"red", {0xFF, 0x00, 0x00}},
                    {"blue", {0x00, 0x00, 0xFF}},
                    {"dark_green", {0x00, 0x64, 0x00}},
                    {"light_green", {0x90, 0xEE, 0x90}},
                    {"sky_blue", {0x87, 0xCE, 0xEB}},
                    {"brown", {0x8B, 0x45, 0x13}},
                    {"orange", {0xFF, 0xA5, 0x00}},
                    {"yellow", {0xFF, 0xFF, 0x00}}}};
    return pal;
  }();
  return p;
}

std::size_t DrawingSession::total_points() const {
  std::size_t n = 0;
  for (const Stroke& s : strokes) n += s.points.size();
  return n;
}

void validate_session(const DrawingSession& s) {
  if (s.screen_w <= 0 || s.screen_h <= 0)
    throw ValidationError("screen dimensions must be positive");
  for (std::size_t i = 0; i < s.palette.entries.size(); ++i) {
    const auto& rgb = s.palette.entries[i].rgb;
    for (int c : rgb)
      if (c < 0 || c > 255)
        throw ValidationError("palette entry " + std::to_string(i) + " channel outside 0..255");
    if (rgb == std::array<int, 3>{255, 255, 255})
      throw ValidationError("palette entry " + std::to_string(i) +
                            " is pure white, reserved for the background");
  }
  if (s.strokes.empty()) throw ValidationError("session has no strokes");
  if (s.total_points() < 2)
    throw ValidationError("session has fewer than 2 points");

  for (std::size_t i = 0; i < s.strokes.size(); ++i) {
    const Stroke& st = s.strokes[i];
    std::string tag = "stroke " + std::to_string(st.stroke_id);
    if (st.points.empty()) throw ValidationError(tag + " has no points");
    if (st.colour_id < 0 || st.colour_id > 9)
      throw ValidationError(tag + ": colour_id " + std::to_string(st.colour_id) +
                            " outside 0..9");
    for (std::size_t j = 0; j < st.points.size(); ++j) {
      const StrokePoint& p = st.points[j];
      if (p.t_ms < 0) throw ValidationError(tag + ": negative t_ms");
      if (j > 0 && p.t_ms <= st.points[j - 1].t_ms)
        throw ValidationError(tag + ": non-monotone time");
      if (p.x_px < 0.0 || p.x_px > s.screen_w || p.y_px < 0.0 || p.y_px > s.screen_h)
        throw ValidationError(tag + ": point (" + shortest(p.x_px) + "," + shortest(p.y_px) +
                              ") outside screen");
    }
    if (i > 0) {
      const Stroke& prev = s.strokes[i - 1];
      if (st.first_ms() < prev.last_ms())
        throw ValidationError(tag + " overlaps stroke " + std::to_string(prev.stroke_id) +
                              " in time");
    }
  }
}

DrawingSession parse_session(std::string_view content, SessionFormat format,
                             std::string_view sidecar_json) {
  switch (format) {
    case SessionFormat::csv:
      return parse_csv(content, sidecar_json);
    case SessionFormat::json:
      return parse_json_doc(content);
  }
  throw ValidationError("unknown session format");
}

std::string serialize_session_csv(const DrawingSession& s) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const Stroke& st : s.strokes) {
    for (const StrokePoint& p : st.points) {
      out += detail::csv_escape(s.session_id);
      out += ',';
      out += std::to_string(st.stroke_id);
      out += ',';
      out += std::to_string(st.colour_id);
      out += ',';
      out += std::to_string(p.t_ms);
      out += ',';
      out += shortest(p.x_px);
      out += ',';
      out += shortest(p.y_px);
      out += '\n';
    }
  }
  return out;
}

std::string serialize_sidecar_json(const DrawingSession& s) {
  json doc;
  doc["session_id"] = s.session_id;
  doc["screen_w"] = s.screen_w;
  doc["screen_h"] = s.screen_h;
  doc["labels"] = json::object();
  for (const auto& [k, v] : s.labels) doc["labels"][k] = v;
  doc["palette"] = palette_json(s.palette);
  return doc.dump(2) + "\n";
}

std::string serialize_session_json(const DrawingSession& s) {
  json doc;
  doc["session_id"] = s.session_id;
  doc["screen_w"] = s.screen_w;
  doc["screen_h"] = s.screen_h;
  doc["labels"] = json::object();
  for (const auto& [k, v] : s.labels) doc["labels"][k] = v;
  doc["palette"] = palette_json(s.palette);
  doc["strokes"] = json::array();
  for (const Stroke& st : s.strokes) {
    json js;
    js["stroke_id"] = st.stroke_id;
    js["colour_id"] = st.colour_id;
    js["points"] = json::array();
    for (const StrokePoint& p : st.points) js["points"].push_back({p.t_ms, p.x_px, p.y_px});
    doc["strokes"].push_back(std::move(js));
  }
  return doc.dump(2) + "\n";
}

BinarySeries binary_series(const DrawingSession& s, std::int64_t dt_ms) {
  if (dt_ms <= 0) throw ValidationError("binary_series: dt_ms must be positive");
  std::int64_t span = s.span_ms();
  if (span < dt_ms) throw ValidationError("binary_series: session too short for one bin");

  BinarySeries out;
  out.dt_ms = dt_ms;
  std::int64_t n_bins = (span + dt_ms - 1) / dt_ms;  // ceil
  out.bits.resize(static_cast<std::size_t>(n_bins), 0);

  std::int64_t origin = s.first_ms();
  std::size_t stroke_idx = 0;
  for (std::size_t i = 0; i < out.bits.size(); ++i) {
    double mid = static_cast<double>(origin) + static_cast<double>(i) * dt_ms + dt_ms / 2.0;
    // Strokes are time-ordered; advance past strokes that end before mid.
    while (stroke_idx < s.strokes.size() &&
           static_cast<double>(s.strokes[stroke_idx].last_ms()) < mid)
      ++stroke_idx;
    if (stroke_idx < s.strokes.size() &&
        static_cast<double>(s.strokes[stroke_idx].first_ms()) <= mid)
      out.bits[i] = 1;
  }
  return out;
}

std::vector<Segment> sequence_segments(const DrawingSession& s) {
  std::vector<Segment> out;
  for (std::size_t i = 0; i < s.strokes.size(); ++i) {
    if (i > 0) {
      std::int64_t gap = s.strokes[i].first_ms() - s.strokes[i - 1].last_ms();
      if (gap > 0) out.push_back(Segment{SegmentKind::gap, gap});
    }
    out.push_back(Segment{SegmentKind::drawing, s.strokes[i].duration_ms()});
  }
  return out;
}

}  // namespace ink
