#include "inkmetrics/temporal.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "inkmetrics/detail/linalg.hpp"
#include "inkmetrics/errors.hpp"
#include "inkmetrics/spatial.hpp"

namespace ink {

TemporalSummary temporal_summary(const DrawingSession& session) {
  auto segments = sequence_segments(session);
  TemporalSummary out;
  // A session of simultaneous taps can have zero span; floor it like tap
  // durations so the proportion stays defined.
  out.test_time_ms = std::max<std::int64_t>(session.span_ms(), 1);
  std::int64_t ink = 0;
  for (const Segment& seg : segments)
    if (seg.kind == SegmentKind::drawing) ink += seg.duration_ms;
  // The 1 ms tap floor can push the ink total past the wall-clock span.
  out.drawing_time_ms = std::min(ink, out.test_time_ms);
  out.n_sequences = static_cast<int>(segments.size());
  out.speed_px_per_ms = drawing_distance(session) / static_cast<double>(out.drawing_time_ms);
  out.drawing_time_proportion =
      static_cast<double>(out.drawing_time_ms) / static_cast<double>(out.test_time_ms);
  return out;
}

double gini_binary(const BinarySeries& series, bool unbiased) {
  std::size_t n = series.bits.size();
  std::size_t ones = 0;
  for (std::uint8_t b : series.bits) ones += b;
  if (ones == 0) throw DegeneracyError("gini_binary: all-zero series has no defined mean");
  // Population Gini on 0/1 data reduces to the zero proportion.
  double g = static_cast<double>(n - ones) / static_cast<double>(n);
  if (unbiased && n > 1) g *= static_cast<double>(n) / static_cast<double>(n - 1);
  return g;
}

double entropy_cumsum(const DrawingSession& session) {
  std::int64_t span = session.span_ms();
  if (span < 1000) throw DegeneracyError("entropy_cumsum: session shorter than one second");
  std::int64_t origin = session.first_ms();
  std::int64_t seconds = span / 1000;

  // Cumulative ink time at a wall-clock offset; taps count their floored
  // millisecond once the clock passes them.
  auto cumulative_at = [&](std::int64_t t) {
    std::int64_t total = 0;
    for (const Stroke& st : session.strokes) {
      std::int64_t start = st.first_ms() - origin;
      if (t <= start) break;  // strokes are time-ordered
      total += std::min<std::int64_t>(st.duration_ms(), t - start);
    }
    return total;
  };

  std::map<std::int64_t, int> freq;
  for (std::int64_t s = 1; s <= seconds; ++s) ++freq[cumulative_at(s * 1000)];

  double h = 0.0;
  double n = static_cast<double>(seconds);
  for (const auto& [value, count] : freq) {
    double p = count / n;
    h -= p * std::log2(p);
  }
  return h;
}

namespace {

std::vector<std::size_t> log_spaced_sizes(std::size_t lo, std::size_t hi, std::size_t want) {
  std::vector<std::size_t> sizes;
  double ratio = std::log(static_cast<double>(hi) / lo);
  for (std::size_t k = 0; k < want; ++k) {
    double f = want > 1 ? static_cast<double>(k) / (want - 1) : 0.0;
    auto n = static_cast<std::size_t>(std::llround(lo * std::exp(ratio * f)));
    if (sizes.empty() || n > sizes.back()) sizes.push_back(n);
  }
  return sizes;
}

// Fluctuation of one box size: RMS residual of a per-box linear detrend of
// the profile.
double dfa_fluctuation(const std::vector<double>& profile, std::size_t box) {
  std::size_t n_boxes = profile.size() / box;
  double ss = 0.0;
  std::size_t count = 0;
  for (std::size_t b = 0; b < n_boxes; ++b) {
    const double* seg = profile.data() + b * box;
    // Closed-form simple regression on t = 0..box-1.
    double m = static_cast<double>(box);
    double st = (m - 1.0) * m / 2.0;
    double stt = (m - 1.0) * m * (2.0 * m - 1.0) / 6.0;
    double sy = 0.0, sty = 0.0;
    for (std::size_t t = 0; t < box; ++t) {
      sy += seg[t];
      sty += t * seg[t];
    }
    double denom = m * stt - st * st;
    double slope = (m * sty - st * sy) / denom;
    double intercept = (sy - slope * st) / m;
    for (std::size_t t = 0; t < box; ++t) {
      double r = seg[t] - (intercept + slope * t);
      ss += r * r;
    }
    count += box;
  }
  return std::sqrt(ss / static_cast<double>(count));
}

// Mean rescaled range over non-overlapping boxes; degenerate boxes with
// zero spread are skipped.
double rs_statistic(const std::vector<double>& xs, std::size_t box) {
  std::size_t n_boxes = xs.size() / box;
  double total = 0.0;
  std::size_t used = 0;
  for (std::size_t b = 0; b < n_boxes; ++b) {
    const double* seg = xs.data() + b * box;
    double mean = 0.0;
    for (std::size_t t = 0; t < box; ++t) mean += seg[t];
    mean /= static_cast<double>(box);
    double s2 = 0.0;
    double cum = 0.0, lo = 0.0, hi = 0.0;
    for (std::size_t t = 0; t < box; ++t) {
      double d = seg[t] - mean;
      s2 += d * d;
      cum += d;
      lo = std::min(lo, cum);
      hi = std::max(hi, cum);
    }
    double s = std::sqrt(s2 / static_cast<double>(box));
    if (s <= 0.0) continue;
    total += (hi - lo) / s;
    ++used;
  }
  if (used == 0) return 0.0;
  return total / static_cast<double>(used);
}

double slope_loglog(const std::vector<double>& xs, const std::vector<double>& ys) {
  double n = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double lx = std::log(xs[i]);
    double ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double clamp_h(double h) { return std::clamp(h, 0.0, 2.0); }

}  // namespace

HurstEstimate hurst_estimators(const BinarySeries& series) {
  std::size_t n = series.bits.size();
  if (n < 256)
    throw DegeneracyError("hurst_estimators: series too short (" + std::to_string(n) +
                          " < 256 bits)");
  std::size_t ones = 0;
  for (std::uint8_t b : series.bits) ones += b;
  if (ones == 0 || ones == n)
    throw DegeneracyError("hurst_estimators: constant series has zero variance");

  double mean = static_cast<double>(ones) / static_cast<double>(n);
  std::vector<double> centered(n);
  std::vector<double> profile(n);
  double cum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    centered[i] = static_cast<double>(series.bits[i]) - mean;
    cum += centered[i];
    profile[i] = cum;
  }

  auto sizes = log_spaced_sizes(8, n / 4, 16);
  std::vector<double> box_dfa, f_dfa, box_rs, v_rs;
  for (std::size_t box : sizes) {
    double f = dfa_fluctuation(profile, box);
    if (f > 0.0) {
      box_dfa.push_back(static_cast<double>(box));
      f_dfa.push_back(f);
    }
    double rs = rs_statistic(centered, box);
    if (rs > 0.0) {
      box_rs.push_back(static_cast<double>(box));
      v_rs.push_back(rs);
    }
  }
  if (box_dfa.size() < 3 || box_rs.size() < 3)
    throw DegeneracyError("hurst_estimators: not enough usable box sizes");

  HurstEstimate out;
  out.h_dfa = clamp_h(slope_loglog(box_dfa, f_dfa));
  out.h_rs = clamp_h(slope_loglog(box_rs, v_rs));
  return out;
}

HurstIndex hurst_index(const std::vector<HurstEstimate>& per_drawing) {
  HurstIndex out;
  if (per_drawing.size() < 3) {
    for (const HurstEstimate& h : per_drawing)
      out.scores.push_back((h.h_dfa + h.h_rs) / 2.0);
    out.pca_used = false;
    return out;
  }
  std::vector<std::vector<double>> cols(2);
  for (const HurstEstimate& h : per_drawing) {
    cols[0].push_back(h.h_dfa);
    cols[1].push_back(h.h_rs);
  }
  detail::Dim1Result d1 = detail::principal_dim1(cols, 0);
  out.scores = std::move(d1.scores);
  out.pca_used = true;
  return out;
}

}  // namespace ink
