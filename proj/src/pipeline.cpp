#include "inkmetrics/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "inkmetrics/colour.hpp"
#include "inkmetrics/detail/svg.hpp"
#include "inkmetrics/detail/textio.hpp"
#include "inkmetrics/errors.hpp"
#include "inkmetrics/spatial.hpp"
#include "inkmetrics/temporal.hpp"
#include "json.hpp"

namespace ink {

namespace {

using nlohmann::json;
using detail::fmt_g6;

json jnum(double v) {
  if (!std::isfinite(v)) return nullptr;
  // Reparse the 6-significant-digit form so serialized reports carry the
  // same rounding everywhere.
  return json::parse(fmt_g6(v));
}

json test_to_json(const TestResult& t) {
  json j;
  j["statistic"] = t.statistic;
  j["value"] = jnum(t.value);
  j["dof"] = jnum(t.dof);
  j["p_value"] = jnum(t.p_value);
  return j;
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string simplify_name(SimplifyMethod m) {
  switch (m) {
    case SimplifyMethod::rdp: return "rdp";
    case SimplifyMethod::angle_threshold: return "angle_threshold";
    case SimplifyMethod::raw: return "raw";
  }
  return "rdp";
}

json config_to_json(const PipelineConfig& c) {
  json j;
  j["dt_ms"] = c.dt_ms;
  j["simplify"] = simplify_name(c.simplify);
  j["epsilon_px"] = jnum(c.epsilon_px);
  j["loading_threshold"] = jnum(c.loading_threshold);
  j["k_components"] = c.k_components;
  j["unbiased_gini"] = c.unbiased_gini;
  j["kaiser_normalize"] = c.kaiser_normalize;
  j["posthoc"] = c.posthoc == PosthocMethod::mann_whitney ? "mann_whitney" : "welch_t";
  j["exclude"] = c.exclude;
  j["drop_time_proportion"] = c.drop_time_proportion;
  j["cross_stroke_angles"] = c.cross_stroke_angles;
  j["group_by"] = c.group_by;
  j["seed"] = c.seed;
  return j;
}

std::string matrix_csv(const std::vector<std::string>& names, const Mat& m) {
  std::string out = "variable";
  for (const auto& n : names) out += "," + detail::csv_escape(n);
  out += "\n";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    out += detail::csv_escape(names[i]);
    for (std::size_t j = 0; j < m.cols(); ++j) out += "," + fmt_g6(m(i, j));
    out += "\n";
  }
  return out;
}

// Rows per group value, keys sorted; rows without the label are skipped.
std::map<std::string, std::vector<std::size_t>> group_rows(const MetricMatrix& m,
                                                           const std::string& key) {
  std::map<std::string, std::vector<std::size_t>> out;
  if (key.empty()) return out;
  for (std::size_t i = 0; i < m.row_ids.size(); ++i) {
    auto row = m.labels.find(m.row_ids[i]);
    if (row == m.labels.end()) continue;
    auto tag = row->second.find(key);
    if (tag == row->second.end()) continue;
    out[tag->second].push_back(i);
  }
  return out;
}

std::vector<double> gather(const std::vector<double>& col, const std::vector<std::size_t>& idx) {
  std::vector<double> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(col[i]);
  return out;
}

std::string stars_for(double p) {
  if (p < 0.001) return "***";
  if (p < 0.01) return "**";
  if (p < 0.05) return "*";
  return "";
}

// ---------------------------------------------------------------- figures

std::string corr_cell_colour(double r) {
  // white at 0, red for positive, blue for negative
  int base_r = r >= 0 ? 0xc0 : 0x29;
  int base_g = r >= 0 ? 0x39 : 0x80;
  int base_b = r >= 0 ? 0x2b : 0xb9;
  double t = std::min(std::fabs(r), 1.0);
  auto mix = [t](int base) { return static_cast<int>(std::lround(255 + (base - 255) * t)); };
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", mix(base_r), mix(base_g), mix(base_b));
  return buf;
}

std::string figure_correlation(const CorrResult& corr) {
  std::size_t p = corr.names.size();
  double cell = 44.0;
  double left = 170.0;
  double top = 40.0;
  detail::SvgCanvas svg(left + cell * p + 20.0, top + cell * p + 20.0);
  svg.text(left, 22.0, "Pairwise Pearson correlation (*, **, *** at p<0.05, 0.01, 0.001)", 13.0);
  for (std::size_t i = 0; i < p; ++i) {
    svg.text(left - 8.0, top + cell * i + cell / 2.0 + 4.0,
             std::to_string(i + 1) + " " + corr.names[i], 11.0, "end");
    svg.text(left + cell * i + cell / 2.0, top - 6.0, std::to_string(i + 1), 11.0, "middle");
    for (std::size_t j = 0; j < p; ++j) {
      double x = left + cell * j;
      double y = top + cell * i;
      if (i == j) {
        svg.rect(x, y, cell, cell, "#e8e8e8", "#ffffff");
        svg.text(x + cell / 2.0, y + cell / 2.0 + 4.0, std::to_string(i + 1), 11.0, "middle");
        continue;
      }
      double r = corr.r(i, j);
      svg.rect(x, y, cell, cell, corr_cell_colour(r), "#ffffff");
      char val[16];
      std::snprintf(val, sizeof(val), "%.2f", r);
      svg.text(x + cell / 2.0, y + cell / 2.0, val, 10.0, "middle");
      std::string s = stars_for(corr.p(i, j));
      if (!s.empty()) svg.text(x + cell / 2.0, y + cell / 2.0 + 12.0, s, 10.0, "middle");
    }
  }
  return svg.str();
}

const std::vector<std::string>& glyph_colours() {
  static const std::vector<std::string> c = {"#1b6ca8", "#d1495b", "#66a182",
                                             "#edae49", "#775a96", "#4a4a4a"};
  return c;
}

std::string figure_scatter(const PcaModel& model, const std::vector<std::string>& row_groups,
                           int dim_x, int dim_y) {
  double w = 540.0, h = 540.0, m = 64.0;
  detail::SvgCanvas svg(w, h);
  std::string title = "Dimension " + std::to_string(dim_x) + " vs dimension " +
                      std::to_string(dim_y) + " scores";
  svg.text(m, 24.0, title, 13.0);

  auto xs = model.scores.col(static_cast<std::size_t>(dim_x - 1));
  auto ys = model.scores.col(static_cast<std::size_t>(dim_y - 1));
  double lo_x = *std::min_element(xs.begin(), xs.end());
  double hi_x = *std::max_element(xs.begin(), xs.end());
  double lo_y = *std::min_element(ys.begin(), ys.end());
  double hi_y = *std::max_element(ys.begin(), ys.end());
  auto pad = [](double& lo, double& hi) {
    double span = hi - lo;
    if (span <= 0.0) span = 1.0;
    lo -= 0.05 * span;
    hi += 0.05 * span;
  };
  pad(lo_x, hi_x);
  pad(lo_y, hi_y);

  auto px = [&](double v) { return m + (v - lo_x) / (hi_x - lo_x) * (w - 2.0 * m); };
  auto py = [&](double v) { return h - m - (v - lo_y) / (hi_y - lo_y) * (h - 2.0 * m); };

  svg.line(m, h - m, w - m, h - m, "#333333");
  svg.line(m, m, m, h - m, "#333333");
  svg.text(w / 2.0, h - 18.0, "dim" + std::to_string(dim_x), 12.0, "middle");
  svg.text(16.0, h / 2.0, "dim" + std::to_string(dim_y), 12.0, "middle");
  svg.text(m, h - m + 16.0, fmt_g6(lo_x), 10.0);
  svg.text(w - m, h - m + 16.0, fmt_g6(hi_x), 10.0, "end");
  svg.text(m - 4.0, h - m, fmt_g6(lo_y), 10.0, "end");
  svg.text(m - 4.0, m + 8.0, fmt_g6(hi_y), 10.0, "end");

  std::vector<std::string> group_names;
  for (const auto& g : row_groups)
    if (std::find(group_names.begin(), group_names.end(), g) == group_names.end())
      group_names.push_back(g);
  std::sort(group_names.begin(), group_names.end());

  for (std::size_t i = 0; i < xs.size(); ++i) {
    std::size_t gi = 0;
    for (std::size_t g = 0; g < group_names.size(); ++g)
      if (group_names[g] == row_groups[i]) gi = g;
    svg.circle(px(xs[i]), py(ys[i]), 3.4, glyph_colours()[gi % glyph_colours().size()]);
  }
  for (std::size_t g = 0; g < group_names.size(); ++g) {
    double ly = 40.0 + 16.0 * g;
    svg.circle(w - m - 110.0, ly - 4.0, 4.0, glyph_colours()[g % glyph_colours().size()]);
    svg.text(w - m - 100.0, ly, group_names[g], 11.0);
  }
  return svg.str();
}

struct BoxStats {
  double q1, median, q3, lo_whisker, hi_whisker;
  std::vector<double> outliers;
};

BoxStats box_stats(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  auto quantile = [&](double q) {
    double pos = q * (static_cast<double>(v.size()) - 1.0);
    std::size_t lo = static_cast<std::size_t>(pos);
    std::size_t hi = std::min(lo + 1, v.size() - 1);
    double frac = pos - static_cast<double>(lo);
    return v[lo] * (1.0 - frac) + v[hi] * frac;
  };
  BoxStats b{quantile(0.25), quantile(0.5), quantile(0.75), 0.0, 0.0, {}};
  double iqr = b.q3 - b.q1;
  double fence_lo = b.q1 - 1.5 * iqr;
  double fence_hi = b.q3 + 1.5 * iqr;
  b.lo_whisker = b.q3;
  b.hi_whisker = b.q1;
  for (double x : v) {
    if (x < fence_lo || x > fence_hi) {
      b.outliers.push_back(x);
    } else {
      b.lo_whisker = std::min(b.lo_whisker, x);
      b.hi_whisker = std::max(b.hi_whisker, x);
    }
  }
  return b;
}

std::string figure_boxplot(const std::string& title,
                           const std::vector<std::string>& group_names,
                           const std::vector<std::vector<double>>& groups,
                           const std::vector<PairwiseTest>& pairwise) {
  std::size_t k = groups.size();
  std::vector<const PairwiseTest*> significant;
  for (const auto& pt : pairwise)
    if (pt.p_adjusted < 0.05) significant.push_back(&pt);

  double w = std::max(360.0, 120.0 + 110.0 * static_cast<double>(k));
  double bracket_h = 24.0;
  double top = 56.0 + bracket_h * static_cast<double>(significant.size());
  double h = top + 320.0 + 60.0;
  detail::SvgCanvas svg(w, h);
  svg.text(60.0, 24.0, title, 13.0);

  double lo = 0.0, hi = 0.0;
  bool first = true;
  for (const auto& g : groups)
    for (double v : g) {
      if (first) {
        lo = hi = v;
        first = false;
      }
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  if (hi <= lo) hi = lo + 1.0;
  double span = hi - lo;
  lo -= 0.05 * span;
  hi += 0.05 * span;

  double plot_h = 320.0;
  auto py = [&](double v) { return top + plot_h - (v - lo) / (hi - lo) * plot_h; };
  auto cx = [&](std::size_t g) { return 120.0 + 110.0 * static_cast<double>(g); };

  svg.line(60.0, top, 60.0, top + plot_h, "#333333");
  svg.text(56.0, py(lo) + 4.0, fmt_g6(lo), 10.0, "end");
  svg.text(56.0, py(hi) + 4.0, fmt_g6(hi), 10.0, "end");

  for (std::size_t g = 0; g < k; ++g) {
    BoxStats b = box_stats(groups[g]);
    double x = cx(g);
    double bw = 60.0;
    svg.line(x, py(b.lo_whisker), x, py(b.q1), "#333333");
    svg.line(x, py(b.q3), x, py(b.hi_whisker), "#333333");
    svg.line(x - bw / 4.0, py(b.lo_whisker), x + bw / 4.0, py(b.lo_whisker), "#333333");
    svg.line(x - bw / 4.0, py(b.hi_whisker), x + bw / 4.0, py(b.hi_whisker), "#333333");
    svg.rect(x - bw / 2.0, py(b.q3), bw, py(b.q1) - py(b.q3),
             glyph_colours()[g % glyph_colours().size()], "#333333");
    svg.line(x - bw / 2.0, py(b.median), x + bw / 2.0, py(b.median), "#000000", 2.0);
    for (double o : b.outliers) svg.circle(x, py(o), 2.5, "#555555");
    svg.text(x, top + plot_h + 18.0, group_names[g], 11.0, "middle");
    svg.text(x, top + plot_h + 34.0, "n=" + std::to_string(groups[g].size()), 10.0, "middle");
  }

  // Significance brackets, widest pairs on top.
  for (std::size_t s = 0; s < significant.size(); ++s) {
    const PairwiseTest& pt = *significant[s];
    double y = top - 10.0 - bracket_h * static_cast<double>(s);
    double x1 = cx(pt.group_i);
    double x2 = cx(pt.group_j);
    svg.line(x1, y, x2, y, "#000000");
    svg.line(x1, y, x1, y + 6.0, "#000000");
    svg.line(x2, y, x2, y + 6.0, "#000000");
    svg.text((x1 + x2) / 2.0, y - 4.0, stars_for(pt.p_adjusted), 12.0, "middle");
  }
  return svg.str();
}

// ------------------------------------------------------------- group tests

json group_tests_json(const MetricMatrix& raw, const PcaModel& scored_model,
                      const std::vector<std::string>& score_row_ids,
                      const std::map<std::string, std::map<std::string, std::string>>& labels,
                      const std::string& group_key, const PipelineConfig& config) {
  json out;
  out["posthoc_note"] =
      "pairwise tests with Holm correction substitute for TukeyHSD/kruskalmc";
  out["group_by"] = group_key;
  out["metrics"] = json::array();
  out["dimensions"] = json::array();
  if (group_key.empty()) {
    out["note"] = "no grouping label configured";
    return out;
  }

  auto grouped = group_rows(raw, group_key);
  json jgroups = json::object();
  for (const auto& [name, idx] : grouped) jgroups[name] = idx.size();
  out["groups"] = jgroups;
  if (grouped.size() < 2) {
    out["note"] = "fewer than 2 groups under label '" + group_key + "'";
    return out;
  }

  std::vector<std::string> group_names;
  for (const auto& [name, idx] : grouped) group_names.push_back(name);

  auto run_group_tests = [&](const std::string& name,
                             const std::vector<std::vector<double>>& samples) {
    json j;
    j["name"] = name;
    try {
      TestResult kw = kruskal_wallis(samples);
      j["kruskal_wallis"] = test_to_json(kw);
      bool kw_sig = kw.p_value < 0.05;
      bool have_anova = false;
      bool anova_sig = false;
      try {
        TestResult an = anova_oneway(samples);
        j["anova"] = test_to_json(an);
        anova_sig = an.p_value < 0.05;
        have_anova = true;
      } catch (const std::exception& e) {
        j["anova_error"] = e.what();
      }
      if (have_anova) j["tests_disagree"] = kw_sig != anova_sig;
      if (samples.size() == 2) {
        j["mann_whitney"] = test_to_json(mann_whitney(samples[0], samples[1]));
      } else if (kw_sig || anova_sig) {
        json ph = json::array();
        for (const PairwiseTest& pt : posthoc_pairwise(samples, config.posthoc)) {
          json pj;
          pj["group_a"] = group_names[pt.group_i];
          pj["group_b"] = group_names[pt.group_j];
          pj["test"] = test_to_json(pt.test);
          pj["p_adjusted"] = jnum(pt.p_adjusted);
          ph.push_back(std::move(pj));
        }
        j["posthoc"] = std::move(ph);
      }
    } catch (const std::exception& e) {
      j["error"] = e.what();
    }
    return j;
  };

  for (const auto& metric : raw.col_names) {
    auto col = raw.column(metric);
    std::vector<std::vector<double>> samples;
    for (const auto& [name, idx] : grouped) samples.push_back(gather(col, idx));
    out["metrics"].push_back(run_group_tests(metric, samples));
  }

  // Scores can cover a subset of rows (compare runs them on the combined
  // matrix); regroup by the score row ids.
  std::map<std::string, std::vector<std::size_t>> score_groups;
  for (std::size_t i = 0; i < score_row_ids.size(); ++i) {
    auto row = labels.find(score_row_ids[i]);
    if (row == labels.end()) continue;
    auto tag = row->second.find(group_key);
    if (tag == row->second.end()) continue;
    score_groups[tag->second].push_back(i);
  }
  if (score_groups.size() >= 2) {
    for (int d = 1; d <= scored_model.k; ++d) {
      auto col = scored_model.scores.col(static_cast<std::size_t>(d - 1));
      std::vector<std::vector<double>> samples;
      for (const auto& [name, idx] : score_groups) samples.push_back(gather(col, idx));
      out["dimensions"].push_back(
          run_group_tests("dimension_" + std::to_string(d), samples));
    }
  }
  return out;
}

}  // namespace

const std::vector<std::string>& metric_columns() {
  static const std::vector<std::string> cols = {
      "mu_mle",      "drawing_distance", "angle_metric", "mcp_coverage",
      "hurst_index", "gini",             "entropy",      "test_time",
      "n_sequences", "speed",            "time_proportion", "mean_colour",
      "sd_colour",   "n_colours"};
  return cols;
}

MetricComputation compute_metrics(const std::vector<DrawingSession>& sessions,
                                  const PipelineConfig& config) {
  MetricComputation out;

  struct PerDrawing {
    std::string id;
    std::map<std::string, std::string> labels;
    double mu, distance, mcp, gini, entropy, test_time, n_sequences, speed, proportion;
    double mean_colour, sd_colour, n_colours;
    AngleFit angle_fit;
    HurstEstimate hurst;
  };
  std::vector<PerDrawing> rows;

  std::set<std::string> seen_ids;
  for (const DrawingSession& session : sessions) {
    if (!seen_ids.insert(session.session_id).second)
      throw ValidationError("duplicate session_id '" + session.session_id + "'");
    try {
      validate_session(session);
      PerDrawing row;
      row.id = session.session_id;
      row.labels = session.labels;

      StepSeries steps = session_steps(session, config.simplify, config.epsilon_px);
      StepModelFit fit = fit_mu_mle(steps);
      row.mu = fit.mu;
      row.distance = drawing_distance(session);
      row.angle_fit = angle_metric_fit(turning_angles(steps, config.cross_stroke_angles));
      row.mcp = convex_hull_coverage(session);

      BinarySeries bits = binary_series(session, config.dt_ms);
      row.gini = gini_binary(bits, config.unbiased_gini);
      row.entropy = entropy_cumsum(session);
      row.hurst = hurst_estimators(bits);

      TemporalSummary ts = temporal_summary(session);
      row.test_time = static_cast<double>(ts.test_time_ms);
      row.n_sequences = static_cast<double>(ts.n_sequences);
      row.speed = ts.speed_px_per_ms;
      row.proportion = ts.drawing_time_proportion;

      ColourSummary cs = colour_summary(session);
      row.mean_colour = cs.mean_profile;
      row.sd_colour = cs.sd_profile;
      row.n_colours = static_cast<double>(cs.n_colours);

      rows.push_back(std::move(row));
    } catch (const std::exception& e) {
      out.excluded.emplace_back(session.session_id, e.what());
    }
  }

  if (rows.empty())
    throw DegeneracyError("compute_metrics: no drawing produced a complete metric row");

  // Dataset-level metrics need at least 3 drawings; below that the columns
  // fall back and the report says so.
  std::vector<double> angle_scores(rows.size(), 0.0);
  if (rows.size() >= 3) {
    std::vector<AngleFit> fits;
    for (const auto& r : rows) fits.push_back(r.angle_fit);
    AngleScores scored = angle_metric_scores(fits);
    angle_scores = scored.scores;
    out.notes.push_back("angle_metric dimension-1 variance share: " +
                        fmt_g6(scored.dim1_variance_share));
  } else {
    for (std::size_t i = 0; i < rows.size(); ++i) angle_scores[i] = rows[i].angle_fit.c;
    out.notes.push_back(
        "angle_metric fallback: fewer than 3 drawings, using the linear coefficient");
  }

  std::vector<HurstEstimate> estimates;
  for (const auto& r : rows) estimates.push_back(r.hurst);
  HurstIndex hi = hurst_index(estimates);
  if (!hi.pca_used)
    out.notes.push_back("hurst_index fallback: fewer than 3 drawings, using estimator mean");

  MetricMatrix& m = out.matrix;
  m.col_names = metric_columns();
  m.values = Mat(rows.size(), m.col_names.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const PerDrawing& r = rows[i];
    m.row_ids.push_back(r.id);
    m.labels[r.id] = r.labels;
    double vals[14] = {r.mu,          r.distance, angle_scores[i], r.mcp,
                       hi.scores[i],  r.gini,     r.entropy,       r.test_time,
                       r.n_sequences, r.speed,    r.proportion,    r.mean_colour,
                       r.sd_colour,   r.n_colours};
    for (std::size_t j = 0; j < 14; ++j) m.values(i, j) = vals[j];
  }
  return out;
}

void ReportBundle::add(std::string name, std::string content) {
  files.emplace_back(std::move(name), std::move(content));
}

const std::string* ReportBundle::find(std::string_view name) const {
  for (const auto& [n, c] : files)
    if (n == name) return &c;
  return nullptr;
}

void ReportBundle::write_to(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  for (const auto& [name, content] : files) {
    std::filesystem::path path = dir / name;
    std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot write " + path.string());
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
  }
}

AnalysisResult run_analysis(const MetricMatrix& dataset, const PipelineConfig& config) {
  dataset.validate();
  AnalysisResult res;

  // Step 1: correlation screen over the full table.
  res.corr = pearson_matrix(dataset);

  // Step 2: the fixed removal of the proportion metric (exactly collinear
  // with the Gini column).
  MetricMatrix work = dataset;
  if (config.drop_time_proportion && work.col_index("time_proportion") >= 0)
    work = work.drop_columns({"time_proportion"});

  // Step 3: residuals against total test time; the covariate leaves the table.
  if (work.col_index("test_time") >= 0) {
    work = residualize(work, "test_time");
  } else {
    res.warnings.push_back("no test_time column; residualization skipped");
  }

  // Manual exclusions (the judgment-call list).
  std::vector<std::string> to_drop;
  for (const auto& name : config.exclude) {
    if (work.col_index(name) >= 0)
      to_drop.push_back(name);
    else
      res.warnings.push_back("exclusion '" + name + "' is not a column; ignored");
  }
  if (!to_drop.empty()) work = work.drop_columns(to_drop);
  res.residualized = work;

  // Steps 4-6: PCA, pruning with refit, dimension assignment.
  PcaOptions opts;
  opts.k = config.k_components;
  opts.kaiser_normalize = config.kaiser_normalize;
  res.initial = pca_varimax(work, opts);
  res.initial.retained = prune_loadings(res.initial, config.loading_threshold);
  res.initial.assignment = assign_dimensions(res.initial);

  MetricMatrix pruned = work.keep_columns(res.initial.retained);
  res.refit = pca_varimax(pruned, opts);
  res.refit.retained = res.initial.retained;
  res.assignment = assign_dimensions(res.refit, &res.warnings);
  res.refit.assignment = res.assignment;
  for (const auto& note : res.initial.notes) res.warnings.push_back(note);

  // ------------------------------------------------------------ artifacts
  ReportBundle& bundle = res.bundle;
  bundle.add("metrics.csv", metric_matrix_csv(dataset));
  bundle.add("corr.csv", matrix_csv(res.corr.names, res.corr.r));
  bundle.add("corr_p.csv", matrix_csv(res.corr.names, res.corr.p));
  bundle.add("loadings_step4.csv", loadings_csv(res.initial));
  bundle.add("scores_step4.csv", scores_csv(res.initial, work.row_ids));
  bundle.add("loadings_step5.csv", loadings_csv(res.refit));
  bundle.add("scores_step5.csv", scores_csv(res.refit, pruned.row_ids));

  json assignments;
  assignments["assignment"] = res.assignment;
  assignments["retained"] = res.refit.retained;
  json explained4 = json::array(), explained5 = json::array();
  double total4 = 0.0, total5 = 0.0;
  for (double e : res.initial.explained) {
    explained4.push_back(jnum(e));
    total4 += e;
  }
  for (double e : res.refit.explained) {
    explained5.push_back(jnum(e));
    total5 += e;
  }
  assignments["explained_step4"] = explained4;
  assignments["explained_step5"] = explained5;
  assignments["explained_total_step4"] = jnum(total4);
  assignments["explained_total_step5"] = jnum(total5);
  assignments["warnings"] = res.warnings;
  bundle.add("assignments.json", assignments.dump(2) + "\n");

  bundle.add("tests.json",
             group_tests_json(dataset, res.refit, pruned.row_ids, dataset.labels,
                              config.group_by, config)
                     .dump(2) +
                 "\n");

  json manifest;
  manifest["version"] = kInkmetricsVersion;
  manifest["seed"] = config.seed;
  manifest["config"] = config_to_json(config);
  manifest["input"] = {{"rows", dataset.n_rows()},
                       {"cols", dataset.n_cols()},
                       {"digest", hex64(fnv1a(metric_matrix_csv(dataset)))}};
  bundle.add("manifest.json", manifest.dump(2) + "\n");

  for (auto& [name, svg] : render_figures(res, dataset, config))
    bundle.add(name, std::move(svg));
  return res;
}

std::vector<std::pair<std::string, std::string>> render_figures(
    const AnalysisResult& result, const MetricMatrix& source, const PipelineConfig& config) {
  std::vector<std::pair<std::string, std::string>> figs;
  figs.emplace_back("fig_correlation.svg", figure_correlation(result.corr));

  std::vector<std::string> row_groups(source.row_ids.size(), "all");
  if (!config.group_by.empty()) {
    for (std::size_t i = 0; i < source.row_ids.size(); ++i) {
      auto row = source.labels.find(source.row_ids[i]);
      if (row == source.labels.end()) continue;
      auto tag = row->second.find(config.group_by);
      if (tag != row->second.end()) row_groups[i] = tag->second;
    }
  }

  const PcaModel& model = result.refit;
  for (int dx = 1; dx <= model.k; ++dx)
    for (int dy = dx + 1; dy <= model.k; ++dy)
      figs.emplace_back("fig_scores_dim" + std::to_string(dx) + "_dim" + std::to_string(dy) +
                            ".svg",
                        figure_scatter(model, row_groups, dx, dy));

  auto grouped = group_rows(source, config.group_by);
  for (int d = 1; d <= model.k; ++d) {
    auto col = model.scores.col(static_cast<std::size_t>(d - 1));
    std::vector<std::string> names;
    std::vector<std::vector<double>> samples;
    if (grouped.size() >= 2) {
      for (const auto& [name, idx] : grouped) {
        names.push_back(name);
        samples.push_back(gather(col, idx));
      }
    } else {
      names.push_back("all");
      samples.push_back(col);
    }
    std::vector<PairwiseTest> pairwise;
    if (samples.size() >= 2) pairwise = posthoc_pairwise(samples, config.posthoc);
    figs.emplace_back("fig_box_dim" + std::to_string(d) + ".svg",
                      figure_boxplot("Dimension " + std::to_string(d) + " by " +
                                         (config.group_by.empty() ? "all" : config.group_by),
                                     names, samples, pairwise));
  }
  return figs;
}

CompareResult run_compare(const MetricMatrix& a, const MetricMatrix& b,
                          const PipelineConfig& config) {
  CompareResult res;
  res.a = run_analysis(a, config);
  res.b = run_analysis(b, config);
  res.consensus = consensus_variables(res.a.refit, res.b.refit);

  PcaOptions opts;
  opts.k = config.k_components;
  opts.kaiser_normalize = config.kaiser_normalize;

  MetricMatrix consensus_a = res.a.residualized.keep_columns(res.consensus);
  MetricMatrix consensus_b = res.b.residualized.keep_columns(res.consensus);
  res.joint_a = pca_varimax(consensus_a, opts);
  res.joint_b = pca_varimax(consensus_b, opts);
  res.joint_a.assignment = assign_dimensions(res.joint_a);
  res.joint_b.assignment = assign_dimensions(res.joint_b);

  // Concatenate rows (dataset-tagged ids avoid collisions) and refit on the
  // shared variable set.
  MetricMatrix combined;
  combined.col_names = res.consensus;
  combined.values = Mat(consensus_a.n_rows() + consensus_b.n_rows(), res.consensus.size());
  auto append_rows = [&](const MetricMatrix& src, const std::string& tag, std::size_t offset) {
    for (std::size_t i = 0; i < src.n_rows(); ++i) {
      std::string id = tag + ":" + src.row_ids[i];
      combined.row_ids.push_back(id);
      auto lbl = src.labels.find(src.row_ids[i]);
      std::map<std::string, std::string> tags =
          lbl != src.labels.end() ? lbl->second : std::map<std::string, std::string>{};
      tags["dataset"] = tag;
      combined.labels[id] = std::move(tags);
      for (std::size_t j = 0; j < res.consensus.size(); ++j)
        combined.values(offset + i, j) = src.values(i, j);
    }
  };
  append_rows(consensus_a, "a", 0);
  append_rows(consensus_b, "b", consensus_a.n_rows());
  res.joint_combined = pca_varimax(combined, opts);
  res.joint_combined.assignment = assign_dimensions(res.joint_combined);

  // Pre/post score correlations per dimension (the generalization check).
  auto correlate = [&](const PcaModel& step1, const PcaModel& joint) {
    std::vector<DimensionCorrelation> out;
    std::vector<int> match = match_components(step1, joint);
    for (int d = 0; d < step1.k; ++d) {
      auto x = step1.scores.col(static_cast<std::size_t>(d));
      auto y = joint.scores.col(static_cast<std::size_t>(match[static_cast<std::size_t>(d)]));
      out.push_back(DimensionCorrelation{d + 1, pearson_test(x, y)});
    }
    return out;
  };
  res.score_corr_a = correlate(res.a.refit, res.joint_a);
  res.score_corr_b = correlate(res.b.refit, res.joint_b);

  // ------------------------------------------------------------ artifacts
  ReportBundle& bundle = res.bundle;
  for (const auto& [name, content] : res.a.bundle.files) bundle.add("a/" + name, content);
  for (const auto& [name, content] : res.b.bundle.files) bundle.add("b/" + name, content);

  json consensus;
  consensus["consensus"] = res.consensus;
  consensus["component_match_ab"] = match_components(res.a.refit, res.b.refit);
  json explained = json::object();
  auto explained_of = [&](const PcaModel& m) {
    json arr = json::array();
    double total = 0.0;
    for (double e : m.explained) {
      arr.push_back(jnum(e));
      total += e;
    }
    json j;
    j["per_dimension"] = arr;
    j["total"] = jnum(total);
    return j;
  };
  explained["joint_a"] = explained_of(res.joint_a);
  explained["joint_b"] = explained_of(res.joint_b);
  explained["joint_combined"] = explained_of(res.joint_combined);
  consensus["explained"] = explained;
  bundle.add("consensus.json", consensus.dump(2) + "\n");

  bundle.add("loadings_joint_a.csv", loadings_csv(res.joint_a));
  bundle.add("scores_joint_a.csv", scores_csv(res.joint_a, consensus_a.row_ids));
  bundle.add("loadings_joint_b.csv", loadings_csv(res.joint_b));
  bundle.add("scores_joint_b.csv", scores_csv(res.joint_b, consensus_b.row_ids));
  bundle.add("loadings_joint_combined.csv", loadings_csv(res.joint_combined));
  bundle.add("scores_joint_combined.csv", scores_csv(res.joint_combined, combined.row_ids));

  json score_corr;
  auto corr_json = [](const std::vector<DimensionCorrelation>& v) {
    json arr = json::array();
    for (const auto& dc : v) {
      json j;
      j["dimension"] = dc.dimension;
      j["test"] = test_to_json(dc.test);
      double r = dc.test.value;
      if (1.0 - r * r > 0.0)
        j["t"] = jnum(r * std::sqrt(dc.test.dof / (1.0 - r * r)));
      else
        j["t"] = nullptr;
      arr.push_back(std::move(j));
    }
    return arr;
  };
  score_corr["a"] = corr_json(res.score_corr_a);
  score_corr["b"] = corr_json(res.score_corr_b);
  bundle.add("score_correlations.json", score_corr.dump(2) + "\n");

  // Group contrasts on the combined table; the dataset tag is the fallback
  // grouping when none is configured.
  std::string group_key = config.group_by.empty() ? "dataset" : config.group_by;
  MetricMatrix combined_raw;
  combined_raw.col_names = res.consensus;
  combined_raw.values = Mat(a.n_rows() + b.n_rows(), res.consensus.size());
  combined_raw.labels = combined.labels;
  {
    MetricMatrix raw_a = a.keep_columns(res.consensus);
    MetricMatrix raw_b = b.keep_columns(res.consensus);
    for (std::size_t i = 0; i < raw_a.n_rows(); ++i) {
      combined_raw.row_ids.push_back("a:" + raw_a.row_ids[i]);
      for (std::size_t j = 0; j < res.consensus.size(); ++j)
        combined_raw.values(i, j) = raw_a.values(i, j);
    }
    for (std::size_t i = 0; i < raw_b.n_rows(); ++i) {
      combined_raw.row_ids.push_back("b:" + raw_b.row_ids[i]);
      for (std::size_t j = 0; j < res.consensus.size(); ++j)
        combined_raw.values(raw_a.n_rows() + i, j) = raw_b.values(i, j);
    }
  }
  PipelineConfig compare_config = config;
  compare_config.group_by = group_key;
  bundle.add("tests.json",
             group_tests_json(combined_raw, res.joint_combined, combined.row_ids,
                              combined.labels, group_key, compare_config)
                     .dump(2) +
                 "\n");

  json manifest;
  manifest["version"] = kInkmetricsVersion;
  manifest["seed"] = config.seed;
  manifest["config"] = config_to_json(compare_config);
  manifest["input_a"] = {{"rows", a.n_rows()},
                         {"cols", a.n_cols()},
                         {"digest", hex64(fnv1a(metric_matrix_csv(a)))}};
  manifest["input_b"] = {{"rows", b.n_rows()},
                         {"cols", b.n_cols()},
                         {"digest", hex64(fnv1a(metric_matrix_csv(b)))}};
  bundle.add("manifest.json", manifest.dump(2) + "\n");

  // Combined-score figures with the group contrast.
  std::vector<std::string> row_groups;
  for (const auto& id : combined.row_ids) {
    auto row = combined.labels.find(id);
    std::string g = "all";
    if (row != combined.labels.end()) {
      auto tag = row->second.find(group_key);
      if (tag != row->second.end()) g = tag->second;
    }
    row_groups.push_back(g);
  }
  for (int dx = 1; dx <= res.joint_combined.k; ++dx)
    for (int dy = dx + 1; dy <= res.joint_combined.k; ++dy)
      bundle.add("fig_scores_dim" + std::to_string(dx) + "_dim" + std::to_string(dy) + ".svg",
                 figure_scatter(res.joint_combined, row_groups, dx, dy));

  auto grouped = group_rows(combined_raw, group_key);
  for (int d = 1; d <= res.joint_combined.k; ++d) {
    auto col = res.joint_combined.scores.col(static_cast<std::size_t>(d - 1));
    std::vector<std::string> names;
    std::vector<std::vector<double>> samples;
    for (const auto& [name, idx] : grouped) {
      names.push_back(name);
      samples.push_back(gather(col, idx));
    }
    if (samples.empty()) {
      names.push_back("all");
      samples.push_back(col);
    }
    std::vector<PairwiseTest> pairwise;
    if (samples.size() >= 2) pairwise = posthoc_pairwise(samples, config.posthoc);
    bundle.add("fig_box_dim" + std::to_string(d) + ".svg",
               figure_boxplot("Dimension " + std::to_string(d) + " by " + group_key, names,
                              samples, pairwise));
  }
  return res;
}

std::string metric_matrix_csv(const MetricMatrix& matrix) {
  std::set<std::string> label_keys;
  for (const auto& [id, tags] : matrix.labels)
    for (const auto& [k, v] : tags) label_keys.insert(k);

  std::string out = "drawing_id";
  for (const auto& k : label_keys) out += ",label_" + detail::csv_escape(k);
  for (const auto& c : matrix.col_names) out += "," + detail::csv_escape(c);
  out += "\n";
  for (std::size_t i = 0; i < matrix.n_rows(); ++i) {
    out += detail::csv_escape(matrix.row_ids[i]);
    auto row = matrix.labels.find(matrix.row_ids[i]);
    for (const auto& k : label_keys) {
      out += ",";
      if (row != matrix.labels.end()) {
        auto tag = row->second.find(k);
        if (tag != row->second.end()) out += detail::csv_escape(tag->second);
      }
    }
    for (std::size_t j = 0; j < matrix.n_cols(); ++j)
      out += "," + fmt_g6(matrix.values(i, j));
    out += "\n";
  }
  return out;
}

MetricMatrix parse_metric_matrix_csv(std::string_view content) {
  auto lines = detail::split_lines(content);
  if (lines.empty()) throw ValidationError("empty metrics file");
  auto header = detail::split_csv_line(lines[0]);
  if (header.empty() || header[0] != "drawing_id")
    throw ValidationError("metrics file must start with a drawing_id column");

  std::vector<std::pair<std::size_t, std::string>> label_cols;
  std::vector<std::pair<std::size_t, std::string>> value_cols;
  for (std::size_t j = 1; j < header.size(); ++j) {
    if (header[j].rfind("label_", 0) == 0)
      label_cols.emplace_back(j, header[j].substr(6));
    else
      value_cols.emplace_back(j, header[j]);
  }
  if (value_cols.empty()) throw ValidationError("metrics file has no metric columns");

  MetricMatrix m;
  for (const auto& [idx, name] : value_cols) m.col_names.push_back(name);

  std::vector<std::vector<double>> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    auto fields = detail::split_csv_line(lines[i]);
    if (fields.size() != header.size())
      throw ValidationError("line " + std::to_string(i + 1) + ": expected " +
                            std::to_string(header.size()) + " fields, got " +
                            std::to_string(fields.size()));
    m.row_ids.push_back(fields[0]);
    std::map<std::string, std::string> tags;
    for (const auto& [idx, key] : label_cols)
      if (!fields[idx].empty()) tags[key] = fields[idx];
    if (!tags.empty()) m.labels[fields[0]] = std::move(tags);
    std::vector<double> row;
    for (const auto& [idx, name] : value_cols) {
      double v;
      if (!detail::parse_double(fields[idx], v))
        throw ValidationError("line " + std::to_string(i + 1) + ": bad value '" +
                              fields[idx] + "' in column " + name);
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  m.values = Mat(rows.size(), m.col_names.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < m.col_names.size(); ++j) m.values(i, j) = rows[i][j];
  return m;
}

std::vector<DrawingSession> load_sessions(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir))
    throw ValidationError("not a directory: " + dir.string());
  std::vector<std::filesystem::path> csvs, jsons;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    auto p = entry.path();
    if (p.extension() == ".csv") csvs.push_back(p);
    if (p.filename().string().ends_with(".session.json")) jsons.push_back(p);
  }
  std::sort(csvs.begin(), csvs.end());
  std::sort(jsons.begin(), jsons.end());

  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    if (!f) throw ValidationError("cannot read " + p.string());
    return std::string(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
  };

  std::vector<DrawingSession> out;
  for (const auto& csv : csvs) {
    std::filesystem::path sidecar = csv;
    sidecar.replace_extension(".json");
    if (!std::filesystem::exists(sidecar))
      throw ValidationError("missing metadata sidecar for " + csv.string());
    try {
      out.push_back(parse_session(slurp(csv), SessionFormat::csv, slurp(sidecar)));
    } catch (const ValidationError& e) {
      throw ValidationError(csv.string() + ": " + e.what());
    }
  }
  for (const auto& js : jsons) {
    try {
      out.push_back(parse_session(slurp(js), SessionFormat::json));
    } catch (const ValidationError& e) {
      throw ValidationError(js.string() + ": " + e.what());
    }
  }
  if (out.empty()) throw ValidationError("no sessions found under " + dir.string());
  return out;
}

void write_session_files(const DrawingSession& session, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto write = [&](const std::filesystem::path& p, const std::string& content) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw ValidationError("cannot write " + p.string());
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
  };
  write(dir / (session.session_id + ".csv"), serialize_session_csv(session));
  write(dir / (session.session_id + ".json"), serialize_sidecar_json(session));
}

std::vector<DrawingSession> ingest_recording_archive(const std::filesystem::path& dir) {
  throw ValidationError(
      "archive ingestion for " + dir.string() +
      " is not implemented: the archive's internal layout is undocumented; convert the "
      "recordings to <id>.csv plus <id>.json sidecars and load them as a directory");
}

}  // namespace ink
