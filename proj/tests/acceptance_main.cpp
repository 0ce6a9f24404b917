// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Everything here runs on generated data; no external inputs.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "inkmetrics/colour.hpp"
#include "inkmetrics/errors.hpp"
#include "inkmetrics/pipeline.hpp"
#include "inkmetrics/spatial.hpp"
#include "inkmetrics/stats.hpp"
#include "inkmetrics/synth.hpp"
#include "inkmetrics/temporal.hpp"

using namespace ink;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& what) {
  std::printf("[%s] criterion %2d: %s\n", pass ? "PASS" : "FAIL", criterion, what.c_str());
  if (!pass) ++g_failures;
}

void report_skip(int criterion, const std::string& what) {
  std::printf("[SKIP] criterion %2d: %s\n", criterion, what.c_str());
}

StepSeries raw_steps(const DrawingSession& s) {
  std::vector<StrokeKeypoints> kp;
  for (const Stroke& st : s.strokes) kp.push_back(StrokeKeypoints{st.stroke_id, st.points});
  return extract_steps(kp);
}

DrawingSession session_of(std::vector<std::vector<StrokePoint>> strokes, int w = 1000,
                          int h = 1000) {
  DrawingSession s;
  s.session_id = "fixture";
  s.screen_w = w;
  s.screen_h = h;
  int id = 0;
  for (auto& pts : strokes) {
    Stroke st;
    st.stroke_id = id++;
    st.points = std::move(pts);
    s.strokes.push_back(std::move(st));
  }
  return s;
}

// ---- criterion 1: mu recovery through the generator ------------------------

void check_mu_recovery() {
  int good = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    StepModelFit fit = fit_mu_mle(raw_steps(gen_levy(2.0, 5000, seed)));
    if (fit.mu >= 1.94 && fit.mu <= 2.06 && fit.family == StepFamily::power &&
        fit.aic_exp - fit.aic_power >= 2.0)
      ++good;
  }
  report(1, good >= 18,
         "mu recovery at mu=2.0, n=5000: " + std::to_string(good) + "/20 seeds in [1.94, 2.06]");
}

// ---- criterion 2: model discrimination on exponential steps ----------------

void check_model_discrimination() {
  int good = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(7000 + seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    StepSeries series;
    for (int i = 0; i < 1000; ++i)
      series.steps.push_back(Step{10.0 - std::log(1.0 - u(rng)) / 0.02, 0.0, 0});
    StepModelFit fit = fit_mu_mle(series);
    if (fit.family == StepFamily::exponential && fit.aic_power - fit.aic_exp >= 2.0) ++good;
  }
  report(2, good >= 18,
         "exponential steps select the exponential family: " + std::to_string(good) + "/20");
}

// ---- criterion 3: gini identity and the exact collinearity -----------------

void check_gini_identity() {
  std::mt19937_64 rng(31);
  bool identity_ok = true;
  std::vector<double> ginis, means;
  for (int trial = 0; trial < 1000; ++trial) {
    std::size_t n = 1 + rng() % 500;
    BinarySeries s;
    s.dt_ms = 100;
    bool any = false;
    for (std::size_t i = 0; i < n; ++i) {
      s.bits.push_back(static_cast<std::uint8_t>(rng() % 2));
      any |= s.bits.back() == 1;
    }
    if (!any) s.bits[rng() % n] = 1;
    double mean = 0.0;
    for (auto b : s.bits) mean += b;
    mean /= static_cast<double>(s.bits.size());
    double g = gini_binary(s);
    identity_ok &= std::fabs(g + mean - 1.0) < 1e-12;
    ginis.push_back(g);
    means.push_back(mean);
  }
  TestResult r = pearson_test(ginis, means);
  bool collinear = r.value <= -1.0 + 1e-12;
  report(3, identity_ok && collinear,
         "gini + bit-mean = 1 on 1000 fuzzed series (pearson r = " +
             std::to_string(r.value) + ")");
}

// ---- criterion 4: entropy bounds --------------------------------------------

void check_entropy() {
  DrawingSession continuous = session_of({{{0, 1, 1}, {8000, 5, 5}}});
  bool exact3 = std::fabs(entropy_cumsum(continuous) - 3.0) < 1e-12;

  DrawingSession idle = session_of({{{0, 1, 1}}, {{10000, 5, 5}}});
  bool zero = entropy_cumsum(idle) == 0.0;

  bool bounded = true;
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::vector<StrokePoint>> strokes;
    std::int64_t t = 0;
    int n = 1 + static_cast<int>(rng() % 6);
    for (int k = 0; k < n; ++k) {
      std::int64_t start = t;
      t += 200 + static_cast<std::int64_t>(rng() % 4000);
      strokes.push_back({{start, 5.0, 5.0}, {t, 8.0, 8.0}});
      t += static_cast<std::int64_t>(rng() % 3000);
    }
    DrawingSession s = session_of(std::move(strokes));
    if (s.span_ms() < 1000) continue;
    double h = entropy_cumsum(s);
    double cap = std::log2(static_cast<double>(s.span_ms() / 1000));
    bounded &= h <= cap + 1e-12;
  }
  report(4, exact3 && zero && bounded,
         "entropy: 8 s of ink = 3 bits, idle = 0, fuzz respects log2(T)");
}

// ---- criterion 5: hurst recovery ---------------------------------------------

void check_hurst_recovery() {
  auto median_h = [](double hurst) {
    std::vector<double> hs;
    for (std::uint64_t seed = 0; seed < 20; ++seed)
      hs.push_back(hurst_estimators(gen_fgn_binary(hurst, 4096, seed)).h_dfa);
    std::sort(hs.begin(), hs.end());
    return (hs[9] + hs[10]) / 2.0;
  };
  double m05 = median_h(0.5);
  double m08 = median_h(0.8);
  bool ok = std::fabs(m05 - 0.5) <= 0.07 && std::fabs(m08 - 0.8) <= 0.10;
  char buf[128];
  std::snprintf(buf, sizeof(buf),
                "hurst medians over 20 seeds: H=0.5 -> %.3f, H=0.8 -> %.3f", m05, m08);
  report(5, ok, buf);
}

// ---- criterion 6: varimax correctness ----------------------------------------

Mat normalized_rows(const Mat& m) {
  Mat out = m;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double h = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) h += m(i, j) * m(i, j);
    h = std::sqrt(h);
    if (h > 0.0)
      for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j) / h;
  }
  return out;
}

void check_varimax() {
  std::mt19937_64 rng(71);
  std::normal_distribution<double> g(0.0, 1.0);
  MetricMatrix m;
  m.col_names = {"x1", "x2", "y1", "y2"};
  m.values = Mat(48, 4);
  for (std::size_t i = 0; i < 48; ++i) {
    m.row_ids.push_back("r" + std::to_string(i));
    double x = g(rng);
    double y = g(rng);
    m.values(i, 0) = x;
    m.values(i, 1) = 2.0 * x;
    m.values(i, 2) = y;
    m.values(i, 3) = -3.0 * y;
  }
  PcaOptions opts;
  opts.k = 2;
  PcaModel model = pca_varimax(m, opts);
  auto assignment = assign_dimensions(model);

  bool structure = assignment.at("x1") == assignment.at("x2") &&
                   assignment.at("y1") == assignment.at("y2") &&
                   assignment.at("x1") != assignment.at("y1");
  for (std::size_t i = 0; i < 4; ++i) {
    double hi = std::max(std::fabs(model.loadings(i, 0)), std::fabs(model.loadings(i, 1)));
    structure &= hi >= 0.9;
  }

  Mat rtr = model.rotation.transposed() * model.rotation;
  bool orthogonal = true;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      orthogonal &= std::fabs(rtr(i, j) - (i == j ? 1.0 : 0.0)) <= 1e-8;

  PcaOptions unrot = opts;
  unrot.rotate = false;
  PcaModel raw = pca_varimax(m, unrot);
  bool communal = true;
  for (std::size_t i = 0; i < 4; ++i) {
    double a = model.loadings(i, 0) * model.loadings(i, 0) +
               model.loadings(i, 1) * model.loadings(i, 1);
    double b = raw.loadings(i, 0) * raw.loadings(i, 0) +
               raw.loadings(i, 1) * raw.loadings(i, 1);
    communal &= std::fabs(a - b) <= 1e-8;
  }

  // exhaustive rotation-angle grid search on the normalized plane
  Mat base = normalized_rows(raw.loadings);
  double best = -1.0;
  for (int step = 0; step < 180000; ++step) {
    double phi = step * (3.14159265358979323846 / 2.0) / 180000.0;
    double c = std::cos(phi), s = std::sin(phi);
    Mat rot = base;
    for (std::size_t i = 0; i < 4; ++i) {
      rot(i, 0) = c * base(i, 0) + s * base(i, 1);
      rot(i, 1) = -s * base(i, 0) + c * base(i, 1);
    }
    best = std::max(best, varimax_criterion(rot));
  }
  double ours = varimax_criterion(normalized_rows(model.loadings));
  bool agrees = std::fabs(ours - best) <= 1e-4;

  report(6, structure && orthogonal && communal && agrees,
         "varimax recovers the planted blocks; criterion matches the grid oracle");
}

// ---- criterion 7: PCA against a brute-force eigen oracle ---------------------

void check_pca_oracle() {
  std::vector<std::vector<double>> rows = {
      {2.1, -1.3, 0.5, 3.2},  {0.4, 0.9, -0.7, 1.1},  {-1.5, 2.2, 1.9, -0.3},
      {3.3, -0.8, 0.2, 2.7},  {-2.2, 1.5, -1.1, 0.6}, {0.9, -2.6, 2.4, -1.8}};
  MetricMatrix m;
  m.col_names = {"c1", "c2", "c3", "c4"};
  m.values = Mat(6, 4);
  for (std::size_t i = 0; i < 6; ++i) {
    m.row_ids.push_back("r" + std::to_string(i));
    for (std::size_t j = 0; j < 4; ++j) m.values(i, j) = rows[i][j];
  }
  PcaOptions opts;
  opts.k = 2;
  opts.rotate = false;
  PcaModel model = pca_varimax(m, opts);

  std::size_t n = 6, p = 4;
  std::vector<double> mean(p, 0.0), sd(p, 0.0);
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t i = 0; i < n; ++i) mean[j] += rows[i][j];
    mean[j] /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i)
      sd[j] += (rows[i][j] - mean[j]) * (rows[i][j] - mean[j]);
    sd[j] = std::sqrt(sd[j] / static_cast<double>(n - 1));
  }
  std::vector<std::vector<double>> corr(p, std::vector<double>(p, 0.0));
  for (std::size_t a = 0; a < p; ++a)
    for (std::size_t b = 0; b < p; ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        s += (rows[i][a] - mean[a]) / sd[a] * (rows[i][b] - mean[b]) / sd[b];
      corr[a][b] = s / static_cast<double>(n - 1);
    }

  bool ok = true;
  std::vector<std::vector<double>> work = corr;
  for (int comp = 0; comp < 2; ++comp) {
    std::vector<double> v(p, 0.5);
    for (int iter = 0; iter < 500000; ++iter) {
      std::vector<double> w(p, 0.0);
      for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j) w[i] += work[i][j] * v[j];
      double norm = 0.0;
      for (double x : w) norm += x * x;
      norm = std::sqrt(norm);
      for (auto& x : w) x /= norm;
      double delta = 0.0;
      for (std::size_t i = 0; i < p; ++i) delta = std::max(delta, std::fabs(w[i] - v[i]));
      v = w;
      if (delta < 1e-15 && iter > 100) break;
    }
    double lambda = 0.0;
    for (std::size_t i = 0; i < p; ++i) {
      double av = 0.0;
      for (std::size_t j = 0; j < p; ++j) av += work[i][j] * v[j];
      lambda += v[i] * av;
    }
    auto uc = static_cast<std::size_t>(comp);
    double scale = std::sqrt(lambda);
    double dot = 0.0;
    for (std::size_t i = 0; i < p; ++i) dot += v[i] * model.loadings(i, uc);
    double sign = dot < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < p; ++i)
      ok &= std::fabs(sign * v[i] * scale - model.loadings(i, uc)) <= 1e-9;
    for (std::size_t i = 0; i < n; ++i) {
      double z_dot = 0.0;
      for (std::size_t j = 0; j < p; ++j) z_dot += (rows[i][j] - mean[j]) / sd[j] * v[j];
      ok &= std::fabs(sign * z_dot / scale - model.scores(i, uc)) <= 1e-9;
    }
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < p; ++j) work[i][j] -= lambda * v[i] * v[j];
  }
  report(7, ok, "fixed 6x4 PCA matches the brute-force eigen oracle within 1e-9");
}

// ---- criterion 8: mann-whitney exactness --------------------------------------

void check_mann_whitney() {
  std::vector<double> a = {1, 2, 3};
  std::vector<double> b = {4, 5, 6};
  TestResult t = mann_whitney(a, b);
  bool exact = t.value == 0.0 && std::fabs(t.p_value - 0.1) < 1e-12;

  bool symmetric = true;
  std::mt19937_64 rng(141);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> x(1 + rng() % 9), y(1 + rng() % 9);
    if (x.size() + y.size() < 3) continue;
    for (auto& v : x) v = u(rng);
    for (auto& v : y) v = rng() % 5 == 0 ? x[0] : u(rng);
    symmetric &= std::fabs(mann_whitney(x, y).p_value - mann_whitney(y, x).p_value) < 1e-12;
  }
  report(8, exact && symmetric, "exact W=0, p=0.1 on {1,2,3} vs {4,5,6}; p symmetric");
}

// ---- criterion 9: geometry -----------------------------------------------------

void check_geometry() {
  DrawingSession corners =
      session_of({{{0, 0, 0}, {1, 1000, 0}, {2, 1000, 1000}, {3, 0, 1000}}});
  bool full = std::fabs(convex_hull_coverage(corners) - 100.0) <= 1e-9;

  DrawingSession line = session_of({{{0, 0, 0}, {1, 500, 500}, {2, 1000, 1000}}});
  bool zero = convex_hull_coverage(line) == 0.0;

  DrawingSession triangle = session_of({{{0, 0, 0}, {1, 3, 4}}});
  bool five = drawing_distance(triangle) == 5.0;

  report(9, full && zero && five, "hull 100/0 on corners/line; 3-4-5 distance is exactly 5");
}

// ---- criteria 10 and 11: the published-corpus scale ----------------------------

PipelineConfig corpus_config() {
  PipelineConfig cfg;
  cfg.group_by = "style";
  cfg.seed = 2026;
  return cfg;
}

void check_determinism() {
  auto t0 = std::chrono::steady_clock::now();
  auto run_once = [] {
    auto sessions = gen_corpus(345, 2026);
    PipelineConfig cfg = corpus_config();
    MetricComputation mc = compute_metrics(sessions, cfg);
    return run_analysis(mc.matrix, cfg);
  };
  AnalysisResult a = run_once();
  AnalysisResult b = run_once();
  auto t1 = std::chrono::steady_clock::now();
  double secs = std::chrono::duration<double>(t1 - t0).count();

  bool identical = a.bundle.files.size() == b.bundle.files.size();
  if (identical) {
    for (std::size_t i = 0; i < a.bundle.files.size(); ++i)
      identical &= a.bundle.files[i] == b.bundle.files[i];
  }
  bool fast = secs < 60.0;
  char buf[128];
  std::snprintf(buf, sizeof(buf),
                "two 345-drawing pipeline runs byte-identical; %.1f s for both", secs);
  report(10, identical && fast, buf);
}

void check_pipeline_shape() {
  auto sessions = gen_corpus(345, 2026);
  PipelineConfig cfg = corpus_config();
  MetricComputation mc = compute_metrics(sessions, cfg);
  AnalysisResult res = run_analysis(mc.matrix, cfg);

  bool three = res.refit.k == 3 && res.refit.explained.size() == 3;
  std::set<std::string> retained(res.refit.retained.begin(), res.refit.retained.end());
  const char* needed[] = {"mu_mle",    "speed",       "drawing_distance", "mean_colour",
                          "n_colours", "hurst_index", "n_sequences"};
  bool have_all = true;
  for (const char* v : needed) have_all &= retained.count(v) == 1;

  bool grouped = false;
  if (have_all) {
    const auto& asg = res.assignment;
    int eff = asg.at("mu_mle");
    int div = asg.at("mean_colour");
    int seq = asg.at("hurst_index");
    grouped = asg.at("speed") == eff && asg.at("drawing_distance") == eff &&
              asg.at("n_colours") == div && asg.at("n_sequences") == seq && eff != div &&
              div != seq && eff != seq;
  }
  report(11, three && have_all && grouped,
         "three components; mu/speed/distance, colours, hurst/n_sequences group together");
}

}  // namespace

int main() {
  std::printf("acceptance suite (synthetic data only)\n");
  check_mu_recovery();
  check_model_discrimination();
  check_gini_identity();
  check_entropy();
  check_hurst_recovery();
  check_varimax();
  check_pca_oracle();
  check_mann_whitney();
  check_geometry();
  check_determinism();
  check_pipeline_shape();
  report_skip(12, "dataset#1 explained-variance targets need the published archive adapter");
  report_skip(13, "cross-dataset consensus targets need the published archive adapter");
  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all mandatory criteria passed\n");
  return 0;
}
