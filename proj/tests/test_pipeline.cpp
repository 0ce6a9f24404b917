#include <cmath>
#include <set>

#include "doctest.h"
#include "inkmetrics/errors.hpp"
#include "inkmetrics/pipeline.hpp"
#include "inkmetrics/synth.hpp"
#include "test_helpers.hpp"

using namespace ink;
using ink::testing::make_session;

namespace {

MetricComputation corpus_metrics(int count, std::uint64_t seed) {
  PipelineConfig cfg;
  return compute_metrics(gen_corpus(count, seed), cfg);
}

}  // namespace

TEST_CASE("three drawings give a 3x14 matrix") {
  MetricComputation mc = corpus_metrics(3, 7);
  CHECK(mc.matrix.n_rows() == 3);
  CHECK(mc.matrix.n_cols() == 14);
  CHECK(mc.matrix.col_names == metric_columns());
  CHECK(mc.excluded.empty());
}

TEST_CASE("a drawing whose steps all filter out is excluded with a reason") {
  // 5 px moves never survive the step filter; the time base is long enough
  // that every other metric would have worked.
  std::vector<ink::testing::StrokeSpecT> strokes(1);
  for (int i = 0; i < 80; ++i)
    strokes[0].points.push_back(StrokePoint{i * 500, 100.0 + 5.0 * (i % 2), 100.0});
  DrawingSession tiny = make_session(strokes);
  tiny.session_id = "tiny";

  auto good = gen_corpus(3, 11);
  good.push_back(tiny);
  PipelineConfig cfg;
  MetricComputation mc = compute_metrics(good, cfg);
  CHECK(mc.matrix.n_rows() == 3);
  REQUIRE(mc.excluded.size() == 1);
  CHECK(mc.excluded[0].first == "tiny");
  CHECK(mc.excluded[0].second.find("insufficient steps") != std::string::npos);
  // excluded rows never appear downstream
  for (const auto& id : mc.matrix.row_ids) CHECK(id != "tiny");
  CHECK(metric_matrix_csv(mc.matrix).find("tiny") == std::string::npos);
}

TEST_CASE("column count stays at fourteen regardless of later pruning") {
  MetricComputation mc = corpus_metrics(12, 13);
  CHECK(mc.matrix.n_cols() == 14);
  AnalysisResult res = run_analysis(mc.matrix, PipelineConfig{});
  CHECK(mc.matrix.n_cols() == 14);
  CHECK(res.refit.variables.size() < 14);
}

TEST_CASE("duplicate session ids are rejected") {
  auto sessions = gen_corpus(2, 17);
  sessions[1].session_id = sessions[0].session_id;
  PipelineConfig cfg;
  CHECK_THROWS_AS(compute_metrics(sessions, cfg), ValidationError);
}

TEST_CASE("an all-constant column is rejected by name") {
  MetricComputation mc = corpus_metrics(8, 19);
  for (std::size_t i = 0; i < mc.matrix.n_rows(); ++i) mc.matrix.values(i, 3) = 42.0;
  CHECK_THROWS_WITH_AS(run_analysis(mc.matrix, PipelineConfig{}),
                       doctest::Contains("mcp_coverage"), DegeneracyError);
}

TEST_CASE("the workflow drops the proportion metric and the covariate") {
  MetricComputation mc = corpus_metrics(20, 23);
  AnalysisResult res = run_analysis(mc.matrix, PipelineConfig{});
  CHECK(res.residualized.col_index("time_proportion") == -1);
  CHECK(res.residualized.col_index("test_time") == -1);
  CHECK(res.residualized.n_cols() == 12);

  PipelineConfig keep;
  keep.drop_time_proportion = false;
  AnalysisResult res2 = run_analysis(mc.matrix, keep);
  CHECK(res2.residualized.col_index("time_proportion") >= 0);
}

TEST_CASE("manual exclusions leave the PCA input") {
  MetricComputation mc = corpus_metrics(20, 29);
  PipelineConfig cfg;
  cfg.exclude = {"sd_colour", "not_a_column"};
  AnalysisResult res = run_analysis(mc.matrix, cfg);
  CHECK(res.residualized.col_index("sd_colour") == -1);
  bool warned = false;
  for (const auto& w : res.warnings) warned |= w.find("not_a_column") != std::string::npos;
  CHECK(warned);
}

TEST_CASE("the refit never resurrects a pruned variable") {
  MetricComputation mc = corpus_metrics(40, 31);
  AnalysisResult res = run_analysis(mc.matrix, PipelineConfig{});
  std::set<std::string> retained(res.initial.retained.begin(), res.initial.retained.end());
  CHECK(res.refit.variables.size() == retained.size());
  for (const auto& v : res.refit.variables) CHECK(retained.count(v) == 1);
}

TEST_CASE("pruning weak variables raises the explained share") {
  MetricComputation mc = corpus_metrics(60, 37);
  AnalysisResult res = run_analysis(mc.matrix, PipelineConfig{});
  double t4 = 0.0, t5 = 0.0;
  for (double e : res.initial.explained) t4 += e;
  for (double e : res.refit.explained) t5 += e;
  CHECK(t5 >= t4);
}

TEST_CASE("reruns produce byte-identical bundles") {
  MetricComputation mc = corpus_metrics(15, 41);
  PipelineConfig cfg;
  cfg.group_by = "style";
  AnalysisResult a = run_analysis(mc.matrix, cfg);
  AnalysisResult b = run_analysis(mc.matrix, cfg);
  REQUIRE(a.bundle.files.size() == b.bundle.files.size());
  for (std::size_t i = 0; i < a.bundle.files.size(); ++i) {
    CHECK(a.bundle.files[i].first == b.bundle.files[i].first);
    CHECK(a.bundle.files[i].second == b.bundle.files[i].second);
  }
}

TEST_CASE("the bundle carries every artifact with sane shapes") {
  MetricComputation mc = corpus_metrics(15, 43);
  PipelineConfig cfg;
  cfg.group_by = "style";
  AnalysisResult res = run_analysis(mc.matrix, cfg);
  for (const char* name :
       {"metrics.csv", "corr.csv", "corr_p.csv", "loadings_step4.csv", "scores_step4.csv",
        "loadings_step5.csv", "scores_step5.csv", "assignments.json", "tests.json",
        "manifest.json", "fig_correlation.svg", "fig_scores_dim1_dim2.svg",
        "fig_scores_dim1_dim3.svg", "fig_scores_dim2_dim3.svg", "fig_box_dim1.svg"}) {
    const std::string* content = res.bundle.find(name);
    REQUIRE_MESSAGE(content != nullptr, name);
    CHECK_FALSE(content->empty());
  }
  const std::string* svg = res.bundle.find("fig_correlation.svg");
  CHECK(svg->rfind("<?xml", 0) == 0);
  CHECK(svg->find("</svg>") != std::string::npos);
  const std::string* tests = res.bundle.find("tests.json");
  CHECK(tests->find("kruskal_wallis") != std::string::npos);
  CHECK(tests->find("posthoc_note") != std::string::npos);
}

TEST_CASE("metrics csv round trips through the parser") {
  MetricComputation mc = corpus_metrics(6, 47);
  std::string csv = metric_matrix_csv(mc.matrix);
  MetricMatrix back = parse_metric_matrix_csv(csv);
  CHECK(back.row_ids == mc.matrix.row_ids);
  CHECK(back.col_names == mc.matrix.col_names);
  CHECK(back.labels == mc.matrix.labels);
  CHECK(metric_matrix_csv(back) == csv);
}

TEST_CASE("compare finds consensus between sibling corpora") {
  MetricComputation a = corpus_metrics(60, 51);
  MetricComputation b = corpus_metrics(60, 53);
  PipelineConfig cfg;
  CompareResult res = run_compare(a.matrix, b.matrix, cfg);

  CHECK(res.consensus.size() >= 5);
  for (const auto& name :
       {"consensus.json", "loadings_joint_combined.csv", "scores_joint_combined.csv",
        "score_correlations.json", "tests.json", "manifest.json", "a/metrics.csv",
        "b/loadings_step5.csv"}) {
    REQUIRE_MESSAGE(res.bundle.find(name) != nullptr, name);
  }

  // pre/post dimension scores stay strongly correlated per dataset
  for (const auto& dc : res.score_corr_a) CHECK(std::fabs(dc.test.value) > 0.8);
  for (const auto& dc : res.score_corr_b) CHECK(std::fabs(dc.test.value) > 0.8);

  // the default contrast groups by dataset tag and tests each dimension
  const std::string* tests = res.bundle.find("tests.json");
  CHECK(tests->find("dimension_1") != std::string::npos);
  CHECK(tests->find("mann_whitney") != std::string::npos);
}

TEST_CASE("comparing a dataset against itself is a perfect consensus") {
  MetricComputation mc = corpus_metrics(40, 59);
  CompareResult res = run_compare(mc.matrix, mc.matrix, PipelineConfig{});
  CHECK(res.consensus == res.a.refit.retained);
  for (const auto& dc : res.score_corr_a)
    CHECK(std::fabs(dc.test.value) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("session files round trip through a directory") {
  auto sessions = gen_corpus(3, 61);
  std::filesystem::path dir =
      std::filesystem::temp_directory_path() / "inkmetrics_test_sessions";
  std::filesystem::remove_all(dir);
  for (const auto& s : sessions) write_session_files(s, dir);
  auto back = load_sessions(dir);
  REQUIRE(back.size() == sessions.size());
  for (std::size_t i = 0; i < back.size(); ++i)
    CHECK(serialize_session_csv(back[i]) == serialize_session_csv(sessions[i]));
  std::filesystem::remove_all(dir);
}

TEST_CASE("the archive adapter reports its limits") {
  CHECK_THROWS_AS(ingest_recording_archive("/nonexistent"), ValidationError);
}
