#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "inkmetrics/colour.hpp"
#include "inkmetrics/errors.hpp"
#include "inkmetrics/pipeline.hpp"
#include "inkmetrics/spatial.hpp"
#include "inkmetrics/stats.hpp"
#include "inkmetrics/synth.hpp"
#include "inkmetrics/temporal.hpp"

namespace py = pybind11;
using namespace ink;

namespace {

std::vector<std::vector<double>> mat_to_lists(const Mat& m) {
  std::vector<std::vector<double>> out(m.rows(), std::vector<double>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
  return out;
}

MetricMatrix make_metric_matrix(
    const std::vector<std::string>& row_ids, const std::vector<std::string>& col_names,
    const std::vector<std::vector<double>>& values,
    const std::map<std::string, std::map<std::string, std::string>>& labels) {
  MetricMatrix m;
  m.row_ids = row_ids;
  m.col_names = col_names;
  m.labels = labels;
  m.values = Mat(row_ids.size(), col_names.size());
  if (values.size() != row_ids.size())
    throw ValidationError("values must have one row per row_id");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i].size() != col_names.size())
      throw ValidationError("values row " + std::to_string(i) + " has the wrong width");
    for (std::size_t j = 0; j < col_names.size(); ++j) m.values(i, j) = values[i][j];
  }
  return m;
}

}  // namespace

PYBIND11_MODULE(_inkmetrics, m) {
  m.doc() = "drawing metrics from stroke logs and the three-step PCA workflow";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<DegeneracyError>(m, "DegeneracyError", PyExc_ArithmeticError);

  // ---- domain model
  py::class_<StrokePoint>(m, "StrokePoint")
      .def(py::init<std::int64_t, double, double>(), py::arg("t_ms"), py::arg("x_px"),
           py::arg("y_px"))
      .def_readwrite("t_ms", &StrokePoint::t_ms)
      .def_readwrite("x_px", &StrokePoint::x_px)
      .def_readwrite("y_px", &StrokePoint::y_px);

  py::class_<Stroke>(m, "Stroke")
      .def(py::init<>())
      .def_readwrite("stroke_id", &Stroke::stroke_id)
      .def_readwrite("colour_id", &Stroke::colour_id)
      .def_readwrite("points", &Stroke::points)
      .def("first_ms", &Stroke::first_ms)
      .def("last_ms", &Stroke::last_ms)
      .def("duration_ms", &Stroke::duration_ms);

  py::class_<PaletteEntry>(m, "PaletteEntry")
      .def_readwrite("name", &PaletteEntry::name)
      .def_readwrite("rgb", &PaletteEntry::rgb);

  py::class_<Palette>(m, "Palette")
      .def(py::init<>())
      .def_readwrite("entries", &Palette::entries)
      .def_static("standard", &Palette::standard, py::return_value_policy::copy);

  py::class_<DrawingSession>(m, "DrawingSession")
      .def(py::init<>())
      .def_readwrite("session_id", &DrawingSession::session_id)
      .def_readwrite("labels", &DrawingSession::labels)
      .def_readwrite("screen_w", &DrawingSession::screen_w)
      .def_readwrite("screen_h", &DrawingSession::screen_h)
      .def_readwrite("palette", &DrawingSession::palette)
      .def_readwrite("strokes", &DrawingSession::strokes)
      .def("span_ms", &DrawingSession::span_ms)
      .def("total_points", &DrawingSession::total_points);

  py::enum_<SessionFormat>(m, "SessionFormat")
      .value("csv", SessionFormat::csv)
      .value("json", SessionFormat::json);

  m.def("parse_session", &parse_session, py::arg("content"), py::arg("format"),
        py::arg("sidecar_json") = std::string_view{});
  m.def("serialize_session_csv", &serialize_session_csv);
  m.def("serialize_sidecar_json", &serialize_sidecar_json);
  m.def("serialize_session_json", &serialize_session_json);
  m.def("validate_session", &validate_session);

  py::class_<BinarySeries>(m, "BinarySeries")
      .def(py::init<>())
      .def_readwrite("dt_ms", &BinarySeries::dt_ms)
      .def_readwrite("bits", &BinarySeries::bits);

  m.def("binary_series", &binary_series, py::arg("session"), py::arg("dt_ms"));

  py::enum_<SegmentKind>(m, "SegmentKind")
      .value("drawing", SegmentKind::drawing)
      .value("gap", SegmentKind::gap);

  py::class_<Segment>(m, "Segment")
      .def_readonly("kind", &Segment::kind)
      .def_readonly("duration_ms", &Segment::duration_ms);

  m.def("sequence_segments", &sequence_segments);

  // ---- segmentation
  py::enum_<SimplifyMethod>(m, "SimplifyMethod")
      .value("rdp", SimplifyMethod::rdp)
      .value("angle_threshold", SimplifyMethod::angle_threshold)
      .value("raw", SimplifyMethod::raw);

  m.def("select_keypoints", &select_keypoints, py::arg("stroke"), py::arg("method"),
        py::arg("epsilon_px"), py::arg("angle_threshold_deg") = 30.0);

  py::class_<Step>(m, "Step")
      .def_readonly("length_px", &Step::length_px)
      .def_readonly("heading_deg", &Step::heading_deg)
      .def_readonly("stroke_id", &Step::stroke_id);

  py::class_<StepSeries>(m, "StepSeries")
      .def(py::init<>())
      .def_readwrite("steps", &StepSeries::steps);

  m.def("session_steps", &session_steps, py::arg("session"), py::arg("method"),
        py::arg("epsilon_px"));

  py::class_<TurningAngles>(m, "TurningAngles")
      .def(py::init<>())
      .def_readwrite("angles_deg", &TurningAngles::angles_deg);

  m.def("turning_angles", &turning_angles, py::arg("series"),
        py::arg("across_strokes") = false);

  // ---- spatial metrics
  py::enum_<StepFamily>(m, "StepFamily")
      .value("power", StepFamily::power)
      .value("exponential", StepFamily::exponential)
      .value("undecided", StepFamily::undecided);

  py::class_<StepModelFit>(m, "StepModelFit")
      .def_readonly("family", &StepModelFit::family)
      .def_readonly("mu", &StepModelFit::mu)
      .def_readonly("lambda_", &StepModelFit::lambda)
      .def_readonly("xmin", &StepModelFit::xmin)
      .def_readonly("loglik_power", &StepModelFit::loglik_power)
      .def_readonly("loglik_exp", &StepModelFit::loglik_exp)
      .def_readonly("aic_power", &StepModelFit::aic_power)
      .def_readonly("aic_exp", &StepModelFit::aic_exp)
      .def_readonly("n_steps", &StepModelFit::n_steps);

  m.def("fit_mu_mle", &fit_mu_mle, py::arg("series"), py::arg("xmin") = kStepFilterPx);
  m.def("drawing_distance", &drawing_distance);

  py::class_<AngleFit>(m, "AngleFit")
      .def_readonly("a", &AngleFit::a)
      .def_readonly("b", &AngleFit::b)
      .def_readonly("c", &AngleFit::c)
      .def_readonly("d", &AngleFit::d)
      .def_readonly("rss", &AngleFit::rss);

  m.def("angle_metric_fit", &angle_metric_fit);

  py::class_<AngleScores>(m, "AngleScores")
      .def_readonly("scores", &AngleScores::scores)
      .def_readonly("dim1_variance_share", &AngleScores::dim1_variance_share);

  m.def("angle_metric_scores", &angle_metric_scores);
  m.def("convex_hull_coverage", &convex_hull_coverage);

  // ---- temporal metrics
  py::class_<TemporalSummary>(m, "TemporalSummary")
      .def_readonly("test_time_ms", &TemporalSummary::test_time_ms)
      .def_readonly("drawing_time_ms", &TemporalSummary::drawing_time_ms)
      .def_readonly("n_sequences", &TemporalSummary::n_sequences)
      .def_readonly("speed_px_per_ms", &TemporalSummary::speed_px_per_ms)
      .def_readonly("drawing_time_proportion", &TemporalSummary::drawing_time_proportion);

  m.def("temporal_summary", &temporal_summary);
  m.def("gini_binary", &gini_binary, py::arg("series"), py::arg("unbiased") = false);
  m.def("entropy_cumsum", &entropy_cumsum);

  py::class_<HurstEstimate>(m, "HurstEstimate")
      .def(py::init<>())
      .def_readwrite("h_dfa", &HurstEstimate::h_dfa)
      .def_readwrite("h_rs", &HurstEstimate::h_rs);

  m.def("hurst_estimators", &hurst_estimators);

  py::class_<HurstIndex>(m, "HurstIndex")
      .def_readonly("scores", &HurstIndex::scores)
      .def_readonly("pca_used", &HurstIndex::pca_used);

  m.def("hurst_index", &hurst_index);

  // ---- colour metrics
  py::class_<ColourSummary>(m, "ColourSummary")
      .def_readonly("n_colours", &ColourSummary::n_colours)
      .def_readonly("per_colour_length_px", &ColourSummary::per_colour_length_px)
      .def_readonly("mean_profile", &ColourSummary::mean_profile)
      .def_readonly("sd_profile", &ColourSummary::sd_profile)
      .def_readonly("channel_means", &ColourSummary::channel_means);

  m.def("colour_summary", &colour_summary);

  // ---- statistics engine
  py::class_<Mat>(m, "Mat")
      .def("rows", &Mat::rows)
      .def("cols", &Mat::cols)
      .def("at", [](const Mat& mat, std::size_t i, std::size_t j) { return mat(i, j); })
      .def("to_lists", &mat_to_lists);

  py::class_<MetricMatrix>(m, "MetricMatrix")
      .def(py::init(&make_metric_matrix), py::arg("row_ids"), py::arg("col_names"),
           py::arg("values"),
           py::arg("labels") = std::map<std::string, std::map<std::string, std::string>>{})
      .def_readonly("row_ids", &MetricMatrix::row_ids)
      .def_readonly("col_names", &MetricMatrix::col_names)
      .def_readonly("values", &MetricMatrix::values)
      .def_readonly("labels", &MetricMatrix::labels)
      .def("column", &MetricMatrix::column)
      .def("validate", &MetricMatrix::validate)
      .def("drop_columns", &MetricMatrix::drop_columns)
      .def("keep_columns", &MetricMatrix::keep_columns);

  py::class_<CorrResult>(m, "CorrResult")
      .def_readonly("names", &CorrResult::names)
      .def_readonly("r", &CorrResult::r)
      .def_readonly("p", &CorrResult::p);

  m.def("pearson_matrix", &pearson_matrix);

  py::class_<TestResult>(m, "TestResult")
      .def_readonly("statistic", &TestResult::statistic)
      .def_readonly("value", &TestResult::value)
      .def_readonly("dof", &TestResult::dof)
      .def_readonly("p_value", &TestResult::p_value);

  m.def("pearson_test", [](const std::vector<double>& a, const std::vector<double>& b) {
    return pearson_test(a, b);
  });
  m.def("residualize", &residualize, py::arg("matrix"), py::arg("covariate"));

  py::class_<PcaOptions>(m, "PcaOptions")
      .def(py::init<>())
      .def_readwrite("k", &PcaOptions::k)
      .def_readwrite("rotate", &PcaOptions::rotate)
      .def_readwrite("kaiser_normalize", &PcaOptions::kaiser_normalize)
      .def_readwrite("conv_tol", &PcaOptions::conv_tol)
      .def_readwrite("max_sweeps", &PcaOptions::max_sweeps);

  py::class_<PcaModel>(m, "PcaModel")
      .def_readonly("k", &PcaModel::k)
      .def_readonly("variables", &PcaModel::variables)
      .def_readonly("loadings", &PcaModel::loadings)
      .def_readonly("rotation", &PcaModel::rotation)
      .def_readonly("scores", &PcaModel::scores)
      .def_readonly("explained", &PcaModel::explained)
      .def_readonly("retained", &PcaModel::retained)
      .def_readonly("assignment", &PcaModel::assignment)
      .def_readonly("notes", &PcaModel::notes);

  m.def("pca_varimax", &pca_varimax, py::arg("matrix"), py::arg("options") = PcaOptions{});
  m.def("varimax_criterion", &varimax_criterion);
  m.def("prune_loadings", &prune_loadings, py::arg("model"), py::arg("threshold") = 0.4);
  m.def("assign_dimensions",
        [](const PcaModel& model) { return assign_dimensions(model); });
  m.def("match_components", &match_components);
  m.def("consensus_variables", &consensus_variables);

  m.def("mann_whitney", [](const std::vector<double>& a, const std::vector<double>& b) {
    return mann_whitney(a, b);
  });
  m.def("kruskal_wallis", &kruskal_wallis);
  m.def("anova_oneway", &anova_oneway);

  py::enum_<PosthocMethod>(m, "PosthocMethod")
      .value("mann_whitney", PosthocMethod::mann_whitney)
      .value("welch_t", PosthocMethod::welch_t);

  py::class_<PairwiseTest>(m, "PairwiseTest")
      .def_readonly("group_i", &PairwiseTest::group_i)
      .def_readonly("group_j", &PairwiseTest::group_j)
      .def_readonly("test", &PairwiseTest::test)
      .def_readonly("p_adjusted", &PairwiseTest::p_adjusted);

  m.def("posthoc_pairwise", &posthoc_pairwise);
  m.def("loadings_csv", &loadings_csv);
  m.def("scores_csv", &scores_csv);

  // ---- pipeline
  py::class_<PipelineConfig>(m, "PipelineConfig")
      .def(py::init<>())
      .def_readwrite("dt_ms", &PipelineConfig::dt_ms)
      .def_readwrite("simplify", &PipelineConfig::simplify)
      .def_readwrite("epsilon_px", &PipelineConfig::epsilon_px)
      .def_readwrite("loading_threshold", &PipelineConfig::loading_threshold)
      .def_readwrite("k_components", &PipelineConfig::k_components)
      .def_readwrite("unbiased_gini", &PipelineConfig::unbiased_gini)
      .def_readwrite("kaiser_normalize", &PipelineConfig::kaiser_normalize)
      .def_readwrite("posthoc", &PipelineConfig::posthoc)
      .def_readwrite("exclude", &PipelineConfig::exclude)
      .def_readwrite("drop_time_proportion", &PipelineConfig::drop_time_proportion)
      .def_readwrite("cross_stroke_angles", &PipelineConfig::cross_stroke_angles)
      .def_readwrite("group_by", &PipelineConfig::group_by)
      .def_readwrite("seed", &PipelineConfig::seed);

  py::class_<MetricComputation>(m, "MetricComputation")
      .def_readonly("matrix", &MetricComputation::matrix)
      .def_readonly("excluded", &MetricComputation::excluded)
      .def_readonly("notes", &MetricComputation::notes);

  m.def("compute_metrics", &compute_metrics, py::arg("sessions"), py::arg("config"));
  m.def("metric_columns", &metric_columns);

  py::class_<ReportBundle>(m, "ReportBundle")
      .def_readonly("files", &ReportBundle::files)
      .def("find",
           [](const ReportBundle& b, const std::string& name) -> py::object {
             const std::string* c = b.find(name);
             return c ? py::cast(*c) : py::none();
           })
      .def("write_to", &ReportBundle::write_to);

  py::class_<AnalysisResult>(m, "AnalysisResult")
      .def_readonly("corr", &AnalysisResult::corr)
      .def_readonly("residualized", &AnalysisResult::residualized)
      .def_readonly("initial", &AnalysisResult::initial)
      .def_readonly("refit", &AnalysisResult::refit)
      .def_readonly("assignment", &AnalysisResult::assignment)
      .def_readonly("warnings", &AnalysisResult::warnings)
      .def_readonly("bundle", &AnalysisResult::bundle);

  m.def("run_analysis", &run_analysis, py::arg("dataset"), py::arg("config"));

  py::class_<DimensionCorrelation>(m, "DimensionCorrelation")
      .def_readonly("dimension", &DimensionCorrelation::dimension)
      .def_readonly("test", &DimensionCorrelation::test);

  py::class_<CompareResult>(m, "CompareResult")
      .def_readonly("a", &CompareResult::a)
      .def_readonly("b", &CompareResult::b)
      .def_readonly("consensus", &CompareResult::consensus)
      .def_readonly("joint_a", &CompareResult::joint_a)
      .def_readonly("joint_b", &CompareResult::joint_b)
      .def_readonly("joint_combined", &CompareResult::joint_combined)
      .def_readonly("score_corr_a", &CompareResult::score_corr_a)
      .def_readonly("score_corr_b", &CompareResult::score_corr_b)
      .def_readonly("bundle", &CompareResult::bundle);

  m.def("run_compare", &run_compare, py::arg("a"), py::arg("b"), py::arg("config"));
  m.def("render_figures", &render_figures);
  m.def("metric_matrix_csv", &metric_matrix_csv);
  m.def("parse_metric_matrix_csv",
        [](const std::string& content) { return parse_metric_matrix_csv(content); });
  m.def("load_sessions", &load_sessions);
  m.def("write_session_files", &write_session_files);
  m.def("ingest_recording_archive", &ingest_recording_archive);

  // ---- synthetic generators
  m.def("gen_levy", &gen_levy, py::arg("mu"), py::arg("n_steps"), py::arg("seed"));
  m.def("gen_brownian", &gen_brownian, py::arg("step_sigma"), py::arg("n_steps"),
        py::arg("seed"));

  py::class_<ShapeStroke>(m, "ShapeStroke")
      .def(py::init<>())
      .def_readwrite("colour_id", &ShapeStroke::colour_id)
      .def_readwrite("vertices", &ShapeStroke::vertices);

  py::class_<ShapeSpec>(m, "ShapeSpec")
      .def(py::init<>())
      .def_readwrite("screen_w", &ShapeSpec::screen_w)
      .def_readwrite("screen_h", &ShapeSpec::screen_h)
      .def_readwrite("speed_px_per_ms", &ShapeSpec::speed_px_per_ms)
      .def_readwrite("gap_ms", &ShapeSpec::gap_ms)
      .def_readwrite("strokes", &ShapeSpec::strokes);

  m.def("gen_shape", &gen_shape, py::arg("spec"), py::arg("seed") = 0);
  m.def("gen_fgn", &gen_fgn, py::arg("hurst"), py::arg("n"), py::arg("seed"));
  m.def("gen_fgn_binary", &gen_fgn_binary, py::arg("hurst"), py::arg("n"), py::arg("seed"),
        py::arg("dt_ms") = 100);

  py::class_<PlantedSpec>(m, "PlantedSpec")
      .def(py::init<>())
      .def_readwrite("efficiency", &PlantedSpec::efficiency)
      .def_readwrite("diversity", &PlantedSpec::diversity)
      .def_readwrite("sequentiality", &PlantedSpec::sequentiality)
      .def_readwrite("n_steps", &PlantedSpec::n_steps)
      .def_readwrite("screen_w", &PlantedSpec::screen_w)
      .def_readwrite("screen_h", &PlantedSpec::screen_h)
      .def_readwrite("seed", &PlantedSpec::seed)
      .def_readwrite("session_id", &PlantedSpec::session_id);

  m.def("gen_planted", &gen_planted);
  m.def("gen_corpus", &gen_corpus, py::arg("count"), py::arg("seed"));

  m.attr("STEP_FILTER_PX") = kStepFilterPx;
  m.attr("__version__") = kInkmetricsVersion;
}
