#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "inkmetrics/model.hpp"
#include "inkmetrics/segment.hpp"
#include "inkmetrics/stats.hpp"

namespace ink {

inline constexpr const char* kInkmetricsVersion = "0.1.0";

/// The fourteen metric columns, in their fixed report order.
const std::vector<std::string>& metric_columns();

struct PipelineConfig {
  std::int64_t dt_ms = 100;
  SimplifyMethod simplify = SimplifyMethod::rdp;
  double epsilon_px = 10.0;
  double loading_threshold = 0.4;
  int k_components = 3;
  bool unbiased_gini = false;
  bool kaiser_normalize = true;
  PosthocMethod posthoc = PosthocMethod::mann_whitney;
  std::vector<std::string> exclude;  // manual variable exclusions before the PCA
  bool drop_time_proportion = true;  // the fixed r = -1 removal step
  bool cross_stroke_angles = false;
  std::string group_by;  // label key for group tests; compare defaults to the dataset tag
  std::uint64_t seed = 0;
};

/// Per-drawing metric extraction. Drawings that fail any metric are
/// excluded with a reason, never imputed.
struct MetricComputation {
  MetricMatrix matrix;
  std::vector<std::pair<std::string, std::string>> excluded;  // id, reason
  std::vector<std::string> notes;
};

MetricComputation compute_metrics(const std::vector<DrawingSession>& sessions,
                                  const PipelineConfig& config);

/// Named report artifacts in a fixed order. The manifest plus the inputs
/// reproduce the bundle byte for byte.
struct ReportBundle {
  std::vector<std::pair<std::string, std::string>> files;

  void add(std::string name, std::string content);
  const std::string* find(std::string_view name) const;
  void write_to(const std::filesystem::path& dir) const;
};

struct AnalysisResult {
  CorrResult corr;            // step 1, on the full metric table
  MetricMatrix residualized;  // step 3 output
  PcaModel initial;           // step 4
  PcaModel refit;             // step 5, after loading pruning
  std::map<std::string, int> assignment;  // step 6
  std::vector<std::string> warnings;
  ReportBundle bundle;
};

/// The three-step workflow on one dataset: correlations, the fixed
/// time-proportion removal, residualization against test time, Varimax PCA,
/// loading-based pruning with refit, dimension assignment. Emits every
/// artifact (CSVs, JSON, figures) into the bundle.
AnalysisResult run_analysis(const MetricMatrix& dataset, const PipelineConfig& config);

struct DimensionCorrelation {
  int dimension = 0;  // 1-based, in the per-dataset model's numbering
  TestResult test;    // statistic "r" with t-derived p
};

struct CompareResult {
  AnalysisResult a;
  AnalysisResult b;
  std::vector<std::string> consensus;
  PcaModel joint_a;
  PcaModel joint_b;
  PcaModel joint_combined;
  std::vector<DimensionCorrelation> score_corr_a;  // per-dataset model vs joint refit
  std::vector<DimensionCorrelation> score_corr_b;
  ReportBundle bundle;
};

/// Cross-dataset consensus: analyze both datasets, keep variables landing
/// on the same (cosine-matched) dimension, refit each dataset and their
/// concatenation on the consensus set, correlate pre/post scores, and test
/// group contrasts per dimension and per metric.
CompareResult run_compare(const MetricMatrix& a, const MetricMatrix& b,
                          const PipelineConfig& config);

/// Deterministic SVG figures for an analysis: correlation chart, dimension
/// scatter plots, per-group boxplots with significance stars.
std::vector<std::pair<std::string, std::string>> render_figures(
    const AnalysisResult& result, const MetricMatrix& source, const PipelineConfig& config);

/// metrics.csv round trip: drawing_id, label_* columns, then the metric
/// columns in report order.
std::string metric_matrix_csv(const MetricMatrix& matrix);
MetricMatrix parse_metric_matrix_csv(std::string_view content);

/// Load every session under dir: each <name>.csv pairs with a required
/// <name>.json sidecar; <name>.session.json files are self-contained.
std::vector<DrawingSession> load_sessions(const std::filesystem::path& dir);

/// Write <session_id>.csv plus its sidecar into dir.
void write_session_files(const DrawingSession& session, const std::filesystem::path& dir);

/// Adapter for the published archive; its internal layout is undocumented,
/// so this placeholder only reports how to convert data by hand.
std::vector<DrawingSession> ingest_recording_archive(const std::filesystem::path& dir);

}  // namespace ink
