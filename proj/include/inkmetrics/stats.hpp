#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "inkmetrics/detail/linalg.hpp"

namespace ink {

/// Drawings-by-metrics table with per-row group tags; the sole input of the
/// statistics engine. Columns must be non-constant: z-scoring a flat column
/// is undefined, so assembly rejects it by name.
struct MetricMatrix {
  std::vector<std::string> row_ids;
  std::vector<std::string> col_names;
  Mat values;  // row_ids.size() x col_names.size()
  std::map<std::string, std::map<std::string, std::string>> labels;

  std::size_t n_rows() const { return row_ids.size(); }
  std::size_t n_cols() const { return col_names.size(); }

  int col_index(const std::string& name) const;
  std::vector<double> column(const std::string& name) const;

  /// Shape and variance invariants; throws on the first violation.
  void validate() const;

  MetricMatrix drop_columns(const std::vector<std::string>& names) const;
  MetricMatrix keep_columns(const std::vector<std::string>& names) const;
};

struct CorrResult {
  std::vector<std::string> names;
  Mat r;
  Mat p;
};

/// Pairwise Pearson correlations with two-sided p-values from the t
/// transform on n-2 degrees of freedom.
CorrResult pearson_matrix(const MetricMatrix& x);

/// Pearson correlation of two samples as a test result (statistic "r",
/// dof n-2).
struct TestResult {
  std::string statistic;  // W, H, F, t, r
  double value = 0.0;
  double dof = 0.0;  // NaN when not applicable
  double p_value = 1.0;
};

TestResult pearson_test(std::span<const double> a, std::span<const double> b);

/// Replace every non-covariate column by its residuals against the
/// covariate (simple OLS); the covariate column is dropped from the output.
MetricMatrix residualize(const MetricMatrix& x, const std::string& covariate);

struct PcaOptions {
  int k = 3;
  bool rotate = true;             // apply Varimax
  bool kaiser_normalize = true;   // row-normalize during rotation
  double conv_tol = 1e-6;         // stop when the criterion gain drops below
  int max_sweeps = 1000;
};

/// Principal components of the column correlation matrix with an optional
/// Varimax rotation.
///
/// Loadings are eigenvectors scaled by the square root of their eigenvalue;
/// scores are the standardized data projected through the rotated structure
/// (zero mean, unit variance per component); explained variance shares are
/// column sums of squared rotated loadings over the variable count.
struct PcaModel {
  int k = 0;
  std::vector<std::string> variables;
  Mat loadings;  // variables x k
  Mat rotation;  // k x k orthogonal
  Mat scores;    // rows x k
  std::vector<double> explained;
  std::vector<std::string> retained;       // filled by the pruning pass
  std::map<std::string, int> assignment;   // variable -> 1-based component
  std::vector<std::string> notes;
};

PcaModel pca_varimax(const MetricMatrix& x, const PcaOptions& opts = {});

/// Varimax objective: summed variance of squared loadings per component.
double varimax_criterion(const Mat& loadings);

/// Variables whose largest absolute loading reaches the threshold. The
/// caller refits the PCA on the survivors.
std::vector<std::string> prune_loadings(const PcaModel& model, double threshold = 0.4);

/// Each variable goes to the component with its largest absolute loading;
/// exact ties fall to the lowest index and are reported through warnings.
std::map<std::string, int> assign_dimensions(const PcaModel& model,
                                             std::vector<std::string>* warnings = nullptr);

/// Align components of b to components of a by maximizing total absolute
/// cosine similarity of the loading columns over shared variables.
/// match[i] is the 0-based component of b paired with component i of a.
std::vector<int> match_components(const PcaModel& a, const PcaModel& b);

/// Variables assigned to the same (cosine-matched) dimension in both
/// models. Sign inversions of an axis do not break a match.
std::vector<std::string> consensus_variables(const PcaModel& a, const PcaModel& b);

/// Two-sample Mann-Whitney (Wilcoxon rank-sum). The statistic follows the
/// R convention: rank sum of the first sample minus its minimum. The
/// p-value is exact (full enumeration) for n1+n2 <= 12 without ties, else a
/// tie-corrected normal approximation with continuity correction.
TestResult mann_whitney(std::span<const double> a, std::span<const double> b);

TestResult kruskal_wallis(const std::vector<std::vector<double>>& groups);
TestResult anova_oneway(const std::vector<std::vector<double>>& groups);

enum class PosthocMethod { mann_whitney, welch_t };

struct PairwiseTest {
  std::size_t group_i = 0;
  std::size_t group_j = 0;
  TestResult test;
  double p_adjusted = 1.0;  // Holm
};

std::vector<PairwiseTest> posthoc_pairwise(const std::vector<std::vector<double>>& groups,
                                           PosthocMethod method);

/// Fixed CSV schema: variable,dim1..dimk,assigned_dim,retained.
std::string loadings_csv(const PcaModel& model);

/// Fixed CSV schema: drawing_id,dim1..dimk.
std::string scores_csv(const PcaModel& model, const std::vector<std::string>& row_ids);

}  // namespace ink
