#pragma once

#include <vector>

#include "inkmetrics/model.hpp"
#include "inkmetrics/segment.hpp"

namespace ink {

enum class StepFamily { power, exponential, undecided };

/// Maximum-likelihood fit of the step-length distribution above xmin,
/// comparing a power-law tail against an exponential one by AIC.
struct StepModelFit {
  StepFamily family = StepFamily::undecided;
  double mu = 0.0;      // power exponent, > 1 when the power law is fitted
  double lambda = 0.0;  // exponential rate per px
  double xmin = 0.0;
  double loglik_power = 0.0;
  double loglik_exp = 0.0;
  double aic_power = 0.0;
  double aic_exp = 0.0;
  int n_steps = 0;
};

/// Power MLE mu = 1 + n / sum(ln(x/xmin)); exponential MLE
/// lambda = 1 / (mean(x) - xmin). The family is the lower-AIC model when the
/// AICs differ by at least 2, otherwise undecided.
StepModelFit fit_mu_mle(const StepSeries& series, double xmin = kStepFilterPx);

/// Total inked distance: Euclidean length of every within-stroke pair of
/// consecutive raw points. Pen-up travel is not ink and never counts.
double drawing_distance(const DrawingSession& session);

/// Cubic fit to the survival distribution of turning angles, using the
/// template y = -a x^3 + b x^2 - c x + d on x = angle/180.
struct AngleFit {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
  double rss = 0.0;
};

AngleFit angle_metric_fit(const TurningAngles& angles);

/// Dataset-level angle metric: first principal component of the (a, b, c)
/// coefficients across drawings, sign-aligned with c.
struct AngleScores {
  std::vector<double> scores;
  double dim1_variance_share = 0.0;
};

AngleScores angle_metric_scores(const std::vector<AngleFit>& fits);

/// Minimum convex polygon coverage: hull area of all raw points as a
/// percentage of the screen area. Degenerate point sets give 0.
double convex_hull_coverage(const DrawingSession& session);

}  // namespace ink
