#include "inkmetrics/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "inkmetrics/detail/linalg.hpp"
#include "inkmetrics/errors.hpp"

namespace ink {

StepModelFit fit_mu_mle(const StepSeries& series, double xmin) {
  const auto& steps = series.steps;
  int n = static_cast<int>(steps.size());
  if (n < 10)
    throw DegeneracyError("insufficient steps for a stable fit (" + std::to_string(n) +
                          " < 10)");

  double sum_log = 0.0;
  double sum_excess = 0.0;
  for (const Step& s : steps) {
    if (s.length_px < xmin)
      throw ValidationError("step length " + std::to_string(s.length_px) +
                            " below xmin; the truncated fit supports x >= xmin");
    sum_log += std::log(s.length_px / xmin);
    sum_excess += s.length_px - xmin;
  }
  if (sum_log <= 0.0 || sum_excess <= 0.0)
    throw DegeneracyError("degenerate step lengths: all at xmin");

  StepModelFit fit;
  fit.xmin = xmin;
  fit.n_steps = n;
  fit.mu = 1.0 + n / sum_log;
  fit.lambda = n / sum_excess;

  // Log-likelihoods of the truncated densities with support x >= xmin.
  fit.loglik_power = n * std::log(fit.mu - 1.0) - n * std::log(xmin) - fit.mu * sum_log;
  fit.loglik_exp = n * std::log(fit.lambda) - fit.lambda * sum_excess;

  // One free parameter each.
  fit.aic_power = 2.0 - 2.0 * fit.loglik_power;
  fit.aic_exp = 2.0 - 2.0 * fit.loglik_exp;

  double delta = fit.aic_power - fit.aic_exp;
  if (std::fabs(delta) < 2.0)
    fit.family = StepFamily::undecided;
  else
    fit.family = delta < 0.0 ? StepFamily::power : StepFamily::exponential;
  return fit;
}

double drawing_distance(const DrawingSession& session) {
  double total = 0.0;
  for (const Stroke& st : session.strokes) {
    for (std::size_t i = 1; i < st.points.size(); ++i) {
      const StrokePoint& a = st.points[i - 1];
      const StrokePoint& b = st.points[i];
      total += std::hypot(b.x_px - a.x_px, b.y_px - a.y_px);
    }
  }
  return total;
}

AngleFit angle_metric_fit(const TurningAngles& angles) {
  std::set<double> distinct(angles.angles_deg.begin(), angles.angles_deg.end());
  if (distinct.size() < 4)
    throw DegeneracyError("insufficient angles: " + std::to_string(distinct.size()) +
                          " distinct values, need 4");

  std::vector<double> sorted = angles.angles_deg;
  std::sort(sorted.begin(), sorted.end());
  double n = static_cast<double>(sorted.size());

  // Survival on the integer degree grid; basis matches the template
  // y = -a x^3 + b x^2 - c x + d with x normalized to [0, 1].
  Mat xtx(4, 4);
  std::vector<double> xty(4, 0.0);
  std::vector<double> ys(181);
  for (int theta = 0; theta <= 180; ++theta) {
    double x = theta / 180.0;
    double at_least =
        static_cast<double>(sorted.end() - std::lower_bound(sorted.begin(), sorted.end(),
                                                            static_cast<double>(theta)));
    double y = at_least / n;
    ys[theta] = y;
    double basis[4] = {-x * x * x, x * x, -x, 1.0};
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) xtx(r, c) += basis[r] * basis[c];
      xty[r] += basis[r] * y;
    }
  }
  std::vector<double> beta = solve_linear(xtx, xty);

  AngleFit fit;
  fit.a = beta[0];
  fit.b = beta[1];
  fit.c = beta[2];
  fit.d = beta[3];
  for (int theta = 0; theta <= 180; ++theta) {
    double x = theta / 180.0;
    double yhat = -fit.a * x * x * x + fit.b * x * x - fit.c * x + fit.d;
    double r = ys[theta] - yhat;
    fit.rss += r * r;
  }
  return fit;
}

AngleScores angle_metric_scores(const std::vector<AngleFit>& fits) {
  if (fits.size() < 3)
    throw DegeneracyError("angle_metric_scores needs at least 3 drawings, got " +
                          std::to_string(fits.size()));
  std::vector<std::vector<double>> cols(3);
  for (const AngleFit& f : fits) {
    cols[0].push_back(f.a);
    cols[1].push_back(f.b);
    cols[2].push_back(f.c);
  }
  detail::Dim1Result d1 = detail::principal_dim1(cols, 2);
  return AngleScores{std::move(d1.scores), d1.variance_share};
}

namespace {

struct Pt {
  double x, y;
  bool operator<(const Pt& o) const { return x < o.x || (x == o.x && y < o.y); }
  bool operator==(const Pt& o) const { return x == o.x && y == o.y; }
};

double cross(const Pt& o, const Pt& a, const Pt& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Andrew's monotone chain; collinear points are not kept on the hull.
std::vector<Pt> convex_hull(std::vector<Pt> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::size_t n = pts.size();
  if (n < 3) return pts;
  std::vector<Pt> hull(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  std::size_t lower = k + 1;
  for (std::size_t i = n - 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

}  // namespace

double convex_hull_coverage(const DrawingSession& session) {
  std::vector<Pt> pts;
  for (const Stroke& st : session.strokes)
    for (const StrokePoint& p : st.points) pts.push_back(Pt{p.x_px, p.y_px});
  std::vector<Pt> hull = convex_hull(std::move(pts));
  if (hull.size() < 3) return 0.0;

  double area2 = 0.0;  // shoelace, twice the signed area
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Pt& a = hull[i];
    const Pt& b = hull[(i + 1) % hull.size()];
    area2 += a.x * b.y - b.x * a.y;
  }
  double area = std::fabs(area2) / 2.0;
  double screen = static_cast<double>(session.screen_w) * session.screen_h;
  return 100.0 * area / screen;
}

}  // namespace ink
