#include <cmath>

#include "doctest.h"
#include "inkmetrics/errors.hpp"
#include "inkmetrics/segment.hpp"
#include "inkmetrics/spatial.hpp"
#include "inkmetrics/synth.hpp"

using namespace ink;

namespace {

StepSeries raw_steps(const DrawingSession& s) {
  std::vector<StrokeKeypoints> kp;
  for (const Stroke& st : s.strokes) kp.push_back(StrokeKeypoints{st.stroke_id, st.points});
  return extract_steps(kp);
}

// Wald-Wolfowitz runs test on a bit sequence, two-sided normal p.
double runs_test_p(const std::vector<std::uint8_t>& bits) {
  double n1 = 0.0, n2 = 0.0;
  for (auto b : bits) (b ? n1 : n2) += 1.0;
  double n = n1 + n2;
  double runs = 1.0;
  for (std::size_t i = 1; i < bits.size(); ++i)
    if (bits[i] != bits[i - 1]) runs += 1.0;
  double mean = 1.0 + 2.0 * n1 * n2 / n;
  double var = 2.0 * n1 * n2 * (2.0 * n1 * n2 - n) / (n * n * (n - 1.0));
  double z = (runs - mean) / std::sqrt(var);
  return std::erfc(std::fabs(z) / std::sqrt(2.0));
}

}  // namespace

TEST_CASE("generators are pure functions of the seed") {
  CHECK(serialize_session_csv(gen_levy(2.0, 500, 9)) ==
        serialize_session_csv(gen_levy(2.0, 500, 9)));
  CHECK(serialize_session_csv(gen_brownian(30.0, 500, 9)) ==
        serialize_session_csv(gen_brownian(30.0, 500, 9)));
  CHECK(serialize_session_csv(gen_corpus(3, 4)[2]) ==
        serialize_session_csv(gen_corpus(3, 4)[2]));
  auto a = gen_fgn(0.7, 1024, 3);
  auto b = gen_fgn(0.7, 1024, 3);
  CHECK(a == b);
}

TEST_CASE("generated sessions survive the parse round trip") {
  for (const DrawingSession& s :
       {gen_levy(2.0, 200, 1), gen_brownian(40.0, 200, 2), gen_corpus(1, 3)[0]}) {
    validate_session(s);
    DrawingSession back =
        parse_session(serialize_session_csv(s), SessionFormat::csv, serialize_sidecar_json(s));
    CHECK(serialize_session_csv(back) == serialize_session_csv(s));
  }
}

TEST_CASE("walks stay inside the screen") {
  for (const DrawingSession& s : {gen_levy(1.2, 2000, 5), gen_brownian(200.0, 2000, 6)}) {
    for (const Stroke& st : s.strokes) {
      for (const StrokePoint& p : st.points) {
        CHECK(p.x_px >= 0.0);
        CHECK(p.x_px <= s.screen_w);
        CHECK(p.y_px >= 0.0);
        CHECK(p.y_px <= s.screen_h);
      }
    }
  }
}

TEST_CASE("a near-one exponent still parses and fits") {
  DrawingSession s = gen_levy(1.01, 500, 11);
  validate_session(s);
  StepModelFit fit = fit_mu_mle(raw_steps(s));
  CHECK(fit.mu > 1.0);
}

TEST_CASE("small brownian steps are mostly filtered away") {
  DrawingSession s = gen_brownian(5.0, 400, 12);
  StepSeries steps = raw_steps(s);
  // Rayleigh(5): P(len > 10) = exp(-2) ~ 13.5%
  CHECK(steps.steps.size() < 100);
}

TEST_CASE("brownian walks prefer the exponential family across seeds") {
  int right = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    StepModelFit fit = fit_mu_mle(raw_steps(gen_brownian(50.0, 2000, 100 + seed)));
    if (fit.family == StepFamily::exponential && fit.aic_power - fit.aic_exp >= 2.0) ++right;
  }
  CHECK(right >= 18);
}

TEST_CASE("a square traced past its first corner turns four right angles") {
  ShapeSpec spec;
  spec.strokes.push_back(ShapeStroke{
      0, {{100, 100}, {300, 100}, {300, 300}, {100, 300}, {100, 100}, {300, 100}}});
  DrawingSession s = gen_shape(spec, 0);
  TurningAngles angles = turning_angles(raw_steps(s));
  REQUIRE(angles.angles_deg.size() == 4);
  for (double a : angles.angles_deg) CHECK(a == doctest::Approx(90.0));
}

TEST_CASE("a screen diagonal covers no area") {
  ShapeSpec spec;
  spec.strokes.push_back(ShapeStroke{0, {{0, 0}, {2048, 1536}}});
  CHECK(convex_hull_coverage(gen_shape(spec, 0)) == 0.0);
}

TEST_CASE("fgn binary needs a power-of-two length") {
  CHECK_THROWS_AS(gen_fgn_binary(0.7, 1000, 1), ValidationError);
  CHECK_THROWS_AS(gen_fgn_binary(0.7, 256, 1), ValidationError);
  CHECK_THROWS_AS(gen_fgn_binary(1.2, 1024, 1), ValidationError);
}

TEST_CASE("median thresholding balances the bits") {
  BinarySeries s = gen_fgn_binary(0.8, 2048, 21);
  std::size_t ones = 0;
  for (auto b : s.bits) ones += b;
  CHECK(ones == 1024);
}

TEST_CASE("H of one half is a fair coin by the runs test") {
  std::vector<double> ps;
  for (std::uint64_t seed = 0; seed < 11; ++seed)
    ps.push_back(runs_test_p(gen_fgn_binary(0.5, 4096, 300 + seed).bits));
  std::sort(ps.begin(), ps.end());
  CHECK(ps[5] > 0.01);  // median seed
}

TEST_CASE("lag-one autocovariance matches the analytic value") {
  for (double hurst : {0.6, 0.8}) {
    double h2 = 2.0 * hurst;
    double expect = 0.5 * (std::pow(2.0, h2) - 2.0);
    std::size_t n = 8192;
    auto x = gen_fgn(hurst, n, 77);
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(n);
    double cov = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) cov += (x[i] - mean) * (x[i + 1] - mean);
    cov /= static_cast<double>(n - 1);
    // Bartlett-style large-sample standard error
    double se = std::sqrt((1.0 + 2.0 * expect * expect) / static_cast<double>(n));
    CHECK(std::fabs(cov - expect) <= 3.0 * se);
  }
}

TEST_CASE("planted corpus sessions are valid and multi-stroke") {
  auto sessions = gen_corpus(5, 99);
  for (const auto& s : sessions) {
    validate_session(s);
    CHECK(s.strokes.size() >= 6);
    CHECK(s.span_ms() >= 25600);  // long enough for the 256-bit Hurst floor at dt=100
  }
}
